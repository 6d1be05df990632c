// Acceptance gate: nine numbered end-to-end checks with pinned tolerances.
// Each check prints exactly one PASS/FAIL line; the process exits nonzero if
// any check fails. Checks 1-8 compute values twice (and the Monte Carlo paths
// with worker counts 1 and 4); check 9 asserts the transcripts are
// byte-identical.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "shiftmix/shiftmix.hpp"

using namespace shiftmix;

namespace {

// ---------------------------------------------------------------------------
// Pinned tolerances and model constants.
// ---------------------------------------------------------------------------
constexpr double kConstantCodiffTol = 1e-12; // check 1 equality tolerance
constexpr double kDominationSlack = 1.0 + 1e-9; // pure-roundoff allowance
constexpr double kPinRel = 1e-10;             // closed-form bound pin (check 4)
constexpr double kInvarianceRel = 1e-10;      // check 5
constexpr double kQuadratureRel = 1e-8;       // check 6
constexpr double kFitR2Orbit = 0.98;          // check 3
constexpr double kFitR2Series = 0.95;         // check 8
constexpr std::uint64_t kMcSeed = 424242;     // base seed; +1 on permitted rerun

// Geometric-rate ceiling shared by checks 3 and 8: the two-sided shift model
// with eta_minus = eta_plus = 1/2, alpha = 1.5, p = 1.6 has per-step envelope
// max(eta_minus^(2 alpha/p - 1), eta_plus)^(alpha/2); 0.02 is fit headroom.
inline double rate_ceiling() {
    const double alpha = 1.5, p = 1.6, eta = 0.5;
    const double base = std::max(std::pow(eta, 2.0 * alpha / p - 1.0), eta);
    return std::pow(base, alpha / 2.0) + 0.02;
}

// ---------------------------------------------------------------------------
// Harness plumbing.
// ---------------------------------------------------------------------------
struct Transcript {
    std::vector<std::string> cells;
    void add(double v) { cells.push_back(format_cell(v)); }
    void add(complexd v) {
        add(v.real());
        add(v.imag());
    }
    void append(const Transcript& other) {
        cells.insert(cells.end(), other.cells.begin(), other.cells.end());
    }
};

struct Check {
    std::string label;
    bool pass = true;
    double seconds = 0.0;
    std::string note;

    void require(bool ok, const std::string& why) {
        if (ok) return;
        pass = false;
        note_add(why);
    }
    void note_add(const std::string& extra) {
        if (!note.empty()) note += "; ";
        note += extra;
    }
};

template <typename Body>
Check run_check(const std::string& label, double limit_seconds, bool enforce_limit,
                Body&& body) {
    Check check;
    check.label = label;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(check);
    } catch (const std::exception& e) {
        check.require(false, std::string("unexpected exception: ") + e.what());
    }
    check.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (enforce_limit && limit_seconds > 0.0 && check.seconds >= limit_seconds) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "runtime %.2f s exceeded the %.0f s limit",
                      check.seconds, limit_seconds);
        check.require(false, buf);
    }
    return check;
}

// Random functional with sup norm 1 (complex coefficients, bounded support).
Functional sup_normalized(oracle::TestRand& rnd, Domain domain, std::int64_t lo,
                          std::int64_t hi) {
    for (;;) {
        std::map<std::int64_t, complexd> entries;
        const std::int64_t count = rnd.index(3, 8);
        for (std::int64_t i = 0; i < count; ++i) {
            entries[rnd.index(lo, hi)] += complexd{rnd.symmetric(), rnd.symmetric()};
        }
        double max_mod = 0.0;
        for (const auto& [index, value] : entries) {
            max_mod = std::max(max_mod, std::abs(value));
        }
        if (max_mod < 1e-3) continue;
        Functional f(domain);
        for (const auto& [index, value] : entries) {
            const complexd scaled = value / max_mod;
            if (scaled != complexd{0.0, 0.0}) f.add(index, scaled);
        }
        return f;
    }
}

// Random finitely supported functional (unnormalized) for invariance probes.
Functional random_probe(oracle::TestRand& rnd, Domain domain, std::int64_t lo,
                        std::int64_t hi) {
    Functional f(domain);
    const std::int64_t count = rnd.index(1, 6);
    for (std::int64_t i = 0; i < count; ++i) {
        const complexd value{1.5 * rnd.symmetric(), 1.5 * rnd.symmetric()};
        if (value != complexd{0.0, 0.0}) f.add(rnd.index(lo, hi), value);
    }
    if (f.coeffs().empty()) f.add(lo, complexd{0.5, 0.0});
    return f;
}

// The three invariant (measure, operator) model pairs used by checks 5 and 7.
MeasureSpec poisson_model() {
    return MeasureSpec::compound_poisson(SeqSpec::power_law(1.0, 1.5, 1.0), 1.0);
}
WeightedShiftOperator poisson_shift() {
    return WeightedShiftOperator(Direction::BackwardOnN, WeightRule::power_ratio(1.5, 1.0));
}
MeasureSpec stable_model() {
    return MeasureSpec::symmetric_alpha_stable(
        1.5, SeqSpec::from_weights(1.0, WeightRule::two_sided({}, 2.0, 0.5)), 1.6);
}
WeightedShiftOperator stable_shift() {
    return WeightedShiftOperator(Direction::ForwardOnZ, WeightRule::two_sided({}, 2.0, 0.5));
}
MeasureSpec tempered_model() {
    return MeasureSpec::tempered_stable(0.5, 1.0, 1.0, 1.0, 1.0,
                                        SeqSpec::geometric(1.0, 0.5), 1.0);
}
WeightedShiftOperator tempered_shift() {
    return WeightedShiftOperator(Direction::BackwardOnN, WeightRule::constant(2.0));
}

// ---------------------------------------------------------------------------
// Check 1: single lattice atom, identity dynamics. The scaled codifference is
// the constant 4 + 0i along the whole orbit and the verdict is not-mixing.
// ---------------------------------------------------------------------------
void criterion1(Check& c, Transcript& t) {
    const MeasureSpec m = MeasureSpec::compound_poisson(
        SeqSpec::explicit_values({2.0 * oracle::kPi}, 0.0), 1.0);
    const WeightedShiftOperator T = WeightedShiftOperator::identity(Domain::N);
    const Functional x(Domain::N, {{0, {1.0, 0.0}}});
    const complexd a{0.5, 0.0};
    for (std::int64_t n = 0; n <= 100; ++n) {
        const Functional shifted = T.adjoint_power(n, x);
        const complexd value = codiff_equal(m, a * x, a * shifted).value;
        t.add(value);
        if (std::abs(value - complexd{4.0, 0.0}) >= kConstantCodiffTol) {
            c.require(false, "codifference deviates from 4+0i at n=" + std::to_string(n));
            return;
        }
    }
    const MixingVerdict verdict = mixing_verdict(m, T, {x}, 10, 1e-3);
    c.require(verdict.verdict == Verdict::NotMixing,
              std::string("expected a not-mixing verdict, got ") +
                  to_string(verdict.verdict));
    if (verdict.witness.has_value()) {
        t.add(verdict.witness->scale);
        t.add(verdict.witness->value);
    }
}

// ---------------------------------------------------------------------------
// Check 2: power-law compound Poisson. (a) The direct cross sums sit under the
// Beta-function envelope for every n up to 1000; (b) codifferences of random
// sup-normalized pairs sit under 2^3 times that envelope.
// ---------------------------------------------------------------------------
void criterion2(Check& c, Transcript& t) {
    // (a) direct summation: lambda_l = (l+1)^{-1.5}, terms (lambda_l lambda_{l+n})^{1/2},
    // partial sum to L plus a certified integral tail bound.
    const std::size_t kTerms = std::size_t{1} << 19;
    const std::int64_t kNMax = 1000;
    std::vector<double> u(kTerms + static_cast<std::size_t>(kNMax) + 1);
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = std::pow(static_cast<double>(i) + 1.0, -0.75);
    }
    // sum_{l >= L} (l+1)^{-1.5} <= integral_L^inf x^{-1.5} dx = 2/sqrt(L), and each
    // dropped term is at most (l+1)^{-1.5}.
    const double tail_cert = 2.0 / std::sqrt(static_cast<double>(kTerms));
    bool under_envelope = true;
    std::int64_t first_bad = -1;
    for (std::int64_t n = 1; n <= kNMax; ++n) {
        double partial = 0.0;
        const double* lead = u.data();
        const double* lag = u.data() + n;
        for (std::size_t l = 0; l < kTerms; ++l) partial += lead[l] * lag[l];
        const double total = partial + tail_cert;
        const double envelope =
            oracle::frozen::beta_025_05 / std::sqrt(static_cast<double>(n));
        t.add(total);
        if (!(total <= envelope) && first_bad < 0) {
            under_envelope = false;
            first_bad = n;
        }
    }
    c.require(under_envelope, "direct cross sum exceeds the Beta envelope at n=" +
                                  std::to_string(first_bad));

    // (b) random sup-normalized probe pairs against 8x the envelope.
    const MeasureSpec m = poisson_model();
    const WeightedShiftOperator T = poisson_shift();
    oracle::TestRand rnd(2026'02'01);
    for (int trial = 0; trial < 100; ++trial) {
        const Functional x = sup_normalized(rnd, Domain::N, 0, 40);
        const Functional y = sup_normalized(rnd, Domain::N, 0, 40);
        const std::int64_t n = rnd.index(1, kNMax);
        const complexd value = codiff_equal(m, x, T.adjoint_power(n, y)).value;
        const double envelope =
            8.0 * oracle::frozen::beta_025_05 / std::sqrt(static_cast<double>(n));
        t.add(value);
        if (!(std::abs(value) <= envelope * kDominationSlack)) {
            c.require(false, "random-pair codifference exceeds 8x the envelope at n=" +
                                 std::to_string(n));
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// Check 3: stable forward-shift orbit decays geometrically within the
// envelope rate.
// ---------------------------------------------------------------------------
void criterion3(Check& c, Transcript& t) {
    const MeasureSpec m = stable_model();
    const WeightedShiftOperator T = stable_shift();
    Functional x(Domain::Z);
    for (std::int64_t j = 0; j <= 60; ++j) x.add(j, complexd{1.0, 0.0});
    std::vector<std::pair<std::int64_t, double>> points;
    for (std::int64_t n = 5; n <= 60; ++n) {
        const double v = std::abs(codiff_equal(m, x, T.adjoint_power(n, x)).value);
        points.emplace_back(n, v);
        t.add(v);
    }
    const FitResult fit = fit_decay(points);
    t.add(fit.geometric_rate);
    t.add(fit.r2);
    char buf[128];
    c.require(fit.model == DecayModel::Geometric,
              "geometric model did not win the fit");
    std::snprintf(buf, sizeof buf, "fitted rate %.4f exceeds ceiling %.4f",
                  fit.geometric_rate, rate_ceiling());
    c.require(fit.geometric_rate <= rate_ceiling(), buf);
    std::snprintf(buf, sizeof buf, "fit quality r2 %.4f below %.2f", fit.r2, kFitR2Orbit);
    c.require(fit.r2 >= kFitR2Orbit, buf);
}

// ---------------------------------------------------------------------------
// Check 4: tempered-stable shift bound. Pin at n=1 equals 32*sqrt(pi)*sqrt(2);
// both codifference kinds are dominated for random sup-normalized pairs.
// ---------------------------------------------------------------------------
void criterion4(Check& c, Transcript& t) {
    const SeqSpec k = SeqSpec::geometric(1.0, 0.5);
    const double bound1 = temp_shift_bound(k, 0.5, 1.0, 1.0, 1.0, 1.0, 1.0, 1);
    t.add(bound1);
    c.require(std::abs(bound1 - oracle::frozen::b32_sqrt_pi_sqrt2) <=
                  kPinRel * oracle::frozen::b32_sqrt_pi_sqrt2,
              "bound at n=1 misses the 32*sqrt(pi)*sqrt(2) pin");

    const MeasureSpec m = tempered_model();
    const WeightedShiftOperator T = tempered_shift();
    oracle::TestRand rnd(2026'02'02);
    for (int trial = 0; trial < 100; ++trial) {
        const Functional x = sup_normalized(rnd, Domain::N, 0, 40);
        const Functional y = sup_normalized(rnd, Domain::N, 0, 40);
        const std::int64_t n = rnd.index(0, 50);
        const Functional shifted = T.adjoint_power(n, y);
        const double eq = std::abs(codiff_equal(m, x, shifted).value);
        const double neq = std::abs(codiff_notequal(m, x, shifted).value);
        const double bound = temp_shift_bound(k, 0.5, 1.0, 1.0, 1.0, 1.0, 1.0, n);
        t.add(eq);
        t.add(neq);
        if (!(eq <= bound * kDominationSlack) || !(neq <= bound * kDominationSlack)) {
            c.require(false,
                      "codifference exceeds the shift bound at n=" + std::to_string(n));
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// Check 5: adjoint invariance of the log characteristic functional on the
// three invariant model pairs.
// ---------------------------------------------------------------------------
void criterion5(Check& c, Transcript& t) {
    struct Pair {
        const char* name;
        MeasureSpec m;
        WeightedShiftOperator T;
        std::int64_t lo, hi;
    };
    const Pair pairs[] = {
        {"poisson/backward", poisson_model(), poisson_shift(), 0, 25},
        {"stable/forward", stable_model(), stable_shift(), -12, 12},
        {"tempered/backward", tempered_model(), tempered_shift(), 0, 25},
    };
    oracle::TestRand rnd(2026'02'03);
    for (const Pair& pair : pairs) {
        for (int trial = 0; trial < 50; ++trial) {
            const Functional f = random_probe(rnd, pair.m.domain(), pair.lo, pair.hi);
            const complexd before = log_cf(pair.m, f);
            const complexd after = log_cf(pair.m, pair.T.adjoint_power(1, f));
            t.add(before);
            t.add(after);
            if (!(std::abs(after - before) < kInvarianceRel * (1.0 + std::abs(before)))) {
                c.require(false, std::string("invariance broken for ") + pair.name);
                return;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Check 6: one-sided tempered exponent against independent adaptive
// quadrature on the full (t, lambda, alpha) grid.
// ---------------------------------------------------------------------------
void criterion6(Check& c, Transcript& t) {
    const double ts[] = {-10.0, -1.0, -0.1, 0.1, 1.0, 10.0};
    const double lams[] = {0.5, 1.0, 2.0};
    const double alphas[] = {0.3, 0.5, 0.9};
    for (double alpha : alphas) {
        for (double lam : lams) {
            for (double tv : ts) {
                const complexd closed =
                    tempered_exponent({1.0, lam, alpha, ExponentSide::Plus}, tv);
                const complexd quad = oracle::quad_tempered_exponent(1.0, lam, alpha, tv);
                t.add(closed);
                if (!(std::abs(closed - quad) <= kQuadratureRel * std::abs(quad))) {
                    char buf[128];
                    std::snprintf(buf, sizeof buf,
                                  "quadrature mismatch at t=%g lam=%g alpha=%g", tv, lam,
                                  alpha);
                    c.require(false, buf);
                    return;
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Check 7: Monte Carlo conformance. Every estimate is computed with worker
// counts 1 and 4 and must agree exactly; each statistical gate may use one
// rerun with a shifted seed.
// ---------------------------------------------------------------------------
void criterion7(Check& c, Transcript& t, bool& workers_equal) {
    const auto mc_cf = [&](const MeasureSpec& m, const Functional& f,
                           std::int64_t samples, std::uint64_t seed,
                           std::uint32_t stream) {
        const MCEstimate one = estimate_cf(m, f, samples, RngSpec{seed, stream}, 1);
        const MCEstimate four = estimate_cf(m, f, samples, RngSpec{seed, stream}, 4);
        if (one.value != four.value || one.std_error != four.std_error) {
            workers_equal = false;
        }
        return one;
    };

    struct Attempt {
        bool ok = true;
        Transcript frag;
    };
    const auto run_stat = [&](const char* name, auto&& attempt) {
        Attempt first = attempt(kMcSeed);
        if (first.ok) {
            t.append(first.frag);
            return;
        }
        Attempt second = attempt(kMcSeed + 1);
        c.note_add(std::string(name) + " used its one permitted rerun");
        t.append(second.frag);
        c.require(second.ok, std::string(name) + " failed both seeded attempts");
    };

    const Functional e0n(Domain::N, {{0, {1.0, 0.0}}});

    // (a) single-atom compound Poisson at half amplitude: CF is exactly e^{-2}.
    const MeasureSpec m_cp = MeasureSpec::compound_poisson(
        SeqSpec::explicit_values({2.0 * oracle::kPi}, 0.0), 1.0);
    run_stat("poisson point estimate", [&](std::uint64_t seed) {
        Attempt a;
        const MCEstimate est =
            mc_cf(m_cp, complexd{0.5, 0.0} * e0n, 100000, seed, 0);
        a.frag.add(est.value);
        a.frag.add(est.std_error);
        a.ok = std::abs(est.value - complexd{std::exp(-2.0), 0.0}) <= 4.0 * est.std_error;
        return a;
    });

    // (b) stable sampler: empirical CF on a 5-point grid vs exp(-|t|^alpha / 2).
    const MeasureSpec m_st = MeasureSpec::symmetric_alpha_stable(
        1.5, SeqSpec::explicit_values({1.0}, 0.0), 1.6);
    run_stat("stable CF grid", [&](std::uint64_t seed) {
        Attempt a;
        const double grid[] = {0.25, 0.5, 1.0, 2.0, 4.0};
        for (int i = 0; i < 5; ++i) {
            const double tv = grid[i];
            const MCEstimate est = mc_cf(m_st, complexd{tv, 0.0} * e0n, 100000, seed,
                                         static_cast<std::uint32_t>(10 + i));
            const complexd closed{std::exp(-0.5 * std::pow(tv, 1.5)), 0.0};
            a.frag.add(est.value);
            a.frag.add(est.std_error);
            a.ok = a.ok && std::abs(est.value - closed) <= 4.0 * est.std_error;
        }
        return a;
    });

    // (c) tempered sampler: empirical CF vs the closed form
    // exp(Gamma(-1/2) * (2 Re sqrt(1 + i t) - 2)) (symmetric tilt, zero drift).
    const MeasureSpec m_tp = MeasureSpec::tempered_stable(
        0.5, 1.0, 1.0, 1.0, 1.0, SeqSpec::explicit_values({1.0}, 0.0), 1.0);
    run_stat("tempered CF grid", [&](std::uint64_t seed) {
        Attempt a;
        const double grid[] = {0.25, 0.5, 1.0, 2.0, 4.0};
        for (int i = 0; i < 5; ++i) {
            const double tv = grid[i];
            const MCEstimate est = mc_cf(m_tp, complexd{tv, 0.0} * e0n, 100000, seed,
                                         static_cast<std::uint32_t>(20 + i));
            const double exponent = oracle::frozen::gamma_neg_half *
                                    (2.0 * std::real(std::sqrt(complexd{1.0, tv})) - 2.0);
            const complexd closed{std::exp(exponent), 0.0};
            a.frag.add(est.value);
            a.frag.add(est.std_error);
            a.ok = a.ok && std::abs(est.value - closed) <= 4.0 * est.std_error;
        }
        return a;
    });

    // (d) series covariance estimator vs the exact expansion at n=3.
    const MeasureSpec m2 = stable_model();
    const WeightedShiftOperator T = stable_shift();
    const Functional x0(Domain::Z, {{0, {1.0, 0.0}}});
    const Functional x1(Domain::Z, {{1, {0.8, 0.0}}});
    const ExpSeriesObservable fo({ObservableTerm{{1.0, 0.0}, SignFn::Re, x0, 0},
                                  ObservableTerm{{0.4, 0.1}, SignFn::MinusIm, x1, 1}},
                                 T, 1.6);
    const ExpSeriesObservable go({ObservableTerm{{0.9, -0.2}, SignFn::Re, x0, 0},
                                  ObservableTerm{{0.3, 0.0}, SignFn::Im, x1, 0}},
                                 T, 1.6);
    const complexd exact = exact_In(m2, T, fo, go, 3);
    t.add(exact);
    run_stat("series covariance estimate", [&](std::uint64_t seed) {
        Attempt a;
        const MCEstimate one = estimate_In(m2, T, fo, go, 3, 100000, RngSpec{seed, 30}, 1);
        const MCEstimate four =
            estimate_In(m2, T, fo, go, 3, 100000, RngSpec{seed, 30}, 4);
        if (one.value != four.value || one.std_error != four.std_error) {
            workers_equal = false;
        }
        a.frag.add(one.value);
        a.frag.add(one.std_error);
        a.ok = std::abs(one.value - exact) <= 3.0 * one.std_error;
        return a;
    });
}

// ---------------------------------------------------------------------------
// Check 8: exact series covariances with geometric coefficients decay
// geometrically within the envelope rate.
// ---------------------------------------------------------------------------
void criterion8(Check& c, Transcript& t) {
    const MeasureSpec m = stable_model();
    const WeightedShiftOperator T = stable_shift();
    const Functional base(Domain::Z, {{0, {1.0, 0.0}}});
    const ExpSeriesObservable f =
        geometric_observable({1.0, 0.0}, 0.5, SignFn::Re, base, T, 1.6, 1e-10);
    const ExpSeriesObservable g =
        geometric_observable({1.0, 0.0}, 0.5, SignFn::Re, base, T, 1.6, 1e-10);
    std::vector<std::pair<std::int64_t, double>> points;
    for (std::int64_t n = 5; n <= 60; ++n) {
        const double v = std::abs(exact_In(m, T, f, g, n));
        points.emplace_back(n, v);
        t.add(v);
    }
    const FitResult fit = fit_decay(points);
    t.add(fit.geometric_rate);
    t.add(fit.r2);
    char buf[128];
    c.require(fit.model == DecayModel::Geometric,
              "geometric model did not win the fit");
    std::snprintf(buf, sizeof buf, "fitted rate %.4f exceeds ceiling %.4f",
                  fit.geometric_rate, rate_ceiling());
    c.require(fit.geometric_rate <= rate_ceiling(), buf);
    std::snprintf(buf, sizeof buf, "fit quality r2 %.4f below %.2f", fit.r2,
                  kFitR2Series);
    c.require(fit.r2 >= kFitR2Series, buf);
}

// ---------------------------------------------------------------------------
// One full pass over checks 1-8.
// ---------------------------------------------------------------------------
struct PassResult {
    std::vector<Check> checks;
    Transcript transcript;
    bool workers_equal = true;

    bool all_pass() const {
        for (const Check& c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }
};

PassResult run_pass(bool enforce_limits) {
    PassResult pass;
    pass.checks.push_back(run_check(
        "single-atom lattice measure: constant codifference and not-mixing verdict",
        1.0, enforce_limits, [&](Check& c) { criterion1(c, pass.transcript); }));
    pass.checks.push_back(run_check(
        "power-law compound Poisson: direct sums and random pairs under the Beta "
        "envelope",
        10.0, enforce_limits, [&](Check& c) { criterion2(c, pass.transcript); }));
    pass.checks.push_back(run_check(
        "stable forward-shift orbit fits a geometric decay within the envelope rate",
        10.0, enforce_limits, [&](Check& c) { criterion3(c, pass.transcript); }));
    pass.checks.push_back(run_check(
        "tempered shift bound pin and two-kind domination on random pairs", 10.0,
        enforce_limits, [&](Check& c) { criterion4(c, pass.transcript); }));
    pass.checks.push_back(run_check(
        "adjoint invariance of the log characteristic functional on three model pairs",
        5.0, enforce_limits, [&](Check& c) { criterion5(c, pass.transcript); }));
    pass.checks.push_back(run_check(
        "tempered exponent matches adaptive quadrature across the parameter grid", 5.0,
        enforce_limits, [&](Check& c) { criterion6(c, pass.transcript); }));
    pass.checks.push_back(run_check(
        "Monte Carlo estimates match closed forms within their error bars", 120.0,
        enforce_limits,
        [&](Check& c) { criterion7(c, pass.transcript, pass.workers_equal); }));
    pass.checks.push_back(run_check(
        "exact series covariances decay geometrically within the envelope rate", 0.0,
        enforce_limits, [&](Check& c) { criterion8(c, pass.transcript); }));
    return pass;
}

} // namespace

int main() {
    PassResult first = run_pass(true);
    PassResult second = run_pass(false);

    Check determinism;
    determinism.label =
        "byte-identical values across same-seed reruns and worker counts 1 and 4";
    determinism.require(first.transcript.cells == second.transcript.cells,
                        "transcripts differ between the two passes");
    determinism.require(first.workers_equal && second.workers_equal,
                        "worker counts 1 and 4 produced different estimates");
    determinism.require(second.all_pass(), "second pass had failing checks");

    double second_pass_seconds = 0.0;
    for (const Check& c : second.checks) second_pass_seconds += c.seconds;

    int passed = 0;
    for (std::size_t i = 0; i < first.checks.size(); ++i) {
        const Check& c = first.checks[i];
        std::printf("C%zu %s (%.2f s) %s%s%s\n", i + 1, c.pass ? "PASS" : "FAIL",
                    c.seconds, c.label.c_str(), c.note.empty() ? "" : " -- ",
                    c.note.c_str());
        if (c.pass) ++passed;
    }
    std::printf("C9 %s (%.2f s) %s%s%s\n", determinism.pass ? "PASS" : "FAIL",
                second_pass_seconds, determinism.label.c_str(),
                determinism.note.empty() ? "" : " -- ", determinism.note.c_str());
    if (determinism.pass) ++passed;

    std::printf("ACCEPTANCE: %d/9 PASS\n", passed);
    return passed == 9 ? 0 : 1;
}
