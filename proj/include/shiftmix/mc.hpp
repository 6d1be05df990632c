#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "shiftmix/codiff.hpp"
#include "shiftmix/errors.hpp"
#include "shiftmix/measures.hpp"
#include "shiftmix/rng.hpp"
#include "shiftmix/seqspace.hpp"
#include "shiftmix/shifts.hpp"

namespace shiftmix {

struct RngSpec {
    std::uint64_t seed = 0;
    std::uint32_t stream = 0;
};

struct IndexWindow {
    std::int64_t lo = 0;
    std::int64_t hi = -1; // inclusive; empty when hi < lo

    bool empty() const { return hi < lo; }

    void include(const Functional& f) {
        if (f.empty()) return;
        const std::int64_t f_lo = f.coeffs().begin()->first;
        const std::int64_t f_hi = f.coeffs().rbegin()->first;
        if (empty()) {
            lo = f_lo;
            hi = f_hi;
        } else {
            lo = std::min(lo, f_lo);
            hi = std::max(hi, f_hi);
        }
    }
};

// One sampled trajectory restricted to a finite coordinate window; the
// estimators only ever pair samples against finitely supported functionals
// whose supports the window covers exactly.
class SampleVector {
public:
    explicit SampleVector(IndexWindow win)
        : win_(win),
          coords_(win.empty() ? 0 : static_cast<std::size_t>(win.hi - win.lo + 1)) {}

    const IndexWindow& window() const { return win_; }

    complexd& slot(std::int64_t index) {
        return coords_[static_cast<std::size_t>(index - win_.lo)];
    }

    complexd at(std::int64_t index) const {
        if (index < win_.lo || index > win_.hi) {
            throw NumericError("sample window does not cover a requested coordinate");
        }
        return coords_[static_cast<std::size_t>(index - win_.lo)];
    }

    // Bilinear pairing restricted to the support of f.
    double re_pair(const Functional& f) const {
        double acc = 0.0;
        for (const auto& [index, value] : f.coeffs()) {
            const complexd z = at(index);
            acc += z.real() * value.real() - z.imag() * value.imag();
        }
        return acc;
    }

private:
    IndexWindow win_;
    std::vector<complexd> coords_;
};

// Draws one sample of the measure on the given window. Every coordinate uses
// the same per-sample Philox stream in ascending index order, so the result
// depends only on (seed, stream, sample_index, window).
inline SampleVector sample_measure(const MeasureSpec& m, const RngSpec& rng,
                                   std::uint64_t sample_index, IndexWindow win) {
    SampleVector out(win);
    if (win.empty()) return out;
    DrawStream g(rng.seed, sample_index, rng.stream);
    for (std::int64_t i = win.lo; i <= win.hi; ++i) {
        complexd z{0.0, 0.0};
        switch (m.family()) {
            case MeasureFamily::CompoundPoisson: {
                const double lam = m.cp().lambda.value(i);
                const double pois = static_cast<double>(samplers::poisson(g, 1.0));
                z = complexd{lam * pois, 0.0};
                break;
            }
            case MeasureFamily::SymmetricAlphaStable: {
                const auto& s = m.stable();
                const double s1 = samplers::sym_stable(g, s.alpha);
                const double s2 = samplers::sym_stable(g, s.alpha);
                const double scale = s.k.value(i) * std::pow(2.0, -1.0 / s.alpha);
                z = complexd{scale * s1, scale * s2};
                break;
            }
            case MeasureFamily::TemperedStable: {
                const auto& t = m.tempered();
                const double k = t.k.value(i);
                double parts[2];
                for (double& part : parts) {
                    const double tp =
                        samplers::tempered_one_sided(g, t.alpha, t.a_plus, t.lam_plus);
                    const double tm =
                        samplers::tempered_one_sided(g, t.alpha, t.a_minus, t.lam_minus);
                    part = tp - tm - t.drift;
                }
                z = complexd{k * parts[0], k * parts[1]};
                break;
            }
        }
        if (m.gaussian_diag().has_value()) {
            const double r = m.gaussian_diag()->value(i);
            const auto [g1, g2] = samplers::normal_pair(g);
            const double sigma = std::sqrt(r / 2.0);
            z += complexd{sigma * g1, sigma * g2};
        }
        out.slot(i) = z;
    }
    return out;
}

struct MCEstimate {
    complexd value{0.0, 0.0};
    double std_error = 0.0;
    std::int64_t samples = 0;
};

namespace detail {

// Runs fn(sample_index) for indices [0, samples). Workers take fixed blocks
// round-robin and write to disjoint slots; combined with the main thread doing
// every reduction sequentially, results are bit-identical for any worker count.
inline void parallel_samples(std::int64_t samples, int workers,
                             const std::function<void(std::int64_t)>& fn) {
    constexpr std::int64_t kBlock = 1024;
    if (samples <= 0) return;
    workers = std::clamp(workers, 1, 64);
    if (workers == 1) {
        for (std::int64_t i = 0; i < samples; ++i) fn(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::int64_t b = w; b * kBlock < samples;
                     b += workers) {
                    const std::int64_t lo = b * kBlock;
                    const std::int64_t hi = std::min(samples, lo + kBlock);
                    for (std::int64_t i = lo; i < hi; ++i) fn(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace detail

// Empirical characteristic function E exp(i Re<X, f>).
inline MCEstimate estimate_cf(const MeasureSpec& m, const Functional& f,
                              std::int64_t samples, const RngSpec& rng,
                              int workers = 1) {
    if (samples < 2) throw ValidationError("estimate_cf: need at least two samples");
    if (f.domain() != m.domain()) {
        throw ValidationError("estimate_cf: functional domain mismatch");
    }
    if (f.empty()) return MCEstimate{complexd{1.0, 0.0}, 0.0, samples};
    IndexWindow win;
    win.include(f);
    std::vector<complexd> zs(static_cast<std::size_t>(samples));
    detail::parallel_samples(samples, workers, [&](std::int64_t i) {
        const SampleVector X = sample_measure(m, rng, static_cast<std::uint64_t>(i), win);
        const double s = X.re_pair(f);
        zs[static_cast<std::size_t>(i)] = complexd{std::cos(s), std::sin(s)};
    });
    complexd sum{0.0, 0.0};
    for (const complexd& z : zs) sum += z;
    const complexd mean = sum / static_cast<double>(samples);
    double ssq = 0.0;
    for (const complexd& z : zs) ssq += std::norm(z - mean);
    const double var = ssq / (static_cast<double>(samples - 1) *
                              static_cast<double>(samples));
    return MCEstimate{mean, std::sqrt(std::max(0.0, var)), samples};
}

// Empirical joint-minus-product estimator for
// I_n = E[f(X) g(T^n X)] - E[f(X)] E[g(X)], evaluated through adjoint powers
// on the functional side. The reported standard error uses the delta method
// for the product of means.
inline MCEstimate estimate_In(const MeasureSpec& m, const WeightedShiftOperator& T,
                              const ExpSeriesObservable& f, const ExpSeriesObservable& g,
                              std::int64_t n, std::int64_t samples, const RngSpec& rng,
                              int workers = 1) {
    if (samples < 2) throw ValidationError("estimate_In: need at least two samples");
    if (n < 0) throw ValidationError("estimate_In: n must be nonnegative");
    if (T.domain() != m.domain()) {
        throw ValidationError("estimate_In: operator/measure domain mismatch");
    }

    struct PreparedTerm {
        complexd coeff;
        Functional arg;
    };
    auto prepare = [&](const ExpSeriesObservable& obs,
                       std::int64_t shift) {
        std::vector<PreparedTerm> prepared;
        prepared.reserve(obs.terms().size());
        for (const ObservableTerm& term : obs.terms()) {
            prepared.push_back(PreparedTerm{
                term.coeff,
                apply_sign(term.phi, T.adjoint_power(term.power + shift, term.base))});
        }
        return prepared;
    };
    const std::vector<PreparedTerm> f_terms = prepare(f, 0);
    const std::vector<PreparedTerm> g_shift_terms = prepare(g, n);
    const std::vector<PreparedTerm> g_zero_terms = prepare(g, 0);

    IndexWindow win;
    for (const auto* terms : {&f_terms, &g_shift_terms, &g_zero_terms}) {
        for (const PreparedTerm& t : *terms) win.include(t.arg);
    }

    auto evaluate = [](const std::vector<PreparedTerm>& terms, const SampleVector& X) {
        complexd acc{0.0, 0.0};
        for (const PreparedTerm& t : terms) {
            const double s = X.re_pair(t.arg);
            acc += t.coeff * complexd{std::cos(s), std::sin(s)};
        }
        return acc;
    };

    std::vector<complexd> fx(static_cast<std::size_t>(samples));
    std::vector<complexd> g0(static_cast<std::size_t>(samples));
    std::vector<complexd> h(static_cast<std::size_t>(samples));
    detail::parallel_samples(samples, workers, [&](std::int64_t i) {
        const SampleVector X = sample_measure(m, rng, static_cast<std::uint64_t>(i), win);
        const complexd f_val = evaluate(f_terms, X);
        const complexd g_shift_val = evaluate(g_shift_terms, X);
        const complexd g_zero_val = evaluate(g_zero_terms, X);
        const std::size_t s = static_cast<std::size_t>(i);
        fx[s] = f_val;
        g0[s] = g_zero_val;
        h[s] = f_val * g_shift_val;
    });

    const double M = static_cast<double>(samples);
    complexd f_mean{0.0, 0.0}, g_mean{0.0, 0.0}, h_mean{0.0, 0.0};
    for (std::int64_t i = 0; i < samples; ++i) {
        const std::size_t s = static_cast<std::size_t>(i);
        f_mean += fx[s];
        g_mean += g0[s];
        h_mean += h[s];
    }
    f_mean /= M;
    g_mean /= M;
    h_mean /= M;

    const complexd value = h_mean - f_mean * g_mean;
    complexd d_mean{0.0, 0.0};
    for (std::int64_t i = 0; i < samples; ++i) {
        const std::size_t s = static_cast<std::size_t>(i);
        d_mean += h[s] - g_mean * fx[s] - f_mean * g0[s];
    }
    d_mean /= M;
    double ssq = 0.0;
    for (std::int64_t i = 0; i < samples; ++i) {
        const std::size_t s = static_cast<std::size_t>(i);
        ssq += std::norm(h[s] - g_mean * fx[s] - f_mean * g0[s] - d_mean);
    }
    const double var = ssq / ((M - 1.0) * M);
    return MCEstimate{value, std::sqrt(std::max(0.0, var)), samples};
}

} // namespace shiftmix
