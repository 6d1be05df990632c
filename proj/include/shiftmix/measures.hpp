#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shiftmix/errors.hpp"
#include "shiftmix/numeric.hpp"
#include "shiftmix/seqspace.hpp"
#include "shiftmix/shifts.hpp"
#include "shiftmix/specfun.hpp"

namespace shiftmix {

// ---------------------------------------------------------------------------
// SeqSpec: closed-form positive sequences used as atom masses / scale
// sequences. Closed-form families (not arbitrary callbacks) keep power sums
// and tail bounds analytically certifiable.
// ---------------------------------------------------------------------------

enum class SeqKind { PowerLaw, Geometric, FromWeights, Explicit };

class SeqSpec {
  public:
    // value0 * (n+1)^(-gamma/p) on N.
    static SeqSpec power_law(double value0, double gamma, double p) {
        SeqSpec s;
        s.kind_ = SeqKind::PowerLaw;
        s.value0_ = value0;
        s.gamma_ = gamma;
        s.p_ = p;
        if (!(value0 > 0.0)) throw ValidationError("power-law sequence: value0 must be positive");
        if (!(gamma > 1.0)) throw ValidationError("power-law sequence: gamma must exceed 1");
        if (!(p > 0.0)) throw ValidationError("power-law sequence: p must be positive");
        return s;
    }

    // c * r^n on N.
    static SeqSpec geometric(double c, double r) {
        SeqSpec s;
        s.kind_ = SeqKind::Geometric;
        s.value0_ = c;
        s.ratio_ = r;
        if (!(c > 0.0)) throw ValidationError("geometric sequence: leading value must be positive");
        if (!(r > 0.0 && r < 1.0)) throw ValidationError("geometric sequence: ratio must lie in (0,1)");
        return s;
    }

    // Shift-invariant masses generated by a weight rule. One-sided rules give
    // k_n = k0 * prod_{l=0}^{n-1} 1/w_l on N (backward-shift invariance);
    // a two-sided rule gives k_n = k_{n-1} * w_n on Z (forward-shift
    // invariance), anchored at k_0 = k0.
    static SeqSpec from_weights(double k0, WeightRule rule) {
        SeqSpec s;
        s.kind_ = SeqKind::FromWeights;
        s.value0_ = k0;
        s.rule_ = std::move(rule);
        s.rule_.validate();
        if (!(k0 > 0.0)) throw ValidationError("from-weights sequence: k0 must be positive");
        return s;
    }

    // Explicitly listed head values; optionally continued geometrically with
    // the given ratio (tail_ratio = 0 means the sequence stops after head).
    static SeqSpec explicit_values(std::vector<double> head, double tail_ratio = 0.0) {
        SeqSpec s;
        s.kind_ = SeqKind::Explicit;
        s.head_ = std::move(head);
        s.ratio_ = tail_ratio;
        if (s.head_.empty()) throw ValidationError("explicit sequence: head must be nonempty");
        for (double v : s.head_) {
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw ValidationError("explicit sequence: entries must be positive and finite");
            }
        }
        if (tail_ratio != 0.0 && !(tail_ratio > 0.0 && tail_ratio < 1.0)) {
            throw ValidationError("explicit sequence: tail ratio must lie in (0,1) or be 0");
        }
        return s;
    }

    SeqKind kind() const { return kind_; }
    Domain domain() const {
        return (kind_ == SeqKind::FromWeights && rule_.kind == WeightKind::TwoSided)
                   ? Domain::Z
                   : Domain::N;
    }
    double value0() const { return value0_; }
    double gamma() const { return gamma_; }
    double p() const { return p_; }
    double ratio() const { return ratio_; }
    const WeightRule& rule() const { return rule_; }
    const std::vector<double>& head() const { return head_; }

    // Entry at index n (0 beyond an explicit head without tail rule).
    double value(std::int64_t n) const {
        switch (kind_) {
            case SeqKind::PowerLaw:
                require_n_index(n);
                return value0_ * std::pow(static_cast<double>(n) + 1.0, -gamma_ / p_);
            case SeqKind::Geometric:
                require_n_index(n);
                return value0_ * std::pow(ratio_, static_cast<double>(n));
            case SeqKind::FromWeights:
                if (domain() == Domain::N) {
                    require_n_index(n);
                    return value0_ / weight_product(rule_, 0, n - 1);
                }
                if (n >= 1) return value0_ * weight_product(rule_, 1, n);
                if (n <= -1) return value0_ / weight_product(rule_, n + 1, 0);
                return value0_;
            case SeqKind::Explicit: {
                require_n_index(n);
                const auto h = static_cast<std::int64_t>(head_.size());
                if (n < h) return head_[static_cast<std::size_t>(n)];
                if (ratio_ == 0.0) return 0.0;
                return head_.back() * std::pow(ratio_, static_cast<double>(n - h + 1));
            }
        }
        throw ValidationError("sequence spec: unknown kind");
    }

    // Is sum |s_n|^s finite?
    bool ell_member(double s) const {
        if (!(s > 0.0)) throw ValidationError("ell_member: exponent must be positive");
        switch (kind_) {
            case SeqKind::PowerLaw:
                return s * gamma_ / p_ > 1.0;
            case SeqKind::Geometric:
                return true;
            case SeqKind::FromWeights:
                switch (rule_.kind) {
                    case WeightKind::PowerRatioUnitFirst:
                    case WeightKind::PowerRatio:
                        return s * rule_.exponent() > 1.0;
                    case WeightKind::Constant:
                        return rule_.c > 1.0;
                    case WeightKind::HeadThenConstant:
                        return rule_.tail > 1.0;
                    case WeightKind::TwoSided:
                        return rule_.left_tail > 1.0 && rule_.right_tail < 1.0;
                }
                throw ValidationError("sequence spec: unknown weight kind");
            case SeqKind::Explicit:
                return true;
        }
        throw ValidationError("sequence spec: unknown kind");
    }

    // Upper bound on sum_{n >= start} value(n)^q. Exact for geometric-type
    // tails; integral-test bound for power-law-type tails. Throws
    // ValidationError when the tail diverges.
    double tail_bound(double q, std::int64_t start) const {
        switch (kind_) {
            case SeqKind::PowerLaw: {
                const double beta = q * gamma_ / p_;
                if (!(beta > 1.0)) throw ValidationError("tail bound: divergent power-law tail");
                return std::pow(value0_, q) * power_tail(beta, std::max<std::int64_t>(start, 0));
            }
            case SeqKind::Geometric:
                return geometric_tail(std::pow(value0_, q), std::pow(ratio_, q),
                                      std::max<std::int64_t>(start, 0));
            case SeqKind::FromWeights:
                return from_weights_tail(q, start);
            case SeqKind::Explicit: {
                double sum = 0.0;
                const auto h = static_cast<std::int64_t>(head_.size());
                for (std::int64_t n = std::max<std::int64_t>(start, 0); n < h; ++n) {
                    sum += std::pow(head_[static_cast<std::size_t>(n)], q);
                }
                if (ratio_ != 0.0) {
                    const double rq = std::pow(ratio_, q);
                    const std::int64_t first_tail = std::max(start, h);
                    const double first_value =
                        head_.back() * std::pow(ratio_, static_cast<double>(first_tail - h + 1));
                    sum += std::pow(first_value, q) / (1.0 - rq);
                }
                return sum;
            }
        }
        throw ValidationError("sequence spec: unknown kind");
    }

    // Exact sum of value(n)^q over n <= start (Z domain only).
    double left_tail_bound(double q, std::int64_t start) const {
        if (domain() != Domain::Z) {
            throw ValidationError("left tail bound requires a two-sided sequence");
        }
        if (!(rule_.left_tail > 1.0)) {
            throw ValidationError("tail bound: divergent left tail");
        }
        const std::int64_t min_override =
            rule_.overrides.empty() ? 1 : rule_.overrides.begin()->first;
        // At or below geo_start the sequence is exactly geometric in -n with
        // ratio 1/left_tail.
        const std::int64_t geo_start = std::min<std::int64_t>({start, min_override - 1, 0});
        double sum = 0.0;
        for (std::int64_t n = geo_start + 1; n <= start; ++n) sum += std::pow(value(n), q);
        const double rq = std::pow(1.0 / rule_.left_tail, q);
        sum += std::pow(value(geo_start), q) / (1.0 - rq);
        return sum;
    }

    // Exact sum of value(n)^q over the whole index domain (closed forms;
    // zeta for power-law families). Throws ValidationError on divergence.
    double sum_power(double q) const {
        switch (kind_) {
            case SeqKind::PowerLaw: {
                const double beta = q * gamma_ / p_;
                if (!(beta > 1.0)) throw ValidationError("sum_power: divergent power-law series");
                return std::pow(value0_, q) * zeta_fn(beta);
            }
            case SeqKind::Geometric: {
                const double rq = std::pow(ratio_, q);
                return std::pow(value0_, q) / (1.0 - rq);
            }
            case SeqKind::FromWeights: {
                const double k0q = std::pow(value0_, q);
                switch (rule_.kind) {
                    case WeightKind::PowerRatio: {
                        // k_n = k0 (n+1)^(-e) exactly
                        const double beta = q * rule_.exponent();
                        if (!(beta > 1.0)) throw ValidationError("sum_power: divergent series");
                        return k0q * zeta_fn(beta);
                    }
                    case WeightKind::PowerRatioUnitFirst: {
                        // k_0 = k0 and k_n = k0 n^(-e) for n >= 1
                        const double beta = q * rule_.exponent();
                        if (!(beta > 1.0)) throw ValidationError("sum_power: divergent series");
                        return k0q * (1.0 + zeta_fn(beta));
                    }
                    case WeightKind::Constant:
                        return from_weights_tail(q, 0);
                    case WeightKind::HeadThenConstant: {
                        const auto h = static_cast<std::int64_t>(rule_.head.size());
                        double sum = 0.0;
                        for (std::int64_t n = 0; n < h; ++n) sum += std::pow(value(n), q);
                        return sum + from_weights_tail(q, h);
                    }
                    case WeightKind::TwoSided:
                        return from_weights_tail(q, 1) + left_tail_bound(q, 0);
                }
                throw ValidationError("sequence spec: unknown weight kind");
            }
            case SeqKind::Explicit: {
                double sum = 0.0;
                for (double v : head_) sum += std::pow(v, q);
                if (ratio_ != 0.0) {
                    const double rq = std::pow(ratio_, q);
                    sum += std::pow(head_.back() * ratio_, q) / (1.0 - rq);
                }
                return sum;
            }
        }
        throw ValidationError("sequence spec: unknown kind");
    }

  private:
    static void require_n_index(std::int64_t n) {
        if (n < 0) throw ValidationError("sequence index must be nonnegative");
    }

    // sum_{n >= start} (n+1)^(-beta) <= integral_{start}^inf x^(-beta) dx for
    // start >= 1; the start = 0 case adds the n = 0 term explicitly.
    static double power_tail(double beta, std::int64_t start) {
        if (start <= 0) return 1.0 + 1.0 / (beta - 1.0);
        return std::pow(static_cast<double>(start), 1.0 - beta) / (beta - 1.0);
    }

    static double geometric_tail(double c_pow_q, double rq, std::int64_t start) {
        if (!(rq < 1.0)) throw ValidationError("tail bound: divergent geometric tail");
        return c_pow_q * std::pow(rq, static_cast<double>(start)) / (1.0 - rq);
    }

    static double zeta_fn(double beta) { return std::riemann_zeta(beta); }

    double from_weights_tail(double q, std::int64_t start) const {
        const double k0q = std::pow(value0_, q);
        switch (rule_.kind) {
            case WeightKind::PowerRatio: {
                const double beta = q * rule_.exponent();
                if (!(beta > 1.0)) throw ValidationError("tail bound: divergent power-law tail");
                return k0q * power_tail(beta, std::max<std::int64_t>(start, 0));
            }
            case WeightKind::PowerRatioUnitFirst: {
                const double beta = q * rule_.exponent();
                if (!(beta > 1.0)) throw ValidationError("tail bound: divergent power-law tail");
                const std::int64_t s = std::max<std::int64_t>(start, 0);
                if (s <= 0) return k0q * (2.0 + 1.0 / (beta - 1.0));
                // sum_{n >= s} n^(-beta) <= s^(-beta) + integral_s^inf x^(-beta) dx
                return k0q * (std::pow(static_cast<double>(s), -beta) +
                              std::pow(static_cast<double>(s), 1.0 - beta) / (beta - 1.0));
            }
            case WeightKind::Constant:
                if (!(rule_.c > 1.0)) {
                    throw ValidationError("tail bound: divergent constant-rule tail");
                }
                return geometric_tail(k0q, std::pow(1.0 / rule_.c, q),
                                      std::max<std::int64_t>(start, 0));
            case WeightKind::HeadThenConstant: {
                if (!(rule_.tail > 1.0)) throw ValidationError("tail bound: divergent tail weights");
                const auto h = static_cast<std::int64_t>(rule_.head.size());
                const std::int64_t s = std::max<std::int64_t>(start, 0);
                double sum = 0.0;
                for (std::int64_t n = s; n < std::max(s, h); ++n) sum += std::pow(value(n), q);
                const std::int64_t g = std::max(s, h);
                const double rq = std::pow(1.0 / rule_.tail, q);
                sum += std::pow(value(g), q) / (1.0 - rq);
                return sum;
            }
            case WeightKind::TwoSided: {
                if (!(rule_.right_tail < 1.0)) {
                    throw ValidationError("tail bound: divergent right tail");
                }
                const std::int64_t max_override =
                    rule_.overrides.empty() ? 0 : rule_.overrides.rbegin()->first;
                const std::int64_t geo_start = std::max<std::int64_t>({start, max_override + 1, 1});
                double sum = 0.0;
                for (std::int64_t n = start; n < geo_start; ++n) sum += std::pow(value(n), q);
                const double rq = std::pow(rule_.right_tail, q);
                sum += std::pow(value(geo_start), q) / (1.0 - rq);
                return sum;
            }
        }
        throw ValidationError("sequence spec: unknown weight kind");
    }

    SeqKind kind_ = SeqKind::Geometric;
    double value0_ = 1.0;
    double gamma_ = 2.0;
    double p_ = 1.0;
    double ratio_ = 0.5;
    WeightRule rule_;
    std::vector<double> head_;
};

// Upper bound on sum_{n >= start} s_n^power.
inline double series_tail_bound(const SeqSpec& s, double power, std::int64_t start) {
    return s.tail_bound(power, start);
}

// ---------------------------------------------------------------------------
// Measure families.
// ---------------------------------------------------------------------------

enum class MeasureFamily { CompoundPoisson, SymmetricAlphaStable, TemperedStable };
enum class DriftMode { Full, DriftFree };

struct ValidityReport {
    bool ok = true;
    std::vector<std::string> failures;

    void fail(std::string message) {
        ok = false;
        failures.push_back(std::move(message));
    }
};

enum class ExponentSide { Plus, Minus };

struct TemperedExponentParams {
    double a = 1.0;
    double lam = 1.0;
    double alpha = 0.5;
    ExponentSide side = ExponentSide::Plus;
};

// Drift-free one-sided tempered exponent: the Plus side is
// a * Gamma(-alpha) * ((lam - i t)^alpha - lam^alpha); the Minus side mirrors
// with +i t. Principal-branch power; lam > 0 keeps the base off the cut.
inline complexd tempered_exponent(const TemperedExponentParams& params, double t) {
    if (!(params.alpha > 0.0 && params.alpha < 1.0)) {
        throw ValidationError("tempered exponent: alpha must lie in (0,1)");
    }
    if (!(params.a > 0.0) || !(params.lam > 0.0)) {
        throw ValidationError("tempered exponent: a and lam must be positive");
    }
    const double g = gamma_fn(-params.alpha);
    const double it_sign = params.side == ExponentSide::Plus ? -1.0 : 1.0;
    const complexd base(params.lam, it_sign * t);
    const complexd value =
        std::pow(base, params.alpha) - std::pow(params.lam, params.alpha);
    return params.a * g * value;
}

// kappa-compensation drift of one side of a standard tempered stable law:
// integral of u * kappa(u) against a e^{-lam u} u^{-1-alpha} du on (0, inf),
// kappa(u) = 1 for u < 1 and 1/u otherwise.
inline double tempered_drift_side(double a, double lam, double alpha) {
    return a * (std::pow(lam, alpha - 1.0) * inc_gamma_lower(1.0 - alpha, lam) +
                std::pow(lam, alpha) * inc_gamma_upper_neg(-alpha, lam));
}

struct CompoundPoissonParams {
    SeqSpec lambda;
    double p = 1.0;
};

struct StableParams {
    double alpha = 1.5;
    SeqSpec k;
    double p = 2.0;
};

struct TemperedParams {
    double alpha = 0.5;
    double a_minus = 1.0;
    double a_plus = 1.0;
    double lam_minus = 1.0;
    double lam_plus = 1.0;
    SeqSpec k;
    double p = 1.0;
    double drift = 0.0; // kappa-compensation drift of the standard coordinate law
};

class MeasureSpec {
  public:
    static MeasureSpec compound_poisson(SeqSpec lambda, double p) {
        MeasureSpec m;
        m.family_ = MeasureFamily::CompoundPoisson;
        m.params_ = CompoundPoissonParams{std::move(lambda), p};
        return m;
    }

    static MeasureSpec symmetric_alpha_stable(double alpha, SeqSpec k, double p) {
        MeasureSpec m;
        m.family_ = MeasureFamily::SymmetricAlphaStable;
        m.params_ = StableParams{alpha, std::move(k), p};
        return m;
    }

    static MeasureSpec tempered_stable(double alpha, double a_minus, double a_plus,
                                       double lam_minus, double lam_plus, SeqSpec k,
                                       double p) {
        MeasureSpec m;
        m.family_ = MeasureFamily::TemperedStable;
        TemperedParams t{alpha, a_minus, a_plus, lam_minus, lam_plus, std::move(k), p, 0.0};
        if (alpha > 0.0 && alpha < 1.0 && a_minus > 0.0 && a_plus > 0.0 &&
            lam_minus > 0.0 && lam_plus > 0.0) {
            t.drift = tempered_drift_side(a_plus, lam_plus, alpha) -
                      tempered_drift_side(a_minus, lam_minus, alpha);
        }
        m.params_ = std::move(t);
        return m;
    }

    MeasureSpec& with_gaussian_diag(SeqSpec r) {
        gaussian_diag_ = std::move(r);
        return *this;
    }

    MeasureFamily family() const { return family_; }

    const CompoundPoissonParams& cp() const {
        if (family_ != MeasureFamily::CompoundPoisson) {
            throw ValidationError("measure is not compound Poisson");
        }
        return std::get<CompoundPoissonParams>(params_);
    }
    const StableParams& stable() const {
        if (family_ != MeasureFamily::SymmetricAlphaStable) {
            throw ValidationError("measure is not symmetric alpha-stable");
        }
        return std::get<StableParams>(params_);
    }
    const TemperedParams& tempered() const {
        if (family_ != MeasureFamily::TemperedStable) {
            throw ValidationError("measure is not tempered stable");
        }
        return std::get<TemperedParams>(params_);
    }

    const std::optional<SeqSpec>& gaussian_diag() const { return gaussian_diag_; }

    const SeqSpec& scale_seq() const {
        switch (family_) {
            case MeasureFamily::CompoundPoisson: return cp().lambda;
            case MeasureFamily::SymmetricAlphaStable: return stable().k;
            case MeasureFamily::TemperedStable: return tempered().k;
        }
        throw ValidationError("measure: unknown family");
    }

    Domain domain() const { return scale_seq().domain(); }

    double index_p() const {
        switch (family_) {
            case MeasureFamily::CompoundPoisson: return cp().p;
            case MeasureFamily::SymmetricAlphaStable: return stable().p;
            case MeasureFamily::TemperedStable: return tempered().p;
        }
        throw ValidationError("measure: unknown family");
    }

    ValidityReport validate() const {
        ValidityReport report;
        switch (family_) {
            case MeasureFamily::CompoundPoisson: {
                const auto& c = cp();
                if (!(c.p >= 1.0 && c.p < 2.0)) {
                    report.fail("compound Poisson requires p in [1,2)");
                }
                if (c.lambda.domain() != Domain::N) {
                    report.fail("compound Poisson atom masses must be indexed over N");
                }
                if (!c.lambda.ell_member(c.p)) {
                    report.fail("compound Poisson atom masses must lie in ell^p");
                }
                break;
            }
            case MeasureFamily::SymmetricAlphaStable: {
                const auto& s = stable();
                if (!(s.alpha > 0.0 && s.alpha < 2.0) || s.alpha == 1.0) {
                    report.fail("stable index alpha must lie in (0,2) excluding 1");
                }
                if (!(s.p >= 1.0 && s.p <= 2.0)) {
                    report.fail("stable requires p in [1,2]");
                }
                if (s.alpha > 0.0 && !s.k.ell_member(s.alpha)) {
                    report.fail("stable scale sequence must lie in ell^alpha");
                }
                break;
            }
            case MeasureFamily::TemperedStable: {
                const auto& t = tempered();
                if (!(t.alpha > 0.0 && t.alpha < 1.0)) {
                    report.fail("tempered stable index alpha must lie in (0,1)");
                }
                if (!(t.a_minus > 0.0 && t.a_plus > 0.0 && t.lam_minus > 0.0 &&
                      t.lam_plus > 0.0)) {
                    report.fail("tempered stable requires positive a and lambda parameters");
                }
                if (!(t.p >= 1.0 && t.p <= 2.0)) {
                    report.fail("tempered stable requires p in [1,2]");
                }
                if (t.k.domain() != Domain::N) {
                    report.fail("tempered stable scale sequence must be indexed over N");
                }
                if (t.alpha > 0.0 && !t.k.ell_member(t.alpha)) {
                    report.fail("tempered stable scale sequence must lie in ell^alpha");
                }
                break;
            }
        }
        if (gaussian_diag_ && gaussian_diag_->domain() != domain()) {
            report.fail("gaussian diagonal must share the measure's index domain");
        }
        return report;
    }

    void require_valid() const {
        const ValidityReport report = validate();
        if (!report.ok) throw ValidationError("invalid measure: " + report.failures.front());
    }

  private:
    MeasureSpec() = default;

    MeasureFamily family_ = MeasureFamily::CompoundPoisson;
    std::variant<CompoundPoissonParams, StableParams, TemperedParams> params_;
    std::optional<SeqSpec> gaussian_diag_;
};

// Sesquilinear diagonal Gaussian pairing sum_n r_n * conj(f_n) * g_n; zero
// when no Gaussian component is present.
inline complexd gaussian_pairing(const MeasureSpec& m, const Functional& f,
                                 const Functional& g) {
    if (!m.gaussian_diag()) return complexd{0.0, 0.0};
    const SeqSpec& r = *m.gaussian_diag();
    complexd sum{0.0, 0.0};
    for (const auto& [index, value] : f.coeffs()) {
        const complexd gv = g.at(index);
        if (gv == complexd{0.0, 0.0}) continue;
        sum += r.value(index) * std::conj(value) * gv;
    }
    return sum;
}

// Log characteristic functional log E exp(i Re<z, f>) at a finitely
// supported f; the atom sums restrict to the support of f, so no truncation
// is involved. DriftFree omits the terms linear in f (legitimate inside
// codifferences, where those cancel algebraically).
inline complexd log_cf(const MeasureSpec& m, const Functional& f,
                       DriftMode drift = DriftMode::Full) {
    if (f.domain() != m.domain()) {
        throw ValidationError("log_cf: functional domain does not match measure domain");
    }
    complexd total{0.0, 0.0};
    switch (m.family()) {
        case MeasureFamily::CompoundPoisson: {
            const auto& c = m.cp();
            // full and drift-free coincide: the atom drift cancels the
            // kappa-compensator exactly for this family
            for (const auto& [index, value] : f.coeffs()) {
                const double lam = c.lambda.value(index);
                if (lam == 0.0) continue;
                total += expi_m1(lam * value.real());
            }
            break;
        }
        case MeasureFamily::SymmetricAlphaStable: {
            const auto& s = m.stable();
            double sum = 0.0;
            for (const auto& [index, value] : f.coeffs()) {
                const double k = s.k.value(index);
                if (k == 0.0) continue;
                sum += std::pow(k, s.alpha) *
                       (std::pow(std::abs(value.real()), s.alpha) +
                        std::pow(std::abs(value.imag()), s.alpha));
            }
            total += complexd{-0.5 * sum, 0.0};
            break;
        }
        case MeasureFamily::TemperedStable: {
            const auto& t = m.tempered();
            const TemperedExponentParams plus{t.a_plus, t.lam_plus, t.alpha,
                                              ExponentSide::Plus};
            const TemperedExponentParams minus{t.a_minus, t.lam_minus, t.alpha,
                                               ExponentSide::Minus};
            const auto coord_exponent = [&](double u) -> complexd {
                if (u == 0.0) return complexd{0.0, 0.0};
                complexd e = tempered_exponent(plus, u) + tempered_exponent(minus, u);
                if (drift == DriftMode::Full) e -= complexd{0.0, u * t.drift};
                return e;
            };
            for (const auto& [index, value] : f.coeffs()) {
                const double k = t.k.value(index);
                if (k == 0.0) continue;
                // real channel e_n and imaginary channel i e_n
                total += coord_exponent(k * value.real());
                total += coord_exponent(-k * value.imag());
            }
            break;
        }
    }
    if (m.gaussian_diag()) {
        total += -0.25 * gaussian_pairing(m, f, f).real();
    }
    return total;
}

} // namespace shiftmix
