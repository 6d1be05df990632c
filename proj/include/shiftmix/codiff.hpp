#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "shiftmix/errors.hpp"
#include "shiftmix/measures.hpp"
#include "shiftmix/numeric.hpp"
#include "shiftmix/seqspace.hpp"
#include "shiftmix/shifts.hpp"

namespace shiftmix {

// Sign functions phi with e^{i phi(<z,x>)} = e^{i Re<z, A_phi x>}; apply_sign
// returns A_phi x under the bilinear pairing <z,f> = sum z_n f_n.
enum class SignFn { Re, MinusRe, Im, MinusIm };

inline Functional apply_sign(SignFn phi, const Functional& f) {
    switch (phi) {
        case SignFn::Re: return f;
        case SignFn::MinusRe: return f * complexd{-1.0, 0.0};
        case SignFn::Im: return f * complexd{0.0, -1.0};     // Im<z,x> = Re<z, -i x>
        case SignFn::MinusIm: return f * complexd{0.0, 1.0}; // -Im<z,x> = Re<z, i x>
    }
    throw ValidationError("unknown sign function");
}

struct PhiPsi {
    SignFn phi;
    SignFn psi;
};

enum class CodiffKind { Equal, NotEqual, General };

struct CodifferenceValue {
    complexd value;
    CodiffKind kind = CodiffKind::Equal;
    std::optional<PhiPsi> pair;
};

// ---------------------------------------------------------------------------
// Fused codifference core. codiff_core(m,f,g) equals
// log_cf(f+g) - log_cf(f) - log_cf(g) but is evaluated atom-by-atom in forms
// with no three-term cancellation, so values of size ~2^-60 keep full
// relative precision. Only the common support contributes.
// ---------------------------------------------------------------------------

namespace detail {

// |u+v|^alpha - |u|^alpha - |v|^alpha without cancellation.
inline double stable_channel_core(double alpha, double u, double v) {
    if (u == 0.0 || v == 0.0) return 0.0;
    double au = std::abs(u), av = std::abs(v);
    if (au < av) {
        std::swap(u, v);
        std::swap(au, av);
    }
    const double r = v / u; // |r| <= 1
    if (r == -1.0) return -2.0 * std::pow(au, alpha);
    return std::pow(au, alpha) * std::expm1(alpha * std::log1p(r)) - std::pow(av, alpha);
}

// One tempered side: (lam-i(u+v))^a - (lam-iu)^a - (lam-iv)^a + lam^a,
// regrouped around the smaller argument so a tiny v against an O(1) u keeps
// relative precision. `rot` is -1 for the Plus side (-i t) and +1 for Minus.
inline complexd tempered_side_core(double alpha, double lam, double rot, double u,
                                   double v) {
    if (u == 0.0 || v == 0.0) return complexd{0.0, 0.0};
    if (std::abs(u) < std::abs(v)) std::swap(u, v);
    const complexd iu{0.0, rot * u};
    const complexd iv{0.0, rot * v};
    const complexd base = complexd{lam, 0.0} + iu;
    const complexd t1 = std::pow(base, alpha) * cexpm1(alpha * clog1p(iv / base));
    const complexd t2 = std::pow(lam, alpha) * cexpm1(alpha * clog1p(iv / lam));
    return t1 - t2;
}

} // namespace detail

inline complexd codiff_core(const MeasureSpec& m, const Functional& f,
                            const Functional& g) {
    if (f.domain() != m.domain() || g.domain() != m.domain()) {
        throw ValidationError("codifference: functional domain does not match measure");
    }
    complexd total{0.0, 0.0};
    auto it_f = f.coeffs().begin();
    auto it_g = g.coeffs().begin();
    while (it_f != f.coeffs().end() && it_g != g.coeffs().end()) {
        if (it_f->first < it_g->first) {
            ++it_f;
            continue;
        }
        if (it_g->first < it_f->first) {
            ++it_g;
            continue;
        }
        const std::int64_t index = it_f->first;
        const complexd a = it_f->second;
        const complexd b = it_g->second;
        ++it_f;
        ++it_g;
        switch (m.family()) {
            case MeasureFamily::CompoundPoisson: {
                const double lam = m.cp().lambda.value(index);
                if (lam == 0.0) break;
                // (e^{i lam u} - 1)(e^{i lam v} - 1)
                total += expi_m1(lam * a.real()) * expi_m1(lam * b.real());
                break;
            }
            case MeasureFamily::SymmetricAlphaStable: {
                const auto& s = m.stable();
                const double k = s.k.value(index);
                if (k == 0.0) break;
                const double core =
                    detail::stable_channel_core(s.alpha, a.real(), b.real()) +
                    detail::stable_channel_core(s.alpha, a.imag(), b.imag());
                total += complexd{-0.5 * std::pow(k, s.alpha) * core, 0.0};
                break;
            }
            case MeasureFamily::TemperedStable: {
                const auto& t = m.tempered();
                const double k = t.k.value(index);
                if (k == 0.0) break;
                const double g_plus = gamma_fn(-t.alpha);
                // real channel (k Re a, k Re b), imaginary channel
                // (-k Im a, -k Im b); kappa-drift cancels identically in the core
                for (int channel = 0; channel < 2; ++channel) {
                    const double u = channel == 0 ? k * a.real() : -k * a.imag();
                    const double v = channel == 0 ? k * b.real() : -k * b.imag();
                    total += t.a_plus * g_plus *
                             detail::tempered_side_core(t.alpha, t.lam_plus, -1.0, u, v);
                    total += t.a_minus * g_plus *
                             detail::tempered_side_core(t.alpha, t.lam_minus, 1.0, u, v);
                }
                break;
            }
        }
        if (m.gaussian_diag()) {
            const double r = m.gaussian_diag()->value(index);
            total += complexd{-0.5 * r * (std::conj(a) * b).real(), 0.0};
        }
    }
    return total;
}

// C^=(x,y) = log CF(x-y) - log CF(x) - log CF(-y) = core(x, -y).
inline CodifferenceValue codiff_equal(const MeasureSpec& m, const Functional& x,
                                      const Functional& y) {
    return CodifferenceValue{codiff_core(m, x, -y), CodiffKind::Equal, std::nullopt};
}

// C^!=(x,y) has -i Im<z,y> in the mixed exponent; since -Im<z,y> = Re<z, i y>
// it reduces to core(x, i y), i.e. codiff_equal at the pair (x, -i y).
inline CodifferenceValue codiff_notequal(const MeasureSpec& m, const Functional& x,
                                         const Functional& y) {
    return CodifferenceValue{codiff_core(m, x, y * complexd{0.0, 1.0}),
                             CodiffKind::NotEqual, std::nullopt};
}

// The twelve supported (phi, psi) rows; the four pairs with matching sign
// type ((Re,Re), (-Re,-Re), (Im,Im), (-Im,-Im)) are rejected.
inline CodifferenceValue codiff_general(const MeasureSpec& m, PhiPsi pair,
                                        const Functional& x, const Functional& y) {
    const complexd mi{0.0, -1.0}; // -i
    const complexd pi_{0.0, 1.0}; // +i
    const auto eq = [&](Functional u, Functional v) {
        return codiff_equal(m, std::move(u), std::move(v)).value;
    };
    const auto neq = [&](Functional u, Functional v) {
        return codiff_notequal(m, std::move(u), std::move(v)).value;
    };
    complexd value;
    const SignFn p = pair.phi, q = pair.psi;
    using S = SignFn;
    if (p == S::Re && q == S::MinusRe) value = eq(x, y);
    else if (p == S::MinusRe && q == S::Re) value = eq(-x, -y);
    else if (p == S::Im && q == S::MinusIm) value = eq(x * mi, y * mi);
    else if (p == S::MinusIm && q == S::Im) value = eq(x * pi_, y * pi_);
    else if (p == S::Re && q == S::MinusIm) value = neq(x, y);
    else if (p == S::MinusRe && q == S::Im) value = neq(-x, -y);
    else if (p == S::Im && q == S::Re) value = neq(x * mi, y * mi);
    else if (p == S::MinusIm && q == S::MinusRe) value = neq(x * pi_, y * pi_);
    else if (p == S::MinusIm && q == S::Re) value = neq(x, y);
    else if (p == S::Im && q == S::MinusRe) value = neq(-x, -y);
    else if (p == S::Re && q == S::Im) value = neq(x * mi, y * mi);
    else if (p == S::MinusRe && q == S::MinusIm) value = neq(x * pi_, y * pi_);
    else throw ValidationError("unsupported (phi, psi) sign-function pair");
    return CodifferenceValue{value, CodiffKind::General, pair};
}

// ---------------------------------------------------------------------------
// Exponential-series observables f(z) = sum_j a_j e^{i phi_j(<z, T*^{j} x_j>)}
// and the exact correlation I_n(f,g).
// ---------------------------------------------------------------------------

struct ObservableTerm {
    complexd coeff;
    SignFn phi = SignFn::Re;
    Functional base;
    std::int64_t power = 0; // adjoint power applied to base
};

class ExpSeriesObservable {
  public:
    ExpSeriesObservable(std::vector<ObservableTerm> terms, const WeightedShiftOperator& T,
                        double p)
        : terms_(std::move(terms)) {
        if (!(p > 0.0)) throw ValidationError("observable: p must be positive");
        double weighted = 0.0;
        const double norm = T.operator_norm_bound();
        for (const auto& term : terms_) {
            if (term.base.domain() != T.domain()) {
                throw ValidationError("observable base functional domain mismatch");
            }
            if (term.power < 0) throw ValidationError("observable powers must be nonnegative");
            if (!std::isfinite(term.coeff.real()) || !std::isfinite(term.coeff.imag())) {
                throw ValidationError("observable coefficient not finite");
            }
            weighted += std::abs(term.coeff) *
                        std::pow(norm, static_cast<double>(term.power) * p / 2.0);
        }
        if (!std::isfinite(weighted)) {
            throw ValidationError("observable coefficient series diverges under the operator norm");
        }
    }

    const std::vector<ObservableTerm>& terms() const { return terms_; }

  private:
    std::vector<ObservableTerm> terms_;
};

// Truncates sum_j a0 ratio^j e^{i phi(<z, T*^j base>)} so the dropped tail of
// sum |a_j| ||T||^{j p/2} stays below tail_tol; requires the geometric ratio
// q = |ratio| ||T||^{p/2} < 1.
inline ExpSeriesObservable geometric_observable(complexd a0, double ratio, SignFn phi,
                                                const Functional& base,
                                                const WeightedShiftOperator& T, double p,
                                                double tail_tol = 1e-10) {
    if (!(std::abs(ratio) < 1.0)) {
        throw ValidationError("geometric observable: |ratio| must be below 1");
    }
    const double q = std::abs(ratio) * std::pow(T.operator_norm_bound(), p / 2.0);
    if (!(q < 1.0)) {
        throw ValidationError(
            "geometric observable: ratio * operator-norm^(p/2) must be below 1");
    }
    std::vector<ObservableTerm> terms;
    double tail = std::abs(a0) / (1.0 - q); // tail bound from j = 0
    std::int64_t j = 0;
    while (tail >= tail_tol) {
        terms.push_back(ObservableTerm{a0 * std::pow(complexd{ratio, 0.0},
                                                     static_cast<double>(j)),
                                       phi, base, j});
        ++j;
        tail *= q;
        if (j > 1000000) throw NumericError("geometric observable truncation failed");
    }
    if (terms.empty()) {
        terms.push_back(ObservableTerm{a0, phi, base, 0});
    }
    return ExpSeriesObservable(std::move(terms), T, p);
}

// I_n(f,g) = int f(z) g(T^n z) mu(dz) - int f dmu int g dmu expanded over the
// exponential series: each (j,l) term is
// a_j b_l (e^{core} - 1) CF(A_phi u_j) CF(A_psi w_l) with u_j = T*^{j} x_j,
// w_l = T*^{n+l} y_l; CF values use Full drift. Disjoint supports give an
// exactly zero core and are skipped.
inline complexd exact_In(const MeasureSpec& m, const WeightedShiftOperator& T,
                         const ExpSeriesObservable& fobs, const ExpSeriesObservable& gobs,
                         std::int64_t n) {
    if (n < 0) throw ValidationError("exact_In: n must be nonnegative");
    struct Prepared {
        complexd coeff;
        Functional arg;   // A_phi T*^{power} base
        complexd cf;      // exp(log_cf(arg, Full))
    };
    const auto prepare = [&](const ObservableTerm& term,
                             std::int64_t extra_power) -> Prepared {
        Functional moved = T.adjoint_power(term.power + extra_power, term.base);
        Functional arg = apply_sign(term.phi, moved);
        const complexd cf = std::exp(log_cf(m, arg, DriftMode::Full));
        return Prepared{term.coeff, std::move(arg), cf};
    };
    std::vector<Prepared> left;
    left.reserve(fobs.terms().size());
    for (const auto& term : fobs.terms()) left.push_back(prepare(term, 0));
    std::vector<Prepared> right;
    right.reserve(gobs.terms().size());
    for (const auto& term : gobs.terms()) right.push_back(prepare(term, n));

    complexd total{0.0, 0.0};
    for (const auto& lj : left) {
        for (const auto& rl : right) {
            if (!supports_intersect(lj.arg, rl.arg)) continue;
            const complexd core = codiff_core(m, lj.arg, rl.arg);
            total += lj.coeff * rl.coeff * cexpm1(core) * lj.cf * rl.cf;
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Decay-model fitting: least squares of log|v| against n (geometric) and
// against log n (power law); the better r^2 wins, ties go geometric.
// ---------------------------------------------------------------------------

enum class DecayModel { Geometric, PowerLaw };

struct FitResult {
    DecayModel model = DecayModel::Geometric;
    double geometric_rate = 1.0;
    double geometric_r2 = 0.0;
    double power_exponent = 0.0;
    double power_r2 = 0.0;
    double r2 = 0.0;

    bool decaying() const {
        return model == DecayModel::Geometric ? geometric_rate < 1.0 - 1e-6
                                              : power_exponent < 0.0;
    }
};

namespace detail {

struct LinFit {
    bool ok = false;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = -1.0;
};

inline LinFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    LinFit fit;
    const std::size_t n = xs.size();
    if (n < 5) return fit;
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) return fit;
    fit.ok = true;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy <= 1e-300) {
        fit.r2 = 1.0; // exactly constant data: a flat line is a perfect fit
        fit.slope = 0.0;
        return fit;
    }
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double resid = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += resid * resid;
    }
    fit.r2 = 1.0 - ss_res / syy;
    return fit;
}

} // namespace detail

inline FitResult fit_decay(const std::vector<std::pair<std::int64_t, double>>& values) {
    std::vector<double> ns, logs;
    std::vector<double> log_ns, logs_pos;
    for (const auto& [n, magnitude] : values) {
        if (!(magnitude > 0.0) || !std::isfinite(magnitude)) continue;
        ns.push_back(static_cast<double>(n));
        logs.push_back(std::log(magnitude));
        if (n >= 1) {
            log_ns.push_back(std::log(static_cast<double>(n)));
            logs_pos.push_back(std::log(magnitude));
        }
    }
    if (ns.size() < 5) {
        throw NumericError("fit_decay: fewer than 5 usable (positive, finite) points");
    }
    const detail::LinFit geo = detail::least_squares(ns, logs);
    const detail::LinFit pow_fit = detail::least_squares(log_ns, logs_pos);
    FitResult out;
    if (geo.ok) {
        out.geometric_rate = std::exp(geo.slope);
        out.geometric_r2 = geo.r2;
    }
    if (pow_fit.ok) {
        out.power_exponent = pow_fit.slope;
        out.power_r2 = pow_fit.r2;
    }
    if (pow_fit.ok && pow_fit.r2 > out.geometric_r2) {
        out.model = DecayModel::PowerLaw;
        out.r2 = out.power_r2;
    } else {
        out.model = DecayModel::Geometric;
        out.r2 = out.geometric_r2;
    }
    return out;
}

} // namespace shiftmix
