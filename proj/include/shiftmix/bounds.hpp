#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "shiftmix/codiff.hpp"
#include "shiftmix/errors.hpp"
#include "shiftmix/measures.hpp"
#include "shiftmix/seqspace.hpp"
#include "shiftmix/shifts.hpp"
#include "shiftmix/specfun.hpp"

namespace shiftmix {

namespace detail {

inline void require_bound_kind(CodiffKind kind) {
    if (kind != CodiffKind::Equal && kind != CodiffKind::NotEqual) {
        throw ValidationError("bounds accept only the Equal / NotEqual codifference kinds");
    }
}

// Gaussian term: |Re<Rx,y>|/2 for Equal, |Im<Rx,y>|/2 for NotEqual.
inline double gaussian_term(const MeasureSpec& m, const Functional& x,
                            const Functional& y, CodiffKind kind) {
    const complexd pairing = gaussian_pairing(m, x, y);
    return 0.5 * std::abs(kind == CodiffKind::Equal ? pairing.real() : pairing.imag());
}

// |a b|^(q) channel product per kind at one atom index.
inline double channel_product(CodiffKind kind, complexd a, complexd b, double q,
                              bool imag_channel_pair) {
    // imag_channel_pair = false: (Re a, Re b | Im b); true: (Im a, Im b | Re b)
    const double lhs = imag_channel_pair ? a.imag() : a.real();
    double rhs;
    if (kind == CodiffKind::Equal) {
        rhs = imag_channel_pair ? b.imag() : b.real();
    } else {
        rhs = imag_channel_pair ? b.real() : b.imag();
    }
    const double prod = std::abs(lhs * rhs);
    return prod == 0.0 ? 0.0 : std::pow(prod, q);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Atomic-Levy-measure codifference bound (compound Poisson family):
// |R-term|/2 + 2^(4-p) sum_n lambda_n^p |channel(x_n) channel(y_n)|^(p/2),
// summed over the common support (exact, no truncation).
// ---------------------------------------------------------------------------
inline double levy_bound(const MeasureSpec& m, const Functional& x, const Functional& y,
                         double p, CodiffKind kind) {
    detail::require_bound_kind(kind);
    if (m.family() != MeasureFamily::CompoundPoisson) {
        throw ValidationError("levy_bound applies to the compound Poisson family");
    }
    if (!(p >= 0.0 && p <= 2.0)) throw ValidationError("levy_bound: p must lie in [0,2]");
    const SeqSpec& lambda = m.cp().lambda;
    double atom_sum = 0.0;
    auto it_x = x.coeffs().begin();
    auto it_y = y.coeffs().begin();
    while (it_x != x.coeffs().end() && it_y != y.coeffs().end()) {
        if (it_x->first < it_y->first) { ++it_x; continue; }
        if (it_y->first < it_x->first) { ++it_y; continue; }
        const double lam = lambda.value(it_x->first);
        if (lam != 0.0) {
            atom_sum += std::pow(lam, p) *
                        detail::channel_product(kind, it_x->second, it_y->second, p / 2.0,
                                                false);
        }
        ++it_x;
        ++it_y;
    }
    return detail::gaussian_term(m, x, y, kind) + std::pow(2.0, 4.0 - p) * atom_sum;
}

// ---------------------------------------------------------------------------
// Control-measure bound, stable closed form at cutoff c:
//   2^(5-p) c^(p-alpha)/(p-alpha) * I  +  32/(alpha c^alpha) * xiE
// where I is the channel integral against the control measure and xiE its
// total mass. Exposed at formula level for direct verification.
// ---------------------------------------------------------------------------
inline double stable_control_kernel(double alpha, double p, double c, double I,
                                    double xiE) {
    if (!(p > alpha)) throw NumericError("stable control bound requires p > alpha");
    if (!(c > 0.0)) throw ValidationError("stable control bound requires c > 0");
    return std::pow(2.0, 5.0 - p) * std::pow(c, p - alpha) / (p - alpha) * I +
           32.0 / (alpha * std::pow(c, alpha)) * xiE;
}

struct Cutoff {
    bool is_auto = true;
    double c = 0.0;

    static Cutoff automatic() { return Cutoff{true, 0.0}; }
    static Cutoff value(double c) {
        if (!(c > 0.0)) throw ValidationError("cutoff must be positive");
        return Cutoff{false, c};
    }
};

namespace detail {

// Channel integral against the stable control measure
// (1/2) sum_n k_n^alpha [ |..|^(p/2) + |..|^(p/2) ] over both atom channels.
inline double stable_channel_integral(const MeasureSpec& m, const Functional& x,
                                      const Functional& y, double p, CodiffKind kind) {
    const auto& s = m.stable();
    double sum = 0.0;
    auto it_x = x.coeffs().begin();
    auto it_y = y.coeffs().begin();
    while (it_x != x.coeffs().end() && it_y != y.coeffs().end()) {
        if (it_x->first < it_y->first) { ++it_x; continue; }
        if (it_y->first < it_x->first) { ++it_y; continue; }
        const double k = s.k.value(it_x->first);
        if (k != 0.0) {
            sum += 0.5 * std::pow(k, s.alpha) *
                   (channel_product(kind, it_x->second, it_y->second, p / 2.0, false) +
                    channel_product(kind, it_x->second, it_y->second, p / 2.0, true));
        }
        ++it_x;
        ++it_y;
    }
    return sum;
}

// Tempered control bound at finite cutoff c: per atom n and side,
// inner integral int_0^c u^(p-1-alpha) e^(-lam u / k_n) du and tail mass
// int_c^inf u^(-1-alpha) e^(-lam u / k_n) du in incomplete-gamma form. The
// x,y-independent tail term runs over every atom; terms die off
// super-geometrically, so a streak-based stop rule with a hard cap applies.
inline double tempered_control_finite_c(const MeasureSpec& m, const Functional& x,
                                        const Functional& y, double p, double c,
                                        CodiffKind kind) {
    const auto& t = m.tempered();
    if (!(p > t.alpha)) throw NumericError("tempered control bound requires p > alpha");
    const double sides_a[2] = {t.a_plus, t.a_minus};
    const double sides_lam[2] = {t.lam_plus, t.lam_minus};
    std::int64_t max_support = -1;
    if (!x.coeffs().empty()) max_support = std::max(max_support, x.coeffs().rbegin()->first);
    if (!y.coeffs().empty()) max_support = std::max(max_support, y.coeffs().rbegin()->first);

    double acc = 0.0;
    int quiet_streak = 0;
    const std::int64_t cap = 10000000;
    for (std::int64_t n = 0; n < cap; ++n) {
        const double k = t.k.value(n);
        double term = 0.0;
        if (k > 0.0) {
            double inner = 0.0;
            double tail = 0.0;
            for (int side = 0; side < 2; ++side) {
                const double lam = sides_lam[side] / k;
                inner += sides_a[side] * std::pow(lam, t.alpha - p) *
                         inc_gamma_lower(p - t.alpha, lam * c);
                tail += sides_a[side] * std::pow(lam, t.alpha) *
                        inc_gamma_upper_neg(-t.alpha, lam * c);
            }
            const double cx = channel_product(kind, x.at(n), y.at(n), p / 2.0, false);
            const double ci = channel_product(kind, x.at(n), y.at(n), p / 2.0, true);
            // xi-atom mass k_n^alpha at both e_n and i e_n
            term = 16.0 * std::pow(k, t.alpha) *
                   (std::pow(2.0, -p) * inner * (cx + ci) + 2.0 * tail);
        }
        acc += term;
        if (n > max_support) {
            if (term < 1e-18 * (1.0 + acc)) {
                if (++quiet_streak >= 3) return gaussian_term(m, x, y, kind) + acc;
            } else {
                quiet_streak = 0;
            }
        }
    }
    throw NumericError("tempered control bound: atom sum failed to settle below the cap");
}

} // namespace detail

inline double temp_bound(const MeasureSpec& m, const Functional& x, const Functional& y,
                         CodiffKind kind);

// Control-measure codifference bound. Stable family: closed-form kernel; the
// automatic cutoff takes the exact minimizer of A c^(p-alpha) + B c^(-alpha).
// Tempered family: incomplete-gamma form at finite c, or the c -> infinity
// closed form (temp_bound) when automatic.
inline double control_bound(const MeasureSpec& m, const Functional& x, const Functional& y,
                            double p, Cutoff cutoff, CodiffKind kind) {
    detail::require_bound_kind(kind);
    if (!(p >= 0.0 && p <= 2.0)) throw ValidationError("control_bound: p must lie in [0,2]");
    switch (m.family()) {
        case MeasureFamily::CompoundPoisson:
            throw ValidationError(
                "control_bound applies to the stable and tempered stable families");
        case MeasureFamily::SymmetricAlphaStable: {
            const auto& s = m.stable();
            if (!(p > s.alpha)) {
                throw NumericError("stable control bound requires p > alpha");
            }
            const double I = detail::stable_channel_integral(m, x, y, p, kind);
            const double r_term = detail::gaussian_term(m, x, y, kind);
            if (cutoff.is_auto) {
                if (I == 0.0) return r_term; // c -> infinity: both cutoff terms vanish
                const double xiE = s.k.sum_power(s.alpha);
                const double A = std::pow(2.0, 5.0 - p) * I / (p - s.alpha);
                const double B = 32.0 * xiE / s.alpha;
                const double c_star =
                    std::pow(s.alpha * B / ((p - s.alpha) * A), 1.0 / p);
                return r_term + stable_control_kernel(s.alpha, p, c_star, I, xiE);
            }
            const double xiE = s.k.sum_power(s.alpha);
            return r_term + stable_control_kernel(s.alpha, p, cutoff.c, I, xiE);
        }
        case MeasureFamily::TemperedStable:
            if (cutoff.is_auto) return temp_bound(m, x, y, kind);
            return detail::tempered_control_finite_c(m, x, y, p, cutoff.c, kind);
    }
    throw ValidationError("control_bound: unknown measure family");
}

// ---------------------------------------------------------------------------
// Cross sums sum_{l>=0} (s_l s_{l+n})^(q/2) with a certified Cauchy-Schwarz
// tail remainder included, so every returned value is a true upper bound.
// ---------------------------------------------------------------------------
namespace detail {

inline std::vector<double> cross_sum_table(const SeqSpec& seq, double q,
                                           std::int64_t n_max) {
    if (seq.domain() != Domain::N) {
        throw ValidationError("cross sums require an N-indexed sequence");
    }
    if (n_max < 0) throw ValidationError("cross sum: n_max must be nonnegative");
    const double half_q = q / 2.0;
    std::int64_t L = 4096;
    const std::int64_t L_cap = std::int64_t{1} << 21;
    // Grow L until the Cauchy-Schwarz tail at n = 0 is negligible relative to
    // the partial sum, or the cap is reached (the tail stays in the result
    // either way, keeping it an upper bound).
    std::vector<double> v;
    while (true) {
        const std::int64_t need = L;
        v.resize(static_cast<std::size_t>(need));
        for (std::int64_t l = 0; l < need; ++l) {
            const double s = seq.value(l);
            v[static_cast<std::size_t>(l)] = s == 0.0 ? 0.0 : std::pow(s, half_q);
        }
        double partial0 = 0.0;
        for (std::int64_t l = 0; l < L; ++l) {
            const double t = v[static_cast<std::size_t>(l)];
            partial0 += t * t;
        }
        const double tail0 = seq.tail_bound(q, L);
        if (tail0 <= 1e-12 * partial0 || L >= L_cap) break;
        L *= 2;
    }
    // Extend the value table to cover shifted indices.
    v.resize(static_cast<std::size_t>(L + n_max));
    for (std::int64_t l = L; l < L + n_max; ++l) {
        const double s = seq.value(l);
        v[static_cast<std::size_t>(l)] = s == 0.0 ? 0.0 : std::pow(s, half_q);
    }
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    const double tail_L = seq.tail_bound(q, L);
    for (std::int64_t n = 0; n <= n_max; ++n) {
        double sum = 0.0;
        const double* a = v.data();
        const double* b = v.data() + n;
        for (std::int64_t l = 0; l < L; ++l) sum += a[l] * b[l];
        out[static_cast<std::size_t>(n)] =
            sum + std::sqrt(tail_L * seq.tail_bound(q, L + n));
    }
    return out;
}

// Single-shift variant: O(L) per call instead of O(L * n).
inline double cross_sum_single(const SeqSpec& seq, double q, std::int64_t n) {
    if (seq.domain() != Domain::N) {
        throw ValidationError("cross sums require an N-indexed sequence");
    }
    if (n < 0) throw ValidationError("cross sum: shift must be nonnegative");
    const double half_q = q / 2.0;
    std::int64_t L = 4096;
    const std::int64_t L_cap = std::int64_t{1} << 21;
    double partial = 0.0;
    std::int64_t done = 0;
    while (true) {
        for (std::int64_t l = done; l < L; ++l) {
            const double a = seq.value(l);
            const double b = seq.value(l + n);
            if (a != 0.0 && b != 0.0) partial += std::pow(a * b, half_q);
        }
        done = L;
        const double tail0 = seq.tail_bound(q, L);
        if (tail0 <= 1e-12 * partial || L >= L_cap) break;
        L *= 2;
    }
    return partial + std::sqrt(seq.tail_bound(q, L) * seq.tail_bound(q, L + n));
}

} // namespace detail

// 2^(4-p) sum_{l>=0} (lambda_l lambda_{l+n})^(p/2): sup-normalized shift
// codifference bound for the compound Poisson family. The table form shares
// one certified atom table across n = 0..n_max.
inline std::vector<double> poisson_shift_bound_table(const SeqSpec& lambda, double p,
                                                     std::int64_t n_max) {
    if (!(p >= 1.0 && p < 2.0)) {
        throw ValidationError("poisson shift bound requires p in [1,2)");
    }
    if (!lambda.ell_member(p)) {
        throw ValidationError("poisson shift bound requires lambda in ell^p");
    }
    std::vector<double> table = detail::cross_sum_table(lambda, p, n_max);
    const double factor = std::pow(2.0, 4.0 - p);
    for (double& value : table) value *= factor;
    return table;
}

inline double poisson_shift_bound(const SeqSpec& lambda, double p, std::int64_t n) {
    if (!(p >= 1.0 && p < 2.0)) {
        throw ValidationError("poisson shift bound requires p in [1,2)");
    }
    if (!lambda.ell_member(p)) {
        throw ValidationError("poisson shift bound requires lambda in ell^p");
    }
    return std::pow(2.0, 4.0 - p) * detail::cross_sum_single(lambda, p, n);
}

// Power-law rate formulas; the sum-level bound (without the 2^(4-p) factor)
// bounds sum_l (lambda_l lambda_{l+n})^(p/2) itself for lambda_l =
// lambda0 (l+1)^(-gamma/p).
inline double poisson_sum_rate(double lambda0, double gamma, double p, std::int64_t n,
                               double epsilon = 0.5) {
    if (!(gamma > 1.0)) throw ValidationError("rate formula requires gamma > 1");
    if (n < 1) throw ValidationError("rate formula requires n >= 1");
    if (gamma < 2.0) {
        return std::pow(lambda0, p) * beta_fn(1.0 - gamma / 2.0, gamma - 1.0) *
               std::pow(static_cast<double>(n), -(gamma - 1.0));
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw ValidationError("rate formula requires epsilon in (0,1) when gamma >= 2");
    }
    return std::pow(lambda0, p) * beta_fn(epsilon / 2.0, 1.0 - epsilon) *
           std::pow(static_cast<double>(n), -(1.0 - epsilon));
}

inline double poisson_rate(double lambda0, double gamma, double p, std::int64_t n,
                           double epsilon = 0.5) {
    return std::pow(2.0, 4.0 - p) * poisson_sum_rate(lambda0, gamma, p, n, epsilon);
}

// ---------------------------------------------------------------------------
// Two-sided stable shift rate: decay envelope and the explicit three-term
// pre-rate sum bound in the tail parameters eta_-, eta_+.
// ---------------------------------------------------------------------------
struct StableRateBound {
    double envelope = 1.0;
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;
    double sum_bound = 0.0;
};

inline StableRateBound stable_shift_rate(const RateParams& rp, double alpha, double p,
                                         std::int64_t n) {
    if (!(alpha > 0.0 && alpha < 2.0) || alpha == 1.0) {
        throw ValidationError("stable shift rate requires alpha in (0,2) excluding 1");
    }
    if (!(p > alpha && p <= 2.0 && p >= 1.0)) {
        throw ValidationError("stable shift rate requires p in (alpha,2] and [1,2]");
    }
    if (!(rp.eta_minus > 0.0 && rp.eta_minus < 1.0 && rp.eta_plus > 0.0 &&
          rp.eta_plus < 1.0)) {
        throw ValidationError("stable shift rate requires eta parameters in (0,1)");
    }
    if (n < 0) throw ValidationError("stable shift rate requires n >= 0");
    const double em = rp.eta_minus;
    const double ep = rp.eta_plus;
    const double ep_half = std::pow(ep, p / 2.0);
    const double em_mix = std::pow(em, alpha - p / 2.0);
    if (ep_half == em_mix) {
        throw NumericError(
            "stable shift rate: the regime split is singular when "
            "eta_plus^(p/2) equals eta_minus^(alpha - p/2); perturb the weights");
    }
    StableRateBound out;
    out.envelope = std::pow(std::max(std::pow(em, 2.0 * alpha / p - 1.0), ep),
                            alpha * static_cast<double>(n) / 2.0);
    out.k1 = 1.0 / (1.0 - std::pow(ep, alpha)) + em_mix / (ep_half - em_mix);
    out.k2 = 1.0 / (1.0 - std::pow(em, alpha));
    out.k3 = -(em_mix / (ep_half - em_mix)) * (em_mix / ep_half);
    const double nd = static_cast<double>(n);
    out.sum_bound = out.k1 * std::pow(ep, p * nd / 2.0) +
                    (out.k2 + out.k3) * std::pow(em, (alpha - p / 2.0) * nd);
    return out;
}

// ---------------------------------------------------------------------------
// Tempered-stable bounds.
// ---------------------------------------------------------------------------
namespace detail {

inline double tempered_prefactor(double alpha, double a_minus, double a_plus,
                                 double lam_minus, double lam_plus, double p) {
    if (!(p > alpha)) throw NumericError("tempered bound requires p > alpha");
    return (a_minus * std::pow(lam_minus, alpha - p) +
            a_plus * std::pow(lam_plus, alpha - p)) *
           gamma_fn(p - alpha);
}

} // namespace detail

// Closed-form (cutoff-free) tempered codifference bound:
// |R-term|/2 + 2^(4-p) (a- lam-^(alpha-p) + a+ lam+^(alpha-p)) Gamma(p-alpha)
//   * sum_n k_n^p [channel + channel], over the common support.
inline double temp_bound(const MeasureSpec& m, const Functional& x, const Functional& y,
                         CodiffKind kind) {
    detail::require_bound_kind(kind);
    if (m.family() != MeasureFamily::TemperedStable) {
        throw ValidationError("temp_bound applies to the tempered stable family");
    }
    const auto& t = m.tempered();
    const double pref =
        std::pow(2.0, 4.0 - t.p) *
        detail::tempered_prefactor(t.alpha, t.a_minus, t.a_plus, t.lam_minus, t.lam_plus,
                                   t.p);
    double atom_sum = 0.0;
    auto it_x = x.coeffs().begin();
    auto it_y = y.coeffs().begin();
    while (it_x != x.coeffs().end() && it_y != y.coeffs().end()) {
        if (it_x->first < it_y->first) { ++it_x; continue; }
        if (it_y->first < it_x->first) { ++it_y; continue; }
        const double k = t.k.value(it_x->first);
        if (k != 0.0) {
            atom_sum +=
                std::pow(k, t.p) *
                (detail::channel_product(kind, it_x->second, it_y->second, t.p / 2.0,
                                         false) +
                 detail::channel_product(kind, it_x->second, it_y->second, t.p / 2.0,
                                         true));
        }
        ++it_x;
        ++it_y;
    }
    return detail::gaussian_term(m, x, y, kind) + pref * atom_sum;
}

// Sup-normalized tempered shift bound
// 2^(5-p) (a- lam-^(alpha-p) + a+ lam+^(alpha-p)) Gamma(p-alpha)
//   * sum_{l>=0} k_l^(p/2) k_{l+n}^(p/2).
inline std::vector<double> temp_shift_bound_table(const SeqSpec& k, double alpha,
                                                  double a_minus, double a_plus,
                                                  double lam_minus, double lam_plus,
                                                  double p, std::int64_t n_max) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("tempered shift bound requires alpha in (0,1)");
    }
    if (!(p >= 1.0 && p <= 2.0)) {
        throw ValidationError("tempered shift bound requires p in [1,2]");
    }
    const double pref =
        std::pow(2.0, 5.0 - p) *
        detail::tempered_prefactor(alpha, a_minus, a_plus, lam_minus, lam_plus, p);
    std::vector<double> table = detail::cross_sum_table(k, p, n_max);
    for (double& value : table) value *= pref;
    return table;
}

inline double temp_shift_bound(const SeqSpec& k, double alpha, double a_minus,
                               double a_plus, double lam_minus, double lam_plus, double p,
                               std::int64_t n) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("tempered shift bound requires alpha in (0,1)");
    }
    if (!(p >= 1.0 && p <= 2.0)) {
        throw ValidationError("tempered shift bound requires p in [1,2]");
    }
    const double pref =
        std::pow(2.0, 5.0 - p) *
        detail::tempered_prefactor(alpha, a_minus, a_plus, lam_minus, lam_plus, p);
    return pref * detail::cross_sum_single(k, p, n);
}

// Power-law tempered rate formulas (k_l = k0 (l+1)^(-gamma/p)).
inline double temp_rate_sum_bound(double k0, double gamma, double p, std::int64_t n,
                                  double epsilon = 0.5) {
    return poisson_sum_rate(k0, gamma, p, n, epsilon);
}

inline double temp_rate(double k0, double gamma, double p, std::int64_t n, double alpha,
                        double a_minus, double a_plus, double lam_minus, double lam_plus,
                        double epsilon = 0.5) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("tempered rate requires alpha in (0,1)");
    }
    const double pref =
        std::pow(2.0, 5.0 - p) *
        detail::tempered_prefactor(alpha, a_minus, a_plus, lam_minus, lam_plus, p);
    return pref * temp_rate_sum_bound(k0, gamma, p, n, epsilon);
}

} // namespace shiftmix
