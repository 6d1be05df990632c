#pragma once

#include <cmath>
#include <string>

#include "shiftmix/errors.hpp"

namespace shiftmix {

// Gamma function. Poles at 0, -1, -2, ... are rejected; negative non-integer
// arguments are supported (needed for Gamma(-alpha), alpha in (0,1)).
inline double gamma_fn(double x) {
    if (x <= 0.0 && x == std::floor(x)) {
        throw ValidationError("gamma_fn: pole at non-positive integer argument " +
                              std::to_string(x));
    }
    return std::tgamma(x);
}

// Beta function for strictly positive arguments, evaluated in log space.
inline double beta_fn(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw ValidationError("beta_fn: arguments must be positive");
    }
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

namespace detail {

// Regularized lower incomplete gamma P(s,x) by power series; valid and fast
// for x < s + 1.
inline double gamma_p_series(double s, double x) {
    double ap = s;
    double sum = 1.0 / s;
    double del = sum;
    for (int i = 0; i < 1000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-17) {
            return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
        }
    }
    throw NumericError("incomplete gamma series failed to converge");
}

// Regularized upper incomplete gamma Q(s,x) by Lentz continued fraction;
// valid and fast for x >= s + 1.
inline double gamma_q_contfrac(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-17) {
            return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
        }
    }
    throw NumericError("incomplete gamma continued fraction failed to converge");
}

} // namespace detail

// Regularized lower incomplete gamma P(s,x) = gamma(s,x)/Gamma(s), s > 0.
inline double gamma_p(double s, double x) {
    if (!(s > 0.0)) throw ValidationError("gamma_p: s must be positive");
    if (x < 0.0) throw ValidationError("gamma_p: x must be nonnegative");
    if (x == 0.0) return 0.0;
    return (x < s + 1.0) ? detail::gamma_p_series(s, x)
                         : 1.0 - detail::gamma_q_contfrac(s, x);
}

// Regularized upper incomplete gamma Q(s,x) = Gamma(s,x)/Gamma(s), s > 0.
inline double gamma_q(double s, double x) {
    if (!(s > 0.0)) throw ValidationError("gamma_q: s must be positive");
    if (x < 0.0) throw ValidationError("gamma_q: x must be nonnegative");
    if (x == 0.0) return 1.0;
    return (x < s + 1.0) ? 1.0 - detail::gamma_p_series(s, x)
                         : detail::gamma_q_contfrac(s, x);
}

// Unregularized lower incomplete gamma, s > 0.
inline double inc_gamma_lower(double s, double x) {
    return gamma_p(s, x) * std::exp(std::lgamma(s));
}

// Unregularized upper incomplete gamma, s > 0.
inline double inc_gamma_upper(double s, double x) {
    return gamma_q(s, x) * std::exp(std::lgamma(s));
}

// Upper incomplete gamma at negative non-integer parameter s in (-1, 0),
// x > 0, via the recursion Gamma(s, x) = (Gamma(s+1, x) - x^s e^{-x}) / s.
inline double inc_gamma_upper_neg(double s, double x) {
    if (!(s > -1.0 && s < 0.0)) {
        throw ValidationError("inc_gamma_upper_neg: parameter must lie in (-1, 0)");
    }
    if (!(x > 0.0)) {
        throw ValidationError("inc_gamma_upper_neg: x must be positive");
    }
    return (inc_gamma_upper(s + 1.0, x) - std::pow(x, s) * std::exp(-x)) / s;
}

} // namespace shiftmix
