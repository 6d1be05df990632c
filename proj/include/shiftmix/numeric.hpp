#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace shiftmix {

using complexd = std::complex<double>;

inline constexpr double pi_d = 3.141592653589793238462643383279502884;

// e^{ix} - 1 evaluated as 2i sin(x/2) e^{ix/2}, which keeps full relative
// accuracy for small |x| where the direct form cancels.
inline complexd expi_m1(double x) {
    const double h = 0.5 * x;
    const double s = std::sin(h);
    return complexd(-2.0 * s * s, 2.0 * s * std::cos(h));
}

// exp(z) - 1 with full relative accuracy near z = 0.
// Real part: expm1(a) cos b - 2 sin^2(b/2); imaginary part: e^a sin b.
inline complexd cexpm1(complexd z) {
    const double a = z.real();
    const double b = z.imag();
    const double sh = std::sin(0.5 * b);
    return complexd(std::expm1(a) * std::cos(b) - 2.0 * sh * sh,
                    std::exp(a) * std::sin(b));
}

// log(1+z) with full relative accuracy near z = 0.
// |1+z|^2 = 1 + (2a + a^2 + b^2), handled through log1p; the angle through
// atan2(b, 1+a). Falls back to the direct logarithm away from the origin.
inline complexd clog1p(complexd z) {
    const double a = z.real();
    const double b = z.imag();
    const double t = 2.0 * a + a * a + b * b;
    if (std::abs(z) > 0.5 || t <= -0.5) {
        return std::log(complexd(1.0 + a, b));
    }
    return complexd(0.5 * std::log1p(t), std::atan2(b, 1.0 + a));
}

inline bool nearly_equal(double x, double y, double rel, double abs_tol = 0.0) {
    const double d = std::abs(x - y);
    return d <= abs_tol + rel * std::max(std::abs(x), std::abs(y));
}

inline double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

} // namespace shiftmix
