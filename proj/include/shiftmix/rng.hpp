#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "shiftmix/errors.hpp"
#include "shiftmix/numeric.hpp"
#include "shiftmix/specfun.hpp"

namespace shiftmix {

// Counter-based Philox4x32-10 block function. Streams are addressed by
// (seed, sample index, stream id, draw counter), which makes every sample's
// draw sequence independent of threading and evaluation order.
namespace philox {

inline constexpr std::uint32_t kMult0 = 0xD2511F53u;
inline constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint64_t sample_index,
                                          std::uint32_t stream, std::uint32_t counter) {
    std::uint32_t k0 = static_cast<std::uint32_t>(seed);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
    std::uint32_t x0 = static_cast<std::uint32_t>(sample_index);
    std::uint32_t x1 = static_cast<std::uint32_t>(sample_index >> 32);
    std::uint32_t x2 = stream;
    std::uint32_t x3 = counter;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * x0;
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * x2;
        const std::uint32_t y0 = static_cast<std::uint32_t>(p1 >> 32) ^ x1 ^ k0;
        const std::uint32_t y1 = static_cast<std::uint32_t>(p1);
        const std::uint32_t y2 = static_cast<std::uint32_t>(p0 >> 32) ^ x3 ^ k1;
        const std::uint32_t y3 = static_cast<std::uint32_t>(p0);
        x0 = y0;
        x1 = y1;
        x2 = y2;
        x3 = y3;
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return {x0, x1, x2, x3};
}

} // namespace philox

// Per-sample draw stream with a 32-bit block counter; refills lazily.
class DrawStream {
public:
    DrawStream(std::uint64_t seed, std::uint64_t sample_index, std::uint32_t stream)
        : seed_(seed), sample_index_(sample_index), stream_(stream) {}

    std::uint32_t next_u32() {
        if (pos_ == 4) {
            buffer_ = philox::block(seed_, sample_index_, stream_, counter_++);
            pos_ = 0;
        }
        return buffer_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        const std::uint64_t lo = next_u32();
        return (hi << 32) | lo;
    }

    // Uniform on [0, 1): 53-bit mantissa.
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1): shifted lattice, never returns an endpoint.
    double u01_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard exponential.
    double exponential() { return -std::log1p(-u01()); }

private:
    std::uint64_t seed_;
    std::uint64_t sample_index_;
    std::uint32_t stream_;
    std::uint32_t counter_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int pos_ = 4;
};

namespace samplers {

// Poisson: multiplicative inversion for small means, PTRS transformed
// rejection for large means.
inline std::int64_t poisson(DrawStream& g, double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw ValidationError("poisson sampler: mean must be finite and nonnegative");
    }
    if (mean == 0.0) return 0;
    if (mean <= 30.0) {
        const double limit = std::exp(-mean);
        std::int64_t k = 0;
        double prod = 1.0;
        do {
            prod *= g.u01_open();
            ++k;
        } while (prod > limit);
        return k - 1;
    }
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const double u = g.u01() - 0.5;
        const double v = g.u01_open();
        const double us = 0.5 - std::abs(u);
        const double kd = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kd);
        if (kd < 0.0 || (us < 0.013 && v > us)) continue;
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        const double rhs = kd * log_mean - mean - std::lgamma(kd + 1.0);
        if (lhs <= rhs) return static_cast<std::int64_t>(kd);
    }
    throw NumericError("poisson sampler: rejection loop failed to accept");
}

// Symmetric alpha-stable with characteristic function exp(-|t|^alpha)
// (Chambers-Mallows-Stuck construction).
inline double sym_stable(DrawStream& g, double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) {
        throw ValidationError("stable sampler: alpha must lie in (0,2)");
    }
    const double v = pi_d * (g.u01_open() - 0.5); // uniform on (-pi/2, pi/2)
    const double w = g.exponential();
    if (alpha == 1.0) return std::tan(v);
    const double sin_av = std::sin(alpha * v);
    const double cos_v = std::cos(v);
    const double cos_rest = std::cos((1.0 - alpha) * v);
    return sin_av / std::pow(cos_v, 1.0 / alpha) *
           std::pow(cos_rest / w, (1.0 - alpha) / alpha);
}

// One-sided alpha-stable (alpha < 1) with Laplace transform exp(-s^alpha)
// (Kanter construction).
inline double one_sided_stable(DrawStream& g, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("one-sided stable sampler: alpha must lie in (0,1)");
    }
    const double u = pi_d * g.u01_open(); // uniform on (0, pi)
    const double w = g.exponential();
    const double ratio = alpha / (1.0 - alpha);
    const double a_u = std::pow(std::sin(alpha * u), ratio) *
                       std::sin((1.0 - alpha) * u) /
                       std::pow(std::sin(u), 1.0 / (1.0 - alpha));
    return std::pow(a_u / w, (1.0 - alpha) / alpha);
}

// One-sided tempered stable subordinate with Levy density
// a exp(-lam u) u^(-1-alpha) on (0, inf): exponential tilting by rejection.
// Acceptance probability is exp(a Gamma(-alpha) lam^alpha).
inline double tempered_one_sided(DrawStream& g, double alpha, double a, double lam) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("tempered sampler: alpha must lie in (0,1)");
    }
    if (!(a > 0.0 && lam > 0.0)) {
        throw ValidationError("tempered sampler: a and lam must be positive");
    }
    const double scale = std::pow(a * std::abs(gamma_fn(-alpha)), 1.0 / alpha);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const double s = scale * one_sided_stable(g, alpha);
        if (g.u01_open() <= std::exp(-lam * s)) return s;
    }
    throw NumericError(
        "tempered sampler: tilting rejection failed to accept within the cap; "
        "the acceptance probability exp(a*Gamma(-alpha)*lam^alpha) is too small");
}

// Standard normal pair via Box-Muller (fixed draw count of two uniforms).
inline std::pair<double, double> normal_pair(DrawStream& g) {
    const double r = std::sqrt(-2.0 * std::log(g.u01_open()));
    const double theta = 2.0 * pi_d * g.u01_open();
    return {r * std::cos(theta), r * std::sin(theta)};
}

} // namespace samplers

} // namespace shiftmix
