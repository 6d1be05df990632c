#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shiftmix/codiff.hpp"
#include "shiftmix/errors.hpp"
#include "shiftmix/measures.hpp"
#include "shiftmix/seqspace.hpp"
#include "shiftmix/shifts.hpp"

namespace shiftmix {

// Pushforward of an atomic jump measure under z -> Re<z, f>: one unit-mass
// atom per support index of f at lambda_n * Re f_n (zero locations dropped).
struct AtomicLevyMeasure1D {
    std::vector<std::pair<double, double>> atoms; // (location, mass)
};

inline AtomicLevyMeasure1D pushforward_levy(const MeasureSpec& m, const Functional& f) {
    if (m.family() != MeasureFamily::CompoundPoisson) {
        throw ValidationError(
            "pushforward_levy: only the compound Poisson family has an atomic jump "
            "measure with finite mass per coordinate");
    }
    if (f.domain() != m.domain()) {
        throw ValidationError("pushforward_levy: functional domain mismatch");
    }
    AtomicLevyMeasure1D out;
    for (const auto& [index, value] : f.coeffs()) {
        const double loc = m.cp().lambda.value(index) * value.real();
        if (loc != 0.0) out.atoms.emplace_back(loc, 1.0);
    }
    return out;
}

// A scale a degenerates the single-functional codifference exactly when every
// atom location s satisfies a*s in 2*pi*Z; Z1 is that set of degenerate scales.
inline bool in_Z1(const AtomicLevyMeasure1D& nu, double a) {
    for (const auto& [loc, mass] : nu.atoms) {
        (void)mass;
        const double turns = a * loc / (2.0 * pi_d);
        const double nearest = std::round(turns);
        if (std::abs(turns - nearest) > 1e-9 * std::max(1.0, std::abs(turns))) {
            return false;
        }
    }
    return true;
}

// Smallest-denominator rational scale with |a| in (0,1] outside Z1. Scans
// a = 1 first, then k/d with growing denominators.
inline double pick_admissible_scale(const AtomicLevyMeasure1D& nu) {
    if (nu.atoms.empty()) {
        throw ValidationError("pick_admissible_scale: empty pushforward measure");
    }
    if (!in_Z1(nu, 1.0)) return 1.0;
    for (int d = 2; d <= 64; ++d) {
        for (int k = 1; k < d; ++k) {
            if (std::gcd(k, d) != 1) continue;
            const double a = static_cast<double>(k) / static_cast<double>(d);
            if (!in_Z1(nu, a)) return a;
        }
    }
    throw NumericError(
        "pick_admissible_scale: every scanned scale degenerates; the pushforward "
        "measure has no usable atom");
}

enum class Verdict { NotMixing, MixingEvidence, Inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::NotMixing: return "not-mixing";
        case Verdict::MixingEvidence: return "mixing-evidence";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct MixingWitness {
    Functional probe;
    double scale = 1.0;
    complexd value;
};

struct MixingVerdict {
    Verdict verdict = Verdict::Inconclusive;
    std::optional<MixingWitness> witness; // set for NotMixing
    std::string detail;
};

namespace detail {

// Evidence rule for one |codifference| sequence over n = 0..n_max: the tail
// window (last max(5, 25%) points) must sit below tol, and the sequence must
// either fit a decaying model (>= 5 nonzero points, r^2 >= 0.98) or be exactly
// zero across the whole tail window (shift probes with separating supports).
inline bool sequence_supports_mixing(const std::vector<double>& abs_values, double tol,
                                     std::string& why_not) {
    const std::size_t count = abs_values.size();
    const std::size_t window =
        std::max<std::size_t>(5, (count + 3) / 4); // ceil(25%)
    if (count < window) {
        why_not = "too few points for a tail window";
        return false;
    }
    for (std::size_t i = count - window; i < count; ++i) {
        if (!(abs_values[i] < tol)) {
            why_not = "tail window exceeds tolerance at n=" + std::to_string(i);
            return false;
        }
    }
    std::vector<std::pair<std::int64_t, double>> nonzero;
    for (std::size_t i = 0; i < count; ++i) {
        if (abs_values[i] > 0.0) nonzero.emplace_back(static_cast<std::int64_t>(i),
                                                      abs_values[i]);
    }
    if (nonzero.size() >= 5) {
        const FitResult fit = fit_decay(nonzero);
        if (!fit.decaying() || fit.r2 < 0.98) {
            why_not = "no decaying fit (r2=" + std::to_string(fit.r2) + ")";
            return false;
        }
        return true;
    }
    for (std::size_t i = count - window; i < count; ++i) {
        if (abs_values[i] != 0.0) {
            why_not = "sparse sequence is not exactly zero on the tail window";
            return false;
        }
    }
    return true;
}

} // namespace detail

// Decides between a constructive non-mixing witness (adjoint fixed point with
// non-degenerate codifference) and empirical mixing evidence from decaying
// codifference sequences along the adjoint orbit of each probe.
inline MixingVerdict mixing_verdict(const MeasureSpec& m, const WeightedShiftOperator& T,
                                    const std::vector<Functional>& probes,
                                    std::int64_t n_max, double tol) {
    if (probes.empty()) throw ValidationError("mixing_verdict: need at least one probe");
    if (n_max < 4) throw ValidationError("mixing_verdict: n_max must be at least 4");
    if (!(tol > 0.0)) throw ValidationError("mixing_verdict: tolerance must be positive");
    if (T.domain() != m.domain()) {
        throw ValidationError("mixing_verdict: operator/measure domain mismatch");
    }
    for (const Functional& probe : probes) {
        if (probe.empty()) throw ValidationError("mixing_verdict: zero probe");
        if (probe.domain() != m.domain()) {
            throw ValidationError("mixing_verdict: probe domain mismatch");
        }
    }

    // Witness pass: an exactly fixed adjoint probe freezes the codifference
    // sequence at its n = 0 value; a non-degenerate scale exposes it.
    for (const Functional& probe : probes) {
        if (T.adjoint_power(1, probe) != probe) continue;
        double a = 1.0;
        if (m.family() == MeasureFamily::CompoundPoisson) {
            const AtomicLevyMeasure1D nu = pushforward_levy(m, probe);
            if (nu.atoms.empty()) continue;
            a = pick_admissible_scale(nu);
        }
        const Functional scaled = probe * complexd{a, 0.0};
        const complexd v0 = codiff_equal(m, scaled, scaled).value;
        if (std::abs(v0) > tol) {
            MixingVerdict out;
            out.verdict = Verdict::NotMixing;
            out.witness = MixingWitness{probe, a, v0};
            out.detail = "adjoint fixed probe with non-degenerate codifference at scale " +
                         std::to_string(a);
            return out;
        }
    }

    // Evidence pass: every probe, both codifference kinds.
    for (std::size_t pi = 0; pi < probes.size(); ++pi) {
        const Functional& probe = probes[pi];
        std::vector<double> eq_abs, neq_abs;
        eq_abs.reserve(static_cast<std::size_t>(n_max) + 1);
        neq_abs.reserve(static_cast<std::size_t>(n_max) + 1);
        for (std::int64_t n = 0; n <= n_max; ++n) {
            const Functional shifted = T.adjoint_power(n, probe);
            eq_abs.push_back(std::abs(codiff_equal(m, probe, shifted).value));
            neq_abs.push_back(std::abs(codiff_notequal(m, probe, shifted).value));
        }
        std::string why;
        if (!detail::sequence_supports_mixing(eq_abs, tol, why)) {
            return MixingVerdict{Verdict::Inconclusive, std::nullopt,
                                 "probe " + std::to_string(pi) + " equal-kind: " + why};
        }
        if (!detail::sequence_supports_mixing(neq_abs, tol, why)) {
            return MixingVerdict{Verdict::Inconclusive, std::nullopt,
                                 "probe " + std::to_string(pi) + " notequal-kind: " + why};
        }
    }
    return MixingVerdict{Verdict::MixingEvidence, std::nullopt,
                         "all probe codifference sequences decay below tolerance"};
}

} // namespace shiftmix
