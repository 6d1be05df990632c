#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "shiftmix/errors.hpp"
#include "shiftmix/seqspace.hpp"

namespace shiftmix {

enum class Direction { BackwardOnN, ForwardOnZ, Identity };

// Closed-form weight families. Rules are data, not callbacks, so suprema and
// tail products stay analytically computable.
enum class WeightKind {
    PowerRatioUnitFirst, // w_0 = 1, w_n = (1 + 1/n)^(gamma/p) for n >= 1
    PowerRatio,          // w_n = ((n+2)/(n+1))^(gamma/p) for n >= 0
    Constant,            // w_n = c
    HeadThenConstant,    // explicit head values, then a constant tail
    TwoSided             // on Z: overrides, else left_tail (l <= 0) / right_tail (l >= 1)
};

struct WeightRule {
    WeightKind kind = WeightKind::Constant;
    double gamma = 0.0;
    double p = 0.0;
    double c = 1.0;
    std::vector<double> head;
    double tail = 1.0;
    std::map<std::int64_t, double> overrides;
    double left_tail = 1.0;
    double right_tail = 1.0;

    static WeightRule power_ratio_unit_first(double gamma, double p) {
        WeightRule r;
        r.kind = WeightKind::PowerRatioUnitFirst;
        r.gamma = gamma;
        r.p = p;
        r.validate();
        return r;
    }
    static WeightRule power_ratio(double gamma, double p) {
        WeightRule r;
        r.kind = WeightKind::PowerRatio;
        r.gamma = gamma;
        r.p = p;
        r.validate();
        return r;
    }
    static WeightRule constant(double c) {
        WeightRule r;
        r.kind = WeightKind::Constant;
        r.c = c;
        r.validate();
        return r;
    }
    static WeightRule head_then_constant(std::vector<double> head, double tail) {
        WeightRule r;
        r.kind = WeightKind::HeadThenConstant;
        r.head = std::move(head);
        r.tail = tail;
        r.validate();
        return r;
    }
    static WeightRule two_sided(std::map<std::int64_t, double> overrides,
                                double left_tail, double right_tail) {
        WeightRule r;
        r.kind = WeightKind::TwoSided;
        r.overrides = std::move(overrides);
        r.left_tail = left_tail;
        r.right_tail = right_tail;
        r.validate();
        return r;
    }

    double exponent() const { return gamma / p; }

    void validate() const {
        switch (kind) {
            case WeightKind::PowerRatioUnitFirst:
            case WeightKind::PowerRatio:
                if (!(gamma > 1.0)) throw ValidationError("weight rule: gamma must exceed 1");
                if (!(p >= 1.0 && p <= 2.0)) throw ValidationError("weight rule: p must lie in [1,2]");
                break;
            case WeightKind::Constant:
                if (!(c > 0.0) || !std::isfinite(c)) {
                    throw ValidationError("weight rule: constant must be positive and finite");
                }
                break;
            case WeightKind::HeadThenConstant:
                for (double w : head) {
                    if (!(w > 0.0) || !std::isfinite(w)) {
                        throw ValidationError("weight rule: head weights must be positive and finite");
                    }
                }
                if (!(tail > 0.0) || !std::isfinite(tail)) {
                    throw ValidationError("weight rule: tail weight must be positive and finite");
                }
                break;
            case WeightKind::TwoSided:
                for (const auto& [index, w] : overrides) {
                    if (!(w > 0.0) || !std::isfinite(w)) {
                        throw ValidationError("weight rule: override at index " +
                                              std::to_string(index) +
                                              " must be positive and finite");
                    }
                }
                if (!(left_tail > 0.0) || !std::isfinite(left_tail) ||
                    !(right_tail > 0.0) || !std::isfinite(right_tail)) {
                    throw ValidationError("weight rule: two-sided tails must be positive and finite");
                }
                break;
        }
    }

    bool one_sided() const { return kind != WeightKind::TwoSided; }
};

// Weight at a single index.
inline double weight_value(const WeightRule& rule, std::int64_t index) {
    switch (rule.kind) {
        case WeightKind::PowerRatioUnitFirst:
            if (index < 0) throw ValidationError("weight index must be nonnegative");
            if (index == 0) return 1.0;
            return std::pow(1.0 + 1.0 / static_cast<double>(index), rule.exponent());
        case WeightKind::PowerRatio:
            if (index < 0) throw ValidationError("weight index must be nonnegative");
            return std::pow((static_cast<double>(index) + 2.0) /
                                (static_cast<double>(index) + 1.0),
                            rule.exponent());
        case WeightKind::Constant:
            return rule.c;
        case WeightKind::HeadThenConstant:
            if (index < 0) throw ValidationError("weight index must be nonnegative");
            if (static_cast<std::size_t>(index) < rule.head.size()) {
                return rule.head[static_cast<std::size_t>(index)];
            }
            return rule.tail;
        case WeightKind::TwoSided: {
            const auto it = rule.overrides.find(index);
            if (it != rule.overrides.end()) return it->second;
            return index <= 0 ? rule.left_tail : rule.right_tail;
        }
    }
    throw ValidationError("weight rule: unknown kind");
}

namespace detail {

// Product of a constant weight over `count` indices; pow keeps powers of two
// exact and spans hundreds of orders of magnitude without drift.
inline double const_run_product(double w, std::int64_t count) {
    if (count <= 0) return 1.0;
    return std::pow(w, static_cast<double>(count));
}

} // namespace detail

// Product of weights over the inclusive index range [lo, hi]; empty when
// lo > hi. Power-ratio families telescope to a single quotient, constant runs
// use pow, so long adjoint-power products stay exact where the inputs are.
inline double weight_product(const WeightRule& rule, std::int64_t lo, std::int64_t hi) {
    if (lo > hi) return 1.0;
    switch (rule.kind) {
        case WeightKind::PowerRatioUnitFirst: {
            if (lo < 0) throw ValidationError("weight index must be nonnegative");
            const std::int64_t a = std::max<std::int64_t>(lo, 1);
            if (a > hi) return 1.0;
            // prod_{j=a}^{hi} ((j+1)/j)^e = ((hi+1)/a)^e
            return std::pow(static_cast<double>(hi + 1) / static_cast<double>(a),
                            rule.exponent());
        }
        case WeightKind::PowerRatio:
            if (lo < 0) throw ValidationError("weight index must be nonnegative");
            // prod_{j=lo}^{hi} ((j+2)/(j+1))^e = ((hi+2)/(lo+1))^e
            return std::pow(static_cast<double>(hi + 2) / static_cast<double>(lo + 1),
                            rule.exponent());
        case WeightKind::Constant:
            return detail::const_run_product(rule.c, hi - lo + 1);
        case WeightKind::HeadThenConstant: {
            if (lo < 0) throw ValidationError("weight index must be nonnegative");
            double prod = 1.0;
            const std::int64_t head_end =
                std::min<std::int64_t>(hi, static_cast<std::int64_t>(rule.head.size()) - 1);
            for (std::int64_t j = lo; j <= head_end; ++j) {
                prod *= rule.head[static_cast<std::size_t>(j)];
            }
            const std::int64_t tail_lo =
                std::max<std::int64_t>(lo, static_cast<std::int64_t>(rule.head.size()));
            return prod * detail::const_run_product(rule.tail, hi - tail_lo + 1);
        }
        case WeightKind::TwoSided: {
            double prod = 1.0;
            std::int64_t left_count = std::min<std::int64_t>(hi, 0) - lo + 1;
            std::int64_t right_count = hi - std::max<std::int64_t>(lo, 1) + 1;
            if (left_count < 0) left_count = 0;
            if (right_count < 0) right_count = 0;
            for (auto it = rule.overrides.lower_bound(lo);
                 it != rule.overrides.end() && it->first <= hi; ++it) {
                prod *= it->second;
                if (it->first <= 0) --left_count; else --right_count;
            }
            return prod * detail::const_run_product(rule.left_tail, left_count) *
                   detail::const_run_product(rule.right_tail, right_count);
        }
    }
    throw ValidationError("weight rule: unknown kind");
}

// Exact supremum of the weight sequence (closed-form families only).
inline double weight_sup(const WeightRule& rule) {
    switch (rule.kind) {
        case WeightKind::PowerRatioUnitFirst:
            // w_1 = 2^e dominates w_0 = 1 and the decreasing tail.
            return std::pow(2.0, rule.exponent());
        case WeightKind::PowerRatio:
            return std::pow(2.0, rule.exponent()); // w_0 = 2^e, decreasing in n
        case WeightKind::Constant:
            return rule.c;
        case WeightKind::HeadThenConstant: {
            double sup = rule.tail;
            for (double w : rule.head) sup = std::max(sup, w);
            return sup;
        }
        case WeightKind::TwoSided: {
            double sup = std::max(rule.left_tail, rule.right_tail);
            for (const auto& [index, w] : rule.overrides) sup = std::max(sup, w);
            return sup;
        }
    }
    throw ValidationError("weight rule: unknown kind");
}

// Tail decay parameters of a two-sided shift: eta_minus = sup_{l <= -q_minus}
// 1/w_l and eta_plus = sup_{l >= q_plus} w_l, with the smallest cutoffs
// (q_minus >= 0, q_plus >= 1) that make both suprema < 1.
struct RateParams {
    double eta_minus = 0.0;
    double eta_plus = 0.0;
    std::int64_t q_minus = 0;
    std::int64_t q_plus = 1;
};

class WeightedShiftOperator {
  public:
    WeightedShiftOperator(Direction direction, WeightRule weights,
                          Domain identity_domain = Domain::N)
        : direction_(direction), weights_(std::move(weights)) {
        weights_.validate();
        switch (direction_) {
            case Direction::BackwardOnN:
                if (!weights_.one_sided()) {
                    throw ValidationError("backward shift on N requires a one-sided weight rule");
                }
                domain_ = Domain::N;
                break;
            case Direction::ForwardOnZ:
                if (weights_.kind != WeightKind::TwoSided &&
                    weights_.kind != WeightKind::Constant) {
                    throw ValidationError(
                        "forward shift on Z requires a two-sided or constant weight rule");
                }
                domain_ = Domain::Z;
                break;
            case Direction::Identity:
                domain_ = identity_domain;
                break;
        }
    }

    static WeightedShiftOperator identity(Domain domain) {
        return WeightedShiftOperator(Direction::Identity, WeightRule::constant(1.0), domain);
    }

    Direction direction() const { return direction_; }
    Domain domain() const { return domain_; }
    const WeightRule& weights() const { return weights_; }

    double weight(std::int64_t index) const { return weight_value(weights_, index); }

    // T acting on a finitely supported vector: backward (Tz)_k = w_k z_{k+1}
    // with T e_0 = 0; forward (Tz)_k = w_k z_{k-1}; identity leaves z.
    Functional apply_power(std::int64_t n, const Functional& z) const {
        require_domain(z);
        if (n < 0) throw ValidationError("shift power must be nonnegative");
        if (n == 0 || direction_ == Direction::Identity) return z;
        Functional out(domain_);
        for (const auto& [index, value] : z.coeffs()) {
            if (direction_ == Direction::BackwardOnN) {
                if (index < n) continue; // annihilated through e_0
                out.add(index - n, value * weight_product(weights_, index - n, index - 1));
            } else {
                out.add(index + n, value * weight_product(weights_, index + 1, index + n));
            }
        }
        return out;
    }

    // Adjoint power on dual functionals, from <Tz, f> = <z, T*f>:
    // backward (T*f)_{k+1} = w_k f_k with (T*f)_0 = 0; forward
    // (T*f)_k = w_{k+1} f_{k+1}; identity leaves f.
    Functional adjoint_power(std::int64_t n, const Functional& f) const {
        require_domain(f);
        if (n < 0) throw ValidationError("shift power must be nonnegative");
        if (n == 0 || direction_ == Direction::Identity) return f;
        Functional out(domain_);
        for (const auto& [index, value] : f.coeffs()) {
            if (direction_ == Direction::BackwardOnN) {
                out.add(index + n, value * weight_product(weights_, index, index + n - 1));
            } else {
                out.add(index - n, value * weight_product(weights_, index - n + 1, index));
            }
        }
        return out;
    }

    // Exact for these families: the operator norm of a weighted shift on any
    // l^p equals the supremum of its weights (identity has norm 1).
    double operator_norm_bound() const {
        if (direction_ == Direction::Identity) return 1.0;
        return weight_sup(weights_);
    }

    RateParams rate_params() const {
        if (direction_ != Direction::ForwardOnZ) {
            throw ValidationError("rate_params requires a forward shift on Z");
        }
        const WeightRule& r = weights_;
        double left_base, right_base;
        if (r.kind == WeightKind::Constant) {
            left_base = r.c;
            right_base = r.c;
        } else {
            left_base = r.left_tail;
            right_base = r.right_tail;
        }
        if (!(left_base > 1.0)) {
            throw ValidationError("rate_params: left tail weights must exceed 1");
        }
        if (!(right_base < 1.0)) {
            throw ValidationError("rate_params: right tail weights must be below 1");
        }
        RateParams out;
        out.q_minus = 0;
        out.q_plus = 1;
        double eta_minus = 1.0 / left_base;
        double eta_plus = right_base;
        if (r.kind == WeightKind::TwoSided) {
            for (const auto& [index, w] : r.overrides) {
                if (index <= 0) {
                    if (w <= 1.0) {
                        out.q_minus = std::max<std::int64_t>(out.q_minus, -index + 1);
                    }
                } else if (w >= 1.0) {
                    out.q_plus = std::max<std::int64_t>(out.q_plus, index + 1);
                }
            }
            for (const auto& [index, w] : r.overrides) {
                if (index <= -out.q_minus) eta_minus = std::max(eta_minus, 1.0 / w);
                if (index >= out.q_plus) eta_plus = std::max(eta_plus, w);
            }
        }
        if (!(eta_minus < 1.0) || !(eta_plus < 1.0)) {
            throw NumericError("rate_params: tail decay parameters must lie in (0,1)");
        }
        out.eta_minus = eta_minus;
        out.eta_plus = eta_plus;
        return out;
    }

  private:
    void require_domain(const Functional& f) const {
        if (f.domain() != domain_) {
            throw ValidationError("functional domain does not match operator domain");
        }
    }

    Direction direction_;
    WeightRule weights_;
    Domain domain_ = Domain::N;
};

} // namespace shiftmix
