#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "shiftmix/errors.hpp"
#include "shiftmix/numeric.hpp"

namespace shiftmix {

// Index domain of a sequence space: one-sided (0, 1, 2, ...) or two-sided.
enum class Domain { N, Z };

inline std::string to_string(Domain d) {
    return d == Domain::N ? "N" : "Z";
}

// A finitely supported functional on a sequence space: a sparse complex
// coefficient vector indexed by integers, kept sorted by index. Exact zeros
// are pruned so that support() and equality are canonical.
class Functional {
  public:
    using CoeffMap = std::map<std::int64_t, complexd>;

    explicit Functional(Domain domain) : domain_(domain) {}

    Functional(Domain domain, const std::vector<std::pair<std::int64_t, complexd>>& entries)
        : domain_(domain) {
        for (const auto& [index, value] : entries) add(index, value);
    }

    static Functional basis(Domain domain, std::int64_t index, complexd value = complexd{1.0, 0.0}) {
        Functional f(domain);
        f.add(index, value);
        return f;
    }

    Domain domain() const { return domain_; }
    const CoeffMap& coeffs() const { return coeffs_; }
    bool empty() const { return coeffs_.empty(); }
    std::size_t support_size() const { return coeffs_.size(); }

    complexd at(std::int64_t index) const {
        const auto it = coeffs_.find(index);
        return it == coeffs_.end() ? complexd{0.0, 0.0} : it->second;
    }

    // Accumulates value at index, validating domain and finiteness.
    void add(std::int64_t index, complexd value) {
        if (domain_ == Domain::N && index < 0) {
            throw ValidationError("functional on N has coefficient at negative index " +
                                  std::to_string(index));
        }
        if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
            throw ValidationError("functional coefficient at index " + std::to_string(index) +
                                  " is not finite");
        }
        auto [it, inserted] = coeffs_.try_emplace(index, value);
        if (!inserted) it->second += value;
        if (it->second == complexd{0.0, 0.0}) coeffs_.erase(it);
    }

    Functional& operator+=(const Functional& other) {
        require_same_domain(other);
        for (const auto& [index, value] : other.coeffs_) add(index, value);
        return *this;
    }

    Functional& operator-=(const Functional& other) {
        require_same_domain(other);
        for (const auto& [index, value] : other.coeffs_) add(index, -value);
        return *this;
    }

    Functional& operator*=(complexd scalar) {
        if (!std::isfinite(scalar.real()) || !std::isfinite(scalar.imag())) {
            throw ValidationError("functional scaled by non-finite scalar");
        }
        if (scalar == complexd{0.0, 0.0}) {
            coeffs_.clear();
            return *this;
        }
        for (auto& [index, value] : coeffs_) value *= scalar;
        return *this;
    }

    friend Functional operator+(Functional a, const Functional& b) { return a += b; }
    friend Functional operator-(Functional a, const Functional& b) { return a -= b; }
    friend Functional operator*(complexd scalar, Functional f) { return f *= scalar; }
    friend Functional operator*(Functional f, complexd scalar) { return f *= scalar; }
    friend Functional operator-(Functional f) { return f *= complexd{-1.0, 0.0}; }

    friend bool operator==(const Functional& a, const Functional& b) {
        return a.domain_ == b.domain_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const Functional& a, const Functional& b) { return !(a == b); }

    double sup_norm() const {
        double best = 0.0;
        for (const auto& [index, value] : coeffs_) best = std::max(best, std::abs(value));
        return best;
    }

    // (sum_n |f_n|^p)^(1/p); for p < 1 this is the usual quasi-norm.
    double norm_ellp(double p) const {
        if (!(p > 0.0)) throw ValidationError("norm_ellp: p must be positive");
        double sum = 0.0;
        for (const auto& [index, value] : coeffs_) sum += std::pow(std::abs(value), p);
        return std::pow(sum, 1.0 / p);
    }

  private:
    void require_same_domain(const Functional& other) const {
        if (domain_ != other.domain_) {
            throw ValidationError("functional arithmetic mixes domains N and Z");
        }
    }

    Domain domain_;
    CoeffMap coeffs_;
};

inline bool supports_intersect(const Functional& a, const Functional& b) {
    auto ia = a.coeffs().begin();
    auto ib = b.coeffs().begin();
    while (ia != a.coeffs().end() && ib != b.coeffs().end()) {
        if (ia->first == ib->first) return true;
        if (ia->first < ib->first) ++ia; else ++ib;
    }
    return false;
}

} // namespace shiftmix
