#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "gnf/errors.hpp"
#include "gnf/scalar.hpp"

namespace gnf {

/// Exponent vector Q = (q_1,...,q_n) with cached total degree |Q|.
class MultiIndex {
  public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<uint32_t> exps)
        : e_(std::move(exps)), deg_(std::accumulate(e_.begin(), e_.end(), uint32_t{0})) {
        if (e_.empty()) throw ShapeError("MultiIndex: ambient dimension must be >= 1");
    }

    static MultiIndex zero(unsigned n) { return MultiIndex(std::vector<uint32_t>(n, 0)); }
    static MultiIndex unit(unsigned n, unsigned i) {
        std::vector<uint32_t> e(n, 0);
        e.at(i) = 1;
        return MultiIndex(std::move(e));
    }

    unsigned dim() const { return static_cast<unsigned>(e_.size()); }
    uint32_t degree() const { return deg_; }
    uint32_t operator[](unsigned i) const { return e_[i]; }
    const std::vector<uint32_t>& exponents() const { return e_; }

    MultiIndex plus(unsigned i) const {
        auto e = e_;
        ++e[i];
        return MultiIndex(std::move(e));
    }
    /// Q - e_i; requires q_i > 0.
    MultiIndex minus(unsigned i) const {
        auto e = e_;
        --e[i];
        return MultiIndex(std::move(e));
    }
    MultiIndex plus(const MultiIndex& o) const {
        auto e = e_;
        for (unsigned i = 0; i < e.size(); ++i) e[i] += o.e_[i];
        return MultiIndex(std::move(e));
    }

    /// Q! = q_1! ... q_n!
    Int q_factorial() const {
        Int f(1);
        for (auto q : e_) f *= factorial(static_cast<unsigned long>(q));
        return f;
    }

    /// Fischer weight Q!/|Q|! as an exact rational.
    Rat fischer_weight() const {
        return Rat(q_factorial()) / Rat(factorial(static_cast<unsigned long>(deg_)));
    }

    bool operator==(const MultiIndex& o) const { return e_ == o.e_; }
    bool operator!=(const MultiIndex& o) const { return e_ != o.e_; }

    /// "x1^2*x3" (empty product renders as "1").
    std::string str() const {
        std::string s;
        for (unsigned i = 0; i < e_.size(); ++i) {
            if (!e_[i]) continue;
            if (!s.empty()) s += "*";
            s += "x" + std::to_string(i + 1);
            if (e_[i] > 1) s += "^" + std::to_string(e_[i]);
        }
        return s.empty() ? "1" : s;
    }

  private:
    std::vector<uint32_t> e_;
    uint32_t deg_ = 0;
};

/// Graded-lexicographic order: by |Q|, then lexicographically on exponents.
/// All sparse containers use this so reductions are deterministic.
struct GrlexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.exponents() < b.exponents();
    }
};

/// Enumerate all Q in N^n with |Q| = d, in GrlexLess order.
inline void for_each_multiindex(unsigned n, unsigned d, const std::function<void(const MultiIndex&)>& fn) {
    std::vector<uint32_t> e(n, 0);
    // lexicographic ascent: leading exponents small first
    std::function<void(unsigned, unsigned)> rec = [&](unsigned pos, unsigned rem) {
        if (pos + 1 == n) {
            e[pos] = rem;
            fn(MultiIndex(e));
            return;
        }
        for (unsigned q = 0; q <= rem; ++q) {
            e[pos] = q;
            rec(pos + 1, rem - q);
        }
    };
    if (n == 0) return;
    rec(0, d);
}

inline std::size_t count_multiindices(unsigned n, unsigned d) {
    // C(d + n - 1, n - 1)
    Int c;
    mpz_bin_uiui(c.backend().data(), d + n - 1, n - 1);
    return static_cast<std::size_t>(c);
}

}  // namespace gnf
