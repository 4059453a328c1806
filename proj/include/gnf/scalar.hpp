#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <optional>
#include <string>
#include <type_traits>

#include "gnf/errors.hpp"

namespace gnf {

// Coefficient fields. A computation fixes one of these once; the APIs are
// templated on K so exact and float pipelines never mix inside an expression.
using Rat      = boost::multiprecision::mpq_rational;
using Int      = boost::multiprecision::mpz_int;
using BigFloat = boost::multiprecision::mpfr_float;  // runtime precision

template <class K>
inline constexpr bool is_exact_field_v = std::is_same_v<K, Rat>;

// ---------------------------------------------------------------------------
// Working precision. mpfr_float precision is thread-local and expressed in
// decimal digits by boost; we expose bits and convert with a safety margin so
// at least the requested number of mantissa bits is available.
// ---------------------------------------------------------------------------

inline unsigned bits_to_digits10(unsigned bits) {
    return static_cast<unsigned>(bits * 0.30103) + 4;
}

inline void set_working_precision_bits(unsigned bits) {
    BigFloat::default_precision(bits_to_digits10(bits));
}

/// RAII scope for working precision (bits).
class PrecisionGuard {
  public:
    explicit PrecisionGuard(unsigned bits) : saved_(BigFloat::default_precision()) {
        set_working_precision_bits(bits);
    }
    ~PrecisionGuard() { BigFloat::default_precision(saved_); }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

  private:
    unsigned saved_;
};

constexpr unsigned kDefaultPrecisionBits = 256;

// ---------------------------------------------------------------------------
// Integer helpers.
// ---------------------------------------------------------------------------

inline Int factorial(unsigned long m) {
    Int f;
    mpz_fac_ui(f.backend().data(), m);
    return f;
}

inline Int factorial(const Int& m) {
    if (m < 0) throw DomainError("factorial of negative integer");
    if (mpz_fits_ulong_p(m.backend().data()))
        return factorial(static_cast<unsigned long>(m));
    throw DomainError("factorial argument too large: " + m.str());
}

// ---------------------------------------------------------------------------
// Field-generic helpers.
// ---------------------------------------------------------------------------

template <class K>
K k_from_rat(const Rat& r) {
    if constexpr (is_exact_field_v<K>) return r;
    else return BigFloat(r);
}

template <class K>
K k_from_int(const Int& z) {
    if constexpr (is_exact_field_v<K>) return Rat(z);
    else return BigFloat(z);
}

template <class K>
BigFloat k_to_bigfloat(const K& x) {
    if constexpr (is_exact_field_v<K>) return BigFloat(x);
    else return x;
}

template <class K>
bool k_is_zero(const K& x) { return x == 0; }

template <class K>
K k_abs(const K& x) { return x < 0 ? K(-x) : x; }

/// (m!)^alpha in the field. Exact mode requires integral alpha.
template <class K>
K k_factorial_pow(unsigned long m, double alpha) {
    if constexpr (is_exact_field_v<K>) {
        long ai = static_cast<long>(alpha);
        if (static_cast<double>(ai) != alpha || ai < 0)
            throw DomainError("exact field requires nonnegative integer Gevrey exponent");
        Rat out(1);
        Rat f(factorial(m));
        for (long i = 0; i < ai; ++i) out *= f;
        return out;
    } else {
        return BigFloat(pow(BigFloat(factorial(m)), BigFloat(alpha)));
    }
}

// Parsing. Rationals accept "p/q", integers and plain decimals; floats accept
// all of those plus scientific notation.
inline Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) return Rat(s);
    auto dot = s.find('.');
    auto exp = s.find_first_of("eE");
    if (dot == std::string::npos && exp == std::string::npos) return Rat(s);
    // decimal (optionally with exponent) -> exact rational
    std::string mant = s;
    long e10 = 0;
    if (exp != std::string::npos) {
        e10 = std::stol(s.substr(exp + 1));
        mant = s.substr(0, exp);
    }
    dot = mant.find('.');
    if (dot != std::string::npos) {
        e10 -= static_cast<long>(mant.size() - dot - 1);
        mant.erase(dot, 1);
    }
    if (mant.empty() || mant == "-" || mant == "+") throw ParamError("bad rational literal: " + s);
    Rat r{Int(mant)};
    Int ten10 = pow(Int(10), static_cast<unsigned>(e10 < 0 ? -e10 : e10));
    if (e10 < 0) r /= Rat(ten10);
    else r *= Rat(ten10);
    return r;
}

template <class K>
K k_from_string(const std::string& s) {
    if constexpr (is_exact_field_v<K>) {
        return rat_from_string(s);
    } else {
        auto slash = s.find('/');
        if (slash != std::string::npos)
            return BigFloat(BigFloat(s.substr(0, slash)) / BigFloat(s.substr(slash + 1)));
        return BigFloat(s);
    }
}

/// Canonical, round-trippable string form (used by the JSON reports).
template <class K>
std::string k_to_string(const K& x) {
    if constexpr (is_exact_field_v<K>) {
        return x.str();
    } else {
        return x.str(0, std::ios_base::scientific);
    }
}

inline std::string bf_to_string(const BigFloat& x) { return x.str(0, std::ios_base::scientific); }

// ---------------------------------------------------------------------------
// Minimal complex value for eigenvalue lists (std::complex is only specified
// for the builtin floating types).
// ---------------------------------------------------------------------------

struct CEig {
    BigFloat re;
    BigFloat im;

    CEig() : re(0), im(0) {}
    explicit CEig(BigFloat r) : re(std::move(r)), im(0) {}
    CEig(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}

    bool real() const { return im == 0; }
    BigFloat abs() const { return BigFloat(sqrt(re * re + im * im)); }
};

inline CEig operator-(const CEig& a, const CEig& b) { return {BigFloat(a.re - b.re), BigFloat(a.im - b.im)}; }
inline CEig operator+(const CEig& a, const CEig& b) { return {BigFloat(a.re + b.re), BigFloat(a.im + b.im)}; }
inline CEig operator*(long k, const CEig& a) { return {BigFloat(k * a.re), BigFloat(k * a.im)}; }

}  // namespace gnf
