#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "finetti/rational.hpp"

namespace finetti {

constexpr int kDefaultPrecisionBits = 50;

// A floating value together with a bound on its absolute error relative to
// the exact real it approximates. long double carries a 64-bit mantissa on
// x86-64, leaving headroom over the 50-bit default request.
struct PrecFloat {
    long double value = 0.0L;
    long double abs_error = 0.0L;

    PrecFloat() = default;
    PrecFloat(long double v, long double e) : value(v), abs_error(e) {}

    PrecFloat operator+(const PrecFloat& o) const {
        long double v = value + o.value;
        // one rounding of the sum on top of the operands' own bounds
        long double e = abs_error + o.abs_error + std::fabs(v) * 0x1p-63L;
        return {v, e};
    }
    PrecFloat operator-(const PrecFloat& o) const {
        long double v = value - o.value;
        long double e = abs_error + o.abs_error + std::fabs(v) * 0x1p-63L;
        return {v, e};
    }
    PrecFloat operator-() const { return {-value, abs_error}; }
};

namespace detail {

// RAII for a single mpfr value.
class MpfrVal {
  public:
    explicit MpfrVal(mpfr_prec_t prec) { mpfr_init2(x_, prec); }
    ~MpfrVal() { mpfr_clear(x_); }
    MpfrVal(const MpfrVal&) = delete;
    MpfrVal& operator=(const MpfrVal&) = delete;
    mpfr_ptr get() { return x_; }

  private:
    mpfr_t x_;
};

}  // namespace detail

// Deterministic conversion of an exact rational to long double.
inline long double rat_to_ld(const Rat& r) {
    detail::MpfrVal x(80);
    mpfr_set_q(x.get(), r.get_mpq_t(), MPFR_RNDN);
    return mpfr_get_ld(x.get(), MPFR_RNDN);
}

// Natural log of a positive rational, evaluated from the reduced fraction so
// equal rationals give bit-identical results. Error bound:
// 2^(-min_bits) * max(1, |result|).
inline PrecFloat log_rational(const Rat& r, int min_bits = kDefaultPrecisionBits) {
    if (r <= 0) throw std::domain_error("log_rational: argument must be positive");
    if (r == 1) return {0.0L, 0.0L};
    detail::MpfrVal x(static_cast<mpfr_prec_t>(min_bits) + 16);
    mpfr_set_q(x.get(), r.get_mpq_t(), MPFR_RNDN);
    mpfr_log(x.get(), x.get(), MPFR_RNDN);
    long double v = mpfr_get_ld(x.get(), MPFR_RNDN);
    long double e = std::ldexp(1.0L, -min_bits) * std::max(1.0L, std::fabs(v));
    return {v, e};
}

// e^r for rational r, same error convention as log_rational.
inline PrecFloat exp_rational(const Rat& r, int min_bits = kDefaultPrecisionBits) {
    detail::MpfrVal x(static_cast<mpfr_prec_t>(min_bits) + 16);
    mpfr_set_q(x.get(), r.get_mpq_t(), MPFR_RNDN);
    mpfr_exp(x.get(), x.get(), MPFR_RNDN);
    long double v = mpfr_get_ld(x.get(), MPFR_RNDN);
    long double e = std::ldexp(1.0L, -min_bits) * std::max(1.0L, std::fabs(v));
    return {v, e};
}

// Multiply by an exact rational factor.
inline PrecFloat scale(const PrecFloat& p, const Rat& f) {
    long double fd = rat_to_ld(f);
    long double v = p.value * fd;
    long double e = p.abs_error * std::fabs(fd) + std::fabs(v) * 0x1p-62L;
    return {v, e};
}

// sqrt of a nonnegative PrecFloat; the error bound follows the derivative
// bound, with the flat sqrt(abs_error) fallback near zero.
inline PrecFloat sqrt_pf(const PrecFloat& p) {
    long double v = std::sqrt(std::max(p.value, 0.0L));
    long double e;
    if (v > std::sqrt(p.abs_error)) {
        e = p.abs_error / (2.0L * v) + v * 0x1p-63L;
    } else {
        e = std::sqrt(p.abs_error) + v * 0x1p-63L;
    }
    return {v, e};
}

}  // namespace finetti
