#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace finetti {

using Int = mpz_class;
using Rat = mpq_class;

// Canonical rational from numerator/denominator (lowest terms, den > 0).
inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat make_rat(long num, long den) { return make_rat(Int(num), Int(den)); }

// Parses "num/den" or a bare integer "num".
inline Rat parse_rat(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("malformed rational: '" + s + "'");
    if (r.get_den() == 0) throw std::domain_error("rational with zero denominator");
    r.canonicalize();
    return r;
}

// Serialized as "num/den", or "num" when the denominator is 1.
inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

inline Rat rat_pow(const Rat& base, unsigned long e) {
    Rat out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
    return out;  // powers of a canonical rational stay canonical
}

inline Int int_pow(const Int& base, unsigned long e) {
    Int out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

}  // namespace finetti
