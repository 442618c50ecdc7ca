#pragma once

#include <stdexcept>
#include <vector>

#include "finetti/rational.hpp"

namespace finetti {

// C(n, k); zero when k > n.
inline Int binomial(unsigned long n, unsigned long k) {
    if (k > n) return Int(0);
    Int out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

inline Int factorial(unsigned long n) {
    Int out;
    mpz_fac_ui(out.get_mpz_t(), n);
    return out;
}

// a (a-1) ... (a-m+1); empty product is 1, zero when m > a.
inline Int falling_factorial(unsigned long a, unsigned long m) {
    if (m > a) return Int(0);
    Int out(1);
    for (unsigned long i = 0; i < m; ++i) out *= Int(a - i);
    return out;
}

// k! / prod_j s_j!  for a composition s of k.
inline Int multinomial_coeff(long k, const std::vector<long>& s) {
    long total = 0;
    for (long v : s) {
        if (v < 0) throw std::invalid_argument("multinomial_coeff: negative part");
        total += v;
    }
    if (total != k)
        throw std::invalid_argument("multinomial_coeff: parts do not sum to k");
    Int out = factorial(static_cast<unsigned long>(k));
    for (long v : s) out /= factorial(static_cast<unsigned long>(v));
    return out;
}

}  // namespace finetti
