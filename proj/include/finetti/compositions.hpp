#pragma once

#include <numeric>
#include <stdexcept>
#include <vector>

#include "finetti/rational.hpp"

namespace finetti {

// A vector of per-colour counts. Used both for urn contents and for draws.
using Composition = std::vector<long>;

inline long comp_sum(const Composition& s) {
    return std::accumulate(s.begin(), s.end(), 0L);
}

namespace detail {

inline void enumerate_rec(int c, long k, const Composition* caps, Composition& cur,
                          std::vector<Composition>& out) {
    int j = static_cast<int>(cur.size());
    if (j == c - 1) {
        if (caps && k > (*caps)[j]) return;
        cur.push_back(k);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    long hi = caps ? std::min(k, (*caps)[j]) : k;
    for (long v = hi; v >= 0; --v) {
        cur.push_back(v);
        enumerate_rec(c, k - v, caps, cur, out);
        cur.pop_back();
    }
}

}  // namespace detail

// All compositions of k into c nonnegative parts, optionally capped
// componentwise. Deterministic order: first coordinate descending, then
// recursively the same on the remainder. Infeasible caps yield an empty list.
inline std::vector<Composition> enumerate_compositions(int c, long k,
                                                       const Composition* caps = nullptr) {
    if (c < 1) throw std::invalid_argument("enumerate_compositions: c must be >= 1");
    if (k < 0) throw std::invalid_argument("enumerate_compositions: k must be >= 0");
    if (caps) {
        if (static_cast<int>(caps->size()) != c)
            throw std::invalid_argument("enumerate_compositions: caps size mismatch");
        if (comp_sum(*caps) < k) return {};
    }
    std::vector<Composition> out;
    Composition cur;
    cur.reserve(c);
    detail::enumerate_rec(c, k, caps, cur, out);
    return out;
}

}  // namespace finetti
