#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "finetti/combinatorics.hpp"
#include "finetti/precision_float.hpp"
#include "finetti/urn.hpp"

namespace finetti {

enum class Metric { TV_L1, KL };

// A relative entropy value; `infinite` means absolute continuity failed.
struct KLResult {
    bool infinite = false;
    PrecFloat value;
};

// One KL summand before taking logs: probability mass p and exact ratio p/q.
using KLTerm = std::pair<Rat, Rat>;

namespace detail {

inline void require_same_context(int c1, long k1, int c2, long k2) {
    if (c1 != c2 || k1 != k2)
        throw std::invalid_argument("divergence: distributions have different (c, k)");
}

template <typename Map>
inline std::set<Composition> key_union(const Map& a, const Map& b) {
    std::set<Composition> keys;
    for (const auto& [s, p] : a) keys.insert(s);
    for (const auto& [s, p] : b) keys.insert(s);
    return keys;
}

inline Rat lookup(const std::map<Composition, Rat>& m, const Composition& s) {
    auto it = m.find(s);
    return it == m.end() ? Rat(0) : it->second;
}

}  // namespace detail

// ---- total variation, L1 convention (sum of |p - q|, range [0, 2]) ----

inline Rat total_variation(const CompositionDist& p, const CompositionDist& q) {
    detail::require_same_context(p.c, p.k, q.c, q.k);
    Rat tv(0);
    for (const Composition& s : detail::key_union(p.prob, q.prob))
        tv += abs(detail::lookup(p.prob, s) - detail::lookup(q.prob, s));
    return tv;
}

// Sequence level: each type class carries multinomial(k, s) sequences.
inline Rat total_variation(const SequenceTypeDist& p, const SequenceTypeDist& q) {
    detail::require_same_context(p.c, p.k, q.c, q.k);
    Rat tv(0);
    for (const Composition& s : detail::key_union(p.per_sequence, q.per_sequence)) {
        Rat diff = abs(detail::lookup(p.per_sequence, s) - detail::lookup(q.per_sequence, s));
        tv += Rat(multinomial_coeff(p.k, s)) * diff;
    }
    return tv;
}

// ---- relative entropy ----

// The exact (mass, ratio) summands of D(p||q), sorted; empty ratio list with
// `infinite` when p is not absolutely continuous w.r.t. q. Exposed so the
// sequence-level and composition-level term multisets can be compared
// structurally.
inline std::vector<KLTerm> kl_terms(const CompositionDist& p, const CompositionDist& q,
                                    bool* infinite) {
    detail::require_same_context(p.c, p.k, q.c, q.k);
    *infinite = false;
    std::vector<KLTerm> terms;
    for (const auto& [s, pv] : p.prob) {
        Rat qv = detail::lookup(q.prob, s);
        if (qv == 0) {
            *infinite = true;
            return {};
        }
        terms.emplace_back(pv, pv / qv);
    }
    std::sort(terms.begin(), terms.end());
    return terms;
}

inline std::vector<KLTerm> kl_terms(const SequenceTypeDist& p, const SequenceTypeDist& q,
                                    bool* infinite) {
    detail::require_same_context(p.c, p.k, q.c, q.k);
    *infinite = false;
    std::vector<KLTerm> terms;
    for (const auto& [s, pv] : p.per_sequence) {
        Rat qv = detail::lookup(q.per_sequence, s);
        if (qv == 0) {
            *infinite = true;
            return {};
        }
        // total class mass times the per-sequence ratio
        terms.emplace_back(Rat(multinomial_coeff(p.k, s)) * pv, pv / qv);
    }
    std::sort(terms.begin(), terms.end());
    return terms;
}

// Sum p log(p/q) with additive error accumulation. Each ratio is formed
// exactly in rationals before the log.
inline KLResult kl_from_terms(const std::vector<KLTerm>& terms, bool infinite,
                              int min_bits = kDefaultPrecisionBits) {
    KLResult r;
    if (infinite) {
        r.infinite = true;
        return r;
    }
    for (const auto& [mass, ratio] : terms) {
        PrecFloat lg = log_rational(ratio, min_bits);
        long double m = rat_to_ld(mass);
        long double term = m * lg.value;
        r.value.value += term;
        r.value.abs_error += m * lg.abs_error +
                             (std::fabs(term) + std::fabs(r.value.value)) * 0x1p-62L;
    }
    return r;
}

template <typename Dist>
inline KLResult relative_entropy(const Dist& p, const Dist& q,
                                 int min_bits = kDefaultPrecisionBits) {
    bool infinite = false;
    auto terms = kl_terms(p, q, &infinite);
    return kl_from_terms(terms, infinite, min_bits);
}

// ---- Pinsker ----

struct PinskerCheck {
    Rat tv;
    KLResult kl;
    PrecFloat sqrt_two_kl;
    bool holds = false;  // TV <= sqrt(2 KL) after widening by error bounds
};

template <typename Dist>
inline PinskerCheck pinsker_slack(const Dist& p, const Dist& q,
                                  int min_bits = kDefaultPrecisionBits) {
    PinskerCheck out;
    out.tv = total_variation(p, q);
    out.kl = relative_entropy(p, q, min_bits);
    if (out.kl.infinite) {
        out.holds = true;
        return out;
    }
    out.sqrt_two_kl = sqrt_pf({2.0L * out.kl.value.value, 2.0L * out.kl.value.abs_error});
    out.holds = rat_to_ld(out.tv) <= out.sqrt_two_kl.value + out.sqrt_two_kl.abs_error;
    return out;
}

// ---- partition coarsening ----

// Sum probabilities per cell. Cells must be disjoint and cover every key of
// the distribution (keys not in the distribution are allowed in cells, so a
// common partition can coarsen two distributions at once).
inline std::vector<Rat> coarsen(const CompositionDist& p,
                                const std::vector<std::vector<Composition>>& partition) {
    std::set<Composition> seen;
    for (const auto& cell : partition)
        for (const Composition& s : cell)
            if (!seen.insert(s).second)
                throw std::invalid_argument("coarsen: overlapping partition cells");
    for (const auto& [s, pv] : p.prob)
        if (!seen.count(s))
            throw std::invalid_argument("coarsen: partition does not cover the support");
    std::vector<Rat> out;
    out.reserve(partition.size());
    for (const auto& cell : partition) {
        Rat mass(0);
        for (const Composition& s : cell) mass += detail::lookup(p.prob, s);
        out.push_back(mass);
    }
    return out;
}

// Divergences between coarse (vector-indexed) distributions; used by the
// data-processing checks.
inline Rat total_variation(const std::vector<Rat>& p, const std::vector<Rat>& q) {
    if (p.size() != q.size())
        throw std::invalid_argument("total_variation: cell count mismatch");
    Rat tv(0);
    for (size_t i = 0; i < p.size(); ++i) tv += abs(p[i] - q[i]);
    return tv;
}

inline KLResult relative_entropy(const std::vector<Rat>& p, const std::vector<Rat>& q,
                                 int min_bits = kDefaultPrecisionBits) {
    if (p.size() != q.size())
        throw std::invalid_argument("relative_entropy: cell count mismatch");
    std::vector<KLTerm> terms;
    bool infinite = false;
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0) continue;
        if (q[i] == 0) {
            infinite = true;
            break;
        }
        terms.emplace_back(p[i], p[i] / q[i]);
    }
    return kl_from_terms(terms, infinite, min_bits);
}

// Shannon entropy (nats) of an exact distribution; used for entropy-scaled
// bound evaluation.
inline PrecFloat entropy(const std::vector<Rat>& p, int min_bits = kDefaultPrecisionBits) {
    PrecFloat h;
    for (const Rat& pv : p) {
        if (pv == 0) continue;
        PrecFloat lg = log_rational(Rat(1) / pv, min_bits);
        h = h + scale(lg, pv);
    }
    return h;
}

}  // namespace finetti
