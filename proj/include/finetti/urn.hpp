#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "finetti/combinatorics.hpp"
#include "finetti/compositions.hpp"
#include "finetti/rational.hpp"

namespace finetti {

// An urn of n balls in c colours. Zero counts are allowed so urns over a
// common alphabet can be compared.
struct Urn {
    Composition counts;

    explicit Urn(Composition cts) : counts(std::move(cts)) {
        if (counts.empty()) throw std::invalid_argument("urn: needs at least one colour");
        for (long v : counts)
            if (v < 0) throw std::invalid_argument("urn: negative colour count");
        if (n() < 1) throw std::invalid_argument("urn: needs at least one ball");
    }

    int colours() const { return static_cast<int>(counts.size()); }
    long n() const { return comp_sum(counts); }

    // The n-type of the urn: Q(j) = counts[j] / n.
    std::vector<Rat> type() const {
        std::vector<Rat> q;
        q.reserve(counts.size());
        for (long v : counts) q.push_back(make_rat(v, n()));
        return q;
    }
};

// Urn from an n-type: counts l_j = n Q(j). Every n Q(j) must be integral.
inline Urn urn_from_ntype(const std::vector<Rat>& q, long n) {
    Rat total(0);
    Composition counts;
    counts.reserve(q.size());
    for (const Rat& p : q) {
        Rat scaled = p * Rat(n);
        if (scaled.get_den() != 1)
            throw std::domain_error("urn_from_ntype: nQ(j) is not an integer");
        counts.push_back(scaled.get_num().get_si());
        total += p;
    }
    if (total != 1) throw std::domain_error("urn_from_ntype: Q does not sum to 1");
    return Urn(counts);
}

// Law of the draw composition: map from composition of k to exact probability.
struct CompositionDist {
    int c = 0;
    long n = 0;
    long k = 0;
    std::map<Composition, Rat> prob;  // only nonzero entries are stored
};

// Exchangeable law on sequences of length k, stored per type class: the value
// for composition s is the probability of any ONE sequence with that
// composition. Normalization: sum over s of multinomial(k, s) * value = 1.
struct SequenceTypeDist {
    int c = 0;
    long k = 0;
    std::map<Composition, Rat> per_sequence;
};

// Multivariate hypergeometric law of drawing k balls without replacement:
// P(s) = prod_j C(l_j, s_j) / C(n, k) on the capped support.
inline CompositionDist hypergeom_composition(const Urn& urn, long k) {
    const long n = urn.n();
    if (k < 0 || k > n)
        throw std::domain_error("hypergeom_composition: need 0 <= k <= n");
    CompositionDist d{urn.colours(), n, k, {}};
    const Int denom = binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    for (const Composition& s : enumerate_compositions(d.c, k, &urn.counts)) {
        Int num(1);
        for (int j = 0; j < d.c; ++j)
            num *= binomial(static_cast<unsigned long>(urn.counts[j]),
                            static_cast<unsigned long>(s[j]));
        if (num != 0) d.prob[s] = make_rat(num, denom);
    }
    return d;
}

// Multinomial law of drawing k balls with replacement:
// P(s) = multinomial(k, s) * prod_j (l_j / n)^{s_j}.
inline CompositionDist multinom_composition(const Urn& urn, long k) {
    if (k < 0) throw std::domain_error("multinom_composition: need k >= 0");
    const long n = urn.n();
    CompositionDist d{urn.colours(), n, k, {}};
    for (const Composition& s : enumerate_compositions(d.c, k)) {
        Rat p(multinomial_coeff(k, s));
        bool zero = false;
        for (int j = 0; j < d.c; ++j) {
            if (s[j] == 0) continue;
            if (urn.counts[j] == 0) {
                zero = true;
                break;
            }
            p *= rat_pow(make_rat(urn.counts[j], n), static_cast<unsigned long>(s[j]));
        }
        if (!zero && p != 0) d.prob[s] = p;
    }
    return d;
}

// Divide out the type-class multiplicity: the sequence-level law.
inline SequenceTypeDist to_sequence_level(const CompositionDist& dist) {
    SequenceTypeDist s{dist.c, dist.k, {}};
    for (const auto& [comp, p] : dist.prob)
        s.per_sequence[comp] = p / Rat(multinomial_coeff(dist.k, comp));
    return s;
}

}  // namespace finetti
