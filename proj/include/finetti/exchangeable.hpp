#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "finetti/divergences.hpp"
#include "finetti/urn.hpp"

namespace finetti {

// Finitely supported measure over n-types with a common (c, n), identified
// with the urn compositions l = nQ.
struct MixingMeasure {
    int c = 0;
    long n = 0;
    std::map<Composition, Rat> weights;

    void validate() const {
        if (c < 1 || n < 1) throw std::invalid_argument("mixing measure: need c >= 1, n >= 1");
        Rat total(0);
        for (const auto& [comp, w] : weights) {
            if (static_cast<int>(comp.size()) != c)
                throw std::invalid_argument("mixing measure: composition has wrong alphabet size");
            if (comp_sum(comp) != n)
                throw std::invalid_argument("mixing measure: composition does not sum to n");
            if (w < 0) throw std::invalid_argument("mixing measure: negative weight");
            total += w;
        }
        if (total != 1) throw std::invalid_argument("mixing measure: type_weights sum != 1");
    }
};

// The canonical representation of a finite exchangeable law: pick an n-type
// with the given weight, then a uniformly random sequence of that type class.
struct ExchangeableModel {
    int c = 0;
    long n = 0;
    MixingMeasure type_weights;
};

inline ExchangeableModel model_from_weights(int c, long n, MixingMeasure weights) {
    if (weights.c != c || weights.n != n)
        throw std::invalid_argument("model: mixing measure context mismatch");
    weights.validate();
    return ExchangeableModel{c, n, std::move(weights)};
}

// Uniformly random permutation of n distinct colours: c = n, a single type
// with one ball of each colour.
inline ExchangeableModel model_random_permutation(long n) {
    if (n < 1) throw std::invalid_argument("model_random_permutation: need n >= 1");
    MixingMeasure mu{static_cast<int>(n), n, {}};
    mu.weights[Composition(static_cast<size_t>(n), 1L)] = Rat(1);
    return ExchangeableModel{static_cast<int>(n), n, std::move(mu)};
}

// Mixture of i.i.d. laws, collapsed onto type weights:
// weight(Q) = sum_m w_m * multinomial(n, nQ) * prod_j p_m(j)^{nQ(j)}.
inline ExchangeableModel model_iid_mixture(
    const std::vector<std::pair<std::vector<Rat>, Rat>>& components, long n) {
    if (components.empty())
        throw std::invalid_argument("model_iid_mixture: no components");
    const int c = static_cast<int>(components.front().first.size());
    Rat wsum(0);
    for (const auto& [p, w] : components) {
        if (static_cast<int>(p.size()) != c)
            throw std::invalid_argument("model_iid_mixture: component size mismatch");
        Rat psum(0);
        for (const Rat& pj : p) {
            if (pj < 0) throw std::invalid_argument("model_iid_mixture: negative probability");
            psum += pj;
        }
        if (psum != 1)
            throw std::invalid_argument("model_iid_mixture: component does not sum to 1");
        if (w < 0) throw std::invalid_argument("model_iid_mixture: negative weight");
        wsum += w;
    }
    if (wsum != 1) throw std::invalid_argument("model_iid_mixture: weights do not sum to 1");

    MixingMeasure mu{c, n, {}};
    for (const Composition& type : enumerate_compositions(c, n)) {
        Rat total(0);
        for (const auto& [p, w] : components) {
            Rat prob(multinomial_coeff(n, type));
            bool zero = false;
            for (int j = 0; j < c && !zero; ++j) {
                if (type[j] == 0) continue;
                if (p[j] == 0)
                    zero = true;
                else
                    prob *= rat_pow(p[j], static_cast<unsigned long>(type[j]));
            }
            if (!zero) total += w * prob;
        }
        if (total != 0) mu.weights[type] = total;
    }
    return ExchangeableModel{c, n, std::move(mu)};
}

// By the representation, the law of the empirical measure is exactly the
// type-weight measure.
inline const MixingMeasure& empirical_mixing(const ExchangeableModel& model) {
    return model.type_weights;
}

// k-marginal P_k: mixture of hypergeometric sampling laws over the types.
inline SequenceTypeDist marginal(const ExchangeableModel& model, long k) {
    if (k < 1 || k > model.n) throw std::domain_error("marginal: need 1 <= k <= n");
    SequenceTypeDist out{model.c, k, {}};
    const Int denom = falling_factorial(static_cast<unsigned long>(model.n),
                                        static_cast<unsigned long>(k));
    for (const Composition& s : enumerate_compositions(model.c, k)) {
        Rat total(0);
        for (const auto& [type, w] : model.type_weights.weights) {
            Int num(1);
            for (int j = 0; j < model.c && num != 0; ++j)
                num *= falling_factorial(static_cast<unsigned long>(type[j]),
                                         static_cast<unsigned long>(s[j]));
            if (num != 0) total += w * make_rat(num, denom);
        }
        if (total != 0) out.per_sequence[s] = total;
    }
    return out;
}

// i.i.d. mixture M_{k,mu}: per_sequence(s) = sum_Q w(Q) prod_j Q(j)^{s_j}.
inline SequenceTypeDist iid_mixture_dist(const MixingMeasure& mu, long k) {
    if (k < 1) throw std::domain_error("iid_mixture_dist: need k >= 1");
    SequenceTypeDist out{mu.c, k, {}};
    for (const Composition& s : enumerate_compositions(mu.c, k)) {
        Rat total(0);
        for (const auto& [type, w] : mu.weights) {
            Rat prob(1);
            bool zero = false;
            for (int j = 0; j < mu.c && !zero; ++j) {
                if (s[j] == 0) continue;
                if (type[j] == 0)
                    zero = true;
                else
                    prob *= rat_pow(make_rat(type[j], mu.n),
                                    static_cast<unsigned long>(s[j]));
            }
            if (!zero) total += w * prob;
        }
        if (total != 0) out.per_sequence[s] = total;
    }
    return out;
}

// Divergence between the k-marginal and the i.i.d. mixture under the
// empirical mixing measure.
struct DeFinettiGap {
    Metric metric;
    Rat tv;        // set when metric == TV_L1
    KLResult kl;   // set when metric == KL
};

inline DeFinettiGap definetti_gap(const ExchangeableModel& model, long k, Metric metric,
                                  int min_bits = kDefaultPrecisionBits) {
    SequenceTypeDist pk = marginal(model, k);
    SequenceTypeDist mk = iid_mixture_dist(empirical_mixing(model), k);
    DeFinettiGap gap;
    gap.metric = metric;
    if (metric == Metric::TV_L1)
        gap.tv = total_variation(pk, mk);
    else
        gap.kl = relative_entropy(pk, mk, min_bits);
    return gap;
}

}  // namespace finetti
