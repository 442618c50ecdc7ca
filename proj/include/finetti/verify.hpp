#pragma once

#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "finetti/bounds.hpp"
#include "finetti/exchangeable.hpp"
#include "finetti/report.hpp"

namespace finetti {

// Seed for all randomized suites; recorded in output headers.
constexpr std::uint64_t kSuiteSeed = 20250826ULL;

// ---------------------------------------------------------------- subjects

// A thing whose divergence can be checked against bounds: either the
// without/with-replacement pair of an urn, or an exchangeable model and its
// de Finetti gap.
struct Subject {
    enum class Kind { UrnPair, Model };
    Kind kind;
    std::string id;
    std::optional<Urn> urn;
    std::optional<ExchangeableModel> model;

    int c() const { return kind == Kind::UrnPair ? urn->colours() : model->c; }
    long n() const { return kind == Kind::UrnPair ? urn->n() : model->n; }

    // uniform n-colour urn / uniform random permutation: the tightness family
    bool uniform() const {
        if (kind == Kind::UrnPair) {
            for (long v : urn->counts)
                if (v != 1) return false;
            return true;
        }
        if (model->type_weights.weights.size() != 1) return false;
        const auto& [type, w] = *model->type_weights.weights.begin();
        if (w != 1) return false;
        for (long v : type)
            if (v != 1) return false;
        return true;
    }
};

inline Subject urn_subject(Urn urn, std::string id = "") {
    if (id.empty()) {
        std::ostringstream os;
        os << "urn";
        for (long v : urn.counts) os << "_" << v;
        id = os.str();
    }
    return Subject{Subject::Kind::UrnPair, std::move(id), std::move(urn), std::nullopt};
}

inline Subject model_subject(ExchangeableModel model, std::string id = "model") {
    return Subject{Subject::Kind::Model, std::move(id), std::nullopt, std::move(model)};
}

// The two distributions a subject compares at draw length k.
inline std::pair<SequenceTypeDist, SequenceTypeDist> subject_pair(const Subject& s, long k) {
    if (s.kind == Subject::Kind::UrnPair)
        return {to_sequence_level(hypergeom_composition(*s.urn, k)),
                to_sequence_level(multinom_composition(*s.urn, k))};
    return {marginal(*s.model, k), iid_mixture_dist(empirical_mixing(*s.model), k)};
}

// Entropy of the single-draw marginal, for the entropy-scaled bound.
inline PrecFloat subject_entropy1(const Subject& s, int bits) {
    std::vector<Rat> p;
    if (s.kind == Subject::Kind::UrnPair) {
        p = s.urn->type();
    } else {
        for (const auto& [comp, v] : marginal(*s.model, 1).per_sequence) p.push_back(v);
    }
    return entropy(p, bits);
}

// ------------------------------------------------------------ instance check

inline const std::vector<std::string>& sampling_bound_ids() {
    static const std::vector<std::string> ids = {
        "df_sampling", "df_finite", "stam", "harremoes_matus", "jgk_urn",
        "freedman_upper", "freedman_lower", "exact_tv_uniform", "exact_kl_uniform",
        "yu_converse"};
    return ids;
}

inline const std::vector<std::string>& model_bound_ids() {
    static const std::vector<std::string> ids = {
        "df_general", "df_finite",  "new1",          "new2",
        "with_olly",  "song",       "gk_binary",     "gkb_entropy",
        "freedman_upper", "freedman_lower", "exact_tv_uniform", "exact_kl_uniform",
        "yu_converse"};
    return ids;
}

inline std::vector<std::string> default_bounds_for(const Subject& s) {
    return s.kind == Subject::Kind::UrnPair ? sampling_bound_ids() : model_bound_ids();
}

namespace detail {

// Uniform-family bounds only make sense for the tightness subjects.
inline bool needs_uniform_subject(const std::string& id) {
    return id == "freedman_upper" || id == "freedman_lower" || id == "exact_tv_uniform" ||
           id == "exact_kl_uniform" || id == "yu_converse";
}

inline bool urn_only(const std::string& id) {
    return id == "stam" || id == "harremoes_matus" || id == "jgk_urn" || id == "df_sampling";
}

inline bool model_only(const std::string& id) {
    return id == "df_general" || id == "new1" || id == "new2" || id == "with_olly" ||
           id == "song" || id == "gk_binary" || id == "gkb_entropy";
}

}  // namespace detail

// Checks one subject at draw length k against the requested bounds. Failures
// are rows, not exceptions; inapplicable bounds are reported as skipped with
// a reason. A failing comparison is recomputed once at doubled precision
// before being reported, in case the miss was only error-bound width.
inline std::vector<ReportRow> verify_instance(const Subject& subj, long k,
                                              const std::vector<std::string>& bound_ids,
                                              int min_bits = kDefaultPrecisionBits) {
    std::vector<ReportRow> rows;
    const int c = subj.c();
    const long n = subj.n();

    struct DivSet {
        Rat tv;
        KLResult kl;
        bool computed = false;
    };
    std::map<int, DivSet> by_bits;  // divergences per precision
    auto divergences = [&](int bits) -> DivSet& {
        DivSet& d = by_bits[bits];
        if (!d.computed) {
            auto [p, q] = subject_pair(subj, k);
            d.tv = total_variation(p, q);
            d.kl = relative_entropy(p, q, bits);
            d.computed = true;
        }
        return d;
    };

    for (const std::string& id : bound_ids) {
        ReportRow row;
        row.subject_id = subj.id;
        row.c = c;
        row.n = n;
        row.k = k;
        row.bound_id = id;

        const BoundSpec* spec = find_bound(id);
        if (!spec) {
            row.valid = "false";
            row.pass = "skip";
            row.reason = "unknown bound id";
            rows.push_back(row);
            continue;
        }
        row.metric = metric_name(spec->metric);

        auto skip = [&](const std::string& why) {
            row.valid = "false";
            row.pass = "skip";
            row.reason = why;
            rows.push_back(row);
        };
        if (subj.kind == Subject::Kind::UrnPair && detail::model_only(id)) {
            skip("de Finetti bound; not applicable to a sampling pair");
            continue;
        }
        if (subj.kind == Subject::Kind::Model && detail::urn_only(id)) {
            skip("sampling-pair bound; not applicable to a model gap");
            continue;
        }
        if (detail::needs_uniform_subject(id) && !subj.uniform()) {
            skip("applies only to the uniform n-colour family");
            continue;
        }

        BoundParams params;
        params.c = c;
        params.n = n;
        params.k = k;
        if (subj.kind == Subject::Kind::UrnPair) params.counts = subj.urn->counts;
        if (id == "gkb_entropy") params.entropy1 = subject_entropy1(subj, min_bits);

        BoundResult res = evaluate_bound(id, params, min_bits);
        if (!res.valid) {
            skip(res.note);
            continue;
        }
        row.valid = "true";
        row.bound_value = format_bound_value(res.value);
        if (!res.note.empty()) row.reason = res.note;

        if (!spec->assertable) {
            row.pass = "skip";
            row.reason = "evaluator-only: bound holds for a different mixing measure";
            rows.push_back(row);
            continue;
        }

        // evaluate at min_bits, retry once at doubled precision on failure
        bool pass = false, tight = false;
        for (int attempt = 0; attempt < 2; ++attempt) {
            const int bits = min_bits << attempt;
            DivSet& d = divergences(bits);
            if (attempt == 1) res = evaluate_bound(id, params, bits);
            const long double bv = res.value.value_ld();
            const long double be = res.value.error_ld();

            if (spec->metric == Metric::TV_L1) {
                row.value = rat_to_string(d.tv);
                row.error_bound = "0";
                if (res.value.is_rational) {
                    Rat slack = res.value.rat - d.tv;
                    pass = spec->kind == BoundKind::Exact ? slack == 0 : slack >= 0;
                    tight = slack == 0;
                    row.slack = rat_to_string(slack);
                } else {
                    long double tvd = rat_to_ld(d.tv);
                    long double slack =
                        spec->kind == BoundKind::Lower ? tvd - bv : bv - tvd;
                    pass = slack >= -be;
                    tight = pass && std::fabs(slack) <= be + 1e-12L;
                    row.slack = format_ld(slack);
                }
            } else {
                if (d.kl.infinite) {
                    row.value = "inf";
                    row.error_bound = "0";
                    pass = spec->kind == BoundKind::Lower;
                    row.slack = "";
                } else {
                    const long double kv = d.kl.value.value;
                    const long double ke = d.kl.value.abs_error;
                    row.value = format_ld(kv);
                    row.error_bound = format_ld(ke);
                    long double slack, widen = ke + be;
                    if (spec->kind == BoundKind::Lower)
                        slack = kv - bv;
                    else
                        slack = bv - kv;
                    if (spec->kind == BoundKind::Exact)
                        pass = std::fabs(slack) <= widen;
                    else
                        pass = slack >= -widen;
                    tight = pass && std::fabs(slack) <= widen + 1e-12L;
                    row.slack = format_ld(slack);
                }
            }
            if (pass) break;
        }
        row.pass = pass ? "pass" : "fail";
        row.tight = tight ? "true" : "false";
        rows.push_back(row);
    }
    return rows;
}

// ------------------------------------------------------------ random models

namespace detail {

inline std::uint64_t draw(std::mt19937_64& g, std::uint64_t m) { return g() % m; }

}  // namespace detail

// Deterministic pseudo-random exchangeable models: a random nonempty subset
// of the n-types with small integer weights, normalized exactly.
inline std::vector<ExchangeableModel> random_models(int count, int min_c, int max_c,
                                                    long min_n, long max_n,
                                                    std::uint64_t seed = kSuiteSeed) {
    std::mt19937_64 g(seed);
    std::vector<ExchangeableModel> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        int c = min_c + static_cast<int>(detail::draw(g, max_c - min_c + 1));
        long n = min_n + static_cast<long>(detail::draw(g, max_n - min_n + 1));
        auto types = enumerate_compositions(c, n);
        std::vector<long> raw(types.size(), 0);
        long total = 0;
        for (size_t t = 0; t < types.size(); ++t) {
            if (detail::draw(g, 2) == 0) continue;
            raw[t] = 1 + static_cast<long>(detail::draw(g, 16));
            total += raw[t];
        }
        if (total == 0) {
            size_t t = detail::draw(g, types.size());
            raw[t] = 1;
            total = 1;
        }
        MixingMeasure mu{c, n, {}};
        for (size_t t = 0; t < types.size(); ++t)
            if (raw[t] > 0) mu.weights[types[t]] = make_rat(raw[t], total);
        out.push_back(model_from_weights(c, n, std::move(mu)));
    }
    return out;
}

// ----------------------------------------------------------- suite checks

// Aggregated pass/fail tallies per check id, with a few failure witnesses.
struct CheckStats {
    long checked = 0;
    long failed = 0;
    std::map<std::string, long> id_checked;
    std::map<std::string, long> id_failed;
    std::vector<std::string> witnesses;

    void tally(const std::string& id, bool ok, const std::string& witness) {
        ++checked;
        ++id_checked[id];
        if (!ok) {
            ++failed;
            ++id_failed[id];
            if (witnesses.size() < 32) witnesses.push_back(id + ": " + witness);
        }
    }

    void tally_rows(const std::vector<ReportRow>& rows, const std::string& witness) {
        for (const ReportRow& r : rows) {
            if (r.pass == "skip") continue;
            tally(r.bound_id, r.pass == "pass", witness);
        }
    }
};

inline std::string witness_nk(long n, long k) {
    return "n=" + std::to_string(n) + " k=" + std::to_string(k);
}

inline std::string witness_urn(const Urn& urn, long k) {
    std::ostringstream os;
    os << "urn=(";
    for (size_t j = 0; j < urn.counts.size(); ++j) os << (j ? "," : "") << urn.counts[j];
    os << ") k=" << k;
    return os.str();
}

// TV between without/with replacement on the uniform n-colour urn equals
// 2(1 - n!/((n-k)! n^k)), rational-exactly.
inline void check_exact_tv_grid(long max_n, CheckStats& stats) {
    for (long n = 1; n <= max_n; ++n) {
        Urn urn{Composition(static_cast<size_t>(n), 1L)};
        for (long k = 1; k <= n; ++k) {
            Rat tv = total_variation(to_sequence_level(hypergeom_composition(urn, k)),
                                     to_sequence_level(multinom_composition(urn, k)));
            Rat expect =
                Rat(2) * (Rat(1) - make_rat(factorial(static_cast<unsigned long>(n)),
                                            factorial(static_cast<unsigned long>(n - k)) *
                                                int_pow(Int(n), static_cast<unsigned long>(k))));
            stats.tally("exact_tv_uniform", tv == expect, witness_nk(n, k));
        }
    }
}

// 2(1 - e^{-k(k-1)/2n}) <= TV <= k(k-1)/n on the uniform family.
inline void check_freedman_grid(long max_n, long double tol, CheckStats& stats,
                                int bits = kDefaultPrecisionBits) {
    for (long n = 1; n <= max_n; ++n) {
        Urn urn{Composition(static_cast<size_t>(n), 1L)};
        for (long k = 1; k <= n; ++k) {
            Rat tv = total_variation(to_sequence_level(hypergeom_composition(urn, k)),
                                     to_sequence_level(multinom_composition(urn, k)));
            bool upper = tv <= make_rat(k * (k - 1), n);
            stats.tally("freedman_upper", upper, witness_nk(n, k));
            PrecFloat e = exp_rational(-make_rat(k * (k - 1), 2 * n), bits);
            long double lower = 2.0L - 2.0L * e.value;
            bool low_ok = rat_to_ld(tv) >= lower - 2.0L * e.abs_error - tol;
            stats.tally("freedman_lower", low_ok, witness_nk(n, k));
        }
    }
}

// Sequence-level and composition-level relative entropies have identical
// rational term multisets (and equal TV) for every urn on the grid.
inline void check_stam_equivalence_grid(int max_c, long max_n, CheckStats& stats) {
    for (int c = 1; c <= max_c; ++c) {
        for (long n = 1; n <= max_n; ++n) {
            for (const Composition& counts : enumerate_compositions(c, n)) {
                Urn urn{counts};
                for (long k = 1; k <= n; ++k) {
                    CompositionDist H = hypergeom_composition(urn, k);
                    CompositionDist B = multinom_composition(urn, k);
                    bool inf_comp = false, inf_seq = false;
                    auto comp_terms = kl_terms(H, B, &inf_comp);
                    auto seq_terms =
                        kl_terms(to_sequence_level(H), to_sequence_level(B), &inf_seq);
                    bool ok = inf_comp == inf_seq && comp_terms == seq_terms &&
                              total_variation(H, B) ==
                                  total_variation(to_sequence_level(H), to_sequence_level(B));
                    stats.tally("stam_equivalence", ok, witness_urn(urn, k));
                }
            }
        }
    }
}

// KL(H||B) against the sampling bounds on the full urn grid; optionally the
// Pinsker check on every pair.
inline void check_kl_sampling_grid(int max_c, long max_n, long double tol, CheckStats& stats,
                                   bool with_pinsker = true,
                                   int bits = kDefaultPrecisionBits) {
    for (int c = 1; c <= max_c; ++c) {
        for (long n = 1; n <= max_n; ++n) {
            for (const Composition& counts : enumerate_compositions(c, n)) {
                Subject subj = urn_subject(Urn{counts});
                for (long k = 1; k <= n; ++k) {
                    auto rows = verify_instance(subj, k,
                                                {"stam", "harremoes_matus", "jgk_urn"}, bits);
                    stats.tally_rows(rows, witness_urn(*subj.urn, k));
                    if (with_pinsker) {
                        auto [p, q] = subject_pair(subj, k);
                        PinskerCheck pc = pinsker_slack(p, q, bits);
                        bool ok = pc.holds ||
                                  rat_to_ld(pc.tv) <=
                                      pc.sqrt_two_kl.value + pc.sqrt_two_kl.abs_error + tol;
                        stats.tally("pinsker", ok, witness_urn(*subj.urn, k));
                    }
                }
            }
        }
    }
}

// M_{k,mu_n}(class s) >= n!/((n-k)! n^k) P_k(class s), rational-exactly.
inline bool freedman_index_holds(const ExchangeableModel& model, long k) {
    SequenceTypeDist pk = marginal(model, k);
    SequenceTypeDist mk = iid_mixture_dist(empirical_mixing(model), k);
    Rat factor = make_rat(falling_factorial(static_cast<unsigned long>(model.n),
                                            static_cast<unsigned long>(k)),
                          int_pow(Int(model.n), static_cast<unsigned long>(k)));
    for (const auto& [s, pv] : pk.per_sequence) {
        auto it = mk.per_sequence.find(s);
        Rat mv = it == mk.per_sequence.end() ? Rat(0) : it->second;
        // class masses share the multinomial factor, so per-sequence suffices
        if (mv < factor * pv) return false;
    }
    return true;
}

// De Finetti gap of each model against the applicable KL and TV bounds, the
// index-vector inequality, and Pinsker.
inline void check_models_suite(const std::vector<ExchangeableModel>& models, long double tol,
                               CheckStats& stats, int bits = kDefaultPrecisionBits) {
    int idx = 0;
    for (const ExchangeableModel& model : models) {
        Subject subj = model_subject(model, "model" + std::to_string(idx++));
        for (long k = 1; k <= model.n; ++k) {
            std::string w = subj.id + " c=" + std::to_string(model.c) + " " +
                            witness_nk(model.n, k);
            std::vector<std::string> ids = {"new1", "new2", "with_olly", "df_general",
                                            "df_finite"};
            if (model.c == 2 && k < model.n) ids.push_back("gk_binary");
            stats.tally_rows(verify_instance(subj, k, ids, bits), w);
            stats.tally("freedman_index", freedman_index_holds(model, k), w);
            auto [p, q] = subject_pair(subj, k);
            PinskerCheck pc = pinsker_slack(p, q, bits);
            bool ok = pc.holds || (!pc.kl.infinite &&
                                   rat_to_ld(pc.tv) <= pc.sqrt_two_kl.value +
                                                           pc.sqrt_two_kl.abs_error + tol);
            stats.tally("pinsker", ok, w);
        }
    }
}

// Tightness: the Diaconis pair at n=k=2 and the uniform random permutation
// meet the tight KL bound (upper equals the converse lower bound), and the TV
// gap matches the exact identity.
inline void check_tightness_grid(long max_n, long double tol, CheckStats& stats,
                                 int bits = kDefaultPrecisionBits) {
    {
        MixingMeasure mu{2, 2, {}};
        mu.weights[{1, 1}] = Rat(1);
        ExchangeableModel pair = model_from_weights(2, 2, std::move(mu));
        DeFinettiGap gap = definetti_gap(pair, 2, Metric::KL, bits);
        PrecFloat log2 = log_rational(Rat(2), bits);
        bool ok = !gap.kl.infinite &&
                  std::fabs(gap.kl.value.value - log2.value) <=
                      gap.kl.value.abs_error + log2.abs_error + tol;
        stats.tally("tightness_pair", ok, "diaconis pair n=k=2");
    }
    for (long n = 3; n <= max_n; ++n) {
        ExchangeableModel perm = model_random_permutation(n);
        for (long k = 2; k < n; ++k) {
            DeFinettiGap kl_gap = definetti_gap(perm, k, Metric::KL, bits);
            BoundParams params;
            params.c = static_cast<int>(n);
            params.n = n;
            params.k = k;
            BoundResult upper = evaluate_bound("new2", params, bits);
            BoundResult lower = evaluate_bound("yu_converse", params, bits);
            bool ok = !kl_gap.kl.infinite && upper.valid && lower.valid;
            if (ok) {
                long double widen = kl_gap.kl.value.abs_error + upper.value.error_ld() +
                                    lower.value.error_ld() + tol;
                ok = std::fabs(kl_gap.kl.value.value - upper.value.value_ld()) <= widen &&
                     std::fabs(kl_gap.kl.value.value - lower.value.value_ld()) <= widen;
            }
            stats.tally("tightness_kl", ok, witness_nk(n, k));

            DeFinettiGap tv_gap = definetti_gap(perm, k, Metric::TV_L1, bits);
            BoundResult exact_tv = evaluate_bound("exact_tv_uniform", params, bits);
            bool tv_ok = exact_tv.valid && exact_tv.value.is_rational &&
                         tv_gap.tv == exact_tv.value.rat;
            stats.tally("tightness_tv", tv_ok, witness_nk(n, k));
        }
    }
}

// Pinsker on the uniform-family pairs (the grid of suites 1 and 2).
inline void check_pinsker_uniform(long max_n, long double tol, CheckStats& stats,
                                  int bits = kDefaultPrecisionBits) {
    for (long n = 1; n <= max_n; ++n) {
        Urn urn{Composition(static_cast<size_t>(n), 1L)};
        for (long k = 1; k <= n; ++k) {
            PinskerCheck pc = pinsker_slack(to_sequence_level(hypergeom_composition(urn, k)),
                                            to_sequence_level(multinom_composition(urn, k)),
                                            bits);
            bool ok = pc.holds || (!pc.kl.infinite &&
                                   rat_to_ld(pc.tv) <= pc.sqrt_two_kl.value +
                                                           pc.sqrt_two_kl.abs_error + tol);
            stats.tally("pinsker", ok, witness_nk(n, k));
        }
    }
}

// Full verification run behind `verify --scope fast|full`.
inline CheckStats run_verification(const std::string& scope,
                                   int bits = kDefaultPrecisionBits) {
    const bool full = scope == "full";
    if (!full && scope != "fast")
        throw std::invalid_argument("verify: scope must be 'fast' or 'full'");
    const long double tol = 1e-12L;
    CheckStats stats;
    check_exact_tv_grid(full ? 8 : 6, stats);
    check_freedman_grid(full ? 8 : 6, tol, stats, bits);
    check_pinsker_uniform(full ? 8 : 6, tol, stats, bits);
    check_stam_equivalence_grid(full ? 4 : 3, full ? 10 : 7, stats);
    check_kl_sampling_grid(full ? 4 : 3, full ? 10 : 7, tol, stats, true, bits);
    check_models_suite(random_models(full ? 200 : 50, 1, 3, 1, 10, kSuiteSeed), tol, stats,
                       bits);
    check_models_suite(random_models(full ? 50 : 20, 2, 2, 2, 10, kSuiteSeed + 1), tol,
                       stats, bits);
    check_tightness_grid(full ? 8 : 6, tol, stats, bits);
    return stats;
}

}  // namespace finetti
