#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "finetti/combinatorics.hpp"
#include "finetti/divergences.hpp"
#include "finetti/precision_float.hpp"

namespace finetti {

enum class BoundKind { Upper, Lower, Exact };

// A bound value is exact-rational whenever the closed form allows it; a log
// or exp makes it a PrecFloat.
struct BoundValue {
    bool is_rational = true;
    Rat rat;
    PrecFloat fl;

    static BoundValue exact(Rat r) { return {true, std::move(r), {}}; }
    static BoundValue approx(PrecFloat f) { return {false, {}, f}; }

    long double value_ld() const { return is_rational ? rat_to_ld(rat) : fl.value; }
    long double error_ld() const { return is_rational ? 0.0L : fl.abs_error; }
};

// Inputs a closed form may need. `counts` is the urn composition for the
// composition-dependent bound; `entropy1` is a precomputed H(X_1) in nats.
struct BoundParams {
    int c = 0;
    long n = 0;
    long k = 0;
    std::optional<Composition> counts;
    std::optional<PrecFloat> entropy1;
};

struct BoundSpec {
    std::string id;
    Metric metric;
    BoundKind kind;
    std::string params_desc;
    std::string validity_desc;
    std::string source;            // literature citation for the closed form
    std::string convention_note;   // nonempty where a TV convention caveat applies
    bool assertable;               // false: evaluator only, never pass/failed
    std::function<bool(const BoundParams&)> valid;
    std::function<BoundValue(const BoundParams&, int)> eval;
};

struct BoundResult {
    std::string id;
    Metric metric = Metric::TV_L1;
    BoundKind kind = BoundKind::Upper;
    bool valid = false;
    std::string note;               // why invalid, or the convention note
    BoundValue value;
    std::string convention = "L1";  // all TV values use the L1 (factor-2) convention
};

namespace detail {

inline PrecFloat pf_from_rat(const Rat& r) {
    long double v = rat_to_ld(r);
    return {v, std::fabs(v) * 0x1p-63L};
}

// log(n^k (n-k)! / n!) -- the uniform-urn relative entropy.
inline PrecFloat log_uniform_kl(long n, long k, int bits) {
    Rat arg = make_rat(int_pow(Int(n), static_cast<unsigned long>(k)) *
                           factorial(static_cast<unsigned long>(n - k)),
                       factorial(static_cast<unsigned long>(n)));
    return log_rational(arg, bits);
}

inline bool basic_nk(const BoundParams& p) { return p.n >= 1 && p.k >= 1 && p.k <= p.n; }

}  // namespace detail

// -log(1 - k(k-1)/(2n)), the relaxed form shared by the tight de Finetti KL
// bound and its sampling-theorem counterpart; defined only for k(k-1) < 2n.
inline PrecFloat relaxed_log_bound(long n, long k, int bits) {
    if (k * (k - 1) >= 2 * n)
        throw std::domain_error("relaxed_log_bound: needs k(k-1) < 2n");
    Rat inner = Rat(1) - make_rat(k * (k - 1), 2 * n);
    return -log_rational(inner, bits);
}

inline const std::vector<BoundSpec>& bound_registry() {
    static const std::vector<BoundSpec> registry = [] {
        std::vector<BoundSpec> r;
        auto nk = detail::basic_nk;

        // ---- total variation (all values in the L1 convention) ----
        r.push_back({"df_general", Metric::TV_L1, BoundKind::Upper, "n, k",
                     "1 <= k <= n", "Diaconis-Freedman 1980",
                     "stated as k(k-1)/(2n) in the half-L1 (sup) convention; "
                     "reported here as k(k-1)/n in L1",
                     true, nk,
                     [](const BoundParams& p, int) {
                         return BoundValue::exact(make_rat(p.k * (p.k - 1), p.n));
                     }});
        r.push_back({"df_finite", Metric::TV_L1, BoundKind::Upper, "c, n, k",
                     "1 <= k <= n, c >= 1", "Diaconis-Freedman 1980", "",
                     true, [nk](const BoundParams& p) { return nk(p) && p.c >= 1; },
                     [](const BoundParams& p, int) {
                         return BoundValue::exact(make_rat(2L * p.c * p.k, p.n));
                     }});
        r.push_back({"df_sampling", Metric::TV_L1, BoundKind::Upper, "c, n, k",
                     "1 <= k <= n, c >= 1", "Diaconis-Freedman 1980", "",
                     true, [nk](const BoundParams& p) { return nk(p) && p.c >= 1; },
                     [](const BoundParams& p, int) {
                         return BoundValue::exact(make_rat(2L * p.c * p.k, p.n));
                     }});
        r.push_back({"freedman_upper", Metric::TV_L1, BoundKind::Upper, "n, k",
                     "1 <= k <= n (uniform n-colour urn)", "Freedman 1977", "",
                     true, nk,
                     [](const BoundParams& p, int) {
                         return BoundValue::exact(make_rat(p.k * (p.k - 1), p.n));
                     }});
        r.push_back({"freedman_lower", Metric::TV_L1, BoundKind::Lower, "n, k",
                     "1 <= k <= n (uniform n-colour urn)", "Freedman 1977", "",
                     true, nk,
                     [](const BoundParams& p, int bits) {
                         PrecFloat e = exp_rational(-make_rat(p.k * (p.k - 1), 2 * p.n), bits);
                         long double v = 2.0L - 2.0L * e.value;
                         return BoundValue::approx(
                             {v, 2.0L * e.abs_error + std::fabs(v) * 0x1p-62L});
                     }});
        r.push_back({"exact_tv_uniform", Metric::TV_L1, BoundKind::Exact, "n, k",
                     "1 <= k <= n (uniform n-colour urn)", "Freedman 1977", "",
                     true, nk,
                     [](const BoundParams& p, int) {
                         Rat ratio = make_rat(
                             factorial(static_cast<unsigned long>(p.n)),
                             factorial(static_cast<unsigned long>(p.n - p.k)) *
                                 int_pow(Int(p.n), static_cast<unsigned long>(p.k)));
                         return BoundValue::exact(Rat(2) * (Rat(1) - ratio));
                     }});

        // ---- relative entropy, upper ----
        r.push_back({"stam", Metric::KL, BoundKind::Upper, "c, n, k",
                     "1 <= k <= n, c >= 1", "Stam 1978", "",
                     true, [nk](const BoundParams& p) { return nk(p) && p.c >= 1; },
                     [](const BoundParams& p, int) {
                         if (p.n == 1) return BoundValue::exact(Rat(0));
                         return BoundValue::exact(make_rat(
                             Int(p.c - 1) * Int(p.k) * Int(p.k - 1),
                             Int(2) * Int(p.n - 1) * Int(p.n - p.k + 1)));
                     }});
        r.push_back({"harremoes_matus", Metric::KL, BoundKind::Upper, "c, n, k",
                     "1 <= k <= n-1, c >= 1", "Harremoes-Matus 2020", "",
                     true,
                     [](const BoundParams& p) {
                         return p.c >= 1 && p.n >= 2 && p.k >= 1 && p.k <= p.n - 1;
                     },
                     [](const BoundParams& p, int bits) {
                         PrecFloat lg = log_rational(make_rat(p.n - 1, p.n - p.k), bits);
                         Rat rest = -make_rat(p.k, p.n) + make_rat(1L, p.n - p.k + 1);
                         PrecFloat inner = lg + detail::pf_from_rat(rest);
                         return BoundValue::approx(scale(inner, Rat(p.c - 1)));
                     }});
        r.push_back({"jgk_urn", Metric::KL, BoundKind::Upper, "c, n, k, counts",
                     "1 <= k <= floor(n/2), all l_j >= 1",
                     "Johnson-Gavalakis-Kontoyiannis", "",
                     true,
                     [](const BoundParams& p) {
                         if (!p.counts || p.n < 2 || p.k < 1 || 2 * p.k > p.n) return false;
                         for (long l : *p.counts)
                             if (l < 1) return false;
                         return true;
                     },
                     [](const BoundParams& p, int bits) {
                         const Composition& l = *p.counts;
                         const long n = p.n, k = p.k;
                         PrecFloat lg = log_rational(make_rat(n, n - k), bits);
                         PrecFloat first = scale(lg + detail::pf_from_rat(-make_rat(k, n - 1)),
                                                 make_rat(p.c - 1, 2));
                         Rat sum_inv(0), sum_inv3(0);
                         for (long lj : l) {
                             sum_inv += make_rat(n, lj);
                             sum_inv3 += make_rat(int_pow(Int(n), 3), int_pow(Int(lj), 3));
                         }
                         Rat second = make_rat(Int(k) * Int(2 * n + 1),
                                               Int(12) * Int(n) * Int(n - 1) * Int(n - k)) *
                                      sum_inv;
                         Rat third = make_rat(Int(1), Int(360)) *
                                     (make_rat(Int(1), int_pow(Int(n - k), 3)) -
                                      make_rat(Int(1), int_pow(Int(n), 3))) *
                                     sum_inv3;
                         return BoundValue::approx(
                             first + detail::pf_from_rat(second + third));
                     }});
        r.push_back({"exact_kl_uniform", Metric::KL, BoundKind::Exact, "n, k",
                     "1 <= k <= n (uniform n-colour urn)",
                     "Gavalakis-Johnson-Kontoyiannis", "",
                     true, nk,
                     [](const BoundParams& p, int bits) {
                         return BoundValue::approx(detail::log_uniform_kl(p.n, p.k, bits));
                     }});
        r.push_back({"gk_binary", Metric::KL, BoundKind::Upper, "n, k",
                     "c = 2, 1 <= k < n", "Gavalakis-Kontoyiannis 2021", "",
                     true,
                     [](const BoundParams& p) {
                         return p.c == 2 && p.n >= 2 && p.k >= 1 && p.k < p.n;
                     },
                     [](const BoundParams& p, int bits) {
                         PrecFloat lg = log_rational(Rat(p.n), bits);
                         return BoundValue::approx(
                             scale(lg, make_rat(5 * p.k * p.k, p.n - p.k)));
                     }});
        r.push_back({"gkb_entropy", Metric::KL, BoundKind::Upper, "n, k, entropy1",
                     "1 <= k <= n-2, H(X_1) finite", "Gavalakis-Berta 2024",
                     "holds for a different mixing measure; never asserted "
                     "against the empirical-mixing gap",
                     false,
                     [](const BoundParams& p) {
                         return p.entropy1.has_value() && p.k >= 1 && p.k <= p.n - 2;
                     },
                     [](const BoundParams& p, int) {
                         return BoundValue::approx(scale(
                             *p.entropy1,
                             make_rat(Int(p.k) * Int(p.k - 1), Int(2) * Int(p.n - p.k - 1))));
                     }});
        r.push_back({"with_olly", Metric::KL, BoundKind::Upper, "c, n, k",
                     "1 <= k <= n, c >= 1", "Johnson-Gavalakis-Kontoyiannis", "",
                     true, [nk](const BoundParams& p) { return nk(p) && p.c >= 1; },
                     [](const BoundParams& p, int) {
                         if (p.n == 1) return BoundValue::exact(Rat(0));
                         return BoundValue::exact(make_rat(
                             Int(p.c - 1) * Int(p.k) * Int(p.k - 1),
                             Int(2) * Int(p.n - 1) * Int(p.n - p.k + 1)));
                     }});
        r.push_back({"song", Metric::KL, BoundKind::Upper, "n, k",
                     "1 <= k < n", "Song-Attiah-Yu 2024", "",
                     true,
                     [](const BoundParams& p) { return p.n >= 2 && p.k >= 1 && p.k < p.n; },
                     [](const BoundParams& p, int bits) {
                         return BoundValue::approx(detail::log_uniform_kl(p.n, p.k, bits));
                     }});
        r.push_back({"new1", Metric::KL, BoundKind::Upper, "n, k",
                     "1 <= k <= n", "this work", "",
                     true, nk,
                     [](const BoundParams& p, int) {
                         return BoundValue::exact(make_rat(
                             Int(p.k) * Int(p.k - 1), Int(2) * Int(p.n - p.k + 1)));
                     }});
        r.push_back({"new2", Metric::KL, BoundKind::Upper, "n, k",
                     "1 <= k <= n", "this work", "",
                     true, nk,
                     [](const BoundParams& p, int bits) {
                         return BoundValue::approx(detail::log_uniform_kl(p.n, p.k, bits));
                     }});

        // ---- relative entropy, lower ----
        r.push_back({"yu_converse", Metric::KL, BoundKind::Lower, "n, k",
                     "1 <= k < n (marginal of a uniform random permutation)",
                     "Song-Attiah-Yu 2024", "",
                     true,
                     [](const BoundParams& p) { return p.n >= 2 && p.k >= 1 && p.k < p.n; },
                     [](const BoundParams& p, int bits) {
                         return BoundValue::approx(detail::log_uniform_kl(p.n, p.k, bits));
                     }});
        return r;
    }();
    return registry;
}

inline const BoundSpec* find_bound(const std::string& id) {
    for (const BoundSpec& s : bound_registry())
        if (s.id == id) return &s;
    return nullptr;
}

inline BoundResult evaluate_bound(const std::string& id, const BoundParams& params,
                                  int min_bits = kDefaultPrecisionBits) {
    BoundResult out;
    out.id = id;
    const BoundSpec* spec = find_bound(id);
    if (!spec) {
        out.note = "unknown bound id";
        return out;
    }
    out.metric = spec->metric;
    out.kind = spec->kind;
    out.note = spec->convention_note;
    if (!spec->valid(params)) {
        out.valid = false;
        out.note = "invalid params (" + spec->validity_desc + ")";
        return out;
    }
    out.valid = true;
    out.value = spec->eval(params, min_bits);
    return out;
}

inline BoundResult evaluate_tv_bound(const std::string& id, const BoundParams& params,
                                     int min_bits = kDefaultPrecisionBits) {
    const BoundSpec* spec = find_bound(id);
    if (spec && spec->metric != Metric::TV_L1)
        throw std::invalid_argument("evaluate_tv_bound: '" + id + "' is not a TV bound");
    return evaluate_bound(id, params, min_bits);
}

inline BoundResult evaluate_kl_bound(const std::string& id, const BoundParams& params,
                                     int min_bits = kDefaultPrecisionBits) {
    const BoundSpec* spec = find_bound(id);
    if (spec && (spec->metric != Metric::KL || spec->kind == BoundKind::Lower))
        throw std::invalid_argument("evaluate_kl_bound: '" + id + "' is not a KL upper bound");
    return evaluate_bound(id, params, min_bits);
}

inline BoundResult evaluate_kl_lower_bound(const std::string& id, const BoundParams& params,
                                           int min_bits = kDefaultPrecisionBits) {
    const BoundSpec* spec = find_bound(id);
    if (spec && !(spec->metric == Metric::KL && spec->kind == BoundKind::Lower))
        throw std::invalid_argument("evaluate_kl_lower_bound: '" + id +
                                    "' is not a KL lower bound");
    return evaluate_bound(id, params, min_bits);
}

// Registry export for documentation tooling.
inline nlohmann::json registry_to_json() {
    nlohmann::json out = nlohmann::json::array();
    for (const BoundSpec& s : bound_registry()) {
        nlohmann::json j;
        j["id"] = s.id;
        j["metric"] = s.metric == Metric::TV_L1 ? "TV_L1" : "KL";
        j["kind"] = s.kind == BoundKind::Upper   ? "upper"
                    : s.kind == BoundKind::Lower ? "lower"
                                                 : "exact";
        j["params"] = s.params_desc;
        j["validity"] = s.validity_desc;
        j["source"] = s.source;
        if (!s.convention_note.empty()) j["convention_note"] = s.convention_note;
        j["assertable"] = s.assertable;
        out.push_back(j);
    }
    return out;
}

}  // namespace finetti
