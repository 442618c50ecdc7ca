// Command-line front end: exact sampling divergences, de Finetti gaps, bound
// tables, the verification suite, and parameter sweeps.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "finetti/bounds.hpp"
#include "finetti/model_io.hpp"
#include "finetti/report.hpp"
#include "finetti/verify.hpp"

namespace {

using namespace finetti;

Composition parse_counts(const std::string& s) {
    Composition out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t pos = 0;
        long v = std::stol(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("malformed count '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty count list");
    return out;
}

std::vector<long> parse_long_list(const std::string& s) { return parse_counts(s); }

// "a:b" inclusive; "a" alone means the single value a. a > b is empty.
std::vector<long> parse_range(const std::string& s) {
    auto colon = s.find(':');
    long lo = std::stol(s.substr(0, colon));
    long hi = colon == std::string::npos ? lo : std::stol(s.substr(colon + 1));
    std::vector<long> out;
    for (long v = lo; v <= hi; ++v) out.push_back(v);
    return out;
}

std::vector<std::string> filter_by_metric(const std::vector<std::string>& ids,
                                          bool want_tv, bool want_kl) {
    std::vector<std::string> out;
    for (const std::string& id : ids) {
        const BoundSpec* spec = find_bound(id);
        if (!spec) continue;
        if (spec->metric == Metric::TV_L1 ? want_tv : want_kl) out.push_back(id);
    }
    return out;
}

void emit(const std::vector<ReportRow>& rows, const std::string& format, int bits,
          const std::string& out_path, const std::string& meta = "") {
    std::string text =
        format == "json" ? rows_to_json(rows, bits, meta) : rows_to_csv(rows, bits, meta);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot write '" + out_path + "'");
        out << text;
    }
}

// The deterministic urn used by sweep cells: as balanced as (n, c) allows.
Urn balanced_urn(int c, long n) {
    Composition counts(static_cast<size_t>(c), n / c);
    for (long j = 0; j < n % c; ++j) ++counts[static_cast<size_t>(j)];
    return Urn{counts};
}

int run(int argc, char** argv) {
    CLI::App app{"exact sampling and finite de Finetti bound calculator"};
    app.require_subcommand(1);

    int precision_bits = kDefaultPrecisionBits;
    std::string format = "csv";
    app.add_option("--precision-bits", precision_bits, "log/exp precision in bits")
        ->check(CLI::Range(50, 4096))
        ->capture_default_str();
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    // sampling
    auto* sampling = app.add_subcommand(
        "sampling", "without- vs with-replacement divergences for one urn");
    std::string urn_arg, metric_arg = "tv,kl";
    long k_arg = 0;
    sampling->add_option("--urn", urn_arg, "comma-separated colour counts")->required();
    sampling->add_option("--k", k_arg, "number of draws")->required();
    sampling->add_option("--metric", metric_arg, "tv, kl, or tv,kl");

    // definetti
    auto* definetti = app.add_subcommand(
        "definetti", "de Finetti gap of a model against the applicable bounds");
    std::string model_path, k_list_arg, definetti_metric = "tv,kl";
    definetti->add_option("--model", model_path, "model JSON file")->required();
    definetti->add_option("--k", k_list_arg, "comma-separated draw lengths")->required();
    definetti->add_option("--metric", definetti_metric, "tv, kl, or tv,kl");

    // bounds-table
    auto* table = app.add_subcommand("bounds-table", "evaluate the closed-form bounds");
    int table_c = 0;
    long table_n = 0, table_k = 0;
    std::string table_urn;
    bool dump_registry = false;
    table->add_option("--c", table_c, "alphabet size");
    table->add_option("--n", table_n, "urn size / vector length");
    table->add_option("--k", table_k, "number of draws");
    table->add_option("--urn", table_urn, "explicit colour counts (overrides --c/--n)");
    table->add_flag("--registry", dump_registry, "print the bound registry as JSON");

    // verify
    auto* verify = app.add_subcommand("verify", "run the verification suite");
    std::string scope = "fast";
    verify->add_option("--scope", scope, "fast or full")
        ->check(CLI::IsMember({"fast", "full"}));

    // sweep
    auto* sweep = app.add_subcommand("sweep", "bound table over a (c, n, k) grid");
    std::string c_range, n_range, k_range, out_path, bounds_arg;
    sweep->add_option("--c-range", c_range, "c range 'a:b'")->required();
    sweep->add_option("--n-range", n_range, "n range 'a:b'")->required();
    sweep->add_option("--k-range", k_range, "k range 'a:b'")->required();
    sweep->add_option("--out", out_path, "output path (default stdout)");
    sweep->add_option("--bounds", bounds_arg, "comma-separated bound ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage errors always exit 2
    }

    auto metric_flags = [](const std::string& arg) {
        bool tv = arg.find("tv") != std::string::npos;
        bool kl = arg.find("kl") != std::string::npos;
        if (!tv && !kl) throw std::invalid_argument("metric must name tv and/or kl");
        return std::pair<bool, bool>{tv, kl};
    };

    if (sampling->parsed()) {
        Urn urn{parse_counts(urn_arg)};
        if (k_arg < 1 || k_arg > urn.n())
            throw std::invalid_argument("sampling: need 1 <= k <= n");
        auto [tv, kl] = metric_flags(metric_arg);
        Subject subj = urn_subject(std::move(urn));
        auto ids = filter_by_metric(sampling_bound_ids(), tv, kl);
        emit(verify_instance(subj, k_arg, ids, precision_bits), format, precision_bits, "");
        return 0;
    }

    if (definetti->parsed()) {
        ExchangeableModel model = load_model(model_path);
        auto [tv, kl] = metric_flags(definetti_metric);
        Subject subj = model_subject(std::move(model));
        auto ids = filter_by_metric(model_bound_ids(), tv, kl);
        std::vector<ReportRow> rows;
        for (long k : parse_long_list(k_list_arg)) {
            if (k < 1 || k > subj.n())
                throw std::invalid_argument("definetti: need 1 <= k <= n");
            auto kr = verify_instance(subj, k, ids, precision_bits);
            rows.insert(rows.end(), kr.begin(), kr.end());
        }
        emit(rows, format, precision_bits, "");
        return 0;
    }

    if (table->parsed()) {
        if (dump_registry) {
            std::cout << registry_to_json().dump(2) << "\n";
            return 0;
        }
        BoundParams params;
        if (!table_urn.empty()) {
            Urn urn{parse_counts(table_urn)};
            params.c = urn.colours();
            params.n = urn.n();
            params.counts = urn.counts;
            params.entropy1 = entropy(urn.type(), precision_bits);
        } else {
            params.c = table_c;
            params.n = table_n;
        }
        params.k = table_k;
        if (params.n < 1 || params.k < 1)
            throw std::invalid_argument("bounds-table: need --n and --k (or --urn)");
        std::vector<ReportRow> rows;
        for (const BoundSpec& spec : bound_registry()) {
            BoundResult res = evaluate_bound(spec.id, params, precision_bits);
            ReportRow row;
            row.subject_id = "params";
            row.c = params.c;
            row.n = params.n;
            row.k = params.k;
            row.metric = metric_name(spec.metric);
            row.bound_id = spec.id;
            row.valid = res.valid ? "true" : "false";
            if (res.valid)
                row.bound_value = format_bound_value(res.value);
            else
                row.reason = res.note;
            if (!res.note.empty() && res.valid) row.reason = res.note;
            rows.push_back(row);
        }
        emit(rows, format, precision_bits, "");
        return 0;
    }

    if (verify->parsed()) {
        CheckStats stats = run_verification(scope, precision_bits);
        std::cout << "# scope=" << scope << " seed=" << kSuiteSeed
                  << " precision_bits=" << precision_bits << "\n";
        for (const auto& [id, count] : stats.id_checked) {
            long failed = stats.id_failed.count(id) ? stats.id_failed.at(id) : 0;
            std::cout << id << ": checked=" << count << " failed=" << failed << "\n";
        }
        std::cout << "total: checked=" << stats.checked << " failed=" << stats.failed
                  << "\n";
        for (const std::string& w : stats.witnesses) std::cerr << "FAIL " << w << "\n";
        return stats.failed == 0 ? 0 : 1;
    }

    if (sweep->parsed()) {
        auto cs = parse_range(c_range);
        auto ns = parse_range(n_range);
        auto ks = parse_range(k_range);
        std::vector<std::string> ids =
            bounds_arg.empty() ? sampling_bound_ids()
                               : [&] {
                                     std::vector<std::string> v;
                                     std::stringstream ss(bounds_arg);
                                     std::string tok;
                                     while (std::getline(ss, tok, ',')) v.push_back(tok);
                                     return v;
                                 }();
        std::vector<ReportRow> rows;
        for (long c : cs) {
            for (long n : ns) {
                for (long k : ks) {
                    if (c < 1 || n < 1 || k < 1 || k > n) {
                        ReportRow row;
                        row.subject_id = "cell";
                        row.c = static_cast<int>(c);
                        row.n = n;
                        row.k = k;
                        row.pass = "skip";
                        row.reason = "infeasible cell";
                        rows.push_back(row);
                        continue;
                    }
                    Subject subj = urn_subject(balanced_urn(static_cast<int>(c), n));
                    auto cell = verify_instance(subj, k, ids, precision_bits);
                    rows.insert(rows.end(), cell.begin(), cell.end());
                }
            }
        }
        emit(rows, format, precision_bits, out_path, "seed=" + std::to_string(kSuiteSeed));
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
