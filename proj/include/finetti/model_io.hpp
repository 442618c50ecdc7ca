#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "finetti/exchangeable.hpp"

namespace finetti {

// JSON model format:
//   {"alphabet_size": c, "n": n,
//    "type_weights": [{"counts": [l1, ..., lc], "weight": "num/den"}, ...]}
// Weights are exact rational strings; round-tripping is loss-free.

inline nlohmann::json model_to_json(const ExchangeableModel& model) {
    nlohmann::json j;
    j["alphabet_size"] = model.c;
    j["n"] = model.n;
    j["type_weights"] = nlohmann::json::array();
    for (const auto& [counts, w] : model.type_weights.weights) {
        nlohmann::json entry;
        entry["counts"] = counts;
        entry["weight"] = rat_to_string(w);
        j["type_weights"].push_back(entry);
    }
    return j;
}

inline ExchangeableModel model_from_json(const nlohmann::json& j) {
    if (!j.contains("alphabet_size") || !j.contains("n") || !j.contains("type_weights"))
        throw std::invalid_argument(
            "model: missing field (need alphabet_size, n, type_weights)");
    const int c = j.at("alphabet_size").get<int>();
    const long n = j.at("n").get<long>();
    MixingMeasure mu{c, n, {}};
    for (const auto& entry : j.at("type_weights")) {
        Composition counts = entry.at("counts").get<Composition>();
        Rat w = parse_rat(entry.at("weight").get<std::string>());
        if (mu.weights.count(counts))
            throw std::invalid_argument("model: duplicate type in type_weights");
        mu.weights[counts] = w;
    }
    return model_from_weights(c, n, std::move(mu));
}

inline ExchangeableModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("model: cannot open '" + path + "'");
    nlohmann::json j;
    in >> j;
    return model_from_json(j);
}

inline void save_model(const ExchangeableModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("model: cannot write '" + path + "'");
    out << model_to_json(model).dump(2) << "\n";
}

}  // namespace finetti
