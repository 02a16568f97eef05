#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "genuslab/map.hpp"

namespace genuslab {

// A map plus an optional vertex labeling (used for well-labeled unicellular
// maps; labels[v] is the label of vertex id v).
struct MapRecord {
    CombinatorialMap map;
    std::optional<std::vector<int>> labels;
};

// Serialization is hand-rolled so the output is byte-identical across
// platforms and library versions: fixed key order, no whitespace. Parsing
// goes through nlohmann::json and accepts any key order.
inline std::string encode(const CombinatorialMap& m,
                          const std::optional<std::vector<int>>& labels = std::nullopt) {
    std::string out;
    out.reserve(32 + 12 * static_cast<std::size_t>(m.dart_count()));
    auto append_array = [&out](const auto& xs) {
        out += '[';
        bool first = true;
        for (const auto& x : xs) {
            if (!first) out += ',';
            first = false;
            out += std::to_string(x);
        }
        out += ']';
    };
    out += "{\"dart_count\":";
    out += std::to_string(m.dart_count());
    out += ",\"sigma\":";
    append_array(m.sigma_array());
    out += ",\"alpha\":";
    append_array(m.alpha_array());
    out += ",\"root\":";
    out += std::to_string(m.root());
    out += ",\"holes\":";
    append_array(m.hole_reps());
    out += ",\"profile\":\"";
    out += to_string(m.profile());
    out += '"';
    if (labels) {
        out += ",\"labels\":";
        append_array(*labels);
    }
    out += '}';
    return out;
}

inline std::string encode(const MapRecord& r) { return encode(r.map, r.labels); }

inline MapRecord decode(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_object()) throw MapError("map record must be a JSON object");
    for (const char* key : {"dart_count", "sigma", "alpha", "root", "holes", "profile"}) {
        if (!j.contains(key)) throw MapError(std::string("missing key: ") + key);
    }
    auto sigma = j.at("sigma").get<std::vector<Dart>>();
    auto alpha = j.at("alpha").get<std::vector<Dart>>();
    if (j.at("dart_count").get<std::size_t>() != sigma.size())
        throw MapError("dart_count disagrees with sigma length");
    auto profile = profile_from_string(j.at("profile").get<std::string>());
    if (!profile) throw MapError("unknown profile: " + j.at("profile").get<std::string>());
    MapRecord r;
    r.map = build_and_validate(std::move(sigma), std::move(alpha), j.at("root").get<Dart>(),
                               j.at("holes").get<std::vector<Dart>>(), *profile);
    if (j.contains("labels")) {
        r.labels = j.at("labels").get<std::vector<int>>();
        if (r.labels->size() != r.map.num_vertices())
            throw MapError("labels length disagrees with vertex count");
    }
    return r;
}

// NDJSON containers: one record per line, newline after every record.
inline void write_ndjson(std::ostream& os, const std::vector<MapRecord>& records) {
    for (const auto& r : records) os << encode(r) << '\n';
}

inline std::vector<MapRecord> read_ndjson(std::istream& is) {
    std::vector<MapRecord> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        out.push_back(decode(line));
    }
    return out;
}

}  // namespace genuslab
