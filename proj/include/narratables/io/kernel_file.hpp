#pragma once

// Kernel files:
// {
//   "name": "exchange",
//   "in": ["p1", "p2"], "out": ["q1", "q2"],
//   "deltas": [{"q2": "1", "p1": "-1"}, {"q1": "1", "p2": "-1"}],
//   "smooth_prefactor": false,
//   "spin_structure": "delta(s3,s2) delta(s4,s1)"
// }

#include "narratables/clusterkit.hpp"
#include "narratables/io/json_util.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace narratables::io {

inline clusterkit::MomentumKernel parse_kernel(const std::string& text, const std::string& source,
                                               std::vector<std::string>* warnings = nullptr) {
    const json doc = parse_json(text, source);
    FieldReader rd(source, warnings);
    auto names = [&](const char* key) {
        std::vector<std::string> out;
        const json& arr = rd.array(rd.member(doc, key, "<root>"), key);
        for (std::size_t i = 0; i < arr.size(); ++i)
            out.push_back(rd.string(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
        return out;
    };
    const std::string name = doc.contains("name") ? rd.string(doc["name"], "name") : std::string("unnamed");
    const auto in = names("in");
    const auto out = names("out");

    std::vector<std::string> columns = out;
    columns.insert(columns.end(), in.begin(), in.end());
    if (columns.size() < 2) rd.error("in/out", "a kernel needs at least two momentum slots");

    std::vector<clusterkit::RationalRow> rows;
    const json& deltas = rd.array(rd.member(doc, "deltas", "<root>"), "deltas");
    for (std::size_t r = 0; r < deltas.size(); ++r) {
        const std::string p = "deltas[" + std::to_string(r) + "]";
        if (!deltas[r].is_object()) rd.error(p, "expected an object mapping slot names to coefficients");
        clusterkit::RationalRow row(columns.size(), Rational(0));
        for (const auto& [slot, coeff] : deltas[r].items()) {
            auto it = std::find(columns.begin(), columns.end(), slot);
            if (it == columns.end()) rd.error(p + "." + slot, "unknown momentum slot '" + slot + "'");
            row[static_cast<std::size_t>(it - columns.begin())] = rd.rational(coeff, p + "." + slot);
        }
        if (std::all_of(row.begin(), row.end(), [](const Rational& x) { return x == 0; }))
            rd.error(p, "delta row has no nonzero coefficient");
        rows.push_back(std::move(row));
    }
    const bool smooth = doc.contains("smooth_prefactor") && doc["smooth_prefactor"].is_boolean() &&
                        doc["smooth_prefactor"].get<bool>();
    const std::string spin = doc.contains("spin_structure") ? rd.string(doc["spin_structure"], "spin_structure") : "";
    try {
        return clusterkit::MomentumKernel(name, in, out, std::move(rows), smooth, spin);
    } catch (const Error& e) {
        rd.error("<root>", e.what());
    }
}

inline clusterkit::MomentumKernel load_kernel(const std::string& path, std::vector<std::string>* warnings = nullptr) {
    return parse_kernel(read_file(path), path, warnings);
}

} // namespace narratables::io
