#pragma once

// Scenario files: particles, initial spin state, named interaction rules and
// the foliations to examine, as one JSON document.
//
// {
//   "name": "four-particle-swap",
//   "particles": [{"id": 0, "species": "A", "start": ["0", "-1", "0", "0"], "velocity": ["0", "0", "0"]}, ...],
//   "initial_state": {"pairing": [[0, 1], [2, 3]]}
//                  | {"pairing": [[0, 1]], "single": {"2": [[1, 0], [0, 0]]}}
//                  | {"amplitudes": [[re, im], ...]},
//   "rules": {"free": [], "flip": [{"pair": ["*", "*"], "unitary": "swap"}]},
//   "foliations": [["0", "0", "0"], ["3/5", "0", "0"]]
// }
//
// Rationals are "n/d" strings (integers also exact); start events are (t, x, y, z).

#include "narratables/geometry.hpp"
#include "narratables/io/json_util.hpp"
#include "narratables/narrative.hpp"
#include "narratables/quantum.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace narratables::io {

struct ParticleSpec {
    std::size_t id = 0;
    std::string species;
    std::array<Rational, 4> start;  // t, x, y, z
    geometry::RationalVec3 velocity;
};

struct UnitarySpec {
    enum class Kind { Swap, Identity, Explicit } kind = Kind::Identity;
    Eigen::Matrix4cd matrix = Eigen::Matrix4cd::Identity();

    quantum::TwoSlotUnitary build() const {
        switch (kind) {
            case Kind::Swap: return quantum::swap_unitary();
            case Kind::Identity: return quantum::TwoSlotUnitary::identity();
            case Kind::Explicit: return quantum::TwoSlotUnitary(matrix);
        }
        return {};
    }
};

struct RuleEntry {
    std::string species_a;
    std::string species_b;
    UnitarySpec unitary;
};

struct RuleSpec {
    std::string name;
    std::vector<RuleEntry> entries;
};

struct ScenarioFile {
    std::string name;
    std::vector<ParticleSpec> particles;
    std::variant<quantum::PairingSpec, std::vector<std::complex<double>>> initial_state;
    std::vector<RuleSpec> rules;
    std::vector<geometry::RationalVec3> foliations;
};

struct LoadedScenario {
    narrative::Scenario scenario;
    std::vector<narrative::InteractionRule> rules;
    std::vector<geometry::Foliation> foliations;

    const narrative::InteractionRule& rule(const std::string& name) const {
        for (const auto& r : rules)
            if (r.name() == name) return r;
        std::string known;
        for (const auto& r : rules) known += (known.empty() ? "" : ", ") + r.name();
        fail(ErrorKind::UnknownRule, "no rule named '" + name + "' (available: " + known + ")");
    }

    const geometry::Foliation& foliation(std::size_t index) const {
        if (index >= foliations.size())
            fail(ErrorKind::IndexOutOfRange, "foliation index " + std::to_string(index) + " out of range (" +
                                                 std::to_string(foliations.size()) + " foliations)");
        return foliations[index];
    }
};

namespace detail {

inline geometry::RationalVec3 parse_velocity(const FieldReader& rd, const json& value, const std::string& path) {
    rd.array(value, path, 3);
    geometry::RationalVec3 v{rd.rational(value[0], path + "[0]"), rd.rational(value[1], path + "[1]"),
                             rd.rational(value[2], path + "[2]")};
    if (v.norm_squared() >= 1)
        rd.error(path, "velocity " + geometry::to_string(v) + " is not subluminal (|v|^2 = " +
                           narratables::to_string(v.norm_squared()) + ")");
    return v;
}

inline UnitarySpec parse_unitary(const FieldReader& rd, const json& value, const std::string& path) {
    UnitarySpec u;
    if (value.is_string()) {
        const auto s = value.get<std::string>();
        if (s == "swap") u.kind = UnitarySpec::Kind::Swap;
        else if (s == "identity") u.kind = UnitarySpec::Kind::Identity;
        else rd.error(path, "unknown unitary '" + s + "' (expected \"swap\", \"identity\" or a 4x4 matrix)");
        return u;
    }
    const Eigen::MatrixXcd m = rd.complex_matrix(value, path);
    if (m.rows() != 4 || m.cols() != 4) rd.error(path, "explicit unitaries must be 4x4");
    u.kind = UnitarySpec::Kind::Explicit;
    u.matrix = m;
    try {
        (void)quantum::TwoSlotUnitary(u.matrix);
    } catch (const Error& e) {
        rd.error(path, e.what());
    }
    return u;
}

inline std::string slot_key(std::size_t slot) { return std::to_string(slot); }

} // namespace detail

inline ScenarioFile parse_scenario(const std::string& text, const std::string& source,
                                   std::vector<std::string>* warnings = nullptr) {
    const json doc = parse_json(text, source);
    FieldReader rd(source, warnings);
    ScenarioFile file;
    file.name = doc.contains("name") ? rd.string(doc["name"], "name") : std::string("unnamed");

    const json& particles = rd.array(rd.member(doc, "particles", "<root>"), "particles");
    for (std::size_t i = 0; i < particles.size(); ++i) {
        const std::string p = "particles[" + std::to_string(i) + "]";
        const json& item = particles[i];
        ParticleSpec spec;
        spec.id = item.contains("id") ? rd.index(item["id"], p + ".id") : i;
        spec.species = rd.string(rd.member(item, "species", p), p + ".species");
        const json& start = rd.array(rd.member(item, "start", p), p + ".start", 4);
        for (std::size_t k = 0; k < 4; ++k) spec.start[k] = rd.rational(start[k], p + ".start[" + std::to_string(k) + "]");
        spec.velocity = detail::parse_velocity(rd, rd.member(item, "velocity", p), p + ".velocity");
        file.particles.push_back(std::move(spec));
    }

    const json& init = rd.member(doc, "initial_state", "<root>");
    if (init.contains("amplitudes")) {
        const Eigen::VectorXcd v = rd.complex_vector(init["amplitudes"], "initial_state.amplitudes");
        file.initial_state = std::vector<std::complex<double>>(v.data(), v.data() + v.size());
    } else {
        quantum::PairingSpec pairing;
        const json& pairs = rd.array(rd.member(init, "pairing", "initial_state"), "initial_state.pairing");
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const std::string p = "initial_state.pairing[" + std::to_string(i) + "]";
            rd.array(pairs[i], p, 2);
            pairing.pairs.emplace_back(rd.index(pairs[i][0], p + "[0]"), rd.index(pairs[i][1], p + "[1]"));
        }
        if (init.contains("single")) {
            const json& singles = init["single"];
            if (!singles.is_object()) rd.error("initial_state.single", "expected an object keyed by slot");
            for (const auto& [key, value] : singles.items()) {
                const std::string p = "initial_state.single." + key;
                std::size_t slot = 0;
                try {
                    slot = std::stoul(key);
                } catch (const std::exception&) {
                    rd.error(p, "slot keys must be integers");
                }
                rd.array(value, p, 2);
                pairing.singles[slot] = {rd.complex(value[0], p + "[0]"), rd.complex(value[1], p + "[1]")};
            }
        }
        file.initial_state = std::move(pairing);
    }

    if (doc.contains("rules")) {
        const json& rules = doc["rules"];
        if (!rules.is_object()) rd.error("rules", "expected an object mapping rule names to entry lists");
        for (const auto& [name, entries] : rules.items()) {
            const std::string p = "rules." + name;
            RuleSpec rule{name, {}};
            rd.array(entries, p);
            for (std::size_t i = 0; i < entries.size(); ++i) {
                const std::string ep = p + "[" + std::to_string(i) + "]";
                const json& pair = rd.array(rd.member(entries[i], "pair", ep), ep + ".pair", 2);
                RuleEntry entry{rd.string(pair[0], ep + ".pair[0]"), rd.string(pair[1], ep + ".pair[1]"), {}};
                if ((entry.species_a == "*") != (entry.species_b == "*"))
                    rd.error(ep + ".pair", "wildcard entries must be [\"*\", \"*\"]");
                entry.unitary = detail::parse_unitary(rd, rd.member(entries[i], "unitary", ep), ep + ".unitary");
                rule.entries.push_back(std::move(entry));
            }
            file.rules.push_back(std::move(rule));
        }
    }

    if (doc.contains("foliations")) {
        const json& fols = rd.array(doc["foliations"], "foliations");
        for (std::size_t i = 0; i < fols.size(); ++i)
            file.foliations.push_back(detail::parse_velocity(rd, fols[i], "foliations[" + std::to_string(i) + "]"));
    }
    return file;
}

inline json to_json(const ScenarioFile& file) {
    json doc;
    doc["name"] = file.name;
    auto rational_array = [](auto begin, auto end) {
        json a = json::array();
        for (auto it = begin; it != end; ++it) a.push_back(narratables::to_string(*it));
        return a;
    };
    auto vec = [&](const geometry::RationalVec3& v) {
        const std::array<Rational, 3> xs{v.x, v.y, v.z};
        return rational_array(xs.begin(), xs.end());
    };
    doc["particles"] = json::array();
    for (const auto& p : file.particles)
        doc["particles"].push_back({{"id", p.id},
                                    {"species", p.species},
                                    {"start", rational_array(p.start.begin(), p.start.end())},
                                    {"velocity", vec(p.velocity)}});
    if (const auto* pairing = std::get_if<quantum::PairingSpec>(&file.initial_state)) {
        json pairs = json::array();
        for (const auto& [a, b] : pairing->pairs) pairs.push_back({a, b});
        doc["initial_state"] = {{"pairing", pairs}};
        if (!pairing->singles.empty()) {
            json singles = json::object();
            for (const auto& [slot, amps] : pairing->singles)
                singles[detail::slot_key(slot)] = {complex_to_json(amps[0]), complex_to_json(amps[1])};
            doc["initial_state"]["single"] = singles;
        }
    } else {
        json amps = json::array();
        for (const auto& z : std::get<std::vector<std::complex<double>>>(file.initial_state))
            amps.push_back(complex_to_json(z));
        doc["initial_state"] = {{"amplitudes", amps}};
    }
    doc["rules"] = json::object();
    for (const auto& rule : file.rules) {
        json entries = json::array();
        for (const auto& e : rule.entries) {
            json u;
            switch (e.unitary.kind) {
                case UnitarySpec::Kind::Swap: u = "swap"; break;
                case UnitarySpec::Kind::Identity: u = "identity"; break;
                case UnitarySpec::Kind::Explicit: u = matrix_to_json(e.unitary.matrix); break;
            }
            entries.push_back({{"pair", {e.species_a, e.species_b}}, {"unitary", u}});
        }
        doc["rules"][rule.name] = entries;
    }
    doc["foliations"] = json::array();
    for (const auto& f : file.foliations) doc["foliations"].push_back(vec(f));
    return doc;
}

inline std::string serialize(const ScenarioFile& file) { return to_json(file).dump(2) + "\n"; }

inline LoadedScenario build(const ScenarioFile& file) {
    std::vector<geometry::Worldline> worldlines;
    for (const auto& p : file.particles)
        worldlines.emplace_back(p.id, p.species, geometry::Event{p.start[0], {p.start[1], p.start[2], p.start[3]}},
                                p.velocity);
    const std::size_t n = worldlines.size();
    std::optional<quantum::SpinState> state;
    if (const auto* pairing = std::get_if<quantum::PairingSpec>(&file.initial_state)) {
        state = quantum::singlet_product(n, *pairing);
    } else {
        const auto& amps = std::get<std::vector<std::complex<double>>>(file.initial_state);
        quantum::SpinState::check_slot_count(n);
        if (amps.size() != (std::size_t{1} << n))
            fail(ErrorKind::DimensionMismatch, "initial_state.amplitudes has " + std::to_string(amps.size()) +
                                                   " entries; " + std::to_string(n) + " particles need " +
                                                   std::to_string(std::size_t{1} << n));
        Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
        for (std::size_t i = 0; i < amps.size(); ++i) v(static_cast<Eigen::Index>(i)) = amps[i];
        state = quantum::SpinState::normalized(n, std::move(v));
    }

    std::vector<narrative::InteractionRule> rules;
    for (const auto& spec : file.rules) {
        narrative::InteractionRule rule(spec.name);
        for (const auto& e : spec.entries) {
            if (e.species_a == "*") rule.set_fallback(e.unitary.build());
            else rule.set(e.species_a, e.species_b, e.unitary.build());
        }
        rules.push_back(std::move(rule));
    }
    std::vector<geometry::Foliation> foliations;
    for (const auto& v : file.foliations) foliations.emplace_back(v);
    return {narrative::Scenario(file.name, std::move(worldlines), std::move(*state)), std::move(rules),
            std::move(foliations)};
}

inline LoadedScenario load_scenario(const std::string& path, std::vector<std::string>* warnings = nullptr) {
    return build(parse_scenario(read_file(path), path, warnings));
}

} // namespace narratables::io
