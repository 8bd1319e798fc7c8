#pragma once

// Matrix files hold named complex matrices and vectors:
//   {"H0": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]], "psi0": [[1, 0], [0, 0]]}
// Matrices are row-major arrays of rows; entries are [re, im] pairs or reals.
// Several files can be merged into one bundle, and a file can be bound to a
// single role with ROLE=PATH (its content is then a bare matrix/vector, or an
// object with exactly one entry).

#include "narratables/io/json_util.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace narratables::io {

class MatrixBundle {
public:
    void add_document(const std::string& text, const std::string& source) {
        const json doc = parse_json(text, source);
        if (!doc.is_object()) field_error(source, "<root>", "expected an object of named matrices");
        for (const auto& [key, value] : doc.items()) insert(key, value, source);
    }

    void bind(const std::string& role, const std::string& text, const std::string& source) {
        const json doc = parse_json(text, source);
        if (doc.is_array()) {
            insert(role, doc, source);
        } else if (doc.is_object() && doc.size() == 1) {
            insert(role, doc.begin().value(), source);
        } else {
            field_error(source, "<root>", "a file bound to '" + role + "' must hold one matrix or vector");
        }
    }

    /// "PATH" merges all entries; "ROLE=PATH" binds the file to ROLE.
    void add_argument(const std::string& arg) {
        if (auto eq = arg.find('='); eq != std::string::npos && eq > 0) {
            const std::string path = arg.substr(eq + 1);
            bind(arg.substr(0, eq), read_file(path), path);
        } else {
            add_document(read_file(arg), arg);
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    Eigen::MatrixXcd matrix(const std::string& key) const {
        const auto& e = entry(key);
        return FieldReader(e.source, nullptr).complex_matrix(e.value, key);
    }

    std::optional<Eigen::MatrixXcd> optional_matrix(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        return matrix(key);
    }

    Eigen::VectorXcd vector(const std::string& key) const {
        const auto& e = entry(key);
        return FieldReader(e.source, nullptr).complex_vector(e.value, key);
    }

    std::vector<std::string> keys() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : entries_) out.push_back(k);
        return out;
    }

private:
    struct Entry {
        json value;
        std::string source;
    };

    void insert(const std::string& key, const json& value, const std::string& source) {
        if (entries_.count(key))
            field_error(source, key, "'" + key + "' already supplied by " + entries_.at(key).source);
        entries_[key] = {value, source};
    }

    const Entry& entry(const std::string& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) fail(ErrorKind::ParseError, "no matrix named '" + key + "' in the supplied files");
        return it->second;
    }

    std::map<std::string, Entry> entries_;
};

} // namespace narratables::io
