#pragma once

#include "narratables/error.hpp"
#include "narratables/format.hpp"
#include "narratables/rational.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <complex>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace narratables::io {

using json = nlohmann::json;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::FileError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::FileError, "cannot write '" + path + "'");
    out << content;
    if (!out) fail(ErrorKind::FileError, "write to '" + path + "' failed");
}

/// Parses JSON, reporting syntax errors as "source:line:column: message".
inline json parse_json(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        fail(ErrorKind::ParseError, source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                                        "malformed JSON (" + e.what() + ")");
    }
}

/// Field-addressed parse failure, e.g. "demo.json: particles[2].velocity[0]: ...".
[[noreturn]] inline void field_error(const std::string& source, const std::string& path, const std::string& what) {
    fail(ErrorKind::ParseError, source + ": " + path + ": " + what);
}

class FieldReader {
public:
    FieldReader(std::string source, std::vector<std::string>* warnings) : source_(std::move(source)), warnings_(warnings) {}

    const std::string& source() const { return source_; }

    [[noreturn]] void error(const std::string& path, const std::string& what) const { field_error(source_, path, what); }

    void warn(const std::string& message) const {
        if (warnings_) warnings_->push_back(source_ + ": " + message);
    }

    const json& member(const json& obj, const std::string& key, const std::string& path) const {
        if (!obj.is_object()) error(path, "expected an object");
        auto it = obj.find(key);
        if (it == obj.end()) error(path, "missing field '" + key + "'");
        return *it;
    }

    const json& array(const json& value, const std::string& path, std::size_t expected_size = 0) const {
        if (!value.is_array()) error(path, "expected an array");
        if (expected_size && value.size() != expected_size)
            error(path, "expected " + std::to_string(expected_size) + " entries, got " + std::to_string(value.size()));
        return value;
    }

    std::string string(const json& value, const std::string& path) const {
        if (!value.is_string()) error(path, "expected a string");
        return value.get<std::string>();
    }

    std::size_t index(const json& value, const std::string& path) const {
        if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0))
            error(path, "expected a non-negative integer");
        return value.get<std::size_t>();
    }

    /// "n/d" strings and JSON integers are exact; other numbers are accepted
    /// as floats (converted exactly from binary) with a warning.
    Rational rational(const json& value, const std::string& path) const {
        if (value.is_string()) {
            auto r = parse_rational(value.get<std::string>());
            if (!r) error(path, "malformed rational '" + value.get<std::string>() + "'");
            return *r;
        }
        if (value.is_number_integer()) return Rational(value.get<long long>());
        if (value.is_number_unsigned()) return Rational(value.get<unsigned long long>());
        if (value.is_number_float()) {
            warn(path + ": bare number " + fmt::g17(value.get<double>()) +
                 " taken as a float; write \"n/d\" for exact simultaneity checks");
            return from_double(value.get<double>());
        }
        error(path, "expected a rational string \"n/d\" or a number");
    }

    std::complex<double> complex(const json& value, const std::string& path) const {
        if (value.is_number()) return {value.get<double>(), 0.0};
        if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number())
            return {value[0].get<double>(), value[1].get<double>()};
        error(path, "expected a complex entry [re, im] or a real number");
    }

    Eigen::VectorXcd complex_vector(const json& value, const std::string& path) const {
        array(value, path);
        if (value.empty()) error(path, "empty vector");
        Eigen::VectorXcd v(static_cast<Eigen::Index>(value.size()));
        for (std::size_t i = 0; i < value.size(); ++i)
            v(static_cast<Eigen::Index>(i)) = complex(value[i], path + "[" + std::to_string(i) + "]");
        return v;
    }

    /// Row-major: an array of rows, each an array of complex entries.
    Eigen::MatrixXcd complex_matrix(const json& value, const std::string& path) const {
        array(value, path);
        if (value.empty()) error(path, "empty matrix");
        const std::size_t rows = value.size();
        const std::size_t cols = array(value[0], path + "[0]").size();
        Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (std::size_t r = 0; r < rows; ++r) {
            const std::string rp = path + "[" + std::to_string(r) + "]";
            array(value[r], rp, cols);
            for (std::size_t c = 0; c < cols; ++c)
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    complex(value[r][c], rp + "[" + std::to_string(c) + "]");
        }
        return m;
    }

private:
    std::string source_;
    std::vector<std::string>* warnings_;
};

inline json complex_to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

inline json matrix_to_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace narratables::io
