#pragma once

// Command implementations behind the `narratables` executable. Each command
// writes its report to `out`, diagnostics to `err`, and returns the process
// exit code; run_guarded() maps library errors onto fixed codes.

#include "narratables/algebra.hpp"
#include "narratables/clusterkit.hpp"
#include "narratables/demo.hpp"
#include "narratables/format.hpp"
#include "narratables/io/kernel_file.hpp"
#include "narratables/io/matrix_file.hpp"
#include "narratables/io/scenario_file.hpp"
#include "narratables/narrative.hpp"

#include <cstdlib>
#include <exception>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace narratables::cli {

namespace exit_code {
inline constexpr int kSuccess = 0;
inline constexpr int kClusterViolation = 2;
inline constexpr int kClusterNonConserving = 3;
inline constexpr int kUsage = 64;
inline constexpr int kInternal = 70;
} // namespace exit_code

inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ParseError: return 10;
        case ErrorKind::FileError: return 11;
        case ErrorKind::UnknownRule: return 12;
        case ErrorKind::IndexOutOfRange: return 13;
        case ErrorKind::DimensionMismatch: return 14;
        case ErrorKind::InvalidArgument: return 15;
        case ErrorKind::SuperluminalVelocity: return 20;
        case ErrorKind::CoincidentWorldlines: return 21;
        case ErrorKind::OverlappingSimultaneousPairs: return 22;
        case ErrorKind::InvalidPairing: return 30;
        case ErrorKind::SlotOutOfRange: return 31;
        case ErrorKind::EqualSlots: return 32;
        case ErrorKind::OverlappingPairs: return 33;
        case ErrorKind::NonUnitary: return 34;
        case ErrorKind::DimensionCapExceeded: return 35;
        case ErrorKind::FoliationMismatch: return 40;
        case ErrorKind::NotConserving: return 41;
    }
    return exit_code::kInternal;
}

inline int run_guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_code::kInternal;
    }
}

enum class ColorMode { Auto, Never, Always };

/// NARRATABLES_COLOR in {auto, never, always}; unset or unknown means auto.
inline ColorMode color_mode_from_env(const char* value) {
    if (!value) return ColorMode::Auto;
    const std::string v(value);
    if (v == "never") return ColorMode::Never;
    if (v == "always") return ColorMode::Always;
    return ColorMode::Auto;
}

inline fmt::Style resolve_style(ColorMode mode, bool out_is_tty) {
    return fmt::Style{mode == ColorMode::Always || (mode == ColorMode::Auto && out_is_tty)};
}

struct CommonOptions {
    double tolerance = quantum::kComparisonTolerance;
    fmt::Style style;
};

inline void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) err << "warning: " << w << "\n";
}

inline void write_csv(const std::string& path, const std::function<void(std::ostream&)>& render) {
    std::ostringstream csv;
    render(csv);
    io::write_file(path, csv.str());
}

// demo-paper

struct DemoOptions {
    std::optional<std::string> csv_path;
    std::optional<std::string> scenario_out;
};

inline int cmd_demo_paper(const CommonOptions& common, const DemoOptions& opts, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&] {
        const io::ScenarioFile file = demo::four_particle_scenario_file();
        const io::LoadedScenario loaded = io::build(file);
        const auto report = narrative::narratability_report(loaded.scenario, loaded.rule("free"), loaded.rule("flip"),
                                                            loaded.foliations, common.tolerance);
        out << "demo: four spin-1/2 particles of distinct species; particles 1, 2 at rest at x = -1, +1;\n"
               "      particles 3, 4 start at y = 2 with velocity (0, -1/2, 0); initial spins |12>|34>\n"
               "      (product of singlets). Positions, speeds and boosts are implementation defaults.\n";
        narrative::render_report(out, report, common.style);
        for (const auto& v : report.verdicts) {
            if (v.comparison.witness)
                out << "mid-interval overlap (foliation " << v.index
                    << "): " << fmt::g17(v.comparison.witness->overlap_magnitude) << "\n";
        }
        if (opts.csv_path) write_csv(*opts.csv_path, [&](std::ostream& s) { narrative::render_report_csv(s, report); });
        if (opts.scenario_out) io::write_file(*opts.scenario_out, io::serialize(file));
        return exit_code::kSuccess;
    });
}

// simulate

struct SimulateOptions {
    std::string scenario_path;
    std::string rule;
    std::size_t foliation = 0;
    std::optional<std::string> csv_path;
    std::size_t tau_grid = 101;
};

inline int cmd_simulate(const CommonOptions& common, const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
    (void)common;
    return run_guarded(err, [&] {
        std::vector<std::string> warnings;
        const io::LoadedScenario loaded = io::load_scenario(opts.scenario_path, &warnings);
        print_warnings(err, warnings);
        const auto& rule = loaded.rule(opts.rule);
        const auto& foliation = loaded.foliation(opts.foliation);
        const narrative::History h = narrative::evolve(loaded.scenario, foliation, rule);
        out << "history\n";
        out << "  scenario: " << loaded.scenario.name() << "\n";
        out << "  rule: " << rule.name() << "\n";
        out << "  foliation " << opts.foliation << "  " << narrative::describe_foliation(foliation) << "\n";
        narrative::render_history(out, h);
        if (opts.csv_path)
            write_csv(*opts.csv_path,
                      [&](std::ostream& s) { narrative::render_history_csv(s, h, opts.foliation, opts.tau_grid); });
        return exit_code::kSuccess;
    });
}

// compare-frames

struct CompareOptions {
    std::string scenario_path;
    std::string rule1 = "free";
    std::string rule2 = "flip";
    std::optional<std::string> csv_path;
};

inline int cmd_compare_frames(const CommonOptions& common, const CompareOptions& opts, std::ostream& out,
                              std::ostream& err) {
    return run_guarded(err, [&] {
        std::vector<std::string> warnings;
        const io::LoadedScenario loaded = io::load_scenario(opts.scenario_path, &warnings);
        print_warnings(err, warnings);
        const auto report = narrative::narratability_report(loaded.scenario, loaded.rule(opts.rule1),
                                                            loaded.rule(opts.rule2), loaded.foliations, common.tolerance);
        narrative::render_report(out, report, common.style);
        if (opts.csv_path) write_csv(*opts.csv_path, [&](std::ostream& s) { narrative::render_report_csv(s, report); });
        return exit_code::kSuccess;
    });
}

// cluster-check

inline int cmd_cluster_check(const std::string& kernel_path, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&] {
        std::vector<std::string> warnings;
        const auto kernel = io::load_kernel(kernel_path, &warnings);
        print_warnings(err, warnings);
        const auto verdict = clusterkit::analyze(kernel);
        clusterkit::render_verdict(out, kernel, verdict);
        switch (verdict.kind()) {
            case clusterkit::VerdictKind::Compliant: return exit_code::kSuccess;
            case clusterkit::VerdictKind::Violation: return exit_code::kClusterViolation;
            case clusterkit::VerdictKind::NonConserving: return exit_code::kClusterNonConserving;
        }
        return exit_code::kInternal;
    });
}

// algebra

struct AlgebraOptions {
    std::string subcommand;  // residuals | solve-w | same-history | boost-check
    std::vector<std::string> files;
    std::size_t axis = 1;  // 1..3
    std::vector<double> times{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
};

inline void render_matrix(std::ostream& out, const algebra::CMatrix& m, const std::string& indent = "    ") {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        out << indent;
        for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? "  " : "") << fmt::complex_fixed(m(r, c));
        out << "\n";
    }
}

inline int cmd_algebra(const AlgebraOptions& opts, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&] {
        io::MatrixBundle bundle;
        for (const auto& f : opts.files) bundle.add_argument(f);

        if (opts.subcommand == "residuals") {
            algebra::GeneratorSet gens;
            for (const auto& key : bundle.keys()) {
                if (!algebra::generator_index(key)) {
                    err << "warning: ignoring '" << key << "' (not a generator name)\n";
                    continue;
                }
                gens.set(key, bundle.matrix(key));
            }
            const auto table = algebra::bracket_residuals(gens);
            out << "bracket residuals ||[A,B] - required||_F (dimension " << gens.dim().value_or(0) << ")\n";
            for (const auto& row : table) out << "  " << row.name << "  " << fmt::g17(row.residual) << "\n";
            const auto herm = gens.hermiticity_report();
            if (!herm.empty()) {
                out << "hermiticity ||A - A^dagger||_F\n";
                for (const auto& [name, defect] : herm) out << "  " << name << "  " << fmt::g17(defect) << "\n";
            }
            out << "note: finite matrices cannot represent the full algebra; residuals are reported, not pass/fail\n";
            return exit_code::kSuccess;
        }

        if (opts.subcommand == "solve-w") {
            if (opts.axis < 1 || opts.axis > 3) fail(ErrorKind::IndexOutOfRange, "--axis must be 1, 2 or 3");
            algebra::SplitSystem sys;
            sys.H0 = bundle.matrix("H0");
            sys.V = bundle.matrix("V");
            for (std::size_t a = 0; a < 3; ++a) sys.K0[a] = bundle.optional_matrix("K0_" + std::to_string(a + 1));
            if (!sys.K0[0] && bundle.has("K0")) sys.K0[0] = bundle.matrix("K0");
            const auto sol = algebra::solve_W(sys, opts.axis - 1);
            print_warnings(err, sol.warnings);
            out << "boost correction W along axis " << opts.axis << " (dimension " << sol.W.rows() << ")\n";
            render_matrix(out, sol.W);
            out << "  residual ||[K0,V] + [W,H]||_F: " << fmt::g17(sol.residual) << "\n";
            out << "  input scale: " << fmt::g17(sol.scale) << "\n";
            out << "  W hermiticity defect: " << fmt::g17(algebra::hermiticity_defect(sol.W)) << "\n";
            out << "  spectral path: " << (sol.hermitian_path ? "hermitian" : "general (warned)") << "\n";
            out << "  degenerate obstructions: " << sol.degenerate_obstructions.size() << "\n";
            for (const auto& [a, b] : sol.degenerate_obstructions) out << "    (" << a << ", " << b << ")\n";
            out << "  gauge: W between degenerate levels set to zero (one choice among many)\n";
            return exit_code::kSuccess;
        }

        if (opts.subcommand == "same-history") {
            const auto H0 = bundle.matrix("H0");
            const auto Va = bundle.matrix("Va");
            const auto Vb = bundle.optional_matrix("Vb").value_or(algebra::CMatrix::Zero(H0.rows(), H0.cols()));
            const auto psi0 = bundle.vector("psi0");
            const auto res = algebra::same_history_check(H0, Va, Vb, psi0, opts.times);
            print_warnings(err, res.warnings);
            out << "same-history check exp(i(H0+Va)t) psi0 = c(t) exp(i(H0+Vb)t) psi0"
                << (bundle.has("Vb") ? "" : " (Vb = 0)") << "\n";
            out << "  verdict: " << (res.same ? "EQUAL" : "DIFFER") << " (tolerance "
                << fmt::g12(algebra::kSameHistoryTolerance) << ")\n";
            out << "  t  c(t)  |c(t)|\n";
            for (const auto& [t, c] : res.c)
                out << "  " << fmt::g12(t) << "  " << fmt::complex_fixed(c) << "  " << fmt::g17(std::abs(c)) << "\n";
            return exit_code::kSuccess;
        }

        if (opts.subcommand == "boost-check") {
            const auto W = bundle.matrix("W");
            const auto psi = bundle.vector("psi");
            const auto res = algebra::boost_nontriviality_check(W, psi);
            out << "boost nontriviality check (W psi proportional to psi?)\n";
            out << "  <psi|W psi>: " << fmt::complex_fixed(res.expectation) << "\n";
            out << "  residual ||W psi - <psi|W psi> psi||: " << fmt::g17(res.residual) << "\n";
            out << "  verdict: " << (res.nontrivial ? "NONTRIVIAL" : "TRIVIAL") << " (tolerance "
                << fmt::g12(algebra::kProportionalityTolerance) << ")\n";
            return exit_code::kSuccess;
        }

        fail(ErrorKind::InvalidArgument, "unknown algebra subcommand '" + opts.subcommand + "'");
    });
}

} // namespace narratables::cli
