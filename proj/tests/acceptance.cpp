// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "cli_app.hpp"
#include "narratables/narratables.hpp"
#include "oracles/rank_oracle.hpp"
#include "oracles/tensor_oracle.hpp"
#include "support/generators.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

using namespace narratables;
namespace fs = std::filesystem;

namespace {

// Tolerances
constexpr double kOverlapTol = 1e-10;
constexpr double kRoundTripTol = 1e-12;
constexpr double kResidualTol = 1e-8;
constexpr double kHermitianTol = 1e-8;
constexpr double kPhaseTol = 1e-9;
constexpr double kMetricTol = 1e-12;
constexpr double kSpinTol = 1e-12;
constexpr double kCollisionTol = 1e-9;
constexpr double kDemoSeconds = 1.0;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string data(const std::string& name) { return std::string(NARRATABLES_DATA_DIR) + "/" + name; }

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

narrative::HistoryComparison compare_demo(const geometry::Foliation& f) {
    const auto loaded = demo::four_particle_scenario();
    return narrative::compare_histories(narrative::evolve(loaded.scenario, f, loaded.rule("free")),
                                        narrative::evolve(loaded.scenario, f, loaded.rule("flip")));
}

Outcome criterion1() {
    Outcome o;
    const double oracle_mid = std::abs(
        oracle::inner(oracle::pairing_state({{0, 1}, {2, 3}}), oracle::pairing_state({{0, 3}, {2, 1}})));
    o.require(std::abs(oracle_mid - 0.5) <= kOverlapTol, "tensor oracle gives " + num(oracle_mid));

    std::ostringstream out, err;
    const auto t0 = std::chrono::steady_clock::now();
    const int code = cli::run_cli({"demo-paper"}, out, err);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(code == 0, "demo-paper exit " + std::to_string(code));
    o.require(seconds < kDemoSeconds, "demo-paper took " + num(seconds) + " s");
    o.require(out.str().find("summary: NON_NARRATABLE") != std::string::npos, "summary line missing");

    double printed = -1.0;
    const std::string key = "mid-interval overlap (foliation 1): ";
    if (auto pos = out.str().find(key); pos != std::string::npos) printed = std::stod(out.str().substr(pos + key.size()));
    o.require(std::abs(printed - oracle_mid) <= kOverlapTol, "printed mid-interval overlap " + num(printed));

    const auto rest = compare_demo(geometry::Foliation::rest());
    o.require(rest.equal, "rest foliation histories differ");
    for (const auto& s : rest.samples)
        o.require(std::abs(s.overlap_magnitude - 1.0) <= kOverlapTol, "rest overlap " + num(s.overlap_magnitude));

    const auto boosted = compare_demo(geometry::Foliation(geometry::RationalVec3{Rational(3, 5), 0, 0}));
    o.require(!boosted.equal, "x-boost 3/5 histories agree");
    o.require(boosted.witness && std::abs(boosted.witness->overlap_magnitude - oracle_mid) <= kOverlapTol,
              "x-boost witness overlap");
    if (o.pass) o.detail = "rest overlaps within 1e-10 of 1; x-boost mid-interval " + fmt::g17(printed) +
                           " vs oracle " + fmt::g17(oracle_mid) + "; " + num(seconds * 1e3) + " ms";
    return o;
}

Outcome criterion2() {
    Outcome o;
    const auto loaded = demo::four_particle_scenario();
    auto groups = [&](const geometry::Foliation& f) {
        return geometry::collision_schedule(loaded.scenario.worldlines(), f);
    };
    const geometry::Foliation y(geometry::RationalVec3{0, Rational(1, 2), 0});
    const auto gy = groups(y);
    o.require(gy.size() == 1 && gy[0].collisions.size() == 2, "y-boost 1/2 gives " + std::to_string(gy.size()) + " groups");
    o.require(compare_demo(y).equal, "y-boost 1/2 histories differ");
    for (const Rational& v : {Rational(3, 5), Rational(4, 5), Rational(-3, 5)}) {
        const geometry::Foliation f(geometry::RationalVec3{v, 0, 0});
        const auto g = groups(f);
        o.require(g.size() == 2 && g[0].tau < g[1].tau, "x-boost " + to_string(v) + " gives " + std::to_string(g.size()) + " groups");
        o.require(!compare_demo(f).equal, "x-boost " + to_string(v) + " histories agree");
    }
    if (o.pass) o.detail = "y 1/2: 1 group, equal; x {3/5, 4/5, -3/5}: 2 groups, unequal (exact leaf keys)";
    return o;
}

Outcome criterion3() {
    Outcome o;
    using namespace clusterkit;
    const MomentumKernel k = io::load_kernel(data("exchange.kernel"));
    const ClusterVerdict v = analyze(k);
    o.require(v.conserves_momentum, "not conserving");
    o.require(!v.compliant, "diagnosed compliant");
    o.require(v.rank == 2, "rank " + std::to_string(v.rank));
    o.require(v.witness && !v.witness->support.empty() && v.witness->support.size() < k.columns(),
              "witness is not a proper-subset constraint");
    const RationalRow expected_first{1, 1, -1, -1};
    o.require(canonicalize(k).deltas().front() == expected_first, "canonical first row");
    o.require(analyze(io::load_kernel(data("conserving.kernel"))).compliant, "single-delta kernel fails");

    gen::Rng rng(3);
    int agree = 0;
    const int total = 10000;
    for (int i = 0; i < total; ++i) {
        const MomentumKernel r = gen::random_kernel(rng);
        const auto expect = oracle::cluster_verdict(r.deltas(), conservation_vector(r));
        const ClusterVerdict got = analyze(r);
        if (got.compliant == expect.compliant && got.conserves_momentum == expect.conserving && got.rank == expect.rank)
            ++agree;
    }
    o.require(agree == total, "oracle agreement " + std::to_string(agree) + "/" + std::to_string(total));
    if (o.pass)
        o.detail = "rank 2, witness " + render_witness(k, *v.witness) + "; oracle agreement " + std::to_string(agree) +
                   "/" + std::to_string(total);
    return o;
}

Outcome criterion4() {
    Outcome o;
    using namespace quantum;
    const SpinState init = singlet_product(4, {{0, 1}, {2, 3}});
    const SpinState seq = apply_contact(apply_contact(init, swap_unitary(), {0, 2}), swap_unitary(), {1, 3});
    const double phase_dev = std::abs(std::abs(overlap(init, seq)) - 1.0);
    o.require(phase_dev <= kRoundTripTol, "round trip deviates by " + num(phase_dev));
    const SpinState group = apply_group(init, {{swap_unitary(), {0, 2}}, {swap_unitary(), {1, 3}}});
    const double diff = (group.amplitudes() - seq.amplitudes()).cwiseAbs().maxCoeff();
    o.require(diff <= kRoundTripTol, "group vs sequential differ by " + num(diff));
    if (o.pass) o.detail = "| |<init|final>| - 1 | = " + num(phase_dev) + "; group vs sequential " + num(diff);
    return o;
}

Outcome criterion5() {
    Outcome o;
    using namespace algebra;
    gen::Rng rng(5);
    double worst_rel = 0.0, worst_herm = 0.0;
    for (int i = 0; i < 100; ++i) {
        const SplitSystem sys = gen::solvable_system(rng, i % 2 == 1);
        const WSolution s = solve_W(sys, 0);
        worst_rel = std::max(worst_rel, s.residual / s.scale);
        worst_herm = std::max(worst_herm, hermiticity_defect(s.W));
    }
    o.require(worst_rel <= kResidualTol, "worst relative residual " + num(worst_rel));
    o.require(worst_herm <= kHermitianTol, "worst hermiticity defect " + num(worst_herm));

    bool zero = true;
    for (int i = 0; i < 20; ++i) {
        const Eigen::Index n = 2 + i % 9;
        const SplitSystem sys{gen::hermitian(rng, n), CMatrix::Zero(n, n), {gen::hermitian(rng, n), std::nullopt, std::nullopt}};
        zero = zero && solve_W(sys, 0).W == CMatrix::Zero(n, n);
    }
    o.require(zero, "V = 0 gives nonzero W");
    if (o.pass) o.detail = "worst residual/scale " + num(worst_rel) + ", worst hermiticity defect " + num(worst_herm) + "; V = 0 gives W = 0 exactly";
    return o;
}

Outcome criterion6() {
    Outcome o;
    using namespace algebra;
    gen::Rng rng(6);
    std::vector<double> times;
    for (int k = 0; k <= 20; ++k) times.push_back(0.5 * k);
    double worst_phase = 0.0;
    for (int i = 0; i < 10; ++i) {
        const auto inst = gen::shared_eigenvector_instance(rng, 2 + i % 6);
        const auto r = same_history_check(inst.H0, inst.Va, inst.Vb, inst.psi0, times);
        o.require(r.same, "shared-eigenvector instance reported different");
        for (const auto& [t, c] : r.c) worst_phase = std::max(worst_phase, std::abs(c - std::exp(Complex(0.0, inst.v * t))));
    }
    o.require(worst_phase <= kPhaseTol, "phase error " + num(worst_phase));
    const auto nc = gen::non_commuting_instance();
    o.require(!same_history_check(nc.H0, nc.Va, nc.Vb, nc.psi0, times).same, "non-commuting instance reported same");

    CVector psi(3);
    psi << 1.0, 0.1, 0.0;
    psi /= psi.norm();
    CMatrix W = CMatrix::Zero(3, 3);
    o.require(!boost_nontriviality_check(W, psi).nontrivial, "W = 0 reported nontrivial");
    o.require(!boost_nontriviality_check(CMatrix::Identity(3, 3), psi).nontrivial, "W = I reported nontrivial");
    W.diagonal() << 1.0, 2.0, 3.0;
    const BoostCheck b = boost_nontriviality_check(W, psi);
    o.require(b.nontrivial, "perturbed eigenvector reported trivial");
    if (o.pass) o.detail = "max |c(t) - e^{ivt}| = " + num(worst_phase) + "; non-commuting instance differs; boost residual " + fmt::g12(b.residual);
    return o;
}

Outcome criterion7() {
    Outcome o;
    using namespace geometry;
    gen::Rng rng(7);
    const Mat4d& eta = minkowski_metric();
    double worst_metric = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const Mat4d L = boost_matrix(gen::float_velocity(rng));
        worst_metric = std::max(worst_metric, (L.transpose() * eta * L - eta).cwiseAbs().maxCoeff());
    }
    o.require(worst_metric <= kMetricTol, "metric defect " + num(worst_metric));

    double worst_spin = 0.0;
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 2 * (1 + static_cast<std::size_t>(i % 6));
        std::vector<std::size_t> slots(n);
        for (std::size_t k = 0; k < n; ++k) slots[k] = k;
        std::shuffle(slots.begin(), slots.end(), rng);
        std::vector<quantum::SlotPair> pairs;
        for (std::size_t k = 0; k < n; k += 2) pairs.emplace_back(slots[k], slots[k + 1]);
        for (double j : quantum::angular_momentum_norms(quantum::singlet_product(n, pairs))) worst_spin = std::max(worst_spin, j);
    }
    o.require(worst_spin <= kSpinTol, "singlet angular momentum " + num(worst_spin));

    int mismatches = 0, hits = 0;
    double worst_event = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto [a, b] = gen::worldline_pair(rng, i % 2 == 1);
        const auto exact = collide(a, b);
        const auto approx = collide_approx(to_float(a), to_float(b), kCollisionTol);
        if (exact.has_value() != approx.has_value()) {
            ++mismatches;
            continue;
        }
        if (!exact) continue;
        ++hits;
        for (double d : {to_double(exact->t) - approx->t, to_double(exact->position.x) - approx->x,
                         to_double(exact->position.y) - approx->y, to_double(exact->position.z) - approx->z})
            worst_event = std::max(worst_event, std::abs(d));
    }
    o.require(mismatches == 0, std::to_string(mismatches) + " hit/miss disagreements");
    o.require(worst_event <= kCollisionTol, "event disagreement " + num(worst_event));
    if (o.pass)
        o.detail = "metric " + num(worst_metric) + ", singlet spin " + num(worst_spin) + ", collisions " +
                   std::to_string(hits) + " hits within " + num(worst_event);
    return o;
}

// The CLI suite: every subcommand over the bundled inputs, CSVs into `dir`.
std::string run_cli_suite(const fs::path& dir) {
    fs::create_directories(dir);
    const std::string scenario = data("four_particle.json");
    const std::vector<std::vector<std::string>> commands{
        {"demo-paper", "--csv", (dir / "demo.csv").string()},
        {"compare-frames", scenario, "--csv", (dir / "compare.csv").string()},
        {"compare-frames", scenario, "--rules", "flip", "free"},
        {"simulate", scenario, "--rule", "free", "--foliation", "0", "--csv", (dir / "sim0.csv").string()},
        {"simulate", scenario, "--rule", "flip", "--foliation", "1", "--csv", (dir / "sim1.csv").string()},
        {"simulate", scenario, "--rule", "flip", "--foliation", "2", "--csv", (dir / "sim2.csv").string()},
        {"cluster-check", data("exchange.kernel")},
        {"cluster-check", data("exchange_rewritten.kernel")},
        {"cluster-check", data("conserving.kernel")},
        {"cluster-check", data("empty.kernel")},
        {"algebra", "residuals", data("algebra/spin_half_rotations.json")},
        {"algebra", "residuals", data("algebra/zero_generators.json")},
        {"algebra", "solve-w", data("algebra/w2.json")},
        {"algebra", "solve-w", data("algebra/w2_free.json")},
        {"algebra", "same-history", data("algebra/same_history.json")},
        {"algebra", "same-history", data("algebra/different_history.json"), "--times", "0,0.5,1"},
        {"algebra", "boost-check", data("algebra/boost_check.json")},
        {"algebra", "boost-check", data("algebra/boost_trivial.json")},
        {"simulate", scenario, "--rule", "nope"},
    };
    std::ostringstream transcript;
    for (const auto& c : commands) {
        std::ostringstream out, err;
        const int code = cli::run_cli(c, out, err);
        std::string line;
        for (const auto& a : c) line += " " + a.substr(a.find(dir.string()) == 0 ? dir.string().size() : 0);
        transcript << "$" << line << "\n" << out.str() << err.str() << "exit " << code << "\n";
    }
    for (const char* name : {"demo.csv", "compare.csv", "sim0.csv", "sim1.csv", "sim2.csv"})
        transcript << "== " << name << "\n" << io::read_file((dir / name).string());
    return transcript.str();
}

Outcome criterion8() {
    Outcome o;
    const fs::path base = fs::temp_directory_path() / ("narratables-acceptance-" + std::to_string(::getpid()));
    const std::string first = run_cli_suite(base / "run1");
    const std::string second = run_cli_suite(base / "run2");
    o.require(first == second, "transcripts differ");
    fs::remove_all(base);
    if (o.pass) o.detail = "19 commands and 5 CSVs, " + std::to_string(first.size()) + " bytes identical across two runs";
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"demo reproduction", criterion1},
        {"simultaneity dependence", criterion2},
        {"cluster linter", criterion3},
        {"swap round trip", criterion4},
        {"boost correction solver", criterion5},
        {"same-history and boost checks", criterion6},
        {"geometry invariants", criterion7},
        {"determinism", criterion8},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << o.detail << "\n";
    }
    std::cout << (failures ? "FAILED " + std::to_string(failures) + " of " : "all ") << criteria.size()
              << " criteria" << (failures ? "" : " passed") << "\n";
    return failures ? 1 : 0;
}
