#include <catch2/catch_amalgamated.hpp>

#include "narratables/clusterkit.hpp"
#include "narratables/io/kernel_file.hpp"
#include "oracles/rank_oracle.hpp"
#include "support/generators.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

using namespace narratables;
using namespace narratables::clusterkit;

namespace {

RationalRow row(std::initializer_list<long> xs) {
    RationalRow r;
    for (long x : xs) r.emplace_back(x);
    return r;
}

MomentumKernel exchange_kernel() {
    // columns: q1 q2 p1 p2
    return MomentumKernel("exchange", {"p1", "p2"}, {"q1", "q2"}, {row({0, 1, -1, 0}), row({1, 0, 0, -1})});
}

using gen::random_kernel;

EchelonForm rref(const MomentumKernel& k) { return reduced_row_echelon(k.deltas(), k.columns()); }

bool same_row_space(const MomentumKernel& a, const MomentumKernel& b) { return rref(a).rows == rref(b).rows; }

std::string data(const std::string& name) { return std::string(NARRATABLES_DATA_DIR) + "/" + name; }

} // namespace

TEST_CASE("two-delta exchange kernel is a violation") {
    const MomentumKernel k = exchange_kernel();
    CHECK(conservation_vector(k) == row({1, 1, -1, -1}));
    const ClusterVerdict v = analyze(k);
    CHECK(v.conserves_momentum);
    CHECK_FALSE(v.compliant);
    CHECK(v.rank == 2);
    CHECK(v.kind() == VerdictKind::Violation);
    REQUIRE(v.witness);
    CHECK(v.witness->support == std::vector<std::size_t>{0, 3});
    CHECK(v.witness->coefficients == row({1, 0, 0, -1}));
    CHECK(render_witness(k, *v.witness) == "δ³(q1 − p2) constrains proper subset {q1, p2}");

    const MomentumKernel c = canonicalize(k);
    REQUIRE(c.deltas().size() == 2);
    CHECK(c.deltas()[0] == row({1, 1, -1, -1}));
    CHECK(c.deltas()[1] == row({1, 0, 0, -1}));
}

TEST_CASE("bundled kernels") {
    const auto exchange = io::load_kernel(data("exchange.kernel"));
    CHECK(exchange.slot_names() == std::vector<std::string>{"q1", "q2", "p1", "p2"});
    CHECK(exchange.deltas() == exchange_kernel().deltas());
    CHECK(analyze(exchange).kind() == VerdictKind::Violation);
    CHECK_FALSE(exchange.spin_structure().empty());

    const auto single = io::load_kernel(data("conserving.kernel"));
    const auto sv = analyze(single);
    CHECK(sv.compliant);
    CHECK(sv.rank == 1);
    CHECK_FALSE(sv.witness);
    CHECK(single.smooth_prefactor_present());

    const auto empty = io::load_kernel(data("empty.kernel"));
    const auto ev = analyze(empty);
    CHECK(ev.kind() == VerdictKind::NonConserving);
    CHECK(ev.rank == 0);
    CHECK_FALSE(ev.witness);

    const auto rewritten = io::load_kernel(data("exchange_rewritten.kernel"));
    CHECK(same_row_space(rewritten, exchange));
    CHECK(canonicalize(rewritten).deltas() == canonicalize(exchange).deltas());
}

TEST_CASE("non-conserving kernels") {
    const MomentumKernel partial("partial", {"p1", "p2"}, {"q1", "q2"}, {row({1, 0, -1, 0})});
    const auto v = analyze(partial);
    CHECK(v.kind() == VerdictKind::NonConserving);
    CHECK(v.rank == 1);
    REQUIRE(v.witness);
    CHECK(v.witness->support == std::vector<std::size_t>{0, 2});
    try {
        (void)canonicalize(partial);
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotConserving);
    }
    CHECK_THROWS_AS(canonicalize(io::load_kernel(data("empty.kernel"))), Error);
}

TEST_CASE("kernel validation") {
    CHECK_THROWS_AS(MomentumKernel("one", {"p1"}, {}, {}), Error);
    CHECK_THROWS_AS(MomentumKernel("dup", {"p1"}, {"p1"}, {}), Error);
    CHECK_THROWS_AS(MomentumKernel("short", {"p1"}, {"q1"}, {row({1})}), Error);
    CHECK_THROWS_AS(MomentumKernel("zero", {"p1"}, {"q1"}, {row({0, 0})}), Error);
}

TEST_CASE("reduced row echelon form") {
    const auto e = reduced_row_echelon({row({2, 4, 0}), row({1, 2, 1}), row({3, 6, 1})}, 3);
    REQUIRE(e.rows.size() == 2);
    CHECK(e.pivots == std::vector<std::size_t>{0, 2});
    CHECK(e.rows[0] == row({1, 2, 0}));
    CHECK(e.rows[1] == row({0, 0, 1}));
    CHECK(in_row_space(e, row({5, 10, -3})));
    CHECK_FALSE(in_row_space(e, row({0, 1, 0})));
    CHECK(reduced_row_echelon({}, 3).rows.empty());
}

TEST_CASE("verdicts agree with the minor-rank oracle") {
    gen::Rng rng(41);
    int compliant = 0, violation = 0, nonconserving = 0;
    for (int i = 0; i < 10000; ++i) {
        const MomentumKernel k = random_kernel(rng);
        const RationalRow c = conservation_vector(k);
        const auto expect = oracle::cluster_verdict(k.deltas(), c);
        const ClusterVerdict v = analyze(k);
        REQUIRE(v.rank == expect.rank);
        REQUIRE(v.conserves_momentum == expect.conserving);
        REQUIRE(v.compliant == expect.compliant);
        switch (v.kind()) {
            case VerdictKind::Compliant: ++compliant; break;
            case VerdictKind::Violation: ++violation; break;
            case VerdictKind::NonConserving: ++nonconserving; break;
        }
        if (v.rank == 0 || v.compliant) {
            REQUIRE_FALSE(v.witness);
            continue;
        }
        REQUIRE(v.witness);
        CHECK(oracle::in_span(k.deltas(), v.witness->coefficients));
        CHECK(v.witness->support == support_of(v.witness->coefficients));
        if (v.conserves_momentum) {
            CHECK(v.witness->support.size() < k.columns());
            CHECK_FALSE(oracle::in_span({c}, v.witness->coefficients));
        }
    }
    // the generator reaches every verdict
    CHECK(compliant > 0);
    CHECK(violation > 0);
    CHECK(nonconserving > 0);
}

TEST_CASE("verdicts are invariant under row operations") {
    gen::Rng rng(42);
    std::uniform_int_distribution<int> scale(1, 3);
    std::uniform_int_distribution<int> coeff(-2, 2);
    for (int i = 0; i < 1000; ++i) {
        const MomentumKernel k = random_kernel(rng);
        if (k.deltas().empty()) continue;
        std::vector<RationalRow> rows = k.deltas();
        for (auto& r : rows) {
            const Rational f(scale(rng) * (coeff(rng) < 0 ? -1 : 1), scale(rng));
            for (auto& x : r) x *= f;
        }
        for (std::size_t a = 1; a < rows.size(); ++a) {
            const Rational f = coeff(rng);
            for (std::size_t j = 0; j < rows[a].size(); ++j) rows[a][j] += f * rows[0][j];
        }
        rows.push_back(rows.front());
        std::shuffle(rows.begin(), rows.end(), rng);
        rows.erase(std::remove_if(rows.begin(), rows.end(),
                                  [](const RationalRow& r) {
                                      return std::all_of(r.begin(), r.end(), [](const Rational& x) { return x == 0; });
                                  }),
                   rows.end());
        const MomentumKernel m = k.with_deltas(rows);
        const auto a = analyze(k), b = analyze(m);
        CHECK(a.kind() == b.kind());
        CHECK(a.rank == b.rank);
        CHECK(a.witness.has_value() == b.witness.has_value());
        if (a.witness && b.witness) CHECK(a.witness->coefficients == b.witness->coefficients);
        if (a.conserves_momentum) CHECK(canonicalize(k).deltas() == canonicalize(m).deltas());
    }
}

TEST_CASE("verdicts are equivariant under slot relabelling") {
    gen::Rng rng(43);
    for (int i = 0; i < 1000; ++i) {
        const MomentumKernel k = random_kernel(rng);
        const std::size_t n = k.columns(), n_out = k.out_slots().size();
        // permute within the outgoing block and within the incoming block
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.begin() + static_cast<long>(n_out), rng);
        std::shuffle(perm.begin() + static_cast<long>(n_out), perm.end(), rng);
        auto permute = [&](const RationalRow& r) {
            RationalRow out(n);
            for (std::size_t j = 0; j < n; ++j) out[j] = r[perm[j]];
            return out;
        };
        std::vector<RationalRow> rows;
        for (const auto& r : k.deltas()) rows.push_back(permute(r));
        const MomentumKernel m = k.with_deltas(rows);
        const auto a = analyze(k), b = analyze(m);
        CHECK(a.kind() == b.kind());
        CHECK(a.rank == b.rank);
        if (a.conserves_momentum) {
            const MomentumKernel canonical = canonicalize(k);
            std::vector<RationalRow> moved;
            for (const auto& r : canonical.deltas()) moved.push_back(permute(r));
            CHECK(same_row_space(k.with_deltas(moved), canonicalize(m)));
        }
    }
}

TEST_CASE("canonical form is equivalent and idempotent") {
    gen::Rng rng(44);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        const MomentumKernel k = random_kernel(rng);
        if (!analyze(k).conserves_momentum) continue;
        ++checked;
        const MomentumKernel c = canonicalize(k);
        CHECK(c.deltas().front() == conservation_vector(k));
        CHECK(c.deltas().size() == analyze(k).rank);
        CHECK(same_row_space(k, c));
        CHECK(canonicalize(c) == c);
        CHECK(analyze(c).kind() == analyze(k).kind());
    }
    CHECK(checked > 50);
}

TEST_CASE("verdict rendering") {
    std::ostringstream out;
    const MomentumKernel k = exchange_kernel();
    render_verdict(out, k, analyze(k));
    const std::string text = out.str();
    CHECK(text.find("δ³(q2 − p1)") != std::string::npos);
    CHECK(text.find("canonical form: δ³(q1 + q2 − p1 − p2) δ³(q1 − p2)") != std::string::npos);
    CHECK(text.find("verdict: VIOLATION") != std::string::npos);
    CHECK(render_combination(k, row({2, 0, 0, -1})) == "2 q1 − p2");
}
