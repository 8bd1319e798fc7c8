#pragma once

// State histories along flat foliations, and the frame-by-frame comparison of
// two interaction rules that decides whether the pair is non-narratable.

#include "narratables/format.hpp"
#include "narratables/geometry.hpp"
#include "narratables/quantum.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace narratables::narrative {

using geometry::CollisionGroup;
using geometry::Foliation;
using geometry::LeafTime;
using geometry::Worldline;
using quantum::SpinState;
using quantum::TwoSlotUnitary;

/// Angular-momentum norms above this trigger a little-group warning on boosted foliations.
inline constexpr double kLittleGroupThreshold = 1e-6;

/// Contact unitaries keyed by unordered species pair; unlisted pairs get the
/// fallback (identity unless set otherwise).
class InteractionRule {
public:
    explicit InteractionRule(std::string name, TwoSlotUnitary fallback = TwoSlotUnitary::identity())
        : name_(std::move(name)), fallback_(std::move(fallback)) {}

    static InteractionRule free(std::string name = "free") { return InteractionRule(std::move(name)); }
    static InteractionRule flip(std::string name = "flip") {
        return InteractionRule(std::move(name), quantum::swap_unitary());
    }

    /// `u` acts with species_a's slot as its first factor.
    void set(const std::string& species_a, const std::string& species_b, TwoSlotUnitary u) {
        if (species_b < species_a) pairs_.insert_or_assign({species_b, species_a}, u.reversed());
        else pairs_.insert_or_assign({species_a, species_b}, std::move(u));
    }

    void set_fallback(TwoSlotUnitary u) { fallback_ = std::move(u); }

    /// Unitary for a contact whose first slot carries `first` and second slot `second`.
    TwoSlotUnitary unitary_for(const std::string& first, const std::string& second) const {
        const bool flipped = second < first;
        auto it = pairs_.find(flipped ? std::pair{second, first} : std::pair{first, second});
        if (it == pairs_.end()) return fallback_;
        return flipped ? it->second.reversed() : it->second;
    }

    const std::string& name() const { return name_; }
    const TwoSlotUnitary& fallback() const { return fallback_; }
    const std::map<std::pair<std::string, std::string>, TwoSlotUnitary>& pairs() const { return pairs_; }

private:
    std::string name_;
    TwoSlotUnitary fallback_;
    std::map<std::pair<std::string, std::string>, TwoSlotUnitary> pairs_;
};

class Scenario {
public:
    Scenario(std::string name, std::vector<Worldline> worldlines, SpinState initial_state)
        : name_(std::move(name)), worldlines_(std::move(worldlines)), initial_state_(std::move(initial_state)) {
        if (initial_state_.n_slots() != worldlines_.size())
            fail(ErrorKind::DimensionMismatch, "initial state has " + std::to_string(initial_state_.n_slots()) +
                                                   " slots but the scenario has " +
                                                   std::to_string(worldlines_.size()) + " worldlines");
        std::vector<bool> seen(worldlines_.size(), false);
        for (const Worldline& w : worldlines_) {
            if (w.id >= worldlines_.size() || seen[w.id])
                fail(ErrorKind::InvalidArgument, "worldline ids must be exactly 0.." +
                                                     std::to_string(worldlines_.size() - 1) + " (bad id " +
                                                     std::to_string(w.id) + ")");
            seen[w.id] = true;
        }
        for (std::size_t i = 0; i < worldlines_.size(); ++i)
            for (std::size_t j = i + 1; j < worldlines_.size(); ++j) (void)geometry::collide(worldlines_[i], worldlines_[j]);
        std::sort(worldlines_.begin(), worldlines_.end(), [](const Worldline& a, const Worldline& b) { return a.id < b.id; });
    }

    const std::string& name() const { return name_; }
    const std::vector<Worldline>& worldlines() const { return worldlines_; }
    const SpinState& initial_state() const { return initial_state_; }

    Scenario with_initial_state(SpinState state) const { return Scenario(name_, worldlines_, std::move(state)); }

private:
    std::string name_;
    std::vector<Worldline> worldlines_;
    SpinState initial_state_;
};

/// Piecewise-constant states: segments[k] holds on [breakpoint k-1, breakpoint k),
/// with segments[0] extending to tau -> -inf (right-continuous at breakpoints).
struct History {
    Foliation foliation;
    std::vector<CollisionGroup> groups;
    std::vector<SpinState> segments;
    std::vector<std::string> warnings;

    std::size_t segment_index(const Rational& reduced) const {
        auto it = std::upper_bound(groups.begin(), groups.end(), reduced,
                                   [](const Rational& r, const CollisionGroup& g) { return r < g.tau.reduced; });
        return static_cast<std::size_t>(it - groups.begin());
    }

    const SpinState& state_at(const LeafTime& tau) const { return segments[segment_index(tau.reduced)]; }

    const SpinState& state_at_value(double tau) const {
        std::size_t k = 0;
        while (k < groups.size() && groups[k].tau.value <= tau) ++k;
        return segments[k];
    }

    std::vector<LeafTime> breakpoints() const {
        std::vector<LeafTime> out;
        out.reserve(groups.size());
        for (const auto& g : groups) out.push_back(g.tau);
        return out;
    }
};

inline History evolve(const Scenario& scenario, const Foliation& foliation, const InteractionRule& rule) {
    History history;
    history.foliation = foliation;
    history.groups = geometry::collision_schedule(scenario.worldlines(), foliation);
    history.segments.reserve(history.groups.size() + 1);
    history.segments.push_back(scenario.initial_state());
    const auto& worldlines = scenario.worldlines();
    for (const CollisionGroup& group : history.groups) {
        std::vector<quantum::ContactAction> actions;
        for (const auto& c : group.collisions) {
            const auto [a, b] = c.slots;
            actions.push_back({rule.unitary_for(worldlines[a].species, worldlines[b].species), c.slots});
        }
        history.segments.push_back(quantum::apply_group(history.segments.back(), actions));
    }
    if (!foliation.boost().is_rest()) {
        double worst = 0.0;
        for (const SpinState& s : history.segments)
            for (double n : quantum::angular_momentum_norms(s)) worst = std::max(worst, n);
        if (worst > kLittleGroupThreshold)
            history.warnings.push_back("LittleGroupWarning: total angular momentum norm " + fmt::g12(worst) +
                                       " exceeds " + fmt::g12(kLittleGroupThreshold) +
                                       "; spin transport under this boost is not certified trivial");
    }
    if (!foliation.boost().exact_gamma())
        history.warnings.push_back("gamma is irrational for v = " + geometry::to_string(foliation.velocity()) +
                                   "; tau values are shown in floating point (grouping stays exact)");
    return history;
}

struct Sample {
    LeafTime tau;
    bool at_breakpoint = false;
    double overlap_magnitude = 1.0;
};

struct Witness {
    LeafTime tau;
    std::size_t interval = 0;  // 0 is the interval before the first breakpoint
    double overlap_magnitude = 1.0;
    double deviation = 0.0;
};

struct HistoryComparison {
    bool equal = true;
    std::vector<Sample> samples;
    std::optional<Witness> witness;
};

/// Compares at every breakpoint of either history and at the midpoint of every
/// interval between them (plus one point beyond each end).
inline HistoryComparison compare_histories(const History& h1, const History& h2,
                                           double tolerance = quantum::kComparisonTolerance) {
    if (!(h1.foliation == h2.foliation))
        fail(ErrorKind::FoliationMismatch, "histories were built on foliations " +
                                               geometry::to_string(h1.foliation.velocity()) + " and " +
                                               geometry::to_string(h2.foliation.velocity()));
    std::set<Rational> cuts;
    for (const auto& g : h1.groups) cuts.insert(g.tau.reduced);
    for (const auto& g : h2.groups) cuts.insert(g.tau.reduced);

    HistoryComparison result;
    const Foliation& f = h1.foliation;
    std::size_t interval = 0;
    auto sample = [&](Rational reduced, bool at_breakpoint) {
        LeafTime tau = f.leaf_from_reduced(std::move(reduced));
        const double mag = std::abs(quantum::overlap(h1.state_at(tau), h2.state_at(tau)));
        const double deviation = std::abs(mag - 1.0);
        if (deviation > tolerance) {
            result.equal = false;
            if (!at_breakpoint && !result.witness) result.witness = Witness{tau, interval, mag, deviation};
        }
        result.samples.push_back({std::move(tau), at_breakpoint, mag});
    };

    if (cuts.empty()) {
        sample(Rational(0), false);
        return result;
    }
    sample(*cuts.begin() - 1, false);
    for (auto it = cuts.begin(); it != cuts.end(); ++it) {
        ++interval;
        sample(*it, true);
        auto next = std::next(it);
        sample(next == cuts.end() ? *it + 1 : (*it + *next) / 2, false);
    }
    return result;
}

inline bool histories_equal(const History& h1, const History& h2, double tolerance = quantum::kComparisonTolerance) {
    return compare_histories(h1, h2, tolerance).equal;
}

struct FoliationVerdict {
    std::size_t index = 0;
    Foliation foliation;
    std::vector<CollisionGroup> schedule;
    HistoryComparison comparison;
    std::vector<std::string> warnings;
};

struct NarratabilityReport {
    std::string scenario;
    std::string rule1;
    std::string rule2;
    double tolerance = quantum::kComparisonTolerance;
    std::vector<FoliationVerdict> verdicts;
    bool non_narratable = false;
};

inline NarratabilityReport narratability_report(const Scenario& scenario, const InteractionRule& rule1,
                                                const InteractionRule& rule2, const std::vector<Foliation>& foliations,
                                                double tolerance = quantum::kComparisonTolerance) {
    if (foliations.size() < 2)
        fail(ErrorKind::InvalidArgument, "a narratability report needs at least two foliations, got " +
                                             std::to_string(foliations.size()));
    NarratabilityReport report{scenario.name(), rule1.name(), rule2.name(), tolerance, {}, false};
    bool any_equal = false;
    bool any_differ = false;
    for (std::size_t i = 0; i < foliations.size(); ++i) {
        const History h1 = evolve(scenario, foliations[i], rule1);
        const History h2 = evolve(scenario, foliations[i], rule2);
        FoliationVerdict v{i, foliations[i], h1.groups, compare_histories(h1, h2, tolerance), h1.warnings};
        for (const auto& w : h2.warnings)
            if (std::find(v.warnings.begin(), v.warnings.end(), w) == v.warnings.end()) v.warnings.push_back(w);
        (v.comparison.equal ? any_equal : any_differ) = true;
        report.verdicts.push_back(std::move(v));
    }
    report.non_narratable = any_equal && any_differ;
    return report;
}

// Rendering

inline std::string describe_foliation(const Foliation& f) {
    const auto& g = f.boost().exact_gamma();
    return "v = " + geometry::to_string(f.velocity()) + "  gamma = " +
           (g ? narratables::to_string(*g) : fmt::g17(f.boost().gamma()));
}

inline void render_schedule(std::ostream& out, const std::vector<CollisionGroup>& groups) {
    out << "  collision groups: " << groups.size() << "\n";
    for (const auto& g : groups) {
        out << "    tau = " << geometry::to_string(g.tau) << ":";
        for (std::size_t k = 0; k < g.collisions.size(); ++k) {
            const auto& c = g.collisions[k];
            out << (k ? ";" : "") << " (" << c.slots.first << "," << c.slots.second << ") at "
                << geometry::to_string(c.event);
        }
        out << "\n";
    }
}

inline constexpr const char* kRefoliationNote =
    "boosted histories re-foliate fixed worldline and spin data; spin transport under boosts is taken as "
    "trivial, which the total angular momentum guard certifies for spin-zero states";

inline void render_report(std::ostream& out, const NarratabilityReport& report, const fmt::Style& style = {}) {
    out << "narratability report\n";
    out << "  scenario: " << report.scenario << "\n";
    out << "  rules: " << report.rule1 << " vs " << report.rule2 << "\n";
    out << "  tolerance: " << fmt::g12(report.tolerance) << "\n";
    out << "  note: " << kRefoliationNote << "\n";
    for (const auto& v : report.verdicts) {
        out << "foliation " << v.index << "  " << describe_foliation(v.foliation) << "\n";
        render_schedule(out, v.schedule);
        for (const auto& w : v.warnings) out << "  warning: " << w << "\n";
        if (v.comparison.equal) {
            double worst = 0.0;
            for (const auto& s : v.comparison.samples) worst = std::max(worst, std::abs(s.overlap_magnitude - 1.0));
            out << "  verdict: " << style.good("EQUAL") << "  (max |1 - |overlap|| = " << fmt::g12(worst) << ")\n";
        } else {
            out << "  verdict: " << style.warn("DIFFER");
            if (const auto& w = v.comparison.witness)
                out << "  witness tau = " << geometry::to_string(w->tau) << " (interval " << w->interval
                    << "), |<" << report.rule1 << "|" << report.rule2 << ">| = " << fmt::g12(w->overlap_magnitude)
                    << ", deviation = " << fmt::g12(w->deviation);
            out << "\n";
        }
    }
    out << "summary: "
        << (report.non_narratable ? style.bad("NON_NARRATABLE") : style.good("NOT_FLAGGED"))
        << (report.non_narratable ? "  (histories agree on one foliation and differ on another)"
                                  : "  (no foliation pair separates the two rules)")
        << "\n";
}

inline constexpr const char* kCsvHeader = "foliation_id,tau,overlap_magnitude\n";

inline void render_report_csv(std::ostream& out, const NarratabilityReport& report) {
    out << kCsvHeader;
    for (const auto& v : report.verdicts)
        for (const auto& s : v.comparison.samples)
            out << v.index << "," << fmt::g17(s.tau.value) << "," << fmt::g17(s.overlap_magnitude) << "\n";
}

inline void render_state(std::ostream& out, const SpinState& state, const std::string& indent = "    ") {
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        const auto amp = state.amplitudes()(static_cast<Eigen::Index>(i));
        if (std::abs(amp) > 1e-12)
            out << indent << "|" << quantum::basis_label(state.n_slots(), i) << ">  " << fmt::complex_fixed(amp) << "\n";
    }
}

inline void render_history(std::ostream& out, const History& h) {
    out << "  breakpoints: " << h.groups.size() << "\n";
    render_schedule(out, h.groups);
    for (const auto& w : h.warnings) out << "  warning: " << w << "\n";
    for (std::size_t k = 0; k < h.segments.size(); ++k) {
        const std::string lo = k == 0 ? "(-inf" : "[" + geometry::to_string(h.groups[k - 1].tau);
        const std::string hi = k == h.groups.size() ? "+inf)" : geometry::to_string(h.groups[k].tau) + ")";
        out << "segment " << k << "  tau in " << lo << ", " << hi << "\n";
        render_state(out, h.segments[k]);
    }
}

/// (foliation_id, tau, |<initial|state(tau)>|) on `points` evenly spaced
/// leaves spanning one unit beyond the first and last breakpoints.
inline void render_history_csv(std::ostream& out, const History& h, std::size_t foliation_id, std::size_t points) {
    out << kCsvHeader;
    if (points == 0) return;
    double lo = -1.0, hi = 1.0;
    if (!h.groups.empty()) {
        lo = h.groups.front().tau.value - 1.0;
        hi = h.groups.back().tau.value + 1.0;
    }
    const SpinState& initial = h.segments.front();
    for (std::size_t i = 0; i < points; ++i) {
        const double tau = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        const double mag = std::abs(quantum::overlap(initial, h.state_at_value(tau)));
        out << foliation_id << "," << fmt::g17(tau) << "," << fmt::g17(mag) << "\n";
    }
}

} // namespace narratables::narrative
