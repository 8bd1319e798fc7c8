#pragma once

// Exact Minkowski kinematics: boosts, flat foliations, inertial worldlines and
// the collision schedule a foliation induces on them.
//
// Conventions: c = 1, metric signature (+,-,-,-), coordinates ordered (t,x,y,z).
// A boost with velocity v maps rest-frame coordinates to primed coordinates
// with t' = gamma (t - v.x), so the leaf parameter of the foliation generated
// by v is tau(e) = gamma (t_e - v.x_e).

#include "narratables/error.hpp"
#include "narratables/rational.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdio>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace narratables::geometry {

template <typename T>
struct Vec3 {
    T x{}, y{}, z{};

    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
    friend Vec3 operator*(const T& s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
    friend bool operator==(const Vec3& a, const Vec3& b) { return a.x == b.x && a.y == b.y && a.z == b.z; }

    T dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    T norm_squared() const { return dot(*this); }
    const T& operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
    T& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }
};

using RationalVec3 = Vec3<Rational>;
using Vec3d = Vec3<double>;

inline Vec3d to_double(const RationalVec3& v) {
    return {narratables::to_double(v.x), narratables::to_double(v.y), narratables::to_double(v.z)};
}

inline std::string to_string(const RationalVec3& v) {
    return "(" + narratables::to_string(v.x) + ", " + narratables::to_string(v.y) + ", " +
           narratables::to_string(v.z) + ")";
}

struct Event {
    Rational t;
    RationalVec3 position;

    friend bool operator==(const Event&, const Event&) = default;
};

inline std::string to_string(const Event& e) {
    return "(t=" + narratables::to_string(e.t) + ", x=" + narratables::to_string(e.position.x) +
           ", y=" + narratables::to_string(e.position.y) + ", z=" + narratables::to_string(e.position.z) + ")";
}

using Mat4d = Eigen::Matrix4d;
using RationalMat4 = std::array<std::array<Rational, 4>, 4>;

inline const Mat4d& minkowski_metric() {
    static const Mat4d eta = Eigen::Vector4d(1.0, -1.0, -1.0, -1.0).asDiagonal();
    return eta;
}

/// Pure Lorentz boost Lambda(v) with t' = gamma (t - v.x).
inline Mat4d boost_matrix(const Vec3d& v) {
    const double v2 = v.norm_squared();
    if (!(v2 < 1.0))
        fail(ErrorKind::SuperluminalVelocity, "boost speed squared " + std::to_string(v2) + " is not below 1");
    const double gamma = 1.0 / std::sqrt(1.0 - v2);
    // (gamma - 1) / v^2 rewritten so it stays finite as v -> 0
    const double k = gamma * gamma / (gamma + 1.0);
    Mat4d m = Mat4d::Identity();
    m(0, 0) = gamma;
    for (int i = 0; i < 3; ++i) {
        m(0, i + 1) = -gamma * v[i];
        m(i + 1, 0) = -gamma * v[i];
        for (int j = 0; j < 3; ++j) m(i + 1, j + 1) += k * v[i] * v[j];
    }
    return m;
}

/// A velocity with |v| < 1, plus its Lorentz factor. gamma is exact when
/// 1 - |v|^2 is the square of a rational (e.g. v = 3/5 gives gamma = 5/4).
class Boost {
public:
    Boost() = default;

    explicit Boost(RationalVec3 velocity) : velocity_(std::move(velocity)) {
        const Rational v2 = velocity_.norm_squared();
        if (v2 >= 1)
            fail(ErrorKind::SuperluminalVelocity, "velocity " + geometry::to_string(velocity_) +
                                                      " has |v|^2 = " + narratables::to_string(v2));
        const Rational one_minus = 1 - v2;
        exact_gamma_.reset();
        if (auto root = exact_sqrt(one_minus)) exact_gamma_ = 1 / *root;
        gamma_ = 1.0 / std::sqrt(narratables::to_double(one_minus));
    }

    const RationalVec3& velocity() const { return velocity_; }
    double gamma() const { return gamma_; }
    const std::optional<Rational>& exact_gamma() const { return exact_gamma_; }
    bool is_rest() const { return velocity_ == RationalVec3{}; }

    Mat4d matrix() const { return boost_matrix(geometry::to_double(velocity_)); }

    /// Exact Lambda(v); only available when gamma is rational.
    std::optional<RationalMat4> exact_matrix() const {
        if (!exact_gamma_) return std::nullopt;
        const Rational& g = *exact_gamma_;
        const Rational v2 = velocity_.norm_squared();
        RationalMat4 m{};
        for (std::size_t i = 0; i < 4; ++i) m[i][i] = 1;
        m[0][0] = g;
        for (std::size_t i = 0; i < 3; ++i) {
            m[0][i + 1] = -g * velocity_[i];
            m[i + 1][0] = -g * velocity_[i];
            if (v2 != 0)
                for (std::size_t j = 0; j < 3; ++j)
                    m[i + 1][j + 1] += (g - 1) * velocity_[i] * velocity_[j] / v2;
        }
        return m;
    }

private:
    RationalVec3 velocity_{};
    double gamma_ = 1.0;
    std::optional<Rational> exact_gamma_ = Rational(1);
};

/// A foliation leaf value. Ordering and equality use the gamma-free part
/// t - v.x, which is exact for every rational velocity; `exact` is filled in
/// only when gamma itself is rational.
struct LeafTime {
    Rational reduced;
    std::optional<Rational> exact;
    double value = 0.0;

    friend bool operator==(const LeafTime& a, const LeafTime& b) { return a.reduced == b.reduced; }
    friend std::strong_ordering operator<=>(const LeafTime& a, const LeafTime& b) {
        if (a.reduced < b.reduced) return std::strong_ordering::less;
        if (b.reduced < a.reduced) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
};

inline std::string to_string(const LeafTime& tau) {
    if (tau.exact) return narratables::to_string(*tau.exact);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", tau.value);
    return buf;
}

/// Parallel spacelike hyperplanes of constant primed time for one boost.
class Foliation {
public:
    Foliation() = default;
    explicit Foliation(Boost boost) : boost_(std::move(boost)) {}
    explicit Foliation(RationalVec3 velocity) : boost_(std::move(velocity)) {}

    static Foliation rest() { return Foliation{}; }

    const Boost& boost() const { return boost_; }
    const RationalVec3& velocity() const { return boost_.velocity(); }

    /// Builds the leaf value whose gamma-free part is `reduced`.
    LeafTime leaf_from_reduced(Rational reduced) const {
        LeafTime leaf;
        if (boost_.exact_gamma()) leaf.exact = *boost_.exact_gamma() * reduced;
        leaf.value = leaf.exact ? narratables::to_double(*leaf.exact) : boost_.gamma() * narratables::to_double(reduced);
        leaf.reduced = std::move(reduced);
        return leaf;
    }

    LeafTime leaf(const Event& e) const { return leaf_from_reduced(e.t - velocity().dot(e.position)); }

    friend bool operator==(const Foliation& a, const Foliation& b) { return a.velocity() == b.velocity(); }

private:
    Boost boost_;
};

/// tau = gamma (t - v.x)
inline LeafTime leaf_parameter(const Foliation& foliation, const Event& event) { return foliation.leaf(event); }

struct Worldline {
    std::size_t id = 0;
    std::string species;
    Event start;
    RationalVec3 velocity;

    Worldline() = default;
    Worldline(std::size_t id_, std::string species_, Event start_, RationalVec3 velocity_)
        : id(id_), species(std::move(species_)), start(std::move(start_)), velocity(std::move(velocity_)) {
        if (velocity.norm_squared() >= 1)
            fail(ErrorKind::SuperluminalVelocity,
                 "worldline " + std::to_string(id) + " has velocity " + geometry::to_string(velocity));
    }

    /// Worldlines are complete inertial lines; `start` is a reference point on them.
    RationalVec3 position_at(const Rational& t) const { return start.position + (t - start.t) * velocity; }
};

/// Exact intersection of two inertial worldlines.
inline std::optional<Event> collide(const Worldline& a, const Worldline& b) {
    if (a.id == b.id) fail(ErrorKind::InvalidArgument, "collide() needs two distinct slots, got " + std::to_string(a.id) + " twice");
    // x_a0 + v_a (t - t_a) = x_b0 + v_b (t - t_b)  <=>  (v_a - v_b) t = d
    const RationalVec3 dv = a.velocity - b.velocity;
    const RationalVec3 d = (b.start.position - b.start.t * b.velocity) - (a.start.position - a.start.t * a.velocity);
    std::optional<Rational> t;
    for (std::size_t i = 0; i < 3; ++i) {
        if (dv[i] == 0) {
            if (d[i] != 0) return std::nullopt;
            continue;
        }
        Rational ti = d[i] / dv[i];
        if (t && *t != ti) return std::nullopt;
        t = std::move(ti);
    }
    if (!t)
        fail(ErrorKind::CoincidentWorldlines,
             "worldlines " + std::to_string(a.id) + " and " + std::to_string(b.id) + " coincide");
    return Event{*t, a.position_at(*t)};
}

struct Collision {
    std::pair<std::size_t, std::size_t> slots;  // (lower id, higher id)
    Event event;

    friend bool operator==(const Collision&, const Collision&) = default;
};

struct CollisionGroup {
    LeafTime tau;
    std::vector<Collision> collisions;  // sorted by slot pair
};

/// All pairwise collisions grouped by exactly equal leaf value, in increasing
/// tau. Two collisions on one leaf may not share a particle.
inline std::vector<CollisionGroup> collision_schedule(const std::vector<Worldline>& worldlines,
                                                      const Foliation& foliation) {
    std::map<Rational, std::vector<Collision>> by_leaf;
    for (std::size_t i = 0; i < worldlines.size(); ++i) {
        for (std::size_t j = i + 1; j < worldlines.size(); ++j) {
            const Worldline& a = worldlines[i];
            const Worldline& b = worldlines[j];
            if (auto event = collide(a, b)) {
                Rational key = event->t - foliation.velocity().dot(event->position);
                by_leaf[std::move(key)].push_back({std::minmax(a.id, b.id), *event});
            }
        }
    }
    std::vector<CollisionGroup> groups;
    groups.reserve(by_leaf.size());
    for (auto& [key, collisions] : by_leaf) {
        std::sort(collisions.begin(), collisions.end(),
                  [](const Collision& l, const Collision& r) { return l.slots < r.slots; });
        std::set<std::size_t> seen;
        for (const Collision& c : collisions) {
            for (std::size_t slot : {c.slots.first, c.slots.second}) {
                if (!seen.insert(slot).second)
                    fail(ErrorKind::OverlappingSimultaneousPairs,
                         "slot " + std::to_string(slot) + " takes part in two collisions on the leaf tau = " +
                             to_string(foliation.leaf_from_reduced(key)));
            }
        }
        groups.push_back({foliation.leaf_from_reduced(key), std::move(collisions)});
    }
    return groups;
}

// Floating-point path, used to cross-check the exact one.

struct EventF {
    double t = 0, x = 0, y = 0, z = 0;
};

struct WorldlineF {
    EventF start;
    Vec3d velocity;
};

inline WorldlineF to_float(const Worldline& w) {
    return {{narratables::to_double(w.start.t), narratables::to_double(w.start.position.x),
             narratables::to_double(w.start.position.y), narratables::to_double(w.start.position.z)},
            geometry::to_double(w.velocity)};
}

/// Least-squares intersection time, accepted when every coordinate agrees
/// within `tolerance`.
inline std::optional<EventF> collide_approx(const WorldlineF& a, const WorldlineF& b, double tolerance = 1e-9) {
    const Vec3d pa{a.start.x, a.start.y, a.start.z};
    const Vec3d pb{b.start.x, b.start.y, b.start.z};
    const Vec3d dv = a.velocity - b.velocity;
    const Vec3d d = (pb - b.start.t * b.velocity) - (pa - a.start.t * a.velocity);
    const double dv2 = dv.norm_squared();
    if (dv2 <= tolerance * tolerance) return std::nullopt;
    const double t = dv.dot(d) / dv2;
    const Vec3d miss = t * dv - d;
    if (std::sqrt(miss.norm_squared()) > tolerance * std::max(1.0, std::abs(t))) return std::nullopt;
    const Vec3d pos = pa + (t - a.start.t) * a.velocity;
    return EventF{t, pos.x, pos.y, pos.z};
}

} // namespace narratables::geometry
