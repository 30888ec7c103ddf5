#pragma once

// Induced systems of parabolic IFSs with a single neutral fixed point at 0.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cifs/error.hpp"
#include "cifs/maps.hpp"
#include "cifs/spec.hpp"
#include "cifs/tails.hpp"

namespace cifs {

namespace detail {

/// True for a branch fixing 0 with derivative 1 there.
inline bool is_parabolic_branch(const MapKind& m) {
    if (is_complex_map(m)) return false;
    return std::abs(apply_map(m, 0.0)) < 1e-15 && std::abs(deriv_abs(m, Complex(0.0, 0.0)) - 1.0) < 1e-12;
}

inline double parabolic_order(const MapKind& m) {
    if (const auto* p = std::get_if<ParabolicBranch>(&m.kind)) return p->q;
    if (const auto* r = std::get_if<RenyiBranch>(&m.kind); r && r->digit == 2) return 1.0;
    throw ConfigError("parabolic branch must be a parabolic or digit-2 Renyi branch, got " + describe(m));
}

}  // namespace detail

/// Branches of the inverse Renyi map for the given digits (each >= 2).
inline std::vector<MapKind> renyi_branches(const std::vector<std::int64_t>& digits) {
    std::vector<MapKind> out;
    for (const auto d : digits) {
        if (d < 2) throw ConfigError("Renyi digits must be >= 2");
        out.emplace_back(RenyiBranch{d});
    }
    return out;
}

/// The induced system {S_1^n o T : n >= 0, T uniformly contracting} of a
/// parabolic family with neutral branch S_1 (x - S_1(x) ~ x^(1+q) near 0).
inline CifsSpec induce_parabolic(double q, const std::vector<MapKind>& branches) {
    if (!(q > 0.0)) throw ConfigError("parabolic order q must be positive");
    std::vector<MapKind> inner;
    int parabolic = 0;
    for (const auto& b : branches) {
        if (detail::is_parabolic_branch(b)) {
            ++parabolic;
            const double qb = detail::parabolic_order(b);
            if (std::abs(qb - q) > 1e-12)
                throw ConfigError("parabolic branch has order " + std::to_string(qb) + ", expected " + std::to_string(q));
            continue;
        }
        const Interval d = deriv_range(b, Interval{0.0, 1.0});
        if (!(d.hi < 1.0)) throw ConfigError("branch " + describe(b) + " is not uniformly contracting on [0,1]");
        inner.push_back(b);
    }
    if (parabolic == 0) throw ConfigError("no parabolic branch supplied");
    if (parabolic > 1) throw ConfigError("more than one parabolic branch is not supported");
    if (inner.empty()) throw ConfigError("induced system needs at least one uniformly contracting branch");
    std::stable_sort(inner.begin(), inner.end(),
                     [](const MapKind& a, const MapKind& b) { return apply_map(a, 0.0) > apply_map(b, 0.0); });
    CifsSpec s;
    s.name = "induced-parabolic";
    s.tails.push_back(InducedParabolicTail{q, inner});
    return s;
}

/// Backwards continued fractions with the given digits; digit 2 is the
/// parabolic branch.
inline CifsSpec renyi_parabolic_spec(const std::vector<std::int64_t>& digits) {
    if (std::find(digits.begin(), digits.end(), 2) == digits.end())
        throw ConfigError("no parabolic branch supplied: Renyi digit set must contain 2");
    CifsSpec s = induce_parabolic(1.0, renyi_branches(digits));
    s.name = "renyi-parabolic";
    return s;
}

}  // namespace cifs
