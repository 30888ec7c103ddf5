#pragma once

// Sampled checks of the CIFS axioms: images inside the seed, uniform
// contraction, open set condition and the stronger separation of closures of
// images of a neighbourhood V of the seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cifs/error.hpp"
#include "cifs/geometry.hpp"
#include "cifs/spec.hpp"

namespace cifs {

struct AxiomCheck {
    std::string axiom;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<AxiomCheck> checks;
    double xi = 0.0;           ///< sup of |S_i'| over the seed among sampled maps
    bool osc = false;
    bool separation = false;   ///< closures of S_i(V) pairwise disjoint
    double separation_eta = 0.0;  ///< neighbourhood width that witnessed separation
    std::size_t sampled_maps = 0;

    [[nodiscard]] bool cifs_ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.axiom == "separation" || c.passed; });
    }
    [[nodiscard]] const AxiomCheck& check(const std::string& axiom) const {
        for (const auto& c : checks)
            if (c.axiom == axiom) return c;
        throw DomainError("no check named " + axiom);
    }
};

struct ValidationOptions {
    std::size_t tail_sample = 256;
    std::vector<double> etas{1e-1, 1e-2, 1e-3};
    double tolerance = 1e-12;
};

namespace detail {

inline void check_tail_parameters(const CifsSpec& spec) {
    for (const auto& t : spec.tails) {
        std::visit([&](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, PolynomialTail>) {
                if (!(r.p > 0.0)) throw ConfigError("polynomial tail needs p > 0");
                if (r.t < r.p + 1.0) throw ConfigError("polynomial tail needs t >= p + 1");
                if (r.first < 2) throw ConfigError("polynomial tail must start at an index >= 2");
            } else if constexpr (std::is_same_v<T, GeometricTail>) {
                if (!(r.base > 1.0) || !(r.scale > 0.0)) throw ConfigError("geometric tail needs base > 1 and scale > 0");
            } else if constexpr (std::is_same_v<T, InducedParabolicTail>) {
                if (r.inner.empty() || !(r.q > 0.0)) throw ConfigError("induced tail needs q > 0 and inner branches");
            }
        }, t);
    }
    if (spec.ambient_dim == 2 && !std::holds_alternative<Disc>(spec.seed))
        throw ConfigError("planar systems need a disc seed domain");
    if (spec.ambient_dim == 1 && !std::holds_alternative<Interval>(spec.seed))
        throw ConfigError("1-D systems need an interval seed domain");
}

inline std::vector<MapKind> sample_maps(const CifsSpec& spec, std::size_t per_tail) {
    std::vector<MapKind> out = spec.explicit_maps;
    for (const auto& t : spec.tails)
        for (std::size_t k = 0; k < per_tail; ++k) out.push_back(tail_map(t, static_cast<std::int64_t>(k)));
    return out;
}

/// Image of a possibly enlarged seed, or nothing if a pole gets in the way.
inline std::optional<Region> safe_image(const MapKind& m, const Region& r) {
    try {
        if (const auto* iv = std::get_if<Interval>(&r)) {
            if (auto mob = as_moebius(m)) {
                const double c = mob->c.real(), d = mob->d.real();
                if (c != 0.0) {
                    const double pole = -d / c;
                    if (iv->lo <= pole && pole <= iv->hi) return std::nullopt;
                }
            }
            return Region{image(m, *iv)};
        }
        return Region{image(m, std::get<Disc>(r))};
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

/// Pairwise disjointness of regions; open = interiors only.
inline bool pairwise_disjoint(const std::vector<Region>& rs, bool closed, double tol) {
    if (rs.empty()) return true;
    if (std::holds_alternative<Interval>(rs.front())) {
        std::vector<Interval> iv;
        iv.reserve(rs.size());
        for (const auto& r : rs) iv.push_back(std::get<Interval>(r));
        std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        for (std::size_t i = 1; i < iv.size(); ++i) {
            const double gap = iv[i].lo - iv[i - 1].hi;
            if (closed ? !(gap > 0.0) : gap < -tol) return false;
        }
        return true;
    }
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const Disc& a = std::get<Disc>(rs[i]);
        for (std::size_t j = i + 1; j < rs.size(); ++j) {
            const Disc& b = std::get<Disc>(rs[j]);
            const double gap = std::abs(a.center - b.center) - a.radius - b.radius;
            if (closed ? !(gap > 0.0) : gap < -tol * std::max(a.radius, b.radius)) return false;
        }
    }
    return true;
}

inline Region enlarge(const Region& r, double eta) {
    if (const auto* iv = std::get_if<Interval>(&r)) return Interval{iv->lo - eta, iv->hi + eta};
    const Disc& d = std::get<Disc>(r);
    return Disc{d.center, d.radius + eta};
}

}  // namespace detail

/// Deterministic sampled validation. Non-contracting or overlapping maps are
/// reported as failed checks; malformed tail rules raise ConfigError.
inline ValidationReport validate_cifs(const CifsSpec& spec, const ValidationOptions& opts = {}) {
    detail::check_tail_parameters(spec);
    ValidationReport rep;
    const auto maps = detail::sample_maps(spec, opts.tail_sample);
    rep.sampled_maps = maps.size();
    if (maps.empty()) throw ConfigError("system has no maps");

    std::vector<Region> images;
    bool inside = true;
    std::string outside;
    for (const auto& m : maps) {
        const Transform t = Transform{}.then(m);
        const Region img = t.image(spec.seed);
        images.push_back(img);
        const bool ok = std::visit([&](const auto& seed) -> bool {
            using S = std::decay_t<decltype(seed)>;
            if constexpr (std::is_same_v<S, Interval>) {
                const Interval& i = std::get<Interval>(img);
                return i.lo >= seed.lo - opts.tolerance && i.hi <= seed.hi + opts.tolerance;
            } else {
                return seed.contains(std::get<Disc>(img), opts.tolerance);
            }
        }, spec.seed);
        if (!ok && inside) {
            inside = false;
            outside = describe(m);
        }
        rep.xi = std::max(rep.xi, t.deriv_range(spec.seed).hi);
    }
    rep.checks.push_back({"maps_into_seed", inside, inside ? "all sampled images lie in the seed" : "image of " + outside + " leaves the seed"});
    rep.checks.push_back({"uniform_contraction", rep.xi < 1.0, "xi = " + std::to_string(rep.xi)});

    rep.osc = detail::pairwise_disjoint(images, false, opts.tolerance);
    rep.checks.push_back({"open_set_condition", rep.osc, rep.osc ? "sampled images have disjoint interiors" : "sampled images overlap"});

    for (const double eta : opts.etas) {
        const Region v = detail::enlarge(spec.seed, eta);
        std::vector<Region> vimg;
        bool defined = true;
        for (const auto& m : maps) {
            auto r = detail::safe_image(m, v);
            if (!r) {
                defined = false;
                break;
            }
            vimg.push_back(*r);
        }
        if (defined && detail::pairwise_disjoint(vimg, true, 0.0)) {
            rep.separation = true;
            rep.separation_eta = eta;
            break;
        }
    }
    rep.checks.push_back({"separation", rep.separation,
                          rep.separation ? "closures of S_i(V) disjoint for V the " + std::to_string(rep.separation_eta) + "-neighbourhood"
                                         : "no sampled neighbourhood separates the images"});
    return rep;
}

}  // namespace cifs
