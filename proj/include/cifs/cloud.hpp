#pragma once

// Finite-resolution point clouds of limit sets and fixed-point sets.
//
// Cylinders of diameter > delta are expanded depth first. Any other cylinder
// contributes the single point S_w(x0). Infinite tails are walked until
// their cylinders drop below delta; past that, tail points are thinned to a
// delta/2-net (measured after applying the parent transform) by jumping along
// the tail with a monotone search, and the walk ends with the accumulation
// point once the remaining tail fits inside delta/2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cifs/error.hpp"
#include "cifs/geometry.hpp"
#include "cifs/spec.hpp"

namespace cifs {

enum class CloudLabel { limit_set, fixed_points };

inline const char* to_string(CloudLabel l) { return l == CloudLabel::limit_set ? "limit_set" : "fixed_points"; }

struct PointCloud {
    int ambient_dim = 1;
    double delta = 0.0;
    CloudLabel label = CloudLabel::limit_set;
    std::string source;
    /// Coordinates, ambient_dim per point; 1-D clouds are sorted ascending.
    std::vector<double> coords;
    /// Number of cylinders of diameter > delta that were expanded.
    std::size_t expanded = 0;

    [[nodiscard]] std::size_t size() const { return coords.size() / static_cast<std::size_t>(ambient_dim); }
    [[nodiscard]] bool empty() const { return coords.empty(); }
    [[nodiscard]] double x(std::size_t i) const { return coords[i * static_cast<std::size_t>(ambient_dim)]; }
    [[nodiscard]] Complex z(std::size_t i) const {
        const std::size_t j = i * static_cast<std::size_t>(ambient_dim);
        return ambient_dim == 1 ? Complex(coords[j], 0.0) : Complex(coords[j], coords[j + 1]);
    }

    static PointCloud from_points_1d(std::vector<double> xs, double delta = 0.0) {
        PointCloud c;
        c.delta = delta;
        c.coords = std::move(xs);
        c.normalize();
        return c;
    }

    static PointCloud from_points_2d(const std::vector<Complex>& zs, double delta = 0.0) {
        PointCloud c;
        c.ambient_dim = 2;
        c.delta = delta;
        for (const auto& z : zs) {
            c.coords.push_back(z.real());
            c.coords.push_back(z.imag());
        }
        c.normalize();
        return c;
    }

    /// Sort and drop exact duplicates.
    void normalize() {
        if (ambient_dim == 1) {
            std::sort(coords.begin(), coords.end());
            coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
            return;
        }
        std::vector<std::pair<double, double>> pts;
        pts.reserve(size());
        for (std::size_t i = 0; i < size(); ++i) pts.emplace_back(coords[2 * i], coords[2 * i + 1]);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        coords.clear();
        for (const auto& [a, b] : pts) {
            coords.push_back(a);
            coords.push_back(b);
        }
    }
};

struct CloudOptions {
    std::size_t cap = 5'000'000;
    std::optional<Region> window;
};

namespace detail {

class CloudBuilder {
public:
    CloudBuilder(const CifsSpec& spec, double delta, const CloudOptions& opts)
        : spec_(spec), delta_(delta), opts_(opts), x0_(spec.anchor_point()) {
        if (!(delta > 0.0)) throw DomainError("resolution delta must be positive");
        if (!(delta < diameter(spec.seed))) throw DomainError("resolution delta must be below the seed diameter");
    }

    PointCloud limit_set() {
        expand(Transform{});
        return finish(CloudLabel::limit_set);
    }

    PointCloud fixed_points() {
        const Transform id;
        for (const auto& m : spec_.explicit_maps) {
            const Transform c = id.then(m);
            if (in_window(c)) emit(c(x0_));
        }
        for (std::size_t s = 0; s < spec_.tails.size(); ++s) thin_tail(id, spec_.tails[s], 0);
        return finish(CloudLabel::fixed_points);
    }

private:
    [[nodiscard]] bool planar() const { return spec_.ambient_dim == 2; }

    [[nodiscard]] bool in_window(const Transform& c) const {
        if (!opts_.window) return true;
        const Region r = c.image(spec_.seed);
        return std::visit([&](const auto& a, const auto& b) -> bool {
            using A = std::decay_t<decltype(a)>;
            using B = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<A, B>) return a.intersects(b);
            else throw ConfigError("window and seed domain differ in dimension");
        }, r, *opts_.window);
    }

    void emit(Complex z) {
        if (points_.size() >= opts_.cap)
            throw CapacityError("point cloud exceeds the configured cap of " + std::to_string(opts_.cap) + " points");
        points_.push_back(z);
    }

    void child(const Transform& c) {
        if (!in_window(c)) return;
        if (diameter(c.image(spec_.seed)) > delta_) {
            expand(c);
        } else {
            emit(c(x0_));
        }
    }

    void expand(const Transform& t) {
        ++expanded_;
        for (const auto& m : spec_.explicit_maps) child(t.then(m));
        for (const auto& tail : spec_.tails) {
            const std::int64_t period = tail_period(tail);
            std::int64_t k = 0;
            for (;;) {
                bool big = false;
                for (std::int64_t j = 0; j < period && !big; ++j)
                    big = diameter(t.then(tail_map(tail, k + j)).image(spec_.seed)) > delta_;
                if (!big) break;
                for (std::int64_t j = 0; j < period; ++j) child(t.then(tail_map(tail, k + j)));
                k += period;
            }
            thin_tail(t, tail, k);
        }
    }

    static std::int64_t tail_period(const TailRule& tail) {
        if (const auto* ip = std::get_if<InducedParabolicTail>(&tail)) return ip->width();
        return 1;
    }

    [[nodiscard]] double local_distance(const TailRule& tail, std::int64_t k) const {
        return std::abs(apply_map(tail_map(tail, k), x0_) - tail_accumulation(tail));
    }

    /// First ordinal k' >= k whose point lies within d of the accumulation point.
    [[nodiscard]] std::int64_t locate(const TailRule& tail, std::int64_t k, double d) const {
        if (local_distance(tail, k) <= d) return k;
        std::int64_t step = 1, lo = k, hi = k + 1;
        while (local_distance(tail, hi) > d) {
            lo = hi;
            step *= 2;
            if (step > (std::int64_t{1} << 52)) throw CapacityError("tail walk did not reach the requested distance");
            hi = k + step;
        }
        while (hi - lo > 1) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            if (local_distance(tail, mid) > d) lo = mid;
            else hi = mid;
        }
        return hi;
    }

    void thin_tail(const Transform& t, const TailRule& tail, std::int64_t k) {
        const double dsup = t.deriv_range(spec_.seed).hi;
        const double step = 0.5 * delta_ / std::max(dsup, 1e-300);
        const Complex acc = tail_accumulation(tail);
        if (planar()) {
            thin_planar(t, tail, k, step, acc);
            return;
        }
        for (;;) {
            const double d = local_distance(tail, k);
            if (d <= step) {
                if (!opts_.window || in_window_point(t(acc))) emit(t(acc));
                return;
            }
            const Transform c = t.then(tail_map(tail, k));
            if (in_window(c)) emit(c(x0_));
            k = std::max(k + 1, locate(tail, k, d - step));
        }
    }

    [[nodiscard]] bool in_window_point(Complex z) const {
        if (!opts_.window) return true;
        return std::visit([&](const auto& w) -> bool {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, Interval>) return w.contains(z.real());
            else return w.contains(z);
        }, *opts_.window);
    }

    /// Planar tails: individual points while their spacing can exceed the
    /// step, then a step-grid over the remaining neighbourhood of the
    /// accumulation point intersected with the seed disc.
    void thin_planar(const Transform& t, const TailRule& tail, std::int64_t k, double step, Complex acc) {
        const double radius_switch = 2.0 * std::sqrt(step);
        while (local_distance(tail, k) > radius_switch) {
            const Transform c = t.then(tail_map(tail, k));
            if (in_window(c)) emit(c(x0_));
            ++k;
        }
        const double r = local_distance(tail, k) * 1.5;
        const Disc seed = std::get<Disc>(spec_.seed);
        const auto n = static_cast<std::int64_t>(std::ceil(r / step));
        for (std::int64_t i = -n; i <= n; ++i) {
            for (std::int64_t j = -n; j <= n; ++j) {
                const Complex z = acc + Complex(static_cast<double>(i) * step, static_cast<double>(j) * step);
                if (std::abs(z - acc) > r || !seed.contains(z)) continue;
                const Complex w = t(z);
                if (in_window_point(w)) emit(w);
            }
        }
    }

    PointCloud finish(CloudLabel label) {
        PointCloud c;
        c.ambient_dim = spec_.ambient_dim;
        c.delta = delta_;
        c.label = label;
        c.source = spec_.digest();
        c.expanded = expanded_;
        c.coords.reserve(points_.size() * static_cast<std::size_t>(c.ambient_dim));
        for (const auto& z : points_) {
            c.coords.push_back(z.real());
            if (c.ambient_dim == 2) c.coords.push_back(z.imag());
        }
        c.normalize();
        return c;
    }

    const CifsSpec& spec_;
    double delta_;
    CloudOptions opts_;
    Complex x0_;
    std::vector<Complex> points_;
    std::size_t expanded_ = 0;
};

}  // namespace detail

/// delta-resolution surrogate of the limit set, optionally restricted to
/// cylinders meeting a window.
inline PointCloud build_limit_cloud(const CifsSpec& spec, double delta, const CloudOptions& opts = {}) {
    return detail::CloudBuilder(spec, delta, opts).limit_set();
}

/// One point S_i(x0) per first-level map, tails thinned as in the limit cloud.
inline PointCloud build_fixed_point_cloud(const CifsSpec& spec, double delta, const CloudOptions& opts = {}) {
    return detail::CloudBuilder(spec, delta, opts).fixed_points();
}

}  // namespace cifs
