#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <variant>

namespace cifs {

using Complex = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed interval [lo, hi] on the real line.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] double length() const { return hi - lo; }
    [[nodiscard]] double mid() const { return 0.5 * (lo + hi); }
    [[nodiscard]] bool contains(double x) const { return lo <= x && x <= hi; }
    [[nodiscard]] bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    [[nodiscard]] bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }

    static Interval ordered(double a, double b) { return a <= b ? Interval{a, b} : Interval{b, a}; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Closed disc in the complex plane.
struct Disc {
    Complex center{0.0, 0.0};
    double radius = 0.0;

    [[nodiscard]] double diameter() const { return 2.0 * radius; }
    [[nodiscard]] bool contains(Complex z) const { return std::abs(z - center) <= radius; }
    [[nodiscard]] bool contains(const Disc& o, double slack = 0.0) const {
        return std::abs(o.center - center) + o.radius <= radius * (1.0 + slack) + 1e-15;
    }
    [[nodiscard]] bool intersects(const Disc& o) const {
        return std::abs(o.center - center) <= radius + o.radius;
    }
};

/// Region of a cylinder: an interval in 1-D, a disc in 2-D.
using Region = std::variant<Interval, Disc>;

inline double diameter(const Region& r) {
    return std::visit([](const auto& g) {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, Interval>) return g.length();
        else return g.diameter();
    }, r);
}

/// Two-sided enclosure of a real quantity; either end may be infinite.
struct Bracket {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] double width() const { return hi - lo; }
    [[nodiscard]] double mid() const {
        if (std::isinf(hi) || std::isinf(lo)) return std::isinf(hi) ? hi : lo;
        return 0.5 * (lo + hi);
    }
    [[nodiscard]] bool contains(double x) const { return lo <= x && x <= hi; }

    Bracket& operator+=(const Bracket& o) {
        lo += o.lo;
        hi += o.hi;
        return *this;
    }
    friend Bracket operator+(Bracket a, const Bracket& b) { return a += b; }
    friend Bracket operator*(double s, const Bracket& b) { return {s * b.lo, s * b.hi}; }
};

}  // namespace cifs
