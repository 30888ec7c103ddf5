#pragma once

// Contraction maps used to build conformal iterated function systems.
//
// Every map is either a Moebius transformation (similarities, inverse Gauss
// and Renyi branches, their complex analogues and compositions of these) or a
// power of the Manneville-Pomeau type parabolic branch x(1 + q x^q)^(-1/q).
// Moebius maps are handled exactly on intervals and discs; the parabolic
// branch is monotone with monotone derivative on [0, 1], which is all the
// interval code below relies on.

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cifs/error.hpp"
#include "cifs/geometry.hpp"

namespace cifs {

/// z -> (a z + b) / (c z + d).
struct Moebius {
    Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

    [[nodiscard]] Complex det() const { return a * d - b * c; }
    [[nodiscard]] Complex operator()(Complex z) const { return (a * z + b) / (c * z + d); }
    [[nodiscard]] double deriv_abs(Complex z) const { return std::abs(det()) / std::norm(c * z + d); }

    /// Left composition: (*this)(rhs(z)).
    [[nodiscard]] Moebius compose(const Moebius& rhs) const {
        Moebius m{a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d, c * rhs.a + d * rhs.c,
                  c * rhs.b + d * rhs.d};
        m.normalize();
        return m;
    }

    /// Rescale so the largest entry has modulus one; entries of long
    /// continued-fraction words otherwise overflow.
    void normalize() {
        const double s = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
        if (s > 0.0 && (s > 1e100 || s < 1e-100)) {
            a /= s;
            b /= s;
            c /= s;
            d /= s;
        }
    }

    [[nodiscard]] Interval image(const Interval& x) const {
        return Interval::ordered((*this)(x.lo).real(), (*this)(x.hi).real());
    }

    [[nodiscard]] Interval deriv_range(const Interval& x) const {
        const double u = deriv_abs(x.lo), v = deriv_abs(x.hi);
        return Interval::ordered(u, v);
    }

    [[nodiscard]] Disc image(const Disc& x) const {
        if (std::abs(c) == 0.0) {
            return {(a * x.center + b) / d, std::abs(a / d) * x.radius};
        }
        const Complex m = c * x.center + d;
        const double s = std::abs(c) * x.radius;
        const double denom = std::norm(m) - s * s;
        if (denom <= 0.0) throw DomainError("Moebius pole inside disc");
        const Complex inv_center = std::conj(m) / denom;
        const double inv_radius = s / denom;
        const Complex k = det() / c;
        return {a / c - k * inv_center, std::abs(k) * inv_radius};
    }

    [[nodiscard]] Interval deriv_range(const Disc& x) const {
        const Complex m = c * x.center + d;
        const double s = std::abs(c) * x.radius;
        const double nearest = std::abs(m) - s, farthest = std::abs(m) + s;
        if (nearest <= 0.0) throw DomainError("Moebius pole inside disc");
        const double k = std::abs(det());
        return {k / (farthest * farthest), k / (nearest * nearest)};
    }
};

struct Similarity {
    double ratio = 0.5;
    double offset = 0.0;
};

/// x -> 1 / (digit + x)
struct GaussBranch {
    std::int64_t digit = 2;
};

/// z -> 1 / (digit + z) for a Gaussian integer digit with positive real part.
struct ComplexGaussBranch {
    std::int64_t re = 1;
    std::int64_t im = 0;
};

/// Inverse branch of the Renyi map x -> {1 / (1 - x)}: y -> 1 - 1 / (y + digit - 1).
struct RenyiBranch {
    std::int64_t digit = 2;
};

/// power-fold iterate of x -> x (1 + q x^q)^(-1/q); closed form x (1 + n q x^q)^(-1/q).
/// For q = 1 this is the Renyi branch of digit 2.
struct ParabolicBranch {
    double q = 1.0;
    std::int64_t power = 1;
};

struct MapKind;

/// maps[0] o maps[1] o ... o maps[k-1]
struct Composite {
    std::vector<MapKind> maps;
};

struct MapKind {
    using Variant =
        std::variant<Similarity, GaussBranch, ComplexGaussBranch, RenyiBranch, ParabolicBranch, Composite>;
    Variant kind;

    MapKind() : kind(Similarity{}) {}
    template <typename T>
        requires std::is_constructible_v<Variant, T&&>
    MapKind(T&& k) : kind(std::forward<T>(k)) {}  // NOLINT(google-explicit-constructor)
};

namespace detail {

inline std::optional<Moebius> moebius_of(const MapKind& m);

inline std::optional<Moebius> moebius_of_composite(const Composite& c) {
    Moebius acc;
    for (const auto& part : c.maps) {
        auto mm = moebius_of(part);
        if (!mm) return std::nullopt;
        acc = acc.compose(*mm);
    }
    return acc;
}

inline std::optional<Moebius> moebius_of(const MapKind& m) {
    return std::visit([](const auto& k) -> std::optional<Moebius> {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Similarity>) {
            return Moebius{k.ratio, k.offset, 0.0, 1.0};
        } else if constexpr (std::is_same_v<T, GaussBranch>) {
            return Moebius{0.0, 1.0, 1.0, static_cast<double>(k.digit)};
        } else if constexpr (std::is_same_v<T, ComplexGaussBranch>) {
            return Moebius{0.0, 1.0, 1.0, Complex(static_cast<double>(k.re), static_cast<double>(k.im))};
        } else if constexpr (std::is_same_v<T, RenyiBranch>) {
            const double b = static_cast<double>(k.digit);
            return Moebius{1.0, b - 2.0, 1.0, b - 1.0};
        } else if constexpr (std::is_same_v<T, ParabolicBranch>) {
            if (k.q != 1.0) return std::nullopt;
            return Moebius{1.0, 0.0, static_cast<double>(k.power), 1.0};
        } else {
            return moebius_of_composite(k);
        }
    }, m.kind);
}

inline double parabolic_apply(const ParabolicBranch& p, double x) {
    if (x <= 0.0) return 0.0;
    return x * std::pow(1.0 + static_cast<double>(p.power) * p.q * std::pow(x, p.q), -1.0 / p.q);
}

inline double parabolic_deriv(const ParabolicBranch& p, double x) {
    if (x <= 0.0) return 1.0;
    const double base = 1.0 + static_cast<double>(p.power) * p.q * std::pow(x, p.q);
    return std::pow(base, -1.0 / p.q - 1.0);
}

}  // namespace detail

/// Moebius form of a map, when it has one.
inline std::optional<Moebius> as_moebius(const MapKind& m) { return detail::moebius_of(m); }

inline bool is_complex_map(const MapKind& m) {
    return std::visit([](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ComplexGaussBranch>) return true;
        else if constexpr (std::is_same_v<T, Composite>) {
            for (const auto& part : k.maps)
                if (is_complex_map(part)) return true;
            return false;
        } else return false;
    }, m.kind);
}

/// Evaluate a map at a point (real maps use the real part only).
inline Complex apply_map(const MapKind& m, Complex z) {
    return std::visit([&](const auto& k) -> Complex {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ParabolicBranch>) {
            return detail::parabolic_apply(k, z.real());
        } else if constexpr (std::is_same_v<T, Composite>) {
            Complex w = z;
            for (auto it = k.maps.rbegin(); it != k.maps.rend(); ++it) w = apply_map(*it, w);
            return w;
        } else {
            return (*detail::moebius_of(MapKind{k}))(z);
        }
    }, m.kind);
}

inline double apply_map(const MapKind& m, double x) { return apply_map(m, Complex(x, 0.0)).real(); }

/// |S'(z)|
inline double deriv_abs(const MapKind& m, Complex z) {
    return std::visit([&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ParabolicBranch>) {
            return detail::parabolic_deriv(k, z.real());
        } else if constexpr (std::is_same_v<T, Composite>) {
            double acc = 1.0;
            Complex w = z;
            for (auto it = k.maps.rbegin(); it != k.maps.rend(); ++it) {
                acc *= deriv_abs(*it, w);
                w = apply_map(*it, w);
            }
            return acc;
        } else {
            return detail::moebius_of(MapKind{k})->deriv_abs(z);
        }
    }, m.kind);
}

/// Image of an interval under a (monotone) real map.
inline Interval image(const MapKind& m, const Interval& x) {
    if (auto mm = as_moebius(m)) return mm->image(x);
    return Interval::ordered(apply_map(m, x.lo), apply_map(m, x.hi));
}

/// Range of |S'| over an interval. Exact for single maps; for compositions the
/// product of per-factor ranges over the nested images (a valid enclosure).
inline Interval deriv_range(const MapKind& m, const Interval& x) {
    if (auto mm = as_moebius(m)) return mm->deriv_range(x);
    return std::visit([&](const auto& k) -> Interval {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Composite>) {
            Interval acc{1.0, 1.0};
            Interval cur = x;
            for (auto it = k.maps.rbegin(); it != k.maps.rend(); ++it) {
                const Interval d = deriv_range(*it, cur);
                acc = {acc.lo * d.lo, acc.hi * d.hi};
                cur = image(*it, cur);
            }
            return acc;
        } else {
            return Interval::ordered(deriv_abs(m, x.lo), deriv_abs(m, x.hi));
        }
    }, m.kind);
}

inline Disc image(const MapKind& m, const Disc& x) {
    auto mm = as_moebius(m);
    if (!mm) throw DomainError("planar cylinders require Moebius maps");
    return mm->image(x);
}

inline Interval deriv_range(const MapKind& m, const Disc& x) {
    auto mm = as_moebius(m);
    if (!mm) throw DomainError("planar cylinders require Moebius maps");
    return mm->deriv_range(x);
}

inline std::string describe(const MapKind& m) {
    return std::visit([](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Similarity>) {
            return "sim(" + std::to_string(k.ratio) + "," + std::to_string(k.offset) + ")";
        } else if constexpr (std::is_same_v<T, GaussBranch>) {
            return "gauss(" + std::to_string(k.digit) + ")";
        } else if constexpr (std::is_same_v<T, ComplexGaussBranch>) {
            return "cgauss(" + std::to_string(k.re) + "+" + std::to_string(k.im) + "i)";
        } else if constexpr (std::is_same_v<T, RenyiBranch>) {
            return "renyi(" + std::to_string(k.digit) + ")";
        } else if constexpr (std::is_same_v<T, ParabolicBranch>) {
            return "parabolic(q=" + std::to_string(k.q) + ",n=" + std::to_string(k.power) + ")";
        } else {
            std::string s = "comp[";
            for (std::size_t i = 0; i < k.maps.size(); ++i) s += (i ? "," : "") + describe(k.maps[i]);
            return s + "]";
        }
    }, m.kind);
}

}  // namespace cifs
