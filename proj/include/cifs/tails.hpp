#pragma once

// Infinite families of maps ("tails") appended to a finite list of explicit
// maps. A tail is indexed by an ordinal k = 0, 1, 2, ...; its first-level
// images shrink towards a single accumulation point, and the distance of
// S_k(x0) to that point decreases with k.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cifs/digits.hpp"
#include "cifs/error.hpp"
#include "cifs/geometry.hpp"
#include "cifs/maps.hpp"

namespace cifs {

/// S_i(x) = coef * i^(-t) * x + i^(-p) for i >= first.
struct PolynomialTail {
    double p = 1.0;
    double t = 2.0;
    double coef = 1.0;
    std::int64_t first = 2;

    [[nodiscard]] double ratio(std::int64_t i) const { return coef * std::pow(static_cast<double>(i), -t); }
    [[nodiscard]] MapKind map(std::int64_t k) const {
        const std::int64_t i = first + k;
        return Similarity{ratio(i), std::pow(static_cast<double>(i), -p)};
    }
    [[nodiscard]] std::int64_t label(std::int64_t k) const { return first + k; }
    [[nodiscard]] std::optional<std::int64_t> ordinal_of(std::int64_t label) const {
        if (label < first) return std::nullopt;
        return label - first;
    }
    [[nodiscard]] Complex accumulation() const { return 0.0; }
    [[nodiscard]] Bracket weight(std::int64_t k, double s) const {
        const Bracket b = power_tail(static_cast<double>(first + k), 0.0, t * s);
        const double f = std::pow(coef, s);
        return {f * b.lo, f * b.hi};
    }
    [[nodiscard]] double finiteness() const { return 1.0 / t; }
};

/// S_i(x) = scale * base^(-i) * x + o_i for i >= first, with offsets either
/// o_i = 1/i or packed left to right from 0.
struct GeometricTail {
    enum class Offsets { reciprocal, packed };
    double base = 2.0;
    double scale = 1.0;
    std::int64_t first = 1;
    Offsets offsets = Offsets::reciprocal;

    [[nodiscard]] double ratio(std::int64_t i) const { return scale * std::pow(base, -static_cast<double>(i)); }
    [[nodiscard]] double total() const { return ratio(first) / (1.0 - 1.0 / base); }
    [[nodiscard]] MapKind map(std::int64_t k) const {
        const std::int64_t i = first + k;
        const double o = offsets == Offsets::reciprocal ? 1.0 / static_cast<double>(i)
                                                        : total() - ratio(i) / (1.0 - 1.0 / base);
        return Similarity{ratio(i), o};
    }
    [[nodiscard]] std::int64_t label(std::int64_t k) const { return first + k; }
    [[nodiscard]] std::optional<std::int64_t> ordinal_of(std::int64_t label) const {
        if (label < first) return std::nullopt;
        return label - first;
    }
    [[nodiscard]] Complex accumulation() const { return offsets == Offsets::reciprocal ? 0.0 : total(); }
    [[nodiscard]] Bracket weight(std::int64_t k, double s) const {
        const double v = std::pow(ratio(first + k), s) / (1.0 - std::pow(base, -s));
        return {v, v};
    }
    [[nodiscard]] double finiteness() const { return 0.0; }
};

/// Inverse Gauss branches x -> 1/(b + x) over an infinite digit set; with
/// via_one the maps are S_1 o S_b, i.e. expansions [1, b, ...].
struct GaussTail {
    DigitSet digits;
    bool via_one = false;

    [[nodiscard]] MapKind map(std::int64_t k) const {
        const GaussBranch b{digits.at(k)};
        if (via_one) return Composite{{GaussBranch{1}, b}};
        return b;
    }
    [[nodiscard]] std::int64_t label(std::int64_t k) const { return digits.at(k); }
    [[nodiscard]] std::optional<std::int64_t> ordinal_of(std::int64_t label) const {
        if (via_one) return std::nullopt;
        return digits.index_of(label);
    }
    [[nodiscard]] Complex accumulation() const { return via_one ? 1.0 : 0.0; }
    [[nodiscard]] Bracket weight(std::int64_t k, double s) const { return weight_on(k, s, Interval{0.0, 1.0}); }
    /// Sum restricted to points x in the given subinterval of [0, 1];
    /// |(S_1 o S_b)'(x)| = (b + x + 1)^(-2).
    [[nodiscard]] Bracket weight_on(std::int64_t k, double s, const Interval& x) const {
        const double shift = via_one ? 1.0 : 0.0;
        return {digits.power_sum_from(k, x.hi + shift, 2.0 * s).lo, digits.power_sum_from(k, x.lo + shift, 2.0 * s).hi};
    }
    [[nodiscard]] double finiteness() const { return 0.5 * digits.convergence_exponent(); }
};

/// Induced system of a parabolic branch S_1(x) = x (1 + q x^q)^(-1/q):
/// the maps S_1^n o T_j for n >= 0 and each uniformly contracting branch T_j.
struct InducedParabolicTail {
    double q = 1.0;
    std::vector<MapKind> inner;  // sorted so that T_j(x0) decreases with j

    [[nodiscard]] std::int64_t width() const { return static_cast<std::int64_t>(inner.size()); }
    [[nodiscard]] MapKind map(std::int64_t k) const {
        const std::int64_t n = k / width();
        const MapKind& t = inner[static_cast<std::size_t>(k % width())];
        if (n == 0) return t;
        return Composite{{ParabolicBranch{q, n}, t}};
    }
    [[nodiscard]] std::int64_t label(std::int64_t k) const { return k; }
    [[nodiscard]] std::optional<std::int64_t> ordinal_of(std::int64_t label) const {
        if (label < 0) return std::nullopt;
        return label;
    }
    [[nodiscard]] Complex accumulation() const { return 0.0; }
    [[nodiscard]] Bracket weight(std::int64_t k, double s) const { return weight_on(k, s, Interval{0.0, 1.0}); }
    /// |(S_1^n o T)'(x)| = (1 + n q y^q)^(-(1+q)/q) |T'(x)| with y = T(x).
    [[nodiscard]] Bracket weight_on(std::int64_t k, double s, const Interval& x) const {
        const double sigma = s * (1.0 + q) / q;
        Bracket total{0.0, 0.0};
        for (std::int64_t r = 0; r < width(); ++r) {
            const MapKind& t = inner[static_cast<std::size_t>(r)];
            const Interval img = image(t, x);
            const Interval d = deriv_range(t, x);
            const double dlo = std::pow(d.lo, s), dhi = std::pow(d.hi, s);
            std::int64_t n0 = k <= r ? 0 : (k - r + width() - 1) / width();
            if (sigma <= 1.0) return {kInf, kInf};
            if (n0 == 0) {
                total += Bracket{dlo, dhi};
                n0 = 1;
            }
            // sum_{n >= n0} (1 + n a)^(-sigma) = a^(-sigma) sum (n + 1/a)^(-sigma)
            const double a_hi = q * std::pow(img.hi, q), a_lo = q * std::pow(std::max(img.lo, 1e-300), q);
            const Bracket lo = power_tail(static_cast<double>(n0), 1.0 / a_hi, sigma);
            const Bracket hi = power_tail(static_cast<double>(n0), 1.0 / a_lo, sigma);
            total += Bracket{dlo * std::pow(a_hi, -sigma) * lo.lo, dhi * std::pow(a_lo, -sigma) * hi.hi};
        }
        return total;
    }
    [[nodiscard]] double finiteness() const { return q / (1.0 + q); }
};

/// Complex Gauss branches z -> 1/(b + z) for b = n + m i with n >= 1 (b != 1
/// unless via_one), enumerated by square shells max(n, |m|) = S.
struct ComplexGaussTail {
    bool via_one = false;

    /// Shells 1..S hold 2S^2 + S digits; ordinal 0 is the digit 1.
    static std::pair<std::int64_t, std::int64_t> digit_at(std::int64_t k) {
        auto s = static_cast<std::int64_t>(std::floor((-1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(k))) / 4.0));
        while (2 * s * s + s > k) --s;
        while (2 * (s + 1) * (s + 1) + (s + 1) <= k) ++s;
        const std::int64_t S = s + 1;
        std::int64_t j = k - (2 * s * s + s);  // 0 .. 4S-2
        if (j < 2 * S + 1) return {S, (j % 2 == 1) ? (j + 1) / 2 : -(j / 2)};  // m = 0, 1, -1, 2, ...
        j -= 2 * S + 1;  // 0 .. 2S-3: |m| = S, 1 <= n < S
        const std::int64_t n = 1 + j / 2;
        return {n, (j % 2 == 0) ? S : -S};
    }

    [[nodiscard]] std::int64_t offset() const { return via_one ? 0 : 1; }
    [[nodiscard]] MapKind map(std::int64_t k) const {
        const auto [n, m] = digit_at(k + offset());
        const ComplexGaussBranch b{n, m};
        if (via_one) return Composite{{ComplexGaussBranch{1, 0}, b}};
        return b;
    }
    [[nodiscard]] std::int64_t label(std::int64_t k) const { return k; }
    [[nodiscard]] std::optional<std::int64_t> ordinal_of(std::int64_t) const { return std::nullopt; }
    [[nodiscard]] Complex accumulation() const { return via_one ? 1.0 : 0.0; }
    /// On the seed disc |z - 1/2| <= 1/2 a shell-S digit has S - 1/2 <= |b + z| <= sqrt(2)(S + 2).
    [[nodiscard]] Bracket weight(std::int64_t k, double s) const {
        if (2.0 * s <= 2.0) return {kInf, kInf};
        std::int64_t shell = 1;
        while (2 * shell * shell + shell <= k + offset()) ++shell;
        // Partial shell: bound it by the whole shell from above and skip it below.
        const auto S0 = static_cast<double>(shell);
        const Bracket up1 = power_tail(S0, -0.5, 2.0 * s - 1.0), up0 = power_tail(S0, -0.5, 2.0 * s);
        const Bracket lo1 = power_tail(S0 + 1.0, 2.0, 2.0 * s - 1.0), lo0 = power_tail(S0 + 1.0, 2.0, 2.0 * s);
        // 4S - 1 = 4(S - 1/2) + 1 = 4(S + 2) - 9
        const double hi = 4.0 * up1.hi + up0.hi;
        const double lo = std::max(0.0, std::pow(2.0, -s) * (4.0 * lo1.lo - 9.0 * lo0.hi));
        return {lo, hi};
    }
    [[nodiscard]] double finiteness() const { return 1.0; }
};

using TailRule = std::variant<PolynomialTail, GeometricTail, GaussTail, InducedParabolicTail, ComplexGaussTail>;

inline MapKind tail_map(const TailRule& t, std::int64_t k) {
    return std::visit([&](const auto& r) { return r.map(k); }, t);
}
inline std::int64_t tail_label(const TailRule& t, std::int64_t k) {
    return std::visit([&](const auto& r) { return r.label(k); }, t);
}
inline std::optional<std::int64_t> tail_ordinal(const TailRule& t, std::int64_t label) {
    return std::visit([&](const auto& r) { return r.ordinal_of(label); }, t);
}
inline Complex tail_accumulation(const TailRule& t) {
    return std::visit([](const auto& r) { return r.accumulation(); }, t);
}
/// Bracket for the sum over k' >= k of inf/sup over the seed domain of |S_k''|^s.
inline Bracket tail_weight(const TailRule& t, std::int64_t k, double s) {
    return std::visit([&](const auto& r) { return r.weight(k, s); }, t);
}
/// As tail_weight, with inf/sup taken over x in a subinterval of the seed only.
inline Bracket tail_weight_on(const TailRule& t, std::int64_t k, double s, const Interval& x) {
    return std::visit([&](const auto& r) -> Bracket {
        if constexpr (requires { r.weight_on(k, s, x); }) return r.weight_on(k, s, x);
        else return r.weight(k, s);
    }, t);
}
inline double tail_finiteness(const TailRule& t) {
    return std::visit([](const auto& r) { return r.finiteness(); }, t);
}
inline bool tail_is_planar(const TailRule& t) { return std::holds_alternative<ComplexGaussTail>(t); }
inline bool tail_is_similarity(const TailRule& t) {
    return std::holds_alternative<PolynomialTail>(t) || std::holds_alternative<GeometricTail>(t);
}

inline std::string describe(const TailRule& t) {
    return std::visit([](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, PolynomialTail>)
            return "polynomial(p=" + std::to_string(r.p) + ",t=" + std::to_string(r.t) + ",from " + std::to_string(r.first) + ")";
        else if constexpr (std::is_same_v<T, GeometricTail>)
            return "geometric(base=" + std::to_string(r.base) + ",from " + std::to_string(r.first) + ")";
        else if constexpr (std::is_same_v<T, GaussTail>)
            return std::string(r.via_one ? "gauss1o" : "gauss") + "(" + r.digits.describe() + ")";
        else if constexpr (std::is_same_v<T, InducedParabolicTail>)
            return "induced(q=" + std::to_string(r.q) + ",branches=" + std::to_string(r.inner.size()) + ")";
        else
            return std::string(r.via_one ? "cgauss1o" : "cgauss") + "(full)";
    }, t);
}

}  // namespace cifs
