#pragma once

// Infinite sets of continued-fraction digits, enumerated in increasing order,
// with certified bounds on their power sums.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cifs/error.hpp"
#include "cifs/geometry.hpp"

namespace cifs {

namespace detail {

/// Bracket for sum_{n >= k} f(n) with f positive, decreasing and convex:
/// midpoint and trapezoid comparison with the integral F(a) = int_a^inf f.
template <typename F, typename Integral>
Bracket convex_tail(double k, F f, Integral integral) {
    return {integral(k) + 0.5 * f(k), integral(k - 0.5)};
}

/// int_a^inf (x + y)^(-s) dx for s > 1.
inline double power_integral(double a, double y, double s) {
    return std::pow(a + y, 1.0 - s) / (s - 1.0);
}

}  // namespace detail

/// Bracket for sum_{n >= k} (n + y)^(-s); infinite when s <= 1.
inline Bracket power_tail(double k, double y, double s) {
    if (s <= 1.0) return {kInf, kInf};
    return detail::convex_tail(
        k, [&](double x) { return std::pow(x + y, -s); },
        [&](double a) { return detail::power_integral(a, y, s); });
}

/// Digits floor(n^p) for n >= first.
struct SpacedDigits {
    double p = 2.0;
    std::int64_t first = 2;
};

/// Digits in the blocks [2^k, 2^k + floor(2^(k alpha))] for k >= first_block.
struct ClusteredDigits {
    double alpha = 0.5;
    std::int64_t first_block = 1;
};

/// Every integer >= min.
struct FullDigits {
    std::int64_t min = 2;
};

/// An infinite increasing digit sequence.
class DigitSet {
public:
    using Kind = std::variant<SpacedDigits, ClusteredDigits, FullDigits>;

    DigitSet() : kind_(FullDigits{}) {}
    explicit DigitSet(Kind k) : kind_(k) {
        std::visit([](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, SpacedDigits>) {
                if (!(d.p >= 1.0)) throw ConfigError("spaced digits need p >= 1");
                if (d.first < 1) throw ConfigError("spaced digits need first index >= 1");
            } else if constexpr (std::is_same_v<T, ClusteredDigits>) {
                if (!(d.alpha > 0.0 && d.alpha < 1.0)) throw ConfigError("clustered digits need alpha in (0,1)");
                if (d.first_block < 1) throw ConfigError("clustered digits need first block >= 1");
            } else {
                if (d.min < 1) throw ConfigError("full digit set needs min >= 1");
            }
        }, kind_);
    }

    [[nodiscard]] const Kind& kind() const { return kind_; }

    /// k-th digit, k >= 0.
    [[nodiscard]] std::int64_t at(std::int64_t k) const {
        return std::visit([&](const auto& d) -> std::int64_t {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, SpacedDigits>) {
                return spaced_digit(d, d.first + k);
            } else if constexpr (std::is_same_v<T, ClusteredDigits>) {
                std::int64_t block = d.first_block;
                for (;;) {
                    const std::int64_t size = block_size(d, block);
                    if (k < size) return (std::int64_t{1} << block) + k;
                    k -= size;
                    ++block;
                }
            } else {
                return d.min + k;
            }
        }, kind_);
    }

    /// Position of the digit in the enumeration, if it belongs to the set.
    [[nodiscard]] std::optional<std::int64_t> index_of(std::int64_t digit) const {
        return std::visit([&](const auto& d) -> std::optional<std::int64_t> {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, SpacedDigits>) {
                auto n = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(digit), 1.0 / d.p)));
                for (std::int64_t m = std::max<std::int64_t>(d.first, n - 1); m <= n + 2; ++m)
                    if (spaced_digit(d, m) == digit) return m - d.first;
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, ClusteredDigits>) {
                std::int64_t offset = 0;
                for (std::int64_t block = d.first_block; block < 62; ++block) {
                    const std::int64_t lo = std::int64_t{1} << block;
                    const std::int64_t size = block_size(d, block);
                    if (digit < lo) return std::nullopt;
                    if (digit < lo + size) return offset + (digit - lo);
                    offset += size;
                }
                return std::nullopt;
            } else {
                if (digit < d.min) return std::nullopt;
                return digit - d.min;
            }
        }, kind_);
    }

    /// Certified bracket for sum over digits b = at(k), k >= k0, of (b + y)^(-s).
    [[nodiscard]] Bracket power_sum_from(std::int64_t k0, double y, double s) const {
        return std::visit([&](const auto& d) -> Bracket {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, SpacedDigits>) {
                // n^p - 1 < floor(n^p) <= n^p, so for n >= n0 the terms lie
                // within constant factors of n^(-ps).
                const double n0 = static_cast<double>(d.first + k0);
                const Bracket base = power_tail(n0, 0.0, d.p * s);
                if (std::isinf(base.hi)) return base;
                const double n0p = std::pow(n0, d.p);
                const double up = 1.0 + y / n0p;
                const double down = std::max(1e-300, 1.0 - std::max(0.0, 1.0 - y) / n0p);
                return {base.lo * std::pow(up, -s), base.hi * std::pow(down, -s)};
            } else if constexpr (std::is_same_v<T, ClusteredDigits>) {
                return clustered_sum(d, k0, y, s);
            } else {
                return power_tail(static_cast<double>(d.min + k0), y, s);
            }
        }, kind_);
    }

    /// Exponent of convergence of sum b^(-s) over the set, i.e. the infimum of s with finite sum.
    [[nodiscard]] double convergence_exponent() const {
        return std::visit([](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, SpacedDigits>) return 1.0 / d.p;
            else if constexpr (std::is_same_v<T, ClusteredDigits>) return d.alpha;
            else return 1.0;
        }, kind_);
    }

    [[nodiscard]] std::string describe() const {
        return std::visit([](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, SpacedDigits>) return "spaced(p=" + std::to_string(d.p) + ")";
            else if constexpr (std::is_same_v<T, ClusteredDigits>) return "clustered(alpha=" + std::to_string(d.alpha) + ")";
            else return "full(min=" + std::to_string(d.min) + ")";
        }, kind_);
    }

private:
    static std::int64_t spaced_digit(const SpacedDigits& d, std::int64_t n) {
        auto v = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(n), d.p)));
        // pow can land a hair below an exact integer power
        if (static_cast<double>(v + 1) <= std::pow(static_cast<double>(n), d.p) * (1.0 + 1e-15)) ++v;
        return v;
    }

    static std::int64_t block_size(const ClusteredDigits& d, std::int64_t block) {
        const double width = std::floor(std::exp2(static_cast<double>(block) * d.alpha) + 1e-12);
        // keep blocks disjoint: 2^k + 2^(k alpha) < 2^(k+1)
        return std::min<std::int64_t>(static_cast<std::int64_t>(width), (std::int64_t{1} << block) - 1) + 1;
    }

    static Bracket clustered_sum(const ClusteredDigits& d, std::int64_t k0, double y, double s) {
        if (s <= d.alpha) return {kInf, kInf};
        Bracket total{0.0, 0.0};
        std::int64_t offset = 0;
        std::int64_t block = d.first_block;
        // Exact sums over blocks up to a cap, then a geometric bound.
        for (; block < 40; ++block) {
            const std::int64_t size = block_size(d, block);
            const std::int64_t lo_digit = std::int64_t{1} << block;
            const std::int64_t from = std::max<std::int64_t>(0, k0 - offset);
            if (from < size) {
                const double a = static_cast<double>(lo_digit + from) + y;
                const double count = static_cast<double>(size - from);
                if (count <= 64) {
                    double acc = 0.0;
                    for (std::int64_t j = from; j < size; ++j) acc += std::pow(static_cast<double>(lo_digit + j) + y, -s);
                    total += Bracket{acc, acc};
                } else {
                    total += Bracket{count * std::pow(a + count - 1.0, -s), count * std::pow(a, -s)};
                }
            }
            offset += size;
            if (offset > k0 && total.hi > 0 && std::pow(2.0, static_cast<double>(block) * (d.alpha - s)) < 1e-18 * total.hi) {
                ++block;
                break;
            }
        }
        // Remaining blocks k >= block: size <= 2^(k alpha) + 1, digits >= 2^k.
        const double r = std::pow(2.0, d.alpha - s), r0 = std::pow(2.0, -s);
        const double kk = static_cast<double>(block);
        const double rest = std::pow(2.0, kk * (d.alpha - s)) / (1.0 - r) + std::pow(2.0, -kk * s) / (1.0 - r0);
        total.hi += rest;
        return total;
    }

    Kind kind_;
};

}  // namespace cifs
