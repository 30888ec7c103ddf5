#pragma once

// Topological pressure and Hausdorff dimension.
//
// Similarity systems: psi_1(t) = sum c_i^t, bracketed by an explicit prefix
// plus integral bounds on the tail, and h is the root of psi_1 = 1.
//
// Conformal systems on [0, 1]: the pressure is the log of the spectral radius
// of the transfer operator L_t g(x) = sum |S_i'(x)|^t g(S_i x). For any
// positive g, inf Lg/g <= r(L_t) <= sup Lg/g. We take g from power iteration
// on a coarse piecewise-linear grid and bound Lg/g on every cell of a fine
// grid using monotonicity of |S_i'| and min/max of g over image intervals.
//
// Planar systems: brackets of (1/n) log psi_n from word enumeration, with the
// sup-sum (submultiplicative, bounds P from above) and inf-sum
// (supermultiplicative, bounds P from below).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>
#include <utility>

#include "cifs/digits.hpp"
#include "cifs/error.hpp"
#include "cifs/geometry.hpp"
#include "cifs/spec.hpp"
#include "cifs/tails.hpp"

namespace cifs {

struct PressureProfile {
    double t = 0.0;
    int depth = 1;
    double lower = 0.0;  ///< lower bound for (1/n) log psi_n and for P(t)
    double upper = 0.0;  ///< upper bound; +inf when the series diverges
};

enum class DimensionMethod { exact_similarity, bracketed_conformal };

inline const char* to_string(DimensionMethod m) {
    return m == DimensionMethod::exact_similarity ? "exact_similarity" : "bracketed_conformal";
}

struct DimensionResult {
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    DimensionMethod method = DimensionMethod::exact_similarity;
    bool converged = true;
    double finiteness = 0.0;
};

/// Infimum of t with finite pressure: 0 for finite systems, otherwise read off
/// the tail parametrisation.
inline double finiteness_parameter(const CifsSpec& spec) {
    double theta = 0.0;
    for (const auto& t : spec.tails) theta = std::max(theta, tail_finiteness(t));
    return theta;
}

inline bool is_similarity_spec(const CifsSpec& spec) {
    if (spec.ambient_dim != 1) return false;
    for (const auto& m : spec.explicit_maps)
        if (!std::holds_alternative<Similarity>(m.kind)) return false;
    for (const auto& t : spec.tails)
        if (!tail_is_similarity(t)) return false;
    return true;
}

namespace detail {

/// Largest t in [a, b] with pred(t) true, for a predicate that is true then
/// false; bisects down to adjacent doubles or the requested width.
inline double last_true(const std::function<bool(double)>& pred, double a, double b, double width = 0.0) {
    while (b - a > width) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        if (pred(m)) a = m;
        else b = m;
    }
    return 0.5 * (a + b);
}

/// For a true-then-false predicate: an interval [a, b] of width <= width with
/// pred(a) true (or a = lo) and pred(b) false (or b = hi), searched outward
/// from a guess.
inline std::pair<double, double> switch_bracket(const std::function<bool(double)>& pred, double guess, double lo,
                                                double hi, double width) {
    double a = lo, b = hi;
    double step = std::max(width, 1e-3);
    for (;;) {
        const double x = guess - step;
        if (x <= lo) break;
        if (pred(x)) {
            a = x;
            break;
        }
        b = std::min(b, x);
        step *= 2.0;
    }
    step = std::max(width, 1e-3);
    for (;;) {
        const double x = guess + step;
        if (x >= b) break;
        if (!pred(x)) {
            b = x;
            break;
        }
        a = std::max(a, x);
        step *= 2.0;
    }
    while (b - a > width) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        if (pred(m)) a = m;
        else b = m;
    }
    return {a, b};
}

inline std::int64_t default_prefix(const TailRule& t) {
    if (std::holds_alternative<GeometricTail>(t)) return 64;
    if (std::holds_alternative<PolynomialTail>(t)) return 4096;
    return 0;
}

}  // namespace detail

/// psi_1(t) for similarity systems: exact over the explicit maps and a tail
/// prefix, integral-bracketed beyond.
class SimilaritySum {
public:
    explicit SimilaritySum(const CifsSpec& spec) {
        if (!is_similarity_spec(spec)) throw ConfigError("not a similarity system");
        for (const auto& m : spec.explicit_maps) log_ratio_.push_back(std::log(std::get<Similarity>(m.kind).ratio));
        for (const auto& t : spec.tails) {
            const std::int64_t k = detail::default_prefix(t);
            for (std::int64_t j = 0; j < k; ++j)
                log_ratio_.push_back(std::log(std::get<Similarity>(tail_map(t, j).kind).ratio));
            tails_.emplace_back(t, k);
        }
    }

    [[nodiscard]] Bracket operator()(double t) const {
        double s = 0.0;
        for (double lc : log_ratio_) s += std::exp(t * lc);
        Bracket b{s, s};
        for (const auto& [rule, k] : tails_) b += tail_weight(rule, k, t);
        return b;
    }

private:
    std::vector<double> log_ratio_;
    std::vector<std::pair<TailRule, std::int64_t>> tails_;
};

struct TransferOptions {
    std::int64_t prefix = 1000;  ///< explicit tail terms per tail
    int fine = 8192;             ///< cells for the certified bound
    int coarse = 257;            ///< nodes of the trial eigenfunction
};

/// Certified bracket for the spectral radius of L_t on C([0, 1]).
class TransferBracket {
public:
    explicit TransferBracket(const CifsSpec& spec, TransferOptions opts = {}) : opts_(opts) {
        if (spec.ambient_dim != 1) throw ConfigError("transfer bracket needs a system on an interval");
        const Interval seed = std::get<Interval>(spec.seed);
        if (seed.lo != 0.0 || seed.hi != 1.0) throw ConfigError("transfer bracket expects the seed [0,1]");
        if ((opts_.fine % (opts_.coarse - 1)) != 0) throw ConfigError("fine grid must refine the coarse grid");
        std::vector<MapKind> terms(spec.explicit_maps.begin(), spec.explicit_maps.end());
        for (const auto& t : spec.tails) {
            std::int64_t k = opts_.prefix;
            if (const auto* ip = std::get_if<InducedParabolicTail>(&t)) k = ((k + ip->width() - 1) / ip->width()) * ip->width();
            for (std::int64_t j = 0; j < k; ++j) terms.push_back(tail_map(t, j));
            const MapKind first_rest = tail_map(t, k);
            const Interval rest_img = image(first_rest, Interval{0.0, 1.0});
            const double acc = tail_accumulation(t).real();
            tails_.push_back({t, k, Interval{std::min(acc, rest_img.lo), std::max(acc, rest_img.hi)}});
        }
        const int n = opts_.fine + 1;
        nterms_ = terms.size();
        y_.resize(nterms_ * static_cast<std::size_t>(n));
        logd_.resize(y_.size());
        for (std::size_t m = 0; m < nterms_; ++m) {
            const auto mob = as_moebius(terms[m]);
            for (int j = 0; j < n; ++j) {
                const double x = static_cast<double>(j) / opts_.fine;
                const std::size_t idx = m * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
                if (mob) {
                    y_[idx] = (*mob)(x).real();
                    logd_[idx] = std::log(mob->deriv_abs(x));
                } else {
                    y_[idx] = apply_map(terms[m], x);
                    logd_[idx] = std::log(deriv_abs(terms[m], x));
                }
            }
        }
    }

    /// Power-iterated approximate eigenfunction on the coarse grid.
    [[nodiscard]] std::vector<double> eigenfunction(double t, std::vector<double> g = {}, int iterations = 40,
                                                    double* growth = nullptr) const {
        const int G = opts_.coarse;
        if (g.size() != static_cast<std::size_t>(G)) g.assign(static_cast<std::size_t>(G), 1.0);
        const int stride = opts_.fine / (G - 1);
        const auto n = static_cast<std::size_t>(opts_.fine + 1);
        const auto Gu = static_cast<std::size_t>(G);
        // weights and image points on the coarse nodes, fixed for this t
        std::vector<double> w(nterms_ * Gu), y(nterms_ * Gu), tw(tails_.size() * Gu);
        for (std::size_t m = 0; m < nterms_; ++m)
            for (std::size_t i = 0; i < Gu; ++i) {
                const std::size_t idx = m * n + i * static_cast<std::size_t>(stride);
                w[m * Gu + i] = std::exp(t * logd_[idx]);
                y[m * Gu + i] = y_[idx];
            }
        for (std::size_t r = 0; r < tails_.size(); ++r)
            for (std::size_t i = 0; i < Gu; ++i) {
                const double x = static_cast<double>(i) / static_cast<double>(G - 1);
                tw[r * Gu + i] = tail_weight_on(tails_[r].rule, tails_[r].k, t, Interval{x, x}).mid();
            }
        std::vector<double> next(Gu);
        for (int it = 0; it < iterations; ++it) {
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t m = 0; m < nterms_; ++m)
                for (std::size_t i = 0; i < Gu; ++i) next[i] += w[m * Gu + i] * interp(g, y[m * Gu + i]);
            for (std::size_t r = 0; r < tails_.size(); ++r) {
                const double gv = interp(g, tails_[r].hull.mid());
                for (std::size_t i = 0; i < Gu; ++i) next[i] += tw[r * Gu + i] * gv;
            }
            const double mx = *std::max_element(next.begin(), next.end());
            const double gmx = *std::max_element(g.begin(), g.end());
            if (growth) *growth = mx / gmx;
            if (!(mx > 0.0) || !std::isfinite(mx)) break;
            for (std::size_t i = 0; i < Gu; ++i) g[i] = next[i] / mx;
        }
        return g;
    }

    /// Power-iteration estimate of r(L_t), not certified; updates g.
    [[nodiscard]] double radius_estimate(double t, std::vector<double>& g, int iterations = 25) const {
        double growth = 0.0;
        g = eigenfunction(t, g, iterations, &growth);
        return growth;
    }

    /// Certified enclosure of r(L_t) given a positive trial function g.
    [[nodiscard]] Bracket spectral_radius(double t, const std::vector<double>& g) const {
        for (const auto& tr : tails_)
            if (std::isinf(tail_weight(tr.rule, tr.k, t).hi)) return {kInf, kInf};
        const int n = opts_.fine + 1;
        const RangeTable table(g);
        std::vector<double> lo_acc(static_cast<std::size_t>(opts_.fine), 0.0), hi_acc(lo_acc.size(), 0.0);
        std::vector<double> dpow(static_cast<std::size_t>(n));
        for (std::size_t m = 0; m < nterms_; ++m) {
            const std::size_t base = m * static_cast<std::size_t>(n);
            for (int j = 0; j < n; ++j) dpow[static_cast<std::size_t>(j)] = std::exp(t * logd_[base + static_cast<std::size_t>(j)]);
            for (int j = 0; j < opts_.fine; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                const double d0 = dpow[ju], d1 = dpow[ju + 1];
                const Interval img = Interval::ordered(y_[base + ju], y_[base + ju + 1]);
                const auto [gmin, gmax] = table.range(img);
                lo_acc[ju] += std::min(d0, d1) * gmin;
                hi_acc[ju] += std::max(d0, d1) * gmax;
            }
        }
        double lam_lo = kInf, lam_hi = 0.0;
        for (int j = 0; j < opts_.fine; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            const Interval cell{static_cast<double>(j) / opts_.fine, static_cast<double>(j + 1) / opts_.fine};
            double lo = lo_acc[ju], hi = hi_acc[ju];
            for (const auto& tr : tails_) {
                const Bracket w = tail_weight_on(tr.rule, tr.k, t, cell);
                const auto [gmin, gmax] = table.range(tr.hull);
                lo += w.lo * gmin;
                hi += w.hi * gmax;
            }
            const auto [cmin, cmax] = table.range(cell);
            lam_lo = std::min(lam_lo, lo / cmax);
            lam_hi = std::max(lam_hi, hi / cmin);
        }
        return {lam_lo, lam_hi};
    }

private:
    struct TailRest {
        TailRule rule;
        std::int64_t k;
        Interval hull;
    };

    /// Min/max of a piecewise-linear function on uniform nodes over intervals.
    class RangeTable {
    public:
        explicit RangeTable(const std::vector<double>& g) : g_(g) {
            const std::size_t n = g.size();
            std::size_t levels = 1;
            while ((std::size_t{1} << levels) <= n) ++levels;
            mn_.assign(levels, g);
            mx_.assign(levels, g);
            for (std::size_t l = 1; l < levels; ++l) {
                const std::size_t span = std::size_t{1} << l;
                for (std::size_t i = 0; i + span <= n; ++i) {
                    mn_[l][i] = std::min(mn_[l - 1][i], mn_[l - 1][i + span / 2]);
                    mx_[l][i] = std::max(mx_[l - 1][i], mx_[l - 1][i + span / 2]);
                }
            }
        }

        [[nodiscard]] std::pair<double, double> range(const Interval& iv) const {
            const double a = std::clamp(iv.lo, 0.0, 1.0), b = std::clamp(iv.hi, 0.0, 1.0);
            const double ga = interp(g_, a), gb = interp(g_, b);
            double lo = std::min(ga, gb), hi = std::max(ga, gb);
            const double scale = static_cast<double>(g_.size() - 1);
            const auto i0 = static_cast<std::int64_t>(std::ceil(a * scale));
            const auto i1 = static_cast<std::int64_t>(std::floor(b * scale));
            if (i0 <= i1) {
                const auto len = static_cast<std::size_t>(i1 - i0 + 1);
                std::size_t l = 0;
                while ((std::size_t{2} << l) <= len) ++l;
                const auto s0 = static_cast<std::size_t>(i0);
                const std::size_t s1 = static_cast<std::size_t>(i1) + 1 - (std::size_t{1} << l);
                lo = std::min({lo, mn_[l][s0], mn_[l][s1]});
                hi = std::max({hi, mx_[l][s0], mx_[l][s1]});
            }
            return {lo, hi};
        }

    private:
        const std::vector<double>& g_;
        std::vector<std::vector<double>> mn_, mx_;
    };

    static double interp(const std::vector<double>& g, double x) {
        const double scale = static_cast<double>(g.size() - 1);
        const double u = std::clamp(x, 0.0, 1.0) * scale;
        const auto i = std::min(static_cast<std::size_t>(u), g.size() - 2);
        const double w = u - static_cast<double>(i);
        return g[i] * (1.0 - w) + g[i + 1] * w;
    }

    TransferOptions opts_;
    std::size_t nterms_ = 0;
    std::vector<double> y_, logd_;
    std::vector<TailRest> tails_;
};

namespace detail {

/// Sup-derivative sums over single letters, used for the planar tail bound.
struct LetterSums {
    std::vector<MapKind> maps;
    std::vector<TailRule> tails;
    std::vector<std::int64_t> prefix;
};

inline LetterSums letters_for_words(const CifsSpec& spec, std::size_t per_tail) {
    LetterSums ls;
    ls.maps = spec.explicit_maps;
    for (const auto& t : spec.tails) {
        for (std::size_t j = 0; j < per_tail; ++j) ls.maps.push_back(tail_map(t, static_cast<std::int64_t>(j)));
        ls.tails.push_back(t);
        ls.prefix.push_back(static_cast<std::int64_t>(per_tail));
    }
    return ls;
}

}  // namespace detail

/// Bracket of the pressure from words of length n. For similarity systems
/// this is exact up to the tail bracket (psi_n = psi_1^n). Otherwise the words
/// over a finite prefix of the alphabet are enumerated (at most `budget`) and
/// words using the rest are bounded via submultiplicativity.
inline PressureProfile psi(const CifsSpec& spec, double t, int n, std::size_t budget = 200000) {
    if (!(t > 0.0)) throw DomainError("psi needs t > 0");
    if (n < 1) throw DomainError("psi needs depth n >= 1");
    PressureProfile prof{t, n, 0.0, 0.0};
    if (is_similarity_spec(spec)) {
        const Bracket b = SimilaritySum(spec)(t);
        prof.lower = std::log(b.lo);
        prof.upper = std::isinf(b.hi) ? kInf : std::log(b.hi);
        return prof;
    }
    const std::size_t explicit_count = spec.explicit_maps.size();
    std::size_t per_tail = 0;
    if (!spec.tails.empty()) {
        const double target = std::pow(static_cast<double>(budget), 1.0 / n);
        const double avail = target - static_cast<double>(explicit_count);
        per_tail = static_cast<std::size_t>(std::max(1.0, std::floor(avail / static_cast<double>(spec.tails.size()))));
    }
    const detail::LetterSums ls = detail::letters_for_words(spec, per_tail);
    const std::size_t a = ls.maps.size();
    if (a == 0) throw ConfigError("system has no maps");
    // Single-letter sup sums, with and without the tail remainder.
    double sup1_finite = 0.0;
    for (const auto& m : ls.maps) {
        const Transform tr = Transform{}.then(m);
        sup1_finite += std::pow(tr.deriv_range(spec.seed).hi, t);
    }
    double sup1_rest = 0.0;
    for (std::size_t s = 0; s < ls.tails.size(); ++s) sup1_rest += tail_weight(ls.tails[s], ls.prefix[s], t).hi;
    if (std::isinf(sup1_rest)) {
        prof.upper = kInf;
    }
    // Enumerate prefix words depth-first.
    double sum_lo = 0.0, sum_hi = 0.0;
    std::size_t visited = 0;
    std::function<void(const Transform&, int)> rec = [&](const Transform& tr, int depth) {
        if (depth == n) {
            const Interval d = tr.deriv_range(spec.seed);
            sum_lo += std::pow(d.lo, t);
            sum_hi += std::pow(d.hi, t);
            if (++visited > 4 * budget) throw CapacityError("word enumeration budget exceeded");
            return;
        }
        for (const auto& m : ls.maps) rec(tr.then(m), depth + 1);
    };
    rec(Transform{}, 0);
    prof.lower = std::log(sum_lo) / n;
    if (!std::isinf(prof.upper)) {
        const double rest = std::pow(sup1_finite + sup1_rest, n) - std::pow(sup1_finite, n);
        prof.upper = std::log(sum_hi + std::max(0.0, rest)) / n;
    }
    return prof;
}

/// Hausdorff dimension as the zero of the pressure. `tol` is the requested
/// enclosure width; conformal brackets that cannot reach it are returned with
/// converged = false.
inline DimensionResult hausdorff_dimension(const CifsSpec& spec, double tol = 1e-9) {
    if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
    if (spec.explicit_maps.empty() && spec.tails.empty()) throw ConfigError("system has no maps");
    DimensionResult r;
    r.finiteness = finiteness_parameter(spec);
    const double top = static_cast<double>(spec.ambient_dim);
    const double bottom = r.finiteness;

    if (is_similarity_spec(spec)) {
        r.method = DimensionMethod::exact_similarity;
        const SimilaritySum sum(spec);
        r.lo = detail::last_true([&](double t) { return sum(t).lo > 1.0; }, bottom, top);
        r.hi = detail::last_true([&](double t) { return sum(t).hi > 1.0; }, bottom, top);
        r.hi = std::max(r.hi, r.lo);
        r.value = 0.5 * (r.lo + r.hi);
        r.converged = r.hi - r.lo <= tol;
        return r;
    }

    r.method = DimensionMethod::bracketed_conformal;
    if (spec.ambient_dim == 1) {
        const TransferBracket op(spec);
        // Locate h roughly with the power-iteration eigenvalue, then certify.
        std::vector<double> g;
        auto estimate = [&](double t) { return op.radius_estimate(t, g, 25); };
        double a = bottom, b = top;
        for (int i = 0; i < 24; ++i) {
            const double m = 0.5 * (a + b);
            if (estimate(m) > 1.0) a = m;
            else b = m;
        }
        const double guess = 0.5 * (a + b);
        g = op.eigenfunction(guess, g, 60);
        const double width = std::max(tol * 0.25, 1e-12);
        auto lower_says_above = [&](double t) { return op.spectral_radius(t, g).lo > 1.0; };
        auto upper_says_above = [&](double t) { return op.spectral_radius(t, g).hi > 1.0; };
        r.lo = detail::switch_bracket(lower_says_above, guess, bottom, top, width).first;
        r.hi = detail::switch_bracket(upper_says_above, guess, bottom, top, width).second;
        r.hi = std::max(r.hi, r.lo);
        r.value = std::clamp(guess, r.lo, r.hi);
        r.converged = r.hi - r.lo <= tol;
        return r;
    }

    // Planar: deepen n while enumeration stays affordable and keep the tightest bracket.
    r.lo = bottom;
    r.hi = top;
    for (int n = 1; n <= 3; ++n) {
        auto says_above_lo = [&](double t) { return psi(spec, t, n).lower > 0.0; };
        auto says_above_hi = [&](double t) { return psi(spec, t, n).upper > 0.0; };
        const double lo = detail::last_true(says_above_lo, bottom, top, 1e-4);
        const double hi = detail::last_true(says_above_hi, bottom, top, 1e-4);
        r.lo = std::max(r.lo, lo);
        r.hi = std::min(r.hi, std::max(hi, lo));
    }
    r.value = 0.5 * (r.lo + r.hi);
    r.converged = r.hi - r.lo <= tol;
    return r;
}

/// Sum of (i^(-th)) for i > n, evaluated as an explicit prefix plus the
/// midpoint of the integral bracket.
inline double polynomial_tail_sum(std::int64_t n, double s) {
    double acc = 0.0;
    const std::int64_t stop = n + 20000;
    for (std::int64_t i = n + 1; i <= stop; ++i) acc += std::pow(static_cast<double>(i), -s);
    return acc + power_tail(static_cast<double>(stop + 1), 0.0, s).mid();
}

/// Similarity system on [0, 1] with maps S_i(x) = c_i x + i^(-p), i >= 2,
/// whose limit set has Hausdorff dimension h: c_i = p i^(-t) for i > N and
/// c_j = lambda ((j-1)^(-p) - j^(-p)) for 2 <= j <= N, where N is minimal with
/// p^h sum_{i>N} i^(-th) < 1 and sum_{j<=N} ((j-1)^(-p) - j^(-p))^h >= 1, and
/// lambda is fixed by sum c_i^h = 1.
inline CifsSpec build_sharp_family(double p, double t, double h) {
    if (!(p > 0.0)) throw ConfigError("sharp family needs p > 0");
    if (!(t >= p + 1.0)) throw ConfigError("sharp family needs t >= p + 1 so that c_i = p i^(-t) fit in the gaps");
    if (!(h > 1.0 / t && h < 1.0)) throw ConfigError("sharp family needs h in (1/t, 1)");
    auto gap = [p](std::int64_t j) {
        return std::pow(static_cast<double>(j - 1), -p) - std::pow(static_cast<double>(j), -p);
    };
    const double ph = std::pow(p, h);
    const std::int64_t max_n = 50'000'000;
    double head = 0.0;
    std::int64_t n = 1;
    // Tail condition first: find the smallest N with the tail below one.
    double tail = ph * polynomial_tail_sum(1, t * h);
    while (true) {
        if (n >= 2) head += std::pow(gap(n), h);
        if (n >= 2 && tail < 1.0 && head >= 1.0) break;
        ++n;
        tail -= ph * std::pow(static_cast<double>(n), -t * h);
        if (n % 4096 == 0) tail = ph * polynomial_tail_sum(n, t * h);
        if (n > max_n) throw ConfigError("sharp family: no admissible N below " + std::to_string(max_n));
    }
    tail = ph * polynomial_tail_sum(n, t * h);
    const double lambda = std::pow((1.0 - tail) / head, 1.0 / h);
    CifsSpec spec;
    spec.name = "sharp(p=" + std::to_string(p) + ",t=" + std::to_string(t) + ",h=" + std::to_string(h) + ")";
    for (std::int64_t j = 2; j <= n; ++j) {
        spec.explicit_maps.push_back(Similarity{lambda * gap(j), std::pow(static_cast<double>(j), -p)});
        spec.explicit_labels.push_back(j);
    }
    spec.tails.push_back(PolynomialTail{p, t, p, n + 1});
    return spec;
}

}  // namespace cifs
