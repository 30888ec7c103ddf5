#pragma once

// Covering-number estimators for box dimension, Assouad spectrum, Assouad
// dimension and lower spectrum of point clouds.
//
// Scale pairs are tied by R = r^theta in the units of the seed domain. At a
// finite resolution delta this caps R/r at (4 delta)^(theta - 1), which is
// small for theta near 1, so the ladder is indexed by the integer ratio
// k = R/r rather than by R: r_k = k^(-1/(1-theta)), R_k = k r_k. Integer
// ratios keep the count of a locally full piece at exactly k, so quantisation
// does not bias the exponent log N / log k. The reported exponent is the one
// at the finest admissible rung. The least-squares slope, the sup over rungs
// and every rung's exponent are kept in the diagnostics.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "cifs/cloud.hpp"
#include "cifs/curve.hpp"
#include "cifs/error.hpp"
#include "cifs/geometry.hpp"

namespace cifs {

/// Minimal number of closed intervals of length 2r covering the cloud points
/// in [center - R, center + R] (greedy sweep, optimal on the line).
inline std::size_t cover_count_1d(const PointCloud& cloud, double center, double R, double r) {
    if (cloud.ambient_dim != 1) throw DomainError("cover_count_1d needs a 1-D cloud");
    if (!(r > 0.0) || !(R >= 0.0)) throw DomainError("cover_count_1d needs r > 0 and R >= 0");
    const auto& xs = cloud.coords;
    auto it = std::lower_bound(xs.begin(), xs.end(), center - R);
    const auto end = std::upper_bound(it, xs.end(), center + R);
    std::size_t n = 0;
    while (it != end) {
        ++n;
        it = std::upper_bound(it, end, *it + 2.0 * r);
    }
    return n;
}

/// Number of occupied cells of side 2r (anchored at the origin) among the
/// cloud points inside the disc of radius R about the center. Side 2r matches
/// the intervals of length 2r counted in one dimension.
inline std::size_t cover_count_2d(const PointCloud& cloud, Complex center, double R, double r) {
    if (cloud.ambient_dim != 2) throw DomainError("cover_count_2d needs a 2-D cloud");
    if (!(r > 0.0) || !(R >= 0.0)) throw DomainError("cover_count_2d needs r > 0 and R >= 0");
    std::set<std::pair<std::int64_t, std::int64_t>> cells;
    // points are sorted by (x, y)
    const auto& c = cloud.coords;
    const std::size_t n = cloud.size();
    std::size_t lo = 0, hi = n;
    {
        std::size_t a = 0, b = n;
        while (a < b) {
            const std::size_t m = (a + b) / 2;
            if (c[2 * m] < center.real() - R) a = m + 1;
            else b = m;
        }
        lo = a;
        a = lo;
        b = n;
        while (a < b) {
            const std::size_t m = (a + b) / 2;
            if (c[2 * m] <= center.real() + R) a = m + 1;
            else b = m;
        }
        hi = a;
    }
    for (std::size_t i = lo; i < hi; ++i) {
        const Complex z(c[2 * i], c[2 * i + 1]);
        if (std::abs(z - center) > R) continue;
        cells.emplace(static_cast<std::int64_t>(std::floor(z.real() / (2.0 * r))),
                      static_cast<std::int64_t>(std::floor(z.imag() / (2.0 * r))));
    }
    return cells.size();
}

inline std::size_t cover_count(const PointCloud& cloud, Complex center, double R, double r) {
    return cloud.ambient_dim == 1 ? cover_count_1d(cloud, center.real(), R, r) : cover_count_2d(cloud, center, R, r);
}

/// Greedy covering count of the whole cloud at scale r.
inline std::size_t global_count(const PointCloud& cloud, double r) {
    if (cloud.empty()) return 0;
    if (cloud.ambient_dim == 1) {
        const double lo = cloud.coords.front(), hi = cloud.coords.back();
        return cover_count_1d(cloud, 0.5 * (lo + hi), 0.5 * (hi - lo) + r, r);
    }
    std::unordered_set<std::uint64_t> cells;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto a = static_cast<std::int64_t>(std::floor(cloud.coords[2 * i] / (2.0 * r)));
        const auto b = static_cast<std::int64_t>(std::floor(cloud.coords[2 * i + 1] / (2.0 * r)));
        cells.insert((static_cast<std::uint64_t>(a) << 32) ^ static_cast<std::uint64_t>(b & 0xffffffff));
    }
    return cells.size();
}

/// Centers forming an (R/2)-net of the cloud.
inline std::vector<Complex> center_net(const PointCloud& cloud, double R) {
    std::vector<Complex> out;
    const double s = 0.5 * R;
    if (cloud.ambient_dim == 1) {
        double last = -kInf;
        for (double x : cloud.coords) {
            if (x - last > s) {
                out.emplace_back(x, 0.0);
                last = x;
            }
        }
        return out;
    }
    // grid-cell representatives of side s / sqrt(2)
    const double side = s / std::sqrt(2.0);
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Complex z = cloud.z(i);
        const auto key = std::make_pair(static_cast<std::int64_t>(std::floor(z.real() / side)),
                                        static_cast<std::int64_t>(std::floor(z.imag() / side)));
        if (seen.insert(key).second) out.push_back(z);
    }
    return out;
}

struct ScalePolicy {
    /// Admissibility guard: r >= guard * delta.
    double guard = 4.0;
    /// Smallest ratio R/r used in fits.
    double min_ratio = 2.0;
    /// Geometric step between consecutive ratios.
    double ratio_step = 1.25;
    /// Minimum number of admissible rungs for a valid node.
    std::size_t min_rungs = 3;
    /// Largest R considered, in seed units.
    double max_R = 1.0;
    /// Length unit L of the scale relation R / L = (r / L)^theta.
    double unit = 1.0;
    /// Worker threads for spectrum curves; theta nodes are independent, so the
    /// result does not depend on this.
    unsigned threads = 1;
};

struct ScaleSample {
    double R = 0.0;
    double r = 0.0;
    std::size_t count = 0;
    double exponent = 0.0;
    Complex center{};
};

struct ThetaDiagnostics {
    double theta = 0.0;
    bool valid = false;
    std::vector<ScaleSample> samples;
    double value = 0.0;       ///< exponent at the finest admissible rung
    double slope = 0.0;       ///< least-squares slope of log N against log(R/r)
    double sup_exponent = 0.0;  ///< max over rungs of log N / log(R/r)
};

struct EstimateReport {
    SpectrumCurve curve;
    std::vector<ThetaDiagnostics> diagnostics;
    double guard_ratio = 0.0;  ///< smallest r / delta over all queries

    [[nodiscard]] bool all_valid() const {
        return std::all_of(diagnostics.begin(), diagnostics.end(), [](const auto& d) { return d.valid; });
    }
};

namespace detail {

/// Ratios k = R/r for one theta: integers from min_ratio upwards in
/// geometric steps, capped by the resolution guard and by R <= max_R.
inline std::vector<std::int64_t> ratio_ladder(double theta, double delta, const ScalePolicy& pol) {
    const double rmin = pol.guard * delta;
    // r = L k^(-1/(1-theta)) >= rmin  <=>  k <= (rmin / L)^(-(1-theta)); R = k r <= max_R adds
    // k^(-theta/(1-theta)) <= max_R / L.
    double kmax = std::pow(rmin / pol.unit, -(1.0 - theta));
    if (pol.max_R < pol.unit) kmax = std::min(kmax, std::pow(pol.max_R / pol.unit, -(1.0 - theta) / theta));
    std::vector<std::int64_t> ks;
    for (double k = std::min(kmax, 1e15); k >= pol.min_ratio; k /= pol.ratio_step) {
        const auto ki = static_cast<std::int64_t>(std::floor(k * (1.0 + 1e-12)));
        if (ki < 2 || (!ks.empty() && ks.back() == ki)) continue;
        ks.push_back(ki);
    }
    std::reverse(ks.begin(), ks.end());
    return ks;
}

inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    if (den <= 0.0) return 0.0;
    return (n * sxy - sx * sy) / den;
}

enum class Extremum { sup, inf };

inline ThetaDiagnostics theta_node(const PointCloud& cloud, double theta, const ScalePolicy& pol, Extremum ext,
                                   double& guard_ratio) {
    ThetaDiagnostics d;
    d.theta = theta;
    const auto ks = ratio_ladder(theta, cloud.delta, pol);
    std::vector<double> lx, ly;
    for (const auto k : ks) {
        const double r = pol.unit * std::pow(static_cast<double>(k), -1.0 / (1.0 - theta));
        const double R = static_cast<double>(k) * r;
        ScaleSample s{R, r, 0, 0.0, {}};
        bool first = true;
        for (const auto& c : center_net(cloud, R)) {
            const std::size_t n = cover_count(cloud, c, R, r);
            const bool better = ext == Extremum::sup ? n > s.count : n < s.count;
            if (first || better) {
                s.count = n;
                s.center = c;
                first = false;
            }
        }
        if (s.count == 0) continue;
        s.exponent = std::log(static_cast<double>(s.count)) / std::log(static_cast<double>(k));
        guard_ratio = std::min(guard_ratio, r / cloud.delta);
        lx.push_back(std::log(static_cast<double>(k)));
        ly.push_back(std::log(static_cast<double>(s.count)));
        d.samples.push_back(s);
    }
    d.valid = d.samples.size() >= pol.min_rungs;
    if (!d.samples.empty()) {
        d.value = d.samples.back().exponent;
        for (const auto& s : d.samples) d.sup_exponent = std::max(d.sup_exponent, s.exponent);
    }
    if (d.samples.size() >= 2) d.slope = std::clamp(slope(lx, ly), 0.0, static_cast<double>(cloud.ambient_dim));
    else if (d.samples.size() == 1) d.slope = d.samples.front().exponent;
    return d;
}

inline EstimateReport spectrum_report(const PointCloud& cloud, const std::vector<double>& grid, const ScalePolicy& pol,
                                      Extremum ext) {
    check_grid(grid);
    if (cloud.empty()) throw DomainError("empty point cloud");
    if (!(cloud.delta > 0.0)) throw DomainError("spectrum estimates need a cloud with positive resolution");
    EstimateReport rep;
    rep.curve.thetas = grid;
    rep.curve.provenance = Provenance::estimate;
    rep.curve.metadata["source"] = cloud.source;
    rep.curve.metadata["semantics"] = ext == Extremum::sup ? "assouad_spectrum" : "lower_spectrum";
    rep.guard_ratio = kInf;
    rep.diagnostics.resize(grid.size());
    std::vector<double> guards(grid.size(), kInf);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(grid.size());
    const auto work = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            try {
                rep.diagnostics[i] = theta_node(cloud, grid[i], pol, ext, guards[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n_threads = std::clamp<unsigned>(pol.threads, 1, static_cast<unsigned>(std::max<std::size_t>(grid.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& d = rep.diagnostics[i];
        rep.curve.values.push_back(d.valid ? d.value : std::numeric_limits<double>::quiet_NaN());
        rep.guard_ratio = std::min(rep.guard_ratio, guards[i]);
    }
    return rep;
}

}  // namespace detail

/// Assouad spectrum estimate; nodes with fewer than policy.min_rungs
/// admissible scales are reported as invalid (value NaN).
inline EstimateReport assouad_spectrum_estimate(const PointCloud& cloud, const std::vector<double>& grid,
                                                const ScalePolicy& pol = {}) {
    return detail::spectrum_report(cloud, grid, pol, detail::Extremum::sup);
}

/// Lower spectrum estimate: infimum over centers instead of supremum.
inline EstimateReport lower_spectrum_estimate(const PointCloud& cloud, const std::vector<double>& grid,
                                              const ScalePolicy& pol = {}) {
    return detail::spectrum_report(cloud, grid, pol, detail::Extremum::inf);
}

struct BoxEstimate {
    double value = 0.0;
    std::vector<double> scales;
    std::vector<std::size_t> counts;
};

/// Least-squares slope of log N_r against -log r over a dyadic ladder from
/// r = guard * delta up to a quarter of the cloud's extent.
inline BoxEstimate box_dimension_estimate(const PointCloud& cloud, const ScalePolicy& pol = {}) {
    BoxEstimate b;
    if (cloud.empty()) throw DomainError("empty point cloud");
    double extent = 0.0;
    if (cloud.ambient_dim == 1) extent = cloud.coords.back() - cloud.coords.front();
    else {
        double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            x0 = std::min(x0, cloud.coords[2 * i]);
            x1 = std::max(x1, cloud.coords[2 * i]);
            y0 = std::min(y0, cloud.coords[2 * i + 1]);
            y1 = std::max(y1, cloud.coords[2 * i + 1]);
        }
        extent = std::max(x1 - x0, y1 - y0);
    }
    if (extent <= 0.0) return b;
    const double rmin = std::max(pol.guard * cloud.delta, extent * 1e-12);
    std::vector<double> lx, ly;
    for (double r = extent / 4.0; r >= rmin; r /= 2.0) {
        const std::size_t n = global_count(cloud, r);
        b.scales.push_back(r);
        b.counts.push_back(n);
        lx.push_back(-std::log(r));
        ly.push_back(std::log(static_cast<double>(n)));
    }
    if (lx.size() >= 2) b.value = std::max(0.0, detail::slope(lx, ly));
    return b;
}

struct AssouadEstimate {
    double value = 0.0;
    double R = 0.0;
    double r = 0.0;
    Complex center{};
};

/// Sup over admissible pairs with R/r >= 16 of log N / log(R/r), maximised
/// over centers. Upper-biased by design.
inline AssouadEstimate assouad_dimension_estimate(const PointCloud& cloud, const ScalePolicy& pol = {}) {
    AssouadEstimate best;
    if (cloud.empty()) throw DomainError("empty point cloud");
    const double rmin = std::max(pol.guard * cloud.delta, 1e-300);
    for (double R = pol.max_R; R >= 16.0 * rmin; R /= 2.0) {
        const auto centers = center_net(cloud, R);
        for (double ratio = 16.0; R / ratio >= rmin; ratio *= 2.0) {
            const double r = R / ratio;
            for (const auto& c : centers) {
                const std::size_t n = cover_count(cloud, c, R, r);
                const double e = n > 0 ? std::log(static_cast<double>(n)) / std::log(ratio) : 0.0;
                if (e > best.value) best = {e, R, r, c};
            }
        }
    }
    return best;
}

}  // namespace cifs
