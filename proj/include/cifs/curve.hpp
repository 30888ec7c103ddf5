#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cifs/error.hpp"

namespace cifs {

enum class Provenance { formula, lower_bound, upper_bound, estimate };

inline const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::formula: return "formula";
        case Provenance::lower_bound: return "lower_bound";
        case Provenance::upper_bound: return "upper_bound";
        case Provenance::estimate: return "estimate";
    }
    return "unknown";
}

/// theta -> value sampled on a strictly increasing grid in (0, 1).
struct SpectrumCurve {
    std::vector<double> thetas;
    std::vector<double> values;
    Provenance provenance = Provenance::formula;
    std::map<std::string, std::string> metadata;

    [[nodiscard]] std::size_t size() const { return thetas.size(); }

    /// Linear interpolation; constant extrapolation beyond the end nodes.
    [[nodiscard]] double at(double theta) const {
        if (thetas.empty()) throw DomainError("empty spectrum curve");
        if (theta <= thetas.front()) return values.front();
        if (theta >= thetas.back()) return values.back();
        const auto it = std::upper_bound(thetas.begin(), thetas.end(), theta);
        const auto j = static_cast<std::size_t>(it - thetas.begin());
        const double a = thetas[j - 1], b = thetas[j];
        const double w = (theta - a) / (b - a);
        return values[j - 1] + w * (values[j] - values[j - 1]);
    }

    /// The quasi-Assouad value, read from the last node.
    [[nodiscard]] double qa() const {
        if (values.empty()) throw DomainError("empty spectrum curve");
        return values.back();
    }
};

/// n uniform nodes on [a, b].
inline std::vector<double> uniform_grid(double a, double b, std::size_t n) {
    if (n < 2 || !(a < b)) throw ConfigError("grid needs at least two nodes on a non-empty range");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

/// Default theta grid: n uniform nodes on [1e-3, 1 - 1e-3].
inline std::vector<double> default_grid(std::size_t n = 1024) { return uniform_grid(1e-3, 1.0 - 1e-3, n); }

inline void check_grid(const std::vector<double>& g) {
    if (g.empty()) throw ConfigError("empty theta grid");
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!(g[i] > 0.0 && g[i] < 1.0)) throw ConfigError("theta grid must lie in (0,1)");
        if (i > 0 && !(g[i] > g[i - 1])) throw ConfigError("theta grid must be strictly increasing");
    }
}

inline SpectrumCurve sample_curve(const std::vector<double>& grid, const std::function<double(double)>& f,
                                  Provenance prov = Provenance::formula) {
    check_grid(grid);
    SpectrumCurve c;
    c.thetas = grid;
    c.provenance = prov;
    c.values.reserve(grid.size());
    for (double th : grid) c.values.push_back(f(th));
    return c;
}

/// Resample a curve onto another grid.
inline SpectrumCurve resample(const SpectrumCurve& c, const std::vector<double>& grid) {
    SpectrumCurve r = sample_curve(grid, [&](double th) { return c.at(th); }, c.provenance);
    r.metadata = c.metadata;
    return r;
}

/// Sorted union of the grids of several curves.
inline std::vector<double> union_grid(const std::vector<SpectrumCurve>& curves) {
    std::vector<double> g;
    for (const auto& c : curves) g.insert(g.end(), c.thetas.begin(), c.thetas.end());
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

}  // namespace cifs
