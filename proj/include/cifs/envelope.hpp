#pragma once

// General bounds on the spectrum of a limit set in terms of its fixed-point
// set, and curve diagnostics: phase transition, kinks, three-parameter fit.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "cifs/curve.hpp"
#include "cifs/error.hpp"
#include "cifs/formulas.hpp"
#include "cifs/geometry.hpp"

namespace cifs {

/// f(theta, phi) = ((1/phi - 1) dim^phi P + (1/theta - 1/phi) ubox_F) / (1/theta - 1),
/// with dim^phi P supplied directly.
inline double f_from(double theta, double phi, double dim_p, double ubox_f) {
    if (!(theta > 0.0 && theta < 1.0)) throw DomainError("f needs theta in (0,1)");
    if (phi < theta || phi > 1.0) throw DomainError("f needs theta <= phi <= 1");
    const double a = 1.0 / phi - 1.0, b = 1.0 / theta - 1.0 / phi;
    return (a * dim_p + b * ubox_f) / (1.0 / theta - 1.0);
}

/// f with P's spectrum read from a sampled curve (qa at phi = 1).
inline double f_value(double theta, double phi, const SpectrumCurve& spectrum_p, double ubox_f) {
    if (phi < theta || phi > 1.0) throw DomainError("f needs theta <= phi <= 1");
    return f_from(theta, phi, phi >= 1.0 ? spectrum_p.qa() : spectrum_p.at(phi), ubox_f);
}

namespace detail {

/// Golden-section maximisation of a continuous g on [a, b].
template <typename G>
double golden_max(const G& g, double a, double b, double tol, double& best_x) {
    const double inv = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv * (b - a), d = a + inv * (b - a);
    double gc = g(c), gd = g(d);
    while (b - a > tol) {
        if (gc >= gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - inv * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv * (b - a);
            gd = g(d);
        }
    }
    best_x = gc >= gd ? c : d;
    return std::max(gc, gd);
}

}  // namespace detail

/// max over phi in [theta, 1] of f(theta, phi) for P's spectrum given as a
/// callable on [0, 1]: 512-point phi grid, then golden-section on the bracket
/// around the best node.
template <typename P>
double upper_envelope_at(double theta, const P& dim_p, double ubox_f, std::size_t nodes = 512) {
    const auto g = [&](double phi) { return f_from(theta, phi, dim_p(phi), ubox_f); };
    double best = -kInf;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < nodes; ++i) {
        const double phi = i + 1 == nodes ? 1.0 : theta + (1.0 - theta) * static_cast<double>(i) / static_cast<double>(nodes - 1);
        const double v = g(phi);
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    const double step = (1.0 - theta) / static_cast<double>(nodes - 1);
    const double a = std::max(theta, theta + step * (static_cast<double>(arg) - 1.0));
    const double b = std::min(1.0, theta + step * (static_cast<double>(arg) + 1.0));
    double x = 0.0;
    // the maximiser often sits on a kink of P, where f is only Lipschitz
    const double polished = detail::golden_max(g, a, b, 1e-13, x);
    return std::max(best, polished);
}

inline double upper_envelope_at(double theta, const SpectrumCurve& spectrum_p, double ubox_f, std::size_t nodes = 512) {
    return upper_envelope_at(
        theta, [&](double phi) { return phi >= 1.0 ? spectrum_p.qa() : spectrum_p.at(phi); }, ubox_f, nodes);
}

inline SpectrumCurve upper_envelope(const std::vector<double>& grid, const SpectrumCurve& spectrum_p, double ubox_f) {
    SpectrumCurve c = sample_curve(grid, [&](double th) { return upper_envelope_at(th, spectrum_p, ubox_f); },
                                   Provenance::upper_bound);
    c.metadata["bound"] = "upper_envelope";
    return c;
}

/// max{h, dim^theta P}
inline SpectrumCurve lower_bound_curve(const std::vector<double>& grid, const SpectrumCurve& spectrum_p, double h) {
    SpectrumCurve c = sample_curve(grid, [&](double th) { return std::max(h, spectrum_p.at(th)); }, Provenance::lower_bound);
    c.metadata["bound"] = "lower_bound";
    return c;
}

struct BoundEnvelope {
    SpectrumCurve lower;
    SpectrumCurve upper;
};

inline BoundEnvelope bound_envelope(const std::vector<double>& grid, const SpectrumCurve& spectrum_p, double h,
                                    double ubox_f) {
    return {lower_bound_curve(grid, spectrum_p, h), upper_envelope(grid, spectrum_p, ubox_f)};
}

/// Envelope of a named family, evaluating P's closed-form spectrum exactly.
inline BoundEnvelope family_envelope(const FamilyFormula& f, const std::vector<double>& grid) {
    const auto& p = f.fixed_point_spectrum;
    BoundEnvelope e;
    e.lower = sample_curve(grid, [&](double th) { return std::max(f.h, p(th)); }, Provenance::lower_bound);
    e.lower.metadata["bound"] = "lower_bound";
    e.upper = sample_curve(grid, [&](double th) { return upper_envelope_at(th, p, f.ubox); }, Provenance::upper_bound);
    e.upper.metadata["bound"] = "upper_envelope";
    return e;
}

struct PhaseTransition {
    double theta = 0.0;
    bool ambiguous = false;
};

/// Smallest theta where the curve reaches its last-node value within tol.
/// The crossing is refined by extending the line through the two nodes
/// before it; a later drop below the level flags ambiguity.
inline PhaseTransition phase_transition_info(const SpectrumCurve& c, double tol = 1e-9) {
    if (c.size() == 0) throw DomainError("empty spectrum curve");
    const double qa = c.qa();
    const double level = qa - tol;
    std::size_t i = 0;
    while (i < c.size() && !(c.values[i] >= level)) ++i;
    PhaseTransition pt;
    for (std::size_t j = i; j < c.size(); ++j)
        if (c.values[j] < level) pt.ambiguous = true;
    if (i == 0) return pt;
    const double t0 = c.thetas[i - 1], v0 = c.values[i - 1];
    double slope = (c.values[i] - v0) / (c.thetas[i] - t0);
    if (i >= 2) {
        const double s = (v0 - c.values[i - 2]) / (t0 - c.thetas[i - 2]);
        if (s > 0.0) slope = s;
    }
    double th = slope > 0.0 ? t0 + (qa - v0) / slope : c.thetas[i];
    pt.theta = std::clamp(th, t0, c.thetas[i]);
    return pt;
}

inline double phase_transition(const SpectrumCurve& c, double tol = 1e-9) { return phase_transition_info(c, tol).theta; }

struct Kink {
    double theta = 0.0;
    double slope_jump = 0.0;
};

/// Slope discontinuities of a sampled curve. A kink is a run of nodes whose
/// slope change exceeds min_jump and dominates the slope changes two nodes
/// outside the run; its position is the intersection of the secant lines on
/// either side.
inline std::vector<Kink> detect_kinks(const SpectrumCurve& c, double min_jump = 0.05, double dominance = 4.0) {
    std::vector<Kink> out;
    const std::size_t n = c.size();
    if (n < 6) return out;
    std::vector<double> s(n - 1), ds(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) s[i] = (c.values[i + 1] - c.values[i]) / (c.thetas[i + 1] - c.thetas[i]);
    for (std::size_t i = 1; i + 1 < n; ++i) ds[i] = s[i] - s[i - 1];
    std::size_t i = 1;
    while (i + 1 < n) {
        if (std::abs(ds[i]) <= min_jump) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 2 < n && std::abs(ds[j + 1]) > min_jump) ++j;
        // run [i, j]: slopes s[i-1] (left) and s[j] (right) are clean
        const double outside = std::max(i >= 3 ? std::abs(ds[i - 2]) : 0.0, j + 3 < n ? std::abs(ds[j + 2]) : 0.0);
        double jump = 0.0;
        for (std::size_t k = i; k <= j; ++k) jump += ds[k];
        if (std::abs(jump) > dominance * outside && std::abs(jump) > min_jump) {
            const double xl = c.thetas[i - 1], yl = c.values[i - 1], sl = s[i - 1];
            const double xr = c.thetas[j + 1], yr = c.values[j + 1], sr = s[j];
            double th = std::abs(sl - sr) > 0.0 ? (yr - yl + sl * xl - sr * xr) / (sl - sr) : 0.5 * (xl + xr);
            th = std::clamp(th, xl, xr);
            out.push_back({th, jump});
        }
        i = j + 1;
    }
    return out;
}

struct ThreeParamFit {
    bool success = false;
    ThreeParamForm form;
    double max_deviation = 0.0;
};

/// Fit a three-parameter form: qa from the last node, rho from the phase
/// transition, ubox by least squares on theta < rho. Success iff the fitted
/// form reproduces the curve within tol at every node.
inline ThreeParamFit fit_three_param(const SpectrumCurve& c, double tol = 1e-3) {
    ThreeParamFit fit;
    const double qa = c.qa();
    const double rho = phase_transition(c, 1e-9);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < c.size() && rho > 0.0; ++i) {
        const double th = c.thetas[i];
        if (th >= rho) break;
        const double g = (1.0 - rho) * th / ((1.0 - th) * rho);
        num += (c.values[i] - qa * g) * (1.0 - g);
        den += (1.0 - g) * (1.0 - g);
    }
    const double ubox = den > 0.0 ? num / den : qa;
    fit.form = ThreeParamForm{std::min(ubox, qa), qa, rho > 0.0 ? rho : 1.0};
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double v = rho > 0.0 ? three_param_eval(fit.form, c.thetas[i]) : qa;
        fit.max_deviation = std::max(fit.max_deviation, std::abs(v - c.values[i]));
    }
    fit.success = fit.max_deviation <= tol;
    return fit;
}

}  // namespace cifs
