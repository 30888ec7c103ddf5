#pragma once

// Closed-form Assouad spectra.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cifs/curve.hpp"
#include "cifs/error.hpp"

namespace cifs {

namespace detail {

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

inline void require_theta(double theta) { require(theta >= 0.0 && theta <= 1.0, "theta must lie in [0,1]"); }

}  // namespace detail

/// Spectrum of the three-parameter form (ubox, qa, rho).
struct ThreeParamForm {
    double ubox = 0.0;
    double qa = 1.0;
    double rho = 1.0;

    void validate() const {
        detail::require(ubox <= qa, "three-parameter form needs ubox <= qa");
        if (qa > 0.0)
            detail::require(rho >= 1.0 - ubox / qa - 1e-12 && rho <= 1.0 && rho > 0.0,
                            "three-parameter form needs rho in [1 - ubox/qa, 1]");
    }
};

inline double three_param_eval(const ThreeParamForm& f, double theta) {
    detail::require_theta(theta);
    if (f.ubox == f.qa) return f.ubox;
    if (theta >= 1.0) return f.qa;
    const double v = f.ubox + (1.0 - f.rho) * theta / ((1.0 - theta) * f.rho) * (f.qa - f.ubox);
    return std::min(v, f.qa);
}

/// Spectrum of F_p = {i^(-p)}: min{1/((1+p)(1-theta)), 1}.
inline double fp_spectrum(double p, double theta) {
    detail::require(p > 0.0, "fp spectrum needs p > 0");
    detail::require_theta(theta);
    if (theta >= 1.0) return 1.0;
    return std::min(1.0 / ((1.0 + p) * (1.0 - theta)), 1.0);
}

/// The two branch boundaries of the sharp family. The middle-case expressions
/// reduce to the t = p + 1 case (theta1 = theta2) and to the t = p + 1/h case,
/// so one code path covers all three.
struct SharpBreaks {
    double theta1;
    double theta2;
};

inline void check_sharp_domain(double p, double t, double h) {
    detail::require(p > 0.0, "sharp family needs p > 0");
    detail::require(t >= p + 1.0, "sharp family needs t >= p + 1");
    detail::require(h > 1.0 / (p + 1.0) && h < 1.0, "sharp family needs h in (1/(p+1), 1)");
}

inline SharpBreaks sharp_family_breaks(double p, double t, double h) {
    check_sharp_domain(p, t, h);
    const double rho = p / (1.0 + p);
    if (t < p + 1.0 / h) return {(h + h * p - 1.0) * p / ((1.0 + p) * (h * t - 1.0)), rho};
    return {(h + h * p - 1.0) / (h * (1.0 + p)), rho};
}

/// Spectrum of the limit set of the sharp family with parameters (p, t, h).
inline double sharp_family_spectrum(double p, double t, double h, double theta) {
    check_sharp_domain(p, t, h);
    detail::require_theta(theta);
    const double rho = p / (1.0 + p);
    if (theta >= rho) return 1.0;
    const SharpBreaks b = sharp_family_breaks(p, t, h);
    const double middle = 1.0 / ((1.0 + p) * (1.0 - theta));
    if (t < p + 1.0 / h) {
        if (theta <= b.theta1) return h + theta / (p * (1.0 - theta)) * (1.0 - h * (t - p));
        return middle;
    }
    if (theta <= b.theta1) return h;
    return middle;
}

/// Continued fractions with digits eventually spaced like floor(n^p).
inline double ctd_spaced_spectrum(double p, double h, double theta) {
    detail::require(p > 1.0, "spaced continued fractions need p > 1");
    detail::require(h > 1.0 / (p + 1.0) && h < 1.0 / p, "spaced continued fractions need h in (1/(p+1), 1/p)");
    detail::require_theta(theta);
    const double rho = p / (1.0 + p);
    if (theta >= rho) return 1.0;
    const double theta1 = (h + h * p - 1.0) * p / ((1.0 + p) * (2.0 * p * h - 1.0));
    if (theta <= theta1) return h + theta / (p * (1.0 - theta)) * (1.0 - p * h);
    return 1.0 / ((1.0 + p) * (1.0 - theta));
}

/// Continued fractions with digits clustered in blocks [2^k, 2^k + 2^(k alpha)].
inline double ctd_clustered_spectrum(double alpha, double h, double theta) {
    detail::require(alpha > 0.0 && alpha < 1.0, "clustered continued fractions need alpha in (0,1)");
    detail::require(h >= alpha / 2.0 && h <= 1.0, "clustered continued fractions need h in [alpha/2, 1]");
    detail::require_theta(theta);
    if (theta >= 1.0 - alpha / 2.0) return 1.0;
    return h + alpha * theta / ((1.0 - theta) * (2.0 - alpha)) * (1.0 - h);
}

/// Continued fractions whose digit set has positive lower density.
inline double dense_cf_spectrum(double h, double theta) {
    detail::require(h >= 0.5 && h <= 1.0, "dense continued fractions need h in [1/2, 1]");
    detail::require_theta(theta);
    if (theta >= 0.5) return 1.0;
    return h + theta / (1.0 - theta) * (1.0 - h);
}

/// Complex continued fractions with digits in N + Z i.
inline double complex_cf_spectrum(double h, double theta) {
    detail::require(h >= 1.0 && h <= 2.0, "complex continued fractions need h in [1, 2]");
    detail::require_theta(theta);
    if (theta >= 0.5) return 2.0;
    return h + theta / (1.0 - theta) * (2.0 - h);
}

/// Limit set of a parabolic system whose neutral branch has x - S(x) ~ x^(1+q).
inline double parabolic_spectrum(double q, double h, double theta) {
    detail::require(q > 0.0, "parabolic spectrum needs q > 0");
    detail::require(h >= 0.0 && h <= 1.0, "parabolic spectrum needs h in [0, 1]");
    detail::require_theta(theta);
    if (theta >= 1.0 / (1.0 + q)) return 1.0;
    return h + q * theta / (1.0 - theta) * (1.0 - h);
}

inline double backwards_cf_spectrum(double h, double theta) { return parabolic_spectrum(1.0, h, theta); }

inline double assouad_dimension_formula(double h, double dim_a_p) { return std::max(h, dim_a_p); }
inline double quasi_assouad_formula(double h, double qa_p) { return std::max(h, qa_p); }
/// A subset of R^d is porous iff its Assouad dimension is below d.
inline bool porosity_threshold_check(double value, double d) { return value < d; }

/// A named closed-form family together with the data that enter the general
/// bounds: Hausdorff dimension h, upper box dimension of the limit set and the
/// spectrum of its fixed-point set.
struct FamilyFormula {
    std::string family;
    std::map<std::string, double> params;
    int ambient_dim = 1;
    double h = 0.0;
    double ubox = 0.0;
    std::function<double(double)> spectrum;
    std::function<double(double)> fixed_point_spectrum;
};

namespace detail {

inline double param(const std::map<std::string, double>& ps, const std::string& key) {
    const auto it = ps.find(key);
    if (it == ps.end()) throw ConfigError("missing parameter '" + key + "'");
    return it->second;
}

inline void only_params(const std::map<std::string, double>& ps, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : ps) {
        bool ok = false;
        for (const char* allowed : keys) ok = ok || k == allowed;
        if (!ok) throw ConfigError("unknown parameter '" + k + "'");
    }
}

}  // namespace detail

inline const std::vector<std::string>& family_names() {
    static const std::vector<std::string> names{"sharp", "fp", "ctd-spaced", "ctd-clustered",
                                                "dense-cf", "complex-cf", "parabolic", "backwards-cf"};
    return names;
}

/// Resolve a family by name, validating its parameters against the formula's domain.
/// Raises ConfigError for unknown families, missing or out-of-domain parameters.
inline FamilyFormula make_family(const std::string& family, const std::map<std::string, double>& ps) {
    using detail::param;
    FamilyFormula f;
    f.family = family;
    f.params = ps;
    try {
        if (family == "sharp") {
            detail::only_params(ps, {"p", "t", "h"});
            const double p = param(ps, "p"), t = param(ps, "t"), h = param(ps, "h");
            check_sharp_domain(p, t, h);
            f.h = h;
            f.ubox = h;
            f.spectrum = [=](double th) { return sharp_family_spectrum(p, t, h, th); };
            f.fixed_point_spectrum = [=](double th) { return fp_spectrum(p, th); };
        } else if (family == "fp") {
            detail::only_params(ps, {"p"});
            const double p = param(ps, "p");
            (void)fp_spectrum(p, 0.5);
            f.h = 0.0;
            f.ubox = 1.0 / (1.0 + p);
            f.spectrum = [=](double th) { return fp_spectrum(p, th); };
            f.fixed_point_spectrum = f.spectrum;
        } else if (family == "ctd-spaced") {
            detail::only_params(ps, {"p", "h"});
            const double p = param(ps, "p"), h = param(ps, "h");
            (void)ctd_spaced_spectrum(p, h, 0.5);
            f.h = h;
            f.ubox = h;
            f.spectrum = [=](double th) { return ctd_spaced_spectrum(p, h, th); };
            f.fixed_point_spectrum = [=](double th) { return fp_spectrum(p, th); };
        } else if (family == "ctd-clustered") {
            detail::only_params(ps, {"alpha", "h"});
            const double a = param(ps, "alpha"), h = param(ps, "h");
            (void)ctd_clustered_spectrum(a, h, 0.5);
            f.h = h;
            f.ubox = h;
            f.spectrum = [=](double th) { return ctd_clustered_spectrum(a, h, th); };
            const ThreeParamForm pf{a / 2.0, 1.0, 1.0 - a / 2.0};
            f.fixed_point_spectrum = [=](double th) { return three_param_eval(pf, th); };
        } else if (family == "dense-cf") {
            detail::only_params(ps, {"h"});
            const double h = param(ps, "h");
            (void)dense_cf_spectrum(h, 0.5);
            f.h = h;
            f.ubox = h;
            f.spectrum = [=](double th) { return dense_cf_spectrum(h, th); };
            f.fixed_point_spectrum = [=](double th) { return fp_spectrum(1.0, th); };
        } else if (family == "complex-cf") {
            detail::only_params(ps, {"h"});
            const double h = param(ps, "h");
            (void)complex_cf_spectrum(h, 0.5);
            f.ambient_dim = 2;
            f.h = h;
            f.ubox = h;
            f.spectrum = [=](double th) { return complex_cf_spectrum(h, th); };
            f.fixed_point_spectrum = [=](double th) { return th >= 1.0 ? 2.0 : std::min(1.0 / (1.0 - th), 2.0); };
        } else if (family == "parabolic" || family == "backwards-cf") {
            double q = 1.0;
            if (family == "parabolic") {
                detail::only_params(ps, {"q", "h"});
                q = param(ps, "q");
            } else {
                detail::only_params(ps, {"h"});
            }
            const double h = param(ps, "h");
            (void)parabolic_spectrum(q, h, 0.5);
            detail::require(h >= q / (1.0 + q), "parabolic spectrum needs h >= q/(1+q)");
            f.h = h;
            f.ubox = h;
            f.spectrum = [=](double th) { return parabolic_spectrum(q, h, th); };
            f.fixed_point_spectrum = [=](double th) { return fp_spectrum(1.0 / q, th); };
        } else {
            throw ConfigError("unknown family '" + family + "'");
        }
    } catch (const DomainError& e) {
        throw ConfigError(family + ": " + e.what());
    }
    return f;
}

inline SpectrumCurve formula_curve(const FamilyFormula& f, const std::vector<double>& grid) {
    SpectrumCurve c = sample_curve(grid, f.spectrum, Provenance::formula);
    c.metadata["family"] = f.family;
    for (const auto& [k, v] : f.params) c.metadata[k] = std::to_string(v);
    return c;
}

}  // namespace cifs
