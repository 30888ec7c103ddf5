#pragma once

// Formula-versus-estimate comparison, CSV / SVG / JSON emitters and the
// build -> dimension -> formula -> estimate -> compare pipeline.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cifs/cloud.hpp"
#include "cifs/cloud_io.hpp"
#include "cifs/curve.hpp"
#include "cifs/envelope.hpp"
#include "cifs/error.hpp"
#include "cifs/estimator.hpp"
#include "cifs/formulas.hpp"
#include "cifs/pressure.hpp"
#include "cifs/spec_json.hpp"
#include "cifs/systems.hpp"

namespace cifs {

/// %g formatting shared by every text artifact.
inline std::string fmt(double v, int digits = 10) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

struct ComparisonRow {
    double theta = 0.0;
    double formula = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double estimate = 0.0;
    bool pass = false;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;
    double tol = 0.0;
    double max_deviation = 0.0;  ///< max |estimate - formula| over valid rows
    double max_sandwich_violation = 0.0;
    std::optional<double> formula_phase_transition;
    std::optional<double> estimate_phase_transition;

    [[nodiscard]] bool all_pass() const {
        return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const ComparisonRow& r) { return r.pass; });
    }
    [[nodiscard]] std::size_t passed() const {
        return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ComparisonRow& r) { return r.pass; }));
    }
};

/// A row passes iff its estimate is defined, within tol of the formula and
/// inside [lower - tol, upper + tol]. All curves must share one grid.
inline ComparisonTable compare_curves(const SpectrumCurve& formula, const BoundEnvelope& env, const SpectrumCurve& estimate,
                                      double tol) {
    const std::size_t n = formula.size();
    if (env.lower.size() != n || env.upper.size() != n || estimate.size() != n)
        throw DomainError("comparison curves must share one grid");
    ComparisonTable t;
    t.tol = tol;
    for (std::size_t i = 0; i < n; ++i) {
        ComparisonRow r{formula.thetas[i], formula.values[i], env.lower.values[i], env.upper.values[i], estimate.values[i], false};
        if (std::isfinite(r.estimate)) {
            const double dev = std::abs(r.estimate - r.formula);
            const double viol = std::max({0.0, r.lower - r.estimate, r.estimate - r.upper});
            t.max_deviation = std::max(t.max_deviation, dev);
            t.max_sandwich_violation = std::max(t.max_sandwich_violation, viol);
            r.pass = dev <= tol && viol <= tol;
        }
        t.rows.push_back(r);
    }
    if (n >= 2) {
        const PhaseTransition pf = phase_transition_info(formula, 1e-9);
        if (pf.theta > 0.0) t.formula_phase_transition = pf.theta;
        SpectrumCurve valid;
        for (std::size_t i = 0; i < n; ++i)
            if (std::isfinite(estimate.values[i])) {
                valid.thetas.push_back(estimate.thetas[i]);
                valid.values.push_back(estimate.values[i]);
            }
        if (valid.size() >= 2) {
            const PhaseTransition pe = phase_transition_info(valid, 1e-3);
            if (pe.theta > 0.0) t.estimate_phase_transition = pe.theta;
        }
    }
    return t;
}

inline std::string comparison_csv(const ComparisonTable& t) {
    std::ostringstream os;
    os << "theta,formula,lower,upper,estimate,pass\n";
    for (const auto& r : t.rows)
        os << fmt(r.theta) << ',' << fmt(r.formula) << ',' << fmt(r.lower) << ',' << fmt(r.upper) << ',' << fmt(r.estimate)
           << ',' << (r.pass ? 1 : 0) << '\n';
    return os.str();
}

/// theta followed by one column per curve, on the union grid.
inline std::string curves_csv(const std::vector<SpectrumCurve>& curves, const std::vector<std::string>& names) {
    if (curves.empty()) throw DomainError("no curves to write");
    if (names.size() != curves.size()) throw DomainError("one column name per curve");
    const auto grid = union_grid(curves);
    std::vector<SpectrumCurve> rs;
    for (const auto& c : curves) rs.push_back(c.thetas == grid ? c : resample(c, grid));
    std::ostringstream os;
    os << "theta";
    for (const auto& n : names) os << ',' << n;
    os << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
        os << fmt(grid[i]);
        for (const auto& c : rs) os << ',' << fmt(c.values[i]);
        os << '\n';
    }
    return os.str();
}

struct SvgStyle {
    int width = 640;
    int height = 420;
    int margin = 50;
    std::string title;
    /// Upper end of the value axis; 0 means the largest ambient_dim recorded
    /// in the curves' metadata, or 1.
    double value_max = 0.0;
};

namespace detail {

inline const char* svg_colour(std::size_t i) {
    static const char* palette[] = {"#1f3b73", "#b8322a", "#2a7a3b", "#8a5a00", "#6a3d9a", "#00838f", "#555555"};
    return palette[i % (sizeof palette / sizeof palette[0])];
}

inline const char* svg_dash(Provenance p) {
    switch (p) {
        case Provenance::formula: return "";
        case Provenance::lower_bound:
        case Provenance::upper_bound: return " stroke-dasharray=\"6 4\"";
        case Provenance::estimate: return " stroke-dasharray=\"2 3\"";
    }
    return "";
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

/// Overlay of spectrum curves on theta in [0, 1]. Curves on different grids
/// are resampled to the union grid; undefined values are skipped.
inline std::string emit_svg(const std::vector<SpectrumCurve>& curves, const SvgStyle& style = {}) {
    if (curves.empty()) throw DomainError("emit_svg needs at least one curve");
    for (const auto& c : curves)
        if (c.size() == 0) throw DomainError("emit_svg got an empty curve");
    double ymax = style.value_max;
    if (!(ymax > 0.0)) {
        ymax = 1.0;
        for (const auto& c : curves)
            if (const auto it = c.metadata.find("ambient_dim"); it != c.metadata.end()) ymax = std::max(ymax, std::stod(it->second));
    }
    const auto grid = union_grid(curves);
    const double W = style.width, H = style.height, m = style.margin;
    const double pw = W - 2 * m, ph = H - 2 * m;
    const auto X = [&](double th) { return m + pw * th; };
    const auto Y = [&](double v) { return H - m - ph * std::clamp(v / ymax, 0.0, 1.0); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\"" << style.height
       << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!style.title.empty())
        os << "<text x=\"" << fmt(W / 2, 6) << "\" y=\"" << fmt(m / 2, 6) << "\" text-anchor=\"middle\" font-size=\"14\">"
           << detail::xml_escape(style.title) << "</text>\n";
    // axes and ticks
    os << "<g stroke=\"black\" fill=\"none\">\n";
    os << "<line x1=\"" << fmt(m, 6) << "\" y1=\"" << fmt(H - m, 6) << "\" x2=\"" << fmt(W - m, 6) << "\" y2=\"" << fmt(H - m, 6) << "\"/>\n";
    os << "<line x1=\"" << fmt(m, 6) << "\" y1=\"" << fmt(H - m, 6) << "\" x2=\"" << fmt(m, 6) << "\" y2=\"" << fmt(m, 6) << "\"/>\n";
    os << "</g>\n<g font-size=\"11\" fill=\"black\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double th = 0.25 * i, v = ymax * 0.25 * i;
        os << "<text x=\"" << fmt(X(th), 6) << "\" y=\"" << fmt(H - m + 16, 6) << "\" text-anchor=\"middle\">" << fmt(th, 4) << "</text>\n";
        os << "<text x=\"" << fmt(m - 6, 6) << "\" y=\"" << fmt(Y(v) + 4, 6) << "\" text-anchor=\"end\">" << fmt(v, 4) << "</text>\n";
    }
    os << "<text x=\"" << fmt(W / 2, 6) << "\" y=\"" << fmt(H - 12, 6) << "\" text-anchor=\"middle\">theta</text>\n";
    os << "</g>\n";
    for (std::size_t k = 0; k < curves.size(); ++k) {
        const SpectrumCurve c = curves[k].thetas == grid ? curves[k] : resample(curves[k], grid);
        os << "<polyline fill=\"none\" stroke=\"" << detail::svg_colour(k) << "\" stroke-width=\"1.5\""
           << detail::svg_dash(c.provenance) << " points=\"";
        bool first = true;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!std::isfinite(c.values[i])) continue;
            os << (first ? "" : " ") << fmt(X(c.thetas[i]), 7) << ',' << fmt(Y(c.values[i]), 7);
            first = false;
        }
        os << "\"/>\n";
    }
    // legend
    os << "<g font-size=\"11\">\n";
    for (std::size_t k = 0; k < curves.size(); ++k) {
        const auto it = curves[k].metadata.find("label");
        const std::string label = it != curves[k].metadata.end() ? it->second : to_string(curves[k].provenance);
        const double y = m + 14.0 * static_cast<double>(k) + 6.0;
        os << "<line x1=\"" << fmt(W - m - 150, 6) << "\" y1=\"" << fmt(y, 6) << "\" x2=\"" << fmt(W - m - 126, 6) << "\" y2=\""
           << fmt(y, 6) << "\" stroke=\"" << detail::svg_colour(k) << "\" stroke-width=\"1.5\"" << detail::svg_dash(curves[k].provenance)
           << "/>\n";
        os << "<text x=\"" << fmt(W - m - 120, 6) << "\" y=\"" << fmt(y + 4, 6) << "\">" << detail::xml_escape(label) << "</text>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

/// A failure in one pipeline stage. `config` marks user errors (bad input,
/// out-of-domain parameters, resolution beyond the cloud cap).
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what, bool config)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)), config_(config) {}
    [[nodiscard]] const std::string& stage() const { return stage_; }
    [[nodiscard]] bool config() const { return config_; }

private:
    std::string stage_;
    bool config_;
};

template <typename F>
auto run_stage(const std::string& stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const ConfigError& e) {
        throw StageError(stage, e.what(), true);
    } catch (const CapacityError& e) {
        throw StageError(stage, e.what(), true);
    } catch (const std::exception& e) {
        throw StageError(stage, e.what(), false);
    }
}

struct RunConfig {
    std::string spec_path;  ///< optional; otherwise the family's reference system
    std::string family;
    std::map<std::string, double> params;
    double delta = 1e-7;
    std::size_t grid_size = 18;
    double theta_min = 0.05;
    double theta_max = 0.9;
    double tol = 0.07;
    double h_tol = 1e-4;  ///< pressure tolerance when h is derived
    std::filesystem::path out_dir = "cifs-out";
    std::uint64_t seed = 0;  ///< reserved for randomised oracle checks; the pipeline is deterministic
    unsigned threads = 1;
};

struct PipelineResult {
    ComparisonTable table;
    FamilyFormula formula;
    std::string h_source;  ///< "supplied" or "pressure"
    double h_lo = 0.0, h_hi = 0.0;
    std::size_t cloud_points = 0;
    std::vector<Kink> formula_kinks;
    std::map<std::string, std::filesystem::path> files;
};

inline nlohmann::json summary_json(const RunConfig& cfg, const PipelineResult& r) {
    nlohmann::json j;
    j["family"] = cfg.family;
    nlohmann::json ps = nlohmann::json::object();
    for (const auto& [k, v] : r.formula.params) ps[k] = v;
    j["params"] = ps;
    j["h"] = {{"value", r.formula.h}, {"lo", r.h_lo}, {"hi", r.h_hi}, {"source", r.h_source}};
    j["spec"] = cfg.spec_path.empty() ? nlohmann::json(nullptr) : nlohmann::json(cfg.spec_path);
    j["delta"] = cfg.delta;
    j["cloud_points"] = r.cloud_points;
    j["grid"] = {{"theta_min", cfg.theta_min}, {"theta_max", cfg.theta_max}, {"nodes", cfg.grid_size}};
    j["tol"] = cfg.tol;
    j["max_deviation"] = r.table.max_deviation;
    j["max_sandwich_violation"] = r.table.max_sandwich_violation;
    j["rows_total"] = r.table.rows.size();
    j["rows_passed"] = r.table.passed();
    j["all_pass"] = r.table.all_pass();
    j["phase_transition"] = {
        {"formula", r.table.formula_phase_transition ? nlohmann::json(*r.table.formula_phase_transition) : nlohmann::json(nullptr)},
        {"estimate", r.table.estimate_phase_transition ? nlohmann::json(*r.table.estimate_phase_transition) : nlohmann::json(nullptr)}};
    nlohmann::json kinks = nlohmann::json::array();
    for (const auto& k : r.formula_kinks) kinks.push_back({{"theta", k.theta}, {"slope_jump", k.slope_jump}});
    j["formula_kinks"] = kinks;
    nlohmann::json files = nlohmann::json::object();
    for (const auto& [k, p] : r.files) files[k] = p.filename().string();
    j["files"] = files;
    return j;
}

/// Formula, general bounds and estimate for one family, written to
/// cfg.out_dir as cloud.bin, curves.csv, overlay.svg and summary.json.
inline PipelineResult run_pipeline(const RunConfig& cfg) {
    PipelineResult res;
    const auto grid = run_stage("config", [&] {
        if (!(cfg.delta > 0.0)) throw ConfigError("delta must be positive");
        if (!(cfg.tol >= 0.0)) throw ConfigError("tolerance must be non-negative");
        if (!(cfg.theta_min > 0.0 && cfg.theta_max < 1.0)) throw ConfigError("theta range must lie in (0,1)");
        if (std::find(family_names().begin(), family_names().end(), cfg.family) == family_names().end())
            throw ConfigError("unknown family '" + cfg.family + "'");
        return uniform_grid(cfg.theta_min, cfg.theta_max, cfg.grid_size);
    });

    auto params = cfg.params;
    const bool need_h = cfg.family != "fp" && !params.contains("h");
    ReferenceSystem sys = run_stage("spec", [&] {
        if (!cfg.spec_path.empty()) return load_spec_file(cfg.spec_path);
        if (need_h && !family_h_is_derived(cfg.family))
            throw ConfigError("family '" + cfg.family + "' needs an explicit h parameter");
        return reference_system(cfg.family, params);
    });

    if (need_h) {
        run_stage("dimension", [&] {
            const DimensionResult d = hausdorff_dimension(sys.spec, cfg.h_tol);
            if (!d.converged) throw DomainError("pressure bracket did not reach the requested tolerance");
            params["h"] = d.value;
            res.h_lo = d.lo;
            res.h_hi = d.hi;
            res.h_source = "pressure";
        });
    } else {
        res.h_source = "supplied";
        if (params.contains("h")) res.h_lo = res.h_hi = params.at("h");
    }
    res.formula = run_stage("formula", [&] { return make_family(cfg.family, params); });
    if (cfg.family == "fp") res.h_lo = res.h_hi = res.formula.h;

    const PointCloud cloud = run_stage("cloud", [&] {
        PointCloud c = sys.cloud == CloudKind::limit_set ? build_limit_cloud(sys.spec, cfg.delta) : build_fixed_point_cloud(sys.spec, cfg.delta);
        res.files["cloud"] = cfg.out_dir / "cloud.bin";
        write_cloud(res.files["cloud"], c);
        return c;
    });
    res.cloud_points = cloud.size();

    ScalePolicy pol;
    pol.threads = cfg.threads;
    const SpectrumCurve est = run_stage("estimate", [&] { return assouad_spectrum_estimate(cloud, grid, pol).curve; });
    const SpectrumCurve formula = formula_curve(res.formula, grid);
    const BoundEnvelope env = run_stage("envelope", [&] { return family_envelope(res.formula, grid); });
    res.table = run_stage("compare", [&] { return compare_curves(formula, env, est, cfg.tol); });

    run_stage("report", [&] {
        const auto dense = uniform_grid(cfg.theta_min, cfg.theta_max, 256);
        SpectrumCurve f = formula_curve(res.formula, dense);
        res.formula_kinks = detect_kinks(formula_curve(res.formula, default_grid()));
        BoundEnvelope e = family_envelope(res.formula, dense);
        SpectrumCurve es = est;
        f.metadata["label"] = "formula";
        e.lower.metadata["label"] = "lower bound";
        e.upper.metadata["label"] = "upper bound";
        es.metadata["label"] = "estimate";
        for (auto* c : {&f, &e.lower, &e.upper, &es}) c->metadata["ambient_dim"] = std::to_string(res.formula.ambient_dim);
        SvgStyle style;
        style.title = cfg.family;
        for (const auto& [k, v] : res.formula.params) style.title += " " + k + "=" + fmt(v, 6);
        res.files["curves"] = cfg.out_dir / "curves.csv";
        res.files["overlay"] = cfg.out_dir / "overlay.svg";
        res.files["summary"] = cfg.out_dir / "summary.json";
        atomic_write(res.files["curves"], comparison_csv(res.table));
        atomic_write(res.files["overlay"], emit_svg({f, e.lower, e.upper, es}, style));
        atomic_write(res.files["summary"], summary_json(cfg, res).dump(2) + "\n");
    });
    return res;
}

}  // namespace cifs
