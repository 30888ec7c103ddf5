// cifs: build clouds, compute dimensions, evaluate and estimate spectra,
// compare them and render reports.
//
// Exit codes: 0 success / all comparisons pass, 1 comparison failure or
// runtime error, 2 configuration error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cifs/cifs.hpp"

namespace {

using cifs::ConfigError;
using Json = nlohmann::json;

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

std::map<std::string, double> parse_params(const std::string& text) {
    std::map<std::string, double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("parameter '" + item + "' is not of the form key=value");
        const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(val, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != val.size() || val.empty()) throw ConfigError("parameter '" + key + "' has non-numeric value '" + val + "'");
        if (!out.emplace(key, v).second) throw ConfigError("parameter '" + key + "' given twice");
    }
    return out;
}

double parse_cell(const std::string& cell, std::size_t row) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used == cell.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("row " + std::to_string(row) + ": '" + cell + "' is not a number");
}

unsigned threads_from_env() {
    const char* s = std::getenv("CIFS_THREADS");
    if (s == nullptr || *s == '\0') return 1;
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (*end != '\0' || v < 1 || v > 1024) throw ConfigError("CIFS_THREADS must be an integer in [1, 1024]");
    return static_cast<unsigned>(v);
}

struct SystemArgs {
    std::string spec;
    std::string family;
    std::string params;
};

void add_system_flags(CLI::App* app, SystemArgs& a) {
    app->add_option("--spec", a.spec, "JSON system description")->check(CLI::ExistingFile);
    app->add_option("--family", a.family, "named family: " + [] {
        std::string s;
        for (const auto& n : cifs::family_names()) s += (s.empty() ? "" : ", ") + n;
        return s;
    }());
    app->add_option("--params", a.params, "family parameters, k=v,k=v");
}

cifs::ReferenceSystem resolve_system(const SystemArgs& a) {
    if (!a.spec.empty()) return cifs::load_spec_file(a.spec);
    if (a.family.empty()) throw ConfigError("give --spec or --family");
    return cifs::reference_system(a.family, parse_params(a.params));
}

std::vector<double> theta_grid(std::size_t n, double lo, double hi) {
    const auto g = cifs::uniform_grid(lo, hi, n);
    cifs::check_grid(g);
    return g;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") std::cout << text;
    else cifs::atomic_write(path, text);
}

Json bracket_json(const cifs::DimensionResult& d) {
    return {{"value", d.value}, {"lo", d.lo}, {"hi", d.hi}, {"converged", d.converged}, {"method", cifs::to_string(d.method)}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Assouad-type spectra of conformal iterated function systems"};
    app.require_subcommand(1);

    SystemArgs sys;
    double delta = 1e-7;
    std::size_t grid_n = 0;
    double theta_min = 0.0, theta_max = 0.0;
    std::string out, cloud_path, csv_path, svg_path, input, title;
    bool fixed_points = false, lower = false;

    auto* build = app.add_subcommand("build", "build a delta-resolution cloud of a system");
    add_system_flags(build, sys);
    build->add_option("--delta", delta, "resolution")->check(CLI::PositiveNumber);
    build->add_option("--out", out, "cloud file")->required();
    build->add_option("--csv", csv_path, "also write the points as CSV");
    build->add_flag("--fixed-points", fixed_points, "one point per first-level map instead of the limit set");

    auto* dimension = app.add_subcommand("dimension", "Hausdorff dimension from the pressure function");
    add_system_flags(dimension, sys);
    double dim_tol = 1e-6;
    dimension->add_option("--tol", dim_tol, "bracket width")->check(CLI::PositiveNumber);

    auto* formula = app.add_subcommand("spectrum-formula", "closed-form spectrum and general bounds of a family");
    formula->add_option("--family", sys.family)->required();
    formula->add_option("--params", sys.params);
    formula->add_option("--grid", grid_n, "number of theta nodes")->default_val(1024);
    formula->add_option("--theta-min", theta_min)->default_val(1e-3);
    formula->add_option("--theta-max", theta_max)->default_val(1.0 - 1e-3);
    formula->add_option("--out", out, "CSV output (default stdout)");
    formula->add_option("--svg", svg_path, "SVG overlay output");

    auto* estimate = app.add_subcommand("spectrum-estimate", "estimate the spectrum of a cloud");
    add_system_flags(estimate, sys);
    estimate->add_option("--cloud", cloud_path, "cloud file from `build`")->check(CLI::ExistingFile);
    estimate->add_option("--delta", delta, "resolution when building from a system")->check(CLI::PositiveNumber);
    estimate->add_option("--grid", grid_n, "number of theta nodes")->default_val(18);
    estimate->add_option("--theta-min", theta_min)->default_val(0.05);
    estimate->add_option("--theta-max", theta_max)->default_val(0.9);
    estimate->add_flag("--lower", lower, "lower spectrum instead of the Assouad spectrum");
    estimate->add_option("--out", out, "CSV output (default stdout)");

    cifs::RunConfig cfg;
    std::string cfg_params;
    auto* compare = app.add_subcommand("compare", "formula, bounds and estimate of a family side by side");
    compare->add_option("--family", cfg.family)->required();
    compare->add_option("--params", cfg_params, "k=v,...; h is computed when omitted and derivable");
    compare->add_option("--spec", cfg.spec_path, "system to sample instead of the family's reference system")
        ->check(CLI::ExistingFile);
    compare->add_option("--delta", cfg.delta)->check(CLI::PositiveNumber);
    compare->add_option("--grid", cfg.grid_size, "number of theta nodes");
    compare->add_option("--theta-min", cfg.theta_min);
    compare->add_option("--theta-max", cfg.theta_max);
    compare->add_option("--tol", cfg.tol, "pass tolerance");
    std::string out_dir = "cifs-out";
    compare->add_option("--out", out_dir, "output directory");

    auto* report = app.add_subcommand("report", "render a curves CSV as an SVG overlay");
    report->add_option("--input", input, "CSV with a theta column")->required()->check(CLI::ExistingFile);
    report->add_option("--out", out, "SVG output (default stdout)");
    report->add_option("--title", title);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        const unsigned threads = threads_from_env();
        if (*build) {
            auto rs = resolve_system(sys);
            const auto cloud = fixed_points || rs.cloud == cifs::CloudKind::fixed_points ? cifs::build_fixed_point_cloud(rs.spec, delta)
                                                                                        : cifs::build_limit_cloud(rs.spec, delta);
            cifs::write_cloud(out, cloud);
            if (!csv_path.empty()) cifs::atomic_write(csv_path, cifs::cloud_csv(cloud));
            std::cout << Json{{"points", cloud.size()}, {"expanded", cloud.expanded}, {"delta", delta}, {"out", out}}.dump(2) << "\n";
            return 0;
        }
        if (*dimension) {
            const auto rs = resolve_system(sys);
            const auto rep = cifs::validate_cifs(rs.spec);
            Json checks = Json::array();
            for (const auto& c : rep.checks) checks.push_back({{"axiom", c.axiom}, {"passed", c.passed}, {"detail", c.detail}});
            const auto d = cifs::hausdorff_dimension(rs.spec, dim_tol);
            std::cout << Json{{"h", bracket_json(d)}, {"checks", checks}}.dump(2) << "\n";
            return 0;
        }
        if (*formula) {
            const auto f = cifs::make_family(sys.family, parse_params(sys.params));
            const auto grid = theta_grid(grid_n, theta_min, theta_max);
            auto fc = cifs::formula_curve(f, grid);
            auto env = cifs::family_envelope(f, grid);
            write_text(out, cifs::curves_csv({fc, env.lower, env.upper}, {"formula", "lower", "upper"}));
            if (!svg_path.empty()) {
                fc.metadata["label"] = "formula";
                env.lower.metadata["label"] = "lower bound";
                env.upper.metadata["label"] = "upper bound";
                cifs::SvgStyle style;
                style.title = sys.family;
                style.value_max = f.ambient_dim;
                cifs::atomic_write(svg_path, cifs::emit_svg({fc, env.lower, env.upper}, style));
            }
            Json kinks = Json::array();
            for (const auto& k : cifs::detect_kinks(fc)) kinks.push_back({{"theta", k.theta}, {"slope_jump", k.slope_jump}});
            const auto pt = cifs::phase_transition_info(fc);
            const auto fit = cifs::fit_three_param(fc);
            std::cerr << Json{{"phase_transition", pt.theta}, {"ambiguous", pt.ambiguous}, {"quasi_assouad", fc.qa()},
                              {"kinks", kinks}, {"three_param_fit", fit.success}}
                             .dump(2)
                      << "\n";
            return 0;
        }
        if (*estimate) {
            cifs::PointCloud cloud;
            if (!cloud_path.empty()) {
                cloud = cifs::read_cloud(cloud_path);
            } else {
                const auto rs = resolve_system(sys);
                cloud = rs.cloud == cifs::CloudKind::limit_set ? cifs::build_limit_cloud(rs.spec, delta)
                                                               : cifs::build_fixed_point_cloud(rs.spec, delta);
            }
            const auto grid = theta_grid(grid_n, theta_min, theta_max);
            cifs::ScalePolicy pol;
            pol.threads = threads;
            const auto rep = lower ? cifs::lower_spectrum_estimate(cloud, grid, pol) : cifs::assouad_spectrum_estimate(cloud, grid, pol);
            std::ostringstream os;
            os << "theta,estimate,slope,sup_exponent,rungs,valid\n";
            for (const auto& d : rep.diagnostics)
                os << cifs::fmt(d.theta) << ',' << cifs::fmt(d.valid ? d.value : std::nan("")) << ',' << cifs::fmt(d.slope) << ','
                   << cifs::fmt(d.sup_exponent) << ',' << d.samples.size() << ',' << (d.valid ? 1 : 0) << '\n';
            write_text(out, os.str());
            const auto box = cifs::box_dimension_estimate(cloud, pol);
            const auto assouad = cifs::assouad_dimension_estimate(cloud, pol);
            std::cerr << Json{{"points", cloud.size()}, {"box", box.value}, {"assouad", assouad.value}, {"guard_ratio", rep.guard_ratio}}.dump(2)
                      << "\n";
            return 0;
        }
        if (*compare) {
            cfg.params = parse_params(cfg_params);
            cfg.out_dir = out_dir;
            cfg.threads = threads;
            const auto res = cifs::run_pipeline(cfg);
            std::cout << cifs::summary_json(cfg, res).dump(2) << "\n";
            return res.table.all_pass() ? 0 : kExitFail;
        }
        if (*report) {
            std::ifstream in(input);
            std::string header;
            std::getline(in, header);
            std::vector<std::string> cols;
            {
                std::stringstream hs(header);
                std::string c;
                while (std::getline(hs, c, ',')) cols.push_back(c);
            }
            if (cols.empty() || cols.front() != "theta") throw ConfigError("report input must start with a theta column");
            std::vector<cifs::SpectrumCurve> curves;
            for (std::size_t k = 1; k < cols.size(); ++k) {
                if (cols[k] == "pass" || cols[k] == "valid" || cols[k] == "rungs") continue;
                cifs::SpectrumCurve c;
                c.metadata["label"] = cols[k];
                c.metadata["column"] = std::to_string(k);
                if (cols[k].find("lower") != std::string::npos) c.provenance = cifs::Provenance::lower_bound;
                else if (cols[k].find("upper") != std::string::npos) c.provenance = cifs::Provenance::upper_bound;
                else if (cols[k].find("estimate") != std::string::npos) c.provenance = cifs::Provenance::estimate;
                curves.push_back(c);
            }
            std::string line;
            std::size_t lineno = 1;
            while (std::getline(in, line)) {
                ++lineno;
                if (line.empty()) continue;
                std::vector<std::string> cells;
                std::stringstream ls(line);
                std::string c;
                while (std::getline(ls, c, ',')) cells.push_back(c);
                if (cells.size() != cols.size()) throw ConfigError("row " + std::to_string(lineno) + " has the wrong number of cells");
                const double th = parse_cell(cells[0], lineno);
                for (auto& curve : curves) {
                    curve.thetas.push_back(th);
                    curve.values.push_back(parse_cell(cells[std::stoul(curve.metadata.at("column"))], lineno));
                }
            }
            cifs::SvgStyle style;
            style.title = title;
            write_text(out, cifs::emit_svg(curves, style));
            return 0;
        }
    } catch (const cifs::StageError& e) {
        std::cerr << "error in stage " << e.what() << "\n";
        return e.config() ? kExitConfig : kExitFail;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const cifs::CapacityError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return 0;
}
