#include "qpscat/runner.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "qpscat/errors.hpp"
#include "qpscat/validation.hpp"

namespace qpscat {

namespace {

using nlohmann::json;

std::string fmt_double(double v, bool scientific = false) {
    char buf[64];
    std::to_chars_result res =
        scientific ? std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific)
                   : std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

Vec2 parse_vec2(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2) {
        throw ConfigError(std::string("config: ") + what + " must be a 2-element array");
    }
    return Vec2(j[0].get<double>(), j[1].get<double>());
}

RunMode parse_mode(const std::string& s) {
    if (s == "solve") return RunMode::solve;
    if (s == "sweep_A") return RunMode::sweep_A;
    if (s == "sweep_k") return RunMode::sweep_k;
    if (s == "green_conv") return RunMode::green_conv;
    if (s == "make_ref") return RunMode::make_ref;
    throw ConfigError("config: unknown mode '" + s + "'");
}

const char* mode_name(RunMode m) {
    switch (m) {
        case RunMode::solve: return "solve";
        case RunMode::sweep_A: return "sweep_A";
        case RunMode::sweep_k: return "sweep_k";
        case RunMode::green_conv: return "green_conv";
        case RunMode::make_ref: return "make_ref";
    }
    return "?";
}

struct RowResult {
    double k = 0.0;
    int unknowns = 0;
    double A = 0.0;
    int iters = 0;
    double eps1 = -1.0;
    double eps = -1.0;
    Complex B00{0.0, 0.0};
    double wall_seconds = 0.0;
    std::string error;
};

std::string csv_row(const RowResult& r) {
    std::ostringstream os;
    os << fmt_double(r.k) << ',' << r.unknowns << ',' << fmt_double(r.A) << ',' << r.iters << ',';
    if (r.eps1 >= 0.0) os << fmt_double(r.eps1, true);
    os << ',';
    if (r.eps >= 0.0) os << fmt_double(r.eps, true);
    os << ',';
    std::string err = r.error;
    for (char& c : err) {
        if (c == ',' || c == '\n') c = ';';
    }
    os << err << '\n';
    return os.str();
}

}  // namespace

RunConfig parse_run_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: parse failure: ") + e.what());
    }
    RunConfig rc;
    if (j.contains("mode")) rc.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("bc")) {
        const std::string bc = j.at("bc").get<std::string>();
        if (bc == "dirichlet") {
            rc.bc = BoundaryCondition::dirichlet;
        } else if (bc == "neumann") {
            rc.bc = BoundaryCondition::neumann;
        } else {
            throw ConfigError("config: bc must be 'dirichlet' or 'neumann'");
        }
    }
    if (!j.contains("k")) throw ConfigError("config: wavenumber k is required");
    rc.k = j.at("k").get<double>();
    if (j.contains("alpha")) rc.alpha = parse_vec2(j.at("alpha"), "alpha");
    if (j.contains("lattice")) {
        const json& lat = j.at("lattice");
        if (lat.contains("v1")) rc.v1 = parse_vec2(lat.at("v1"), "lattice.v1");
        if (lat.contains("v2")) rc.v2 = parse_vec2(lat.at("v2"), "lattice.v2");
    }
    if (j.contains("surface")) {
        const json& s = j.at("surface");
        if (s.contains("kind")) {
            const std::string kind = s.at("kind").get<std::string>();
            if (kind == "flat") {
                rc.surface_kind = SurfaceKind::flat;
            } else if (kind == "cosine_product") {
                rc.surface_kind = SurfaceKind::cosine_product;
            } else if (kind == "custom_harmonic") {
                rc.surface_kind = SurfaceKind::custom_harmonic;
            } else {
                throw ConfigError("config: unknown surface kind '" + kind + "'");
            }
        }
        if (s.contains("amplitude")) rc.amplitude = s.at("amplitude").get<double>();
        if (s.contains("harmonic_a")) rc.harmonic_a = s.at("harmonic_a").get<int>();
        if (s.contains("harmonic_b")) rc.harmonic_b = s.at("harmonic_b").get<int>();
    }
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        if (g.contains("N")) rc.N = g.at("N").get<int>();
        if (g.contains("M")) rc.M = g.at("M").get<int>();
    }
    if (j.contains("green")) {
        const json& g = j.at("green");
        if (g.contains("p")) rc.p = g.at("p").get<int>();
        if (g.contains("d")) rc.d = g.at("d").get<double>();
        if (g.contains("A")) rc.A = g.at("A").get<double>();
        if (g.contains("window")) {
            const std::string w = g.at("window").get<std::string>();
            if (w == "smooth") {
                rc.window = WindowKind::smooth;
            } else if (w == "hard") {
                rc.window = WindowKind::hard;
            } else {
                throw ConfigError("config: window must be 'smooth' or 'hard'");
            }
        }
        if (g.contains("window_c")) rc.window_c = g.at("window_c").get<double>();
        if (g.contains("tau_rel")) rc.tau_rel = g.at("tau_rel").get<double>();
        if (g.contains("A_ref")) rc.A_ref = g.at("A_ref").get<double>();
    }
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        if (s.contains("xi")) rc.xi = s.at("xi").get<double>();
        if (s.contains("eta")) rc.eta = s.at("eta").get<double>();
        if (s.contains("gmres_tol")) rc.gmres_tol = s.at("gmres_tol").get<double>();
        if (s.contains("gmres_maxit")) rc.gmres_maxit = s.at("gmres_maxit").get<int>();
        if (s.contains("max_unknowns")) rc.max_unknowns = s.at("max_unknowns").get<int>();
        if (s.contains("polar")) {
            const json& p = s.at("polar");
            if (p.contains("delta")) rc.polar.delta = p.at("delta").get<double>();
            if (p.contains("n_r")) rc.polar.n_r = p.at("n_r").get<int>();
            if (p.contains("n_theta")) rc.polar.n_theta = p.at("n_theta").get<int>();
        }
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        if (s.contains("A_values")) rc.A_values = s.at("A_values").get<std::vector<double>>();
        if (s.contains("k_values")) rc.k_values = s.at("k_values").get<std::vector<double>>();
    }
    if (j.contains("reference")) rc.reference = j.at("reference").get<std::string>();
    if (j.contains("output")) rc.output = j.at("output").get<std::string>();

    if (rc.mode == RunMode::sweep_A || rc.mode == RunMode::green_conv) {
        if (rc.A_values.empty()) {
            throw ConfigError("config: sweep.A_values must be nonempty for this mode");
        }
    }
    if (rc.mode == RunMode::sweep_k && rc.k_values.empty()) {
        throw ConfigError("config: sweep.k_values must be nonempty for sweep_k");
    }
    return rc;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config_text(ss.str());
}

SolveConfig make_solve_config(const RunConfig& rc, double k, double A) {
    SolveConfig cfg;
    cfg.bc = rc.bc;
    const Lattice lat = dual_basis(rc.v1, rc.v2);
    cfg.inc = make_incident(k, rc.alpha);
    cfg.gp = make_green_params(cfg.inc, lat, rc.p, rc.d, A, rc.window, rc.window_c, rc.tau_rel);
    SurfaceSpec spec;
    spec.kind = rc.surface_kind;
    spec.amplitude = rc.amplitude;
    spec.lat = lat;
    spec.harmonic_a = rc.harmonic_a;
    spec.harmonic_b = rc.harmonic_b;
    cfg.grid = build_grid(spec, rc.N, rc.M);
    cfg.xi = rc.xi;
    cfg.eta = rc.eta != 0.0 ? rc.eta : -k;
    cfg.gmres_tol = rc.gmres_tol;
    cfg.gmres_maxit = rc.gmres_maxit;
    cfg.polar = rc.polar;
    cfg.max_unknowns = rc.max_unknowns;
    return cfg;
}

std::vector<Vec3> green_conv_probe_points(const Lattice& lat) {
    static const double table[10][3] = {
        {0.13, 0.27, 0.41}, {0.71, 0.43, 0.77}, {0.36, 0.82, 0.63}, {0.58, 0.19, 0.95},
        {0.91, 0.66, 0.52}, {0.23, 0.54, 0.88}, {0.47, 0.09, 0.35}, {0.82, 0.31, 0.70},
        {0.06, 0.73, 0.49}, {0.64, 0.89, 0.59},
    };
    std::vector<Vec3> pts;
    pts.reserve(10);
    for (const auto& row : table) {
        const Vec2 xt = row[0] * lat.v1 + row[1] * lat.v2;
        pts.emplace_back(xt.x(), xt.y(), row[2]);
    }
    return pts;
}

namespace {

json config_echo(const RunConfig& rc) {
    json j;
    j["mode"] = mode_name(rc.mode);
    j["bc"] = rc.bc == BoundaryCondition::dirichlet ? "dirichlet" : "neumann";
    j["k"] = rc.k;
    j["alpha"] = {rc.alpha.x(), rc.alpha.y()};
    j["lattice"] = {{"v1", {rc.v1.x(), rc.v1.y()}}, {"v2", {rc.v2.x(), rc.v2.y()}}};
    const char* kind = rc.surface_kind == SurfaceKind::flat              ? "flat"
                       : rc.surface_kind == SurfaceKind::cosine_product ? "cosine_product"
                                                                         : "custom_harmonic";
    j["surface"] = {{"kind", kind},
                    {"amplitude", rc.amplitude},
                    {"harmonic_a", rc.harmonic_a},
                    {"harmonic_b", rc.harmonic_b}};
    j["grid"] = {{"N", rc.N}, {"M", rc.M}};
    j["green"] = {{"p", rc.p},
                  {"d", rc.d},
                  {"A", rc.A},
                  {"window", rc.window == WindowKind::smooth ? "smooth" : "hard"},
                  {"window_c", rc.window_c},
                  {"tau_rel", rc.tau_rel},
                  {"A_ref", rc.A_ref}};
    j["solver"] = {{"xi", rc.xi},
                   {"eta", rc.eta != 0.0 ? rc.eta : -rc.k},
                   {"gmres_tol", rc.gmres_tol},
                   {"gmres_maxit", rc.gmres_maxit},
                   {"max_unknowns", rc.max_unknowns},
                   {"polar",
                    {{"delta", rc.polar.delta},
                     {"n_r", rc.polar.n_r},
                     {"n_theta", rc.polar.n_theta}}}};
    j["sweep"] = {{"A_values", rc.A_values}, {"k_values", rc.k_values}};
    j["reference"] = rc.reference;
    j["output"] = rc.output;
    return j;
}

std::optional<Complex> load_reference_b00(const std::string& path) {
    if (path.empty()) return std::nullopt;
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open reference file '" + path + "'");
    json r = json::parse(in);
    return Complex(r.at("B00").at("re").get<double>(), r.at("B00").at("im").get<double>());
}

}  // namespace

int run(const std::string& config_path, const RunOverrides& overrides) {
    RunConfig rc;
    try {
        rc = load_run_config(config_path);
        if (overrides.mode) rc.mode = parse_mode(*overrides.mode);
        if (overrides.output) rc.output = *overrides.output;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
#ifdef _OPENMP
    if (overrides.threads > 0) omp_set_num_threads(overrides.threads);
#endif

    try {
        namespace fs = std::filesystem;
        fs::create_directories(rc.output);
        const std::string csv_path = (fs::path(rc.output) / "results.csv").string();
        const std::string report_path = (fs::path(rc.output) / "report.json").string();

        std::ofstream csv(csv_path);
        if (!csv) throw ConfigError("cannot write '" + csv_path + "'");
        csv << "k,unknowns,A,iters,eps1,eps,error\n";
        csv.flush();

        json report;
        report["config"] = config_echo(rc);
        report["threads"] = overrides.threads;
        report["seed"] = overrides.seed;
        json rows = json::array();

        const std::optional<Complex> ref = load_reference_b00(rc.reference);
        bool any_failed = false;

        if (rc.mode == RunMode::green_conv) {
            const Lattice lat = dual_basis(rc.v1, rc.v2);
            const IncidentWave inc = make_incident(rc.k, rc.alpha);
            const double A_ref = rc.A_ref > 0.0
                                     ? rc.A_ref
                                     : 2.0 * *std::max_element(rc.A_values.begin(),
                                                               rc.A_values.end());
            const GreenParams gp_ref = make_green_params(inc, lat, rc.p, rc.d, A_ref, rc.window,
                                                         rc.window_c, rc.tau_rel);
            const auto pts = green_conv_probe_points(lat);
            std::vector<Complex> ref_vals(pts.size());
            for (size_t i = 0; i < pts.size(); ++i) {
                ref_vals[i] = complete_green(pts[i], gp_ref).value;
            }
            std::vector<std::pair<double, double>> samples;
            for (const double A : rc.A_values) {
                RowResult row;
                row.k = rc.k;
                row.A = A;
                try {
                    const GreenParams gp = make_green_params(inc, lat, rc.p, rc.d, A, rc.window,
                                                             rc.window_c, rc.tau_rel);
                    double err = 0.0;
                    for (size_t i = 0; i < pts.size(); ++i) {
                        err = std::max(err, std::abs(complete_green(pts[i], gp).value - ref_vals[i]));
                    }
                    row.eps = err;
                    samples.emplace_back(A, err);
                } catch (const std::exception& e) {
                    row.error = e.what();
                    any_failed = true;
                }
                csv << csv_row(row);
                csv.flush();
                rows.push_back({{"k", row.k}, {"A", row.A}, {"err", row.eps}, {"error", row.error}});
            }
            report["A_ref"] = A_ref;
            if (samples.size() >= 3) {
                const RateFit fit = fit_decay_rate(samples);
                report["fit"] = {{"slope", fit.slope},
                                 {"intercept", fit.intercept},
                                 {"r_squared", fit.r_squared}};
            }
            report["rows"] = rows;
            std::ofstream rep(report_path);
            rep << report.dump(2) << '\n';
            return any_failed ? 2 : 0;
        }

        // Solve-type modes share the row loop.
        std::vector<std::pair<double, double>> points;  // (k, A)
        switch (rc.mode) {
            case RunMode::solve:
            case RunMode::make_ref:
                points.emplace_back(rc.k, rc.A);
                break;
            case RunMode::sweep_A:
                for (const double A : rc.A_values) points.emplace_back(rc.k, A);
                break;
            case RunMode::sweep_k:
                for (const double k : rc.k_values) points.emplace_back(k, rc.A);
                break;
            default:
                break;
        }

        for (const auto& [k, A] : points) {
            RowResult row;
            row.k = k;
            row.A = A;
            row.unknowns = rc.N * rc.M;
            try {
                const SolveConfig cfg = make_solve_config(rc, k, A);
                const ScatteringResult res = solve_scattering(cfg, ref);
                row.iters = res.report.iterations;
                row.eps = res.report.eps;
                row.eps1 = res.report.eps1;
                row.B00 = res.report.B00;
                row.wall_seconds = res.report.wall_seconds;
                if (rc.mode == RunMode::make_ref) {
                    json refj;
                    refj["k"] = k;
                    refj["N"] = rc.N;
                    refj["M"] = rc.M;
                    refj["A"] = A;
                    refj["p"] = rc.p;
                    refj["d"] = rc.d;
                    refj["bc"] = rc.bc == BoundaryCondition::dirichlet ? "dirichlet" : "neumann";
                    refj["gmres_tol"] = rc.gmres_tol;
                    refj["B00"] = {{"re", row.B00.real()}, {"im", row.B00.imag()}};
                    std::ofstream refout(fs::path(rc.output) / "reference.json");
                    refout << refj.dump(2) << '\n';
                }
            } catch (const std::exception& e) {
                row.error = e.what();
                any_failed = true;
            }
            csv << csv_row(row);
            csv.flush();
            rows.push_back({{"k", row.k},
                            {"unknowns", row.unknowns},
                            {"A", row.A},
                            {"iters", row.iters},
                            {"eps", row.eps},
                            {"eps1", row.eps1},
                            {"B00", {{"re", row.B00.real()}, {"im", row.B00.imag()}}},
                            {"wall_seconds", row.wall_seconds},
                            {"error", row.error}});
        }
        report["rows"] = rows;
        std::ofstream rep(report_path);
        rep << report.dump(2) << '\n';
        return any_failed ? 2 : 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace qpscat
