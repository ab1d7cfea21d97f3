// ricciflat: verify Ricci-flat metrics built from minimal graphs, solve the
// minimal-surface Dirichlet problem, and inspect the curvature engine.
//
// Exit codes: 0 success/pass, 1 verification failure or no convergence,
// 2 invalid input, 3 I/O error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <ricciflat/cli_support.hpp>
#include <ricciflat/report_json.hpp>
#include <ricciflat/ricciflat.hpp>
#include <ricciflat/test_metrics.hpp>

namespace rf  = ricciflat;
namespace cli = ricciflat::cli;

namespace {

struct VerifyArgs {
    std::string surface;
    std::string grid_file;
    std::vector<std::string> params;
    int n = 1;
    std::string eps_blocks;
    double e0 = 0.0, m1 = 0.0, n1 = 0.0;
    int samples        = 100;
    std::uint64_t seed = 42;
    double tol         = 1e-7;
    double identity_tol = 1e-9;
    bool oracle        = false;
    std::string json_path;
    std::string config_path;
    unsigned threads = 0;
};

struct SolveArgs {
    std::string boundary;
    std::string ambient = "1,1,0,1";
    std::string grid    = "65,65";
    std::string domain  = "-1,1,-1,1";
    double tol          = 1e-10;
    int max_iter        = 50;
    std::string out;
};

struct CurvatureArgs {
    std::string metric;
    std::string point;
};

rf::GridSolution load_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cli::IoError("cannot read grid file " + path);
    try {
        return rf::read_minsurf(in);
    } catch (const rf::Error& e) {
        throw cli::UsageError(path + ": " + e.what());
    }
}

// Values from --config fill every option not given on the command line.
void apply_config(CLI::App& sub, VerifyArgs& a) {
    if (a.config_path.empty()) return;
    const auto cfg = cli::read_config(a.config_path);
    auto given     = [&](const char* opt) { return sub.count(opt) > 0; };
    for (const auto& [key, val] : cfg) {
        if (key == "surface") { if (!given("--surface")) a.surface = val; }
        else if (key == "grid") { if (!given("--grid")) a.grid_file = val; }
        else if (key == "n") { if (!given("--n")) a.n = cli::parse_int(val, key); }
        else if (key == "eps_blocks") { if (!given("--eps-blocks")) a.eps_blocks = val; }
        else if (key == "e0") { if (!given("--e0")) a.e0 = cli::parse_double(val, key); }
        else if (key == "m1") { if (!given("--m1")) a.m1 = cli::parse_double(val, key); }
        else if (key == "n1") { if (!given("--n1")) a.n1 = cli::parse_double(val, key); }
        else if (key == "samples") { if (!given("--samples")) a.samples = cli::parse_int(val, key); }
        else if (key == "seed") { if (!given("--seed")) a.seed = static_cast<std::uint64_t>(cli::parse_int(val, key)); }
        else if (key == "tol") { if (!given("--tol")) a.tol = cli::parse_double(val, key); }
        else if (key == "oracle") { if (!given("--oracle")) a.oracle = (val == "true" || val == "1"); }
        else throw cli::UsageError("unknown config key '" + key + "'");
    }
}

int run_verify(CLI::App& sub, VerifyArgs& a) {
    apply_config(sub, a);
    if (a.surface.empty() == a.grid_file.empty()) throw cli::UsageError("give exactly one of --surface or --grid");
    if (a.samples < 1) throw cli::UsageError("--samples must be positive");

    rf::SurfaceSpec spec;
    if (!a.grid_file.empty()) {
        spec = rf::grid_surface(load_grid(a.grid_file), "grid:" + a.grid_file);
    } else {
        auto found = rf::find_surface(a.surface, cli::parse_surface_params(a.params));
        if (!found) throw cli::UsageError("unknown surface '" + a.surface + "'");
        spec = *found;
    }

    rf::AssemblyConfig cfg;
    cfg.n          = a.n;
    cfg.eps_blocks = a.eps_blocks.empty() ? std::vector<int>(std::max(a.n, 0), 1) : cli::parse_signs(a.eps_blocks);
    cfg.e0         = a.e0;
    cfg.m1         = a.m1;
    cfg.n1         = a.n1;
    try {
        cfg.validate();
    } catch (const rf::Error& e) {
        throw cli::UsageError(e.what());
    }

    rf::VerifyOptions opt;
    opt.samples      = a.samples;
    opt.seed         = a.seed;
    opt.ricci_tol    = a.tol;
    opt.identity_tol = a.identity_tol;
    opt.oracle       = a.oracle;
    opt.threads      = a.threads;

    const auto report = rf::run_verification(spec, cfg, opt);
    const std::string text = rf::to_json(report).dump(2);
    std::cout << text << '\n';
    if (!a.json_path.empty()) {
        std::ofstream out(a.json_path);
        if (!(out << text << '\n')) throw cli::IoError("cannot write " + a.json_path);
    }
    return report.pass ? 0 : 1;
}

rf::BoundaryData make_boundary(const std::string& text) {
    if (text == "scherk") {
        return [](rf::Point p) { return std::log(std::cos(p.y)) - std::log(std::cos(p.x)); };
    }
    if (text.rfind("linear:", 0) == 0) {
        const auto c = cli::parse_doubles(text.substr(7), 3, "linear boundary");
        return [c](rf::Point p) { return c[0] * p.x + c[1] * p.y + c[2]; };
    }
    if (text.rfind("file:", 0) == 0) {
        auto sol = std::make_shared<const rf::GridSolution>(load_grid(text.substr(5)));
        // bilinear interpolation of the nodal values
        return [sol](rf::Point p) {
            const auto& g = sol->grid;
            const double fx = std::clamp((p.x - g.x0) / g.hx(), 0.0, g.nx - 1.0);
            const double fy = std::clamp((p.y - g.y0) / g.hy(), 0.0, g.ny - 1.0);
            const int i = std::min(static_cast<int>(fx), g.nx - 2), j = std::min(static_cast<int>(fy), g.ny - 2);
            const double u = fx - i, v = fy - j;
            return (1 - u) * (1 - v) * sol->at(i, j) + u * (1 - v) * sol->at(i + 1, j) + (1 - u) * v * sol->at(i, j + 1) +
                   u * v * sol->at(i + 1, j + 1);
        };
    }
    throw cli::UsageError("unknown boundary '" + text + "' (scherk | linear:a,b,c | file:PATH)");
}

void print_history(const rf::GridSolution& s) {
    for (std::size_t k = 0; k < s.residual_history.size(); ++k) {
        rf::ordered_json line;
        line["iteration"] = k;
        line["residual"]  = s.residual_history[k];
        std::cout << line.dump() << '\n';
    }
}

void write_solution(const std::string& path, const rf::GridSolution& s) {
    std::ofstream out(path);
    if (!out) throw cli::IoError("cannot write " + path);
    rf::write_minsurf(out, s);
    if (!out) throw cli::IoError("cannot write " + path);
}

int run_solve(const SolveArgs& a) {
    const auto amb_vals = cli::parse_doubles(a.ambient, 4, "--ambient");
    rf::AmbientMetric amb{amb_vals[0], amb_vals[1], amb_vals[2], static_cast<int>(amb_vals[3])};
    if (amb_vals[3] != 1.0 && amb_vals[3] != -1.0) throw cli::UsageError("--ambient eps must be 1 or -1");
    if (amb.det() == 0.0) throw cli::UsageError("--ambient metric is singular");
    const auto dims = cli::parse_doubles(a.grid, 2, "--grid");
    const auto dom  = cli::parse_doubles(a.domain, 4, "--domain");
    rf::GridSpec grid{static_cast<int>(dims[0]), static_cast<int>(dims[1]), dom[0], dom[1], dom[2], dom[3]};
    if (grid.nx < 3 || grid.ny < 3 || dims[0] != grid.nx || dims[1] != grid.ny)
        throw cli::UsageError("--grid needs integers >= 3");
    if (!(grid.x1 > grid.x0) || !(grid.y1 > grid.y0)) throw cli::UsageError("--domain must be a non-empty rectangle");
    if (!(a.tol > 0.0)) throw cli::UsageError("--tol must be positive");
    const auto boundary = make_boundary(a.boundary);

    try {
        const auto sol = rf::solve_minimal(boundary, amb, grid, {a.tol, a.max_iter});
        print_history(sol);
        write_solution(a.out, sol);
        return 0;
    } catch (const rf::NoConvergence& e) {
        std::cerr << "ricciflat solve: " << e.what() << '\n';
        print_history(e.solution);
        write_solution(a.out, e.solution);
        return 1;
    } catch (const rf::SingularJacobian& e) {
        std::cerr << "ricciflat solve: " << e.what() << '\n';
        return 1;
    }
}

int run_curvature(const CurvatureArgs& a) {
    const auto pt = cli::parse_doubles(a.point, 2, "--point");
    const rf::Point p{pt[0], pt[1]};
    rf::MetricJet m;
    if (a.metric == "flat") {
        m = rf::flat_metric({-1, 1, 1, 1}, p);
    } else if (a.metric == "polar") {
        m = rf::polar_metric(p);
    } else if (a.metric.rfind("sphere:", 0) == 0) {
        const double radius = cli::parse_double(a.metric.substr(7), "sphere radius");
        if (!(radius > 0.0)) throw cli::UsageError("sphere radius must be positive");
        m = rf::sphere_metric(radius, p);
    } else if (a.metric.rfind("assembled:", 0) == 0) {
        const auto spec = cli::parse_assembled(a.metric.substr(10));
        auto surface    = rf::find_surface(spec.surface);
        if (!surface) throw cli::UsageError("unknown surface '" + spec.surface + "'");
        try {
            m = rf::assemble(*surface, spec.config, p);
        } catch (const rf::InadmissiblePoint& e) {
            throw cli::UsageError(e.what());
        }
    } else {
        throw cli::UsageError("unknown metric '" + a.metric + "' (flat | polar | sphere:a | assembled:SURFACE,...)");
    }
    const auto rep = rf::ricci(m);
    std::cout << rf::to_json(rep, m).dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ricci-flat metrics from minimal graph surfaces"};
    app.require_subcommand(1);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "verify identities and Ricci flatness at sample points");
    verify->add_option("--surface", va.surface, "catalog surface name");
    verify->add_option("--grid", va.grid_file, "minsurf v1 grid solution file");
    verify->add_option("--param", va.params, "surface parameter key=value")->allow_extra_args(false);
    verify->add_option("--n", va.n, "number of y-blocks");
    verify->add_option("--eps-blocks", va.eps_blocks, "comma-separated block signs");
    verify->add_option("--e0", va.e0);
    verify->add_option("--m1", va.m1);
    verify->add_option("--n1", va.n1);
    verify->add_option("--samples", va.samples);
    verify->add_option("--seed", va.seed);
    verify->add_option("--tol", va.tol, "normalized Ricci tolerance");
    verify->add_option("--identity-tol", va.identity_tol, "normalized identity tolerance");
    verify->add_flag("--oracle", va.oracle, "add the finite-difference Ricci cross-check");
    verify->add_option("--json", va.json_path, "also write the report here");
    verify->add_option("--config", va.config_path, "flat key=value file");
    verify->add_option("--threads", va.threads);

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "solve the minimal-surface Dirichlet problem");
    solve->add_option("--boundary", sa.boundary, "scherk | linear:a,b,c | file:PATH")->required();
    solve->add_option("--ambient", sa.ambient, "k1,k2,k0,eps");
    solve->add_option("--grid", sa.grid, "NX,NY");
    solve->add_option("--domain", sa.domain, "x0,x1,y0,y1");
    solve->add_option("--tol", sa.tol);
    solve->add_option("--max-iter", sa.max_iter);
    solve->add_option("--out", sa.out)->required();

    CurvatureArgs ca;
    auto* curv = app.add_subcommand("curvature", "curvature of a built-in metric at a point");
    curv->add_option("--metric", ca.metric)->required();
    curv->add_option("--point", ca.point, "X,Y")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (verify->parsed()) return run_verify(*verify, va);
        if (solve->parsed()) return run_solve(sa);
        if (curv->parsed()) return run_curvature(ca);
    } catch (const cli::IoError& e) {
        std::cerr << "ricciflat: " << e.what() << '\n';
        return 3;
    } catch (const cli::UsageError& e) {
        std::cerr << "ricciflat: " << e.what() << '\n';
        return 2;
    } catch (const rf::Error& e) {
        std::cerr << "ricciflat: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
