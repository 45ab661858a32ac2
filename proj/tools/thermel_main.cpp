// thermel: steady-state thermoelectric solver on a staggered grid.
//
// Subcommands: solve, verify, contraction-study, regularity-study,
// reconstruct.  All numeric parameters live in the config file; see README.

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "thermel/config.hpp"
#include "thermel/diagnostics.hpp"
#include "thermel/io.hpp"
#include "thermel/mms.hpp"

namespace {

using namespace thermel;

std::string join(const std::string& dir, const std::string& name) { return dir + "/" + name; }

std::vector<std::string> picard_header() {
    return {"iteration", "du_norm",      "dj_norm",     "contraction",
            "energy_ratio", "potential_cg_iters", "temperature_cg_iters"};
}

std::vector<std::vector<std::string>> picard_rows(const PicardDiagnostics& d) {
    std::vector<std::vector<std::string>> rows{picard_header()};
    for (std::size_t i = 0; i < d.iterations.size(); ++i) {
        const auto& it = d.iterations[i];
        rows.push_back({std::to_string(i + 1), fmt_double(it.du_norm), fmt_double(it.dj_norm),
                        fmt_double(it.contraction), fmt_double(it.energy_ratio),
                        std::to_string(it.potential.iterations),
                        std::to_string(it.temperature.iterations)});
    }
    return rows;
}

void write_estimates(const std::string& path, const std::vector<EstimateReport>& reports) {
    std::vector<std::vector<std::string>> rows{
        {"name", "lhs", "rhs", "ratio", "slack", "pass", "advisory"}};
    for (const auto& r : reports)
        rows.push_back({r.name, fmt_double(r.lhs), fmt_double(r.rhs), fmt_double(r.ratio),
                        fmt_double(r.slack), r.pass ? "true" : "false",
                        r.advisory ? "true" : "false"});
    write_file_atomic(path, to_csv(rows));
}

void write_solution_fields(const std::string& out, const Grid& g, const NodeField& u,
                           const NodeField& phi, const EdgeField& J) {
    auto jn = edge_to_node_components(J);
    write_file_atomic(join(out, "fields.vtk"),
                      vtk_structured_points(g, "thermel solution",
                                            {{"temperature", &u}, {"potential", &phi}},
                                            {{"current", &jn}}));
    write_raw_node(join(out, "u.f64"), u);
    write_raw_node(join(out, "phi.f64"), phi);
    write_raw_edge(join(out, "J.f64"), J);
}

bool hard_invariants_ok(const ProblemSpec& spec, const FixedPointResult& res,
                        std::vector<EstimateReport>& reports) {
    reports = check_energy_bounds(spec, res.phi, res.J, 1e-6);
    bool ok = res.diagnostics.converged;
    for (const auto& r : reports) ok = ok && r.pass;
    // current conservation at interior nodes
    double jn = norm2_edges(res.J);
    if (jn > 0.0) {
        double opnorm = 2.0 * (1.0 / spec.grid.h[0] + 1.0 / spec.grid.h[1] + 1.0 / spec.grid.h[2]);
        ok = ok && norm2_nodes(div_edge(res.J)) <= 10.0 * spec.linear.tol * opnorm * jn;
    }
    return ok;
}

int cmd_solve(const RunConfig& cfg, const std::string& out) {
    ProblemSpec spec = cfg.make_problem();
    FixedPointResult res = run_fixed_point(spec);
    write_file_atomic(join(out, "diagnostics.csv"), to_csv(picard_rows(res.diagnostics)));
    std::vector<EstimateReport> reports;
    bool ok = hard_invariants_ok(spec, res, reports);
    write_estimates(join(out, "estimates.csv"), reports);
    if (cfg.write_fields) write_solution_fields(out, spec.grid, res.u, res.phi, res.J);
    std::cout << (res.diagnostics.converged ? "converged" : "NOT converged") << " after "
              << res.diagnostics.iterations.size() << " iterations\n";
    for (const auto& r : reports)
        std::cout << "  " << r.name << ": ratio " << fmt_double(r.ratio)
                  << (r.advisory ? " (advisory)" : r.pass ? " (pass)" : " (FAIL)") << '\n';
    return ok ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg, const std::string& out, std::uint64_t seed) {
    const std::vector<int> grids{8, 16, 32};
    bool ok = true;
    for (const std::string name : {"constant-sigma-uniform", "slab-sigma", "smooth-nonlinear"}) {
        ManufacturedCase c = build_case(name);
        double cross;
        if (name == "slab-sigma") {
            // the conductivity table has a kink at x1 = 1/2, so finite-difference
            // stencils cannot straddle it; check the closed-form identities
            // J = (Jbar, 0, 0) and f_u = -Jbar^2 / sigma pointwise instead
            const double jbar = slab_mean_current();
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> unif(0.05, 0.95);
            cross = 0.0;
            for (int n = 0; n < 100; ++n) {
                std::array<double, 3> x{unif(rng), unif(rng), unif(rng)};
                auto J = c.current(x);
                cross = std::max({cross, std::abs(J[0] - jbar), std::abs(J[1]), std::abs(J[2]),
                                  std::abs(c.f_u(x) + jbar * jbar / c.sigma(c.u_star(x)))});
            }
        } else {
            cross = source_crosscheck_max_error(c, 100, seed);
        }
        ConvergenceTable t = convergence_study(c, grids, cfg.joule);
        std::vector<std::vector<std::string>> rows{{"cells", "err_u_l2", "err_u_max", "err_phi_l2",
                                                    "err_phi_max", "err_j_l2", "err_j_max",
                                                    "order_u", "order_phi", "order_j",
                                                    "converged"}};
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const auto& row = t.rows[r];
            auto ord = [&](const std::vector<double>& v) {
                return r == 0 ? std::string("") : fmt_double(v[r - 1]);
            };
            rows.push_back({std::to_string(row.cells[0]), fmt_double(row.err_u_l2),
                            fmt_double(row.err_u_max), fmt_double(row.err_phi_l2),
                            fmt_double(row.err_phi_max), fmt_double(row.err_j_l2),
                            fmt_double(row.err_j_max), ord(t.order_u), ord(t.order_phi),
                            ord(t.order_j), row.converged ? "true" : "false"});
            ok = ok && row.converged;
        }
        write_file_atomic(join(out, "verify_" + name + ".csv"), to_csv(rows));

        bool case_ok = cross <= 1e-6;
        if (name == "constant-sigma-uniform") {
            for (const auto& row : t.rows)
                case_ok = case_ok && row.err_u_l2 <= 100.0 * cfg.linear.tol &&
                          row.err_phi_l2 <= 100.0 * cfg.linear.tol;
        } else if (name == "slab-sigma") {
            for (double o : t.order_j) case_ok = case_ok && o >= 1.8;
        } else {
            for (double o : t.order_u) case_ok = case_ok && o >= 1.8;
            for (double o : t.order_phi) case_ok = case_ok && o >= 1.8;
        }
        std::cout << name << ": " << (case_ok ? "ok" : "FAIL")
                  << " (source cross-check " << fmt_double(cross) << ")\n";
        ok = ok && case_ok;
    }
    return ok ? 0 : 1;
}

int cmd_contraction(const RunConfig& cfg, const std::string& out) {
    const std::vector<double> scales{0.01, 0.0215, 0.0464, 0.1, 0.215, 0.464, 1.0};
    std::vector<std::vector<std::string>> rows{{"scale", "max_factor", "limit_gap", "j_l3",
                                                "kappa_star", "converged"}};
    bool ok = true;
    for (double s : scales) {
        RunConfig scaled = cfg;
        for (int d = 0; d < 3; ++d) scaled.e_const[d] *= s;
        scaled.flux_amplitude *= s;
        ProblemSpec spec = scaled.make_problem();
        ContractionProbe probe = contraction_probe(spec, 0.1);
        double maxf = 0.0;
        for (double f : probe.factors_a) maxf = std::max(maxf, f);
        for (double f : probe.factors_b) maxf = std::max(maxf, f);
        rows.push_back({fmt_double(s), fmt_double(maxf), fmt_double(probe.limit_gap),
                        fmt_double(probe.j_l3), fmt_double(probe.threshold.kappa_star),
                        probe.both_converged ? "true" : "false"});
        ok = ok && probe.both_converged;
        std::cout << "scale " << fmt_double(s) << ": max factor " << fmt_double(maxf)
                  << ", limit gap " << fmt_double(probe.limit_gap) << '\n';
    }
    write_file_atomic(join(out, "contraction.csv"), to_csv(rows));
    return ok ? 0 : 1;
}

int cmd_regularity(const RunConfig& cfg, const std::string& out) {
    const std::vector<int> grids{16, 32, 64};
    std::vector<std::vector<std::string>> rows{
        {"cells", "holder_alpha_025", "campanato_mu_35", "converged"}};
    bool ok = true;
    for (int n : grids) {
        RunConfig c = cfg;
        c.cells = {n, n, n};
        ProblemSpec spec = c.make_problem();
        FixedPointResult res = run_fixed_point(spec);
        double hs = holder_seminorm(res.u, 0.25, 4096);
        double cs = campanato_seminorm(res.u, 3.5, 128);
        rows.push_back({std::to_string(n), fmt_double(hs), fmt_double(cs),
                        res.diagnostics.converged ? "true" : "false"});
        ok = ok && res.diagnostics.converged;
        std::cout << n << "^3: holder " << fmt_double(hs) << ", campanato " << fmt_double(cs)
                  << '\n';
    }
    write_file_atomic(join(out, "regularity.csv"), to_csv(rows));
    return ok ? 0 : 1;
}

int cmd_reconstruct(const RunConfig& cfg, const std::string& out) {
    ProblemSpec spec = cfg.make_problem();
    FixedPointResult res = run_fixed_point(spec);
    HReconstruction rec = reconstruct_H(res.J, 1e-10, 0);
    std::vector<std::vector<std::string>> rows{
        {"curl_rel_residual", "div_rel", "cg_iterations", "converged"}};
    rows.push_back({fmt_double(rec.curl_rel_residual), fmt_double(rec.div_rel),
                    std::to_string(rec.report.iterations),
                    rec.report.converged ? "true" : "false"});
    write_file_atomic(join(out, "reconstruct.csv"), to_csv(rows));
    if (cfg.write_fields) {
        auto hn = face_to_node_components(rec.H);
        write_file_atomic(join(out, "H.vtk"),
                          vtk_structured_points(spec.grid, "reconstructed magnetic field", {},
                                                {{"H", &hn}}));
        write_raw_face(join(out, "H.f64"), rec.H);
        write_solution_fields(out, spec.grid, res.u, res.phi, res.J);
    }
    std::cout << "curl residual " << fmt_double(rec.curl_rel_residual) << ", div residual "
              << fmt_double(rec.div_rel) << '\n';
    double hnorm = norm2_faces(rec.H);
    bool ok = res.diagnostics.converged && rec.report.converged &&
              (hnorm == 0.0 || norm2_cells(div_face(rec.H)) <= 1e-8 * hnorm);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"steady-state thermoelectric solver (staggered-grid Picard iteration)"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    std::uint64_t seed = 0;
    int threads = 0;
    app.add_option("--config", config_path, "config file path")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "seed for sampled diagnostics");
    app.add_option("--threads", threads, "inner solver threads (0 = library default)");

    auto* solve = app.add_subcommand("solve", "run the coupled fixed-point solver");
    auto* verify = app.add_subcommand("verify", "manufactured-solution convergence studies");
    auto* contraction =
        app.add_subcommand("contraction-study", "two-start uniqueness probe over a field sweep");
    auto* regularity =
        app.add_subcommand("regularity-study", "temperature seminorms under grid refinement");
    auto* reconstruct =
        app.add_subcommand("reconstruct", "solve, then recover H from the current");

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif

    try {
        RunConfig cfg = load_config(config_path);
        if (solve->parsed()) return cmd_solve(cfg, out_dir);
        if (verify->parsed()) return cmd_verify(cfg, out_dir, seed);
        if (contraction->parsed()) return cmd_contraction(cfg, out_dir);
        if (regularity->parsed()) return cmd_regularity(cfg, out_dir);
        if (reconstruct->parsed()) return cmd_reconstruct(cfg, out_dir);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    }
    return 2;
}
