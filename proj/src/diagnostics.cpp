#include "thermel/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thermel/operators.hpp"

namespace thermel {

namespace {

EstimateReport make_report(std::string name, double lhs, double rhs, double slack,
                           bool advisory) {
    EstimateReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.ratio = rhs > 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    r.slack = slack;
    r.advisory = advisory;
    r.pass = advisory || r.ratio <= 1.0 + slack;
    return r;
}

double trapezoid_weight_1d(int i, int n) { return (i == 0 || i == n) ? 0.5 : 1.0; }

/// Node index lattice with m intervals per axis, nested across budgets when m
/// divides the cell counts: lattice(m) is a subset of lattice(2m).
std::vector<std::array<int, 3>> stratified_nodes(const Grid& g, int budget) {
    int m = 1;
    while ((m + 2) * (m + 2) * (m + 2) <= budget && 2 * m <= std::min({g.cells[0], g.cells[1], g.cells[2]}))
        m *= 2;
    std::vector<std::array<int, 3>> out;
    for (int k = 0; k <= m; ++k)
        for (int j = 0; j <= m; ++j)
            for (int i = 0; i <= m; ++i)
                out.push_back({i * g.cells[0] / m, j * g.cells[1] / m, k * g.cells[2] / m});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::vector<EstimateReport> check_energy_bounds(const ProblemSpec& spec, const NodeField& phi,
                                                const EdgeField& J, double slack) {
    std::vector<EstimateReport> out;
    const double jn = norm2_edges(J);
    if (spec.mode == BoundaryMode::Electric) {
        EdgeField E0 = build_E0(spec);
        out.push_back(make_report("current_l2_vs_applied_field", jn,
                                  spec.sigma.sigma_max() * norm2_edges(E0), slack, false));
        out.push_back(make_report("potential_sup_vs_field_l4", max_abs_nodes(phi),
                                  lq_norm_nodes(build_phi0(spec), 4.0) + l3_norm_edges(E0),
                                  std::numeric_limits<double>::infinity(), true));
    } else if (spec.curl_h0) {
        out.push_back(make_report(
            "current_l2_vs_curl_h0", jn,
            spec.sigma.sigma_max() / spec.sigma.sigma_min() * norm2_edges(*spec.curl_h0), slack,
            false));
    }
    return out;
}

double campanato_seminorm(const NodeField& u, double mu, int center_budget) {
    const Grid& g = u.grid();
    if (!(mu > 0.0) || mu > 5.0)
        throw std::invalid_argument("campanato_seminorm: exponent must lie in (0,5]");
    if (center_budget < 1)
        throw std::invalid_argument("campanato_seminorm: center budget must be positive");

    const double hmax = std::max({g.h[0], g.h[1], g.h[2]});
    const double diam = std::sqrt(g.extent[0] * g.extent[0] + g.extent[1] * g.extent[1] +
                                  g.extent[2] * g.extent[2]);
    const double vol = g.cell_volume();
    auto centers = stratified_nodes(g, center_budget);

    double best = 0.0;
    for (const auto& c : centers) {
        auto xc = g.node_pos(c[0], c[1], c[2]);
        // shift by the center value: oscillation is shift-invariant, and the
        // shifted accumulation avoids cancellation for near-constant fields
        const double shift = u(c[0], c[1], c[2]);
        for (double r = 2.0 * hmax; r / 2.0 < diam; r *= 2.0) {
            double sum = 0.0, sumsq = 0.0;
            std::size_t count = 0;
            const double r2 = r * r;
            // bounding box of the ball in index space
            int i0 = std::max(0, int(std::floor((xc[0] - r) / g.h[0])));
            int i1 = std::min(g.cells[0], int(std::ceil((xc[0] + r) / g.h[0])));
            int j0 = std::max(0, int(std::floor((xc[1] - r) / g.h[1])));
            int j1 = std::min(g.cells[1], int(std::ceil((xc[1] + r) / g.h[1])));
            int k0 = std::max(0, int(std::floor((xc[2] - r) / g.h[2])));
            int k1 = std::min(g.cells[2], int(std::ceil((xc[2] + r) / g.h[2])));
            for (int k = k0; k <= k1; ++k)
                for (int j = j0; j <= j1; ++j)
                    for (int i = i0; i <= i1; ++i) {
                        double dx = i * g.h[0] - xc[0];
                        double dy = j * g.h[1] - xc[1];
                        double dz = k * g.h[2] - xc[2];
                        if (dx * dx + dy * dy + dz * dz >= r2) continue;
                        double v = u(i, j, k) - shift;
                        sum += v;
                        sumsq += v * v;
                        ++count;
                    }
            if (count == 0) continue;
            double mean = sum / double(count);
            double osc = (sumsq - mean * sum) * vol;  // sum of (v - mean)^2 * vol
            best = std::max(best, std::pow(r, -mu) * std::max(osc, 0.0));
        }
    }
    return best;
}

double holder_seminorm(const NodeField& u, double alpha, int pair_budget) {
    const Grid& g = u.grid();
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("holder_seminorm: alpha must lie in (0,1]");
    if (pair_budget < 1)
        throw std::invalid_argument("holder_seminorm: pair budget must be positive");

    double best = 0.0;
    // all nearest-neighbor pairs
    for (int c = 0; c < 3; ++c) {
        const double w = std::pow(g.h[c], -alpha);
        std::array<int, 3> step{c == 0, c == 1, c == 2};
        for (int k = 0; k + step[2] <= g.cells[2]; ++k)
            for (int j = 0; j + step[1] <= g.cells[1]; ++j)
                for (int i = 0; i + step[0] <= g.cells[0]; ++i)
                    best = std::max(
                        best, std::abs(u(i + step[0], j + step[1], k + step[2]) - u(i, j, k)) * w);
    }
    // all pairs of a fixed physical sublattice (nested across budgets)
    int node_budget = 2;
    while (node_budget * (node_budget + 1) / 2 < pair_budget) ++node_budget;
    auto nodes = stratified_nodes(g, node_budget);
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = a + 1; b < nodes.size(); ++b) {
            auto xa = g.node_pos(nodes[a][0], nodes[a][1], nodes[a][2]);
            auto xb = g.node_pos(nodes[b][0], nodes[b][1], nodes[b][2]);
            double d = std::sqrt((xa[0] - xb[0]) * (xa[0] - xb[0]) +
                                 (xa[1] - xb[1]) * (xa[1] - xb[1]) +
                                 (xa[2] - xb[2]) * (xa[2] - xb[2]));
            if (d == 0.0) continue;
            double q = std::abs(u(nodes[a][0], nodes[a][1], nodes[a][2]) -
                                u(nodes[b][0], nodes[b][1], nodes[b][2])) /
                       std::pow(d, alpha);
            best = std::max(best, q);
        }
    return best;
}

UniquenessThreshold uniqueness_threshold(const ConductivityModel& model) {
    UniquenessThreshold t;
    t.sigma1 = model.sigma_min();
    t.sigma2 = model.sigma_max();
    t.lipschitz = model.lipschitz();
    t.s3 = sobolev_s3();
    if (t.lipschitz == 0.0) {
        t.kappa_star = std::numeric_limits<double>::infinity();
    } else {
        t.kappa_star =
            t.s3 * t.sigma1 / std::sqrt((2.0 * t.sigma2 / t.sigma1 + 1.0) * t.lipschitz);
    }
    return t;
}

ContractionProbe contraction_probe(const ProblemSpec& spec, double perturbation_scale) {
    spec.validate();
    ContractionProbe probe;
    probe.threshold = uniqueness_threshold(spec.sigma);

    auto [u_init, rep] = harmonic_extension(spec.u0, spec.linear);
    if (!rep.converged)
        throw std::runtime_error("contraction_probe: harmonic extension did not converge");

    NodeField u_pert = u_init;
    {
        const Grid& g = spec.grid;
        const double pi = 3.14159265358979323846;
        for (int k = 0; k <= g.cells[2]; ++k)
            for (int j = 0; j <= g.cells[1]; ++j)
                for (int i = 0; i <= g.cells[0]; ++i) {
                    auto x = g.node_pos(i, j, k);
                    u_pert(i, j, k) += perturbation_scale * std::sin(pi * x[0] / g.extent[0]) *
                                       std::sin(pi * x[1] / g.extent[1]) *
                                       std::sin(pi * x[2] / g.extent[2]);
                }
    }

    probe.run_a = run_fixed_point_from(spec, u_init);
    probe.run_b = run_fixed_point_from(spec, u_pert);
    for (const auto& it : probe.run_a.diagnostics.iterations)
        if (it.contraction > 0.0) probe.factors_a.push_back(it.contraction);
    for (const auto& it : probe.run_b.diagnostics.iterations)
        if (it.contraction > 0.0) probe.factors_b.push_back(it.contraction);
    probe.both_converged =
        probe.run_a.diagnostics.converged && probe.run_b.diagnostics.converged;
    if (probe.both_converged) {
        NodeField d = probe.run_a.u;
        for (std::size_t i = 0; i < d.data().size(); ++i) d.data()[i] -= probe.run_b.u.data()[i];
        probe.limit_gap = norm2_nodes(d);
    }
    probe.j_l3 = l3_norm_edges(probe.run_a.J);
    return probe;
}

double lq_norm_nodes(const NodeField& u, double q) {
    const Grid& g = u.grid();
    const double vol = g.cell_volume();
    double s = 0.0;
    for (int k = 0; k <= g.cells[2]; ++k)
        for (int j = 0; j <= g.cells[1]; ++j)
            for (int i = 0; i <= g.cells[0]; ++i) {
                double w = trapezoid_weight_1d(i, g.cells[0]) * trapezoid_weight_1d(j, g.cells[1]) *
                           trapezoid_weight_1d(k, g.cells[2]);
                s += w * std::pow(std::abs(u(i, j, k)), q);
            }
    return std::pow(s * vol, 1.0 / q);
}

double l3_norm_edges(const EdgeField& J) {
    const Grid& g = J.grid();
    const double vol = g.cell_volume();
    double s = 0.0;
    for (int c = 0; c < 3; ++c) {
        const Box3& b = J.box(c);
        for (int k = 0; k < b.dims[2]; ++k)
            for (int j = 0; j < b.dims[1]; ++j)
                for (int i = 0; i < b.dims[0]; ++i) {
                    std::array<int, 3> p{i, j, k};
                    double w = 1.0;
                    for (int a = 0; a < 3; ++a)
                        if (a != c) w *= trapezoid_weight_1d(p[a], g.cells[a]);
                    double v = std::abs(J.at(c, i, j, k));
                    s += w * v * v * v;
                }
    }
    return std::cbrt(s * vol);
}

double max_abs_nodes(const NodeField& u) {
    double m = 0.0;
    for (double v : u.data()) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace thermel
