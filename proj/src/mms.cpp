#include "thermel/mms.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>

#include "thermel/diagnostics.hpp"
#include "thermel/operators.hpp"

namespace thermel {

namespace {

constexpr double kPi = 3.14159265358979323846;

// slab-sigma conductivity table: sigma(s) linear from 1 at s=0 to 3 at s=0.5,
// then linear down to 2 at s=1
std::vector<std::pair<double, double>> slab_table() {
    return {{0.0, 1.0}, {0.5, 3.0}, {1.0, 2.0}};
}

double slab_sigma(double s) {
    if (s <= 0.5) return 1.0 + 4.0 * s;
    return 4.0 - 2.0 * s;
}

// integral of 1/sigma over [0, x] in closed form (log antiderivatives of the
// reciprocal of each linear piece)
double slab_resistance(double x) {
    if (x <= 0.5) return std::log1p(4.0 * x) / 4.0;
    return std::log(3.0) / 4.0 + (std::log(3.0) - std::log(4.0 - 2.0 * x)) / 2.0;
}

}  // namespace

double slab_mean_current() { return 1.0 / slab_resistance(1.0); }

std::array<double, 3> ManufacturedCase::current(const std::array<double, 3>& x) const {
    double s = sigma(u_star(x));
    auto gp = grad_phi_star ? grad_phi_star(x) : std::array<double, 3>{0, 0, 0};
    return {s * (gp[0] + e_const[0]), s * (gp[1] + e_const[1]), s * (gp[2] + e_const[2])};
}

ProblemSpec ManufacturedCase::make_spec(const Grid& g, JouleMode joule) const {
    ProblemSpec spec;
    spec.grid = g;
    spec.sigma = sigma;
    spec.mode = BoundaryMode::Electric;
    spec.joule = joule;
    spec.e_const = e_const;

    NodeField u0(g), fphi(g), fu(g), pbc(g);
    bool any_fphi = false, any_fu = false;
    for (int k = 0; k <= g.cells[2]; ++k)
        for (int j = 0; j <= g.cells[1]; ++j)
            for (int i = 0; i <= g.cells[0]; ++i) {
                auto x = g.node_pos(i, j, k);
                u0(i, j, k) = u_star(x);
                if (f_phi) {
                    fphi(i, j, k) = f_phi(x);
                    any_fphi = any_fphi || fphi(i, j, k) != 0.0;
                }
                if (f_u) {
                    fu(i, j, k) = f_u(x);
                    any_fu = any_fu || fu(i, j, k) != 0.0;
                }
                if (phi_trace_nonzero) pbc(i, j, k) = phi_star(x);
            }
    spec.u0 = u0;
    if (any_fphi) spec.f_phi = fphi;
    if (any_fu) spec.f_u = fu;
    if (phi_trace_nonzero) spec.phi_bc = pbc;
    return spec;
}

ManufacturedCase build_case(const std::string& name) {
    ManufacturedCase c;
    c.name = name;
    if (name == "constant-sigma-uniform") {
        // sigma = 2, E0 = e; phi* = 0 is harmonic for any constant sigma, so
        // J = sigma e exactly and -Laplace(u*) = sigma |e|^2 for the
        // quadratic u* = sigma |e|^2 x1 (1 - x1) / 2.  No sources needed.
        const double s0 = 2.0;
        const std::array<double, 3> e{0.3, 0.2, 0.1};
        const double joule = s0 * (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
        c.sigma = ConductivityModel::constant(s0);
        c.e_const = e;
        c.phi_star = [](const std::array<double, 3>&) { return 0.0; };
        c.grad_phi_star = [](const std::array<double, 3>&) {
            return std::array<double, 3>{0, 0, 0};
        };
        c.u_star = [joule](const std::array<double, 3>& x) {
            return 0.5 * joule * x[0] * (1.0 - x[0]);
        };
        return c;
    }
    if (name == "slab-sigma") {
        // u* = x1, so sigma(u*) = sigma(x1): a 1-D layered medium driven by
        // e = e1.  The current is the constant harmonic mean J = 1 / int(1/sigma)
        // and phi*(x1) = J int_0^{x1} 1/sigma - x1 (nonzero lateral trace).
        // Temperature: -Laplace(x1) = 0 = J^2/sigma + f_u gives f_u = -J^2/sigma.
        const double jbar = slab_mean_current();
        c.sigma = ConductivityModel::table(slab_table());
        c.e_const = {1.0, 0.0, 0.0};
        c.phi_trace_nonzero = true;
        c.phi_star = [jbar](const std::array<double, 3>& x) {
            return jbar * slab_resistance(x[0]) - x[0];
        };
        c.grad_phi_star = [jbar](const std::array<double, 3>& x) {
            return std::array<double, 3>{jbar / slab_sigma(x[0]) - 1.0, 0.0, 0.0};
        };
        c.u_star = [](const std::array<double, 3>& x) { return x[0]; };
        c.f_u = [jbar](const std::array<double, 3>& x) {
            return -jbar * jbar / slab_sigma(x[0]);
        };
        return c;
    }
    if (name == "smooth-nonlinear") {
        // phi* = sin(pi x1) sin(pi x2) sin(pi x3), u* = cos(pi x1) cos(pi x2)
        // cos(pi x3), sigmoid sigma, constant e.  Hand-derived sources:
        //   f_phi = sigma'(u*) grad u* . (grad phi* + e) - 3 pi^2 sigma(u*) phi*
        //   f_u   = 3 pi^2 u* - sigma(u*) |grad phi* + e|^2
        ConductivityModel sig = ConductivityModel::bounded_sigmoid(1.0, 2.0, 0.0, 0.5);
        const std::array<double, 3> e{0.2, 0.1, 0.3};
        c.sigma = sig;
        c.e_const = e;
        c.phi_star = [](const std::array<double, 3>& x) {
            return std::sin(kPi * x[0]) * std::sin(kPi * x[1]) * std::sin(kPi * x[2]);
        };
        c.grad_phi_star = [](const std::array<double, 3>& x) {
            double s1 = std::sin(kPi * x[0]), c1 = std::cos(kPi * x[0]);
            double s2 = std::sin(kPi * x[1]), c2 = std::cos(kPi * x[1]);
            double s3 = std::sin(kPi * x[2]), c3 = std::cos(kPi * x[2]);
            return std::array<double, 3>{kPi * c1 * s2 * s3, kPi * s1 * c2 * s3,
                                         kPi * s1 * s2 * c3};
        };
        c.u_star = [](const std::array<double, 3>& x) {
            return std::cos(kPi * x[0]) * std::cos(kPi * x[1]) * std::cos(kPi * x[2]);
        };
        auto grad_u = [](const std::array<double, 3>& x) {
            double s1 = std::sin(kPi * x[0]), c1 = std::cos(kPi * x[0]);
            double s2 = std::sin(kPi * x[1]), c2 = std::cos(kPi * x[1]);
            double s3 = std::sin(kPi * x[2]), c3 = std::cos(kPi * x[2]);
            return std::array<double, 3>{-kPi * s1 * c2 * c3, -kPi * c1 * s2 * c3,
                                         -kPi * c1 * c2 * s3};
        };
        c.f_phi = [sig, e, phi = c.phi_star, gp = c.grad_phi_star, u = c.u_star,
                   grad_u](const std::array<double, 3>& x) {
            double us = u(x);
            auto gu = grad_u(x);
            auto g = gp(x);
            double dot = gu[0] * (g[0] + e[0]) + gu[1] * (g[1] + e[1]) + gu[2] * (g[2] + e[2]);
            return sig.derivative(us) * dot - 3.0 * kPi * kPi * sig(us) * phi(x);
        };
        c.f_u = [sig, e, gp = c.grad_phi_star, u = c.u_star](const std::array<double, 3>& x) {
            auto g = gp(x);
            double E2 = 0.0;
            for (int d = 0; d < 3; ++d) E2 += (g[d] + e[d]) * (g[d] + e[d]);
            return 3.0 * kPi * kPi * u(x) - sig(u(x)) * E2;
        };
        return c;
    }
    throw std::invalid_argument("build_case: unknown case \"" + name + "\"");
}

double source_crosscheck_max_error(const ManufacturedCase& c, int npoints, std::uint64_t seed) {
    // 6th-order central first/second differences of the closed forms
    const double h = 1e-2;
    auto d1 = [&](const std::function<double(std::array<double, 3>)>& f,
                  std::array<double, 3> x, int d) {
        auto at = [&](double t) {
            auto y = x;
            y[d] += t;
            return f(y);
        };
        return (45.0 * (at(h) - at(-h)) - 9.0 * (at(2 * h) - at(-2 * h)) +
                (at(3 * h) - at(-3 * h))) /
               (60.0 * h);
    };
    auto d2 = [&](const std::function<double(std::array<double, 3>)>& f,
                  std::array<double, 3> x, int d) {
        auto at = [&](double t) {
            auto y = x;
            y[d] += t;
            return f(y);
        };
        return (-490.0 * at(0.0) + 270.0 * (at(h) + at(-h)) - 27.0 * (at(2 * h) + at(-2 * h)) +
                2.0 * (at(3 * h) + at(-3 * h))) /
               (180.0 * h * h);
    };

    auto phi = [&](std::array<double, 3> x) { return c.phi_star(x); };
    auto u = [&](std::array<double, 3> x) { return c.u_star(x); };
    auto flux = [&](std::array<double, 3> x, int d) {
        auto jv = c.current(x);
        return jv[d];
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.1, 0.9);
    double worst = 0.0;
    for (int n = 0; n < npoints; ++n) {
        std::array<double, 3> x{unif(rng), unif(rng), unif(rng)};
        // f_phi = div(sigma(u*)(grad phi* + e))
        double divJ = 0.0;
        for (int d = 0; d < 3; ++d)
            divJ += d1([&](std::array<double, 3> y) { return flux(y, d); }, x, d);
        double fphi = c.f_phi ? c.f_phi(x) : 0.0;
        worst = std::max(worst, std::abs(divJ - fphi));
        // f_u = -Laplace(u*) - sigma(u*)|grad phi* + e|^2
        double lap_u = 0.0;
        for (int d = 0; d < 3; ++d) lap_u += d2(u, x, d);
        double E2 = 0.0;
        for (int d = 0; d < 3; ++d) {
            double gd = d1(phi, x, d) + c.e_const[d];
            E2 += gd * gd;
        }
        double fu = c.f_u ? c.f_u(x) : 0.0;
        worst = std::max(worst, std::abs(-lap_u - c.sigma(c.u_star(x)) * E2 - fu));
    }
    return worst;
}

ConvergenceTable convergence_study(const ManufacturedCase& c, const std::vector<int>& grids,
                                   JouleMode joule) {
    if (grids.size() < 2)
        throw std::invalid_argument("convergence_study: need at least 2 grids");
    ConvergenceTable table;
    table.case_name = c.name;
    for (int n : grids) {
        Grid g(n, n, n);
        ProblemSpec spec = c.make_spec(g, joule);
        FixedPointResult res = run_fixed_point(spec);

        ConvergenceRow row;
        row.cells = g.cells;
        row.converged = res.diagnostics.converged;
        row.picard_iterations = int(res.diagnostics.iterations.size());

        NodeField du(g), dphi(g);
        for (int k = 0; k <= g.cells[2]; ++k)
            for (int j = 0; j <= g.cells[1]; ++j)
                for (int i = 0; i <= g.cells[0]; ++i) {
                    auto x = g.node_pos(i, j, k);
                    du(i, j, k) = res.u(i, j, k) - c.u_star(x);
                    dphi(i, j, k) = res.phi(i, j, k) - c.phi_star(x);
                }
        row.err_u_l2 = norm2_nodes(du);
        row.err_u_max = max_abs_nodes(du);
        row.err_phi_l2 = norm2_nodes(dphi);
        row.err_phi_max = max_abs_nodes(dphi);

        EdgeField dj(g);
        for (int cc = 0; cc < 3; ++cc) {
            const Box3& b = dj.box(cc);
            for (int k = 0; k < b.dims[2]; ++k)
                for (int j = 0; j < b.dims[1]; ++j)
                    for (int i = 0; i < b.dims[0]; ++i) {
                        auto x = g.edge_pos(cc, i, j, k);
                        dj.at(cc, i, j, k) = res.J.at(cc, i, j, k) - c.current(x)[cc];
                    }
        }
        row.err_j_l2 = norm2_edges(dj);
        for (int cc = 0; cc < 3; ++cc)
            for (double v : dj.comp(cc)) row.err_j_max = std::max(row.err_j_max, std::abs(v));

        table.rows.push_back(row);
    }
    for (std::size_t r = 1; r < table.rows.size(); ++r) {
        auto order = [](double coarse, double fine) {
            return (coarse > 0.0 && fine > 0.0) ? std::log2(coarse / fine) : 0.0;
        };
        table.order_u.push_back(order(table.rows[r - 1].err_u_l2, table.rows[r].err_u_l2));
        table.order_phi.push_back(order(table.rows[r - 1].err_phi_l2, table.rows[r].err_phi_l2));
        table.order_j.push_back(order(table.rows[r - 1].err_j_l2, table.rows[r].err_j_l2));
    }
    return table;
}

// ---------------------------------------------------------------------------
// dense oracle
// ---------------------------------------------------------------------------

namespace {

struct DenseAssembly {
    const Grid& g;
    Box3 nodes;
    explicit DenseAssembly(const Grid& grid)
        : g(grid), nodes(grid.nodes(0), grid.nodes(1), grid.nodes(2)) {}
    long id(int i, int j, int k) const { return long(nodes.idx(i, j, k)); }
    bool boundary(int i, int j, int k) const {
        return i == 0 || i == g.cells[0] || j == 0 || j == g.cells[1] || k == 0 ||
               k == g.cells[2];
    }
    template <typename Fn>
    void for_each_edge(Fn&& fn) const {
        for (int c = 0; c < 3; ++c) {
            std::array<int, 3> step{c == 0, c == 1, c == 2};
            for (int k = 0; k < g.edge_dim(c, 2); ++k)
                for (int j = 0; j < g.edge_dim(c, 1); ++j)
                    for (int i = 0; i < g.edge_dim(c, 0); ++i)
                        fn(c, std::array<int, 3>{i, j, k},
                           std::array<int, 3>{i + step[0], j + step[1], k + step[2]});
        }
    }
};

}  // namespace

DenseStep dense_oracle(const ProblemSpec& spec, const NodeField& u) {
    const Grid& g = spec.grid;
    if (g.node_count() > 5000)
        throw std::invalid_argument("dense_oracle: grid exceeds the 5000-node cap");
    spec.validate();

    DenseAssembly asmb(g);
    const long N = long(g.node_count());

    // conductivity at nodes and on edges (harmonic mean), from scratch
    std::vector<double> sig_node(N);
    for (int k = 0; k <= g.cells[2]; ++k)
        for (int j = 0; j <= g.cells[1]; ++j)
            for (int i = 0; i <= g.cells[0]; ++i) sig_node[asmb.id(i, j, k)] = spec.sigma(u(i, j, k));
    auto sig_edge = [&](int c, const std::array<int, 3>& p0, const std::array<int, 3>& p1) {
        (void)c;
        double a = sig_node[asmb.id(p0[0], p0[1], p0[2])];
        double b = sig_node[asmb.id(p1[0], p1[1], p1[2])];
        return 2.0 * a * b / (a + b);
    };
    auto e0_edge = [&](int c, const std::array<int, 3>& p0, const std::array<int, 3>& p1) {
        double v = spec.e_const[c];
        if (spec.psi0)
            v += ((*spec.psi0)(p1[0], p1[1], p1[2]) - (*spec.psi0)(p0[0], p0[1], p0[2])) / g.h[c];
        return v;
    };

    Eigen::VectorXd phi_vec(N);
    if (spec.mode == BoundaryMode::Electric) {
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(N);
        for (int k = 0; k <= g.cells[2]; ++k)
            for (int j = 0; j <= g.cells[1]; ++j)
                for (int i = 0; i <= g.cells[0]; ++i)
                    if (asmb.boundary(i, j, k)) {
                        long n = asmb.id(i, j, k);
                        A(n, n) = 1.0;
                        b(n) = spec.phi_bc ? (*spec.phi_bc)(i, j, k) : 0.0;
                    }
        asmb.for_each_edge([&](int c, std::array<int, 3> p0, std::array<int, 3> p1) {
            double se = sig_edge(c, p0, p1);
            double w = se / (g.h[c] * g.h[c]);
            long n0 = asmb.id(p0[0], p0[1], p0[2]);
            long n1 = asmb.id(p1[0], p1[1], p1[2]);
            double v = se * e0_edge(c, p0, p1) / g.h[c];
            if (!asmb.boundary(p0[0], p0[1], p0[2])) {
                A(n0, n0) += w;
                A(n0, n1) -= w;
                b(n0) += v;  // div(sigma E0) contribution at the lower endpoint
            }
            if (!asmb.boundary(p1[0], p1[1], p1[2])) {
                A(n1, n1) += w;
                A(n1, n0) -= w;
                b(n1) -= v;
            }
        });
        if (spec.f_phi)
            for (int k = 1; k < g.cells[2]; ++k)
                for (int j = 1; j < g.cells[1]; ++j)
                    for (int i = 1; i < g.cells[0]; ++i)
                        b(asmb.id(i, j, k)) -= (*spec.f_phi)(i, j, k);
        phi_vec = A.partialPivLu().solve(b);
    } else {
        const double ve = g.cell_volume();
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N, N);
        asmb.for_each_edge([&](int c, std::array<int, 3> p0, std::array<int, 3> p1) {
            // dual-volume edge weight: halved per transversal boundary plane
            double wv = ve;
            for (int a = 0; a < 3; ++a)
                if (a != c && (p0[a] == 0 || p0[a] == g.cells[a])) wv *= 0.5;
            double w = sig_edge(c, p0, p1) / (g.h[c] * g.h[c]) * wv;
            long n0 = asmb.id(p0[0], p0[1], p0[2]);
            long n1 = asmb.id(p1[0], p1[1], p1[2]);
            K(n0, n0) += w;
            K(n1, n1) += w;
            K(n0, n1) -= w;
            K(n1, n0) -= w;
        });
        Eigen::VectorXd b = Eigen::VectorXd::Zero(N);
        for (int c = 0; c < 3; ++c) {
            const int a = (c + 1) % 3;
            const int d = (c + 2) % 3;
            const double area = ve / g.h[c];
            for (int side = 0; side < 2; ++side) {
                std::array<int, 3> p{0, 0, 0};
                p[c] = side == 0 ? 0 : g.cells[c];
                for (int ia = 0; ia < g.cells[a]; ++ia)
                    for (int id = 0; id < g.cells[d]; ++id) {
                        p[a] = ia;
                        p[d] = id;
                        double w = spec.flux_g->at(c, p[0], p[1], p[2]) * area * 0.25;
                        for (int da = 0; da < 2; ++da)
                            for (int dd = 0; dd < 2; ++dd) {
                                std::array<int, 3> q = p;
                                q[a] += da;
                                q[d] += dd;
                                b(asmb.id(q[0], q[1], q[2])) += w;
                            }
                    }
            }
        }
        phi_vec = K.completeOrthogonalDecomposition().solve(b);
        phi_vec.array() -= phi_vec.mean();
    }

    NodeField phi(g);
    for (long n = 0; n < N; ++n) phi.data()[n] = phi_vec(n);

    // current on edges
    EdgeField J(g);
    asmb.for_each_edge([&](int c, std::array<int, 3> p0, std::array<int, 3> p1) {
        double gp = (phi(p1[0], p1[1], p1[2]) - phi(p0[0], p0[1], p0[2])) / g.h[c];
        double e0 = spec.mode == BoundaryMode::Electric ? e0_edge(c, p0, p1) : 0.0;
        J.at(c, p0[0], p0[1], p0[2]) = sig_edge(c, p0, p1) * (gp + e0);
    });

    // Joule right-hand side, assembled independently
    NodeField phi0 = build_phi0(spec);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
    if (spec.joule == JouleMode::Pointwise) {
        for (int k = 1; k < g.cells[2]; ++k)
            for (int j = 1; j < g.cells[1]; ++j)
                for (int i = 1; i < g.cells[0]; ++i) {
                    std::array<int, 3> p{i, j, k};
                    double total = 0.0;
                    for (int c = 0; c < 3; ++c) {
                        std::array<int, 3> q = p;
                        q[c] -= 1;
                        double a = J.at(c, q[0], q[1], q[2]);
                        double b2 = J.at(c, p[0], p[1], p[2]);
                        total += 0.5 * (a * a + b2 * b2);
                    }
                    rhs(asmb.id(i, j, k)) = total / sig_node[asmb.id(i, j, k)];
                }
    } else {
        // div[(phi + phi0) J] with the -(phi+phi0) f_phi source correction
        auto w_node = [&](int i, int j, int k) { return phi(i, j, k) + phi0(i, j, k); };
        for (int k = 1; k < g.cells[2]; ++k)
            for (int j = 1; j < g.cells[1]; ++j)
                for (int i = 1; i < g.cells[0]; ++i) {
                    std::array<int, 3> p{i, j, k};
                    double d = 0.0;
                    for (int c = 0; c < 3; ++c) {
                        std::array<int, 3> q = p, r = p;
                        q[c] += 1;
                        r[c] -= 1;
                        double hi = 0.5 * (w_node(p[0], p[1], p[2]) + w_node(q[0], q[1], q[2])) *
                                    J.at(c, p[0], p[1], p[2]);
                        double lo = 0.5 * (w_node(r[0], r[1], r[2]) + w_node(p[0], p[1], p[2])) *
                                    J.at(c, r[0], r[1], r[2]);
                        d += (hi - lo) / g.h[c];
                    }
                    rhs(asmb.id(i, j, k)) = d;
                    if (spec.f_phi)
                        rhs(asmb.id(i, j, k)) -= w_node(i, j, k) * (*spec.f_phi)(i, j, k);
                }
    }
    if (spec.f_u)
        for (int k = 1; k < g.cells[2]; ++k)
            for (int j = 1; j < g.cells[1]; ++j)
                for (int i = 1; i < g.cells[0]; ++i)
                    rhs(asmb.id(i, j, k)) += (*spec.f_u)(i, j, k);

    // temperature: dense 7-point Laplacian with Dirichlet trace u0
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(N, N);
    for (int k = 0; k <= g.cells[2]; ++k)
        for (int j = 0; j <= g.cells[1]; ++j)
            for (int i = 0; i <= g.cells[0]; ++i) {
                long n = asmb.id(i, j, k);
                if (asmb.boundary(i, j, k)) {
                    L(n, n) = 1.0;
                    rhs(n) = spec.u0(i, j, k);
                    continue;
                }
                for (int c = 0; c < 3; ++c) {
                    double w = 1.0 / (g.h[c] * g.h[c]);
                    std::array<int, 3> q{i, j, k}, r{i, j, k};
                    q[c] += 1;
                    r[c] -= 1;
                    L(n, n) += 2.0 * w;
                    L(n, asmb.id(q[0], q[1], q[2])) -= w;
                    L(n, asmb.id(r[0], r[1], r[2])) -= w;
                }
            }
    Eigen::VectorXd t_vec = L.partialPivLu().solve(rhs);

    DenseStep out;
    out.phi = phi;
    out.u_next = NodeField(g);
    const double theta = spec.picard.theta;
    for (long n = 0; n < N; ++n)
        out.u_next.data()[n] = (1.0 - theta) * u.data()[n] + theta * t_vec(n);
    return out;
}

}  // namespace thermel
