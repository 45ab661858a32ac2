#include "thermel/linear_solve.hpp"

#include <cmath>
#include <functional>

#include "thermel/detail/cg.hpp"
#include <stdexcept>

namespace thermel {

namespace {

// Flattening helpers between interior nodes and raw CG vectors.
struct InteriorMap {
    Grid g;
    explicit InteriorMap(const Grid& grid) : g(grid) {}
    std::size_t size() const {
        return std::size_t(g.cells[0] - 1) * (g.cells[1] - 1) * (g.cells[2] - 1);
    }
    std::vector<double> gather(const NodeField& f) const {
        std::vector<double> out;
        out.reserve(size());
        for (int k = 1; k < g.cells[2]; ++k)
            for (int j = 1; j < g.cells[1]; ++j)
                for (int i = 1; i < g.cells[0]; ++i) out.push_back(f(i, j, k));
        return out;
    }
    void scatter(const std::vector<double>& v, NodeField& f) const {
        std::size_t t = 0;
        for (int k = 1; k < g.cells[2]; ++k)
            for (int j = 1; j < g.cells[1]; ++j)
                for (int i = 1; i < g.cells[0]; ++i) f(i, j, k) = v[t++];
    }
};

std::vector<double> weighted_diag(const EdgeField& sig_e) {
    const Grid& g = sig_e.grid();
    InteriorMap m(g);
    std::vector<double> diag;
    diag.reserve(m.size());
    for (int k = 1; k < g.cells[2]; ++k)
        for (int j = 1; j < g.cells[1]; ++j)
            for (int i = 1; i < g.cells[0]; ++i) {
                double d = (sig_e.at(0, i - 1, j, k) + sig_e.at(0, i, j, k)) / (g.h[0] * g.h[0]) +
                           (sig_e.at(1, i, j - 1, k) + sig_e.at(1, i, j, k)) / (g.h[1] * g.h[1]) +
                           (sig_e.at(2, i, j, k - 1) + sig_e.at(2, i, j, k)) / (g.h[2] * g.h[2]);
                diag.push_back(d);
            }
    return diag;
}

std::pair<NodeField, LinearSolveReport> solve_interior_spd(
    const EdgeField& sig_e, const NodeField& rhs_interior, const NodeField& bc,
    const SolverControls& ctl) {
    const Grid& g = sig_e.grid();
    InteriorMap m(g);

    // fold the Dirichlet lift into the right-hand side
    NodeField bc_ext(g);
    for (int k = 0; k <= g.cells[2]; ++k)
        for (int j = 0; j <= g.cells[1]; ++j)
            for (int i = 0; i <= g.cells[0]; ++i) {
                bool bdry = i == 0 || i == g.cells[0] || j == 0 || j == g.cells[1] ||
                            k == 0 || k == g.cells[2];
                bc_ext(i, j, k) = bdry ? bc(i, j, k) : 0.0;
            }
    NodeField lift = apply_weighted_neg_div_grad(sig_e, bc_ext);

    std::vector<double> b = m.gather(rhs_interior);
    {
        std::vector<double> l = m.gather(lift);
        for (std::size_t i = 0; i < b.size(); ++i) b[i] -= l[i];
    }

    std::vector<double> diag = weighted_diag(sig_e);
    detail::CgProblem p;
    p.op = [&](const std::vector<double>& v) {
        NodeField f(g);
        m.scatter(v, f);
        NodeField av = apply_weighted_neg_div_grad(sig_e, f);
        return m.gather(av);
    };
    p.prec = [&](const std::vector<double>& r) {
        std::vector<double> z(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) z[i] = r[i] / diag[i];
        return z;
    };

    std::vector<double> x;
    int maxiter = ctl.maxiter > 0 ? ctl.maxiter : default_maxiter(g);
    LinearSolveReport rep = detail::run_cg(p, b, x, ctl.tol, maxiter);

    NodeField phi = bc_ext;
    NodeField interior(g);
    m.scatter(x, interior);
    for (int k = 1; k < g.cells[2]; ++k)
        for (int j = 1; j < g.cells[1]; ++j)
            for (int i = 1; i < g.cells[0]; ++i) phi(i, j, k) = interior(i, j, k);
    return {phi, rep};
}

}  // namespace

std::pair<NodeField, LinearSolveReport> solve_weighted_dirichlet(
    const EdgeField& sig_e, const EdgeField& E0, const SolverControls& ctl,
    const NodeField* f_phi, const NodeField* phi_bc) {
    const Grid& g = sig_e.grid();
    require_same_grid(g, E0.grid(), "solve_weighted_dirichlet");
    if (!(ctl.tol > 0.0) || ctl.tol >= 1.0)
        throw std::invalid_argument("solve_weighted_dirichlet: tol must be in (0,1)");
    for (int c = 0; c < 3; ++c)
        for (double v : sig_e.comp(c))
            if (!(v > 0.0))
                throw std::invalid_argument("solve_weighted_dirichlet: sig_e must be positive");

    // -div(sig grad phi) = div(sig E0) - f_phi at interior nodes
    NodeField rhs = div_edge(edge_multiply(sig_e, E0));
    if (f_phi) {
        for (int k = 1; k < g.cells[2]; ++k)
            for (int j = 1; j < g.cells[1]; ++j)
                for (int i = 1; i < g.cells[0]; ++i) rhs(i, j, k) -= (*f_phi)(i, j, k);
    }
    NodeField bc = phi_bc ? *phi_bc : NodeField(g);
    return solve_interior_spd(sig_e, rhs, bc, ctl);
}

std::pair<NodeField, LinearSolveReport> solve_poisson_dirichlet(
    const NodeField& rhs_node, const EdgeField* rhs_div, const NodeField& u_bc,
    const SolverControls& ctl) {
    const Grid& g = rhs_node.grid();
    if (!(ctl.tol > 0.0) || ctl.tol >= 1.0)
        throw std::invalid_argument("solve_poisson_dirichlet: tol must be in (0,1)");
    NodeField rhs = rhs_node;
    if (rhs_div) {
        NodeField dv = div_edge(*rhs_div);
        for (std::size_t i = 0; i < rhs.data().size(); ++i) rhs.data()[i] += dv.data()[i];
    }
    // unit edge weights turn the weighted operator into the plain Laplacian
    EdgeField ones(g);
    for (int c = 0; c < 3; ++c)
        for (double& v : ones.comp(c)) v = 1.0;
    return solve_interior_spd(ones, rhs, u_bc, ctl);
}

std::pair<NodeField, LinearSolveReport> harmonic_extension(const NodeField& u_bc,
                                                           const SolverControls& ctl) {
    NodeField zero(u_bc.grid());
    return solve_poisson_dirichlet(zero, nullptr, u_bc, ctl);
}

// Visit every boundary face: fn(c, i, j, k, area).
template <typename Fn>
static void for_each_boundary_face(const Grid& gr, Fn&& fn) {
    for (int c = 0; c < 3; ++c) {
        const int a = (c + 1) % 3;
        const int d = (c + 2) % 3;
        const double area = gr.cell_volume() / gr.h[c];
        for (int side = 0; side < 2; ++side) {
            std::array<int, 3> p{0, 0, 0};
            p[c] = side == 0 ? 0 : gr.cells[c];
            for (int ia = 0; ia < gr.cells[a]; ++ia)
                for (int id = 0; id < gr.cells[d]; ++id) {
                    p[a] = ia;
                    p[d] = id;
                    fn(c, p[0], p[1], p[2], area);
                }
        }
    }
}

double BoundaryFlux::total_flux() const {
    double s = 0.0;
    for_each_boundary_face(g.grid(), [&](int c, int i, int j, int k, double area) {
        s += g.at(c, i, j, k) * area;
    });
    return s;
}

double BoundaryFlux::norm() const {
    double s = 0.0;
    for_each_boundary_face(g.grid(), [&](int c, int i, int j, int k, double area) {
        s += g.at(c, i, j, k) * g.at(c, i, j, k) * area;
    });
    return std::sqrt(s);
}

std::pair<NodeField, LinearSolveReport> solve_weighted_neumann(
    const EdgeField& sig_e, const BoundaryFlux& flux, const SolverControls& ctl) {
    const Grid& g = sig_e.grid();
    require_same_grid(g, flux.g.grid(), "solve_weighted_neumann");
    if (!(ctl.tol > 0.0) || ctl.tol >= 1.0)
        throw std::invalid_argument("solve_weighted_neumann: tol must be in (0,1)");

    double gnorm = flux.norm();
    double total = flux.total_flux();
    if (gnorm > 0.0 && std::abs(total) > 1e-10 * gnorm)
        throw std::invalid_argument("solve_weighted_neumann: incompatible flux, boundary integral = " +
                                    std::to_string(total));

    const std::size_t n = g.node_count();
    const double ve = g.cell_volume();
    // dual volume of an edge: full cell volume, halved per transversal
    // boundary plane; makes linear fields exact for the Neumann stiffness
    auto edge_weight = [&](int c, int i, int j, int k) {
        std::array<int, 3> p{i, j, k};
        double w = ve;
        for (int a = 0; a < 3; ++a)
            if (a != c && (p[a] == 0 || p[a] == g.cells[a])) w *= 0.5;
        return w;
    };

    // b_i = integral of g against the node hat: each boundary face spreads
    // g * area to its four corner nodes
    NodeField bf(g);
    for_each_boundary_face(g, [&](int c, int i, int j, int k, double area) {
        const int a = (c + 1) % 3;
        const int d = (c + 2) % 3;
        std::array<int, 3> p{i, j, k};
        double w = flux.g.at(c, i, j, k) * area * 0.25;
        for (int da = 0; da < 2; ++da)
            for (int dd = 0; dd < 2; ++dd) {
                std::array<int, 3> q = p;
                q[a] += da;
                q[d] += dd;
                bf(q[0], q[1], q[2]) += w;
            }
    });
    std::vector<double> b = bf.data();

    // Neumann-closed weighted stiffness: K = G^T diag(w_e sig_e / h^2) G with
    // dual-volume edge weights w_e
    auto apply_K = [&](const std::vector<double>& v) {
        NodeField f(g);
        f.data() = v;
        NodeField o(g);
        for (int c = 0; c < 3; ++c) {
            const Box3& eb = sig_e.box(c);
            std::array<int, 3> step{c == 0, c == 1, c == 2};
            const double ih2 = 1.0 / (g.h[c] * g.h[c]);
            for (int k = 0; k < eb.dims[2]; ++k)
                for (int j = 0; j < eb.dims[1]; ++j)
                    for (int i = 0; i < eb.dims[0]; ++i) {
                        double d = f(i + step[0], j + step[1], k + step[2]) - f(i, j, k);
                        double val = sig_e.at(c, i, j, k) * edge_weight(c, i, j, k) * ih2 * d;
                        o(i, j, k) -= val;
                        o(i + step[0], j + step[1], k + step[2]) += val;
                    }
        }
        return o.data();
    };

    // diagonal of K for preconditioning
    std::vector<double> diag(n, 0.0);
    {
        NodeField dg(g);
        for (int c = 0; c < 3; ++c) {
            const Box3& eb = sig_e.box(c);
            std::array<int, 3> step{c == 0, c == 1, c == 2};
            const double ih2 = 1.0 / (g.h[c] * g.h[c]);
            for (int k = 0; k < eb.dims[2]; ++k)
                for (int j = 0; j < eb.dims[1]; ++j)
                    for (int i = 0; i < eb.dims[0]; ++i) {
                        double s = sig_e.at(c, i, j, k) * edge_weight(c, i, j, k) * ih2;
                        dg(i, j, k) += s;
                        dg(i + step[0], j + step[1], k + step[2]) += s;
                    }
        }
        diag = dg.data();
    }

    detail::CgProblem p;
    p.op = apply_K;
    p.prec = [&](const std::vector<double>& r) {
        std::vector<double> z(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) z[i] = r[i] / diag[i];
        return z;
    };
    p.project = [&](std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= double(v.size());
        for (double& x : v) x -= mean;
    };

    std::vector<double> x;
    int maxiter = ctl.maxiter > 0 ? ctl.maxiter : default_maxiter(g);
    LinearSolveReport rep = detail::run_cg(p, b, x, ctl.tol, maxiter);

    NodeField phi(g);
    if (!x.empty()) phi.data() = x;
    // report the zero-mean representative
    double mean = 0.0;
    for (double v : phi.data()) mean += v;
    mean /= double(phi.data().size());
    for (double& v : phi.data()) v -= mean;
    return {phi, rep};
}

}  // namespace thermel
