#include "thermel/coupled.hpp"

#include <cmath>
#include <stdexcept>

#include "thermel/detail/cg.hpp"
#include "thermel/operators.hpp"

namespace thermel {

void ProblemSpec::validate() const {
    if (!(picard.theta > 0.0) || picard.theta > 1.0)
        throw std::invalid_argument("ProblemSpec: damping theta must lie in (0,1]");
    if (mode == BoundaryMode::Tangential) {
        if (psi0 || e_const != std::array<double, 3>{0, 0, 0})
            throw std::invalid_argument("ProblemSpec: tangential mode must not carry E0 data");
        if (!flux_g)
            throw std::invalid_argument("ProblemSpec: tangential mode needs boundary flux g");
        BoundaryFlux f(grid);
        f.g = *flux_g;
        double nrm = f.norm();
        if (nrm > 0.0 && std::abs(f.total_flux()) > 1e-10 * nrm)
            throw std::invalid_argument("ProblemSpec: incompatible tangential flux");
    } else {
        if (flux_g)
            throw std::invalid_argument("ProblemSpec: electric mode must not carry flux data");
    }
}

EdgeField build_E0(const ProblemSpec& spec) {
    EdgeField e(spec.grid);
    if (spec.mode == BoundaryMode::Tangential) return e;
    if (spec.psi0) e = grad(*spec.psi0);
    for (int c = 0; c < 3; ++c)
        if (spec.e_const[c] != 0.0)
            for (double& v : e.comp(c)) v += spec.e_const[c];
    return e;
}

NodeField build_phi0(const ProblemSpec& spec) {
    NodeField p0(spec.grid);
    if (spec.mode == BoundaryMode::Tangential) return p0;
    const Grid& g = spec.grid;
    for (int k = 0; k <= g.cells[2]; ++k)
        for (int j = 0; j <= g.cells[1]; ++j)
            for (int i = 0; i <= g.cells[0]; ++i) {
                auto x = g.node_pos(i, j, k);
                double v = spec.e_const[0] * x[0] + spec.e_const[1] * x[1] + spec.e_const[2] * x[2];
                if (spec.psi0) v += (*spec.psi0)(i, j, k);
                p0(i, j, k) = v;
            }
    return p0;
}

PotentialSolution potential_solve(const ProblemSpec& spec, const NodeField& u) {
    u.require_finite("potential_solve: temperature");
    NodeField sig_n = eval_sigma(spec.sigma, u);
    EdgeField sig_e = sigma_to_edges(sig_n);

    PotentialSolution out;
    out.sigma_nodes = sig_n;
    if (spec.mode == BoundaryMode::Electric) {
        EdgeField E0 = build_E0(spec);
        auto [phi, rep] = solve_weighted_dirichlet(
            sig_e, E0, spec.linear, spec.f_phi ? &*spec.f_phi : nullptr,
            spec.phi_bc ? &*spec.phi_bc : nullptr);
        out.phi = phi;
        out.J = edge_multiply(sig_e, edge_axpy(1.0, grad(phi), E0));
        out.report = rep;
    } else {
        BoundaryFlux flux(spec.grid);
        flux.g = *spec.flux_g;
        auto [phi, rep] = solve_weighted_neumann(sig_e, flux, spec.linear);
        out.phi = phi;
        out.J = edge_multiply(sig_e, grad(phi));
        out.report = rep;
    }
    return out;
}

JouleRhs joule_rhs(const ProblemSpec& spec, const NodeField& phi, const EdgeField& J,
                   const NodeField& phi0, const NodeField& sigma_nodes) {
    const Grid& g = spec.grid;
    JouleRhs out;
    out.rhs_node = NodeField(g);

    if (spec.joule == JouleMode::Pointwise) {
        NodeField jsq = avg_edge_to_node(J);
        for (std::size_t i = 0; i < jsq.data().size(); ++i)
            out.rhs_node.data()[i] = jsq.data()[i] / sigma_nodes.data()[i];
    } else {
        NodeField total = phi;
        for (std::size_t i = 0; i < total.data().size(); ++i) total.data()[i] += phi0.data()[i];
        out.rhs_div = edge_multiply(node_to_edge_average(total), J);
        // manufactured potential sources make div J = f_phi, which shifts the
        // divergence identity by -(phi + phi0) f_phi
        if (spec.f_phi)
            for (std::size_t i = 0; i < total.data().size(); ++i)
                out.rhs_node.data()[i] -= total.data()[i] * spec.f_phi->data()[i];
    }
    if (spec.f_u)
        for (std::size_t i = 0; i < out.rhs_node.data().size(); ++i)
            out.rhs_node.data()[i] += spec.f_u->data()[i];
    return out;
}

StepResult picard_step(const ProblemSpec& spec, const NodeField& u_k) {
    PotentialSolution pot = potential_solve(spec, u_k);
    NodeField phi0 = build_phi0(spec);
    JouleRhs rhs = joule_rhs(spec, pot.phi, pot.J, phi0, pot.sigma_nodes);
    auto [u_new, trep] = solve_poisson_dirichlet(
        rhs.rhs_node, rhs.rhs_div ? &*rhs.rhs_div : nullptr, spec.u0, spec.linear);

    const double theta = spec.picard.theta;
    StepResult out{std::move(u_new), std::move(pot.phi), std::move(pot.J), pot.report, trep};
    if (theta < 1.0)
        for (std::size_t i = 0; i < out.u_next.data().size(); ++i)
            out.u_next.data()[i] = (1.0 - theta) * u_k.data()[i] + theta * out.u_next.data()[i];
    return out;
}

static double energy_ratio(const ProblemSpec& spec, const EdgeField& J) {
    double denom = 0.0;
    if (spec.mode == BoundaryMode::Electric) {
        denom = spec.sigma.sigma_max() * norm2_edges(build_E0(spec));
    } else if (spec.curl_h0) {
        denom = spec.sigma.sigma_max() / spec.sigma.sigma_min() * norm2_edges(*spec.curl_h0);
    }
    return denom > 0.0 ? norm2_edges(J) / denom : 0.0;
}

FixedPointResult run_fixed_point(const ProblemSpec& spec) {
    auto [u_init, rep] = harmonic_extension(spec.u0, spec.linear);
    if (!rep.converged)
        throw std::runtime_error("run_fixed_point: harmonic extension of u0 did not converge");
    return run_fixed_point_from(spec, u_init);
}

FixedPointResult run_fixed_point_from(const ProblemSpec& spec, const NodeField& u_init) {
    spec.validate();
    FixedPointResult res;
    NodeField u = u_init;
    EdgeField J_prev;
    bool have_prev_J = false;
    double prev_du = 0.0;

    for (int it = 0; it < spec.picard.max_iterations; ++it) {
        StepResult step = picard_step(spec, u);

        PicardIteration rec;
        rec.potential = step.potential;
        rec.temperature = step.temperature;
        {
            NodeField diff = step.u_next;
            for (std::size_t i = 0; i < diff.data().size(); ++i) diff.data()[i] -= u.data()[i];
            rec.du_norm = norm2_nodes(diff);
        }
        if (have_prev_J) {
            EdgeField jd = edge_axpy(-1.0, J_prev, step.J);
            rec.dj_norm = norm2_edges(jd);
        }
        rec.contraction = prev_du > 0.0 ? rec.du_norm / prev_du : 0.0;
        rec.energy_ratio = energy_ratio(spec, step.J);
        res.diagnostics.iterations.push_back(rec);

        double unorm = norm2_nodes(u);
        u = step.u_next;
        J_prev = step.J;
        have_prev_J = true;
        res.phi = step.phi;
        res.J = step.J;
        prev_du = rec.du_norm;

        if (rec.du_norm <= spec.picard.tol * (1.0 + unorm)) {
            res.diagnostics.converged = true;
            break;
        }
    }
    res.u = u;
    return res;
}

// ---------------------------------------------------------------------------
// div-curl reconstruction of H
// ---------------------------------------------------------------------------

namespace {

struct FaceVec {
    // flattening of the three face-component arrays into one raw vector
    const Grid g;
    std::array<std::size_t, 3> offset{};
    std::size_t total = 0;
    explicit FaceVec(const Grid& grid) : g(grid) {
        FaceField probe(grid);
        for (int c = 0; c < 3; ++c) {
            offset[c] = total;
            total += probe.comp(c).size();
        }
    }
    std::vector<double> flatten(const FaceField& f) const {
        std::vector<double> v(total);
        for (int c = 0; c < 3; ++c)
            std::copy(f.comp(c).begin(), f.comp(c).end(), v.begin() + offset[c]);
        return v;
    }
    FaceField unflatten(const std::vector<double>& v) const {
        FaceField f(g);
        for (int c = 0; c < 3; ++c)
            std::copy(v.begin() + offset[c], v.begin() + offset[c] + f.comp(c).size(),
                      f.comp(c).begin());
        return f;
    }
};

void zero_pinned_faces(FaceField& f) {
    const Grid& g = f.grid();
    for (int c = 0; c < 3; ++c) {
        const Box3& b = f.box(c);
        for (int k = 0; k < b.dims[2]; ++k)
            for (int j = 0; j < b.dims[1]; ++j)
                for (int i = 0; i < b.dims[0]; ++i) {
                    std::array<int, 3> p{i, j, k};
                    if (p[c] == 0 || p[c] == g.cells[c]) f.at(c, i, j, k) = 0.0;
                }
    }
}

void zero_boundary_edges(EdgeField& e) {
    const Grid& g = e.grid();
    for (int c = 0; c < 3; ++c) {
        const Box3& b = e.box(c);
        for (int k = 0; k < b.dims[2]; ++k)
            for (int j = 0; j < b.dims[1]; ++j)
                for (int i = 0; i < b.dims[0]; ++i) {
                    std::array<int, 3> p{i, j, k};
                    for (int a = 0; a < 3; ++a)
                        if (a != c && (p[a] == 0 || p[a] == g.cells[a])) {
                            e.at(c, i, j, k) = 0.0;
                            break;
                        }
                }
    }
}

// adjoint of curl_face_to_edge under plain (unit-weight) sums
FaceField curl_face_to_edge_adjoint(const EdgeField& r) {
    const Grid& g = r.grid();
    FaceField out(g);
    for (int c = 0; c < 3; ++c) {
        const int a = (c + 1) % 3;
        const int b = (c + 2) % 3;
        const Box3& eb = r.box(c);
        for (int k = 0; k < eb.dims[2]; ++k)
            for (int j = 0; j < eb.dims[1]; ++j)
                for (int i = 0; i < eb.dims[0]; ++i) {
                    std::array<int, 3> p{i, j, k};
                    if (p[a] == 0 || p[a] == g.cells[a] || p[b] == 0 || p[b] == g.cells[b])
                        continue;
                    double v = r.at(c, i, j, k);
                    if (v == 0.0) continue;
                    std::array<int, 3> q = p;
                    out.at(b, p[0], p[1], p[2]) += v / g.h[a];
                    q[a] -= 1;
                    out.at(b, q[0], q[1], q[2]) -= v / g.h[a];
                    q = p;
                    out.at(a, p[0], p[1], p[2]) -= v / g.h[b];
                    q[b] -= 1;
                    out.at(a, q[0], q[1], q[2]) += v / g.h[b];
                }
    }
    return out;
}

// adjoint of div_face under plain sums
FaceField div_face_adjoint(const CellField& s) {
    const Grid& g = s.grid();
    FaceField out(g);
    for (int k = 0; k < g.cells[2]; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i) {
                double v = s(i, j, k);
                if (v == 0.0) continue;
                out.at(0, i + 1, j, k) += v / g.h[0];
                out.at(0, i, j, k) -= v / g.h[0];
                out.at(1, i, j + 1, k) += v / g.h[1];
                out.at(1, i, j, k) -= v / g.h[1];
                out.at(2, i, j, k + 1) += v / g.h[2];
                out.at(2, i, j, k) -= v / g.h[2];
            }
    return out;
}

}  // namespace

HReconstruction reconstruct_H(const EdgeField& J, double tol, int maxiter) {
    const Grid& g = J.grid();
    if (maxiter <= 0) maxiter = 4 * default_maxiter(g);

    // compatibility: interior divergence of J must vanish
    {
        NodeField dv = div_edge(J);
        double jn = norm2_edges(J);
        double opnorm = 2.0 * (1.0 / g.h[0] + 1.0 / g.h[1] + 1.0 / g.h[2]);
        if (jn > 0.0 && norm2_nodes(dv) > 1e-8 * opnorm * jn)
            throw std::invalid_argument(
                "reconstruct_H: current is not divergence-free at interior nodes");
    }

    EdgeField J_in = J;
    zero_boundary_edges(J_in);  // the circulation stencil only exists on interior edges

    FaceVec fv(g);
    auto apply_N = [&](const std::vector<double>& v) {
        FaceField H = fv.unflatten(v);
        zero_pinned_faces(H);
        EdgeField c = curl_face_to_edge(H);
        CellField d = div_face(H);
        FaceField out = curl_face_to_edge_adjoint(c);
        FaceField dd = div_face_adjoint(d);
        for (int cc = 0; cc < 3; ++cc)
            for (std::size_t t = 0; t < out.comp(cc).size(); ++t)
                out.comp(cc)[t] += dd.comp(cc)[t];
        zero_pinned_faces(out);
        return fv.flatten(out);
    };

    // diagonal of the normal operator, for preconditioning
    std::vector<double> diag(fv.total, 1.0);
    {
        FaceField dg(g);
        for (int c = 0; c < 3; ++c) {
            const int a = (c + 1) % 3;
            const int b = (c + 2) % 3;
            const Box3& eb = EdgeField(g).box(c);
            for (int k = 0; k < eb.dims[2]; ++k)
                for (int j = 0; j < eb.dims[1]; ++j)
                    for (int i = 0; i < eb.dims[0]; ++i) {
                        std::array<int, 3> p{i, j, k};
                        if (p[a] == 0 || p[a] == g.cells[a] || p[b] == 0 || p[b] == g.cells[b])
                            continue;
                        std::array<int, 3> q = p;
                        dg.at(b, p[0], p[1], p[2]) += 1.0 / (g.h[a] * g.h[a]);
                        q[a] -= 1;
                        dg.at(b, q[0], q[1], q[2]) += 1.0 / (g.h[a] * g.h[a]);
                        q = p;
                        dg.at(a, p[0], p[1], p[2]) += 1.0 / (g.h[b] * g.h[b]);
                        q[b] -= 1;
                        dg.at(a, q[0], q[1], q[2]) += 1.0 / (g.h[b] * g.h[b]);
                    }
        }
        for (int k = 0; k < g.cells[2]; ++k)
            for (int j = 0; j < g.cells[1]; ++j)
                for (int i = 0; i < g.cells[0]; ++i)
                    for (int c = 0; c < 3; ++c) {
                        std::array<int, 3> lo{i, j, k}, hi{i, j, k};
                        hi[c] += 1;
                        dg.at(c, lo[0], lo[1], lo[2]) += 1.0 / (g.h[c] * g.h[c]);
                        dg.at(c, hi[0], hi[1], hi[2]) += 1.0 / (g.h[c] * g.h[c]);
                    }
        std::vector<double> flat = fv.flatten(dg);
        for (std::size_t t = 0; t < flat.size(); ++t)
            if (flat[t] > 0.0) diag[t] = flat[t];
    }

    std::vector<double> b = fv.flatten(curl_face_to_edge_adjoint(J_in));
    {
        FaceField bb = fv.unflatten(b);
        zero_pinned_faces(bb);
        b = fv.flatten(bb);
    }

    detail::CgProblem p;
    p.op = apply_N;
    p.prec = [&](const std::vector<double>& r) {
        std::vector<double> z(r.size());
        for (std::size_t t = 0; t < r.size(); ++t) z[t] = r[t] / diag[t];
        return z;
    };

    std::vector<double> x;
    HReconstruction out;
    out.report = detail::run_cg(p, b, x, tol, maxiter);
    out.H = x.empty() ? FaceField(g) : fv.unflatten(x);
    zero_pinned_faces(out.H);

    double jn = norm2_edges(J_in);
    if (jn > 0.0) {
        EdgeField r = edge_axpy(-1.0, J_in, curl_face_to_edge(out.H));
        zero_boundary_edges(r);
        out.curl_rel_residual = norm2_edges(r) / jn;
    }
    double hn = norm2_faces(out.H);
    if (hn > 0.0) out.div_rel = norm2_cells(div_face(out.H)) / hn;
    return out;
}

}  // namespace thermel
