#pragma once

#include <optional>

#include "thermel/grid.hpp"
#include "thermel/operators.hpp"

namespace thermel {

struct LinearSolveReport {
    int iterations = 0;
    double rel_residual = 0.0;
    bool converged = false;
    int operator_applications = 0;
};

struct SolverControls {
    double tol = 1e-10;
    int maxiter = 0;  // 0: use 50*(n1+n2+n3)
};

inline int default_maxiter(const Grid& g) {
    return 50 * (g.cells[0] + g.cells[1] + g.cells[2]);
}

/// Conductivity-weighted Dirichlet potential problem
///   div(sig_e (grad phi + E0)) = f_phi in the interior,  phi = phi_bc on the
/// boundary (phi_bc defaults to zero, matching the zero-trace potential of the
/// electric boundary mode; a nonzero trace is accepted for manufactured
/// cases).  Solved by diagonally preconditioned CG on the SPD interior system.
/// Throws on detected indefiniteness; returns a non-converged report when
/// maxiter is exhausted.
std::pair<NodeField, LinearSolveReport> solve_weighted_dirichlet(
    const EdgeField& sig_e, const EdgeField& E0, const SolverControls& ctl,
    const NodeField* f_phi = nullptr, const NodeField* phi_bc = nullptr);

/// Boundary flux data for the Neumann potential problem: g = nu . curl(H0)
/// sampled at the centers of the boundary faces (the six sides of the box).
/// Stored in a FaceField; only entries with p[c] in {0, n_c} are read.
struct BoundaryFlux {
    FaceField g;
    explicit BoundaryFlux(const Grid& grid) : g(grid) {}
    /// Integral of g over the boundary (discrete midpoint sum).
    double total_flux() const;
    /// L2(boundary) norm of g.
    double norm() const;
};

/// Weighted Neumann problem div(sig_e grad phi) = 0 with nu.(sig_e grad phi)
/// = g on the boundary; returns the zero-mean solution.  Rejects flux data
/// with |total flux| > 1e-10 * ||g||.
std::pair<NodeField, LinearSolveReport> solve_weighted_neumann(
    const EdgeField& sig_e, const BoundaryFlux& flux, const SolverControls& ctl);

/// Temperature problem -Laplace(u) = rhs_node + div_edge(rhs_div) with
/// u = u_bc on the boundary.
std::pair<NodeField, LinearSolveReport> solve_poisson_dirichlet(
    const NodeField& rhs_node, const EdgeField* rhs_div, const NodeField& u_bc,
    const SolverControls& ctl);

/// Discrete harmonic extension of the boundary values of u_bc.
std::pair<NodeField, LinearSolveReport> harmonic_extension(const NodeField& u_bc,
                                                           const SolverControls& ctl);

}  // namespace thermel
