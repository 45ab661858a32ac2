#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "thermel/coupled.hpp"

namespace thermel {

/// A closed-form solution pair (phi*, u*) together with the hand-derived
/// source terms that make it an exact solution of the augmented system
///   div(sigma(u)(grad phi + e)) = f_phi,   -Laplace(u) = sigma|grad phi + e|^2 + f_u.
/// All fields are exact analytic evaluations; the derivations are recorded in
/// build_case and guarded by source_crosscheck_max_error.
struct ManufacturedCase {
    using ScalarFn = std::function<double(const std::array<double, 3>&)>;
    using VectorFn = std::function<std::array<double, 3>(const std::array<double, 3>&)>;

    std::string name;
    ConductivityModel sigma = ConductivityModel::constant(1.0);
    std::array<double, 3> e_const{0, 0, 0};

    ScalarFn phi_star;
    VectorFn grad_phi_star;
    ScalarFn u_star;
    ScalarFn f_phi;  // nullptr-equivalent: identically zero when not set
    ScalarFn f_u;

    bool phi_trace_nonzero = false;  // sample phi* as the Dirichlet trace

    /// Exact current J* = sigma(u*)(grad phi* + e) at a point.
    std::array<double, 3> current(const std::array<double, 3>& x) const;

    /// Problem with the case's sources and boundary data sampled on g.
    ProblemSpec make_spec(const Grid& g, JouleMode joule = JouleMode::Pointwise) const;
};

/// Catalog: "constant-sigma-uniform" (exact at any resolution),
/// "slab-sigma" (1-D harmonic-mean current), "smooth-nonlinear" (full
/// trigonometric sources with a sigmoid conductivity).
ManufacturedCase build_case(const std::string& name);

/// Exact mean current of the slab-sigma case: L1 / integral of 1/sigma(x1),
/// evaluated in closed form from the conductivity table.
double slab_mean_current();

/// Maximum discrepancy between the recorded source formulas and 6th-order
/// central finite differences of the closed forms, over npoints seeded random
/// interior points.  Guards against algebra slips in the derivations.
double source_crosscheck_max_error(const ManufacturedCase& c, int npoints, std::uint64_t seed);

struct ConvergenceRow {
    std::array<int, 3> cells{};
    double err_u_l2 = 0.0, err_u_max = 0.0;
    double err_phi_l2 = 0.0, err_phi_max = 0.0;
    double err_j_l2 = 0.0, err_j_max = 0.0;
    bool converged = false;
    int picard_iterations = 0;
};

struct ConvergenceTable {
    std::string case_name;
    std::vector<ConvergenceRow> rows;
    // observed orders between consecutive rows: log2(e_coarse / e_fine)
    std::vector<double> order_u, order_phi, order_j;
};

/// Errors against the analytic truth on a doubling grid sequence, with
/// observed orders.  A non-converged inner solve flags the row.
ConvergenceTable convergence_study(const ManufacturedCase& c, const std::vector<int>& grids,
                                   JouleMode joule = JouleMode::Pointwise);

struct DenseStep {
    NodeField phi;
    NodeField u_next;
};

/// One exact Picard step by dense assembly and direct factorization of the
/// same discrete operators.  Independent of the matrix-free path: matrices
/// are built from scratch and solved with a dense LU / orthogonal
/// decomposition.  Rejects grids with more than 5000 nodes.
DenseStep dense_oracle(const ProblemSpec& spec, const NodeField& u);

}  // namespace thermel
