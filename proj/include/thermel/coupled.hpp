#pragma once

#include <optional>
#include <vector>

#include "thermel/conductivity.hpp"
#include "thermel/grid.hpp"
#include "thermel/linear_solve.hpp"

namespace thermel {

enum class BoundaryMode { Electric, Tangential };
enum class JouleMode { DivergenceForm, Pointwise };

struct PicardControls {
    double tol = 1e-10;
    int max_iterations = 50;
    double theta = 1.0;  // damping in (0,1]
};

/// Full description of one coupled run.  Exactly one boundary mode's data is
/// meaningful: electric mode uses (psi0, e_const) to build the applied field
/// E0 = grad psi0 + e_const; tangential mode uses the boundary flux g.
struct ProblemSpec {
    Grid grid;
    ConductivityModel sigma = ConductivityModel::constant(1.0);
    BoundaryMode mode = BoundaryMode::Electric;
    JouleMode joule = JouleMode::Pointwise;

    NodeField u0;  // boundary temperature (interior entries ignored)

    // electric mode
    std::optional<NodeField> psi0;           // scalar potential part of E0
    std::array<double, 3> e_const{0, 0, 0};  // constant part of E0
    std::optional<NodeField> phi_bc;         // nonzero potential trace (manufactured cases)

    // tangential mode
    std::optional<FaceField> flux_g;    // nu . curl(H0) on boundary faces
    std::optional<EdgeField> curl_h0;   // analytic curl(H0) when available (estimates)

    // manufactured sources
    std::optional<NodeField> f_phi;
    std::optional<NodeField> f_u;

    PicardControls picard;
    SolverControls linear;

    void validate() const;
};

/// Applied field E0 = grad(psi0) + e_const on edges (electric mode; zero in
/// tangential mode).  Curl-free by construction.
EdgeField build_E0(const ProblemSpec& spec);

/// Potential of the applied field: phi0 with grad(phi0) = E0.
NodeField build_phi0(const ProblemSpec& spec);

struct PotentialSolution {
    NodeField phi;
    EdgeField J;  // sig_e (grad phi + E0); the discrete curl(H)
    NodeField sigma_nodes;
    LinearSolveReport report;
};

/// One conductivity-weighted potential solve at temperature u, returning the
/// potential and the current.
PotentialSolution potential_solve(const ProblemSpec& spec, const NodeField& u);

struct JouleRhs {
    NodeField rhs_node;
    std::optional<EdgeField> rhs_div;
};

/// Right-hand side of the temperature equation -Laplace(u) = rhs_node +
/// div(rhs_div).  Divergence form: rhs_div = (phi + phi0) J averaged to
/// edges (with the source correction -(phi+phi0) f_phi when manufactured
/// sources make div J nonzero).  Pointwise form: sigma^{-1} |J|^2 at nodes.
JouleRhs joule_rhs(const ProblemSpec& spec, const NodeField& phi, const EdgeField& J,
                   const NodeField& phi0, const NodeField& sigma_nodes);

struct PicardIteration {
    double du_norm = 0.0;
    double dj_norm = 0.0;
    double contraction = 0.0;   // du_k / du_{k-1}; 0 for the first step
    double energy_ratio = 0.0;  // ||J|| / (sigma2 ||E0||) or tangential analog
    LinearSolveReport potential;
    LinearSolveReport temperature;
};

struct PicardDiagnostics {
    std::vector<PicardIteration> iterations;
    bool converged = false;
};

struct StepResult {
    NodeField u_next;
    NodeField phi;
    EdgeField J;
    LinearSolveReport potential;
    LinearSolveReport temperature;
};

/// One Picard step u -> (1-theta) u + theta T(u) with boundary nodes pinned
/// to u0.
StepResult picard_step(const ProblemSpec& spec, const NodeField& u_k);

struct FixedPointResult {
    NodeField u;
    NodeField phi;
    EdgeField J;
    PicardDiagnostics diagnostics;
};

/// Picard iteration from the harmonic extension of u0.
FixedPointResult run_fixed_point(const ProblemSpec& spec);
/// Picard iteration from a caller-supplied initial temperature.
FixedPointResult run_fixed_point_from(const ProblemSpec& spec, const NodeField& u_init);

struct HReconstruction {
    FaceField H;
    LinearSolveReport report;
    double curl_rel_residual = 0.0;  // ||curl H - J|| / ||J|| over interior edges
    double div_rel = 0.0;            // ||div H|| / ||H||
};

/// Magnetic field from the current: least-squares solution of curl H = J,
/// div H = 0 with boundary-normal faces pinned to zero (the discrete div-curl
/// system; unique on boxes).  Rejects currents whose interior divergence is
/// not small.
HReconstruction reconstruct_H(const EdgeField& J, double tol, int maxiter);

}  // namespace thermel
