#pragma once

#include <string>
#include <vector>

#include "thermel/coupled.hpp"

namespace thermel {

/// One named inequality check: pass iff lhs <= rhs * (1 + slack).  Advisory
/// entries track non-explicit constants and carry no pass/fail semantics
/// (their slack is infinite, so pass is always true).
struct EstimateReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;  // lhs / rhs (0 when rhs == 0 and lhs == 0)
    double slack = 0.0;
    bool pass = true;
    bool advisory = false;
};

/// Energy estimates for a converged (phi, J) pair.  Electric mode checks
/// ||J||_2 <= sigma2 ||E0||_2; tangential mode checks ||J||_2 <=
/// (sigma2/sigma1) ||curl H0||_2 when the analytic curl is supplied.  An
/// advisory sup-norm report (||phi||_inf vs ||E0||_L4) is appended for trend
/// inspection.  Pass/fail norms use the plain staggered quadrature, under
/// which the discrete inequalities hold exactly up to solver tolerance.
std::vector<EstimateReport> check_energy_bounds(const ProblemSpec& spec, const NodeField& phi,
                                                const EdgeField& J, double slack = 1e-6);

/// Campanato-type seminorm: max over a deterministic stratified sample of
/// centers (at most center_budget of them) and dyadic radii r in {2h, 4h, ...,
/// diam} of r^{-mu} * sum over nodes within distance r of |u - ball mean|^2 *
/// h1 h2 h3.  Monotone under restriction of the center sample.
double campanato_seminorm(const NodeField& u, double mu, int center_budget);

/// Pointwise Hoelder seminorm estimate: max of |u(x)-u(y)| / |x-y|^alpha over
/// all nearest-neighbor pairs plus all pairs of a fixed physical sublattice
/// (refined only as pair_budget allows, so values are comparable across grid
/// refinements).  Monotone under restriction of the pair sample.
double holder_seminorm(const NodeField& u, double alpha, int pair_budget);

/// Best constant of the Sobolev embedding H^1_0 -> L^6 in R^3 (Talenti's
/// closed form).  For n = p = 2 conjugacy in three dimensions the optimal
/// constant reduces to sqrt(3) * (pi/2)^(2/3); it is domain-independent.
inline double sobolev_s3() { return 1.7320508075688772935 * std::pow(1.5707963267948966192, 2.0 / 3.0); }

struct UniquenessThreshold {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double lipschitz = 0.0;
    double s3 = 0.0;
    double kappa_star = 0.0;  // +infinity when lipschitz == 0
};

/// Small-data uniqueness threshold kappa* = S(3) sigma1 / sqrt((2 sigma2/sigma1
/// + 1) L): currents with ||J||_{L^3} below kappa* admit at most one solution.
UniquenessThreshold uniqueness_threshold(const ConductivityModel& model);

struct ContractionProbe {
    FixedPointResult run_a;  // from the harmonic extension of u0
    FixedPointResult run_b;  // from a perturbed initial iterate
    std::vector<double> factors_a;  // successive-difference ratios, per iteration
    std::vector<double> factors_b;
    bool both_converged = false;
    double limit_gap = 0.0;  // ||u_A - u_B||_2 (only meaningful when converged)
    double j_l3 = 0.0;       // discrete L^3 norm of the final current of run A
    UniquenessThreshold threshold;
};

/// Runs the fixed-point iteration from two initial iterates (the harmonic
/// extension of u0, and the same plus perturbation_scale times an interior
/// bump) and compares the limits against the uniqueness threshold.
ContractionProbe contraction_probe(const ProblemSpec& spec, double perturbation_scale);

// -------- integral norms with boundary-aware quadrature (diagnostics only) ----

/// L^q node norm with trapezoidal boundary weights.
double lq_norm_nodes(const NodeField& u, double q);
/// Discrete L^3 norm of an edge field using per-edge volumes (componentwise).
double l3_norm_edges(const EdgeField& J);
double max_abs_nodes(const NodeField& u);

}  // namespace thermel
