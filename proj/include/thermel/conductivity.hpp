#pragma once

#include <utility>
#include <vector>

#include "thermel/grid.hpp"

namespace thermel {

/// Temperature-dependent electrical conductivity sigma(s) together with
/// certified bounds sigma1 <= sigma(s) <= sigma2 and a certified Lipschitz
/// constant L.  All three kinds satisfy the bounds for every real argument:
/// the sigmoid has monotone tails, the table is clamped outside its range.
class ConductivityModel {
  public:
    enum class Kind { Constant, BoundedSigmoid, Table };

    static ConductivityModel constant(double sigma0);
    /// sigma(s) = sigma_lo + (sigma_hi - sigma_lo) / (1 + exp(-(s - s0)/w)).
    static ConductivityModel bounded_sigmoid(double sigma_lo, double sigma_hi,
                                             double s0, double w);
    /// Piecewise-linear interpolation of (s, sigma) pairs, clamped to the end
    /// values outside the tabulated range.  Points must be strictly increasing
    /// in s and all values positive.
    static ConductivityModel table(std::vector<std::pair<double, double>> pts);

    Kind kind() const { return kind_; }
    double sigma_min() const { return sigma1_; }
    double sigma_max() const { return sigma2_; }
    double lipschitz() const { return lip_; }

    double operator()(double s) const;
    /// d sigma / d s (one-sided at table kinks; used only by manufactured
    /// sources, which sample away from kinks).
    double derivative(double s) const;

  private:
    ConductivityModel() = default;
    Kind kind_ = Kind::Constant;
    double sigma1_ = 1.0, sigma2_ = 1.0, lip_ = 0.0;
    double s0_ = 0.0, w_ = 1.0;              // sigmoid parameters
    std::vector<std::pair<double, double>> pts_;  // table
};

/// Pointwise sigma(u) at nodes.  Rejects non-finite input, naming the node.
NodeField eval_sigma(const ConductivityModel& model, const NodeField& u);

/// Edge conductivities as the harmonic mean of the two endpoint node values.
/// Rejects non-positive node values.
EdgeField sigma_to_edges(const NodeField& sig_nodes);

}  // namespace thermel
