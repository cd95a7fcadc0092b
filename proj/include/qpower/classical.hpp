#pragma once

// Discrete memoryless channels with an output energy function, the binary
// closed forms of their capacity-power curves, and a Blahut-Arimoto solver
// with a minimum received-energy constraint.

#include "qpower/capacity.hpp"
#include "qpower/qcore.hpp"

namespace qpower {

/// Q(y|x) as rows (|X| x |Y|) and energies b(y).
struct DiscreteChannel {
  RealMatrix transition;
  RealVector output_energies;

  DiscreteChannel(RealMatrix transition, RealVector output_energies);

  Eigen::Index inputs() const { return transition.rows(); }
  Eigen::Index outputs() const { return transition.cols(); }
  /// e(x) = sum_y Q(y|x) b(y).
  RealVector input_energies() const { return transition * output_energies; }
};

/// Identity on {0,1}, b = (0, 1).
DiscreteChannel binary_noiseless();
/// Crossover p, b = (0, 1).
DiscreteChannel binary_symmetric(double p);
/// Outputs (0, 1, erasure); b = (0, 1/(1-pe), 0) so that received energy equals P(X = 1).
DiscreteChannel binary_erasure(double pe);

double mutual_information(const RealVector& probs, const DiscreteChannel& channel);

/// Unconstrained capacity.
CapacityResult blahut_arimoto(const DiscreteChannel& channel);

/// max I(X;Y) subject to E[b(Y)] >= threshold.
CapacityResult capacity_power_ba(const DiscreteChannel& channel, double threshold);

double binary_noiseless_cb(double threshold);
double bsc_cb(double p, double threshold);
double bec_cb(double pe, double threshold);

}  // namespace qpower
