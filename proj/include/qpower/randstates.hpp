#pragma once

// Entropy statistics of Haar-random pure states, the energy-tilted
// distribution of their probability weights, and the resulting analytic
// capacity-power curve of a noiseless channel.

#include <cstdint>
#include <vector>

#include "qpower/qcore.hpp"
#include "qpower/random.hpp"

namespace qpower {

/// ln N - (mean Haar entropy) in the large-N limit: 1 - Euler's gamma.
inline constexpr double kTypicalEntropyGap = 0.422784;

/// Energies b_n = Tr(H pi_n) of the measurement basis, sorted ascending.
struct EnergySpectrum {
  RealVector levels;

  explicit EnergySpectrum(RealVector levels);
  int size() const { return static_cast<int>(levels.size()); }
};

/// P_n = 1 / (nu + mu b_n).
struct ConstrainedDist {
  double nu = 0.0;
  double mu = 0.0;
  RealVector probs;
};

/// Squared magnitudes of a normalized standard complex Gaussian vector.
RealVector haar_probability_vector(int n, Rng& rng);
RealVector haar_probability_vector(int n, std::uint64_t seed);

/// T_N - 1 with T_N the harmonic number.
double mean_entropy_exact(int n);

/// ln N - 0.422784.
double typical_entropy_asymptotic(int n);

/// B_t = sum_n b_n / N.
double typical_energy(const EnergySpectrum& spectrum);

/// Solves sum_n P_n = 1 and sum_n b_n P_n = B for B strictly inside the level range.
ConstrainedDist solve_nu_mu(const EnergySpectrum& spectrum, double threshold);

/// ln N - 0.422784 up to B_t, then H(P) - 0.422784 with P from solve_nu_mu.
/// Negative values near max(b) are returned as is unless clamp_nonnegative.
double noiseless_capacity_power(const EnergySpectrum& spectrum, double threshold,
                                bool clamp_nonnegative = false);

struct MonteCarloEstimate {
  double mean = 0.0;            // entropy, nats
  double standard_error = 0.0;
  double energy_mean = 0.0;     // sum b_n p_n after renormalization
  double energy_standard_error = 0.0;
  double raw_energy_mean = 0.0; // same before renormalization; unbiased for B
  double raw_energy_standard_error = 0.0;
  int samples = 0;
};

/// Entropy of renormalized independent exponential weights with rates
/// nu + mu b_n. Below B_t the unconstrained rates (nu = N, mu = 0) are used.
MonteCarloEstimate mc_constrained_entropy(const EnergySpectrum& spectrum, double threshold,
                                          int samples, std::uint64_t seed);

/// Mean entropy of Haar-random pure states in dimension n.
MonteCarloEstimate haar_entropy_statistics(int n, int samples, std::uint64_t seed);

struct StdPoint {
  int n;
  double entropy_std;
};

/// Sample standard deviation of the Haar entropy per dimension; dimension k of
/// the list uses stream splitmix64(seed + k).
std::vector<StdPoint> entropy_std_curve(const std::vector<int>& dims, int samples,
                                        std::uint64_t seed);

struct EnergyMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Moments of sum_n b_n p_n with p_n i.i.d. of density N exp(-N p).
EnergyMoments sample_typical_energy(const EnergySpectrum& spectrum, int samples,
                                    std::uint64_t seed);

}  // namespace qpower
