#pragma once

#include <complex>
#include <vector>

#include "qpower/qcore.hpp"

namespace qpower {

/// Completely positive trace-preserving map rho -> sum_i K_i rho K_i^dagger.
/// Each Kraus operator is dim_out x dim_in.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> kraus_ops);

  Eigen::Index dim_in() const { return ops_.front().cols(); }
  Eigen::Index dim_out() const { return ops_.front().rows(); }
  Eigen::Index env_dim() const { return static_cast<Eigen::Index>(ops_.size()); }
  const std::vector<ComplexMatrix>& kraus() const { return ops_; }

  ComplexMatrix operator()(const ComplexMatrix& rho) const;

  /// Heisenberg-picture action sum_i K_i^dagger X K_i.
  ComplexMatrix adjoint(const ComplexMatrix& observable) const;

 private:
  std::vector<ComplexMatrix> ops_;
};

ComplexMatrix apply(const KrausChannel& channel, const ComplexMatrix& rho);

/// Channel to the environment of the Stinespring isometry V = sum_i K_i (x) |i>_E.
/// Its Kraus operators E_j satisfy (E_j)_{i,k} = (K_i)_{j,k}.
KrausChannel complementary(const KrausChannel& channel);

KrausChannel identity_channel(int d);

/// (1 - lambda) rho + (lambda / d) I, for 0 <= lambda <= 1 + 1/(d^2 - 1).
/// Kraus form uses the d^2 Weyl operators X^a Z^b.
KrausChannel depolarizing(double lambda, int d);

/// Qubit channel with isometry sqrt(1-lambda) I (x) |0> + sqrt(lambda/3) sum_k sigma_k (x) |k>.
/// Its action is (1 - lambda) rho + (lambda/3) sum_k sigma_k rho sigma_k.
KrausChannel depolarizing_isometry_channel(double lambda);

/// K0 = diag(1, sqrt(1-lambda)), K1 = sqrt(lambda) |0><1|.
KrausChannel amplitude_damping(double lambda);

/// Pauli channel with flip probabilities (p_x, p_y, p_z); unequal values give
/// an asymmetric depolarizing channel.
KrausChannel pauli_channel(double px, double py, double pz);

/// N (x) N with Kraus set {K_i (x) K_j}.
KrausChannel tensor_square(const KrausChannel& channel);

/// Fixed signal states with a probability vector.
struct CQEnsemble {
  std::vector<ComplexMatrix> states;
  RealVector probs;

  CQEnsemble(std::vector<ComplexMatrix> states, RealVector probs);

  Eigen::Index size() const { return static_cast<Eigen::Index>(states.size()); }
  Eigen::Index dim() const { return states.front().rows(); }
  ComplexMatrix average() const;
};

/// Pure-state ensemble from kets.
CQEnsemble pure_ensemble(const std::vector<ComplexVector>& kets, const RealVector& probs);

/// The three symmetric qubit states at 120 degrees in the x-z plane, uniform weights.
CQEnsemble trine_ensemble();

/// E_a = (2/3)(I - |phi_a><phi_a|) on the trine states; outcome a excludes letter a.
std::vector<ComplexMatrix> trine_povm();

/// sum_a b(a) E_a with the trine POVM elements.
ComplexMatrix trine_observable(const RealVector& outcome_energies);

// ---------------------------------------------------------------------------
// Coherent states, represented by amplitude only.

struct CoherentComponent {
  double weight;
  cplx amplitude;
};

using CoherentMixture = std::vector<CoherentComponent>;

struct CoherentEnsemble {
  std::vector<cplx> amplitudes;
  RealVector probs;
  double splitter_prob = 0.0;  // p_b

  CoherentEnsemble(std::vector<cplx> amplitudes, RealVector probs, double splitter_prob);
};

/// <alpha|beta> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(alpha) beta).
cplx coherent_overlap(cplx alpha, cplx beta);

/// Gram matrix M_ij = sqrt(w_i w_j) <alpha_i|alpha_j>; it shares its nonzero
/// spectrum with sum_i w_i |alpha_i><alpha_i|.
ComplexMatrix coherent_gram(const std::vector<cplx>& amplitudes, const RealVector& weights);

/// S(sum_i w_i |alpha_i><alpha_i|) without Fock truncation.
double mixture_entropy_gram(const std::vector<cplx>& amplitudes, const RealVector& weights);

struct BeamSplitterOutput {
  std::vector<CoherentMixture> letters;
  RealVector letter_energy;  // mean photon number of each output letter
};

/// 50-50 splitter with vacuum environment acting with probability p_b:
/// |alpha> -> p_b |alpha/sqrt2><..| + (1-p_b) |alpha><alpha|.
BeamSplitterOutput beam_splitter_output(const CoherentEnsemble& ensemble);

/// Embeds a family of coherent states into an orthonormal basis of their span.
/// Column k of the result holds the coordinates of |alpha_k>, so inner products
/// are preserved exactly.
ComplexMatrix coherent_span_coordinates(const std::vector<cplx>& amplitudes);

/// Output letters of the beam splitter as density matrices on the span of all
/// coherent components involved.
std::vector<ComplexMatrix> beam_splitter_letter_states(const BeamSplitterOutput& output);

/// Truncated Fock amplitudes of |alpha>; throws CutoffTooSmall when the
/// discarded tail carries probability >= 1e-12.
ComplexVector coherent_fock_vector(cplx alpha, int cutoff);

}  // namespace qpower
