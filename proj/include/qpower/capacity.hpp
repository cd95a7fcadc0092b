#pragma once

// Holevo quantities under minimum output-energy constraints, and the solvers
// that trace the capacity-power function C1(B) and its private analogue P1(B).

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "qpower/channels.hpp"
#include "qpower/qcore.hpp"

namespace qpower {

/// Tr(H N(rho)) >= threshold.
struct PowerConstraint {
  ComplexMatrix hamiltonian;
  double threshold = 0.0;
};

enum class SolveStatus { Converged, MaxIter, Infeasible };

std::string_view to_string(SolveStatus status);

struct CapacityResult {
  double value = std::numeric_limits<double>::quiet_NaN();  // nats
  RealVector argmax_probs;
  std::vector<ComplexMatrix> argmax_states;  // input signal states
  RealVector achieved_energy;                // one entry per constraint
  std::vector<bool> active;                  // constraint tight at the optimum
  SolveStatus status = SolveStatus::Infeasible;
  double kkt_residual = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
};

struct PowerCurve {
  std::vector<double> grid;
  std::vector<CapacityResult> points;
};

struct SolverOptions {
  int max_iterations = 10000;
  double objective_tol = 1e-10;  // relative objective change that ends the ascent
  std::optional<RealVector> warm_start;
};

// ---------------------------------------------------------------------------
// Holevo quantities

/// S(sum_x p_x sigma_x) - sum_x p_x S(sigma_x) for fixed output letters.
double holevo_of_outputs(const std::vector<ComplexMatrix>& outputs, const RealVector& probs);

/// Partial derivatives of the Holevo quantity extended to unnormalized weights:
/// d chi / d p_x = D(sigma_x || sigma_bar) - 1.
RealVector holevo_gradient(const std::vector<ComplexMatrix>& outputs, const RealVector& probs);

/// Tr rho (ln rho - ln sigma); +inf when supp rho is not inside supp sigma.
double relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma);

double holevo(const CQEnsemble& ensemble, const KrausChannel& channel);

/// chi(ensemble through N) - chi(ensemble through N^c). Not clamped at zero.
double private_chi(const CQEnsemble& ensemble, const KrausChannel& channel);

double output_energy(const CQEnsemble& ensemble, const KrausChannel& channel,
                     const ComplexMatrix& hamiltonian);

/// max_x Tr(H N(rho_x)); thresholds above this are infeasible.
double max_feasible_energy(const std::vector<ComplexMatrix>& states, const KrausChannel& channel,
                           const ComplexMatrix& hamiltonian);

/// Largest output energy any input state can reach: top eigenvalue of N^dagger(H).
double max_feasible_energy(const KrausChannel& channel, const ComplexMatrix& hamiltonian);

// ---------------------------------------------------------------------------
// Fixed-letter solver

/// Maximization over the probability simplex intersected with the energy
/// halfspaces  energies.row(r) . p >= thresholds(r).  With env_outputs present
/// the objective is the private difference chi(outputs) - chi(env_outputs).
struct LetterProblem {
  std::vector<ComplexMatrix> outputs;
  std::vector<ComplexMatrix> env_outputs;
  RealMatrix energies;  // constraints x letters
  RealVector thresholds;
};

CapacityResult maximize_letters(const LetterProblem& problem, const SolverOptions& options = {});

/// Euclidean projection onto {p in simplex : energies p >= thresholds}.
/// One constraint is solved exactly through its multiplier; several are
/// handled with Dykstra's alternating projections.
RealVector project_feasible(const RealVector& y, const RealMatrix& energies,
                            const RealVector& thresholds);

CapacityResult c1_cq(const std::vector<ComplexMatrix>& states, const KrausChannel& channel,
                     const std::vector<PowerConstraint>& constraints,
                     const SolverOptions& options = {});

CapacityResult p1_cq(const std::vector<ComplexMatrix>& states, const KrausChannel& channel,
                     const std::vector<PowerConstraint>& constraints,
                     const SolverOptions& options = {});

/// Beam-splitter ensemble: probabilities optimized for fixed coherent letters,
/// energy measured by the photon number of the output.
CapacityResult c1_coherent(const std::vector<cplx>& amplitudes, double splitter_prob,
                           double threshold, const SolverOptions& options = {});

// ---------------------------------------------------------------------------
// Optimization over qubit signal states as well as probabilities

struct GeneralOptions {
  int restarts = 64;
  std::uint64_t seed = 0;
  int refine_candidates = 2;  // best sampled ensembles passed to coordinate refinement
  int refine_sweeps = 4;
  std::optional<CapacityResult> warm_start;
};

CapacityResult c1_general(const KrausChannel& channel, int letters,
                          const std::vector<PowerConstraint>& constraints,
                          const GeneralOptions& options = {});

CapacityResult p1_general(const KrausChannel& channel, int letters,
                          const std::vector<PowerConstraint>& constraints,
                          const GeneralOptions& options = {});

// ---------------------------------------------------------------------------
// Curves

using PointSolver = std::function<CapacityResult(double threshold, const CapacityResult* warm)>;

/// Solves every grid point; infeasible points are recorded with status
/// Infeasible. Points are visited from the largest threshold down so each
/// solve can start from the optimum of a strictly smaller feasible set.
PowerCurve sweep_curve(const PointSolver& solver, const std::vector<double>& grid);

PointSolver cq_point_solver(std::vector<ComplexMatrix> states, KrausChannel channel,
                            ComplexMatrix hamiltonian);
PointSolver private_cq_point_solver(std::vector<ComplexMatrix> states, KrausChannel channel,
                                    ComplexMatrix hamiltonian);
PointSolver general_point_solver(KrausChannel channel, int letters, ComplexMatrix hamiltonian,
                                 GeneralOptions options);
PointSolver private_general_point_solver(KrausChannel channel, int letters,
                                         ComplexMatrix hamiltonian, GeneralOptions options);
PointSolver coherent_point_solver(std::vector<cplx> amplitudes, double splitter_prob);

struct ConcavityViolation {
  std::size_t index;  // middle point of the triple
  double threshold;
  double violation;  // chord value minus curve value
};

struct ConcavityReport {
  bool is_concave = true;
  double max_violation = 0.0;
  std::vector<ConcavityViolation> violations;
  /// Maximal threshold intervals free of violations.
  std::vector<std::pair<double, double>> concave_segments;
};

inline constexpr double kConcavityTol = 1e-6;

ConcavityReport check_concavity(const std::vector<double>& grid, const std::vector<double>& values,
                                double tolerance = kConcavityTol);
ConcavityReport check_concavity(const PowerCurve& curve, double tolerance = kConcavityTol);

/// Largest increase between consecutive finite points; <= slack means non-increasing.
double max_increase(const PowerCurve& curve);

// ---------------------------------------------------------------------------
// Oracles and measurement

/// max chi(xi_1) + chi(xi_2) over product ensembles drawn from a probability
/// grid of the given spacing, subject to E_1 + E_2 >= 2B. Independent of the
/// ascent solver.
double c2_product_bruteforce(const std::vector<ComplexMatrix>& states, const KrausChannel& channel,
                             const ComplexMatrix& hamiltonian, double threshold,
                             double grid_density);

/// T(x, y) = Tr(E_y N(rho_x)).
RealMatrix induced_transition_matrix(const std::vector<ComplexMatrix>& states,
                                     const std::vector<ComplexMatrix>& povm,
                                     const KrausChannel& channel);

double accessible_information(const CQEnsemble& ensemble, const std::vector<ComplexMatrix>& povm,
                              const KrausChannel& channel);

}  // namespace qpower
