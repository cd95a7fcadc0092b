#include "qpower/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>

namespace qpower {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIter: return "MaxIter";
    case SolveStatus::Infeasible: return "Infeasible";
  }
  return "Unknown";
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasibilitySlack = 1e-9;
constexpr double kKktTol = 1e-7;
// Spectrum floor used for ln(sigma_bar) inside gradients.
constexpr double kLogFloor = 1e-16;

ComplexMatrix mix(const std::vector<ComplexMatrix>& states, const RealVector& probs) {
  ComplexMatrix avg = ComplexMatrix::Zero(states.front().rows(), states.front().cols());
  for (std::size_t x = 0; x < states.size(); ++x) {
    const double w = probs(static_cast<Eigen::Index>(x));
    if (w != 0.0) avg += w * states[x];
  }
  return avg;
}

std::vector<ComplexMatrix> apply_all(const KrausChannel& channel,
                                     const std::vector<ComplexMatrix>& states) {
  std::vector<ComplexMatrix> out;
  out.reserve(states.size());
  for (const auto& rho : states) out.push_back(channel(rho));
  return out;
}

void require_letters(const std::vector<ComplexMatrix>& states, const KrausChannel& channel) {
  if (states.empty()) throw Error(Errc::DimMismatch, "need at least one signal state");
  for (const auto& rho : states) {
    if (rho.rows() != channel.dim_in())
      throw Error(Errc::DimMismatch, "signal state dimension does not match channel input");
    require_density(rho);
  }
}

RealVector letter_entropies(const std::vector<ComplexMatrix>& outputs) {
  RealVector s(static_cast<Eigen::Index>(outputs.size()));
  for (std::size_t x = 0; x < outputs.size(); ++x)
    s(static_cast<Eigen::Index>(x)) = von_neumann_entropy(outputs[x]);
  return s;
}

// -Tr(sigma_x ln sigma_bar) for every letter, with the spectrum of sigma_bar floored.
RealVector cross_entropies(const std::vector<ComplexMatrix>& outputs, const ComplexMatrix& avg) {
  const auto eig = eig_hermitian(avg);
  const RealVector logs = eig.values.cwiseMax(kLogFloor).array().log().matrix();
  const ComplexMatrix log_avg = eig.vectors * logs.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
  RealVector out(static_cast<Eigen::Index>(outputs.size()));
  for (std::size_t x = 0; x < outputs.size(); ++x)
    out(static_cast<Eigen::Index>(x)) = -expectation(log_avg, outputs[x]);
  return out;
}

// Value and gradient of chi(outputs) [- chi(env_outputs)] as a function of p.
class LetterObjective {
 public:
  explicit LetterObjective(const LetterProblem& problem)
      : problem_(problem),
        s_out_(letter_entropies(problem.outputs)),
        s_env_(problem.env_outputs.empty() ? RealVector() : letter_entropies(problem.env_outputs)) {}

  double value(const RealVector& p) const {
    double v = entropy_of_spectrum(hermitian_eigenvalues(mix(problem_.outputs, p))) - p.dot(s_out_);
    if (!problem_.env_outputs.empty())
      v -= entropy_of_spectrum(hermitian_eigenvalues(mix(problem_.env_outputs, p))) - p.dot(s_env_);
    return v;
  }

  RealVector gradient(const RealVector& p) const {
    RealVector g = cross_entropies(problem_.outputs, mix(problem_.outputs, p)) - s_out_;
    if (!problem_.env_outputs.empty())
      g -= cross_entropies(problem_.env_outputs, mix(problem_.env_outputs, p)) - s_env_;
    return g.array() - (problem_.env_outputs.empty() ? 1.0 : 0.0);
  }

 private:
  const LetterProblem& problem_;
  RealVector s_out_;
  RealVector s_env_;
};

RealVector project_simplex(const RealVector& y) {
  const auto n = y.size();
  std::vector<double> u(y.data(), y.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += u[static_cast<std::size_t>(j)];
    const double candidate = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[static_cast<std::size_t>(j)] - candidate > 0.0) tau = candidate;
  }
  return (y.array() - tau).cwiseMax(0.0).matrix();
}

// Exact projection onto simplex intersected with {e.x >= b}: x(mu) = P_simplex(y + mu e)
// with e.x(mu) nondecreasing in mu.
RealVector project_simplex_halfspace(const RealVector& y, const RealVector& e, double b) {
  RealVector x = project_simplex(y);
  if (e.dot(x) >= b) return x;
  if (e.maxCoeff() - e.minCoeff() <= 0.0) return x;
  double lo = 0.0;
  double hi = 1.0;
  RealVector x_hi = project_simplex(y + hi * e);
  for (int k = 0; k < 1100 && e.dot(x_hi) < b; ++k) {
    lo = hi;
    hi *= 2.0;
    x_hi = project_simplex(y + hi * e);
  }
  for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    RealVector xm = project_simplex(y + mid * e);
    if (e.dot(xm) >= b) {
      hi = mid;
      x_hi = std::move(xm);
    } else {
      lo = mid;
    }
  }
  return x_hi;
}

RealVector project_halfspace(const RealVector& z, const RealVector& e, double b) {
  const double gap = b - e.dot(z);
  if (gap <= 0.0) return z;
  const double nn = e.squaredNorm();
  if (nn == 0.0) return z;
  return z + (gap / nn) * e;
}

double min_slack(const RealMatrix& energies, const RealVector& thresholds, const RealVector& p) {
  if (thresholds.size() == 0) return kInf;
  return (energies * p - thresholds).minCoeff();
}

double kkt_residual(const RealVector& p, const RealVector& g, const RealMatrix& energies,
                    const RealVector& thresholds) {
  return (p - project_feasible(p + g, energies, thresholds)).lpNorm<Eigen::Infinity>();
}

void check_thresholds(const RealMatrix& energies, const RealVector& thresholds) {
  for (Eigen::Index r = 0; r < thresholds.size(); ++r) {
    const double reach = energies.row(r).maxCoeff();
    if (thresholds(r) > reach + kFeasibilitySlack)
      throw Error(Errc::Infeasible, "energy threshold " + std::to_string(thresholds(r)) +
                                        " exceeds the largest letter energy " +
                                        std::to_string(reach));
  }
}

CapacityResult finish(const LetterProblem& problem, RealVector p, double value, int iterations,
                      double residual) {
  CapacityResult res;
  res.value = value;
  res.iterations = iterations;
  res.kkt_residual = residual;
  res.status = residual <= kKktTol ? SolveStatus::Converged : SolveStatus::MaxIter;
  res.achieved_energy = problem.energies * p;
  for (Eigen::Index r = 0; r < problem.thresholds.size(); ++r)
    res.active.push_back(res.achieved_energy(r) - problem.thresholds(r) <=
                         kKktTol * (1.0 + std::abs(problem.thresholds(r))));
  res.argmax_probs = std::move(p);
  return res;
}

}  // namespace

RealVector project_feasible(const RealVector& y, const RealMatrix& energies,
                            const RealVector& thresholds) {
  const auto constraints = thresholds.size();
  if (constraints == 0) return project_simplex(y);
  if (constraints == 1) return project_simplex_halfspace(y, energies.row(0).transpose(), thresholds(0));

  // Dykstra: the correction terms make the cyclic sequence converge to the
  // projection onto the intersection rather than to an arbitrary point in it.
  const auto sets = constraints + 1;
  std::vector<RealVector> corrections(static_cast<std::size_t>(sets), RealVector::Zero(y.size()));
  RealVector x = y;
  for (int cycle = 0; cycle < 20000; ++cycle) {
    // The cycle end point can repeat while the corrections still move, so both are tracked.
    double moved = 0.0;
    for (Eigen::Index k = 0; k < sets; ++k) {
      auto& corr = corrections[static_cast<std::size_t>(k)];
      const RealVector z = x + corr;
      const RealVector next = k == 0 ? project_simplex(z)
                                     : project_halfspace(z, energies.row(k - 1).transpose(), thresholds(k - 1));
      moved = std::max(moved, (next - x).lpNorm<Eigen::Infinity>());
      x = next;
      corr = z - x;
    }
    if (moved < 1e-15) break;
  }
  return project_simplex(x);
}

// Trial point of a step that leaves letters with weight below `tiny` where they
// are and moves the others within the remaining mass.
std::optional<RealVector> face_trial(const RealVector& p, const RealVector& g, double t,
                                     const RealMatrix& energies, const RealVector& thresholds, double tiny) {
  std::vector<Eigen::Index> free;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) > tiny) free.push_back(i);
  const auto n = static_cast<Eigen::Index>(free.size());
  if (n < 2 || n == p.size()) return std::nullopt;
  double mass = 0.0;
  RealVector y(n);
  RealMatrix e(energies.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto i = free[static_cast<std::size_t>(k)];
    mass += p(i);
    y(k) = p(i) + t * g(i);
    e.col(k) = energies.col(i);
  }
  RealVector shifted = thresholds;
  for (Eigen::Index r = 0; r < thresholds.size(); ++r) {
    shifted(r) = (thresholds(r) - (energies.row(r).dot(p) - e.row(r).dot(p(free)))) / mass;
    if (shifted(r) > e.row(r).maxCoeff()) return std::nullopt;
  }
  const RealVector z = project_feasible(y / mass, e, shifted);
  RealVector q = p;
  for (Eigen::Index k = 0; k < n; ++k) q(free[static_cast<std::size_t>(k)]) = mass * z(k);
  return q;
}

double relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  const auto eig = eig_hermitian(sigma);
  double cross = 0.0;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    const double weight = std::real(eig.vectors.col(k).dot(rho * eig.vectors.col(k)));
    if (eig.values(k) <= 1e-14) {
      if (weight > 1e-12) return kInf;
      continue;
    }
    cross += weight * std::log(eig.values(k));
  }
  return -von_neumann_entropy(rho) - cross;
}

double holevo_of_outputs(const std::vector<ComplexMatrix>& outputs, const RealVector& probs) {
  if (outputs.empty() || static_cast<Eigen::Index>(outputs.size()) != probs.size())
    throw Error(Errc::DimMismatch, "letters and probabilities differ in length");
  const RealVector p = checked_simplex(probs);
  return von_neumann_entropy(mix(outputs, p)) - p.dot(letter_entropies(outputs));
}

RealVector holevo_gradient(const std::vector<ComplexMatrix>& outputs, const RealVector& probs) {
  if (outputs.empty() || static_cast<Eigen::Index>(outputs.size()) != probs.size())
    throw Error(Errc::DimMismatch, "letters and probabilities differ in length");
  return (cross_entropies(outputs, mix(outputs, probs)) - letter_entropies(outputs)).array() - 1.0;
}

double holevo(const CQEnsemble& ensemble, const KrausChannel& channel) {
  if (ensemble.dim() != channel.dim_in())
    throw Error(Errc::DimMismatch, "ensemble dimension does not match channel input");
  return holevo_of_outputs(apply_all(channel, ensemble.states), ensemble.probs);
}

double private_chi(const CQEnsemble& ensemble, const KrausChannel& channel) {
  return holevo(ensemble, channel) - holevo(ensemble, complementary(channel));
}

double output_energy(const CQEnsemble& ensemble, const KrausChannel& channel,
                     const ComplexMatrix& hamiltonian) {
  if (ensemble.dim() != channel.dim_in())
    throw Error(Errc::DimMismatch, "ensemble dimension does not match channel input");
  return expectation(hamiltonian, channel(ensemble.average()));
}

double max_feasible_energy(const std::vector<ComplexMatrix>& states, const KrausChannel& channel,
                           const ComplexMatrix& hamiltonian) {
  if (states.empty()) throw Error(Errc::DimMismatch, "need at least one signal state");
  double best = -kInf;
  for (const auto& rho : states) best = std::max(best, expectation(hamiltonian, channel(rho)));
  return best;
}

double max_feasible_energy(const KrausChannel& channel, const ComplexMatrix& hamiltonian) {
  require_hermitian(hamiltonian);
  return hermitian_eigenvalues(channel.adjoint(hamiltonian)).maxCoeff();
}

CapacityResult maximize_letters(const LetterProblem& problem, const SolverOptions& options) {
  const auto m = static_cast<Eigen::Index>(problem.outputs.size());
  if (m == 0) throw Error(Errc::DimMismatch, "need at least one letter");
  if (!problem.env_outputs.empty() && static_cast<Eigen::Index>(problem.env_outputs.size()) != m)
    throw Error(Errc::DimMismatch, "environment letters differ in number");
  if (problem.energies.rows() != problem.thresholds.size() || problem.energies.cols() != m)
    throw Error(Errc::DimMismatch, "energy table shape does not match letters and constraints");
  check_thresholds(problem.energies, problem.thresholds);

  // Thresholds within the feasibility slack of a letter energy are pinned to it.
  LetterProblem pinned = problem;
  for (Eigen::Index r = 0; r < pinned.thresholds.size(); ++r)
    pinned.thresholds(r) = std::min(pinned.thresholds(r), pinned.energies.row(r).maxCoeff());
  // Each row is measured from its threshold in units of its energy spread.
  for (Eigen::Index r = 0; r < pinned.thresholds.size(); ++r) {
    const double spread = pinned.energies.row(r).maxCoeff() - pinned.energies.row(r).minCoeff();
    pinned.energies.row(r).array() -= pinned.thresholds(r);
    pinned.thresholds(r) = 0.0;
    if (spread > 0.0) pinned.energies.row(r) /= spread;
  }
  const RealMatrix& energies = pinned.energies;
  const RealVector& thresholds = pinned.thresholds;

  RealVector start = RealVector::Constant(m, 1.0 / static_cast<double>(m));
  if (options.warm_start && options.warm_start->size() == m) start = *options.warm_start;
  RealVector p = project_feasible(start, energies, thresholds);
  if (min_slack(energies, thresholds, p) < -kKktTol)
    throw Error(Errc::Infeasible, "energy constraints admit no common probability vector");

  const LetterObjective objective(pinned);
  double f = objective.value(p);
  RealVector g = objective.gradient(p);
  double step = 1.0;
  int it = 0;
  double residual = kkt_residual(p, g, energies, thresholds);

  // Spectral projected gradient: Barzilai-Borwein trial step, Armijo backtracking
  // along the projection arc.
  while (it < options.max_iterations && residual > 1e-12) {
    ++it;
    double t = step;
    RealVector q;
    double fq = f;
    bool accepted = false;
    const auto armijo = [&](const RealVector& trial, double& value) {
      value = objective.value(trial);
      return value >= f + 1e-4 * g.dot(trial - p) - 8.0 * kEps * (1.0 + std::abs(f));
    };
    for (int ls = 0; ls < 80; ++ls) {
      q = project_feasible(p + t * g, energies, thresholds);
      if ((q - p).lpNorm<Eigen::Infinity>() < 1e-17) break;
      if (armijo(q, fq)) {
        accepted = true;
        break;
      }
      // A nearly absent letter can block the full step; retry with it frozen.
      if (ls == 0) {
        auto face = face_trial(p, g, t, energies, thresholds, 1e-6);
        double ff = f;
        if (face && (*face - p).lpNorm<Eigen::Infinity>() >= 1e-17 && armijo(*face, ff) && ff > f) {
          fq = ff;
          q = std::move(*face);
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) break;

    // Curvature is measured on letters with non-negligible weight; the entropy
    // curvature of a nearly absent letter grows like 1/p and would pin the step.
    const RealVector gq = objective.gradient(q);
    const RealVector keep = ((p.array() > 1e-6) && (q.array() > 1e-6)).cast<double>().matrix();
    RealVector s = (q - p).cwiseProduct(keep);
    if (s.squaredNorm() == 0.0) s = q - p;
    const double sy = s.dot(gq - g);
    step = sy < 0.0 ? std::clamp(-s.squaredNorm() / sy, 1e-12, 1e12) : std::min(2.0 * t, 1e12);

    const double change = fq - f;
    p = q;
    f = fq;
    g = gq;
    if (change <= options.objective_tol * (1.0 + std::abs(f))) {
      residual = kkt_residual(p, g, energies, thresholds);
      if (residual <= kKktTol) break;
    }
  }
  residual = kkt_residual(p, g, energies, thresholds);
  auto res = finish(problem, std::move(p), f, it, residual);
  return res;
}

namespace {

LetterProblem letter_problem(const std::vector<ComplexMatrix>& states, const KrausChannel& channel,
                             const std::vector<PowerConstraint>& constraints, bool with_env) {
  require_letters(states, channel);
  LetterProblem problem;
  problem.outputs = apply_all(channel, states);
  if (with_env) problem.env_outputs = apply_all(complementary(channel), states);
  const auto m = static_cast<Eigen::Index>(states.size());
  const auto r = static_cast<Eigen::Index>(constraints.size());
  problem.energies.resize(r, m);
  problem.thresholds.resize(r);
  for (Eigen::Index k = 0; k < r; ++k) {
    const auto& c = constraints[static_cast<std::size_t>(k)];
    require_hermitian(c.hamiltonian);
    if (c.hamiltonian.rows() != channel.dim_out())
      throw Error(Errc::DimMismatch, "Hamiltonian dimension does not match channel output");
    problem.thresholds(k) = c.threshold;
    for (Eigen::Index x = 0; x < m; ++x)
      problem.energies(k, x) = expectation(c.hamiltonian, problem.outputs[static_cast<std::size_t>(x)]);
  }
  return problem;
}

}  // namespace

CapacityResult c1_cq(const std::vector<ComplexMatrix>& states, const KrausChannel& channel,
                     const std::vector<PowerConstraint>& constraints, const SolverOptions& options) {
  auto res = maximize_letters(letter_problem(states, channel, constraints, false), options);
  res.argmax_states = states;
  return res;
}

CapacityResult p1_cq(const std::vector<ComplexMatrix>& states, const KrausChannel& channel,
                     const std::vector<PowerConstraint>& constraints, const SolverOptions& options) {
  auto res = maximize_letters(letter_problem(states, channel, constraints, true), options);
  res.argmax_states = states;
  return res;
}

CapacityResult c1_coherent(const std::vector<cplx>& amplitudes, double splitter_prob,
                           double threshold, const SolverOptions& options) {
  const auto m = static_cast<Eigen::Index>(amplitudes.size());
  const CoherentEnsemble ensemble(amplitudes, RealVector::Constant(m, 1.0 / static_cast<double>(m)),
                                  splitter_prob);
  const auto output = beam_splitter_output(ensemble);
  LetterProblem problem;
  problem.outputs = beam_splitter_letter_states(output);
  problem.energies = output.letter_energy.transpose();
  problem.thresholds = RealVector::Constant(1, threshold);
  return maximize_letters(problem, options);
}

// ---------------------------------------------------------------------------
// State-optimized solvers

namespace {

struct Angles {
  std::vector<double> theta;
  std::vector<double> phi;
};

std::vector<ComplexMatrix> states_from(const Angles& a) {
  std::vector<ComplexMatrix> states;
  for (std::size_t i = 0; i < a.theta.size(); ++i)
    states.push_back(projector(bloch_ket(a.theta[i], a.phi[i])));
  return states;
}

std::pair<double, double> angles_of(const ComplexMatrix& rho) {
  const double x = expectation(pauli::x(), rho);
  const double y = expectation(pauli::y(), rho);
  const double z = expectation(pauli::z(), rho);
  const double r = std::sqrt(x * x + y * y + z * z);
  if (r < 1e-14) return {std::numbers::pi / 2, 0.0};
  return {std::acos(std::clamp(z / r, -1.0, 1.0)), std::atan2(y, x)};
}

class StateSearch {
 public:
  StateSearch(const KrausChannel& channel, int letters,
              const std::vector<PowerConstraint>& constraints, bool is_private)
      : channel_(channel), letters_(letters), constraints_(constraints), private_(is_private) {
    if (channel.dim_in() != 2)
      throw Error(Errc::UnsupportedDim, "state optimization supports qubit inputs only");
    if (letters < 1) throw Error(Errc::OutOfRange, "need at least one letter");
    if (private_) env_ = complementary(channel);
    for (const auto& c : constraints) {
      require_hermitian(c.hamiltonian);
      if (c.hamiltonian.rows() != channel.dim_out())
        throw Error(Errc::DimMismatch, "Hamiltonian dimension does not match channel output");
      if (c.threshold > max_feasible_energy(channel, c.hamiltonian) + kFeasibilitySlack)
        throw Error(Errc::Infeasible, "energy threshold exceeds what any input state reaches");
      pulled_back_.push_back(channel.adjoint(c.hamiltonian));
    }
  }

  struct Candidate {
    Angles angles;
    CapacityResult result;
    double value() const {
      return result.status == SolveStatus::Infeasible ? -kInf : result.value;
    }
  };

  Candidate evaluate(const Angles& angles, const RealVector* warm) const {
    Candidate cand{angles, {}};
    const auto states = states_from(angles);
    LetterProblem problem;
    problem.outputs = apply_all(channel_, states);
    if (private_) problem.env_outputs = apply_all(*env_, states);
    const auto r = static_cast<Eigen::Index>(constraints_.size());
    problem.energies.resize(r, letters_);
    problem.thresholds.resize(r);
    for (Eigen::Index k = 0; k < r; ++k) {
      problem.thresholds(k) = constraints_[static_cast<std::size_t>(k)].threshold;
      for (int x = 0; x < letters_; ++x)
        problem.energies(k, x) =
            expectation(pulled_back_[static_cast<std::size_t>(k)], states[static_cast<std::size_t>(x)]);
    }
    SolverOptions opts;
    if (warm) opts.warm_start = *warm;
    try {
      cand.result = maximize_letters(problem, opts);
      cand.result.argmax_states = states;
    } catch (const Error& e) {
      if (e.code() != Errc::Infeasible) throw;
      cand.result.status = SolveStatus::Infeasible;
    }
    return cand;
  }

  // Letter 0 on the top eigenvector of N^dagger(H) (the only way to reach the
  // largest thresholds), letter 1 on the bottom one, the rest spread on the equator.
  Angles eigen_seed() const {
    Angles a;
    const ComplexMatrix pulled = pulled_back_.empty() ? pauli::z() : pulled_back_.front();
    const auto eig = eig_hermitian(pulled);
    const auto top = angles_of(projector(eig.vectors.col(1)));
    const auto bottom = angles_of(projector(eig.vectors.col(0)));
    for (int x = 0; x < letters_; ++x) {
      const auto [t, p] = x == 0   ? top
                          : x == 1 ? bottom
                                   : std::pair{std::numbers::pi / 2, 2 * std::numbers::pi * x / letters_};
      a.theta.push_back(t);
      a.phi.push_back(p);
    }
    return a;
  }

  Angles sample(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Angles a;
    for (int x = 0; x < letters_; ++x) {
      a.theta.push_back(std::acos(1.0 - 2.0 * unit(rng)));
      a.phi.push_back(2.0 * std::numbers::pi * unit(rng));
    }
    return a;
  }

  // Coordinate ascent over (theta_i, phi_i) with golden-section line searches
  // on a window that halves every sweep.
  Candidate refine(Candidate best, int sweeps) const {
    constexpr double kGolden = 0.6180339887498949;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      const double half_width = (std::numbers::pi / 2) / std::pow(2.0, sweep);
      for (int coord = 0; coord < 2 * letters_; ++coord) {
        const bool is_theta = coord % 2 == 0;
        const auto idx = static_cast<std::size_t>(coord / 2);
        const double centre = is_theta ? best.angles.theta[idx] : best.angles.phi[idx];
        double lo = centre - half_width;
        double hi = centre + half_width;
        if (is_theta) {
          lo = std::max(lo, 0.0);
          hi = std::min(hi, std::numbers::pi);
        }
        const RealVector warm = best.result.argmax_probs;
        auto eval_at = [&](double v) {
          Angles a = best.angles;
          (is_theta ? a.theta[idx] : a.phi[idx]) = v;
          return evaluate(a, warm.size() ? &warm : nullptr);
        };
        double x1 = hi - kGolden * (hi - lo);
        double x2 = lo + kGolden * (hi - lo);
        Candidate c1 = eval_at(x1);
        Candidate c2 = eval_at(x2);
        for (int k = 0; k < 18; ++k) {
          if (c1.value() >= c2.value()) {
            hi = x2;
            x2 = x1;
            c2 = std::move(c1);
            x1 = hi - kGolden * (hi - lo);
            c1 = eval_at(x1);
          } else {
            lo = x1;
            x1 = x2;
            c1 = std::move(c2);
            x2 = lo + kGolden * (hi - lo);
            c2 = eval_at(x2);
          }
        }
        Candidate& winner = c1.value() >= c2.value() ? c1 : c2;
        if (winner.value() > best.value() + 1e-13) best = std::move(winner);
      }
    }
    return best;
  }

  // Nelder-Mead over all angles jointly; follows the ridges that the energy
  // constraint creates between letters, where coordinate steps crawl.
  Candidate polish(Candidate best) const {
    const std::size_t dim = 2 * static_cast<std::size_t>(letters_);
    auto to_angles = [&](const std::vector<double>& v) {
      Angles a;
      for (int x = 0; x < letters_; ++x) {
        a.theta.push_back(v[2 * static_cast<std::size_t>(x)]);
        a.phi.push_back(v[2 * static_cast<std::size_t>(x) + 1]);
      }
      return a;
    };
    std::vector<double> start;
    for (int x = 0; x < letters_; ++x) {
      start.push_back(best.angles.theta[static_cast<std::size_t>(x)]);
      start.push_back(best.angles.phi[static_cast<std::size_t>(x)]);
    }
    struct Vertex {
      std::vector<double> at;
      Candidate cand;
    };
    const RealVector warm = best.result.argmax_probs;
    auto eval_at = [&](std::vector<double> v) {
      Candidate c = evaluate(to_angles(v), warm.size() ? &warm : nullptr);
      return Vertex{std::move(v), std::move(c)};
    };
    std::vector<Vertex> simplex;
    simplex.push_back({start, best});
    for (std::size_t i = 0; i < dim; ++i) {
      auto v = start;
      v[i] += 0.05;
      simplex.push_back(eval_at(std::move(v)));
    }
    auto by_value = [](const Vertex& a, const Vertex& b) { return a.cand.value() > b.cand.value(); };
    int evals = 0;
    while (evals < 4000) {
      std::stable_sort(simplex.begin(), simplex.end(), by_value);
      const double spread = simplex.front().cand.value() - simplex.back().cand.value();
      double diameter = 0.0;
      for (std::size_t k = 1; k < simplex.size(); ++k)
        for (std::size_t i = 0; i < dim; ++i)
          diameter = std::max(diameter, std::abs(simplex[k].at[i] - simplex[0].at[i]));
      if (std::isfinite(spread) && spread < 1e-13 && diameter < 1e-6) break;
      if (diameter < 1e-10) break;

      std::vector<double> centroid(dim, 0.0);
      for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[k].at[i] / static_cast<double>(dim);
      auto along = [&](double t) {
        std::vector<double> v(dim);
        for (std::size_t i = 0; i < dim; ++i) v[i] = centroid[i] + t * (simplex.back().at[i] - centroid[i]);
        return v;
      };
      Vertex reflected = eval_at(along(-1.0));
      ++evals;
      if (reflected.cand.value() > simplex.front().cand.value()) {
        Vertex expanded = eval_at(along(-2.0));
        ++evals;
        simplex.back() = expanded.cand.value() > reflected.cand.value() ? std::move(expanded) : std::move(reflected);
        continue;
      }
      if (reflected.cand.value() > simplex[dim - 1].cand.value()) {
        simplex.back() = std::move(reflected);
        continue;
      }
      const bool outside = reflected.cand.value() > simplex.back().cand.value();
      Vertex contracted = eval_at(along(outside ? -0.5 : 0.5));
      ++evals;
      if (contracted.cand.value() > std::max(simplex.back().cand.value(), outside ? reflected.cand.value() : -kInf)) {
        simplex.back() = std::move(contracted);
        continue;
      }
      for (std::size_t k = 1; k < simplex.size(); ++k) {
        std::vector<double> v(dim);
        for (std::size_t i = 0; i < dim; ++i) v[i] = simplex[0].at[i] + 0.5 * (simplex[k].at[i] - simplex[0].at[i]);
        simplex[k] = eval_at(std::move(v));
        ++evals;
      }
    }
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    if (simplex.front().cand.value() > best.value() + 1e-13) return std::move(simplex.front().cand);
    return best;
  }

  CapacityResult run(const GeneralOptions& options) const {
    std::vector<Candidate> candidates;
    if (options.warm_start && options.warm_start->status != SolveStatus::Infeasible &&
        static_cast<int>(options.warm_start->argmax_states.size()) == letters_) {
      Angles a;
      for (const auto& rho : options.warm_start->argmax_states) {
        const auto [t, p] = angles_of(rho);
        a.theta.push_back(t);
        a.phi.push_back(p);
      }
      candidates.push_back(evaluate(a, &options.warm_start->argmax_probs));
    }
    candidates.push_back(evaluate(eigen_seed(), nullptr));
    std::mt19937_64 rng(options.seed);
    for (int r = 0; r < options.restarts; ++r) candidates.push_back(evaluate(sample(rng), nullptr));

    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return candidates[a].value() > candidates[b].value();
    });
    if (!std::isfinite(candidates[order.front()].value()))
      throw Error(Errc::Infeasible, "no sampled ensemble satisfies the energy constraints");

    std::size_t best = order.front();
    const auto refine_count = std::min<std::size_t>(
        static_cast<std::size_t>(std::max(options.refine_candidates, 0)), order.size());
    for (std::size_t k = 0; k < refine_count; ++k) {
      const std::size_t idx = order[k];
      if (!std::isfinite(candidates[idx].value())) break;
      candidates[idx] = polish(refine(std::move(candidates[idx]), options.refine_sweeps));
    }
    for (std::size_t idx = 0; idx < candidates.size(); ++idx)
      if (candidates[idx].value() > candidates[best].value()) best = idx;
    return candidates[best].result;
  }

 private:
  const KrausChannel& channel_;
  int letters_;
  const std::vector<PowerConstraint>& constraints_;
  bool private_;
  std::optional<KrausChannel> env_;
  std::vector<ComplexMatrix> pulled_back_;
};

}  // namespace

CapacityResult c1_general(const KrausChannel& channel, int letters,
                          const std::vector<PowerConstraint>& constraints,
                          const GeneralOptions& options) {
  return StateSearch(channel, letters, constraints, false).run(options);
}

CapacityResult p1_general(const KrausChannel& channel, int letters,
                          const std::vector<PowerConstraint>& constraints,
                          const GeneralOptions& options) {
  return StateSearch(channel, letters, constraints, true).run(options);
}

// ---------------------------------------------------------------------------
// Curves

PowerCurve sweep_curve(const PointSolver& solver, const std::vector<double>& grid) {
  if (grid.empty()) throw Error(Errc::OutOfRange, "empty threshold grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw Error(Errc::OutOfRange, "threshold grid must be strictly ascending");

  PowerCurve curve{grid, std::vector<CapacityResult>(grid.size())};
  const CapacityResult* warm = nullptr;
  for (std::size_t k = grid.size(); k-- > 0;) {
    try {
      curve.points[k] = solver(grid[k], warm);
    } catch (const Error& e) {
      if (e.code() != Errc::Infeasible) throw;
      curve.points[k] = CapacityResult{};
      curve.points[k].status = SolveStatus::Infeasible;
    }
    if (curve.points[k].status != SolveStatus::Infeasible) warm = &curve.points[k];
  }
  return curve;
}

namespace {

PointSolver fixed_letter_solver(std::vector<ComplexMatrix> states, KrausChannel channel,
                                ComplexMatrix hamiltonian, bool is_private) {
  return [states = std::move(states), channel = std::move(channel), h = std::move(hamiltonian),
          is_private](double threshold, const CapacityResult* warm) {
    SolverOptions opts;
    if (warm && warm->argmax_probs.size() == static_cast<Eigen::Index>(states.size()))
      opts.warm_start = warm->argmax_probs;
    const std::vector<PowerConstraint> constraints{{h, threshold}};
    return is_private ? p1_cq(states, channel, constraints, opts)
                      : c1_cq(states, channel, constraints, opts);
  };
}

PointSolver state_solver(KrausChannel channel, int letters, ComplexMatrix hamiltonian,
                         GeneralOptions options, bool is_private) {
  return [channel = std::move(channel), letters, h = std::move(hamiltonian), options,
          is_private](double threshold, const CapacityResult* warm) {
    GeneralOptions opts = options;
    if (warm) opts.warm_start = *warm;
    const std::vector<PowerConstraint> constraints{{h, threshold}};
    return is_private ? p1_general(channel, letters, constraints, opts)
                      : c1_general(channel, letters, constraints, opts);
  };
}

}  // namespace

PointSolver cq_point_solver(std::vector<ComplexMatrix> states, KrausChannel channel,
                            ComplexMatrix hamiltonian) {
  return fixed_letter_solver(std::move(states), std::move(channel), std::move(hamiltonian), false);
}

PointSolver private_cq_point_solver(std::vector<ComplexMatrix> states, KrausChannel channel,
                                    ComplexMatrix hamiltonian) {
  return fixed_letter_solver(std::move(states), std::move(channel), std::move(hamiltonian), true);
}

PointSolver general_point_solver(KrausChannel channel, int letters, ComplexMatrix hamiltonian,
                                 GeneralOptions options) {
  return state_solver(std::move(channel), letters, std::move(hamiltonian), std::move(options), false);
}

PointSolver private_general_point_solver(KrausChannel channel, int letters,
                                         ComplexMatrix hamiltonian, GeneralOptions options) {
  return state_solver(std::move(channel), letters, std::move(hamiltonian), std::move(options), true);
}

PointSolver coherent_point_solver(std::vector<cplx> amplitudes, double splitter_prob) {
  return [amplitudes = std::move(amplitudes), splitter_prob](double threshold,
                                                             const CapacityResult* warm) {
    SolverOptions opts;
    if (warm && warm->argmax_probs.size() == static_cast<Eigen::Index>(amplitudes.size()))
      opts.warm_start = warm->argmax_probs;
    return c1_coherent(amplitudes, splitter_prob, threshold, opts);
  };
}

ConcavityReport check_concavity(const std::vector<double>& grid, const std::vector<double>& values,
                                double tolerance) {
  if (grid.size() != values.size()) throw Error(Errc::DimMismatch, "grid and values differ in length");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (std::isfinite(values[i])) idx.push_back(i);
  if (idx.size() < 3) throw Error(Errc::TooFewPoints, "concavity check needs at least three points");

  ConcavityReport report;
  double seg_start = grid[idx.front()];
  for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
    const double b0 = grid[idx[k - 1]], b1 = grid[idx[k]], b2 = grid[idx[k + 1]];
    const double v0 = values[idx[k - 1]], v1 = values[idx[k]], v2 = values[idx[k + 1]];
    const double chord = v0 + (b1 - b0) / (b2 - b0) * (v2 - v0);
    const double violation = chord - v1;
    report.max_violation = std::max(report.max_violation, violation);
    if (violation > tolerance) {
      report.violations.push_back({idx[k], b1, violation});
      report.concave_segments.emplace_back(seg_start, b1);
      seg_start = b1;
    }
  }
  report.concave_segments.emplace_back(seg_start, grid[idx.back()]);
  report.is_concave = report.violations.empty();
  return report;
}

ConcavityReport check_concavity(const PowerCurve& curve, double tolerance) {
  std::vector<double> values;
  for (const auto& p : curve.points)
    values.push_back(p.status == SolveStatus::Infeasible ? std::numeric_limits<double>::quiet_NaN()
                                                         : p.value);
  return check_concavity(curve.grid, values, tolerance);
}

double max_increase(const PowerCurve& curve) {
  double worst = -kInf;
  const CapacityResult* prev = nullptr;
  for (const auto& p : curve.points) {
    if (p.status == SolveStatus::Infeasible || !std::isfinite(p.value)) continue;
    if (prev) worst = std::max(worst, p.value - prev->value);
    prev = &p;
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Oracles and measurement

double c2_product_bruteforce(const std::vector<ComplexMatrix>& states, const KrausChannel& channel,
                             const ComplexMatrix& hamiltonian, double threshold,
                             double grid_density) {
  require_letters(states, channel);
  const auto m = states.size();
  if (m > 3) throw Error(Errc::OutOfRange, "product brute force supports at most three letters");
  if (!(grid_density > 0.0 && grid_density <= 0.5))
    throw Error(Errc::OutOfRange, "grid density must lie in (0, 0.5]");
  const int steps = static_cast<int>(std::lround(1.0 / grid_density));

  const auto outputs = apply_all(channel, states);
  RealVector energy(static_cast<Eigen::Index>(m));
  for (std::size_t x = 0; x < m; ++x)
    energy(static_cast<Eigen::Index>(x)) = expectation(hamiltonian, outputs[x]);
  if (threshold > energy.maxCoeff() + kFeasibilitySlack)
    throw Error(Errc::Infeasible, "threshold exceeds the largest letter energy");
  const RealVector s = letter_entropies(outputs);

  struct GridPoint {
    double energy;
    double chi;
  };
  std::vector<GridPoint> pts;
  RealVector p(static_cast<Eigen::Index>(m));
  auto record = [&]() {
    const double chi = entropy_of_spectrum(hermitian_eigenvalues(mix(outputs, p))) - p.dot(s);
    pts.push_back({energy.dot(p), chi});
  };
  if (m == 1) {
    p(0) = 1.0;
    record();
  } else {
    for (int i = 0; i <= steps; ++i) {
      if (m == 2) {
        p << double(i) / steps, double(steps - i) / steps;
        record();
        continue;
      }
      for (int j = 0; i + j <= steps; ++j) {
        p << double(i) / steps, double(j) / steps, double(steps - i - j) / steps;
        record();
      }
    }
  }

  std::sort(pts.begin(), pts.end(), [](const GridPoint& a, const GridPoint& b) { return a.energy < b.energy; });
  std::vector<double> suffix_best(pts.size() + 1, -kInf);
  for (std::size_t k = pts.size(); k-- > 0;) suffix_best[k] = std::max(suffix_best[k + 1], pts[k].chi);

  double best = -kInf;
  for (const auto& first : pts) {
    const double need = 2.0 * threshold - first.energy - 1e-12;
    const auto it = std::lower_bound(pts.begin(), pts.end(), need,
                                     [](const GridPoint& a, double e) { return a.energy < e; });
    const double second = suffix_best[static_cast<std::size_t>(it - pts.begin())];
    if (std::isfinite(second)) best = std::max(best, first.chi + second);
  }
  if (!std::isfinite(best)) throw Error(Errc::Infeasible, "no grid pair meets the joint energy bound");
  return best;
}

namespace {

void require_povm(const std::vector<ComplexMatrix>& povm, Eigen::Index dim) {
  if (povm.empty()) throw Error(Errc::NotPOVM, "empty measurement");
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (const auto& e : povm) {
    if (e.rows() != dim || e.cols() != dim) throw Error(Errc::NotPOVM, "POVM element has wrong dimension");
    if (hermitian_defect(e) > tol::hermitian) throw Error(Errc::NotPOVM, "POVM element is not Hermitian");
    if (hermitian_eigenvalues(e).minCoeff() < -1e-9) throw Error(Errc::NotPOVM, "POVM element is not positive");
    sum += e;
  }
  if ((sum - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-9)
    throw Error(Errc::NotPOVM, "POVM elements do not sum to the identity");
}

}  // namespace

RealMatrix induced_transition_matrix(const std::vector<ComplexMatrix>& states,
                                     const std::vector<ComplexMatrix>& povm,
                                     const KrausChannel& channel) {
  require_letters(states, channel);
  require_povm(povm, channel.dim_out());
  RealMatrix t(static_cast<Eigen::Index>(states.size()), static_cast<Eigen::Index>(povm.size()));
  for (std::size_t x = 0; x < states.size(); ++x) {
    const ComplexMatrix out = channel(states[x]);
    for (std::size_t y = 0; y < povm.size(); ++y)
      t(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = expectation(povm[y], out);
  }
  return t;
}

double accessible_information(const CQEnsemble& ensemble, const std::vector<ComplexMatrix>& povm,
                              const KrausChannel& channel) {
  const RealMatrix t = induced_transition_matrix(ensemble.states, povm, channel);
  const RealMatrix joint = ensemble.probs.asDiagonal() * t.cwiseMax(0.0);
  const RealVector px = joint.rowwise().sum();
  const RealVector py = joint.colwise().sum().transpose();
  double info = 0.0;
  for (Eigen::Index x = 0; x < joint.rows(); ++x)
    for (Eigen::Index y = 0; y < joint.cols(); ++y)
      if (joint(x, y) > 0.0) info += joint(x, y) * std::log(joint(x, y) / (px(x) * py(y)));
  return info;
}

}  // namespace qpower
