#include "qpower/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qpower/classical.hpp"
#include "qpower/io.hpp"
#include "qpower/random.hpp"
#include "qpower/randstates.hpp"

namespace qpower {

namespace {

using io::format_real;

std::vector<ComplexMatrix> computational_pair() {
  ComplexVector k0(2), k1(2);
  k0 << 1.0, 0.0;
  k1 << 0.0, 1.0;
  return {projector(k0), projector(k1)};
}

ComplexMatrix excited_projector() { return diagonal_operator((RealVector(2) << 0.0, 1.0).finished()); }

std::vector<double> letter_energies(const std::vector<ComplexMatrix>& states, const KrausChannel& ch,
                                    const ComplexMatrix& h) {
  std::vector<double> e;
  for (const auto& rho : states) e.push_back(expectation(h, ch(rho)));
  return e;
}

std::vector<double> cq_grid(const RandomCQInstance& inst, int points) {
  const auto e = letter_energies(inst.states, inst.channel, inst.hamiltonian);
  return linear_grid(*std::min_element(e.begin(), e.end()), *std::max_element(e.begin(), e.end()), points);
}

ComplexMatrix default_hamiltonian(const VerifyConfig& config) {
  if (config.hamiltonian) return *config.hamiltonian;
  if (config.channel->dim_out() == 2) return pauli::z();
  RealVector levels(config.channel->dim_out());
  for (Eigen::Index k = 0; k < levels.size(); ++k) levels(k) = static_cast<double>(k);
  return diagonal_operator(levels);
}

void add_segments(SuiteResult& res, const ConcavityReport& report) {
  for (const auto& v : report.violations)
    res.lines.push_back("  violation at B=" + format_real(v.threshold) + " size " + format_real(v.violation));
  std::string seg = "  concave segments:";
  for (const auto& [lo, hi] : report.concave_segments) seg += " [" + format_real(lo) + ", " + format_real(hi) + "]";
  res.lines.push_back(seg);
}

SuiteResult suite_concavity(const VerifyConfig& config) {
  SuiteResult res{"concavity", true, 0.0, {}};
  if (!config.channel) {
    for (int k = 0; k < config.instances; ++k) {
      const auto inst = random_cq_instance(config.seed, static_cast<std::uint64_t>(k));
      const auto grid = config.grid.empty() ? cq_grid(inst, 21) : config.grid;
      const auto curve = sweep_curve(cq_point_solver(inst.states, inst.channel, inst.hamiltonian), grid);
      const auto report = check_concavity(curve);
      res.metric = std::max(res.metric, report.max_violation);
      if (!report.is_concave) res.passed = false;
      res.lines.push_back("  instance " + std::to_string(k) + " lambda=" + format_real(inst.lambda) +
                          " max_violation=" + format_real(report.max_violation));
    }
    return res;
  }
  const ComplexMatrix h = default_hamiltonian(config);
  GeneralOptions opts;
  opts.restarts = config.restarts;
  opts.seed = config.seed;
  const auto grid = config.grid.empty()
                        ? linear_grid(hermitian_eigenvalues(config.channel->adjoint(h)).minCoeff(),
                                      max_feasible_energy(*config.channel, h), 21)
                        : config.grid;
  const auto curve = sweep_curve(general_point_solver(*config.channel, config.letters, h, opts), grid);
  const auto report = check_concavity(curve);
  res.metric = report.max_violation;
  res.lines.push_back("  state-optimized curve max_violation=" + format_real(report.max_violation) +
                      " violations=" + std::to_string(report.violations.size()));
  add_segments(res, report);
  res.passed = report.is_concave || config.expect_piecewise;
  if (!report.is_concave && config.expect_piecewise) res.lines.push_back("  piecewise concavity expected");
  return res;
}

SuiteResult suite_additivity(const VerifyConfig& config) {
  SuiteResult res{"additivity", true, 0.0, {}};
  constexpr double kTol = 2e-3;
  auto check = [&](const std::string& label, const std::vector<ComplexMatrix>& states,
                   const KrausChannel& ch, const ComplexMatrix& h, double b, double density) {
    const double c1 = c1_cq(states, ch, {{h, b}}).value;
    const double c2 = c2_product_bruteforce(states, ch, h, b, density);
    const double gap = std::abs(c2 - 2.0 * c1);
    res.metric = std::max(res.metric, gap);
    if (gap > kTol) res.passed = false;
    res.lines.push_back("  " + label + " B=" + format_real(b) + " c2=" + format_real(c2) +
                        " 2*c1=" + format_real(2.0 * c1));
  };
  for (double b : {0.25, 0.6, 0.75})
    check("binary noiseless", computational_pair(), identity_channel(2), excited_projector(), b, 1e-2);
  const auto inst = random_cq_instance(config.seed, 0);
  const auto e = letter_energies(inst.states, inst.channel, inst.hamiltonian);
  const double lo = *std::min_element(e.begin(), e.end());
  const double hi = *std::max_element(e.begin(), e.end());
  check("random CQ", inst.states, inst.channel, inst.hamiltonian, lo + 0.7 * (hi - lo), 2e-3);
  return res;
}

SuiteResult suite_monotone(const VerifyConfig& config) {
  SuiteResult res{"monotone", true, -std::numeric_limits<double>::infinity(), {}};
  constexpr double kSlack = 1e-9;
  auto record = [&](const std::string& label, double increase) {
    res.metric = std::max(res.metric, increase);
    if (increase > kSlack) res.passed = false;
    res.lines.push_back("  " + label + " max_increase=" + format_real(increase));
  };
  for (int k = 0; k < config.instances; ++k) {
    const auto inst = random_cq_instance(config.seed, static_cast<std::uint64_t>(k));
    const auto curve = sweep_curve(cq_point_solver(inst.states, inst.channel, inst.hamiltonian), cq_grid(inst, 21));
    record("cq instance " + std::to_string(k), max_increase(curve));
  }
  {
    const auto pair = computational_pair();
    const auto curve = sweep_curve(private_cq_point_solver(pair, amplitude_damping(0.25), pauli::z()),
                                   linear_grid(-0.5, 1.0, 21));
    record("private AD(0.25)", max_increase(curve));
  }
  {
    PowerCurve curve;
    const auto bsc = binary_symmetric(0.1);
    curve.grid = linear_grid(0.0, 0.9, 21);
    for (double b : curve.grid) curve.points.push_back(capacity_power_ba(bsc, b));
    record("classical BSC(0.1)", max_increase(curve));
  }
  {
    Rng rng = make_rng(config.seed, 1000);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    RealVector levels(8);
    for (auto& v : levels) v = unit(rng);
    const EnergySpectrum spec(levels);
    PowerCurve curve;
    curve.grid = linear_grid(spec.levels.minCoeff(), spec.levels.maxCoeff() - 1e-3, 41);
    for (double b : curve.grid) {
      CapacityResult r;
      r.value = noiseless_capacity_power(spec, b);
      r.status = SolveStatus::Converged;
      curve.points.push_back(r);
    }
    record("noiseless random-state bound", max_increase(curve));
  }
  return res;
}

SuiteResult suite_gradient(const VerifyConfig& config) {
  SuiteResult res{"gradient", true, 0.0, {}};
  const int count = std::max(config.instances, 20);
  for (int k = 0; k < count; ++k) {
    const auto inst = random_cq_instance(config.seed, static_cast<std::uint64_t>(k));
    Rng rng = make_rng(config.seed, 5000 + static_cast<std::uint64_t>(k));
    std::exponential_distribution<double> w(1.0);
    RealVector p(3);
    for (auto& v : p) v = 0.05 + w(rng);
    p /= p.sum();
    std::vector<ComplexMatrix> outputs;
    for (const auto& rho : inst.states) outputs.push_back(inst.channel(rho));
    const double err = gradient_relative_error(outputs, p);
    res.metric = std::max(res.metric, err);
    if (!(err < 1e-5)) res.passed = false;
  }
  res.lines.push_back("  " + std::to_string(count) + " instances, max relative error " + format_real(res.metric));
  return res;
}

SuiteResult suite_holevo_bound(const VerifyConfig& config) {
  SuiteResult res{"holevo-bound", true, -std::numeric_limits<double>::infinity(), {}};
  constexpr double kTol = 1e-9;
  for (int k = 0; k < std::max(config.instances, 20); ++k) {
    const auto inst = random_cq_instance(config.seed, static_cast<std::uint64_t>(k));
    Rng rng = make_rng(config.seed, 9000 + static_cast<std::uint64_t>(k));
    std::exponential_distribution<double> w(1.0);
    RealVector p(3);
    for (auto& v : p) v = w(rng);
    p /= p.sum();
    const ComplexMatrix u = random_unitary(2, rng);
    const std::vector<ComplexMatrix> povm{projector(u.col(0)), projector(u.col(1))};
    const CQEnsemble ens(inst.states, p);
    const double gap = accessible_information(ens, povm, inst.channel) - holevo(ens, inst.channel);
    res.metric = std::max(res.metric, gap);
    if (gap > kTol) res.passed = false;
  }
  const auto trine = trine_ensemble();
  const double acc = accessible_information(trine, trine_povm(), identity_channel(2));
  const double chi = holevo(trine, identity_channel(2));
  res.metric = std::max(res.metric, acc - chi);
  if (acc - chi > kTol) res.passed = false;
  res.lines.push_back("  trine: accessible=" + format_real(nats_to_bits(acc)) + " bits, chi=" +
                      format_real(nats_to_bits(chi)) + " bits");
  res.lines.push_back("  max(accessible - chi)=" + format_real(res.metric));
  return res;
}

SuiteResult suite_private_concavity(const VerifyConfig& config) {
  (void)config;
  SuiteResult res{"private-concavity", true, 0.0, {}};
  const auto pair = computational_pair();
  for (double lambda : {0.1, 0.25, 0.4}) {
    const auto ch = amplitude_damping(lambda);
    const auto curve = sweep_curve(private_cq_point_solver(pair, ch, pauli::z()),
                                   linear_grid(2.0 * lambda - 1.0, 1.0, 21));
    const auto report = check_concavity(curve);
    res.metric = std::max(res.metric, report.max_violation);
    if (!report.is_concave) res.passed = false;
    res.lines.push_back("  AD(" + format_real(lambda) + ") max_violation=" + format_real(report.max_violation));
  }
  return res;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"concavity", "additivity", "monotone",
                                              "gradient", "holevo-bound", "private-concavity"};
  return names;
}

SuiteResult run_suite(const std::string& name, const VerifyConfig& config) {
  if (name == "concavity") return suite_concavity(config);
  if (name == "additivity") return suite_additivity(config);
  if (name == "monotone") return suite_monotone(config);
  if (name == "gradient") return suite_gradient(config);
  if (name == "holevo-bound") return suite_holevo_bound(config);
  if (name == "private-concavity") return suite_private_concavity(config);
  throw Error(Errc::ConfigError, "unknown suite '" + name + "'");
}

RandomCQInstance random_cq_instance(std::uint64_t seed, std::uint64_t index) {
  static constexpr double kLambdas[] = {0.0, 0.2, 0.5};
  Rng rng = make_rng(seed, index);
  std::vector<ComplexMatrix> states;
  for (int k = 0; k < 3; ++k) states.push_back(projector(random_pure_state(2, rng)));
  const ComplexMatrix h = random_diagonal_hamiltonian(2, rng);
  const double lambda = kLambdas[index % 3];
  return {std::move(states), depolarizing(lambda, 2), h, lambda};
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 1) throw Error(Errc::OutOfRange, "grid needs at least one point");
  if (points == 1) return {lo};
  if (!(hi > lo)) throw Error(Errc::OutOfRange, "grid needs lo < hi");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k)
    grid[static_cast<std::size_t>(k)] = k == points - 1 ? hi : lo + (hi - lo) * k / (points - 1);
  return grid;
}

double gradient_relative_error(const std::vector<ComplexMatrix>& outputs, const RealVector& probs,
                               double step) {
  const RealVector g = holevo_gradient(outputs, probs);
  const auto m = probs.size();
  std::vector<double> fd, an;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) {
      RealVector d = RealVector::Zero(m);
      d(i) = 1.0;
      d(j) = -1.0;
      const double up = holevo_of_outputs(outputs, probs + step * d);
      const double down = holevo_of_outputs(outputs, probs - step * d);
      fd.push_back((up - down) / (2.0 * step));
      an.push_back(g.dot(d));
    }
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < fd.size(); ++k) {
    num += (fd[k] - an[k]) * (fd[k] - an[k]);
    den += an[k] * an[k];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-12);
}

}  // namespace qpower
