#pragma once

// Named property suites shared by the `verify` subcommand and the tests.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpower/capacity.hpp"

namespace qpower {

struct VerifyConfig {
  /// Channel under test. Empty selects the built-in random CQ family.
  std::optional<KrausChannel> channel;
  std::optional<ComplexMatrix> hamiltonian;
  std::uint64_t seed = 7;
  int restarts = 16;
  int letters = 2;
  int instances = 10;
  std::vector<double> grid;  // empty: 21 points across the feasible range
  bool expect_piecewise = false;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  double metric = 0.0;  // worst observed deviation
  std::vector<std::string> lines;
};

const std::vector<std::string>& suite_names();

/// Throws ConfigError for unknown names.
SuiteResult run_suite(const std::string& name, const VerifyConfig& config);

/// Three random pure qubit letters, random diagonal Hamiltonian and a depolarizing
/// channel with lambda drawn from {0, 0.2, 0.5}.
struct RandomCQInstance {
  std::vector<ComplexMatrix> states;
  KrausChannel channel;
  ComplexMatrix hamiltonian;
  double lambda;
};

RandomCQInstance random_cq_instance(std::uint64_t seed, std::uint64_t index);

/// Evenly spaced thresholds from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, int points);

/// Central-difference check of the analytic Holevo gradient along the simplex
/// edges e_i - e_j; returns ||fd - analytic|| / ||analytic||.
double gradient_relative_error(const std::vector<ComplexMatrix>& outputs, const RealVector& probs,
                               double step = 1e-5);

}  // namespace qpower
