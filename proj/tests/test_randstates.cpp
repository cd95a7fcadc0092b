#include "support.hpp"

#include "qpower/capacity.hpp"
#include "qpower/randstates.hpp"
#include "qpower/verify.hpp"

using namespace qpower;
using namespace qpower::testing;
using Catch::Approx;

namespace {

double harmonic_minus_one(int n) {
  double t = 0.0;
  for (int k = n; k >= 1; --k) t += 1.0 / k;
  return t - 1.0;
}

EnergySpectrum random_spectrum(int n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RealVector b(n);
  for (int k = 0; k < n; ++k) b(k) = u(rng);
  std::sort(b.data(), b.data() + n);
  return EnergySpectrum(b);
}

EnergySpectrum two_level() { return EnergySpectrum(vec({0.0, 1.0})); }

}  // namespace

TEST_CASE("Haar probability vectors", "[randstates]") {
  CHECK(haar_probability_vector(1, 5)(0) == 1.0);
  REQUIRE_ERRC(haar_probability_vector(0, 5), Errc::OutOfRange);
  CHECK((haar_probability_vector(6, 42) - haar_probability_vector(6, 42)).norm() == 0.0);
  CHECK((haar_probability_vector(6, 42) - haar_probability_vector(6, 43)).norm() > 0.0);

  auto rng = make_rng(8);
  std::vector<double> first;
  for (int s = 0; s < 10000; ++s) {
    const RealVector p = haar_probability_vector(8, rng);
    CHECK(std::abs(p.sum() - 1.0) <= 1e-12);
    CHECK(p.minCoeff() >= 0.0);
    first.push_back(p(0));
  }
  double mean = 0.0, var = 0.0;
  for (double x : first) mean += x;
  mean /= first.size();
  for (double x : first) var += (x - mean) * (x - mean);
  var /= first.size() - 1;
  CHECK(std::abs(mean - 1.0 / 8) <= 3.0 * std::sqrt(var / first.size()));
  // Beta(1, N-1) marginal: variance (N-1) / (N^2 (N+1)).
  CHECK(var == Approx(7.0 / (64.0 * 9.0)).epsilon(0.05));
}

TEST_CASE("exact and asymptotic mean entropy", "[randstates]") {
  CHECK(mean_entropy_exact(1) == 0.0);
  CHECK(mean_entropy_exact(2) == Approx(0.5).epsilon(1e-15));
  CHECK(mean_entropy_exact(10) == Approx(1.928968).margin(5e-7));
  for (int n : {1, 3, 17, 250}) CHECK(mean_entropy_exact(n) == Approx(harmonic_minus_one(n)).epsilon(1e-14));

  CHECK(typical_entropy_asymptotic(2) == Approx(0.270363).margin(5e-7));
  CHECK(std::abs(typical_entropy_asymptotic(100) - mean_entropy_exact(100)) < 0.006);
  double previous_gap = 1.0;
  for (int n : {2, 4, 16, 64, 256, 1024}) {
    const double gap = std::abs(typical_entropy_asymptotic(n) - mean_entropy_exact(n));
    CHECK(gap < previous_gap);
    previous_gap = gap;
    CHECK(typical_entropy_asymptotic(n + 1) > typical_entropy_asymptotic(n));
  }
  CHECK(kTypicalEntropyGap == Approx(1.0 - 0.5772156649).margin(5e-7));
  REQUIRE_ERRC(typical_entropy_asymptotic(1), Errc::OutOfRange);
}

TEST_CASE("typical energy", "[randstates]") {
  CHECK(typical_energy(two_level()) == 0.5);
  CHECK(typical_energy(EnergySpectrum(vec({0.3, 0.3, 0.3}))) == Approx(0.3));
  CHECK(typical_energy(EnergySpectrum(vec({0.0, 1.0, 2.0}))) == 1.0);
  REQUIRE_ERRC(EnergySpectrum(vec({1.0})), Errc::OutOfRange);
  REQUIRE_ERRC(EnergySpectrum(vec({0.0, std::nan("")})), Errc::OutOfRange);
}

TEST_CASE("multiplier equations on two and three levels", "[randstates]") {
  const auto d = solve_nu_mu(two_level(), 0.75);
  CHECK(d.nu == Approx(4.0).margin(1e-9));
  CHECK(d.mu == Approx(-8.0 / 3.0).margin(1e-9));
  CHECK(d.probs(0) == Approx(0.25).margin(1e-12));
  CHECK(d.probs(1) == Approx(0.75).margin(1e-12));

  const auto flat = solve_nu_mu(two_level(), 0.5);
  CHECK(flat.mu == Approx(0.0).margin(1e-12));
  CHECK(flat.nu == Approx(2.0).margin(1e-12));

  const auto sym = solve_nu_mu(EnergySpectrum(vec({0.0, 1.0, 2.0})), 1.0);
  CHECK(sym.mu == Approx(0.0).margin(1e-12));
  CHECK(sym.nu == Approx(3.0).margin(1e-12));

  // Two-level closed form: P = (1 - B/b1, B/b1).
  for (double b1 : {0.5, 1.0, 3.0}) {
    for (double f : {0.1, 0.4, 0.6, 0.95}) {
      const double t = f * b1;
      const auto r = solve_nu_mu(EnergySpectrum(vec({0.0, b1})), t);
      const double nu = 1.0 / (1.0 - f);
      CHECK(r.nu == Approx(nu).epsilon(1e-9));
      CHECK(r.mu == Approx((1.0 / f - nu) / b1).margin(1e-8));
    }
  }

  REQUIRE_ERRC(solve_nu_mu(two_level(), 0.0), Errc::OutOfRange);
  REQUIRE_ERRC(solve_nu_mu(two_level(), 1.0), Errc::OutOfRange);
  REQUIRE_ERRC(solve_nu_mu(two_level(), 1.5), Errc::OutOfRange);
}

TEST_CASE("multiplier residuals on random spectra", "[randstates][property]") {
  auto rng = make_rng(56);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(u(rng) * 63);
    const auto spec = random_spectrum(n, rng);
    const double lo = spec.levels.minCoeff();
    const double hi = spec.levels.maxCoeff();
    const double t = lo + (0.01 + 0.98 * u(rng)) * (hi - lo);
    const auto d = solve_nu_mu(spec, t);
    double norm = 0.0, energy = 0.0;
    for (int k = 0; k < n; ++k) {
      const double rate = d.nu + d.mu * spec.levels(k);
      REQUIRE(rate > 0.0);
      norm += 1.0 / rate;
      energy += spec.levels(k) / rate;
    }
    CHECK(std::abs(norm - 1.0) <= 1e-10);
    CHECK(std::abs(energy - t) <= 1e-10);
  }
  // Repeated levels are allowed.
  const auto d = solve_nu_mu(EnergySpectrum(vec({0.0, 0.0, 1.0, 1.0})), 0.8);
  CHECK(d.probs(0) == Approx(d.probs(1)));
  CHECK(d.probs.sum() == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("noiseless capacity-power expression", "[randstates]") {
  const double flat = std::log(2.0) - kTypicalEntropyGap;
  CHECK(noiseless_capacity_power(two_level(), 0.3) == Approx(flat).margin(1e-12));
  CHECK(noiseless_capacity_power(two_level(), 0.3) == Approx(0.270363).margin(5e-7));
  CHECK(noiseless_capacity_power(two_level(), 0.75) == Approx(plogp_sum({0.25, 0.75}) - kTypicalEntropyGap).margin(1e-10));
  CHECK(noiseless_capacity_power(two_level(), 0.75) == Approx(0.139551).margin(5e-7));
  CHECK(noiseless_capacity_power(two_level(), 1.0 - 1e-9) == Approx(-kTypicalEntropyGap).margin(1e-6));
  CHECK(noiseless_capacity_power(two_level(), 1.0 - 1e-9, true) == 0.0);
  CHECK(noiseless_capacity_power(two_level(), 0.75, true) == noiseless_capacity_power(two_level(), 0.75));
  REQUIRE_ERRC(noiseless_capacity_power(two_level(), 1.0), Errc::OutOfRange);
  REQUIRE_ERRC(noiseless_capacity_power(two_level(), 1.5), Errc::OutOfRange);

  for (int n : {2, 5, 40}) CHECK(noiseless_capacity_power(EnergySpectrum(RealVector::LinSpaced(n, 0, 1)), 0.1) ==
                                 Approx(std::log(double(n)) - kTypicalEntropyGap).margin(1e-12));
}

TEST_CASE("noiseless curve is flat, then non-increasing and concave", "[randstates][property]") {
  auto rng = make_rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = random_spectrum(2 + trial * 3, rng);
    const double bt = typical_energy(spec);
    const double top = spec.levels.maxCoeff();
    CHECK(std::abs(noiseless_capacity_power(spec, bt + 1e-12) - noiseless_capacity_power(spec, bt)) <= 1e-9);

    const auto below = linear_grid(spec.levels.minCoeff(), bt, 11);
    for (double t : below)
      CHECK(noiseless_capacity_power(spec, t) == Approx(noiseless_capacity_power(spec, bt)).margin(1e-9));

    const auto above = linear_grid(bt, top - 1e-3 * (top - bt), 31);
    std::vector<double> values;
    for (double t : above) values.push_back(noiseless_capacity_power(spec, t));
    for (std::size_t i = 1; i < values.size(); ++i) CHECK(values[i] <= values[i - 1] + 1e-9);
    CHECK(check_concavity(above, values).max_violation <= 1e-6);
  }
}

TEST_CASE("Haar mean entropy matches the harmonic formula", "[randstates][property]") {
  for (int n : {2, 8, 64}) {
    const auto est = haar_entropy_statistics(n, 10000, 100 + n);
    CHECK(est.samples == 10000);
    CHECK(std::abs(est.mean - harmonic_minus_one(n)) <= 3.0 * est.standard_error);
  }
  REQUIRE_ERRC(haar_entropy_statistics(4, 1, 1), Errc::OutOfRange);
}

TEST_CASE("constrained Monte Carlo", "[randstates][property]") {
  const EnergySpectrum spec(RealVector::LinSpaced(64, 0.0, 1.0));
  const auto at_bt = mc_constrained_entropy(spec, typical_energy(spec), 10000, 11);
  CHECK(std::abs(at_bt.mean - harmonic_minus_one(64)) <= 3.0 * at_bt.standard_error);

  const double t = 0.6 * spec.levels.maxCoeff();
  const auto est = mc_constrained_entropy(spec, t, 10000, 12);
  CHECK(std::abs(est.raw_energy_mean - t) <= 3.0 * est.raw_energy_standard_error);
  CHECK(est.energy_mean == Approx(t).margin(0.02));
  CHECK(est.mean < at_bt.mean);

  const auto small = mc_constrained_entropy(spec, t, 400, 12);
  const auto large = mc_constrained_entropy(spec, t, 6400, 12);
  CHECK(large.standard_error / small.standard_error == Approx(0.25).epsilon(0.15));

  const auto again = mc_constrained_entropy(spec, t, 400, 12);
  CHECK(again.mean == small.mean);
  REQUIRE_ERRC(mc_constrained_entropy(spec, t, 50, 1), Errc::OutOfRange);
  REQUIRE_ERRC(mc_constrained_entropy(spec, 1.0, 1000, 1), Errc::OutOfRange);
}

TEST_CASE("entropy spread shrinks with dimension", "[randstates][property]") {
  const auto curve = entropy_std_curve({2, 8, 64}, 4000, 21);
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].n == 2);
  CHECK(curve[0].entropy_std > 0.0);
  CHECK(curve[2].entropy_std < curve[1].entropy_std);
  CHECK(curve[1].entropy_std < curve[0].entropy_std);
  REQUIRE_ERRC(entropy_std_curve({4}, 1, 21), Errc::OutOfRange);
}

TEST_CASE("typical energy fluctuations", "[randstates][property]") {
  auto rng = make_rng(64);
  const auto spec = random_spectrum(64, rng);
  const auto m = sample_typical_energy(spec, 20000, 5);
  const double predicted = spec.levels.squaredNorm() / (64.0 * 64.0);
  CHECK(m.variance <= 1.5 * predicted);
  CHECK(m.variance >= predicted / 1.5);
  CHECK(std::abs(m.mean - typical_energy(spec)) <= 3.0 * std::sqrt(predicted / 20000));
}
