#include "qpower/randstates.hpp"

#include <algorithm>
#include <cmath>

namespace qpower {

namespace {

constexpr double kRootTol = 1e-12;  // B within this of B_t is treated as B_t

double sum_probs(const RealVector& b, double nu, double mu) {
  return (1.0 / (nu + mu * b.array())).sum();
}

// nu(mu) from the normalization equation; the sum decreases monotonically from
// +inf at the positivity edge to zero.
double solve_nu(const RealVector& b, double mu) {
  const double edge = (-mu * b.array()).maxCoeff();
  double lo = edge;
  double hi = edge + static_cast<double>(b.size());
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (sum_probs(b, mid, mu) > 1.0 ? lo : hi) = mid;
  }
  double nu = hi;
  // Newton polish inside the bracket.
  for (int it = 0; it < 5; ++it) {
    const RealVector inv = 1.0 / (nu + mu * b.array());
    const double step = (inv.sum() - 1.0) / inv.squaredNorm();
    const double next = nu + step;
    if (!(next > edge)) break;
    nu = next;
  }
  return nu;
}

double energy_at(const RealVector& b, double mu) {
  const double nu = solve_nu(b, mu);
  return (b.array() / (nu + mu * b.array())).sum();
}

double sample_std(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (n - 1.0));
}

}  // namespace

EnergySpectrum::EnergySpectrum(RealVector lv) : levels(std::move(lv)) {
  if (levels.size() < 2) throw Error(Errc::OutOfRange, "spectrum needs at least two levels");
  if (!levels.allFinite()) throw Error(Errc::OutOfRange, "spectrum levels must be finite");
  std::sort(levels.data(), levels.data() + levels.size());
}

RealVector haar_probability_vector(int n, Rng& rng) {
  if (n < 1) throw Error(Errc::OutOfRange, "dimension must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  RealVector p(n);
  for (int k = 0; k < n; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    p(k) = re * re + im * im;
  }
  return p / p.sum();
}

RealVector haar_probability_vector(int n, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return haar_probability_vector(n, rng);
}

double mean_entropy_exact(int n) {
  if (n < 1) throw Error(Errc::OutOfRange, "dimension must be positive");
  double harmonic = 0.0;
  for (int k = n; k >= 1; --k) harmonic += 1.0 / k;
  return harmonic - 1.0;
}

double typical_entropy_asymptotic(int n) {
  if (n < 2) throw Error(Errc::OutOfRange, "dimension must be at least two");
  return std::log(static_cast<double>(n)) - kTypicalEntropyGap;
}

double typical_energy(const EnergySpectrum& spectrum) { return spectrum.levels.mean(); }

ConstrainedDist solve_nu_mu(const EnergySpectrum& spectrum, double threshold) {
  const RealVector& b = spectrum.levels;
  const double n = static_cast<double>(b.size());
  if (!(threshold > b.minCoeff() && threshold < b.maxCoeff()))
    throw Error(Errc::OutOfRange, "threshold must lie strictly between the smallest and largest level");

  ConstrainedDist dist;
  const double bt = typical_energy(spectrum);
  if (std::abs(threshold - bt) <= kRootTol * std::max(1.0, std::abs(bt))) {
    dist.nu = n;
    dist.mu = 0.0;
    dist.probs = RealVector::Constant(b.size(), 1.0 / n);
  } else {
    // The energy of P decreases in mu; mu < 0 exactly when threshold > B_t.
    // Levels are measured from the extreme level the distribution concentrates
    // on, so the rates c + mu d_n stay accurate as mu diverges.
    const double dir = threshold > bt ? -1.0 : 1.0;
    const double anchor = dir < 0.0 ? b.maxCoeff() : b.minCoeff();
    const RealVector d = (b.array() - anchor).matrix();
    const double target = threshold - anchor;
    double inner = 0.0;
    double outer = dir;
    while ((energy_at(d, outer) - target) * dir > 0.0) {
      inner = outer;
      outer *= 2.0;
      if (std::abs(outer) > 1e300) throw Error(Errc::NoConvergence, "multiplier bracket diverged");
    }
    for (int it = 0; it < 2000; ++it) {
      const double mid = 0.5 * (inner + outer);
      if (mid == inner || mid == outer) break;
      ((energy_at(d, mid) - target) * dir > 0.0 ? inner : outer) = mid;
    }
    dist.mu = 0.5 * (inner + outer);
    const double c = solve_nu(d, dist.mu);
    dist.nu = c - dist.mu * anchor;
    dist.probs = (1.0 / (c + dist.mu * d.array())).matrix();
  }
  const double norm_residual = std::abs(dist.probs.sum() - 1.0);
  const double energy_residual = std::abs(b.dot(dist.probs) - threshold);
  if (dist.probs.minCoeff() <= 0.0 || norm_residual > 1e-10 || energy_residual > 1e-10)
    throw Error(Errc::NoConvergence, "multiplier equations not solved to 1e-10");
  return dist;
}

double noiseless_capacity_power(const EnergySpectrum& spectrum, double threshold,
                                bool clamp_nonnegative) {
  if (!(threshold < spectrum.levels.maxCoeff()))
    throw Error(Errc::OutOfRange, "threshold must be below the largest level");
  double value;
  if (threshold <= typical_energy(spectrum)) {
    value = typical_entropy_asymptotic(spectrum.size());
  } else {
    value = shannon_entropy(solve_nu_mu(spectrum, threshold).probs) - kTypicalEntropyGap;
  }
  return clamp_nonnegative ? std::max(value, 0.0) : value;
}

MonteCarloEstimate mc_constrained_entropy(const EnergySpectrum& spectrum, double threshold,
                                          int samples, std::uint64_t seed) {
  if (samples < 100) throw Error(Errc::OutOfRange, "at least 100 samples required");
  const RealVector& b = spectrum.levels;
  const int n = spectrum.size();
  RealVector rates = RealVector::Constant(n, static_cast<double>(n));
  if (threshold > typical_energy(spectrum)) {
    const auto dist = solve_nu_mu(spectrum, threshold);
    rates = dist.probs.cwiseInverse();
  }

  Rng rng = make_rng(seed);
  std::exponential_distribution<double> unit_exp(1.0);
  std::vector<double> entropy, energy, raw_energy;
  entropy.reserve(samples);
  RealVector x(n);
  for (int s = 0; s < samples; ++s) {
    for (int k = 0; k < n; ++k) x(k) = unit_exp(rng) / rates(k);
    raw_energy.push_back(b.dot(x));
    const RealVector p = x / x.sum();
    entropy.push_back(entropy_of_spectrum(p));
    energy.push_back(b.dot(p));
  }
  auto mean_of = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    return m / static_cast<double>(v.size());
  };
  const double root = std::sqrt(static_cast<double>(samples));
  MonteCarloEstimate est;
  est.samples = samples;
  est.mean = mean_of(entropy);
  est.standard_error = sample_std(entropy) / root;
  est.energy_mean = mean_of(energy);
  est.energy_standard_error = sample_std(energy) / root;
  est.raw_energy_mean = mean_of(raw_energy);
  est.raw_energy_standard_error = sample_std(raw_energy) / root;
  return est;
}

MonteCarloEstimate haar_entropy_statistics(int n, int samples, std::uint64_t seed) {
  if (samples < 2) throw Error(Errc::OutOfRange, "at least two samples required");
  Rng rng = make_rng(seed);
  std::vector<double> entropy;
  entropy.reserve(samples);
  for (int s = 0; s < samples; ++s) entropy.push_back(entropy_of_spectrum(haar_probability_vector(n, rng)));
  MonteCarloEstimate est;
  est.samples = samples;
  for (double h : entropy) est.mean += h;
  est.mean /= samples;
  est.standard_error = sample_std(entropy) / std::sqrt(static_cast<double>(samples));
  est.energy_mean = est.raw_energy_mean = std::numeric_limits<double>::quiet_NaN();
  est.energy_standard_error = est.raw_energy_standard_error = std::numeric_limits<double>::quiet_NaN();
  return est;
}

std::vector<StdPoint> entropy_std_curve(const std::vector<int>& dims, int samples,
                                        std::uint64_t seed) {
  if (samples < 2) throw Error(Errc::OutOfRange, "standard deviation needs at least two samples");
  std::vector<StdPoint> out;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    Rng rng = make_rng(seed, k);
    std::vector<double> entropy;
    entropy.reserve(samples);
    for (int s = 0; s < samples; ++s)
      entropy.push_back(entropy_of_spectrum(haar_probability_vector(dims[k], rng)));
    out.push_back({dims[k], sample_std(entropy)});
  }
  return out;
}

EnergyMoments sample_typical_energy(const EnergySpectrum& spectrum, int samples,
                                    std::uint64_t seed) {
  if (samples < 2) throw Error(Errc::OutOfRange, "at least two samples required");
  const RealVector& b = spectrum.levels;
  const int n = spectrum.size();
  Rng rng = make_rng(seed);
  std::exponential_distribution<double> weight(static_cast<double>(n));
  std::vector<double> energy;
  energy.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    double e = 0.0;
    for (int k = 0; k < n; ++k) e += b(k) * weight(rng);
    energy.push_back(e);
  }
  EnergyMoments m;
  for (double e : energy) m.mean += e;
  m.mean /= samples;
  const double sd = sample_std(energy);
  m.variance = sd * sd;
  return m;
}

}  // namespace qpower
