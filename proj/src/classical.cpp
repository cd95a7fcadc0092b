#include "qpower/classical.hpp"

#include <cmath>
#include <numbers>

namespace qpower {

namespace {

constexpr double kEnergyTol = 1e-9;
constexpr double kGapTol = 1e-12;
constexpr int kMaxBaIterations = 200000;

void require_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw Error(Errc::OutOfRange, std::string(what) + " must lie in [0, 1]");
}

// D(Q(.|x) || q) for every input.
RealVector divergences(const RealMatrix& q_yx, const RealVector& q_y) {
  RealVector d = RealVector::Zero(q_yx.rows());
  for (Eigen::Index x = 0; x < q_yx.rows(); ++x)
    for (Eigen::Index y = 0; y < q_yx.cols(); ++y) {
      const double w = q_yx(x, y);
      if (w > 0.0) d(x) += w * std::log(w / q_y(y));
    }
  return d;
}

struct TiltedSolution {
  RealVector probs;
  double gap;
  int iterations;
};

// Fixed point of p <- p exp(D_x + s e_x) / Z; at the fixed point p maximizes
// I(p) + s E(p).
TiltedSolution tilted_ba(const RealMatrix& q, const RealVector& e, double s) {
  const auto n = q.rows();
  RealVector p = RealVector::Constant(n, 1.0 / static_cast<double>(n));
  TiltedSolution sol{p, std::numeric_limits<double>::infinity(), 0};
  for (int it = 1; it <= kMaxBaIterations; ++it) {
    const RealVector score = divergences(q, q.transpose() * p) + s * e;
    sol.gap = score.maxCoeff() - p.dot(score);
    sol.iterations = it;
    if (sol.gap <= kGapTol) break;
    RealVector w = (score.array() - score.maxCoeff()).exp().matrix().cwiseProduct(p);
    p = w / w.sum();
  }
  sol.probs = p;
  return sol;
}

CapacityResult package(const DiscreteChannel& channel, RealVector probs, double threshold,
                       bool constrained, double gap, int iterations) {
  CapacityResult res;
  res.value = mutual_information(probs, channel);
  res.achieved_energy = RealVector::Constant(1, channel.input_energies().dot(probs));
  res.active = {constrained && res.achieved_energy(0) - threshold <= 1e-7 * (1.0 + std::abs(threshold))};
  res.kkt_residual = gap;
  res.iterations = iterations;
  res.status = gap <= 1e-9 ? SolveStatus::Converged : SolveStatus::MaxIter;
  res.argmax_probs = std::move(probs);
  return res;
}

}  // namespace

DiscreteChannel::DiscreteChannel(RealMatrix q, RealVector b)
    : transition(std::move(q)), output_energies(std::move(b)) {
  if (transition.size() == 0) throw Error(Errc::DimMismatch, "empty transition matrix");
  if (output_energies.size() != transition.cols())
    throw Error(Errc::DimMismatch, "one energy per output symbol required");
  if (!transition.allFinite() || !output_energies.allFinite())
    throw Error(Errc::OutOfRange, "non-finite channel entries");
  if (transition.minCoeff() < 0.0) throw Error(Errc::NotSimplex, "negative transition probability");
  for (Eigen::Index x = 0; x < transition.rows(); ++x)
    if (std::abs(transition.row(x).sum() - 1.0) > 1e-12)
      throw Error(Errc::NotSimplex, "transition row does not sum to one");
}

DiscreteChannel binary_noiseless() {
  return {RealMatrix::Identity(2, 2), (RealVector(2) << 0.0, 1.0).finished()};
}

DiscreteChannel binary_symmetric(double p) {
  require_unit(p, "crossover probability");
  RealMatrix q(2, 2);
  q << 1.0 - p, p, p, 1.0 - p;
  return {q, (RealVector(2) << 0.0, 1.0).finished()};
}

DiscreteChannel binary_erasure(double pe) {
  if (!(pe >= 0.0 && pe < 1.0)) throw Error(Errc::OutOfRange, "erasure probability must lie in [0, 1)");
  RealMatrix q(2, 3);
  q << 1.0 - pe, 0.0, pe, 0.0, 1.0 - pe, pe;
  return {q, (RealVector(3) << 0.0, 1.0 / (1.0 - pe), 0.0).finished()};
}

double mutual_information(const RealVector& probs, const DiscreteChannel& channel) {
  if (probs.size() != channel.inputs()) throw Error(Errc::DimMismatch, "one probability per input required");
  const RealVector p = checked_simplex(probs);
  const RealVector d = divergences(channel.transition, channel.transition.transpose() * p);
  double mi = 0.0;
  for (Eigen::Index x = 0; x < p.size(); ++x)
    if (p(x) > 0.0) mi += p(x) * d(x);
  return mi;
}

CapacityResult blahut_arimoto(const DiscreteChannel& channel) {
  const auto sol = tilted_ba(channel.transition, RealVector::Zero(channel.inputs()), 0.0);
  return package(channel, sol.probs, 0.0, false, sol.gap, sol.iterations);
}

CapacityResult capacity_power_ba(const DiscreteChannel& channel, double threshold) {
  const RealVector e = channel.input_energies();
  const double reach = e.maxCoeff();
  if (threshold > reach + kEnergyTol)
    throw Error(Errc::Infeasible, "threshold exceeds the largest expected output energy");

  const auto free = tilted_ba(channel.transition, e, 0.0);
  if (e.dot(free.probs) >= threshold - 1e-12)
    return package(channel, free.probs, threshold, false, free.gap, free.iterations);

  if (threshold >= reach - 1e-12) {
    // Only the top-energy inputs are admissible.
    std::vector<Eigen::Index> keep;
    for (Eigen::Index x = 0; x < e.size(); ++x)
      if (e(x) >= reach - 1e-12) keep.push_back(x);
    RealMatrix sub(static_cast<Eigen::Index>(keep.size()), channel.outputs());
    for (std::size_t k = 0; k < keep.size(); ++k) sub.row(static_cast<Eigen::Index>(k)) = channel.transition.row(keep[k]);
    const auto sol = tilted_ba(sub, RealVector::Zero(sub.rows()), 0.0);
    RealVector p = RealVector::Zero(e.size());
    for (std::size_t k = 0; k < keep.size(); ++k) p(keep[k]) = sol.probs(static_cast<Eigen::Index>(k));
    return package(channel, p, threshold, true, sol.gap, sol.iterations);
  }

  // Received energy of the tilted optimum grows with the multiplier s.
  double s_lo = 0.0;
  double s_hi = 1.0;
  TiltedSolution lo = free;
  TiltedSolution hi = tilted_ba(channel.transition, e, s_hi);
  while (e.dot(hi.probs) < threshold) {
    s_lo = s_hi;
    lo = std::move(hi);
    s_hi *= 2.0;
    if (s_hi > 1e12) throw Error(Errc::NoConvergence, "energy multiplier bracket diverged");
    hi = tilted_ba(channel.transition, e, s_hi);
  }
  int total = lo.iterations + hi.iterations;
  while (e.dot(hi.probs) - e.dot(lo.probs) > kEnergyTol && s_hi - s_lo > 1e-14 * s_hi) {
    const double s = 0.5 * (s_lo + s_hi);
    auto mid = tilted_ba(channel.transition, e, s);
    total += mid.iterations;
    if (e.dot(mid.probs) >= threshold) {
      s_hi = s;
      hi = std::move(mid);
    } else {
      s_lo = s;
      lo = std::move(mid);
    }
  }
  // Interpolate the bracketing optima so the constraint holds with equality.
  const double e_lo = e.dot(lo.probs);
  const double e_hi = e.dot(hi.probs);
  const double t = e_hi > e_lo ? std::clamp((threshold - e_lo) / (e_hi - e_lo), 0.0, 1.0) : 1.0;
  RealVector p = (1.0 - t) * lo.probs + t * hi.probs;
  return package(channel, p, threshold, true, std::max(lo.gap, hi.gap), total);
}

double binary_noiseless_cb(double threshold) {
  require_unit(threshold, "energy threshold");
  return threshold <= 0.5 ? std::numbers::ln2 : binary_entropy(threshold);
}

double bsc_cb(double p, double threshold) {
  require_unit(p, "crossover probability");
  require_unit(threshold, "energy threshold");
  if (threshold <= 0.5) return std::numbers::ln2 - binary_entropy(p);
  if (p > 1.0 - threshold + 1e-12) throw Error(Errc::OutsideValidity, "closed form requires p <= 1 - B");
  return binary_entropy(threshold) - binary_entropy(p);
}

double bec_cb(double pe, double threshold) {
  require_unit(pe, "erasure probability");
  require_unit(threshold, "energy threshold");
  return (1.0 - pe) * (threshold <= 0.5 ? std::numbers::ln2 : binary_entropy(threshold));
}

}  // namespace qpower
