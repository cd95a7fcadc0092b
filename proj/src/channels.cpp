#include "qpower/channels.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qpower {

namespace {

constexpr double kTracePreservationTol = 1e-9;

void require_unit_interval(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0))
    throw Error(Errc::OutOfRange, std::string(what) + " must lie in [0, 1]");
}

}  // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus_ops) : ops_(std::move(kraus_ops)) {
  if (ops_.empty()) throw Error(Errc::DimMismatch, "channel needs at least one Kraus operator");
  const auto rows = ops_.front().rows();
  const auto cols = ops_.front().cols();
  if (rows < 1 || cols < 1) throw Error(Errc::DimMismatch, "empty Kraus operator");
  ComplexMatrix sum = ComplexMatrix::Zero(cols, cols);
  for (const auto& k : ops_) {
    if (k.rows() != rows || k.cols() != cols)
      throw Error(Errc::DimMismatch, "Kraus operators have inconsistent shapes");
    sum += k.adjoint() * k;
  }
  const double defect = (sum - ComplexMatrix::Identity(cols, cols)).cwiseAbs().maxCoeff();
  if (!(defect <= kTracePreservationTol))
    throw Error(Errc::OutOfRange, "Kraus operators are not trace preserving");
}

ComplexMatrix KrausChannel::operator()(const ComplexMatrix& rho) const {
  if (rho.rows() != dim_in() || rho.cols() != dim_in())
    throw Error(Errc::DimMismatch, "state dimension does not match channel input");
  ComplexMatrix out = ComplexMatrix::Zero(dim_out(), dim_out());
  for (const auto& k : ops_) out.noalias() += k * rho * k.adjoint();
  return out;
}

ComplexMatrix KrausChannel::adjoint(const ComplexMatrix& observable) const {
  if (observable.rows() != dim_out() || observable.cols() != dim_out())
    throw Error(Errc::DimMismatch, "observable dimension does not match channel output");
  ComplexMatrix out = ComplexMatrix::Zero(dim_in(), dim_in());
  for (const auto& k : ops_) out.noalias() += k.adjoint() * observable * k;
  return out;
}

ComplexMatrix apply(const KrausChannel& channel, const ComplexMatrix& rho) { return channel(rho); }

KrausChannel complementary(const KrausChannel& channel) {
  const auto& ks = channel.kraus();
  const auto env = channel.env_dim();
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(channel.dim_out()));
  for (Eigen::Index j = 0; j < channel.dim_out(); ++j) {
    ComplexMatrix e(env, channel.dim_in());
    for (Eigen::Index i = 0; i < env; ++i) e.row(i) = ks[static_cast<std::size_t>(i)].row(j);
    out.push_back(std::move(e));
  }
  return KrausChannel(std::move(out));
}

KrausChannel identity_channel(int d) {
  if (d < 1) throw Error(Errc::OutOfRange, "dimension must be positive");
  return KrausChannel({ComplexMatrix::Identity(d, d)});
}

KrausChannel depolarizing(double lambda, int d) {
  if (d < 1) throw Error(Errc::OutOfRange, "dimension must be positive");
  const double dd = static_cast<double>(d) * d;
  const double upper = d == 1 ? 1.0 : 1.0 + 1.0 / (dd - 1.0);
  if (!(lambda >= 0.0 && lambda <= upper + 1e-12))
    throw Error(Errc::OutOfRange, "depolarizing parameter outside the completely positive range");
  lambda = std::min(lambda, upper);

  ComplexMatrix shift = ComplexMatrix::Zero(d, d);
  ComplexMatrix clock = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    shift((j + 1) % d, j) = 1.0;
    clock(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / d);
  }

  std::vector<ComplexMatrix> ops;
  ops.reserve(static_cast<std::size_t>(dd));
  ComplexMatrix xa = ComplexMatrix::Identity(d, d);
  for (int a = 0; a < d; ++a) {
    ComplexMatrix weyl = xa;
    for (int b = 0; b < d; ++b) {
      const double w = (a == 0 && b == 0) ? std::sqrt(std::max(0.0, 1.0 - lambda + lambda / dd))
                                          : std::sqrt(lambda) / d;
      ops.push_back(w * weyl);
      weyl = weyl * clock;
    }
    xa = shift * xa;
  }
  return KrausChannel(std::move(ops));
}

KrausChannel depolarizing_isometry_channel(double lambda) {
  require_unit_interval(lambda, "depolarizing parameter");
  const double w = std::sqrt(lambda / 3.0);
  return KrausChannel({std::sqrt(1.0 - lambda) * pauli::identity(), w * pauli::x(), w * pauli::y(),
                       w * pauli::z()});
}

KrausChannel amplitude_damping(double lambda) {
  require_unit_interval(lambda, "damping parameter");
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - lambda);
  k1(0, 1) = std::sqrt(lambda);
  return KrausChannel({k0, k1});
}

KrausChannel pauli_channel(double px, double py, double pz) {
  if (px < 0.0 || py < 0.0 || pz < 0.0 || px + py + pz > 1.0 + 1e-12)
    throw Error(Errc::OutOfRange, "Pauli flip probabilities must be a sub-distribution");
  const double p0 = std::max(0.0, 1.0 - px - py - pz);
  return KrausChannel({std::sqrt(p0) * pauli::identity(), std::sqrt(px) * pauli::x(),
                       std::sqrt(py) * pauli::y(), std::sqrt(pz) * pauli::z()});
}

KrausChannel tensor_square(const KrausChannel& channel) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(channel.kraus().size() * channel.kraus().size());
  for (const auto& a : channel.kraus())
    for (const auto& b : channel.kraus()) ops.push_back(kron(a, b));
  return KrausChannel(std::move(ops));
}

CQEnsemble::CQEnsemble(std::vector<ComplexMatrix> s, RealVector p)
    : states(std::move(s)), probs(std::move(p)) {
  if (states.empty()) throw Error(Errc::DimMismatch, "ensemble needs at least one state");
  if (static_cast<Eigen::Index>(states.size()) != probs.size())
    throw Error(Errc::DimMismatch, "ensemble states and probabilities differ in length");
  for (const auto& rho : states) {
    if (rho.rows() != states.front().rows())
      throw Error(Errc::DimMismatch, "ensemble states have different dimensions");
    require_density(rho);
  }
  probs = checked_simplex(probs);
}

ComplexMatrix CQEnsemble::average() const {
  ComplexMatrix avg = ComplexMatrix::Zero(dim(), dim());
  for (Eigen::Index x = 0; x < size(); ++x) avg += probs(x) * states[static_cast<std::size_t>(x)];
  return avg;
}

CQEnsemble pure_ensemble(const std::vector<ComplexVector>& kets, const RealVector& probs) {
  std::vector<ComplexMatrix> states;
  states.reserve(kets.size());
  for (const auto& k : kets) {
    const double norm = k.norm();
    if (!(norm > 0.0)) throw Error(Errc::NotDensity, "zero ket");
    states.push_back(projector(k / norm));
  }
  return CQEnsemble(std::move(states), probs);
}

CQEnsemble trine_ensemble() {
  const double s = std::sqrt(3.0) / 2.0;
  ComplexVector a(2), b(2), c(2);
  a << 1.0, 0.0;
  b << -0.5, s;
  c << -0.5, -s;
  return pure_ensemble({a, b, c}, RealVector::Constant(3, 1.0 / 3.0));
}

std::vector<ComplexMatrix> trine_povm() {
  std::vector<ComplexMatrix> povm;
  for (const auto& phi : trine_ensemble().states)
    povm.push_back((2.0 / 3.0) * (ComplexMatrix::Identity(2, 2) - phi));
  return povm;
}

ComplexMatrix trine_observable(const RealVector& outcome_energies) {
  if (outcome_energies.size() != 3) throw Error(Errc::DimMismatch, "trine observable needs three outcome energies");
  const auto povm = trine_povm();
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  for (int a = 0; a < 3; ++a) h += outcome_energies(a) * povm[static_cast<std::size_t>(a)];
  return h;
}

CoherentEnsemble::CoherentEnsemble(std::vector<cplx> a, RealVector p, double pb)
    : amplitudes(std::move(a)), probs(std::move(p)), splitter_prob(pb) {
  if (amplitudes.empty() || static_cast<Eigen::Index>(amplitudes.size()) != probs.size())
    throw Error(Errc::DimMismatch, "coherent ensemble amplitudes and probabilities differ in length");
  probs = checked_simplex(probs);
  require_unit_interval(splitter_prob, "splitter probability");
}

cplx coherent_overlap(cplx alpha, cplx beta) {
  return std::exp(-0.5 * std::norm(alpha) - 0.5 * std::norm(beta) + std::conj(alpha) * beta);
}

ComplexMatrix coherent_gram(const std::vector<cplx>& amplitudes, const RealVector& weights) {
  const auto n = static_cast<Eigen::Index>(amplitudes.size());
  if (n != weights.size()) throw Error(Errc::DimMismatch, "amplitudes and weights differ in length");
  const RealVector w = checked_simplex(weights);
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = w(i);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      m(i, j) = std::sqrt(w(i) * w(j)) *
                coherent_overlap(amplitudes[static_cast<std::size_t>(i)],
                                 amplitudes[static_cast<std::size_t>(j)]);
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

double mixture_entropy_gram(const std::vector<cplx>& amplitudes, const RealVector& weights) {
  return entropy_of_spectrum(hermitian_eigenvalues(coherent_gram(amplitudes, weights)));
}

BeamSplitterOutput beam_splitter_output(const CoherentEnsemble& ensemble) {
  const double pb = ensemble.splitter_prob;
  BeamSplitterOutput out;
  out.letter_energy.resize(static_cast<Eigen::Index>(ensemble.amplitudes.size()));
  for (std::size_t x = 0; x < ensemble.amplitudes.size(); ++x) {
    const cplx alpha = ensemble.amplitudes[x];
    CoherentMixture mix;
    if (pb > 0.0) mix.push_back({pb, alpha / std::numbers::sqrt2});
    if (pb < 1.0) mix.push_back({1.0 - pb, alpha});
    out.letters.push_back(std::move(mix));
    out.letter_energy(static_cast<Eigen::Index>(x)) =
        pb * std::norm(alpha) / 2.0 + (1.0 - pb) * std::norm(alpha);
  }
  return out;
}

ComplexMatrix coherent_span_coordinates(const std::vector<cplx>& amplitudes) {
  const auto n = static_cast<Eigen::Index>(amplitudes.size());
  const ComplexMatrix gram = coherent_gram(amplitudes, RealVector::Constant(n, 1.0 / n)) * double(n);
  const auto eig = eig_hermitian(gram);
  const double cutoff = 1e-14 * eig.values.cwiseAbs().maxCoeff();
  Eigen::Index kept = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (eig.values(i) > cutoff) ++kept;
  ComplexMatrix coords(kept, n);
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eig.values(i) <= cutoff) continue;
    coords.row(row++) = std::sqrt(eig.values(i)) * eig.vectors.col(i).adjoint();
  }
  return coords;
}

std::vector<ComplexMatrix> beam_splitter_letter_states(const BeamSplitterOutput& output) {
  std::vector<cplx> all;
  for (const auto& letter : output.letters)
    for (const auto& c : letter) all.push_back(c.amplitude);
  const ComplexMatrix coords = coherent_span_coordinates(all);
  std::vector<ComplexMatrix> states;
  Eigen::Index k = 0;
  for (const auto& letter : output.letters) {
    ComplexMatrix sigma = ComplexMatrix::Zero(coords.rows(), coords.rows());
    for (const auto& c : letter) {
      sigma += c.weight * coords.col(k) * coords.col(k).adjoint();
      ++k;
    }
    states.push_back(std::move(sigma));
  }
  return states;
}

ComplexVector coherent_fock_vector(cplx alpha, int cutoff) {
  if (cutoff < 1) throw Error(Errc::CutoffTooSmall, "cutoff must be positive");
  ComplexVector v(cutoff);
  v(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < cutoff; ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  const double tail = 1.0 - v.squaredNorm();
  if (tail >= 1e-12)
    throw Error(Errc::CutoffTooSmall, "Fock cutoff " + std::to_string(cutoff) +
                                          " discards probability " + std::to_string(tail));
  return v / v.norm();
}

}  // namespace qpower
