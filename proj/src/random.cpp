#include "qpower/random.hpp"

namespace qpower {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace {

ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

}  // namespace

ComplexVector random_pure_state(int dim, Rng& rng) {
  if (dim < 1) throw Error(Errc::OutOfRange, "dimension must be positive");
  ComplexVector v = ginibre(dim, 1, rng);
  return v / v.norm();
}

ComplexMatrix random_density_matrix(int dim, Rng& rng) {
  if (dim < 1) throw Error(Errc::OutOfRange, "dimension must be positive");
  const ComplexMatrix g = ginibre(dim, dim, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) / 2.0;
}

ComplexMatrix random_unitary(int dim, Rng& rng) {
  if (dim < 1) throw Error(Errc::OutOfRange, "dimension must be positive");
  const Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(dim, dim, rng));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

ComplexMatrix random_diagonal_hamiltonian(int dim, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RealVector levels(dim);
  for (int k = 0; k < dim; ++k) levels(k) = unit(rng);
  return diagonal_operator(levels);
}

}  // namespace qpower
