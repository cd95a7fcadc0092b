#include "support.hpp"

#include "qpower/random.hpp"

using namespace qpower;
using namespace qpower::testing;
using Catch::Approx;

TEST_CASE("eig_hermitian on small operators", "[qcore]") {
  SECTION("identity") {
    const auto e = eig_hermitian(pauli::identity());
    CHECK(e.values(0) == Approx(1.0));
    CHECK(e.values(1) == Approx(1.0));
  }
  SECTION("already diagonal") {
    const auto e = eig_hermitian(diag({0.0, 1.0}));
    CHECK(std::abs(e.values(0)) < 1e-15);
    CHECK(e.values(1) == Approx(1.0));
    CHECK(std::abs(e.vectors(0, 0)) == Approx(1.0));
    CHECK(std::abs(e.vectors(1, 1)) == Approx(1.0));
  }
  SECTION("flip matrix") {
    const auto e = eig_hermitian(pauli::x());
    CHECK(e.values(0) == Approx(-1.0));
    CHECK(e.values(1) == Approx(1.0));
  }
  SECTION("non-Hermitian input") {
    ComplexMatrix m = pauli::x();
    m(0, 1) = 2.0;
    REQUIRE_ERRC(eig_hermitian(m), Errc::NonHermitian);
  }
}

TEST_CASE("eigendecomposition reconstructs random Hermitian operators", "[qcore][property]") {
  auto rng = make_rng(101);
  for (int dim : {1, 2, 3, 5, 8}) {
    for (int trial = 0; trial < 10; ++trial) {
      const ComplexMatrix a = random_unitary(dim, rng) * random_density_matrix(dim, rng);
      const ComplexMatrix h = a + a.adjoint();
      const auto e = eig_hermitian(h);
      const ComplexMatrix back = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
      CHECK(max_abs(back - h) <= 1e-9);
      for (Eigen::Index k = 1; k < e.values.size(); ++k) CHECK(e.values(k - 1) <= e.values(k));
    }
  }
}

TEST_CASE("von Neumann entropy examples", "[qcore]") {
  CHECK(von_neumann_entropy(projector(bloch_ket(1.1, 0.4))) == Approx(0.0).margin(1e-12));
  CHECK(von_neumann_entropy(ComplexMatrix(pauli::identity() / 2.0)) == Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(nats_to_bits(von_neumann_entropy(ComplexMatrix(pauli::identity() / 2.0))) == Approx(1.0).epsilon(1e-14));
  CHECK(von_neumann_entropy(diag({0.75, 0.25})) == Approx(plogp_sum({0.75, 0.25})).epsilon(1e-14));
  CHECK(von_neumann_entropy(diag({0.75, 0.25})) == Approx(0.562335).margin(5e-7));

  REQUIRE_ERRC(von_neumann_entropy(diag({0.5, 0.6})), Errc::NotDensity);
  REQUIRE_ERRC(von_neumann_entropy(diag({1.2, -0.2})), Errc::NotDensity);
  // Drift within the PSD tolerance is clamped rather than rejected.
  CHECK(von_neumann_entropy(diag({1.0 + 5e-11, -5e-11})) == Approx(0.0).margin(1e-9));
}

TEST_CASE("Shannon and binary entropy", "[qcore]") {
  CHECK(shannon_entropy(vec({0.5, 0.5})) == Approx(std::log(2.0)));
  CHECK(shannon_entropy(vec({1.0, 0.0})) == 0.0);
  CHECK(shannon_entropy(vec({0.75, 0.25})) == Approx(plogp_sum({0.75, 0.25})));
  CHECK(shannon_entropy(vec({0.5 + 1e-13, 0.5, -1e-13})) == Approx(std::log(2.0)));

  REQUIRE_ERRC(shannon_entropy(vec({0.7, 0.7})), Errc::NotSimplex);
  REQUIRE_ERRC(shannon_entropy(vec({1.1, -0.1})), Errc::NotSimplex);
  REQUIRE_ERRC(shannon_entropy(RealVector()), Errc::NotSimplex);

  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == Approx(std::log(2.0)));
  CHECK(binary_entropy(0.75) == Approx(0.562335).margin(5e-7));
  CHECK(nats_to_bits(binary_entropy(0.75)) == Approx(0.811278).margin(5e-7));
  for (double p = 0.0; p <= 1.0; p += 0.05) {
    CHECK(binary_entropy(p) == Approx(binary_entropy(1.0 - p)).margin(1e-15));
    CHECK(binary_entropy(p) <= std::log(2.0) + 1e-15);
  }
  REQUIRE_ERRC(binary_entropy(-0.01), Errc::OutOfRange);
  REQUIRE_ERRC(binary_entropy(1.01), Errc::OutOfRange);
  REQUIRE_ERRC(binary_entropy(std::nan("")), Errc::OutOfRange);
}

TEST_CASE("expectation values", "[qcore]") {
  CHECK(expectation(pauli::z(), projector(ket({1.0, 0.0}))) == Approx(1.0));
  CHECK(expectation(pauli::z(), ComplexMatrix(pauli::identity() / 2.0)) == Approx(0.0).margin(1e-15));
  CHECK(expectation(diag({0.0, 1.0}), diag({0.25, 0.75})) == Approx(0.75));
  REQUIRE_ERRC(expectation(pauli::z(), diag({0.2, 0.3, 0.5})), Errc::DimMismatch);
}

TEST_CASE("kron and partial trace", "[qcore]") {
  CHECK(max_abs(kron(pauli::identity(), pauli::identity()) - ComplexMatrix::Identity(4, 4)) == 0.0);
  CHECK(max_abs(kron(pauli::z(), pauli::identity()) - diag({1, 1, -1, -1})) == 0.0);
  CHECK(max_abs(kron(diag({0, 1}), diag({0, 1})) - diag({0, 0, 0, 1})) == 0.0);

  const ComplexMatrix zero = projector(ket({1.0, 0.0}));
  const ComplexMatrix mixed = pauli::identity() / 2.0;
  CHECK(max_abs(partial_trace(kron(zero, mixed), 2, 2, Subsystem::A) - zero) < 1e-15);
  CHECK(max_abs(partial_trace(ComplexMatrix(ComplexMatrix::Identity(4, 4) / 4.0), 2, 2, Subsystem::B) - mixed) <
        1e-15);

  const double r = 1.0 / std::sqrt(2.0);
  const ComplexMatrix bell = projector(ket({r, 0.0, 0.0, r}));
  CHECK(max_abs(partial_trace(bell, 2, 2, Subsystem::A) - mixed) < 1e-15);
  CHECK(max_abs(partial_trace(bell, 2, 2, Subsystem::B) - mixed) < 1e-15);

  REQUIRE_ERRC(partial_trace(bell, 3, 2, Subsystem::A), Errc::DimMismatch);
}

TEST_CASE("kron acts factor-wise", "[qcore][property]") {
  auto rng = make_rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix a = random_unitary(2, rng);
    const ComplexMatrix b = random_unitary(3, rng);
    const ComplexVector x = random_pure_state(2, rng);
    const ComplexVector y = random_pure_state(3, rng);
    const ComplexVector xy = kron(ComplexMatrix(x), ComplexMatrix(y));
    const ComplexVector lhs = kron(a, b) * xy;
    const ComplexVector rhs = kron(ComplexMatrix(a * x), ComplexMatrix(b * y));
    CHECK((lhs - rhs).norm() < 1e-12);
  }
}

TEST_CASE("entropy properties on random states", "[qcore][property]") {
  auto rng = make_rng(2024);
  for (int dim : {2, 3, 4, 6}) {
    for (int trial = 0; trial < 8; ++trial) {
      const ComplexMatrix rho = random_density_matrix(dim, rng);
      const ComplexMatrix u = random_unitary(dim, rng);
      REQUIRE(is_density(rho));
      const double s = von_neumann_entropy(rho);
      CHECK(s >= 0.0);
      CHECK(s <= std::log(double(dim)) + 1e-12);

      const ComplexMatrix rotated = u * rho * u.adjoint();
      CHECK(std::abs(von_neumann_entropy(rotated) - s) <= 1e-9);

      const ComplexMatrix sigma = random_density_matrix(2, rng);
      CHECK(std::abs(von_neumann_entropy(kron(rho, sigma)) - s - von_neumann_entropy(sigma)) <= 1e-9);

      const RealVector eigs = hermitian_eigenvalues(rho);
      CHECK(std::abs(shannon_entropy(RealVector(eigs.cwiseMax(0.0) / eigs.cwiseMax(0.0).sum())) - s) <= 1e-9);

      const ComplexMatrix product = kron(rho, sigma);
      CHECK(max_abs(partial_trace(product, dim, 2, Subsystem::A) - rho) <= 1e-12);
      CHECK(max_abs(partial_trace(product, dim, 2, Subsystem::B) - sigma) <= 1e-12);
    }
  }
}

TEST_CASE("expectation is linear in both arguments", "[qcore][property]") {
  auto rng = make_rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = random_unitary(3, rng) * random_density_matrix(3, rng);
    const ComplexMatrix h1 = a + a.adjoint();
    const ComplexMatrix h2 = random_density_matrix(3, rng);
    const ComplexMatrix r1 = random_density_matrix(3, rng);
    const ComplexMatrix r2 = random_density_matrix(3, rng);
    const double s = 0.3;
    const double t = -1.7;
    CHECK(std::abs(expectation(ComplexMatrix(s * h1 + t * h2), r1) -
                   (s * expectation(h1, r1) + t * expectation(h2, r1))) <= 1e-10);
    CHECK(std::abs(expectation(h1, ComplexMatrix(s * r1 + (1 - s) * r2)) -
                   (s * expectation(h1, r1) + (1 - s) * expectation(h1, r2))) <= 1e-10);
  }
}

TEST_CASE("random generators produce valid objects", "[qcore][property]") {
  auto rng = make_rng(9);
  for (int dim : {2, 4}) {
    const ComplexMatrix u = random_unitary(dim, rng);
    CHECK(max_abs(u.adjoint() * u - ComplexMatrix::Identity(dim, dim)) < 1e-12);
    CHECK(std::abs(random_pure_state(dim, rng).norm() - 1.0) < 1e-14);
    CHECK(is_density(random_density_matrix(dim, rng)));
  }
  auto a = make_rng(3, 1);
  auto b = make_rng(3, 1);
  auto c = make_rng(3, 2);
  CHECK(a() == b());
  CHECK(make_rng(3, 1)() != c());
}
