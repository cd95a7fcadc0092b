#pragma once

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <optional>
#include <string>

#include "qpower/error.hpp"
#include "qpower/qcore.hpp"

namespace qpower::testing {

// Runs `fn` and reports the error code it raised, or nullopt when it returned.
template <class Fn>
std::optional<Errc> raised(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline ComplexVector ket(std::initializer_list<cplx> amps) {
  ComplexVector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (auto a : amps) v(i++) = a;
  return v;
}

inline ComplexMatrix diag(std::initializer_list<double> levels) {
  RealVector v(static_cast<Eigen::Index>(levels.size()));
  Eigen::Index i = 0;
  for (auto a : levels) v(i++) = a;
  return diagonal_operator(v);
}

inline RealVector vec(std::initializer_list<double> xs) {
  RealVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto a : xs) v(i++) = a;
  return v;
}

// Hand-rolled -x ln x sum, used as an oracle independent of entropy_of_spectrum.
inline double plogp_sum(std::initializer_list<double> xs) {
  double s = 0.0;
  for (double x : xs)
    if (x > 0.0) s -= x * std::log(x);
  return s;
}

}  // namespace qpower::testing

#define REQUIRE_ERRC(expr, code) REQUIRE(::qpower::testing::raised([&] { (void)(expr); }) == (code))
