#pragma once

// Seeded random operators. Every generator takes the engine by reference so
// callers control stream splitting.

#include <cstdint>
#include <random>

#include "qpower/qcore.hpp"

namespace qpower {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; derives independent child seeds as splitmix64(seed + i).
std::uint64_t splitmix64(std::uint64_t x);

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(splitmix64(seed + stream));
}

/// Normalized vector of i.i.d. standard complex Gaussians (Haar-random ket).
ComplexVector random_pure_state(int dim, Rng& rng);

/// Hilbert-Schmidt random density matrix G G^dagger / Tr, G a dim x dim Ginibre matrix.
ComplexMatrix random_density_matrix(int dim, Rng& rng);

/// Haar unitary from the QR decomposition of a Ginibre matrix with phases fixed.
ComplexMatrix random_unitary(int dim, Rng& rng);

/// Diagonal Hermitian operator with levels uniform in [0, 1).
ComplexMatrix random_diagonal_hamiltonian(int dim, Rng& rng);

}  // namespace qpower
