#pragma once

// Seeded random states. Everything is drawn from one std::mt19937_64 so a
// fixed seed reproduces the same matrices bit for bit.

#include <cstddef>
#include <cstdint>
#include <random>

#include "mfcert/linalg.hpp"

namespace mfcert {

using Rng = std::mt19937_64;

/// Entries (g1 + i g2) / sqrt(2) with independent standard normals.
ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng);

/// Haar unitary: Gram-Schmidt on a Gaussian matrix with the column phases
/// fixed so the implicit R has a positive diagonal.
ComplexMatrix haar_unitary(std::size_t d, Rng& rng);

/// Unit vector with a uniformly random direction.
ComplexVector random_unit_vector(std::size_t d, Rng& rng);

/// Normalized exponential samples: a flat-Dirichlet point of length `rank`.
RealVector dirichlet_spectrum(std::size_t rank, Rng& rng);

/// U diag(p, 0, ..., 0) U^dagger with U Haar and p a Dirichlet spectrum.
DensityMatrix random_density(std::size_t d, std::size_t rank, Rng& rng);

/// random_density on a given tensor shape.
DensityMatrix random_density(const TensorShape& shape, std::size_t rank, Rng& rng);

/// Random Hermitian matrix (G + G^dagger) / 2.
ComplexMatrix random_hermitian(std::size_t d, Rng& rng);

}  // namespace mfcert
