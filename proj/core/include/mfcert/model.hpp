#pragma once

// Discrete one-particle model on the ring Z_L with counting measure: sums
// replace integrals and the essential supremum becomes a maximum.

#include <cstddef>
#include <string>
#include <vector>

#include "mfcert/linalg.hpp"

namespace mfcert {

/// One-body operator h (L x L, Hermitian) and even pair potential V on Z_L.
class TorusModel {
 public:
  /// Throws ShapeMismatch / NonHermitianInput / InvalidConfig when h is not
  /// L x L Hermitian or V is not even.
  TorusModel(ComplexMatrix h, RealVector potential);

  std::size_t sites() const noexcept { return static_cast<std::size_t>(potential_.size()); }
  const ComplexMatrix& h() const noexcept { return h_; }
  const RealVector& potential() const noexcept { return potential_; }

  /// V[(x - y) mod L].
  double pair(std::size_t x, std::size_t y) const;

 private:
  ComplexMatrix h_;
  RealVector potential_;
};

enum class OneBodyPreset { Laplacian, Zero };

/// Periodic discrete Laplacian: 2 on the diagonal, -1 on ring neighbours.
ComplexMatrix laplacian_ring(std::size_t sites);

enum class PotentialKind { Zero, Constant, Bounded, Spiky, CoulombLike, Explicit };

struct PotentialSpec {
  PotentialKind kind = PotentialKind::Bounded;
  double lambda = 1.0;  // amplitude for Constant / Bounded / CoulombLike
  double delta = 0.5;   // CoulombLike regularizer
  double v = 1.0;       // Spiky bump height
  std::vector<double> values;  // Explicit
};

/// V[k] for the named family:
///   Zero         0
///   Constant     lambda
///   Bounded      lambda * cos(2 pi k / L)
///   Spiky        v at k = 0, 0 elsewhere
///   CoulombLike  lambda / (dist(k) + delta), dist the circular distance
///   Explicit     values as given (must be even)
RealVector make_potential(std::size_t sites, const PotentialSpec& spec);

TorusModel make_model(std::size_t sites, OneBodyPreset h, const PotentialSpec& potential);

/// rho(x) = gamma(x, x), nonnegative and summing to one.
class DensityProfile {
 public:
  /// Throws InvalidDensityMatrix if an entry is below -1e-12 or the total
  /// differs from 1 by more than 1e-10.
  explicit DensityProfile(RealVector rho);

  const RealVector& values() const noexcept { return rho_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(rho_.size()); }
  double operator[](std::size_t x) const { return rho_(static_cast<Eigen::Index>(x)); }

 private:
  RealVector rho_;
};

DensityProfile density_of(const DensityMatrix& gamma);

/// rho(x) = sum_m |Phi[x, m]|^2 for a state of shape (L, a).
DensityProfile density_of_lifted(const PureState& phi);

/// W[x] = sum_y V[(x - y) mod L] rho[y].
RealVector convolve(const TorusModel& model, const DensityProfile& rho);

/// sum_j h_j + 1/(N-1) sum_{i<j} V(x_i - x_j) on (C^L)^{(x) N}.
/// Throws SizeBudgetExceeded above kMaxDenseDim and InvalidConfig for N < 2.
ComplexMatrix build_HN(const TorusModel& model, std::size_t particles);

/// h + diag(V * rho).
ComplexMatrix build_mean_field_generator(const TorusModel& model, const DensityProfile& rho);

/// d(x1, x2) = V[(x1 - x2) mod L] - (V * rho)[x1], row-major L x L.
RealVector fluctuation_kernel(const TorusModel& model, const DensityProfile& rho);

/// The two-body fluctuation multiplication operator on (C^{L a})^{(x) 2},
/// diagonal in the (x1, m1, x2, m2) basis with entry d(x1, x2).
ComplexMatrix build_D(const TorusModel& model, const DensityProfile& rho, std::size_t aux_dim);

/// Lambda with Lambda^2 = max_y sum_x rho[x] (V[(x - y) mod L] - W[x])^2.
double lambda_of(const TorusModel& model, const DensityProfile& rho);

}  // namespace mfcert
