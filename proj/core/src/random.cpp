#include <cmath>
#include <string>

#include "mfcert/error.hpp"
#include "mfcert/random.hpp"

namespace mfcert {

ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index c = 0; c < g.cols(); ++c)
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im) / std::sqrt(2.0);
    }
  return g;
}

ComplexMatrix haar_unitary(std::size_t d, Rng& rng) {
  ComplexMatrix q = gaussian_matrix(d, d, rng);
  // Modified Gram-Schmidt; dividing by the (positive) norm is the phase fix.
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    for (Eigen::Index j = 0; j < k; ++j) q.col(k) -= q.col(j) * q.col(j).dot(q.col(k));
    const double n = q.col(k).norm();
    if (!(n > 1e-300)) throw Error(ErrorCode::ConvergenceFailure, "degenerate Gaussian draw");
    q.col(k) /= n;
  }
  return q;
}

ComplexVector random_unit_vector(std::size_t d, Rng& rng) {
  ComplexMatrix g = gaussian_matrix(d, 1, rng);
  return g.col(0) / g.col(0).norm();
}

RealVector dirichlet_spectrum(std::size_t rank, Rng& rng) {
  if (rank == 0) throw Error(ErrorCode::InvalidConfig, "rank must be positive");
  std::exponential_distribution<double> exponential(1.0);
  RealVector p(static_cast<Eigen::Index>(rank));
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = exponential(rng);
  return p / p.sum();
}

DensityMatrix random_density(const TensorShape& shape, std::size_t rank, Rng& rng) {
  const std::size_t d = shape.dim();
  if (rank == 0 || rank > d)
    throw Error(ErrorCode::InvalidConfig, "rank " + std::to_string(rank) + " not in [1, " + std::to_string(d) + "]");
  const ComplexMatrix u = haar_unitary(d, rng);
  const RealVector p = dirichlet_spectrum(rank, rng);
  const auto r = static_cast<Eigen::Index>(rank);
  const ComplexMatrix cols = u.leftCols(r);
  ComplexMatrix rho = cols * p.cast<Complex>().asDiagonal() * cols.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return DensityMatrix(rho, shape);
}

DensityMatrix random_density(std::size_t d, std::size_t rank, Rng& rng) {
  return random_density(TensorShape{d}, rank, rng);
}

ComplexMatrix random_hermitian(std::size_t d, Rng& rng) {
  const ComplexMatrix g = gaussian_matrix(d, d, rng);
  return 0.5 * (g + g.adjoint());
}

}  // namespace mfcert
