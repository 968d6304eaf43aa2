#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mfcert/error.hpp"
#include "mfcert/metrics.hpp"
#include "mfcert/purify.hpp"
#include "mfcert/random.hpp"

namespace mfcert {
namespace {

constexpr double kEigenCutoff = 1e-14;
constexpr double kInvarianceTolerance = 1e-10;
constexpr double kKernelRelative = 1e-12;
constexpr double kAlphaTolerance = 1e-12;

struct Slot {
  std::size_t sites;
  std::size_t aux;
  std::size_t particles;
};

Slot check_pair(const PureState& psi_tilde, const PureState& phi) {
  const std::size_t particles = lifted_particles(psi_tilde.shape());
  if (phi.shape().size() != 2 || phi.shape()[0] != psi_tilde.shape()[0] ||
      phi.shape()[1] != psi_tilde.shape()[1])
    throw Error(ErrorCode::ShapeMismatch, "Phi does not match the lifted slot shape");
  return {phi.shape()[0], phi.shape()[1], particles};
}

std::size_t uniform_power(const TensorShape& shape, std::size_t base) {
  for (std::size_t f : shape.factors())
    if (f != base) throw Error(ErrorCode::ShapeMismatch, "N-body shape must be (L, ..., L)");
  return shape.size();
}

double max_defect_over_permutations(const ComplexMatrix& k, std::size_t d, std::size_t n) {
  double worst = 0.0;
  for (const auto& pi : all_permutations(n)) {
    const auto map = permutation_index_map(pi, d);
    worst = std::max(worst, (conjugate_by_permutation(k, map) - k).norm());
  }
  return worst;
}

}  // namespace

TensorShape lifted_shape(std::size_t sites, std::size_t aux_dim, std::size_t particles) {
  std::vector<std::size_t> factors;
  factors.reserve(2 * particles);
  for (std::size_t j = 0; j < particles; ++j) {
    factors.push_back(sites);
    factors.push_back(aux_dim);
  }
  return TensorShape(std::move(factors));
}

std::vector<std::size_t> physical_factors(std::size_t count) {
  std::vector<std::size_t> out(count);
  for (std::size_t j = 0; j < count; ++j) out[j] = 2 * j;
  return out;
}

std::size_t lifted_particles(const TensorShape& shape) {
  if (shape.size() == 0 || shape.size() % 2 != 0)
    throw Error(ErrorCode::ShapeMismatch, "lifted shape needs an even number of factors");
  for (std::size_t j = 2; j < shape.size(); ++j)
    if (shape[j] != shape[j - 2]) throw Error(ErrorCode::ShapeMismatch, "lifted shape is not (L, a, ..., L, a)");
  return shape.size() / 2;
}

PureState purify_one_body(const DensityMatrix& gamma) {
  if (gamma.shape().size() != 1) throw Error(ErrorCode::ShapeMismatch, "one-body state expected");
  const HermitianEigen eig = herm_eig(gamma.matrix());
  if (eig.values(0) < -1e-10) throw Error(ErrorCode::NotPSD, "negative eigenvalue in gamma");
  std::vector<Eigen::Index> kept;
  for (Eigen::Index m = eig.values.size(); m-- > 0;)
    if (eig.values(m) > kEigenCutoff) kept.push_back(m);
  const auto sites = eig.values.size();
  const auto rank = static_cast<Eigen::Index>(kept.size());
  ComplexVector phi(sites * rank);
  for (Eigen::Index x = 0; x < sites; ++x)
    for (Eigen::Index m = 0; m < rank; ++m)
      phi(x * rank + m) = std::sqrt(eig.values(kept[m])) * eig.vectors(x, kept[m]);
  return PureState::normalized(std::move(phi),
                               TensorShape{static_cast<std::size_t>(sites), static_cast<std::size_t>(rank)});
}

PureState vectorize_sqrt(const DensityMatrix& gamma) {
  if (gamma.shape().size() != 1) throw Error(ErrorCode::ShapeMismatch, "one-body state expected");
  const ComplexMatrix root = matrix_sqrt_psd(gamma.matrix());
  const Eigen::Index sites = root.rows();
  ComplexVector phi(sites * sites);
  for (Eigen::Index x = 0; x < sites; ++x)
    for (Eigen::Index y = 0; y < sites; ++y) phi(x * sites + y) = root(x, y);
  return PureState::normalized(std::move(phi),
                               TensorShape{static_cast<std::size_t>(sites), static_cast<std::size_t>(sites)});
}

PurifiedPair purify_n_body(const DensityMatrix& gamma_n, const DensityMatrix& gamma_one,
                           const PurifyOptions& options) {
  if (gamma_one.shape().size() != 1) throw Error(ErrorCode::ShapeMismatch, "one-body state expected");
  const std::size_t sites = gamma_one.dim();
  const std::size_t particles = uniform_power(gamma_n.shape(), sites);
  if (particles == 0) throw Error(ErrorCode::ShapeMismatch, "empty N-body shape");

  const double input_defect = permutation_defect(gamma_n.matrix(), sites, particles);
  if (input_defect > kInvarianceTolerance)
    throw Error(ErrorCode::NotPermutationInvariant,
                "Gamma0 permutation defect " + std::to_string(input_defect));

  const ComplexMatrix root_n = matrix_sqrt_psd(gamma_n.matrix());
  const ComplexMatrix root_product = kron_power(matrix_sqrt_psd(gamma_one.matrix()), particles);
  const ComplexMatrix a = root_n * root_product;
  const auto dim = a.rows();

  // Polar part on the support of A.
  const SingularValueDecomposition s = svd(a);
  const double cutoff = kKernelRelative * std::max(s.values(0), 1e-300);
  Eigen::Index rank = 0;
  while (rank < dim && s.values(rank) > cutoff) ++rank;
  ComplexMatrix v = s.left.leftCols(rank) * s.right.leftCols(rank).adjoint();

  PurifiedPair out{PureState(ComplexVector::Unit(1, 0), TensorShape{1}),
                   PureState(ComplexVector::Unit(1, 0), TensorShape{1})};
  out.kernel_dim = static_cast<std::size_t>(dim - rank);

  // Kernel completion: ker A -> ker A^dagger through the polar part of a
  // compressed commutant element. Any injective compression lands in the
  // commutant; a singular one triggers a reseeded retry.
  ComplexMatrix best_v = v;
  double best_defect = std::numeric_limits<double>::infinity();
  if (rank < dim) {
    const ComplexMatrix p0 = s.left.rightCols(dim - rank);
    const ComplexMatrix q0 = s.right.rightCols(dim - rank);
    for (int attempt = 0; attempt < std::max(1, options.completion_attempts); ++attempt) {
      Rng rng(options.completion_seed + static_cast<std::uint64_t>(attempt));
      const ComplexMatrix g = symmetrize(gaussian_matrix(static_cast<std::size_t>(dim),
                                                         static_cast<std::size_t>(dim), rng),
                                         sites, particles);
      const ComplexMatrix x = p0.adjoint() * g * q0;
      const SingularValueDecomposition sx = svd(x);
      const ComplexMatrix candidate = v + p0 * (sx.left * sx.right.adjoint()) * q0.adjoint();
      const double defect = max_defect_over_permutations(root_n * candidate, sites, particles);
      if (defect < best_defect) {
        best_defect = defect;
        best_v = candidate;
      }
      if (best_defect <= options.symmetry_threshold) break;
    }
  } else {
    best_defect = max_defect_over_permutations(root_n * v, sites, particles);
  }

  const ComplexMatrix k = root_n * best_v;
  const TensorShape shape = lifted_shape(sites, sites, particles);
  const auto phys = physical_factors(particles);
  out.psi_tilde = PureState::normalized(matrix_to_tensor(k, shape, phys), shape);
  out.phi = vectorize_sqrt(gamma_one);
  out.aux_dim = sites;

  // Symmetry measured on the lifted vector with slot permutations.
  double symmetry = 0.0;
  for (const auto& pi : all_permutations(particles)) {
    const auto map = permutation_index_map(pi, sites * sites);
    symmetry = std::max(symmetry, (permute_vector(out.psi_tilde.amplitudes(), map) -
                                   out.psi_tilde.amplitudes()).norm());
  }
  out.symmetry_defect = symmetry;
  if (options.strict && symmetry > options.symmetry_threshold)
    throw Error(ErrorCode::DegenerateKernelCompletion,
                "symmetric completion failed, defect " + std::to_string(symmetry));

  const ComplexMatrix km = tensor_to_matrix(out.psi_tilde.amplitudes(), shape, phys);
  out.marginal_defect = trace_norm_hermitian(km * km.adjoint() - gamma_n.matrix());
  const Complex overlap = out.psi_tilde.amplitudes().dot(kron_power(out.phi.amplitudes(), particles));
  out.overlap_sq = std::min(1.0, std::norm(overlap));
  return out;
}

ComplexVector contract_slot(const PureState& psi_tilde, const PureState& phi, std::size_t slot) {
  const Slot info = check_pair(psi_tilde, phi);
  if (slot >= info.particles) throw Error(ErrorCode::BadFactorIndex, "slot " + std::to_string(slot) + " out of range");
  const std::array<std::size_t, 2> rows{2 * slot, 2 * slot + 1};
  const ComplexMatrix m = tensor_to_matrix(psi_tilde.amplitudes(), psi_tilde.shape(), rows);
  return m.transpose() * phi.amplitudes().conjugate();
}

ComplexVector apply_p(const PureState& psi_tilde, const PureState& phi, std::size_t slot) {
  const ComplexVector c = contract_slot(psi_tilde, phi, slot);
  const std::array<std::size_t, 2> rows{2 * slot, 2 * slot + 1};
  return matrix_to_tensor(phi.amplitudes() * c.transpose(), psi_tilde.shape(), rows);
}

double p_expectation(const PureState& psi_tilde, const PureState& phi, std::size_t slot) {
  return contract_slot(psi_tilde, phi, slot).squaredNorm();
}

double alpha(const PureState& psi_tilde, const PureState& phi) {
  const Slot info = check_pair(psi_tilde, phi);
  double acc = 0.0;
  for (std::size_t j = 0; j < info.particles; ++j) acc += p_expectation(psi_tilde, phi, j);
  const double a = 1.0 - acc / static_cast<double>(info.particles);
  if (a < -kAlphaTolerance || a > 1.0 + kAlphaTolerance)
    throw Error(ErrorCode::InvalidState, "counting functional " + std::to_string(a) + " outside [0, 1]");
  return std::clamp(a, 0.0, 1.0);
}

double counting_overlap(const PureState& psi_tilde, const PureState& phi, std::size_t k) {
  const Slot info = check_pair(psi_tilde, phi);
  if (k == 0 || k > info.particles) throw Error(ErrorCode::BadFactorIndex, "k out of range");
  std::vector<std::size_t> rows(2 * k);
  std::iota(rows.begin(), rows.end(), 0);
  const ComplexMatrix m = tensor_to_matrix(psi_tilde.amplitudes(), psi_tilde.shape(), rows);
  return (m.transpose() * kron_power(phi.amplitudes(), k).conjugate()).squaredNorm();
}

double initial_alpha_bound_check(const PurifiedPair& pair, const DensityMatrix& gamma_n,
                                 const DensityMatrix& gamma_one) {
  const std::size_t particles = lifted_particles(pair.psi_tilde.shape());
  const DensityMatrix product(kron_power(gamma_one.matrix(), particles), gamma_n.shape());
  const double f = fidelity(gamma_n, product);
  return 1.0 - f + 1.0 / static_cast<double>(particles) - alpha(pair.psi_tilde, pair.phi);
}

}  // namespace mfcert
