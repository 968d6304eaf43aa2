#pragma once

// Purifications and the counting functional on lifted spaces.
//
// A lifted N-body state lives on (C^L (x) C^a)^{(x) N}. Its TensorShape is
// interleaved, (L, a, L, a, ...): slot j owns factors 2j (physical) and
// 2j + 1 (auxiliary), so the composite slot index is x * a + m.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mfcert/linalg.hpp"

namespace mfcert {

TensorShape lifted_shape(std::size_t sites, std::size_t aux_dim, std::size_t particles);

/// Factors 0, 2, ..., 2(count - 1).
std::vector<std::size_t> physical_factors(std::size_t count);

/// Number of slots of an interleaved shape; throws ShapeMismatch if the
/// shape is not of the form (L, a, ..., L, a).
std::size_t lifted_particles(const TensorShape& shape);

struct PurifiedPair {
  PureState psi_tilde;
  PureState phi;
  std::size_t aux_dim = 0;
  double symmetry_defect = 0.0;
  double marginal_defect = 0.0;
  double overlap_sq = 0.0;
  /// Dimension of ker A filled by the completion step; 0 when A is injective.
  std::size_t kernel_dim = 0;
};

/// sum_m sqrt(lambda_m) u_m (x) e_m over eigenpairs with lambda_m > 1e-14;
/// shape (L, rank).
PureState purify_one_body(const DensityMatrix& gamma);

/// Phi[x, y] = sqrt(gamma)[x, y], shape (L, L).
PureState vectorize_sqrt(const DensityMatrix& gamma);

struct PurifyOptions {
  std::uint64_t completion_seed = 0x9e3779b97f4a7c15ULL;
  int completion_attempts = 4;
  /// Throw DegenerateKernelCompletion instead of recording the defect.
  bool strict = false;
  double symmetry_threshold = 1e-8;
};

/// Symmetric purification of Gamma0 with Phi = vec(sqrt(gamma0)) and exact
/// polar unitary. Gamma0 must have shape (L, ..., L) and gamma0 shape (L).
PurifiedPair purify_n_body(const DensityMatrix& gamma_n, const DensityMatrix& gamma_one,
                           const PurifyOptions& options = {});

/// (<Phi|_slot (x) 1) psi over the remaining slots, in the interleaved order.
ComplexVector contract_slot(const PureState& psi_tilde, const PureState& phi, std::size_t slot);

/// p_slot psi = |Phi>_slot (x) (<Phi|_slot (x) 1) psi.
ComplexVector apply_p(const PureState& psi_tilde, const PureState& phi, std::size_t slot);

/// <psi, p_slot psi>.
double p_expectation(const PureState& psi_tilde, const PureState& phi, std::size_t slot);

/// 1 - (1/N) sum_j <psi, p_j psi>, clamped into [0, 1].
double alpha(const PureState& psi_tilde, const PureState& phi);

/// tr(Gamma~^{N:k} P^{(x) k}) = || (<Phi|^{(x) k} (x) 1) psi ||^2.
double counting_overlap(const PureState& psi_tilde, const PureState& phi, std::size_t k);

/// 1 - F(Gamma0, gamma0^{(x) N}) + 1/N - alpha(0).
double initial_alpha_bound_check(const PurifiedPair& pair, const DensityMatrix& gamma_n,
                                 const DensityMatrix& gamma_one);

}  // namespace mfcert
