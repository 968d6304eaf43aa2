#pragma once

// Dense complex linear algebra on tensor-shaped spaces.
//
// Conventions used throughout the library:
//  * A composite index over factors (d_1, ..., d_m) is flattened big-endian,
//    i = sum_j i_j * prod_{j' > j} d_{j'}; the first factor varies slowest.
//  * Factor indices are 0-based.
//  * A permutation `pi` moves the tensor factor in slot j to slot pi[j], so
//    U_pi (u_0 (x) ... (x) u_{N-1}) places u_j in slot pi[j] and
//    U_pi U_sigma = U_{pi o sigma}.

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mfcert {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Largest dimension for which dense N-body operators are materialized.
inline constexpr std::size_t kMaxDenseDim = 4096;

/// Matrices up to this size are diagonalized with cyclic Jacobi sweeps;
/// larger ones go through LAPACK.
inline constexpr std::size_t kJacobiMaxDim = 128;

// ---------------------------------------------------------------------------
// Tensor shapes and states
// ---------------------------------------------------------------------------

class TensorShape {
 public:
  TensorShape() = default;
  explicit TensorShape(std::vector<std::size_t> factors);
  TensorShape(std::initializer_list<std::size_t> factors);

  /// `count` copies of the local dimension `d`.
  static TensorShape uniform(std::size_t d, std::size_t count);

  const std::vector<std::size_t>& factors() const noexcept { return factors_; }
  std::size_t size() const noexcept { return factors_.size(); }
  std::size_t operator[](std::size_t i) const { return factors_.at(i); }
  std::size_t dim() const noexcept { return dim_; }

  std::vector<std::size_t> strides() const;
  std::vector<std::size_t> unflatten(std::size_t index) const;
  std::size_t flatten(std::span<const std::size_t> multi_index) const;

  /// Shape restricted to the listed factors, in the listed order.
  TensorShape select(std::span<const std::size_t> which) const;

  friend bool operator==(const TensorShape&, const TensorShape&) = default;

 private:
  std::vector<std::size_t> factors_;
  std::size_t dim_ = 1;
};

/// Normalized state vector carrying its tensor structure.
class PureState {
 public:
  static constexpr double kNormTolerance = 1e-12;

  /// Throws InvalidState unless the norm is 1 within kNormTolerance.
  PureState(ComplexVector amplitudes, TensorShape shape);

  /// Rescales to unit norm; throws InvalidState for a zero vector.
  static PureState normalized(ComplexVector amplitudes, TensorShape shape);

  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  const TensorShape& shape() const noexcept { return shape_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }

 private:
  ComplexVector amplitudes_;
  TensorShape shape_;
};

struct DensityTolerance {
  double hermiticity = 1e-10;
  double min_eigenvalue = -1e-10;
  double trace = 1e-10;
};

/// Hermitian, positive semidefinite, unit-trace matrix. Construction
/// validates all three properties and stores the measured defects; the stored
/// matrix is the Hermitian part of the input.
class DensityMatrix {
 public:
  DensityMatrix(const ComplexMatrix& matrix, TensorShape shape,
                const DensityTolerance& tol = {});

  /// |psi><psi|; exact by construction, no eigen-solve needed.
  static DensityMatrix from_pure(const PureState& psi);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const TensorShape& shape() const noexcept { return shape_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }

  /// Frobenius norm of M - M^dagger (an upper bound on the operator norm).
  double hermiticity_defect() const noexcept { return hermiticity_defect_; }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }
  double trace_defect() const noexcept { return trace_defect_; }

 private:
  DensityMatrix() = default;

  ComplexMatrix matrix_;
  TensorShape shape_;
  double hermiticity_defect_ = 0.0;
  double min_eigenvalue_ = 0.0;
  double trace_defect_ = 0.0;
};

// ---------------------------------------------------------------------------
// Spectral kernels
// ---------------------------------------------------------------------------

struct HermitianEigen {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns are eigenvectors
};

/// Eigendecomposition A = U diag(values) U^dagger of a Hermitian matrix.
/// Dispatches to cyclic Jacobi up to kJacobiMaxDim, LAPACK above.
HermitianEigen herm_eig(const ComplexMatrix& a);

/// Cyclic Jacobi with an explicit sweep budget.
HermitianEigen herm_eig_jacobi(const ComplexMatrix& a, int max_sweeps = 100);

/// LAPACK zheev.
HermitianEigen herm_eig_lapack(const ComplexMatrix& a);

/// Eigenvalues only, ascending.
RealVector herm_eigenvalues(const ComplexMatrix& a);

/// A = left * diag(values) * right^dagger with `left` (m x m) and `right`
/// (n x n) unitary and `values` (length min(m, n)) descending.
struct SingularValueDecomposition {
  ComplexMatrix left;
  RealVector values;
  ComplexMatrix right;
};

/// Default route: one-sided Jacobi up to kJacobiMaxDim; above that the
/// eigendecomposition of A^dagger A with column recovery, falling back to
/// one-sided Jacobi when sigma_min / sigma_max < 1e-8.
SingularValueDecomposition svd(const ComplexMatrix& a);
SingularValueDecomposition svd_jacobi(const ComplexMatrix& a, int max_sweeps = 100);
SingularValueDecomposition svd_via_eig(const ComplexMatrix& a);

/// Extends orthonormal columns to a full unitary; the given columns are kept.
ComplexMatrix complete_to_unitary(const ComplexMatrix& orthonormal_columns);

// ---------------------------------------------------------------------------
// Matrix functions and norms
// ---------------------------------------------------------------------------

/// U f(diag) U^dagger for a Hermitian eigendecomposition.
ComplexMatrix apply_spectral(const HermitianEigen& eig, const std::function<double(double)>& f);

/// exp(-i t H) from the eigendecomposition of H.
ComplexMatrix unitary_exp(const HermitianEigen& eig, double t);

/// Square root of a PSD matrix; eigenvalues in [-1e-10, 0) are clamped,
/// anything lower throws NotPSD.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& a);

struct SchattenNorms {
  double trace_norm = 0.0;
  double op_norm = 0.0;
  double hs_norm = 0.0;
};

SchattenNorms schatten_norms(const ComplexMatrix& a);
double trace_norm(const ComplexMatrix& a);
double op_norm(const ComplexMatrix& a);
/// Trace norm of a Hermitian matrix from its eigenvalues.
double trace_norm_hermitian(const ComplexMatrix& a);
double op_norm_hermitian(const ComplexMatrix& a);

/// Frobenius norm of A - A^dagger.
double hermiticity_defect(const ComplexMatrix& a);

// ---------------------------------------------------------------------------
// Tensor products, partial traces, permutations
// ---------------------------------------------------------------------------

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);
ComplexMatrix kron_power(const ComplexMatrix& a, std::size_t count);
ComplexVector kron_power(const ComplexVector& a, std::size_t count);

/// Reshapes a tensor into a matrix whose rows run over `row_factors` (in the
/// given order) and whose columns run over the remaining factors in ascending
/// order. Throws BadFactorIndex on repeated or out-of-range factors.
ComplexMatrix tensor_to_matrix(const ComplexVector& psi, const TensorShape& shape,
                               std::span<const std::size_t> row_factors);
ComplexVector matrix_to_tensor(const ComplexMatrix& m, const TensorShape& shape,
                               std::span<const std::size_t> row_factors);

/// Applies `op` to the listed factors of a tensor; identity elsewhere.
ComplexVector apply_to_factors(const ComplexMatrix& op, const ComplexVector& psi,
                               const TensorShape& shape,
                               std::span<const std::size_t> factors);

/// Partial trace keeping `keep` (sorted ascending in the result).
ComplexMatrix partial_trace(const ComplexMatrix& rho, const TensorShape& shape,
                            std::span<const std::size_t> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);
DensityMatrix partial_trace(const PureState& psi, std::span<const std::size_t> keep);

using Permutation = std::vector<std::size_t>;

bool is_permutation(const Permutation& pi);
Permutation compose(const Permutation& pi, const Permutation& sigma);  // pi o sigma
Permutation inverse(const Permutation& pi);
/// All N! permutations in lexicographic order; the identity comes first.
std::vector<Permutation> all_permutations(std::size_t n);

/// U_pi e_y = e_{map[y]} on (C^d)^{(x) N}, N = pi.size().
std::vector<std::size_t> permutation_index_map(const Permutation& pi, std::size_t d);

/// Dense 0/1 matrix of U_pi; throws SizeBudgetExceeded above kMaxDenseDim.
ComplexMatrix permutation_operator(const Permutation& pi, std::size_t d);

/// U_pi psi using an index map from permutation_index_map.
ComplexVector permute_vector(const ComplexVector& psi, std::span<const std::size_t> index_map);
/// U_pi M U_pi^dagger using an index map.
ComplexMatrix conjugate_by_permutation(const ComplexMatrix& m,
                                       std::span<const std::size_t> index_map);

/// Operator average (1/N!) sum_pi U_pi M U_pi^dagger over S_N with local
/// dimension d.
ComplexMatrix symmetrize(const ComplexMatrix& m, std::size_t d, std::size_t n);

/// max_pi || U_pi M U_pi^dagger - M ||_F.
double permutation_defect(const ComplexMatrix& m, std::size_t d, std::size_t n);

/// || tr_2((U (x) 1) T (U^dagger (x) 1)) - U (tr_2 T) U^dagger ||_1 for T on a
/// two-factor shape and U acting on the first factor.
double covariance_check(const ComplexMatrix& u, const DensityMatrix& t);

}  // namespace mfcert
