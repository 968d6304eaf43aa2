#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "mfcert/error.hpp"
#include "mfcert/linalg.hpp"

namespace mfcert {
namespace {

constexpr double kIllConditioned = 1e-8;

// Sorts singular triplets by descending value; left columns beyond the
// sorted ones are filled by complete_to_unitary.
SingularValueDecomposition assemble(const ComplexMatrix& work, const ComplexMatrix& right_work,
                                    Eigen::Index m) {
  const Eigen::Index n = work.cols();
  RealVector norms(n);
  for (Eigen::Index k = 0; k < n; ++k) norms(k) = work.col(k).norm();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return norms(i) > norms(j); });

  SingularValueDecomposition out;
  out.values.resize(n);
  out.right.resize(right_work.rows(), n);
  const double largest = n > 0 ? norms(order[0]) : 0.0;
  std::vector<ComplexVector> left_columns;
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = norms(order[k]);
    out.right.col(k) = right_work.col(order[k]);
    // Columns at rounding level carry no direction; the completion step
    // supplies their left vectors.
    if (out.values(k) > std::numeric_limits<double>::min() &&
        out.values(k) > static_cast<double>(std::max(m, n)) * std::numeric_limits<double>::epsilon() * largest)
      left_columns.push_back(work.col(order[k]) / out.values(k));
  }
  ComplexMatrix left(m, static_cast<Eigen::Index>(left_columns.size()));
  for (std::size_t k = 0; k < left_columns.size(); ++k) left.col(static_cast<Eigen::Index>(k)) = left_columns[k];
  out.left = complete_to_unitary(left);
  return out;
}

}  // namespace

ComplexMatrix complete_to_unitary(const ComplexMatrix& columns) {
  const Eigen::Index m = columns.rows();
  const Eigen::Index r = columns.cols();
  if (r > m) throw Error(ErrorCode::ShapeMismatch, "more orthonormal columns than rows");
  if (r == m) return columns;
  ComplexMatrix out(m, m);
  out.leftCols(r) = columns;
  // The complement projector has eigenvalue 1 exactly on the missing span.
  const ComplexMatrix complement = ComplexMatrix::Identity(m, m) - columns * columns.adjoint();
  const HermitianEigen eig = herm_eig(0.5 * (complement + complement.adjoint()));
  ComplexMatrix extra = eig.vectors.rightCols(m - r);
  // One re-orthogonalization pass against the given columns.
  extra -= columns * (columns.adjoint() * extra);
  for (Eigen::Index k = 0; k < extra.cols(); ++k) {
    for (Eigen::Index j = 0; j < k; ++j) extra.col(k) -= extra.col(j) * extra.col(j).dot(extra.col(k));
    extra.col(k).normalize();
  }
  out.rightCols(m - r) = extra;
  return out;
}

SingularValueDecomposition svd_jacobi(const ComplexMatrix& a, int max_sweeps) {
  if (!a.allFinite()) throw Error(ErrorCode::ConvergenceFailure, "non-finite input to svd");
  if (a.rows() < a.cols()) {
    SingularValueDecomposition t = svd_jacobi(a.adjoint(), max_sweeps);
    std::swap(t.left, t.right);
    return t;
  }
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  ComplexMatrix w = a;
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double tol = std::numeric_limits<double>::epsilon() * static_cast<double>(std::max<Eigen::Index>(m, 1));
  // Columns below this squared norm are rounding residue and never rotated.
  const double negligible = std::pow(std::numeric_limits<double>::epsilon() * a.norm(), 2);

  bool converged = n <= 1;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    converged = true;
    for (Eigen::Index i = 0; i < n - 1; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double alpha = w.col(i).squaredNorm();
        const double beta = w.col(j).squaredNorm();
        const Complex gamma = w.col(i).dot(w.col(j));  // w_i^dagger w_j
        const double mag = std::abs(gamma);
        if (alpha <= negligible || beta <= negligible) continue;
        if (mag == 0.0 || mag <= tol * std::sqrt(alpha * beta)) continue;
        converged = false;
        // Diagonalize the Gram block [[alpha, gamma], [conj(gamma), beta]].
        const Complex phase = gamma / mag;
        const double theta = (beta - alpha) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex s_conj_phase = s * std::conj(phase);
        const Complex c_conj_phase = c * std::conj(phase);
        for (Eigen::Index k = 0; k < m; ++k) {
          const Complex wi = w(k, i);
          const Complex wj = w(k, j);
          w(k, i) = c * wi - s_conj_phase * wj;
          w(k, j) = s * wi + c_conj_phase * wj;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex vi = v(k, i);
          const Complex vj = v(k, j);
          v(k, i) = c * vi - s_conj_phase * vj;
          v(k, j) = s * vi + c_conj_phase * vj;
        }
      }
    }
  }
  if (!converged)
    throw Error(ErrorCode::ConvergenceFailure,
                "one-sided Jacobi did not converge within " + std::to_string(max_sweeps) + " sweeps");
  return assemble(w, v, m);
}

SingularValueDecomposition svd_via_eig(const ComplexMatrix& a) {
  if (!a.allFinite()) throw Error(ErrorCode::ConvergenceFailure, "non-finite input to svd");
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  const Eigen::Index k = std::min(m, n);
  if (k == 0) return svd_jacobi(a);

  const ComplexMatrix gram = a.adjoint() * a;
  const HermitianEigen eig = herm_eig(0.5 * (gram + gram.adjoint()));
  // Ascending eigenvalues -> descending singular values.
  RealVector sigma(k);
  ComplexMatrix right(n, n);
  for (Eigen::Index i = 0; i < n; ++i) right.col(i) = eig.vectors.col(n - 1 - i);
  for (Eigen::Index i = 0; i < k; ++i) sigma(i) = std::sqrt(std::max(eig.values(n - 1 - i), 0.0));

  if (!(sigma(0) > 0.0) || sigma(k - 1) / sigma(0) < kIllConditioned) return svd_jacobi(a);

  ComplexMatrix left = a * right.leftCols(k);
  for (Eigen::Index i = 0; i < k; ++i) left.col(i) /= sigma(i);
  return SingularValueDecomposition{complete_to_unitary(left), sigma, right};
}

SingularValueDecomposition svd(const ComplexMatrix& a) {
  if (static_cast<std::size_t>(std::max(a.rows(), a.cols())) <= kJacobiMaxDim) return svd_jacobi(a);
  return svd_via_eig(a);
}

}  // namespace mfcert
