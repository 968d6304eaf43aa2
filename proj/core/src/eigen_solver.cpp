#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "mfcert/error.hpp"
#include "mfcert/linalg.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace mfcert {
namespace {

constexpr double kHermitianInputTolerance = 1e-9;

void require_hermitian(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::ShapeMismatch, "eigensolver needs a square matrix");
  if (!a.allFinite()) throw Error(ErrorCode::NonHermitianInput, "non-finite entry");
  const double defect = hermiticity_defect(a);
  if (defect > kHermitianInputTolerance)
    throw Error(ErrorCode::NonHermitianInput, "||A - A^dagger||_F = " + std::to_string(defect));
}

HermitianEigen sorted(RealVector values, ComplexMatrix vectors) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return values(i) < values(j); });
  HermitianEigen out{RealVector(n), ComplexMatrix(vectors.rows(), n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = values(order[k]);
    out.vectors.col(k) = vectors.col(order[k]);
  }
  return out;
}

}  // namespace

HermitianEigen herm_eig_jacobi(const ComplexMatrix& input, int max_sweeps) {
  require_hermitian(input);
  const Eigen::Index n = input.rows();
  ComplexMatrix a = 0.5 * (input + input.adjoint());
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  if (n <= 1) return sorted(a.diagonal().real(), v);

  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());
  // Entries below this are dropped; their total contribution is below
  // 1e-16 * ||A||_F.
  const double negligible = 1e-16 * scale / static_cast<double>(n);

  int sweep = 0;
  bool converged = false;
  for (; sweep < max_sweeps && !converged; ++sweep) {
    converged = true;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= negligible) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        converged = false;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Phase-rotate q so the pivot is real, then apply a real rotation.
        const Complex phase = apq / mag;  // e^{i phi}
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex s_conj_phase = s * std::conj(phase);  // s e^{-i phi}
        const Complex c_conj_phase = c * std::conj(phase);  // c e^{-i phi}

        // A <- A J, V <- V J with J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - s_conj_phase * akq;
          a(k, q) = s * akp + c_conj_phase * akq;
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - s_conj_phase * vkq;
          v(k, q) = s * vkp + c_conj_phase * vkq;
        }
        // A <- J^dagger A.
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (!converged)
    throw Error(ErrorCode::ConvergenceFailure,
                "Jacobi did not converge within " + std::to_string(max_sweeps) + " sweeps");
  return sorted(a.diagonal().real(), std::move(v));
}

HermitianEigen herm_eig_lapack(const ComplexMatrix& input) {
  require_hermitian(input);
  const lapack_int n = static_cast<lapack_int>(input.rows());
  ComplexMatrix a = 0.5 * (input + input.adjoint());
  HermitianEigen out{RealVector(n), ComplexMatrix(n, n)};
  if (n == 0) return out;
  lapack_int found = 0;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  const lapack_int info =
      LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'A', 'U', n, a.data(), n, 0.0, 0.0, 0, 0, 0.0, &found,
                     out.values.data(), out.vectors.data(), n, support.data());
  if (info != 0 || found != n)
    throw Error(ErrorCode::ConvergenceFailure, "zheevr failed (info " + std::to_string(info) + ")");
  return out;
}

HermitianEigen herm_eig(const ComplexMatrix& a) {
  if (static_cast<std::size_t>(a.rows()) <= kJacobiMaxDim) return herm_eig_jacobi(a);
  return herm_eig_lapack(a);
}

RealVector herm_eigenvalues(const ComplexMatrix& input) {
  if (static_cast<std::size_t>(input.rows()) <= kJacobiMaxDim) return herm_eig_jacobi(input).values;
  require_hermitian(input);
  const lapack_int n = static_cast<lapack_int>(input.rows());
  ComplexMatrix a = 0.5 * (input + input.adjoint());
  RealVector values(n);
  lapack_int found = 0;
  ComplexMatrix unused(1, 1);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'N', 'A', 'U', n, a.data(), n, 0.0, 0.0,
                                         0, 0, 0.0, &found, values.data(), unused.data(), 1,
                                         support.data());
  if (info != 0 || found != n)
    throw Error(ErrorCode::ConvergenceFailure, "zheevr failed (info " + std::to_string(info) + ")");
  return values;
}

double hermiticity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::ShapeMismatch, "square matrix expected");
  return (a - a.adjoint()).norm();
}

}  // namespace mfcert
