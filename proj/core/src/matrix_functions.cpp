#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mfcert/error.hpp"
#include "mfcert/linalg.hpp"

namespace mfcert {

namespace {
constexpr double kPsdClamp = -1e-10;
}

ComplexMatrix apply_spectral(const HermitianEigen& eig, const std::function<double(double)>& f) {
  RealVector fv(eig.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(eig.values(i));
  return eig.vectors * fv.asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix unitary_exp(const HermitianEigen& eig, double t) {
  ComplexVector phases(eig.values.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::polar(1.0, -t * eig.values(i));
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& a) {
  const HermitianEigen eig = herm_eig(a);
  if (eig.values.size() > 0 && eig.values(0) < kPsdClamp)
    throw Error(ErrorCode::NotPSD, "minimum eigenvalue " + std::to_string(eig.values(0)));
  // Eigenvalues within rounding of zero are zeroed: sqrt would blow a 1e-17
  // residue up to 3e-9.
  const double top = eig.values.size() > 0 ? std::max(std::abs(eig.values(eig.values.size() - 1)), 1.0) : 1.0;
  const double floor = static_cast<double>(eig.values.size()) * std::numeric_limits<double>::epsilon() * top;
  ComplexMatrix root = apply_spectral(eig, [floor](double x) { return x > floor ? std::sqrt(x) : 0.0; });
  return 0.5 * (root + root.adjoint());
}

SchattenNorms schatten_norms(const ComplexMatrix& a) {
  SchattenNorms out;
  if (a.size() == 0) return out;
  const RealVector sigma = svd(a).values;
  out.trace_norm = sigma.sum();
  out.op_norm = sigma.size() > 0 ? sigma(0) : 0.0;
  out.hs_norm = sigma.norm();
  return out;
}

double trace_norm(const ComplexMatrix& a) { return schatten_norms(a).trace_norm; }

double op_norm(const ComplexMatrix& a) { return schatten_norms(a).op_norm; }

double trace_norm_hermitian(const ComplexMatrix& a) {
  return herm_eigenvalues(a).cwiseAbs().sum();
}

double op_norm_hermitian(const ComplexMatrix& a) {
  const RealVector v = herm_eigenvalues(a);
  if (v.size() == 0) return 0.0;
  return std::max(std::abs(v(0)), std::abs(v(v.size() - 1)));
}

}  // namespace mfcert
