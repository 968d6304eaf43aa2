#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "mfcert/error.hpp"
#include "mfcert/metrics.hpp"

namespace mfcert {
namespace {

constexpr double kFidelityClamp = 1e-10;

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim())
    throw Error(ErrorCode::ShapeMismatch, "states of dimension " + std::to_string(a.dim()) + " and " +
                                              std::to_string(b.dim()));
}

}  // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  const ComplexMatrix product = matrix_sqrt_psd(rho.matrix()) * matrix_sqrt_psd(sigma.matrix());
  const double root = trace_norm(product);
  const double f = root * root;
  if (f < -kFidelityClamp || f > 1.0 + kFidelityClamp)
    throw Error(ErrorCode::InvalidDensityMatrix, "fidelity " + std::to_string(f) + " outside [0, 1]");
  return std::clamp(f, 0.0, 1.0);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  return trace_norm_hermitian(rho.matrix() - sigma.matrix());
}

double fvdg_margin(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return std::sqrt(1.0 - fidelity(rho, sigma)) - 0.5 * trace_distance(rho, sigma);
}

double dpi_margin(const DensityMatrix& rho, const DensityMatrix& sigma, std::size_t traced_factor) {
  require_same_dim(rho, sigma);
  if (rho.shape().size() != 2 || !(rho.shape() == sigma.shape()))
    throw Error(ErrorCode::ShapeMismatch, "data processing check needs a shared two-factor shape");
  if (traced_factor > 1) throw Error(ErrorCode::BadFactorIndex, "traced factor must be 0 or 1");
  const std::array<std::size_t, 1> keep{1 - traced_factor};
  return fidelity(partial_trace(rho, keep), partial_trace(sigma, keep)) - fidelity(rho, sigma);
}

double lp_norm(const RealVector& v, double p) {
  if (std::isinf(p)) return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidConfig, "p-norm needs p >= 1");
  const double scale = v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v(i)) / scale, p);
  return scale * std::pow(acc, 1.0 / p);
}

double holder_lambda_bound(const RealVector& potential, const RealVector& rho, double r) {
  if (!(r >= 1.0)) throw Error(ErrorCode::InvalidConfig, "Holder exponent r must be >= 1");
  const double s = r == 1.0 ? std::numeric_limits<double>::infinity() : r / (r - 1.0);
  return 2.0 * lp_norm(potential, 2.0 * r) * std::sqrt(lp_norm(rho, s));
}

}  // namespace mfcert
