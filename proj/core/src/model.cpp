#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mfcert/error.hpp"
#include "mfcert/model.hpp"

namespace mfcert {
namespace {

constexpr double kHermitianTolerance = 1e-12;
constexpr double kEvenTolerance = 1e-12;

std::size_t ring_index(std::size_t x, std::size_t y, std::size_t sites) {
  return (x + sites - y) % sites;
}

std::size_t checked_power(std::size_t base, std::size_t exponent, std::size_t budget) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (out > budget / base)
      throw Error(ErrorCode::SizeBudgetExceeded,
                  std::to_string(base) + "^" + std::to_string(exponent) + " exceeds " +
                      std::to_string(budget));
    out *= base;
  }
  return out;
}

}  // namespace

TorusModel::TorusModel(ComplexMatrix h, RealVector potential)
    : h_(std::move(h)), potential_(std::move(potential)) {
  const Eigen::Index sites = potential_.size();
  if (sites < 2) throw Error(ErrorCode::InvalidConfig, "the ring needs at least 2 sites");
  if (h_.rows() != sites || h_.cols() != sites)
    throw Error(ErrorCode::ShapeMismatch, "h must be L x L");
  if (!h_.allFinite() || !potential_.allFinite())
    throw Error(ErrorCode::InvalidConfig, "non-finite model data");
  if ((h_ - h_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance)
    throw Error(ErrorCode::NonHermitianInput, "h is not Hermitian");
  h_ = 0.5 * (h_ + h_.adjoint());
  for (Eigen::Index k = 0; k < sites; ++k)
    if (std::abs(potential_(k) - potential_((sites - k) % sites)) > kEvenTolerance)
      throw Error(ErrorCode::InvalidConfig, "V is not even at k = " + std::to_string(k));
}

double TorusModel::pair(std::size_t x, std::size_t y) const {
  return potential_(static_cast<Eigen::Index>(ring_index(x, y, sites())));
}

ComplexMatrix laplacian_ring(std::size_t sites) {
  const auto n = static_cast<Eigen::Index>(sites);
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    h(x, x) += 2.0;
    h(x, (x + 1) % n) -= 1.0;
    h(x, (x + n - 1) % n) -= 1.0;
  }
  return h;
}

RealVector make_potential(std::size_t sites, const PotentialSpec& spec) {
  const auto n = static_cast<Eigen::Index>(sites);
  RealVector v = RealVector::Zero(n);
  switch (spec.kind) {
    case PotentialKind::Zero:
      break;
    case PotentialKind::Constant:
      v.setConstant(spec.lambda);
      break;
    case PotentialKind::Bounded:
      for (Eigen::Index k = 0; k < n; ++k)
        v(k) = spec.lambda * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
      break;
    case PotentialKind::Spiky:
      if (n > 0) v(0) = spec.v;
      break;
    case PotentialKind::CoulombLike:
      if (!(spec.delta > 0.0)) throw Error(ErrorCode::InvalidConfig, "regularizer delta must be positive");
      for (Eigen::Index k = 0; k < n; ++k) {
        const auto dist = static_cast<double>(std::min(k, n - k));
        v(k) = spec.lambda / (dist + spec.delta);
      }
      break;
    case PotentialKind::Explicit:
      if (spec.values.size() != sites)
        throw Error(ErrorCode::InvalidConfig, "explicit potential has " + std::to_string(spec.values.size()) +
                                                  " entries, expected " + std::to_string(sites));
      for (Eigen::Index k = 0; k < n; ++k) v(k) = spec.values[static_cast<std::size_t>(k)];
      break;
  }
  return v;
}

TorusModel make_model(std::size_t sites, OneBodyPreset h, const PotentialSpec& potential) {
  ComplexMatrix one_body = h == OneBodyPreset::Laplacian
                               ? laplacian_ring(sites)
                               : ComplexMatrix::Zero(static_cast<Eigen::Index>(sites), static_cast<Eigen::Index>(sites));
  return TorusModel(std::move(one_body), make_potential(sites, potential));
}

DensityProfile::DensityProfile(RealVector rho) : rho_(std::move(rho)) {
  if (!rho_.allFinite()) throw Error(ErrorCode::InvalidDensityMatrix, "non-finite density");
  if (rho_.size() > 0 && rho_.minCoeff() < -1e-12)
    throw Error(ErrorCode::InvalidDensityMatrix, "negative density " + std::to_string(rho_.minCoeff()));
  if (std::abs(rho_.sum() - 1.0) > 1e-10)
    throw Error(ErrorCode::InvalidDensityMatrix, "density sums to " + std::to_string(rho_.sum()));
}

DensityProfile density_of(const DensityMatrix& gamma) {
  return DensityProfile(gamma.matrix().diagonal().real());
}

DensityProfile density_of_lifted(const PureState& phi) {
  if (phi.shape().size() != 2) throw Error(ErrorCode::ShapeMismatch, "lifted state must have shape (L, a)");
  const auto sites = static_cast<Eigen::Index>(phi.shape()[0]);
  const auto aux = static_cast<Eigen::Index>(phi.shape()[1]);
  RealVector rho(sites);
  for (Eigen::Index x = 0; x < sites; ++x) rho(x) = phi.amplitudes().segment(x * aux, aux).squaredNorm();
  return DensityProfile(std::move(rho));
}

RealVector convolve(const TorusModel& model, const DensityProfile& rho) {
  const std::size_t sites = model.sites();
  if (rho.size() != sites) throw Error(ErrorCode::ShapeMismatch, "density length does not match L");
  RealVector w = RealVector::Zero(static_cast<Eigen::Index>(sites));
  for (std::size_t x = 0; x < sites; ++x) {
    double acc = 0.0;
    for (std::size_t y = 0; y < sites; ++y) acc += model.pair(x, y) * rho[y];
    w(static_cast<Eigen::Index>(x)) = acc;
  }
  return w;
}

ComplexMatrix build_HN(const TorusModel& model, std::size_t particles) {
  if (particles < 2) throw Error(ErrorCode::InvalidConfig, "N must be at least 2");
  const std::size_t sites = model.sites();
  const std::size_t dim = checked_power(sites, particles, kMaxDenseDim);
  const TensorShape shape = TensorShape::uniform(sites, particles);
  const auto strides = shape.strides();
  const double coupling = 1.0 / static_cast<double>(particles - 1);
  const ComplexMatrix& h = model.h();

  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    const auto x = shape.unflatten(col);
    double pair_sum = 0.0;
    for (std::size_t i = 0; i < particles; ++i)
      for (std::size_t j = i + 1; j < particles; ++j) pair_sum += model.pair(x[i], x[j]);
    out(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(col)) += coupling * pair_sum;
    for (std::size_t j = 0; j < particles; ++j) {
      const std::size_t base = col - x[j] * strides[j];
      for (std::size_t y = 0; y < sites; ++y) {
        const Complex entry = h(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x[j]));
        if (entry != 0.0) out(static_cast<Eigen::Index>(base + y * strides[j]), static_cast<Eigen::Index>(col)) += entry;
      }
    }
  }
  return out;
}

ComplexMatrix build_mean_field_generator(const TorusModel& model, const DensityProfile& rho) {
  ComplexMatrix g = model.h();
  g.diagonal() += convolve(model, rho).cast<Complex>();
  return g;
}

RealVector fluctuation_kernel(const TorusModel& model, const DensityProfile& rho) {
  const std::size_t sites = model.sites();
  const RealVector w = convolve(model, rho);
  RealVector d(static_cast<Eigen::Index>(sites * sites));
  for (std::size_t x1 = 0; x1 < sites; ++x1)
    for (std::size_t x2 = 0; x2 < sites; ++x2)
      d(static_cast<Eigen::Index>(x1 * sites + x2)) = model.pair(x1, x2) - w(static_cast<Eigen::Index>(x1));
  return d;
}

ComplexMatrix build_D(const TorusModel& model, const DensityProfile& rho, std::size_t aux_dim) {
  if (aux_dim == 0) throw Error(ErrorCode::ShapeMismatch, "auxiliary dimension must be positive");
  const std::size_t sites = model.sites();
  const std::size_t slot = sites * aux_dim;
  const std::size_t dim = checked_power(slot, 2, kMaxDenseDim);
  const RealVector d = fluctuation_kernel(model, rho);
  RealVector diagonal(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < slot; ++i)
    for (std::size_t j = 0; j < slot; ++j)
      diagonal(static_cast<Eigen::Index>(i * slot + j)) =
          d(static_cast<Eigen::Index>((i / aux_dim) * sites + j / aux_dim));
  return diagonal.cast<Complex>().asDiagonal();
}

double lambda_of(const TorusModel& model, const DensityProfile& rho) {
  const std::size_t sites = model.sites();
  const RealVector w = convolve(model, rho);
  double best = 0.0;
  for (std::size_t y = 0; y < sites; ++y) {
    double acc = 0.0;
    for (std::size_t x = 0; x < sites; ++x) {
      const double dev = model.pair(x, y) - w(static_cast<Eigen::Index>(x));
      acc += rho[x] * dev * dev;
    }
    best = std::max(best, acc);
  }
  return std::sqrt(best);
}

}  // namespace mfcert
