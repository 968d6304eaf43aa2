#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mfcert/error.hpp"
#include "mfcert/linalg.hpp"
#include "tensor_index.hpp"

namespace mfcert {

// ---------------------------------------------------------------------------
// TensorShape
// ---------------------------------------------------------------------------

TensorShape::TensorShape(std::vector<std::size_t> factors) : factors_(std::move(factors)) {
  dim_ = 1;
  for (std::size_t d : factors_) {
    if (d == 0) throw Error(ErrorCode::ShapeMismatch, "tensor factor of dimension 0");
    dim_ *= d;
  }
}

TensorShape::TensorShape(std::initializer_list<std::size_t> factors)
    : TensorShape(std::vector<std::size_t>(factors)) {}

TensorShape TensorShape::uniform(std::size_t d, std::size_t count) {
  return TensorShape(std::vector<std::size_t>(count, d));
}

std::vector<std::size_t> TensorShape::strides() const {
  std::vector<std::size_t> s(factors_.size(), 1);
  for (std::size_t j = factors_.size(); j-- > 1;) s[j - 1] = s[j] * factors_[j];
  return s;
}

std::vector<std::size_t> TensorShape::unflatten(std::size_t index) const {
  std::vector<std::size_t> out(factors_.size());
  for (std::size_t j = factors_.size(); j-- > 0;) {
    out[j] = index % factors_[j];
    index /= factors_[j];
  }
  return out;
}

std::size_t TensorShape::flatten(std::span<const std::size_t> multi_index) const {
  if (multi_index.size() != factors_.size())
    throw Error(ErrorCode::ShapeMismatch, "multi-index rank does not match shape");
  std::size_t index = 0;
  for (std::size_t j = 0; j < factors_.size(); ++j) {
    if (multi_index[j] >= factors_[j])
      throw Error(ErrorCode::ShapeMismatch, "multi-index component out of range");
    index = index * factors_[j] + multi_index[j];
  }
  return index;
}

TensorShape TensorShape::select(std::span<const std::size_t> which) const {
  std::vector<std::size_t> out;
  out.reserve(which.size());
  for (std::size_t j : which) {
    if (j >= factors_.size())
      throw Error(ErrorCode::BadFactorIndex, "factor " + std::to_string(j) + " out of range");
    out.push_back(factors_[j]);
  }
  return TensorShape(std::move(out));
}

// ---------------------------------------------------------------------------
// PureState / DensityMatrix
// ---------------------------------------------------------------------------

PureState::PureState(ComplexVector amplitudes, TensorShape shape)
    : amplitudes_(std::move(amplitudes)), shape_(std::move(shape)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != shape_.dim())
    throw Error(ErrorCode::ShapeMismatch, "state length does not match its tensor shape");
  if (!amplitudes_.allFinite()) throw Error(ErrorCode::InvalidState, "non-finite amplitude");
  const double defect = std::abs(amplitudes_.norm() - 1.0);
  if (defect > kNormTolerance)
    throw Error(ErrorCode::InvalidState, "state not normalized (|norm - 1| = " +
                                             std::to_string(defect) + ")");
}

PureState PureState::normalized(ComplexVector amplitudes, TensorShape shape) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n))
    throw Error(ErrorCode::InvalidState, "cannot normalize a zero or non-finite vector");
  amplitudes /= n;
  return PureState(std::move(amplitudes), std::move(shape));
}

DensityMatrix::DensityMatrix(const ComplexMatrix& matrix, TensorShape shape,
                             const DensityTolerance& tol)
    : shape_(std::move(shape)) {
  if (matrix.rows() != matrix.cols() || static_cast<std::size_t>(matrix.rows()) != shape_.dim())
    throw Error(ErrorCode::ShapeMismatch, "density matrix does not match its tensor shape");
  if (!matrix.allFinite()) throw Error(ErrorCode::InvalidDensityMatrix, "non-finite entry");
  hermiticity_defect_ = mfcert::hermiticity_defect(matrix);
  if (hermiticity_defect_ > tol.hermiticity)
    throw Error(ErrorCode::InvalidDensityMatrix,
                "not Hermitian (defect " + std::to_string(hermiticity_defect_) + ")");
  matrix_ = 0.5 * (matrix + matrix.adjoint());
  trace_defect_ = std::abs(matrix_.trace().real() - 1.0);
  if (trace_defect_ > tol.trace)
    throw Error(ErrorCode::InvalidDensityMatrix,
                "trace differs from 1 by " + std::to_string(trace_defect_));
  min_eigenvalue_ = herm_eigenvalues(matrix_)(0);
  if (min_eigenvalue_ < tol.min_eigenvalue)
    throw Error(ErrorCode::InvalidDensityMatrix,
                "negative eigenvalue " + std::to_string(min_eigenvalue_));
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  DensityMatrix out;
  const ComplexVector& v = psi.amplitudes();
  out.matrix_ = v * v.adjoint();
  out.shape_ = psi.shape();
  out.hermiticity_defect_ = 0.0;
  out.trace_defect_ = std::abs(out.matrix_.trace().real() - 1.0);
  out.min_eigenvalue_ = 0.0;
  if (psi.dim() == 1) out.min_eigenvalue_ = 1.0;
  return out;
}

// ---------------------------------------------------------------------------
// Kronecker products
// ---------------------------------------------------------------------------

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexMatrix kron_power(const ComplexMatrix& a, std::size_t count) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (std::size_t i = 0; i < count; ++i) out = kron(out, a);
  return out;
}

ComplexVector kron_power(const ComplexVector& a, std::size_t count) {
  ComplexVector out = ComplexVector::Ones(1);
  for (std::size_t i = 0; i < count; ++i) out = kron(out, a);
  return out;
}

// ---------------------------------------------------------------------------
// Reshaping
// ---------------------------------------------------------------------------

namespace detail {

FactorSplit::FactorSplit(const TensorShape& shape, std::span<const std::size_t> row_factors) {
  const std::size_t m = shape.size();
  std::vector<bool> used(m, false);
  for (std::size_t f : row_factors) {
    if (f >= m)
      throw Error(ErrorCode::BadFactorIndex, "factor " + std::to_string(f) + " out of range");
    if (used[f])
      throw Error(ErrorCode::BadFactorIndex, "factor " + std::to_string(f) + " repeated");
    used[f] = true;
  }
  std::vector<std::size_t> col_factors;
  for (std::size_t f = 0; f < m; ++f)
    if (!used[f]) col_factors.push_back(f);

  const auto strides = shape.strides();
  auto offsets = [&](std::span<const std::size_t> which, std::size_t& count) {
    count = 1;
    for (std::size_t f : which) count *= shape[f];
    std::vector<std::size_t> off(count, 0);
    // Enumerate the sub-multi-index big-endian over `which`.
    std::size_t block = 1;
    for (std::size_t k = which.size(); k-- > 0;) {
      const std::size_t f = which[k];
      for (std::size_t idx = 0; idx < count; ++idx) off[idx] += ((idx / block) % shape[f]) * strides[f];
      block *= shape[f];
    }
    return off;
  };
  row_offset = offsets(row_factors, rows);
  col_offset = offsets(col_factors, cols);
}

}  // namespace detail

ComplexMatrix tensor_to_matrix(const ComplexVector& psi, const TensorShape& shape,
                               std::span<const std::size_t> row_factors) {
  if (static_cast<std::size_t>(psi.size()) != shape.dim())
    throw Error(ErrorCode::ShapeMismatch, "vector length does not match shape");
  const detail::FactorSplit split(shape, row_factors);
  ComplexMatrix m(split.rows, split.cols);
  for (std::size_t c = 0; c < split.cols; ++c)
    for (std::size_t r = 0; r < split.rows; ++r)
      m(r, c) = psi(split.row_offset[r] + split.col_offset[c]);
  return m;
}

ComplexVector matrix_to_tensor(const ComplexMatrix& m, const TensorShape& shape,
                               std::span<const std::size_t> row_factors) {
  const detail::FactorSplit split(shape, row_factors);
  if (static_cast<std::size_t>(m.rows()) != split.rows ||
      static_cast<std::size_t>(m.cols()) != split.cols)
    throw Error(ErrorCode::ShapeMismatch, "matrix does not match the factor split");
  ComplexVector psi(shape.dim());
  for (std::size_t c = 0; c < split.cols; ++c)
    for (std::size_t r = 0; r < split.rows; ++r)
      psi(split.row_offset[r] + split.col_offset[c]) = m(r, c);
  return psi;
}

ComplexVector apply_to_factors(const ComplexMatrix& op, const ComplexVector& psi,
                               const TensorShape& shape,
                               std::span<const std::size_t> factors) {
  ComplexMatrix block = tensor_to_matrix(psi, shape, factors);
  if (op.rows() != op.cols() || op.cols() != block.rows())
    throw Error(ErrorCode::ShapeMismatch, "operator does not act on the selected factors");
  return matrix_to_tensor(op * block, shape, factors);
}

}  // namespace mfcert
