#include <algorithm>
#include <string>
#include <vector>

#include "mfcert/error.hpp"
#include "mfcert/linalg.hpp"
#include "tensor_index.hpp"

namespace mfcert {
namespace {

std::vector<std::size_t> normalized_keep(std::span<const std::size_t> keep, const TensorShape& shape) {
  if (keep.empty()) throw Error(ErrorCode::BadFactorIndex, "partial trace must keep at least one factor");
  std::vector<std::size_t> k(keep.begin(), keep.end());
  std::sort(k.begin(), k.end());
  if (std::adjacent_find(k.begin(), k.end()) != k.end())
    throw Error(ErrorCode::BadFactorIndex, "repeated factor in keep set");
  if (k.back() >= shape.size())
    throw Error(ErrorCode::BadFactorIndex,
                "factor " + std::to_string(k.back()) + " out of range for a " +
                    std::to_string(shape.size()) + "-factor shape");
  return k;
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& rho, const TensorShape& shape,
                            std::span<const std::size_t> keep) {
  if (rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != shape.dim())
    throw Error(ErrorCode::ShapeMismatch, "operator does not match its tensor shape");
  const auto k = normalized_keep(keep, shape);
  const detail::FactorSplit split(shape, k);
  ComplexMatrix out(split.rows, split.rows);
  for (std::size_t j = 0; j < split.rows; ++j)
    for (std::size_t i = 0; i < split.rows; ++i) {
      Complex s = 0.0;
      for (std::size_t c = 0; c < split.cols; ++c)
        s += rho(split.row_offset[i] + split.col_offset[c], split.row_offset[j] + split.col_offset[c]);
      out(i, j) = s;
    }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const auto k = normalized_keep(keep, rho.shape());
  return DensityMatrix(partial_trace(rho.matrix(), rho.shape(), k), rho.shape().select(k));
}

DensityMatrix partial_trace(const PureState& psi, std::span<const std::size_t> keep) {
  const auto k = normalized_keep(keep, psi.shape());
  const ComplexMatrix m = tensor_to_matrix(psi.amplitudes(), psi.shape(), k);
  return DensityMatrix(m * m.adjoint(), psi.shape().select(k));
}

double covariance_check(const ComplexMatrix& u, const DensityMatrix& t) {
  const TensorShape& shape = t.shape();
  if (shape.size() != 2) throw Error(ErrorCode::ShapeMismatch, "covariance check needs a two-factor operator");
  if (u.rows() != u.cols() || static_cast<std::size_t>(u.rows()) != shape[0])
    throw Error(ErrorCode::ShapeMismatch, "unitary does not act on the first factor");
  const std::size_t first[] = {0};
  const ComplexMatrix lifted = kron(u, ComplexMatrix::Identity(shape[1], shape[1]));
  const ComplexMatrix lhs = partial_trace(lifted * t.matrix() * lifted.adjoint(), shape, first);
  const ComplexMatrix rhs = u * partial_trace(t.matrix(), shape, first) * u.adjoint();
  const ComplexMatrix diff = lhs - rhs;
  return trace_norm_hermitian(0.5 * (diff + diff.adjoint()));
}

}  // namespace mfcert
