#include <algorithm>
#include <numeric>
#include <string>

#include "mfcert/error.hpp"
#include "mfcert/linalg.hpp"

namespace mfcert {

bool is_permutation(const Permutation& pi) {
  std::vector<bool> seen(pi.size(), false);
  for (std::size_t v : pi) {
    if (v >= pi.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

Permutation compose(const Permutation& pi, const Permutation& sigma) {
  if (pi.size() != sigma.size() || !is_permutation(pi) || !is_permutation(sigma))
    throw Error(ErrorCode::ShapeMismatch, "cannot compose permutations of different degree");
  Permutation out(pi.size());
  for (std::size_t j = 0; j < pi.size(); ++j) out[j] = pi[sigma[j]];
  return out;
}

Permutation inverse(const Permutation& pi) {
  if (!is_permutation(pi)) throw Error(ErrorCode::ShapeMismatch, "not a permutation");
  Permutation out(pi.size());
  for (std::size_t j = 0; j < pi.size(); ++j) out[pi[j]] = j;
  return out;
}

std::vector<Permutation> all_permutations(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Permutation> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<std::size_t> permutation_index_map(const Permutation& pi, std::size_t d) {
  if (!is_permutation(pi)) throw Error(ErrorCode::ShapeMismatch, "not a permutation");
  const std::size_t n = pi.size();
  const TensorShape shape = TensorShape::uniform(d, n);
  const auto strides = shape.strides();
  std::vector<std::size_t> map(shape.dim());
  std::vector<std::size_t> digits(n);
  for (std::size_t y = 0; y < shape.dim(); ++y) {
    std::size_t rest = y;
    for (std::size_t j = n; j-- > 0;) {
      digits[j] = rest % d;
      rest /= d;
    }
    std::size_t x = 0;
    for (std::size_t j = 0; j < n; ++j) x += digits[j] * strides[pi[j]];
    map[y] = x;
  }
  return map;
}

ComplexMatrix permutation_operator(const Permutation& pi, std::size_t d) {
  const TensorShape shape = TensorShape::uniform(d, pi.size());
  if (shape.dim() > kMaxDenseDim)
    throw Error(ErrorCode::SizeBudgetExceeded,
                "permutation operator of dimension " + std::to_string(shape.dim()));
  const auto map = permutation_index_map(pi, d);
  ComplexMatrix u = ComplexMatrix::Zero(shape.dim(), shape.dim());
  for (std::size_t y = 0; y < map.size(); ++y) u(map[y], y) = 1.0;
  return u;
}

ComplexVector permute_vector(const ComplexVector& psi, std::span<const std::size_t> index_map) {
  if (static_cast<std::size_t>(psi.size()) != index_map.size())
    throw Error(ErrorCode::ShapeMismatch, "index map does not match the vector");
  ComplexVector out(psi.size());
  for (std::size_t y = 0; y < index_map.size(); ++y) out(index_map[y]) = psi(y);
  return out;
}

ComplexMatrix conjugate_by_permutation(const ComplexMatrix& m, std::span<const std::size_t> index_map) {
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != index_map.size())
    throw Error(ErrorCode::ShapeMismatch, "index map does not match the operator");
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t c = 0; c < index_map.size(); ++c)
    for (std::size_t r = 0; r < index_map.size(); ++r) out(index_map[r], index_map[c]) = m(r, c);
  return out;
}

ComplexMatrix symmetrize(const ComplexMatrix& m, std::size_t d, std::size_t n) {
  const auto perms = all_permutations(n);
  ComplexMatrix acc = ComplexMatrix::Zero(m.rows(), m.cols());
  for (const auto& pi : perms) acc += conjugate_by_permutation(m, permutation_index_map(pi, d));
  return acc / static_cast<double>(perms.size());
}

double permutation_defect(const ComplexMatrix& m, std::size_t d, std::size_t n) {
  double worst = 0.0;
  for (const auto& pi : all_permutations(n))
    worst = std::max(worst, (conjugate_by_permutation(m, permutation_index_map(pi, d)) - m).norm());
  return worst;
}

}  // namespace mfcert
