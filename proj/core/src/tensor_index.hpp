#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mfcert/linalg.hpp"

namespace mfcert::detail {

// Flat offsets for a row/column split of a tensor: element (r, c) of the
// reshaped matrix lives at flat index row_offset[r] + col_offset[c].
struct FactorSplit {
  FactorSplit(const TensorShape& shape, std::span<const std::size_t> row_factors);

  std::size_t rows = 1;
  std::size_t cols = 1;
  std::vector<std::size_t> row_offset;
  std::vector<std::size_t> col_offset;
};

}  // namespace mfcert::detail
