#pragma once

#include <vector>

#include "srn/types.hpp"

namespace srn {

// Exact rank of an integer matrix (rows of equal length) over the rationals,
// by fraction-free Gaussian elimination with __int128 intermediates.
int integer_rank(const std::vector<std::vector<Count>>& rows);

// Integer basis of {w : r . w = 0 for every row r of `rows`}. Each basis
// vector is primitive (entries coprime) with the first nonzero entry
// positive; the basis order is deterministic.
std::vector<std::vector<Count>> integer_null_space(
    const std::vector<std::vector<Count>>& rows, std::size_t n_cols);

}  // namespace srn
