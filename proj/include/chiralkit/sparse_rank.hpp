#pragma once

#include <cstdint>
#include <vector>

#include "chiralkit/rational.hpp"

namespace chiralkit {

// Column-major sparse rational matrix; column entries sorted by row.
struct SparseMat {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<std::vector<std::pair<std::int64_t, Rational>>> col;

  std::int64_t nnz() const {
    std::int64_t s = 0;
    for (const auto& c : col) s += static_cast<std::int64_t>(c.size());
    return s;
  }
};

// Exact rank: denominators cleared per column, then fraction-free (Bareiss)
// elimination over the integers with minimal-fill pivot selection.
std::int64_t sparse_rank(const SparseMat& m);

// Exact test that the product b * a vanishes (dimensions rows(a)=cols(b)).
bool product_is_zero(const SparseMat& b, const SparseMat& a);

}  // namespace chiralkit
