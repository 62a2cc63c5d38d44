#pragma once

#include <array>
#include <string>
#include <vector>

#include "chiralkit/chiral_complex.hpp"
#include "chiralkit/poly.hpp"

namespace chiralkit {
namespace oracle {

// Brute-force cross-checks for the main engines. Shares only the lattice
// types/enumeration and Poly with the rest of the library; matrices, bases
// and eliminations here are written independently (plain rational Gaussian
// elimination, no blocking, no fraction-free tricks).

struct JacobianReport {
  int d_max = 0;
  std::vector<std::int64_t> dims;  // degree 0 .. d_max

  std::string to_json() const;
};

// Graded dimensions of C[x_0..x_4] / <R^0..R^4> for degree-4 inputs R^i.
JacobianReport jacobian_dims(const std::array<Poly, kRank>& R, int d_max);

// Same contract as cohomology_dims, computed naively: full bases, one
// unblocked elimination per degree (per-w ranks read off the pivot columns),
// internal additivity check. Refuses degrees with more than 200000 basis
// elements.
GradedDimTable dense_cohomology_dims(const FivePolys& F, const GParams& g, Ring ring, int t_max);

}  // namespace oracle
}  // namespace chiralkit
