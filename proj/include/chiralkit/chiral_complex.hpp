#pragma once

#include <map>
#include <string>

#include "chiralkit/poly.hpp"
#include "chiralkit/sparse_rank.hpp"

namespace chiralkit {

// Graded pieces of C[(K+K^v)_0] (x) Lambda*M (A-ring) resp. Lambda*N (B-ring)
// and the differential of the chiral-ring complex. Basis elements are triples
// (a, b, S) with a in K, b in K^v, a.b = 0 (equivalently disjoint supports)
// and S an exterior multi-index over {0..4}; the cochain degree is
// t = a.deg^v + deg.b and the conserved charge is w = a.deg^v - |S| - deg.b
// in the A-ring (mirrored in the B-ring). Both differential summands raise t
// by exactly 1 (Delta.deg^v = deg.Delta^v = 1) and preserve w: the wedge
// summand adds 1 to both a-degree and |S|, the contraction summand adds 1 to
// the b-degree and removes 1 from |S|.

enum class Ring { A, B };

struct ChiralBasisElement {
  MPoint a;
  NPoint b;
  std::uint8_t exterior_mask;  // subset of {0..4}

  bool operator==(const ChiralBasisElement&) const = default;
};

// Packed basis key: 12 bits per a-coordinate and b-numerator, 5 bits of mask,
// ordered so that numeric comparison is lexicographic on (a, b, S).
using BasisKey = unsigned __int128;

BasisKey encode_basis(const ChiralBasisElement& e);
ChiralBasisElement decode_basis(BasisKey key);

// All basis keys of cochain degree t, sorted (= lexicographic on (a, b, S)).
const std::vector<BasisKey>& basis_keys(int t);

std::int64_t w_charge(const ChiralBasisElement& e, Ring ring);

struct GradedPiece {
  int t = 0;
  std::vector<ChiralBasisElement> basis;
  std::vector<std::int64_t> w;
};

GradedPiece basis_t(int t, Ring ring);

// Matrix of d_t : C_t -> C_{t+1} on the ordered bases.
SparseMat differential_matrix(int t, const FivePolys& F, const GParams& g, Ring ring);

// Exact check that d_{t+1} d_t = 0 for every consecutive pair available at
// this truncation (t = 0 .. t_max-2).
bool d_squared_zero(const FivePolys& F, const GParams& g, Ring ring, int t_max);

struct GradedDimTable {
  Ring ring = Ring::A;
  int t_max = 0;
  std::map<std::pair<int, std::int64_t>, std::int64_t> dims;  // (t, w) -> dim, t <= t_max-1
  std::map<int, std::int64_t> totals;                         // t -> sum over w
  std::map<std::int64_t, bool> stabilized;                    // per w (heuristic flag)

  bool operator==(const GradedDimTable& o) const {
    return ring == o.ring && t_max == o.t_max && dims == o.dims && totals == o.totals;
  }
  std::string to_json() const;
  std::string to_tsv() const;
};

// Cohomology dimensions for t <= t_max - 1, computed blockwise per conserved
// w (dim H^t_w = dim C_t_w - rank d_t_w - rank d_{t-1}_w). Blocks may be
// processed by several threads; the result does not depend on thread count.
GradedDimTable cohomology_dims(const FivePolys& F, const GParams& g, Ring ring, int t_max,
                               int threads = 1);

}  // namespace chiralkit
