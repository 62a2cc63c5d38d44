#pragma once

// Independent cone-membership oracle for the fan Sigma: membership in the
// maximal cone C_i = R deg^v + sum_{j != i} R_{>=0} v_j is decided by solving
// the 5x5 linear system over Q with a generic Gaussian solver, not by the
// argmin shortcut the library uses.

#include <array>
#include <optional>

#include "chiralkit/lattice.hpp"

namespace chiralkit::testsupport {

using Mat = std::array<std::array<Rational, 6>, 5>;  // augmented 5x6

inline std::optional<std::array<Rational, 5>> solve(Mat m) {
  for (int col = 0; col < 5; ++col) {
    int piv = -1;
    for (int r = col; r < 5; ++r)
      if (m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return std::nullopt;  // singular (never happens for a basis)
    std::swap(m[static_cast<std::size_t>(col)], m[static_cast<std::size_t>(piv)]);
    auto& prow = m[static_cast<std::size_t>(col)];
    Rational p = prow[static_cast<std::size_t>(col)];
    for (int c = col; c < 6; ++c) prow[static_cast<std::size_t>(c)] /= p;
    for (int r = 0; r < 5; ++r) {
      if (r == col) continue;
      Rational f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
      if (f == 0) continue;
      for (int c = col; c < 6; ++c)
        m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
            f * prow[static_cast<std::size_t>(c)];
    }
  }
  std::array<Rational, 5> x;
  for (int r = 0; r < 5; ++r) x[static_cast<std::size_t>(r)] = m[static_cast<std::size_t>(r)][5];
  return x;
}

// n in C_i iff n = t deg^v + sum_{j != i} c_j v_j with all c_j >= 0 (t free).
inline bool in_cone_by_feasibility(const NPoint& n, int i) {
  const auto& env = lattice_env();
  Mat m;
  for (int row = 0; row < 5; ++row) {
    // column 0: deg^v, columns 1..4: the v_j with j != i
    m[static_cast<std::size_t>(row)][0] = env.degv().coord(row);
    int col = 1;
    for (int j = 0; j < 5; ++j) {
      if (j == i) continue;
      m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] = env.vertex(j).coord(row);
      ++col;
    }
    m[static_cast<std::size_t>(row)][5] = n.coord(row);
  }
  auto x = solve(m);
  if (!x) return false;
  for (int k = 1; k < 5; ++k)
    if ((*x)[static_cast<std::size_t>(k)] < 0) return false;
  return true;
}

inline bool same_cone_by_feasibility(const NPoint& n1, const NPoint& n2) {
  for (int i = 0; i < 5; ++i)
    if (in_cone_by_feasibility(n1, i) && in_cone_by_feasibility(n2, i)) return true;
  return false;
}

}  // namespace chiralkit::testsupport
