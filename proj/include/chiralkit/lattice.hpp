#pragma once

#include <vector>

#include "chiralkit/rational.hpp"

namespace chiralkit {

// The dual lattice pair of the quintic:
//   M = { a in Z^5 : sum a_i = 0 mod 5 },   N = Z^5 + Z (1/5,...,1/5),
// paired by the usual dot product. N elements are stored via their numerators
// (five integers, all congruent mod 5); the value of coordinate i is num_i / 5.

class MPoint {
 public:
  explicit MPoint(const IVec& coords);
  static MPoint zero() { return MPoint(IVec{0, 0, 0, 0, 0}); }

  const IVec& coords() const { return c_; }
  std::int64_t operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  std::int64_t coord_sum() const;

  friend MPoint operator+(const MPoint& a, const MPoint& b);
  bool operator==(const MPoint& o) const { return c_ == o.c_; }
  auto operator<=>(const MPoint& o) const { return c_ <=> o.c_; }

 private:
  IVec c_;
};

class NPoint {
 public:
  explicit NPoint(const IVec& numerators);
  static NPoint zero() { return NPoint(IVec{0, 0, 0, 0, 0}); }
  static NPoint from_integer_vector(const IVec& v);  // v itself, i.e. numerators 5*v

  const IVec& numerators() const { return n_; }
  Rational coord(int i) const {
    Rational q(n_[static_cast<std::size_t>(i)], 5);
    q.canonicalize();
    return q;
  }
  std::int64_t numerator_sum() const;
  bool in_dual_cone() const;  // all numerators >= 0

  friend NPoint operator+(const NPoint& a, const NPoint& b);
  bool operator==(const NPoint& o) const { return n_ == o.n_; }
  auto operator<=>(const NPoint& o) const { return n_ <=> o.n_; }

 private:
  IVec n_;
};

class MQPoint {
 public:
  explicit MQPoint(QVec coords) : c_(std::move(coords)) {}
  explicit MQPoint(const MPoint& m);
  static MQPoint unit(int i);

  const QVec& coords() const { return c_; }
  const Rational& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  bool operator==(const MQPoint& o) const { return c_ == o.c_; }

 private:
  QVec c_;
};

Rational pairing(const MPoint& m, const NPoint& n);
Rational pairing(const MQPoint& m, const NPoint& n);
std::int64_t pairing_int(const MPoint& m, const NPoint& n);  // throws if not integral

// K-degree a.deg^v of a in K, and K^v-degree deg.b of b in K^v.
std::int64_t degree_K(const MPoint& a);
std::int64_t degree_Kdual(const NPoint& b);

// Fixed environment: deg, deg^v, the vertices v_i = e_i of the dual simplex and
// the dual basis m_i of M_Q (m_i . v_j = delta_ij).
class LatticeEnv {
 public:
  LatticeEnv();
  const MPoint& deg() const { return deg_; }
  const NPoint& degv() const { return degv_; }
  const NPoint& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  const MQPoint& dual_basis(int i) const { return dual_[static_cast<std::size_t>(i)]; }

 private:
  MPoint deg_;
  NPoint degv_;
  std::vector<NPoint> vertices_;
  std::vector<MQPoint> dual_;
};

const LatticeEnv& lattice_env();

// Lattice points of k*Delta: a in M, all coords >= 0, a.deg^v = k.
// Lexicographic order on coordinate vectors.
std::vector<MPoint> enum_graded_K(int k);

// Lattice points of l*Delta^v: b in N, all numerators >= 0, deg.b = l.
// Lexicographic order on numerator vectors.
std::vector<NPoint> enum_graded_Kdual(int l);

// Whether n1 and n2 lie in a common maximal cone of the fan Sigma (restricted
// to K^v). Throws std::invalid_argument if an argument is outside K^v.
//
// Criterion: the maximal cones are C_i = R deg^v + sum_{j != i} R_{>=0} v_j.
// Writing n = t deg^v + sum_{j != i} c_j v_j coordinatewise gives n_i = t/5 and
// n_j = t/5 + c_j, so n in C_i iff n_j >= n_i for all j, i.e. i is an argmin
// coordinate of n. Hence two points share a cone iff their argmin sets meet.
bool same_cone(const NPoint& n1, const NPoint& n2);

// Argmin coordinate set used by the same_cone criterion (indices of minimal
// numerator). Exposed so tests can cross-check against direct cone membership.
std::vector<int> argmin_coords(const NPoint& n);

}  // namespace chiralkit
