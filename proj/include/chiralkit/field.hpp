#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chiralkit/coeff.hpp"
#include "chiralkit/lattice.hpp"

namespace chiralkit {

// Generator factors of a normal-ordered monomial. Two free-field families:
//
//  * local-coordinate fields a_i, b^i, phi^i, psi_i of the chiral de Rham
//    complex (indices follow the paper's 1..n+1 convention in local models);
//    undifferentiated b^i always lives in the coefficient as the coordinate
//    function y_i, so BDeriv factors carry derivative order >= 1;
//  * lattice fields m^bos/ferm, n^bos/ferm, expanded over the unit bases
//    e_0..e_4 of M_Q and N_Q (index 0..4), so linear relations between labels
//    are canonical.
//
// The two families are mutually nonsingular.
enum class Gen { A, BDeriv, Phi, Psi, MBos, MFerm, NBos, NFerm };

bool is_fermionic(Gen g);
std::string gen_name(Gen g);

struct Factor {
  Gen kind;
  int index;
  int deriv = 0;  // worldsheet derivative order

  auto operator<=>(const Factor&) const = default;
};

// Lattice momentum (m, n) in M + N carried by e^{int (m,n)^bos}.
struct Momentum {
  MPoint m = MPoint::zero();
  NPoint n = NPoint::zero();

  bool is_zero() const { return m == MPoint::zero() && n == NPoint::zero(); }
  friend Momentum operator+(const Momentum& a, const Momentum& b) { return {a.m + b.m, a.n + b.n}; }
  bool operator==(const Momentum&) const = default;
  auto operator<=>(const Momentum&) const = default;
};

// <x1, x2> = m1.n2 + m2.n1 (always an integer on M + N).
std::int64_t momentum_pairing(const Momentum& a, const Momentum& b);

// <x, unit label>: rational in general (e.g. deg^v has M-coordinates 1/5).
Rational momentum_label_pairing(const Momentum& x, Gen family, int index);

// Two-cocycle on M + N: bimultiplicative, eps(B_i,B_j) = (-1)^{<B_i,B_j>} for
// basis elements with i > j (M-basis before N-basis), 1 otherwise. Satisfies
// eps(x,y) = (-1)^{<x,y>} eps(y,x) because <x,x> is even.
int cocycle_sign(const Momentum& a, const Momentum& b);

// One normal-ordered (Wick) monomial: coeff(b) * factors * e^{int momentum}.
struct NormalTerm {
  CoeffFn coeff;
  std::vector<Factor> factors;  // canonically sorted
  Momentum momentum;

  auto key() const { return std::tie(momentum, factors); }
  bool operator==(const NormalTerm&) const = default;
};

// Sorts factors into canonical order; returns the fermionic reordering sign,
// or nullopt when two identical fermionic factors collide (the term is zero).
std::optional<int> canonicalize_factors(std::vector<Factor>& factors);

class FieldExpr {
 public:
  FieldExpr() = default;
  static FieldExpr term(CoeffFn coeff, std::vector<Factor> factors, Momentum momentum = {});

  bool is_zero() const { return terms_.empty(); }
  const std::vector<NormalTerm>& terms() const { return terms_; }

  friend FieldExpr operator+(const FieldExpr& a, const FieldExpr& b);
  friend FieldExpr operator-(const FieldExpr& a, const FieldExpr& b);
  friend FieldExpr operator*(const CoeffFn& c, const FieldExpr& e);
  FieldExpr& operator+=(const FieldExpr& o);
  bool operator==(const FieldExpr& o) const { return terms_ == o.terms_; }

  std::string str() const;

 private:
  void add_term(NormalTerm t);
  void normalize();
  std::vector<NormalTerm> terms_;  // sorted by key, coefficients merged
};

// Convenience single-factor fields.
FieldExpr field_a(int i, int deriv = 0);
FieldExpr field_b(int i, int deriv = 0);  // deriv 0 becomes the coordinate y_i
FieldExpr field_phi(int i, int deriv = 0);
FieldExpr field_psi(int i, int deriv = 0);
FieldExpr field_mbos(const MQPoint& label, int deriv = 0);
FieldExpr field_mferm(const MQPoint& label, int deriv = 0);
FieldExpr field_nbos(const NPoint& label, int deriv = 0);
FieldExpr field_nferm(const NPoint& label, int deriv = 0);
FieldExpr field_exp(const Momentum& x);

// Worldsheet derivative: Leibniz over factors, chain rule on the coefficient
// (adds (b^k)' factors), and d e^{int x} = x^bos e^{int x}.
FieldExpr derivative(const NormalTerm& t);
FieldExpr derivative(const FieldExpr& e);

}  // namespace chiralkit
