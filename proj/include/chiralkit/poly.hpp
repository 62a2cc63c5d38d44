#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chiralkit/lattice.hpp"
#include "chiralkit/rational.hpp"

namespace chiralkit {

using Exponents = IVec;  // nonnegative entries

// Homogeneous polynomial in x_0..x_4 with exact rational coefficients, stored
// sparsely as exponent vector -> nonzero coefficient.
class Poly {
 public:
  explicit Poly(int degree) : degree_(degree) {}
  static Poly monomial(const Exponents& e, const Rational& c);
  static Poly zero(int degree) { return Poly(degree); }

  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  Rational coefficient(const Exponents& e) const;

  void add_term(const Exponents& e, const Rational& c);

  Poly partial_derivative(int i) const;   // degree drops by one
  Poly multiply_by_variable(int i) const; // degree rises by one

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Rational& c, const Poly& p);
  bool operator==(const Poly& o) const { return degree_ == o.degree_ && terms_ == o.terms_; }

 private:
  int degree_;
  std::map<Exponents, Rational> terms_;
};

// The five degree-5 polynomials F^i = x_i R^i of a (0,2) model. The support
// condition F^i|_{x_i=0} = 0 is guaranteed by the conversion constructors and
// checked by validate(); from_terms performs no support check so that the
// differential checker can be pointed at deliberately broken data.
class FivePolys {
 public:
  static FivePolys from_terms(std::array<Poly, kRank> F);

  const Poly& operator[](int i) const { return F_[static_cast<std::size_t>(i)]; }

  // Returns the first violation (i, exponent vector with e_i = 0), if any.
  std::optional<std::pair<int, Exponents>> support_violation() const;
  bool validate() const { return !support_violation().has_value(); }

  bool operator==(const FivePolys& o) const { return F_ == o.F_; }

 private:
  explicit FivePolys(std::array<Poly, kRank> F) : F_(std::move(F)) {}
  std::array<Poly, kRank> F_;
};

// g-parameters: one coefficient per lattice point of Delta^v.
class GParams {
 public:
  explicit GParams(std::map<NPoint, Rational> values);
  static GParams constant(const Rational& c);

  const Rational& at(const NPoint& n) const;
  const std::map<NPoint, Rational>& values() const { return values_; }

 private:
  std::map<NPoint, Rational> values_;
};

// F^i = x_i d_i f for a degree-5 potential f.
FivePolys from_potential(const Poly& f);

// Witten data: G of degree 5 and the products x_i G^i (degree 5, e_i >= 1),
// subject to sum_i x_i G^i = 0. F^i = x_i d_i G + x_i G^i.
FivePolys from_witten(const Poly& G, const std::array<Poly, kRank>& xG);

// (1/5) sum_i F^i.
Poly recover_G(const FivePolys& F);

// One term of the differential D_{(F.),g}.
struct DifferentialTerm {
  enum class Kind { M, N };
  Kind kind;
  MPoint m = MPoint::zero();  // momentum, Kind::M
  int fermion_index = -1;     // dual-basis fermion m_i, Kind::M
  NPoint n = NPoint::zero();  // momentum and fermion label, Kind::N
  Rational coefficient;
};

std::vector<DifferentialTerm> differential_terms(const FivePolys& F, const GParams& g);

// Built-in Fermat (2,2) model: f = sum_j x_j^5, so F^i = 5 x_i^5.
FivePolys fermat_model();
GParams generic_g();  // all six coefficients 1

}  // namespace chiralkit
