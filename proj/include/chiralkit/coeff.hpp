#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "chiralkit/rational.hpp"

namespace chiralkit {

// Commutative differential ring for OPE coefficients: rational constants,
// coordinate functions y_j, declared function symbols with their iterated
// coordinate derivatives, and inverses of symbols declared invertible.
// d_j acts as a derivation with d_j y_k = delta_jk and d_j(f^-1) = -f^-2 d_j f.

// Declares (or re-finds) a function symbol. depends is the set of coordinate
// indices the symbol may depend on; derivatives outside it vanish.
int declare_symbol(const std::string& name, const std::set<int>& depends, bool invertible = false);
const std::string& symbol_name(int id);
bool symbol_invertible(int id);
const std::set<int>& symbol_depends(int id);

struct Atom {
  enum class Kind { Coordinate, Function };
  Kind kind;
  int index;                // coordinate index, or symbol id
  std::vector<int> derivs;  // sorted multiset of coordinate derivative indices

  auto operator<=>(const Atom&) const = default;
};

class CoeffFn {
 public:
  using Monomial = std::map<Atom, int>;  // atom -> exponent (negative only for invertible symbols)

  CoeffFn() = default;
  CoeffFn(const Rational& c);  // NOLINT: implicit constant embedding
  CoeffFn(std::int64_t c) : CoeffFn(Rational(c)) {}
  static CoeffFn coordinate(int j);
  static CoeffFn symbol(int id);
  static CoeffFn symbol_pow(int id, int exponent);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_value() const;  // throws if not constant
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  CoeffFn derivative(int j) const;
  std::set<int> dependency_coords() const;  // coords with possibly nonzero derivative

  friend CoeffFn operator+(const CoeffFn& a, const CoeffFn& b);
  friend CoeffFn operator-(const CoeffFn& a, const CoeffFn& b);
  friend CoeffFn operator*(const CoeffFn& a, const CoeffFn& b);
  CoeffFn operator-() const;
  CoeffFn& operator+=(const CoeffFn& o);
  CoeffFn& operator*=(const CoeffFn& o);
  bool operator==(const CoeffFn& o) const { return terms_ == o.terms_; }
  auto operator<=>(const CoeffFn& o) const { return terms_ <=> o.terms_; }

  std::string str() const;

 private:
  void add(const Monomial& m, const Rational& c);
  std::map<Monomial, Rational> terms_;
};

}  // namespace chiralkit
