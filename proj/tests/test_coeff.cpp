#include "chiralkit/coeff.hpp"
#include "doctest.h"

using namespace chiralkit;

TEST_CASE("coefficient ring arithmetic and derivations") {
  int P = declare_symbol("testP", {1, 2}, true);
  int Q = declare_symbol("testQ", {1, 2});

  CoeffFn p = CoeffFn::symbol(P);
  CoeffFn q = CoeffFn::symbol(Q);
  CoeffFn y1 = CoeffFn::coordinate(1);

  CHECK((p * CoeffFn::symbol_pow(P, -1)) == CoeffFn(Rational(1)));
  CHECK((p + q) * (p - q) == p * p - q * q);
  CHECK((y1 * p).derivative(1) == p + y1 * p.derivative(1));

  // d_j(P^{-1}) = -P^{-2} d_j P
  CoeffFn pinv = CoeffFn::symbol_pow(P, -1);
  CHECK(pinv.derivative(1) ==
        CoeffFn(Rational(-1)) * CoeffFn::symbol_pow(P, -2) * p.derivative(1));

  // mixed partials commute; derivatives outside the dependence set vanish
  CHECK(q.derivative(1).derivative(2) == q.derivative(2).derivative(1));
  CHECK(q.derivative(3).is_zero());
  CHECK(y1.derivative(2).is_zero());
  CHECK(y1.derivative(1) == CoeffFn(Rational(1)));

  CHECK_THROWS_AS(CoeffFn::symbol_pow(Q, -1), std::invalid_argument);
  CHECK_THROWS_AS(declare_symbol("testP", {1}, true), std::invalid_argument);
}

TEST_CASE("constant extraction") {
  CoeffFn c(Rational(3, 4));
  CHECK(c.is_constant());
  CHECK(c.constant_value() == Rational(3, 4));
  CHECK(CoeffFn().is_zero());
  CHECK(CoeffFn().constant_value() == 0);
  int R = declare_symbol("testR", {1});
  CHECK_FALSE(CoeffFn::symbol(R).is_constant());
}
