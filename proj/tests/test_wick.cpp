#include <random>

#include "chiralkit/wick.hpp"
#include "doctest.h"

using namespace chiralkit;

namespace {

FieldExpr unit_expr() { return FieldExpr::term(CoeffFn(Rational(1)), {}); }

Momentum mmom(const IVec& v) { return Momentum{MPoint(v), NPoint::zero()}; }
Momentum nmom(const IVec& numerators) { return Momentum{MPoint::zero(), NPoint(numerators)}; }

// random small field in the lattice family; momenta stay in K + K^v so that
// pairing exponents are nonnegative and expansions stay shallow
FieldExpr random_lattice_field(std::mt19937_64& rng) {
  std::vector<Factor> factors;
  int nf = static_cast<int>(rng() % 3);
  for (int i = 0; i < nf; ++i) {
    Gen kinds[4] = {Gen::MBos, Gen::NBos, Gen::MFerm, Gen::NFerm};
    factors.push_back(Factor{kinds[rng() % 4], static_cast<int>(rng() % kRank),
                             static_cast<int>(rng() % 2)});
  }
  IVec mv{};
  std::int64_t s = 0;
  for (int i = 0; i + 1 < kRank; ++i) {
    mv[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(rng() % 2);
    s += mv[static_cast<std::size_t>(i)];
  }
  mv[kRank - 1] = (5 - s % 5) % 5;
  IVec nv{};
  std::int64_t res = static_cast<std::int64_t>(rng() % 2);
  for (int i = 0; i < kRank; ++i)
    nv[static_cast<std::size_t>(i)] = res + 5 * static_cast<std::int64_t>(rng() % 2);
  Momentum x{MPoint(mv), NPoint(nv)};
  if (rng() % 3 == 0) x = Momentum{};
  return FieldExpr::term(CoeffFn(Rational(static_cast<std::int64_t>(rng() % 5) + 1)), factors, x);
}

int parity(const FieldExpr& e) {
  if (e.is_zero()) return 0;
  int p = -1;
  for (const auto& t : e.terms()) {
    int q = 0;
    for (const auto& f : t.factors) q ^= is_fermionic(f.kind) ? 1 : 0;
    if (p == -1) p = q;
    if (p != q) throw std::logic_error("mixed parity field in test");
  }
  return p;
}

}  // namespace

TEST_CASE("defining OPEs of the local free fields") {
  auto o = ope(field_a(1), field_b(1));
  REQUIRE(o.poles.size() == 1);
  CHECK(o.poles.at(1) == unit_expr());

  CHECK(ope(field_b(1), field_a(1)).poles.at(1) == CoeffFn(Rational(-1)) * unit_expr());
  CHECK(ope(field_phi(2), field_psi(2)).poles.at(1) == unit_expr());
  CHECK(ope(field_psi(2), field_phi(2)).poles.at(1) == unit_expr());
  CHECK(ope(field_a(1), field_b(2)).nonsingular());
  CHECK(ope(field_phi(1), field_phi(1)).nonsingular());
  CHECK(ope(field_a(1), field_psi(1)).nonsingular());
}

TEST_CASE("lattice generator OPEs") {
  const auto& env = lattice_env();
  // m^bos(z) n^bos(w) ~ m.n / (z-w)^2
  auto o = ope(field_mbos(MQPoint(env.deg())), field_nbos(env.degv()));
  REQUIRE(o.poles.count(2) == 1);
  CHECK(o.poles.at(2) == CoeffFn(Rational(1)) * unit_expr());
  CHECK(o.poles.count(1) == 0);

  // fermion pole-1 coefficient equals m.n in both orders
  std::mt19937_64 rng(3);
  for (int t = 0; t < 25; ++t) {
    IVec mv{};
    std::int64_t s = 0;
    for (int i = 0; i + 1 < kRank; ++i) {
      mv[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(rng() % 7) - 3;
      s += mv[static_cast<std::size_t>(i)];
    }
    std::int64_t r = s % 5;
    if (r < 0) r += 5;
    mv[kRank - 1] = -r;
    MPoint m(mv);
    IVec nv{};
    std::int64_t res = static_cast<std::int64_t>(rng() % 5);
    for (int i = 0; i < kRank; ++i)
      nv[static_cast<std::size_t>(i)] = res + 5 * (static_cast<std::int64_t>(rng() % 5) - 2);
    NPoint n(nv);
    Rational mn = pairing(m, n);
    auto o1 = ope(field_mferm(MQPoint(m)), field_nferm(n));
    auto o2 = ope(field_nferm(n), field_mferm(MQPoint(m)));
    FieldExpr expected = CoeffFn(mn) * unit_expr();
    if (mn == 0) {
      CHECK(o1.nonsingular());
      CHECK(o2.nonsingular());
    } else {
      CHECK(o1.poles.at(1) == expected);
      CHECK(o2.poles.at(1) == expected);
    }
  }
}

TEST_CASE("composite-function rule") {
  int S = declare_symbol("wickF", {1, 2, 3});
  CoeffFn f = CoeffFn::symbol(S) * CoeffFn::coordinate(2);
  FieldExpr fb = FieldExpr::term(f, {});
  for (int i = 1; i <= 3; ++i) {
    FieldExpr res = residue_action(field_a(i), fb);
    CHECK(res == FieldExpr::term(f.derivative(i), {}));
  }
}

TEST_CASE("exponential pair law and cocycle") {
  const auto& env = lattice_env();
  Momentum deg_m{env.deg(), NPoint::zero()};
  Momentum degv_n{MPoint::zero(), env.degv()};

  auto o = ope(field_exp(deg_m), field_exp(degv_n));
  CHECK(o.nonsingular());
  REQUIRE(o.leading.has_value());
  CHECK(o.leading->first == 1);
  CHECK(o.leading->second.terms().size() == 1);
  CHECK(o.leading->second.terms()[0].momentum == deg_m + degv_n);

  auto o2 = ope(field_exp(mmom(IVec{5, 0, 0, 0, 0})), field_exp(nmom(IVec{5, 0, 0, 0, 0})));
  REQUIRE(o2.leading.has_value());
  CHECK(o2.leading->first == 5);

  auto o3 = ope(field_exp(deg_m), field_exp(mmom(IVec{1, 2, 0, 1, 1})));
  REQUIRE(o3.leading.has_value());
  CHECK(o3.leading->first == 0);

  // cocycle consistency over all basis pairs: eps(x,y) = (-1)^{<x,y>} eps(y,x)
  std::vector<Momentum> basis;
  IVec units[4] = {{1, -1, 0, 0, 0}, {0, 1, -1, 0, 0}, {0, 0, 1, -1, 0}, {0, 0, 0, 1, -1}};
  for (const auto& u : units) basis.push_back(mmom(u));
  basis.push_back(deg_m);
  for (int k = 0; k < 4; ++k) {
    IVec e{};
    e[static_cast<std::size_t>(k)] = 5;
    basis.push_back(nmom(e));
  }
  basis.push_back(degv_n);
  for (const auto& x : basis)
    for (const auto& y : basis) {
      int lhs = cocycle_sign(x, y);
      int rhs = cocycle_sign(y, x);
      int tw = momentum_pairing(x, y) % 2 ? -1 : 1;
      CHECK(lhs == tw * rhs);
    }
}

TEST_CASE("derivative operations") {
  // Leibniz through a normal product
  FieldExpr np = normal_product(field_phi(1), field_psi(1));
  FieldExpr dnp = derivative(np);
  FieldExpr expected = FieldExpr::term(CoeffFn(Rational(1)), {Factor{Gen::Phi, 1, 1}, Factor{Gen::Psi, 1, 0}}) +
                       FieldExpr::term(CoeffFn(Rational(1)), {Factor{Gen::Phi, 1, 0}, Factor{Gen::Psi, 1, 1}});
  CHECK(dnp == expected);

  // derivative of a lattice exponential
  Momentum x = mmom(IVec{1, 1, 1, 1, 1});
  FieldExpr de = derivative(field_exp(x));
  FieldExpr expect2;
  for (int k = 0; k < kRank; ++k)
    expect2 += FieldExpr::term(CoeffFn(Rational(1)), {Factor{Gen::MBos, k, 0}}, x);
  CHECK(de == expect2);
}

TEST_CASE("derivative compatibility of the OPE") {
  // With A(z)B(w) = sum_p C_p(w) (z-w)^p and w fixed, d_z gives
  // dA(z)B(w) = sum_p p C_p(w) (z-w)^{p-1}: the coefficient of (z-w)^q in
  // ope_expansion(dA, B) must equal (q+1) C_{q+1}. Exhaustive over generator
  // kinds, including exponentials.
  std::vector<FieldExpr> gens = {field_a(1), field_b(1, 1), field_phi(1), field_psi(1),
                                 field_mbos(MQPoint::unit(0)), field_mferm(MQPoint::unit(1)),
                                 field_nbos(lattice_env().vertex(0)),
                                 field_nferm(lattice_env().degv()),
                                 field_exp(mmom(IVec{2, 1, 1, 1, 0})),
                                 field_exp(nmom(IVec{6, 1, 1, 1, 1}))};
  for (const auto& A : gens)
    for (const auto& B : gens) {
      auto base = ope_expansion(A, B, 1);
      auto lhs = ope_expansion(derivative(A), B, 0);
      for (int q = -6; q <= 0; ++q) {
        FieldExpr want =
            base.count(q + 1) ? CoeffFn(Rational(q + 1)) * base.at(q + 1) : FieldExpr{};
        FieldExpr got = lhs.count(q) ? lhs.at(q) : FieldExpr{};
        CHECK(got == want);
      }
    }
}

TEST_CASE("locality: A(z)B(w) determines B(z)A(w)") {
  // B(z)A(w) coefficients D_q = (-1)^{|A||B|} sum_{p<=q} (-1)^p d^{q-p} C_p / (q-p)!
  std::mt19937_64 rng(17);
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    FieldExpr A = random_lattice_field(rng);
    FieldExpr B = random_lattice_field(rng);
    if (A.is_zero() || B.is_zero()) continue;
    int pa, pb;
    try {
      pa = parity(A);
      pb = parity(B);
    } catch (const std::logic_error&) {
      continue;
    }
    auto ab = ope_expansion(A, B, 0);
    auto ba = ope_expansion(B, A, 0);
    int sign = (pa * pb) % 2 ? -1 : 1;
    int p_min = ab.empty() ? 0 : ab.begin()->first;
    p_min = std::min(p_min, ba.empty() ? 0 : ba.begin()->first);
    for (int q = p_min; q <= 0; ++q) {
      FieldExpr want;
      for (int p = p_min; p <= q; ++p) {
        if (!ab.count(p)) continue;
        FieldExpr d = ab.at(p);
        Rational c(1);
        for (int t = 0; t < q - p; ++t) {
          d = derivative(d);
          c /= (t + 1);
        }
        if (p % 2) c = -c;
        want += CoeffFn(sign * c) * d;
      }
      FieldExpr got = ba.count(q) ? ba.at(q) : FieldExpr{};
      CHECK(got == want);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("bilinearity") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    FieldExpr A = random_lattice_field(rng), B = random_lattice_field(rng),
              C = random_lattice_field(rng);
    auto sum = ope_expansion(A + B, C, -1);
    auto pa = ope_expansion(A, C, -1);
    auto pb = ope_expansion(B, C, -1);
    for (int q = -8; q <= -1; ++q) {
      FieldExpr want = (pa.count(q) ? pa.at(q) : FieldExpr{}) + (pb.count(q) ? pb.at(q) : FieldExpr{});
      FieldExpr got = sum.count(q) ? sum.at(q) : FieldExpr{};
      CHECK(got == want);
    }
  }
}

TEST_CASE("zero mode weights and charges") {
  const auto& env = lattice_env();
  CHECK(zero_mode_weight(Momentum{}) == std::pair<std::int64_t, std::int64_t>{0, 0});
  CHECK(zero_mode_weight(Momentum{env.deg(), NPoint::zero()}) ==
        std::pair<std::int64_t, std::int64_t>{1, -1});
  CHECK(zero_mode_weight(Momentum{MPoint::zero(), env.degv()}) ==
        std::pair<std::int64_t, std::int64_t>{0, 1});
  // differential-term ground states all have weight 1, charge 0 net of fermions
  for (const auto& m : enum_graded_K(1)) {
    auto [h, q] = zero_mode_weight(Momentum{m, NPoint::zero()});
    CHECK(h == 1);
    CHECK(q == -1);
  }
  for (const auto& n : enum_graded_Kdual(1)) {
    // the weight-1 of the differential's N-terms sits on the fermion factor;
    // the bare ground state has weight 0
    auto [h, q] = zero_mode_weight(Momentum{MPoint::zero(), n});
    CHECK(h == 0);
    CHECK(q == 1);
  }
}

TEST_CASE("sigma truncation") {
  const auto& env = lattice_env();
  FieldExpr v0 = field_exp(Momentum{MPoint::zero(), env.vertex(0)});
  FieldExpr v1 = field_exp(Momentum{MPoint::zero(), env.vertex(1)});
  FieldExpr far = field_exp(nmom(IVec{0, 5, 5, 5, 5}));

  // disjoint argmin sets: truncated to zero even though the plain OPE may be singular
  auto t1 = sigma_truncated_ope(field_nferm(env.vertex(0)) , far);
  CHECK(t1.nonsingular());

  // same cone: agrees with the untruncated OPE
  auto plain = ope(v0, v1);
  auto trunc = sigma_truncated_ope(v0, v1);
  CHECK(plain.poles == trunc.poles);

  // zero N-part momentum lies in every cone
  FieldExpr m_only = field_exp(mmom(IVec{0, 0, 0, 0, 5}));
  auto t2 = sigma_truncated_ope(m_only, far);
  auto p2 = ope(m_only, far);
  CHECK(t2.poles == p2.poles);

  CHECK_THROWS_AS(sigma_truncated_ope(field_exp(nmom(IVec{-5, 0, 0, 0, 0})), v0),
                  std::invalid_argument);
}

TEST_CASE("factor cap fails loudly") {
  std::vector<Factor> many;
  for (int i = 0; i < 10; ++i) many.push_back(Factor{Gen::MBos, i % kRank, i});
  FieldExpr big = FieldExpr::term(CoeffFn(Rational(1)), many);
  OpeOptions opts;
  opts.factor_cap = 8;
  CHECK_THROWS_AS(ope(big, big, opts), std::runtime_error);
}
