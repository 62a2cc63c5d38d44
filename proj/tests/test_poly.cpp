#include <random>

#include "chiralkit/model_io.hpp"
#include "chiralkit/poly.hpp"
#include "doctest.h"

using namespace chiralkit;

namespace {

Poly fermat_quintic() {
  Poly f(5);
  for (int i = 0; i < kRank; ++i) {
    Exponents e{0, 0, 0, 0, 0};
    e[static_cast<std::size_t>(i)] = 5;
    f.add_term(e, 1);
  }
  return f;
}

Poly random_degree4(std::mt19937_64& rng, int max_terms) {
  Poly p(4);
  int terms = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_terms));
  for (int t = 0; t < terms; ++t) {
    Exponents e{0, 0, 0, 0, 0};
    for (int d = 0; d < 4; ++d) e[rng() % kRank] += 1;
    p.add_term(e, Rational(static_cast<std::int64_t>(rng() % 19) - 9));
  }
  return p;
}

}  // namespace

TEST_CASE("from_potential on Fermat and monomial potentials") {
  auto F = from_potential(fermat_quintic());
  for (int i = 0; i < kRank; ++i) {
    CHECK(F[i].terms().size() == 1);
    Exponents e{0, 0, 0, 0, 0};
    e[static_cast<std::size_t>(i)] = 5;
    CHECK(F[i].coefficient(e) == 5);
  }

  Poly f = Poly::monomial(Exponents{4, 1, 0, 0, 0}, 1);  // x_0^4 x_1
  auto G = from_potential(f);
  CHECK(G[0].coefficient(Exponents{4, 1, 0, 0, 0}) == 4);
  CHECK(G[1].coefficient(Exponents{4, 1, 0, 0, 0}) == 1);
  CHECK(G[2].is_zero());
  CHECK(G[3].is_zero());
  CHECK(G[4].is_zero());

  CHECK_THROWS_AS(from_potential(Poly::monomial(Exponents{4, 0, 0, 0, 0}, 1)), std::invalid_argument);
}

TEST_CASE("Euler identity: sum F^i = 5 f and recover_G round trip") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Poly f(5);
    int terms = 1 + static_cast<int>(rng() % 6);
    for (int t = 0; t < terms; ++t) {
      Exponents e{0, 0, 0, 0, 0};
      for (int d = 0; d < 5; ++d) e[rng() % kRank] += 1;
      f.add_term(e, Rational(static_cast<std::int64_t>(rng() % 19) - 9));
    }
    auto F = from_potential(f);
    CHECK(F.validate());
    Poly sum(5);
    for (int i = 0; i < kRank; ++i) sum = sum + F[i];
    CHECK(sum == Rational(5) * f);
    CHECK(recover_G(F) == f);
  }
}

TEST_CASE("from_witten constraint and examples") {
  // G Fermat, all G^i = 0 -> F^i = 5 x_i^5
  std::array<Poly, kRank> zero{Poly(5), Poly(5), Poly(5), Poly(5), Poly(5)};
  auto F = from_witten(fermat_quintic(), zero);
  CHECK(F == from_potential(fermat_quintic()));

  // G = 0, G^0 = x_1^4, G^1 = -x_0 x_1^3 passes and gives F^0 = -F^1 = x_0 x_1^4
  std::array<Poly, kRank> xg{Poly(5), Poly(5), Poly(5), Poly(5), Poly(5)};
  xg[0] = Poly::monomial(Exponents{1, 4, 0, 0, 0}, 1);
  xg[1] = Poly::monomial(Exponents{1, 4, 0, 0, 0}, -1);
  auto F2 = from_witten(Poly(5), xg);
  CHECK(F2[0].coefficient(Exponents{1, 4, 0, 0, 0}) == 1);
  CHECK(F2[1].coefficient(Exponents{1, 4, 0, 0, 0}) == -1);
  CHECK(recover_G(F2).is_zero());

  // G^0 = x_1^4 alone violates the constraint
  std::array<Poly, kRank> bad{Poly(5), Poly(5), Poly(5), Poly(5), Poly(5)};
  bad[0] = Poly::monomial(Exponents{1, 4, 0, 0, 0}, 1);
  CHECK_THROWS_AS(from_witten(Poly(5), bad), std::invalid_argument);
}

TEST_CASE("random witten round trip") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    Poly G(5);
    int terms = 1 + static_cast<int>(rng() % 5);
    for (int t = 0; t < terms; ++t) {
      Exponents e{0, 0, 0, 0, 0};
      for (int d = 0; d < 5; ++d) e[rng() % kRank] += 1;
      G.add_term(e, Rational(static_cast<std::int64_t>(rng() % 19) - 9));
    }
    // G^i built pairwise so that sum x_i G^i = 0: pick h of degree 3 and use
    // G^a = x_b h, G^b = -x_a h.
    std::array<Poly, kRank> xg{Poly(5), Poly(5), Poly(5), Poly(5), Poly(5)};
    for (int pairs = 0; pairs < 3; ++pairs) {
      int a = static_cast<int>(rng() % kRank);
      int b = static_cast<int>((a + 1 + rng() % 4) % kRank);
      Poly h(3);
      Exponents e{0, 0, 0, 0, 0};
      for (int d = 0; d < 3; ++d) e[rng() % kRank] += 1;
      h.add_term(e, Rational(static_cast<std::int64_t>(rng() % 9) - 4));
      Poly xa_xb_h = h.multiply_by_variable(a).multiply_by_variable(b);
      xg[static_cast<std::size_t>(a)] = xg[static_cast<std::size_t>(a)] + xa_xb_h;
      xg[static_cast<std::size_t>(b)] = xg[static_cast<std::size_t>(b)] - xa_xb_h;
    }
    auto F = from_witten(G, xg);
    CHECK(F.validate());
    CHECK(recover_G(F) == G);
  }
}

TEST_CASE("support validation catches corrupted F") {
  auto F = fermat_model();
  CHECK(F.validate());
  std::array<Poly, kRank> bad{F[0], F[1], F[2], F[3], F[4]};
  bad[0].add_term(Exponents{0, 5, 0, 0, 0}, 1);
  auto corrupted = FivePolys::from_terms(bad);
  auto violation = corrupted.support_violation();
  REQUIRE(violation.has_value());
  CHECK(violation->first == 0);
  CHECK(violation->second == Exponents{0, 5, 0, 0, 0});
}

TEST_CASE("differential term counts") {
  auto F = fermat_model();
  auto terms = differential_terms(F, generic_g());
  CHECK(terms.size() == 11);  // 5 M-terms + 6 N-terms

  auto g0 = GParams::constant(1);
  std::map<NPoint, Rational> v = g0.values();
  v[lattice_env().degv()] = 0;
  auto terms2 = differential_terms(F, GParams(std::move(v)));
  CHECK(terms2.size() == 10);
}

TEST_CASE("model JSON round trip and errors") {
  Model m;
  m.F = fermat_model();
  m.g = generic_g();
  save_model(m, "test_model_tmp.json");
  Model back = load_model("test_model_tmp.json");
  CHECK(back.F == m.F);
  CHECK(back.g.values() == m.g.values());

  CHECK_THROWS_AS(parse_model("{"), ModelError);
  CHECK_THROWS_AS(parse_model("{\"format\":\"nope\"}"), ModelError);
  CHECK_THROWS_AS(parse_model(R"({"format":"chiralkit-model-v1","presentation":"F","F":[[],[],[],[]],
                                "g":{}})"),
                  ModelError);

  // potential presentation
  std::string pot = R"({"format":"chiralkit-model-v1","presentation":"potential",
    "f":[{"exps":[5,0,0,0,0],"coef":"1"},{"exps":[0,5,0,0,0],"coef":"1"},
         {"exps":[0,0,5,0,0],"coef":"1"},{"exps":[0,0,0,5,0],"coef":"1"},
         {"exps":[0,0,0,0,5],"coef":"1"}],
    "g":{"v0":"1","v1":"1","v2":"1","v3":"1","v4":"1","degv":"1"}})";
  Model pm = parse_model(pot);
  CHECK(pm.F == fermat_model());
}
