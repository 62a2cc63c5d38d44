#include <random>

#include "chiralkit/lattice.hpp"
#include "doctest.h"
#include "support/cone_feasibility.hpp"

using namespace chiralkit;

namespace {
std::int64_t binomial(std::int64_t n, std::int64_t k) {
  Integer r = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return r.get_si();
}

MPoint random_m(std::mt19937_64& rng, int span) {
  IVec v{};
  std::int64_t s = 0;
  for (int i = 0; i + 1 < kRank; ++i) {
    v[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(rng() % (2 * span + 1)) - span;
    s += v[static_cast<std::size_t>(i)];
  }
  std::int64_t r = s % 5;
  if (r < 0) r += 5;
  v[kRank - 1] = -r;
  return MPoint(v);
}
}  // namespace

TEST_CASE("membership validators") {
  CHECK_THROWS_AS(MPoint(IVec{1, 0, 0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(NPoint(IVec{1, 1, 1, 1, 2}), std::invalid_argument);
  CHECK_NOTHROW(MPoint(IVec{5, 0, 0, 0, 0}));
  CHECK_NOTHROW(MPoint(IVec{1, -1, 0, 0, 0}));
  CHECK_NOTHROW(NPoint(IVec{1, 1, 1, 1, 1}));
  CHECK_NOTHROW(NPoint(IVec{6, 1, 1, 1, 1}));
}

TEST_CASE("pairing examples") {
  const auto& env = lattice_env();
  CHECK(pairing(env.deg(), env.degv()) == 1);
  CHECK(pairing(MPoint(IVec{5, 0, 0, 0, 0}), env.vertex(0)) == 5);
  CHECK(pairing(env.dual_basis(0), env.vertex(1)) == 0);
}

TEST_CASE("duality identities") {
  const auto& env = lattice_env();
  for (int i = 0; i < kRank; ++i) {
    for (int j = 0; j < kRank; ++j)
      CHECK(pairing(env.dual_basis(i), env.vertex(j)) == Rational(i == j ? 1 : 0));
    CHECK(pairing(env.deg(), env.vertex(i)) == 1);
    CHECK(env.vertex(i).in_dual_cone());
  }
  CHECK(env.degv().in_dual_cone());

  // pairing(m, n) = sum_i (m . v_i)(m_i . n) for random m, n
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    MPoint m = random_m(rng, 6);
    IVec nv{};
    std::int64_t r = static_cast<std::int64_t>(rng() % 5);
    for (int i = 0; i < kRank; ++i)
      nv[static_cast<std::size_t>(i)] = r + 5 * (static_cast<std::int64_t>(rng() % 7) - 3);
    NPoint n(nv);
    Rational lhs = pairing(m, n);
    Rational rhs = 0;
    for (int i = 0; i < kRank; ++i)
      rhs += pairing(m, env.vertex(i)) * pairing(env.dual_basis(i), n);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("graded enumeration counts") {
  CHECK(enum_graded_K(0).size() == 1);
  CHECK(enum_graded_K(1).size() == 126);
  CHECK(enum_graded_K(2).size() == 1001);
  for (int k = 0; k <= 4; ++k)
    CHECK(static_cast<std::int64_t>(enum_graded_K(k).size()) == binomial(5 * k + 4, 4));

  CHECK(enum_graded_Kdual(0).size() == 1);
  CHECK(enum_graded_Kdual(1).size() == 6);
  CHECK(enum_graded_Kdual(2).size() == 21);
  CHECK(enum_graded_Kdual(3).size() == 56);

  // every enumerated point has the required degree and lies in the cone
  const auto& env = lattice_env();
  for (const auto& a : enum_graded_K(2)) {
    CHECK(pairing(a, env.degv()) == 2);
    for (int i = 0; i < kRank; ++i) CHECK(a[i] >= 0);
  }
  for (const auto& b : enum_graded_Kdual(2)) {
    CHECK(pairing(env.deg(), b) == 2);
    CHECK(b.in_dual_cone());
  }

  // deterministic lexicographic order
  auto pts = enum_graded_K(1);
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i - 1].coords() < pts[i].coords());
  auto dpts = enum_graded_Kdual(2);
  for (std::size_t i = 1; i < dpts.size(); ++i)
    CHECK(dpts[i - 1].numerators() < dpts[i].numerators());
}

TEST_CASE("same_cone examples and properties") {
  const auto& env = lattice_env();
  CHECK(same_cone(env.degv(), env.vertex(0)));
  CHECK(same_cone(env.vertex(0), env.vertex(1)));
  CHECK_FALSE(same_cone(env.vertex(0), NPoint(IVec{0, 5, 5, 5, 5})));
  CHECK_THROWS_AS(same_cone(NPoint(IVec{-5, 0, 0, 0, 0}), env.degv()), std::invalid_argument);

  std::vector<NPoint> pts;
  for (int l = 0; l <= 3; ++l)
    for (const auto& p : enum_graded_Kdual(l)) pts.push_back(p);
  for (const auto& p : pts) {
    CHECK(same_cone(p, p));
    CHECK(same_cone(env.degv(), p));
    for (const auto& q : pts) CHECK(same_cone(p, q) == same_cone(q, p));
  }
}

TEST_CASE("same_cone agrees with direct cone-membership feasibility") {
  std::vector<NPoint> pts;
  for (int l = 0; l <= 2; ++l)
    for (const auto& p : enum_graded_Kdual(l)) pts.push_back(p);
  for (const auto& p : pts)
    for (const auto& q : pts)
      CHECK(same_cone(p, q) == testsupport::same_cone_by_feasibility(p, q));
}
