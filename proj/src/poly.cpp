#include "chiralkit/poly.hpp"

#include <numeric>
#include <stdexcept>

namespace chiralkit {

namespace {

std::string exps_str(const Exponents& e) {
  std::string s = "[";
  for (int i = 0; i < kRank; ++i) s += std::to_string(e[static_cast<std::size_t>(i)]) + (i + 1 < kRank ? "," : "]");
  return s;
}

void check_exponents(const Exponents& e, int degree) {
  std::int64_t sum = 0;
  for (auto x : e) {
    if (x < 0) throw std::invalid_argument("negative exponent in " + exps_str(e));
    sum += x;
  }
  if (sum != degree)
    throw std::invalid_argument("exponent vector " + exps_str(e) + " does not have degree " +
                                std::to_string(degree));
}

}  // namespace

Poly Poly::monomial(const Exponents& e, const Rational& c) {
  std::int64_t deg = std::accumulate(e.begin(), e.end(), std::int64_t{0});
  Poly p(static_cast<int>(deg));
  p.add_term(e, c);
  return p;
}

Rational Poly::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Poly::add_term(const Exponents& e, const Rational& c) {
  check_exponents(e, degree_);
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly Poly::partial_derivative(int i) const {
  Poly out(degree_ - 1);
  for (const auto& [e, c] : terms_) {
    auto ei = e[static_cast<std::size_t>(i)];
    if (ei == 0) continue;
    Exponents d = e;
    d[static_cast<std::size_t>(i)] -= 1;
    out.add_term(d, c * Rational(ei));
  }
  return out;
}

Poly Poly::multiply_by_variable(int i) const {
  Poly out(degree_ + 1);
  for (const auto& [e, c] : terms_) {
    Exponents d = e;
    d[static_cast<std::size_t>(i)] += 1;
    out.add_term(d, c);
  }
  return out;
}

Poly operator+(const Poly& a, const Poly& b) {
  if (!a.is_zero() && !b.is_zero() && a.degree_ != b.degree_)
    throw std::invalid_argument("adding polynomials of different degrees");
  Poly out(a.is_zero() ? b.degree_ : a.degree_);
  for (const auto& [e, c] : a.terms_) out.add_term(e, c);
  for (const auto& [e, c] : b.terms_) out.add_term(e, c);
  return out;
}

Poly operator-(const Poly& a, const Poly& b) { return a + Rational(-1) * b; }

Poly operator*(const Rational& c, const Poly& p) {
  Poly out(p.degree_);
  if (c == 0) return out;
  for (const auto& [e, k] : p.terms_) out.add_term(e, c * k);
  return out;
}

FivePolys FivePolys::from_terms(std::array<Poly, kRank> F) {
  for (const auto& f : F)
    if (!f.is_zero() && f.degree() != kRank)
      throw std::invalid_argument("F^i must be homogeneous of degree 5");
  return FivePolys(std::move(F));
}

std::optional<std::pair<int, Exponents>> FivePolys::support_violation() const {
  for (int i = 0; i < kRank; ++i)
    for (const auto& [e, c] : F_[static_cast<std::size_t>(i)].terms())
      if (e[static_cast<std::size_t>(i)] == 0) return std::make_pair(i, e);
  return std::nullopt;
}

GParams::GParams(std::map<NPoint, Rational> values) : values_(std::move(values)) {
  auto pts = enum_graded_Kdual(1);
  if (values_.size() != pts.size())
    throw std::invalid_argument("g-parameters must cover exactly the 6 points of Delta^v");
  for (const auto& p : pts)
    if (!values_.count(p)) throw std::invalid_argument("g-parameters missing a point of Delta^v");
}

GParams GParams::constant(const Rational& c) {
  std::map<NPoint, Rational> v;
  for (const auto& p : enum_graded_Kdual(1)) v.emplace(p, c);
  return GParams(std::move(v));
}

const Rational& GParams::at(const NPoint& n) const {
  auto it = values_.find(n);
  if (it == values_.end()) throw std::invalid_argument("g-parameter lookup outside Delta^v");
  return it->second;
}

FivePolys from_potential(const Poly& f) {
  if (f.degree() != kRank) throw std::invalid_argument("potential must have degree 5");
  std::array<Poly, kRank> F{Poly(5), Poly(5), Poly(5), Poly(5), Poly(5)};
  for (int i = 0; i < kRank; ++i)
    F[static_cast<std::size_t>(i)] = f.partial_derivative(i).multiply_by_variable(i);
  auto out = FivePolys::from_terms(std::move(F));
  return out;
}

FivePolys from_witten(const Poly& G, const std::array<Poly, kRank>& xG) {
  if (!G.is_zero() && G.degree() != kRank) throw std::invalid_argument("G must have degree 5");
  Poly sum(5);
  for (const auto& p : xG) {
    if (!p.is_zero() && p.degree() != kRank) throw std::invalid_argument("x_i G^i must have degree 5");
    sum = sum + p;
  }
  if (!sum.is_zero()) {
    const auto& [e, c] = *sum.terms().begin();
    throw std::invalid_argument("witten constraint sum_i x_i G^i = 0 fails at monomial " + exps_str(e) +
                                " with coefficient " + rational_to_string(c));
  }
  std::array<Poly, kRank> F{Poly(5), Poly(5), Poly(5), Poly(5), Poly(5)};
  for (int i = 0; i < kRank; ++i) {
    auto si = static_cast<std::size_t>(i);
    F[si] = G.partial_derivative(i).multiply_by_variable(i) + xG[si];
    for (const auto& [e, c] : xG[si].terms())
      if (e[si] == 0)
        throw std::invalid_argument("x_i G^i has a monomial not divisible by x_" + std::to_string(i));
  }
  return FivePolys::from_terms(std::move(F));
}

Poly recover_G(const FivePolys& F) {
  Poly sum(5);
  for (int i = 0; i < kRank; ++i) sum = sum + F[i];
  return Rational(1, 5) * sum;
}

std::vector<DifferentialTerm> differential_terms(const FivePolys& F, const GParams& g) {
  std::vector<DifferentialTerm> out;
  for (int i = 0; i < kRank; ++i)
    for (const auto& [e, c] : F[i].terms()) {
      DifferentialTerm t;
      t.kind = DifferentialTerm::Kind::M;
      t.m = MPoint(e);
      t.fermion_index = i;
      t.coefficient = c;
      out.push_back(std::move(t));
    }
  for (const auto& [n, gn] : g.values()) {
    if (gn == 0) continue;
    DifferentialTerm t;
    t.kind = DifferentialTerm::Kind::N;
    t.n = n;
    t.coefficient = gn;
    out.push_back(std::move(t));
  }
  return out;
}

FivePolys fermat_model() {
  Poly f(5);
  for (int i = 0; i < kRank; ++i) {
    Exponents e{0, 0, 0, 0, 0};
    e[static_cast<std::size_t>(i)] = 5;
    f.add_term(e, 1);
  }
  return from_potential(f);
}

GParams generic_g() { return GParams::constant(1); }

}  // namespace chiralkit
