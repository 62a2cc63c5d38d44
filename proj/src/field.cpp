#include "chiralkit/field.hpp"

#include <algorithm>
#include <stdexcept>

namespace chiralkit {

bool is_fermionic(Gen g) {
  return g == Gen::Phi || g == Gen::Psi || g == Gen::MFerm || g == Gen::NFerm;
}

std::string gen_name(Gen g) {
  switch (g) {
    case Gen::A: return "a";
    case Gen::BDeriv: return "b";
    case Gen::Phi: return "phi";
    case Gen::Psi: return "psi";
    case Gen::MBos: return "Mbos";
    case Gen::MFerm: return "Mferm";
    case Gen::NBos: return "Nbos";
    case Gen::NFerm: return "Nferm";
  }
  return "?";
}

std::int64_t momentum_pairing(const Momentum& a, const Momentum& b) {
  Rational p = pairing(a.m, b.n) + pairing(b.m, a.n);
  return to_int64(p);
}

Rational momentum_label_pairing(const Momentum& x, Gen family, int index) {
  switch (family) {
    case Gen::MBos:
    case Gen::MFerm:
      // <(m,n),(e_k,0)> = n_k
      return x.n.coord(index);
    case Gen::NBos:
    case Gen::NFerm:
      // <(m,n),(0,e_k)> = m_k
      return Rational(x.m[index]);
    default:
      throw std::logic_error("momentum_label_pairing: not a lattice generator");
  }
}

namespace {

// Integer coordinates over the fixed ordered basis of M + N used by the
// cocycle: u_t = e_{t-1} - e_t (t=1..4), u_5 = deg; w_k = e_{k-1} (k=1..4),
// w_5 = deg^v.
std::array<std::int64_t, 10> basis_coordinates(const Momentum& x) {
  std::array<std::int64_t, 10> c{};
  std::int64_t degc = x.m.coord_sum() / 5;
  std::array<std::int64_t, kRank> s{};
  for (int i = 0; i < kRank; ++i) s[static_cast<std::size_t>(i)] = x.m[i] - degc;
  std::int64_t acc = 0;
  for (int t = 1; t <= 4; ++t) {
    acc += s[static_cast<std::size_t>(t - 1)];
    c[static_cast<std::size_t>(t - 1)] = acc;
  }
  c[4] = degc;
  std::int64_t degvc = x.n.numerators()[4];
  for (int k = 1; k <= 4; ++k) {
    std::int64_t d = x.n.numerators()[static_cast<std::size_t>(k - 1)] - degvc;
    if (d % 5 != 0) throw std::logic_error("momentum not in N");
    c[static_cast<std::size_t>(4 + k)] = d / 5;
  }
  c[9] = degvc;
  return c;
}

// <w_a, u_b> over the mixed pairs (all same-side pairings vanish).
std::int64_t basis_pairing_wu(int a, int b) {
  // w_a: e_{a-1} (a<=4) or deg^v; u_b: e_{b-1}-e_b (b<=4) or deg.
  if (a <= 4 && b <= 4) return (a == b ? 1 : 0) - (a == b + 1 ? 1 : 0);
  if (a <= 4 && b == 5) return 1;        // deg . e_{a-1}
  if (a == 5 && b <= 4) return 0;        // deg^v . (e_{b-1}-e_b)
  return 1;                              // deg . deg^v
}

}  // namespace

int cocycle_sign(const Momentum& a, const Momentum& b) {
  auto ca = basis_coordinates(a);
  auto cb = basis_coordinates(b);
  // Only basis pairs (N-side index i) > (M-side index j) contribute.
  std::int64_t s = 0;
  for (int i = 1; i <= 5; ++i)
    for (int j = 1; j <= 5; ++j)
      s += ca[static_cast<std::size_t>(4 + i)] * cb[static_cast<std::size_t>(j - 1)] * basis_pairing_wu(i, j);
  return (s % 2 == 0) ? 1 : -1;
}

std::optional<int> canonicalize_factors(std::vector<Factor>& factors) {
  int sign = 1;
  // insertion sort, tracking fermion transpositions
  for (std::size_t i = 1; i < factors.size(); ++i) {
    for (std::size_t j = i; j > 0 && factors[j] < factors[j - 1]; --j) {
      if (is_fermionic(factors[j].kind) && is_fermionic(factors[j - 1].kind)) sign = -sign;
      std::swap(factors[j], factors[j - 1]);
    }
  }
  for (std::size_t i = 1; i < factors.size(); ++i)
    if (factors[i] == factors[i - 1] && is_fermionic(factors[i].kind)) return std::nullopt;
  return sign;
}

FieldExpr FieldExpr::term(CoeffFn coeff, std::vector<Factor> factors, Momentum momentum) {
  FieldExpr e;
  if (coeff.is_zero()) return e;
  auto sign = canonicalize_factors(factors);
  if (!sign) return e;
  if (*sign < 0) coeff = CoeffFn(Rational(-1)) * coeff;
  e.terms_.push_back(NormalTerm{std::move(coeff), std::move(factors), momentum});
  return e;
}

void FieldExpr::add_term(NormalTerm t) {
  terms_.push_back(std::move(t));
}

void FieldExpr::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const NormalTerm& a, const NormalTerm& b) { return a.key() < b.key(); });
  std::vector<NormalTerm> merged;
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().key() == t.key())
      merged.back().coeff += t.coeff;
    else
      merged.push_back(std::move(t));
  }
  std::erase_if(merged, [](const NormalTerm& t) { return t.coeff.is_zero(); });
  terms_ = std::move(merged);
}

FieldExpr operator+(const FieldExpr& a, const FieldExpr& b) {
  FieldExpr out = a;
  out += b;
  return out;
}

FieldExpr& FieldExpr::operator+=(const FieldExpr& o) {
  for (const auto& t : o.terms_) add_term(t);
  normalize();
  return *this;
}

FieldExpr operator-(const FieldExpr& a, const FieldExpr& b) {
  return a + CoeffFn(Rational(-1)) * b;
}

FieldExpr operator*(const CoeffFn& c, const FieldExpr& e) {
  FieldExpr out;
  for (const auto& t : e.terms_) {
    CoeffFn nc = c * t.coeff;
    if (!nc.is_zero()) out.add_term(NormalTerm{std::move(nc), t.factors, t.momentum});
  }
  out.normalize();
  return out;
}

namespace {
FieldExpr single(Gen kind, int index, int deriv) {
  return FieldExpr::term(CoeffFn(Rational(1)), {Factor{kind, index, deriv}});
}

FieldExpr lattice_linear(Gen kind, const QVec& coords, int deriv) {
  FieldExpr out;
  for (int i = 0; i < kRank; ++i) {
    const Rational& c = coords[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    out += CoeffFn(c) * single(kind, i, deriv);
  }
  return out;
}
}  // namespace

FieldExpr field_a(int i, int deriv) { return single(Gen::A, i, deriv); }

FieldExpr field_b(int i, int deriv) {
  if (deriv == 0) return FieldExpr::term(CoeffFn::coordinate(i), {});
  return single(Gen::BDeriv, i, deriv);
}

FieldExpr field_phi(int i, int deriv) { return single(Gen::Phi, i, deriv); }
FieldExpr field_psi(int i, int deriv) { return single(Gen::Psi, i, deriv); }

FieldExpr field_mbos(const MQPoint& label, int deriv) { return lattice_linear(Gen::MBos, label.coords(), deriv); }
FieldExpr field_mferm(const MQPoint& label, int deriv) { return lattice_linear(Gen::MFerm, label.coords(), deriv); }

FieldExpr field_nbos(const NPoint& label, int deriv) {
  QVec q;
  for (int i = 0; i < kRank; ++i) q[static_cast<std::size_t>(i)] = label.coord(i);
  return lattice_linear(Gen::NBos, q, deriv);
}

FieldExpr field_nferm(const NPoint& label, int deriv) {
  QVec q;
  for (int i = 0; i < kRank; ++i) q[static_cast<std::size_t>(i)] = label.coord(i);
  return lattice_linear(Gen::NFerm, q, deriv);
}

FieldExpr field_exp(const Momentum& x) { return FieldExpr::term(CoeffFn(Rational(1)), {}, x); }

FieldExpr derivative(const NormalTerm& t) {
  FieldExpr out;
  // coefficient: sum_k (d_k coeff) (b^k)'
  for (int k : t.coeff.dependency_coords()) {
    CoeffFn dk = t.coeff.derivative(k);
    if (dk.is_zero()) continue;
    auto factors = t.factors;
    factors.push_back(Factor{Gen::BDeriv, k, 1});
    out += FieldExpr::term(std::move(dk), std::move(factors), t.momentum);
  }
  // factors: raise one derivative order at a time
  for (std::size_t i = 0; i < t.factors.size(); ++i) {
    auto factors = t.factors;
    factors[i].deriv += 1;
    out += FieldExpr::term(t.coeff, std::move(factors), t.momentum);
  }
  // exponential: x^bos e^{int x}
  if (!t.momentum.is_zero()) {
    FieldExpr xbos = field_mbos(MQPoint(t.momentum.m)) + field_nbos(t.momentum.n);
    for (const auto& bt : xbos.terms()) {
      auto factors = t.factors;
      factors.insert(factors.end(), bt.factors.begin(), bt.factors.end());
      out += FieldExpr::term(t.coeff * bt.coeff, std::move(factors), t.momentum);
    }
  }
  return out;
}

FieldExpr derivative(const FieldExpr& e) {
  FieldExpr out;
  for (const auto& t : e.terms()) out += derivative(t);
  return out;
}

std::string FieldExpr::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    if (i) out += " + ";
    bool coeff_is_one = t.coeff.is_constant() && !t.coeff.is_zero() && t.coeff.constant_value() == 1;
    if (!coeff_is_one) out += "(" + t.coeff.str() + ")";
    for (const auto& f : t.factors) {
      out += " " + gen_name(f.kind) + (f.kind == Gen::Phi ? "^" : "_") + std::to_string(f.index);
      for (int d = 0; d < f.deriv; ++d) out += "'";
    }
    if (!t.momentum.is_zero()) {
      out += " e^{int(m=[";
      for (int k = 0; k < kRank; ++k) out += std::to_string(t.momentum.m[k]) + (k + 1 < kRank ? "," : "");
      out += "],n=[";
      for (int k = 0; k < kRank; ++k)
        out += std::to_string(t.momentum.n.numerators()[static_cast<std::size_t>(k)]) + (k + 1 < kRank ? "," : "");
      out += "]/5)}";
    }
  }
  return out;
}

}  // namespace chiralkit
