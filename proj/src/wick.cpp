#include "chiralkit/wick.hpp"

#include <stdexcept>

namespace chiralkit {

namespace {

// Base contraction <F(z) G(w)> = kappa (z-w)^{-k0} between underived
// generators; zero kappa means nonsingular.
struct BasePairing {
  Rational kappa;
  int pole = 0;
};

BasePairing base_contraction(const Factor& x, const Factor& y) {
  auto delta = [](int i, int j) { return Rational(i == j ? 1 : 0); };
  switch (x.kind) {
    case Gen::A:
      if (y.kind == Gen::BDeriv) return {delta(x.index, y.index), 1};
      break;
    case Gen::BDeriv:
      if (y.kind == Gen::A) return {-delta(x.index, y.index), 1};
      break;
    case Gen::Phi:
      if (y.kind == Gen::Psi) return {delta(x.index, y.index), 1};
      break;
    case Gen::Psi:
      if (y.kind == Gen::Phi) return {delta(x.index, y.index), 1};
      break;
    case Gen::MBos:
      if (y.kind == Gen::NBos) return {delta(x.index, y.index), 2};
      break;
    case Gen::NBos:
      if (y.kind == Gen::MBos) return {delta(x.index, y.index), 2};
      break;
    case Gen::MFerm:
      if (y.kind == Gen::NFerm) return {delta(x.index, y.index), 1};
      break;
    case Gen::NFerm:
      if (y.kind == Gen::MFerm) return {delta(x.index, y.index), 1};
      break;
  }
  return {Rational(0), 0};
}

Rational factorial(int t) {
  Rational r(1);
  for (int i = 2; i <= t; ++i) r *= i;
  return r;
}

// (k0)_t = k0 (k0+1) ... (k0+t-1)
Rational pochhammer(int k0, int t) {
  Rational r(1);
  for (int i = 0; i < t; ++i) r *= (k0 + i);
  return r;
}

// <d^c F(z) d^d G(w)> = kappa (-1)^c (k0)_{c+d} (z-w)^{-k0-c-d}
BasePairing derived_contraction(const Factor& x, const Factor& y) {
  BasePairing base = base_contraction(x, y);
  if (base.kappa == 0) return base;
  int c = x.deriv, d = y.deriv;
  Rational v = base.kappa * pochhammer(base.pole, c + d);
  if (c % 2) v = -v;
  return {v, base.pole + c + d};
}

bool is_lattice_boson(Gen g) { return g == Gen::MBos || g == Gen::NBos; }

struct PairContext {
  const NormalTerm* A;
  const NormalTerm* B;
  int max_power;
  std::map<int, FieldExpr>* out;
  int exp_power;  // <xA, xB>
  int eps;        // cocycle sign

  // assignment state
  std::vector<int> a_target;  // A-factor i -> B-factor index, or -1 uncontracted,
                              // -2 B-coefficient, -3 B-exponential
  std::vector<int> b_target;  // B-factor j -> -1 uncontracted, -2 A-coefficient,
                              // -3 A-exponential (pairings with A factors are
                              // recorded on the A side)
  std::vector<bool> b_used;
  Rational scalar;
  int pole_sum = 0;
};

int fermion_sign(const PairContext& ctx) {
  // Positions: A factors 0..p-1 then B factors p..p+q-1. Contract pairs in
  // order of A position; each pair contributes (-1)^{unremoved fermions
  // strictly between}.
  const auto& FA = ctx.A->factors;
  const auto& FB = ctx.B->factors;
  std::size_t p = FA.size(), q = FB.size();
  std::vector<bool> removed(p + q, false);
  std::vector<bool> odd(p + q, false);
  for (std::size_t i = 0; i < p; ++i) odd[i] = is_fermionic(FA[i].kind);
  for (std::size_t j = 0; j < q; ++j) odd[p + j] = is_fermionic(FB[j].kind);
  int sign = 1;
  for (std::size_t i = 0; i < p; ++i) {
    int tgt = ctx.a_target[i];
    if (tgt < 0) continue;
    std::size_t jpos = p + static_cast<std::size_t>(tgt);
    if (odd[i]) {
      int count = 0;
      for (std::size_t k = i + 1; k < jpos; ++k)
        if (!removed[k] && odd[k]) ++count;
      if (count % 2) sign = -sign;
    }
    removed[i] = removed[jpos] = true;
  }
  return sign;
}

void emit_assignment(PairContext& ctx) {
  const NormalTerm& A = *ctx.A;
  const NormalTerm& B = *ctx.B;
  int base_power = ctx.exp_power - ctx.pole_sum;
  if (base_power > ctx.max_power) return;

  // apply coefficient derivatives
  CoeffFn cA = A.coeff;
  for (std::size_t j = 0; j < B.factors.size(); ++j)
    if (ctx.b_target[j] == -2) cA = cA.derivative(B.factors[j].index);
  if (cA.is_zero()) return;
  CoeffFn cB = B.coeff;
  for (std::size_t i = 0; i < A.factors.size(); ++i)
    if (ctx.a_target[i] == -2) cB = cB.derivative(A.factors[i].index);
  if (cB.is_zero()) return;

  int fsign = fermion_sign(ctx);

  std::vector<Factor> a_rem, b_rem;
  for (std::size_t i = 0; i < A.factors.size(); ++i)
    if (ctx.a_target[i] == -1) a_rem.push_back(A.factors[i]);
  for (std::size_t j = 0; j < B.factors.size(); ++j)
    if (ctx.b_target[j] == -1 && !ctx.b_used[j]) b_rem.push_back(B.factors[j]);

  Rational overall = ctx.scalar * ctx.eps * fsign;
  Momentum total = A.momentum + B.momentum;

  // Taylor expansion of the remaining z-side at w.
  FieldExpr zside = FieldExpr::term(cA, a_rem, A.momentum);
  for (int t = 0; base_power + t <= ctx.max_power; ++t) {
    if (zside.is_zero()) break;
    Rational tcoef = overall / factorial(t);
    FieldExpr& slot = (*ctx.out)[base_power + t];
    for (const auto& term : zside.terms()) {
      std::vector<Factor> merged = term.factors;
      merged.insert(merged.end(), b_rem.begin(), b_rem.end());
      CoeffFn coeff = CoeffFn(tcoef) * term.coeff * cB;
      slot += FieldExpr::term(std::move(coeff), std::move(merged), total);
    }
    zside = derivative(zside);
  }
}

void recurse_b(PairContext& ctx, std::size_t j) {
  const NormalTerm& A = *ctx.A;
  const NormalTerm& B = *ctx.B;
  if (j == B.factors.size()) {
    emit_assignment(ctx);
    return;
  }
  if (ctx.b_used[j]) {
    recurse_b(ctx, j + 1);
    return;
  }
  const Factor& f = B.factors[j];
  // uncontracted
  ctx.b_target[j] = -1;
  recurse_b(ctx, j + 1);
  // against A's coefficient: <f(z), d^d a_i(w)> = -d_i f(z) d! (z-w)^{-1-d}
  if (f.kind == Gen::A && A.coeff.dependency_coords().count(f.index)) {
    ctx.b_target[j] = -2;
    Rational save = ctx.scalar;
    ctx.scalar *= -factorial(f.deriv);
    ctx.pole_sum += 1 + f.deriv;
    recurse_b(ctx, j + 1);
    ctx.pole_sum -= 1 + f.deriv;
    ctx.scalar = save;
  }
  // against A's exponential: <e^{int xA}(z), d^d y^bos(w)> = -<xA,y> d! (z-w)^{-1-d}
  if (is_lattice_boson(f.kind) && !A.momentum.is_zero()) {
    Rational v = momentum_label_pairing(A.momentum, f.kind, f.index);
    if (v != 0) {
      ctx.b_target[j] = -3;
      Rational save = ctx.scalar;
      ctx.scalar *= -v * factorial(f.deriv);
      ctx.pole_sum += 1 + f.deriv;
      recurse_b(ctx, j + 1);
      ctx.pole_sum -= 1 + f.deriv;
      ctx.scalar = save;
    }
  }
  ctx.b_target[j] = -1;
}

void recurse_a(PairContext& ctx, std::size_t i) {
  const NormalTerm& A = *ctx.A;
  const NormalTerm& B = *ctx.B;
  if (i == A.factors.size()) {
    recurse_b(ctx, 0);
    return;
  }
  const Factor& f = A.factors[i];
  // uncontracted
  ctx.a_target[i] = -1;
  recurse_a(ctx, i + 1);
  // generator-generator contractions
  for (std::size_t j = 0; j < B.factors.size(); ++j) {
    if (ctx.b_used[j]) continue;
    BasePairing pc = derived_contraction(f, B.factors[j]);
    if (pc.kappa == 0) continue;
    ctx.a_target[i] = static_cast<int>(j);
    ctx.b_used[j] = true;
    Rational save = ctx.scalar;
    ctx.scalar *= pc.kappa;
    ctx.pole_sum += pc.pole;
    recurse_a(ctx, i + 1);
    ctx.pole_sum -= pc.pole;
    ctx.scalar = save;
    ctx.b_used[j] = false;
  }
  // against B's coefficient: <d^c a_i(z), f(w)> = d_i f(w) (-1)^c c! (z-w)^{-1-c}
  if (f.kind == Gen::A && B.coeff.dependency_coords().count(f.index)) {
    ctx.a_target[i] = -2;
    Rational save = ctx.scalar;
    Rational v = factorial(f.deriv);
    if (f.deriv % 2) v = -v;
    ctx.scalar *= v;
    ctx.pole_sum += 1 + f.deriv;
    recurse_a(ctx, i + 1);
    ctx.pole_sum -= 1 + f.deriv;
    ctx.scalar = save;
  }
  // against B's exponential: <d^c y^bos(z), e^{int xB}(w)> = <xB,y> (-1)^c c! (z-w)^{-1-c}
  if (is_lattice_boson(f.kind) && !B.momentum.is_zero()) {
    Rational v = momentum_label_pairing(B.momentum, f.kind, f.index);
    if (v != 0) {
      ctx.a_target[i] = -3;
      Rational save = ctx.scalar;
      if (f.deriv % 2) v = -v;
      ctx.scalar *= v * factorial(f.deriv);
      ctx.pole_sum += 1 + f.deriv;
      recurse_a(ctx, i + 1);
      ctx.pole_sum -= 1 + f.deriv;
      ctx.scalar = save;
    }
  }
  ctx.a_target[i] = -1;
}

void expand_pair(const NormalTerm& A, const NormalTerm& B, int max_power,
                 std::map<int, FieldExpr>& out, const OpeOptions& opts) {
  if (static_cast<int>(A.factors.size() + B.factors.size()) > opts.factor_cap)
    throw std::runtime_error("ope: combined factor count exceeds cap (" +
                             std::to_string(opts.factor_cap) + ")");
  PairContext ctx;
  ctx.A = &A;
  ctx.B = &B;
  ctx.max_power = max_power;
  ctx.out = &out;
  ctx.exp_power = static_cast<int>(momentum_pairing(A.momentum, B.momentum));
  ctx.eps = cocycle_sign(A.momentum, B.momentum);
  ctx.a_target.assign(A.factors.size(), -1);
  ctx.b_target.assign(B.factors.size(), -1);
  ctx.b_used.assign(B.factors.size(), false);
  ctx.scalar = 1;
  recurse_a(ctx, 0);
}

void prune(std::map<int, FieldExpr>& m) {
  std::erase_if(m, [](const auto& kv) { return kv.second.is_zero(); });
}

}  // namespace

std::map<int, FieldExpr> ope_expansion(const FieldExpr& A, const FieldExpr& B, int max_power,
                                       const OpeOptions& opts) {
  std::map<int, FieldExpr> out;
  for (const auto& ta : A.terms())
    for (const auto& tb : B.terms()) expand_pair(ta, tb, max_power, out, opts);
  prune(out);
  return out;
}

namespace {

LaurentOPE poles_from(std::map<int, FieldExpr>&& expansion) {
  LaurentOPE result;
  for (auto& [p, expr] : expansion)
    if (p < 0) result.poles.emplace(-p, std::move(expr));
  return result;
}

}  // namespace

std::optional<std::pair<int, FieldExpr>> ope_leading(const FieldExpr& A, const FieldExpr& B,
                                                     const OpeOptions& opts) {
  if (A.terms().size() != 1 || B.terms().size() != 1)
    throw std::invalid_argument("ope_leading: inputs must be single normal terms");
  int top = static_cast<int>(momentum_pairing(A.terms()[0].momentum, B.terms()[0].momentum)) + 2;
  auto full = ope_expansion(A, B, top, opts);
  for (const auto& [p, expr] : full)
    if (!expr.is_zero()) return std::make_pair(p, expr);
  return std::nullopt;
}

LaurentOPE ope(const FieldExpr& A, const FieldExpr& B, const OpeOptions& opts) {
  LaurentOPE result = poles_from(ope_expansion(A, B, -1, opts));
  if (A.terms().size() == 1 && B.terms().size() == 1) result.leading = ope_leading(A, B, opts);
  return result;
}

FieldExpr residue_action(const FieldExpr& A, const FieldExpr& B, const OpeOptions& opts) {
  auto m = ope_expansion(A, B, -1, opts);
  auto it = m.find(-1);
  return it == m.end() ? FieldExpr{} : it->second;
}

FieldExpr normal_product(const FieldExpr& A, const FieldExpr& B, const OpeOptions& opts) {
  auto m = ope_expansion(A, B, 0, opts);
  auto it = m.find(0);
  return it == m.end() ? FieldExpr{} : it->second;
}

LaurentOPE sigma_truncated_ope(const FieldExpr& A, const FieldExpr& B, const OpeOptions& opts) {
  std::map<int, FieldExpr> out;
  for (const auto& ta : A.terms())
    for (const auto& tb : B.terms()) {
      if (!ta.momentum.n.in_dual_cone() || !tb.momentum.n.in_dual_cone())
        throw std::invalid_argument("sigma_truncated_ope: momentum outside K^v");
      if (!same_cone(ta.momentum.n, tb.momentum.n)) continue;
      expand_pair(ta, tb, -1, out, opts);
    }
  prune(out);
  return poles_from(std::move(out));
}

FieldExpr lattice_L() {
  const auto& env = lattice_env();
  FieldExpr L;
  for (int k = 0; k < kRank; ++k) {
    L += FieldExpr::term(CoeffFn(Rational(1)), {Factor{Gen::MBos, k, 0}, Factor{Gen::NBos, k, 0}});
    L += FieldExpr::term(CoeffFn(Rational(1)), {Factor{Gen::MFerm, k, 1}, Factor{Gen::NFerm, k, 0}});
  }
  L = L - field_nbos(env.degv(), 1);
  return L;
}

FieldExpr lattice_J() {
  const auto& env = lattice_env();
  FieldExpr J;
  for (int k = 0; k < kRank; ++k)
    J += FieldExpr::term(CoeffFn(Rational(1)), {Factor{Gen::MFerm, k, 0}, Factor{Gen::NFerm, k, 0}});
  J += field_mbos(MQPoint(env.deg()));
  J = J - field_nbos(env.degv());
  return J;
}

namespace {

Rational extract_multiple(const FieldExpr& expr, const Momentum& x, const char* what) {
  if (expr.is_zero()) return Rational(0);
  if (expr.terms().size() != 1) throw std::logic_error(std::string(what) + ": not a multiple of the ground state");
  const auto& t = expr.terms()[0];
  if (!t.factors.empty() || !(t.momentum == x))
    throw std::logic_error(std::string(what) + ": not a multiple of the ground state");
  return t.coeff.constant_value();
}

}  // namespace

std::pair<std::int64_t, std::int64_t> zero_mode_weight(const Momentum& x, const OpeOptions& opts) {
  FieldExpr ground = field_exp(x);
  auto lexp = ope_expansion(lattice_L(), ground, -1, opts);
  auto jexp = ope_expansion(lattice_J(), ground, -1, opts);
  Rational h(0), q(0);
  if (auto it = lexp.find(-2); it != lexp.end()) h = extract_multiple(it->second, x, "zero_mode_weight[L]");
  if (auto it = jexp.find(-1); it != jexp.end()) q = extract_multiple(it->second, x, "zero_mode_weight[J]");

  const auto& env = lattice_env();
  Rational h_closed = pairing(x.m, x.n) + pairing(x.m, env.degv());
  Rational q_closed = pairing(env.deg(), x.n) - pairing(x.m, env.degv());
  if (h != h_closed || q != q_closed)
    throw std::logic_error("zero_mode_weight: engine value disagrees with closed form");
  return {to_int64(h), to_int64(q)};
}

}  // namespace chiralkit
