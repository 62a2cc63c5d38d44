#pragma once

#include <map>
#include <optional>

#include "chiralkit/field.hpp"

namespace chiralkit {

struct OpeOptions {
  int factor_cap = 16;  // refuse pairs with more combined factors than this
};

// Full operator product A(z)B(w) = sum_p C_p(w) (z-w)^p by Wick's theorem:
// all multi-contractions between the two normal-ordered sides (generator
// pairings, a_i against coefficient functions, bosons against exponentials),
// the exponential prefactor eps(x1,x2) (z-w)^{<x1,x2>} with momentum addition,
// and Taylor re-expansion of the uncontracted z-side at w. Returns every
// coefficient with p <= max_power.
std::map<int, FieldExpr> ope_expansion(const FieldExpr& A, const FieldExpr& B, int max_power,
                                       const OpeOptions& opts = {});

struct LaurentOPE {
  std::map<int, FieldExpr> poles;  // k >= 1 -> coefficient of (z-w)^{-k}
  // Lowest (z-w)-power with nonzero coefficient; computed when both inputs
  // are single normal terms (the interesting case for exponential pairs).
  std::optional<std::pair<int, FieldExpr>> leading;

  bool nonsingular() const { return poles.empty(); }
};

// Singular part of A(z)B(w).
LaurentOPE ope(const FieldExpr& A, const FieldExpr& B, const OpeOptions& opts = {});

// Lowest nonzero (z-w)-power of A(z)B(w) and its coefficient, for single-term
// inputs; avoids expanding the whole singular part (the leading term of an
// exponential pair sits at <x1,x2>, which may be large).
std::optional<std::pair<int, FieldExpr>> ope_leading(const FieldExpr& A, const FieldExpr& B,
                                                     const OpeOptions& opts = {});

// Coefficient of (z-w)^{-1}: the action of Res_z A(z) on B.
FieldExpr residue_action(const FieldExpr& A, const FieldExpr& B, const OpeOptions& opts = {});

// Coefficient of (z-w)^0: the normal-ordered product :AB: (singular terms of
// the OPE subtracted). Right-nest for longer products.
FieldExpr normal_product(const FieldExpr& A, const FieldExpr& B, const OpeOptions& opts = {});

// As ope, but a term pair contributes zero when the N-components of its
// momenta do not lie in a common cone of Sigma. Throws if an N-component is
// outside K^v.
LaurentOPE sigma_truncated_ope(const FieldExpr& A, const FieldExpr& B, const OpeOptions& opts = {});

// Virasoro and U(1) fields on Fock_{M+N}:
//   L = sum_i m_i^bos n_i^bos + sum_i (m_i^ferm)' n_i^ferm - d(deg^v)^bos
//   J = sum_i m_i^ferm n_i^ferm + deg^bos - (deg^v)^bos
FieldExpr lattice_L();
FieldExpr lattice_J();

// (conformal weight, J-charge) of the ground state e^{int (m,n)^bos}, read off
// from the engine's L- and J-OPEs. The closed forms weight = m.n + m.deg^v and
// charge = deg.n - deg^v.m are asserted against the engine values.
// The normalization is the one induced by lattice_L (the paper fixes no other
// convention for isotropic momenta).
std::pair<std::int64_t, std::int64_t> zero_mode_weight(const Momentum& x, const OpeOptions& opts = {});

}  // namespace chiralkit
