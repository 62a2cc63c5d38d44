#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chiralkit/poly.hpp"
#include "chiralkit/wick.hpp"

namespace chiralkit {

struct Witness {
  std::string what;
  std::optional<int> i;
  std::optional<IVec> m;      // MPoint coordinates
  std::optional<IVec> n_num;  // NPoint numerators
};

struct CheckReport {
  std::string check;
  bool pass = true;
  std::vector<Witness> witnesses;
  double ms = 0.0;
  std::optional<bool> per_pair_pass;

  void fail(Witness w) {
    pass = false;
    witnesses.push_back(std::move(w));
  }
  std::string to_json() const;
};

// General ansatz data D_{(F.),(G.)}: finite subsets Delta in M, Delta^v in N
// with Delta.deg^v = deg.Delta^v = 1 and Delta.Delta^v >= 0, plus coefficient
// tables indexed by (basis direction i, set element). Fermion labels are the
// unit directions e_i of M_Q resp. N_Q.
class GeneralAnsatz {
 public:
  GeneralAnsatz(std::vector<MPoint> delta, std::vector<NPoint> delta_dual,
                std::vector<std::tuple<int, std::size_t, Rational>> fcoeffs,
                std::vector<std::tuple<int, std::size_t, Rational>> gcoeffs);

  static GeneralAnsatz from_quintic(const FivePolys& F, const GParams& g);
  static GeneralAnsatz load(const std::string& path);

  // The total differential field D.
  FieldExpr field() const;
  // Individual summands (for the per-pair condition).
  std::vector<FieldExpr> term_fields() const;

 private:
  std::vector<MPoint> delta_;
  std::vector<NPoint> delta_dual_;
  std::vector<std::tuple<int, std::size_t, Rational>> fcoeffs_;  // (i, delta index, coeff)
  std::vector<std::tuple<int, std::size_t, Rational>> gcoeffs_;  // (i, dual index, coeff)
};

// Prop 3.4 conditions, pair by pair on the nonzero terms: m.n >= 0 always and
// m.n >= 1 whenever m_i.n != 0. M-M and N-N pairs are vacuous.
CheckReport check_differential_quintic(const FivePolys& F, const GParams& g);

// Full self-OPE of D in the engine; pass iff the singular part vanishes
// (cross-term cancellation allowed). per_pair_pass reports whether every
// individual pair was already nonsingular.
CheckReport check_differential_general(const GeneralAnsatz& ansatz);

// Prop 3.5: every term of D has vanishing singular OPE with J and a pure
// double pole equal to itself against L. Delta is finite, so the check runs
// over all 126 x 5 M-terms and the 6 N-terms.
CheckReport verify_LJ_descend();

// Lemma 4.6 for the local model with P = y_n: all hat fields are killed by
// Res alpha and satisfy the free-field OPE table (including the order-2
// cancellation in a-hat against a-hat).
CheckReport verify_hat_fields(int n);

// Lemma 4.8 (and the Remark on beta): the exact field identities expressing
// J-hat and L-hat through the ambient fields modulo the image of Res alpha.
CheckReport verify_hat_LJ(int n);

// Remark after Lemma 4.9: Q(z) psi_{C*}(w) ~ (z-w)^{-2} + (z-w)^{-1} beta(w),
// so beta is the image of psi_{C*} under Res Q (and Res Q kills beta).
CheckReport verify_remark_beta(int n);

// Eq. (vertop): leading exponent and momentum additivity for random pairs of
// momenta in M + K^v, plus pinned examples.
CheckReport verify_vertop(std::uint64_t seed = 1);

}  // namespace chiralkit
