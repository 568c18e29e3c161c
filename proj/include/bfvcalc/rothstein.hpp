#pragma once

#include "bfvcalc/transfer.hpp"

namespace bfvcalc {

// Contraction package of the shifted cotangent bundle over its base part:
// ghost differential, fiberwise homotopy, horizontal lift, projection. The
// perturbation slot is empty; decorated trees contribute nothing here.
inline TransferMaps odd_symplectic_maps(const PhaseSpace& P, const Connection& G) {
  TransferMaps M;
  M.table = P.table;
  M.inj = [P, G](const SuperPoly& a) { return iota_lift(P, G, a); };
  M.proj = [P](const SuperPoly& a) { return pr_base(P, a); };
  M.hom = [P, G](const SuperPoly& a) { return h_fiber(P, G, a); };
  M.dec = [P](const SuperPoly&) { return P.zero(); };
  M.bracket = [P](const SuperPoly& a, const SuperPoly& b) {
    return sn_bracket(P, a, b);
  };
  return M;
}

struct OddLift {
  SuperPoly pi_hat;      // ghost charge + lifted bivector + correction
  SuperPoly lifted;      // horizontal lift of the bivector alone
  SuperPoly correction;  // the V^{(1,1)} tail; zero for a flat connection
};

// Push the bivector through the homotopy-transfer morphism and add the
// ghost charge. Demands an input satisfying the classical master equation
// and certifies the lifted master equation exactly.
inline OddLift odd_lift(const PhaseSpace& P, const Connection& G,
                        const SuperPoly& pi, int max_arity = -1) {
  SuperPoly pi_self = sn_bracket(P, pi, pi);
  if (!pi_self.is_zero())
    throw PreconditionError("structure is not Poisson; self bracket = " +
                            pi_self.str());
  if (max_arity < 0) max_arity = P.e + 1;

  auto M = odd_symplectic_maps(P, G);
  GradedElem arg{pi, 0};

  OddLift out;
  out.lifted = iota_lift(P, G, pi);
  out.correction = P.zero();
  for (int k = 2; k <= max_arity; ++k) {
    std::vector<GradedElem> args(static_cast<size_t>(k), arg);
    out.correction += Rational(1) / factorial(k) *
                      transferred_op(M, k, args, 0, false).val;
  }
  out.pi_hat = ghost_charge(P) + out.lifted + out.correction;

  if (!P.in_filtration(out.correction, 1, 1))
    throw InternalError("lift correction escapes the (1,1) filtration stage");
  SuperPoly master = sn_bracket(P, out.pi_hat, out.pi_hat);
  if (!master.is_zero())
    throw InternalError("lifted master equation failed; residual = " +
                        master.str());
  return out;
}

}  // namespace bfvcalc
