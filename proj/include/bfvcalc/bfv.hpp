#pragma once

#include "bfvcalc/rothstein.hpp"
#include "bfvcalc/voronov.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace bfvcalc {

// The ghost-extended jet complex lives on the coordinate half (x, y, c, b)
// of the phase space. Momenta appear only transiently, inside brackets
// against the lifted structure. Bigrade of a monomial: (ghost count,
// antighost count); the total degree is their difference.

inline bool is_jet(const PhaseSpace& P, const SuperPoly& A) {
  for (const auto& [m, coef] : A.terms())
    for (auto [id, ex] : m.f)
      if (P.is_momentum(id)) return false;
  return true;
}

// Image of the base embedding: polynomials in x and the ghosts only.
inline bool is_small(const PhaseSpace& P, const SuperPoly& A) {
  for (const auto& [m, coef] : A.terms())
    for (auto [id, ex] : m.f) {
      GenKind k = P.kind(id);
      if (k != GenKind::base && k != GenKind::ghost) return false;
    }
  return true;
}

namespace detail {

inline void require_jet(const PhaseSpace& P, const SuperPoly& A,
                        const char* where) {
  if (!is_jet(P, A))
    throw ArgumentError(std::string(where) +
                        " expects a momentum-free element");
}

}  // namespace detail

inline SuperPoly bigrade_part(const PhaseSpace& P, const SuperPoly& A, int p,
                              int q) {
  SuperPoly r = P.zero();
  for (const auto& [m, coef] : A.terms()) {
    auto fc = P.fiber_counts(m);
    if (fc.c == p && fc.b == q) r.add_term(m, coef);
  }
  return r;
}

inline SuperPoly antighost_part(const PhaseSpace& P, const SuperPoly& A,
                                int q) {
  SuperPoly r = P.zero();
  for (const auto& [m, coef] : A.terms())
    if (P.fiber_counts(m).b == q) r.add_term(m, coef);
  return r;
}

// Pairing of the fiber coordinates against the ghosts; every charge starts
// with this term, and plain graphs of sections deform it.
inline SuperPoly tautological_term(const PhaseSpace& P) {
  SuperPoly r = P.zero();
  for (int j = 0; j < P.e; ++j) r += P.gen(P.y(j)) * P.gen(P.c(j));
  return r;
}

// Koszul differential contracting fiber coordinates into antighost slots.
inline SuperPoly delta(const PhaseSpace& P, const SuperPoly& A) {
  detail::require_jet(P, A, "delta");
  SuperPoly r = P.zero();
  for (int j = 0; j < P.e; ++j) r += P.gen(P.y(j)) * A.partial(P.b(j));
  return r;
}

// Contracting homotopy for delta: on a monomial of fiber degree N carrying
// k antighosts, trade each fiber coordinate for a leading antighost and
// divide by N + k. Annihilates anything free of fiber coordinates.
inline SuperPoly homotopy_h(const PhaseSpace& P, const SuperPoly& A) {
  detail::require_jet(P, A, "homotopy_h");
  std::map<int, SuperPoly> buckets;  // weight N + k -> partial sum
  for (const auto& [m, coef] : A.terms()) {
    int n = 0;
    for (auto [id, ex] : m.f)
      if (P.kind(id) == GenKind::fiber) n += ex;
    if (n == 0) continue;
    buckets.try_emplace(n + P.fiber_counts(m).b, P.zero())
        .first->second.add_term(m, coef);
  }
  SuperPoly r = P.zero();
  for (const auto& [w, part] : buckets) {
    SuperPoly contracted = P.zero();
    for (int j = 0; j < P.e; ++j)
      contracted += P.gen(P.b(j)) * part.partial(P.y(j));
    r += Rational(1, w) * contracted;
  }
  return r;
}

// Restriction to the base of the jet: fiber coordinates and antighosts die,
// ghost sections over the base survive. One-sided inverse of the embedding.
inline SuperPoly base_restrict(const PhaseSpace& P, const SuperPoly& A) {
  detail::require_jet(P, A, "base_restrict");
  std::vector<int> ids;
  ids.reserve(2 * static_cast<size_t>(P.e));
  for (int j = 0; j < P.e; ++j) {
    ids.push_back(P.y(j));
    ids.push_back(P.b(j));
  }
  return A.set_zero(ids);
}

// Identify frame momenta with ghosts: the dictionary between multivector
// slots and ghost slots. Degree-preserving, order-preserving.
inline SuperPoly frame_to_ghost(const PhaseSpace& P, const SuperPoly& A) {
  std::map<int, SuperPoly> images;
  for (int j = 0; j < P.e; ++j) images.emplace(P.ys(j), P.gen(P.c(j)));
  return A.substitute(images);
}

struct BfvSetup {
  const PhaseSpace* P = nullptr;  // not owned; must outlive the setup
  SuperPoly pi;                   // bivector over (x, y) with (xs, ys) slots
  Connection gamma;
  OddLift lift;                        // ghost charge + lift + correction
  std::vector<SuperPoly> charge_levels;  // index = antighost count
  SuperPoly omega;                       // full charge
  int eps_order = 3;

  const PhaseSpace& phase() const { return *P; }
  const SuperPoly& pi_hat() const { return lift.pi_hat; }
};

// Even degree-0 bracket induced on the jet side by the lifted structure.
inline SuperPoly bfv_bracket(const BfvSetup& S, const SuperPoly& A,
                             const SuperPoly& B) {
  const PhaseSpace& P = S.phase();
  detail::require_jet(P, A, "bfv_bracket");
  detail::require_jet(P, B, "bfv_bracket");
  return sn_bracket(P, sn_bracket(P, S.pi_hat(), A), B)
      .set_zero(P.momentum_ids());
}

// Classical bracket of two functions on the total space; connection terms
// never reach it.
inline SuperPoly pi_bracket(const BfvSetup& S, const SuperPoly& f,
                            const SuperPoly& g) {
  const PhaseSpace& P = S.phase();
  return sn_bracket(P, sn_bracket(P, S.pi, f), g).set_zero(P.momentum_ids());
}

namespace detail {

// Two structural consequences pinned at construction time. On functions the
// induced bracket restricts to the classical one; frames pair against
// coframes with coefficient one.
inline void check_setup_brackets(const BfvSetup& S) {
  const PhaseSpace& P = S.phase();
  std::vector<int> ghost_ids;
  for (int j = 0; j < P.e; ++j) {
    ghost_ids.push_back(P.c(j));
    ghost_ids.push_back(P.b(j));
  }
  std::vector<int> fun;
  for (int a = 0; a < P.s; ++a) fun.push_back(P.x(a));
  for (int j = 0; j < P.e; ++j) fun.push_back(P.y(j));
  for (size_t i = 0; i < fun.size(); ++i)
    for (size_t j = i; j < fun.size(); ++j) {
      SuperPoly za = P.gen(fun[i]), zb = P.gen(fun[j]);
      SuperPoly lhs = bfv_bracket(S, za, zb).set_zero(ghost_ids);
      SuperPoly rhs = pi_bracket(S, za, zb);
      if (lhs != rhs)
        throw InternalError("induced bracket leaves the classical one on (" +
                            P.table->gen(fun[i]).name + ", " +
                            P.table->gen(fun[j]).name + ")");
    }
  for (int i = 0; i < P.e; ++i)
    for (int j = 0; j < P.e; ++j) {
      SuperPoly v =
          bigrade_part(P, bfv_bracket(S, P.gen(P.c(i)), P.gen(P.b(j))), 0, 0);
      SuperPoly want = i == j ? P.constant(1) : P.zero();
      if (v != want)
        throw InternalError("frame-coframe pairing is off at (" +
                            std::to_string(i + 1) + ", " +
                            std::to_string(j + 1) + "): " + v.str());
    }
}

}  // namespace detail

// Inductive construction of the charge: start from the tautological term
// and kill the antighost levels of the self bracket one at a time with the
// homotopy. Level m sits in bigrade (m + 1, m), so the antighost bound
// forces termination; surviving residuals are a hard failure.
inline void build_charge(BfvSetup& S) {
  const PhaseSpace& P = S.phase();
  S.charge_levels.assign(1, tautological_term(P));
  S.omega = S.charge_levels[0];
  for (int k = 0;; ++k) {
    SuperPoly r = bfv_bracket(S, S.omega, S.omega);
    if (r.is_zero()) break;
    if (k >= P.e)
      throw InternalError("charge residual survives past the antighost bound: " +
                          r.str());
    for (int q = 0; q < k; ++q)
      if (!antighost_part(P, r, q).is_zero())
        throw InternalError("charge residual reappeared below level " +
                            std::to_string(k));
    SuperPoly rk = Rational(1, 2) * antighost_part(P, r, k);
    if (rk.is_zero()) {
      S.charge_levels.push_back(P.zero());
      continue;
    }
    if (!delta(P, rk).is_zero())
      throw InternalError("charge obstruction is not closed: " + rk.str());
    if (k == 0 && !base_restrict(P, rk).is_zero())
      throw InternalError("charge obstruction survives on the base: " +
                          rk.str());
    SuperPoly next = -homotopy_h(P, rk);
    if (next != bigrade_part(P, next, k + 2, k + 1))
      throw InternalError("charge correction leaves bigrade (" +
                          std::to_string(k + 2) + ", " + std::to_string(k + 1) +
                          "): " + next.str());
    S.charge_levels.push_back(next);
    S.omega += next;
  }
}

// Validated construction: bivector shape, classical master equation,
// vanishing of the fiber-fiber block on the zero section. Builds the lift
// and the charge and pins the structural bracket identities.
inline BfvSetup make_setup(const PhaseSpace& P, const SuperPoly& pi,
                           Connection gamma = {}, int eps_order = 3) {
  for (const auto& [m, coef] : pi.terms()) {
    int momenta = 0;
    for (auto [id, ex] : m.f) switch (P.kind(id)) {
        case GenKind::base:
        case GenKind::fiber:
          break;
        case GenKind::base_mom:
        case GenKind::fiber_mom:
          momenta += ex;
          break;
        default:
          throw ArgumentError(
              "bivector must not involve the bundle ghost directions");
      }
    if (momenta != 2)
      throw ArgumentError("structure must be a bivector: term " +
                          detail::mono_poly(P, m).str() +
                          " does not carry exactly two momenta");
  }
  SuperPoly jac = sn_bracket(P, pi, pi);
  if (!jac.is_zero())
    throw PreconditionError("structure fails the master equation: [pi, pi] = " +
                            jac.str());

  BfvSetup S;
  S.P = &P;
  S.pi = pi;
  S.gamma = std::move(gamma);
  S.eps_order = eps_order;
  S.lift = odd_lift(P, S.gamma, pi);

  std::vector<int> yids;
  for (int j = 0; j < P.e; ++j) yids.push_back(P.y(j));
  for (int i = 0; i < P.e; ++i)
    for (int j = i + 1; j < P.e; ++j) {
      SuperPoly coef =
          pi.partial(P.ys(i)).partial(P.ys(j)).set_zero(yids);
      if (!coef.is_zero())
        throw PreconditionError(
            "structure does not vanish on the zero section; fiber component (" +
            std::to_string(i + 1) + ", " + std::to_string(j + 1) +
            ") restricts to " + coef.str());
    }

  build_charge(S);
  detail::check_setup_brackets(S);
  return S;
}

// Differential induced on ghost sections over the base: transport of the
// mixed block along the anchor plus the ghost-quadratic term of the fiber
// block's linearization. Agrees with the unary transferred bracket.
inline SuperPoly delta1(const BfvSetup& S, const SuperPoly& F) {
  const PhaseSpace& P = S.phase();
  if (!is_small(P, F))
    throw ArgumentError("delta1 expects a polynomial in the base and ghosts");
  std::vector<int> yids;
  for (int j = 0; j < P.e; ++j) yids.push_back(P.y(j));
  SuperPoly out = P.zero();
  for (int i = 0; i < P.e; ++i)
    for (int beta = 0; beta < P.s; ++beta) {
      SuperPoly mix =
          S.pi.partial(P.xs(beta)).partial(P.ys(i)).set_zero(yids);
      if (mix.is_zero()) continue;
      out -= P.gen(P.c(i)) * mix * F.partial(P.x(beta));
    }
  for (int i = 0; i < P.e; ++i)
    for (int j = i + 1; j < P.e; ++j) {
      SuperPoly fib = S.pi.partial(P.ys(i)).partial(P.ys(j));
      if (fib.is_zero()) continue;
      for (int k = 0; k < P.e; ++k) {
        SuperPoly lin = fib.partial(P.y(k)).set_zero(yids);
        if (lin.is_zero()) continue;
        out -= lin * (P.gen(P.c(i)) * P.gen(P.c(j)) * F.partial(P.c(k)));
      }
    }
  return out;
}

// Contraction package of the jet complex over ghost sections of the base,
// perturbed by the charge bracket minus its Koszul part. Captures copies,
// so the maps stay valid on their own.
inline TransferMaps bfv_transfer_maps(const BfvSetup& S) {
  const PhaseSpace P = S.phase();
  const SuperPoly pihat = S.pi_hat();
  const SuperPoly om = S.omega;
  const std::vector<int> momenta = P.momentum_ids();
  auto brk = [P, pihat, momenta](const SuperPoly& a, const SuperPoly& b) {
    return sn_bracket(P, sn_bracket(P, pihat, a), b).set_zero(momenta);
  };
  TransferMaps M;
  M.table = P.table;
  M.inj = [](const SuperPoly& a) { return a; };
  M.proj = [P](const SuperPoly& a) { return base_restrict(P, a); };
  M.hom = [P](const SuperPoly& a) { return homotopy_h(P, a); };
  M.dec = [P, om, brk](const SuperPoly& a) { return brk(om, a) - delta(P, a); };
  M.bracket = brk;
  return M;
}

// Structural degree of a ghost section: ghost count shifted down by one.
inline GradedElem wrap_small(const PhaseSpace& P, const SuperPoly& a) {
  if (!is_small(P, a))
    throw ArgumentError("wrap_small expects a polynomial in base and ghosts");
  int p = -1;
  bool seen = false;
  for (const auto& [m, coef] : a.terms()) {
    int pc = P.fiber_counts(m).c;
    if (!seen) {
      p = pc;
      seen = true;
    } else if (p != pc) {
      throw ArgumentError("wrap_small requires a uniform ghost count");
    }
  }
  return {a, seen ? p - 1 : 0};
}

}  // namespace bfvcalc
