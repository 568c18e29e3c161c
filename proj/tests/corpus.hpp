#pragma once

// Shared model instances for the test suites. Each factory returns a heap
// box so the phase space the setup points into never moves.

#include "bfvcalc/mc.hpp"

#include <memory>
#include <vector>

namespace corpus {

using namespace bfvcalc;

struct Inst {
  PhaseSpace P;
  BfvSetup S;
};

using Box = std::unique_ptr<Inst>;

// Split structure on a four-dimensional base: one symplectic base block and
// two base-fiber pairings. The charge needs no correction terms.
inline Box split4() {
  auto r = std::make_unique<Inst>();
  r->P = PhaseSpace::make(4, 2);
  const PhaseSpace& P = r->P;
  SuperPoly pi = -(P.gen(P.xs(2)) * P.gen(P.xs(3))) +
                 P.gen(P.xs(0)) * P.gen(P.ys(0)) +
                 P.gen(P.xs(1)) * P.gen(P.ys(1));
  r->S = make_setup(P, pi);
  return r;
}

// Fiber-linear block: the smallest instance whose charge picks up a
// correction level.
inline Box fiberlin() {
  auto r = std::make_unique<Inst>();
  r->P = PhaseSpace::make(2, 2);
  const PhaseSpace& P = r->P;
  SuperPoly pi = P.gen(P.y(0)) * P.gen(P.ys(0)) * P.gen(P.ys(1));
  r->S = make_setup(P, pi);
  return r;
}

// Quadratic fiber block with a curved connection; the connection never
// reaches the lift because the structure has no base momenta.
inline Box quadgamma() {
  auto r = std::make_unique<Inst>();
  r->P = PhaseSpace::make(2, 2);
  const PhaseSpace& P = r->P;
  SuperPoly pi =
      P.gen(P.y(0)) * P.gen(P.y(0)) * P.gen(P.ys(0)) * P.gen(P.ys(1));
  Connection G;
  G.set(P, 0, 0, 1, P.gen(P.x(0)));
  G.set(P, 1, 1, 0, Rational(2) * P.gen(P.x(1)));
  r->S = make_setup(P, pi, G);
  return r;
}

// Symplectic base block over a curved rank-one bundle: the lift needs a
// genuine correction term.
inline Box rank1gamma() {
  auto r = std::make_unique<Inst>();
  r->P = PhaseSpace::make(2, 1);
  const PhaseSpace& P = r->P;
  SuperPoly pi = P.gen(P.xs(0)) * P.gen(P.xs(1));
  Connection G;
  G.set(P, 0, 0, 0, P.gen(P.x(1)));
  r->S = make_setup(P, pi, G);
  return r;
}

// Mixed base-fiber pairing with a curved connection: the induced
// differential is nonzero and all connection contributions must cancel.
inline Box mixedgamma() {
  auto r = std::make_unique<Inst>();
  r->P = PhaseSpace::make(2, 2);
  const PhaseSpace& P = r->P;
  SuperPoly pi = P.gen(P.xs(0)) * P.gen(P.ys(0));
  Connection G;
  G.set(P, 0, 0, 0, P.gen(P.x(1)));
  G.set(P, 1, 1, 0, P.gen(P.x(0)));
  r->S = make_setup(P, pi, G);
  return r;
}

// Fiber coordinates are central: every certificate question trivializes.
inline Box casimir() {
  auto r = std::make_unique<Inst>();
  r->P = PhaseSpace::make(4, 2);
  const PhaseSpace& P = r->P;
  SuperPoly pi = P.gen(P.xs(2)) * P.gen(P.xs(3));
  r->S = make_setup(P, pi);
  return r;
}

// No structure at all: the bracket degenerates to the Koszul pairing.
inline Box trivial22() {
  auto r = std::make_unique<Inst>();
  r->P = PhaseSpace::make(2, 2);
  r->S = make_setup(r->P, r->P.zero());
  return r;
}

inline std::vector<Box> all_valid() {
  std::vector<Box> v;
  v.push_back(split4());
  v.push_back(fiberlin());
  v.push_back(quadgamma());
  v.push_back(rank1gamma());
  v.push_back(mixedgamma());
  v.push_back(casimir());
  return v;
}

}  // namespace corpus
