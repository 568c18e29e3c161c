#pragma once

#include "bfvcalc/linfty.hpp"
#include "bfvcalc/phase.hpp"

#include <utility>
#include <vector>

namespace bfvcalc {

// Higher derived brackets D^n(a1..an) = proj [ ... [[P, a1], a2] ... , an]
// of a structure element P, relative to the abelian subalgebra cut out by
// setting the listed generators to zero. The master identity
//   Jacobiator^n of D  ==  derived brackets of (1/2)[P, P]
// holds whenever the complement spanned by killed monomials is closed under
// the bracket; every instance constructed here satisfies that.
struct DerivedBrackets {
  PhaseSpace phase;
  SuperPoly element;
  std::vector<int> kill;

  SuperPoly project(const SuperPoly& A) const { return A.set_zero(kill); }

  bool in_subalgebra(const SuperPoly& a) const { return project(a) == a; }

  SuperPoly derived(const std::vector<SuperPoly>& args) const {
    for (const auto& a : args)
      if (!in_subalgebra(a))
        throw ArgumentError("derived bracket argument leaves the subalgebra");
    SuperPoly B = element;
    for (const auto& a : args) B = sn_bracket(phase, B, a);
    return project(B);
  }

  // Structural degree of a subalgebra element: polynomial degree shifted
  // down by one (the bracket has degree -1, so this makes D^n degree +1).
  GradedElem wrap(const SuperPoly& a) const {
    int d = 0;
    if (!a.is_homogeneous(&d))
      throw ArgumentError("wrap requires a homogeneous element");
    return {a, d - 1};
  }

  LinftyStructure linfty(int max_arity) const {
    LinftyStructure S;
    S.table = phase.table;
    for (int n = 1; n <= max_arity; ++n)
      S.ops[n] = [self = *this](const std::vector<GradedElem>& xs) {
        std::vector<SuperPoly> raw;
        raw.reserve(xs.size());
        for (const auto& x : xs) raw.push_back(x.val);
        return self.derived(raw);
      };
    return S;
  }

  SuperPoly self_bracket() const {
    return sn_bracket(phase, element, element);
  }
};

// The subalgebra encoding multivector fields on the total space: momenta of
// the transverse coordinates play the role of the frame directions. The
// projection kills the transverse coordinates and the base momenta.
inline DerivedBrackets multivector_brackets(const PhaseSpace& P,
                                            const SuperPoly& pi) {
  std::vector<int> kill = P.ids_of({GenKind::fiber, GenKind::base_mom,
                                    GenKind::ghost, GenKind::antighost,
                                    GenKind::ghost_mom, GenKind::antighost_mom});
  return DerivedBrackets{P, pi, std::move(kill)};
}

// Functions on the total space as the abelian subalgebra: the classical
// higher brackets of a bivector, nonzero only through arity two.
inline DerivedBrackets function_brackets(const PhaseSpace& P,
                                         const SuperPoly& pi) {
  std::vector<int> kill = P.ids_of({GenKind::base_mom, GenKind::fiber_mom,
                                    GenKind::ghost, GenKind::antighost,
                                    GenKind::ghost_mom, GenKind::antighost_mom});
  return DerivedBrackets{P, pi, std::move(kill)};
}

}  // namespace bfvcalc
