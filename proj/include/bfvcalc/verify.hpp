#pragma once

#include "bfvcalc/mc.hpp"
#include "bfvcalc/randomgen.hpp"
#include "bfvcalc/setupfile.hpp"
#include "bfvcalc/voronov.hpp"

#include <functional>
#include <string>
#include <vector>

namespace bfvcalc {

// Deliberate corruption switches. Each one breaks a convention the suite
// is supposed to pin; running with one active must name the first identity
// that notices. none leaves everything intact.
enum class Sabotage {
  none,
  orientation,  // extra vertex sign in the tree evaluation
  homotopy,     // jet homotopy scaled by two
  treeweight    // drop the 1/|Aut| weight on tree classes
};

inline Sabotage sabotage_from_name(const std::string& name) {
  if (name.empty() || name == "none") return Sabotage::none;
  if (name == "orientation") return Sabotage::orientation;
  if (name == "homotopy") return Sabotage::homotopy;
  if (name == "treeweight") return Sabotage::treeweight;
  throw ArgumentError("unknown sabotage mode '" + name +
                      "'; try orientation, homotopy or treeweight");
}

struct VerifyResult {
  struct Item {
    std::string name;
    bool passed = false;
    std::string detail;  // empty on pass
  };
  std::vector<Item> items;

  bool ok() const {
    for (const auto& it : items)
      if (!it.passed) return false;
    return true;
  }
  const Item* first_failure() const {
    for (const auto& it : items)
      if (!it.passed) return &it;
    return nullptr;
  }
};

namespace detail {

// A check either returns an empty string (pass) or the violated identity.
using VerifyFn = std::function<std::string()>;

inline void verify_run(VerifyResult& out, const std::string& name,
                       const VerifyFn& fn) {
  VerifyResult::Item item;
  item.name = name;
  try {
    item.detail = fn();
    item.passed = item.detail.empty();
  } catch (const std::exception& e) {
    item.passed = false;
    item.detail = e.what();
  }
  out.items.push_back(std::move(item));
}

inline int lead_parity(const SuperPoly& a) {
  if (a.is_zero()) return 0;
  return mono_parity(a.terms().begin()->first, *a.table());
}

}  // namespace detail

// Named invariant suite for one model. Structural checks always run;
// randomized ones run `trials` rounds each and are skipped for trials = 0.
// The order is fixed and failures do not stop later checks unless the
// structure itself is invalid (nothing downstream is defined then).
inline VerifyResult run_verify(const LoadedSetup& L, uint64_t seed, int trials,
                               Sabotage sab = Sabotage::none) {
  VerifyResult out;
  const PhaseSpace& P = L.P;

  detail::verify_run(out, "structure.poisson", [&] {
    SuperPoly jac = sn_bracket(P, L.pi, L.pi);
    return jac.is_zero() ? ""
                         : "[pi, pi] = " + jac.str();
  });
  detail::verify_run(out, "structure.zero-section", [&] {
    auto rep = check_structure(L);
    if (rep.coisotropic()) return std::string();
    auto [i, j, coef] = rep.section_defects[0];
    return "fiber component (" + std::to_string(i) + ", " + std::to_string(j) +
           ") restricts to " + coef.str();
  });
  if (!out.ok()) return out;

  BfvSetup S = make_setup(P, L.pi, L.gamma, L.eps_order);

  // Corrupted evaluation maps, threaded through every check downstream so
  // each sabotage is caught by the identity named after it.
  auto hom = [&P, sab](const SuperPoly& a) {
    SuperPoly h = homotopy_h(P, a);
    return sab == Sabotage::homotopy ? Rational(2) * h : h;
  };
  TransferMaps M = bfv_transfer_maps(S);
  M.hom = hom;
  if (sab == Sabotage::orientation) {
    auto plain = M.bracket;
    M.bracket = [plain](const SuperPoly& a, const SuperPoly& b) {
      SuperPoly v = plain(a, b);
      return detail::lead_parity(a) ? -v : v;
    };
  }
  TreeWeight weight = default_tree_weight;
  if (sab == Sabotage::treeweight) weight = [](const DTree&) { return Rational(1); };

  detail::verify_run(out, "lift.master", [&] {
    SuperPoly r = sn_bracket(P, S.pi_hat(), S.pi_hat());
    return r.is_zero() ? "" : "[pihat, pihat] = " + r.str();
  });
  detail::verify_run(out, "lift.correction-stage", [&] {
    if (!P.in_filtration(S.lift.correction, 1, 1))
      return std::string("correction escapes filtration stage (1, 1)");
    if (L.gamma.coef.empty() && !S.lift.correction.is_zero())
      return std::string("flat connection produced a correction");
    return std::string();
  });
  detail::verify_run(out, "charge.master", [&] {
    SuperPoly r = bfv_bracket(S, S.omega, S.omega);
    return r.is_zero() ? "" : "[omega, omega] = " + r.str();
  });
  detail::verify_run(out, "charge.levels", [&] {
    for (size_t m = 0; m < S.charge_levels.size(); ++m) {
      const SuperPoly& lvl = S.charge_levels[m];
      if (lvl != bigrade_part(P, lvl, static_cast<int>(m) + 1,
                              static_cast<int>(m)))
        return "level " + std::to_string(m) + " leaves bigrade (" +
               std::to_string(m + 1) + ", " + std::to_string(m) + ")";
    }
    return std::string();
  });

  auto jet_ids = P.ids_of({GenKind::base, GenKind::fiber, GenKind::ghost,
                           GenKind::antighost});
  auto small_ids = P.ids_of({GenKind::base, GenKind::ghost});

  if (trials > 0) {
    detail::verify_run(out, "contraction.jet", [&] {
      PolySampler sam(seed ^ 0x11u, P.table, jet_ids);
      for (int t = 0; t < trials; ++t) {
        SuperPoly a = sam.poly(3);
        SuperPoly ha = hom(a);
        if (!hom(ha).is_zero()) return std::string("h . h != 0 at ") + a.str();
        if (!base_restrict(P, ha).is_zero())
          return std::string("restriction of a homotopy image is nonzero");
        SuperPoly both = delta(P, ha) + hom(delta(P, a));
        if (both != a - base_restrict(P, a))
          return "delta h + h delta misses id - inj restrict at " + a.str();
        if (!delta(P, delta(P, a)).is_zero())
          return std::string("delta . delta != 0 at ") + a.str();
      }
      return std::string();
    });
    detail::verify_run(out, "contraction.lift", [&] {
      std::vector<int> all_ids;
      for (int id = 0; id < P.table->size(); ++id) all_ids.push_back(id);
      std::vector<int> flat_ids = P.ids_of(
          {GenKind::base, GenKind::fiber, GenKind::base_mom, GenKind::fiber_mom});
      PolySampler sam(seed ^ 0x22u, P.table, all_ids);
      PolySampler fsam(seed ^ 0x23u, P.table, flat_ids);
      const Connection& G = S.gamma;
      for (int t = 0; t < trials; ++t) {
        SuperPoly a = sam.poly(3);
        SuperPoly f = fsam.poly(2);
        SuperPoly Ha = h_fiber(P, G, a);
        if (sab == Sabotage::homotopy) Ha = Rational(2) * Ha;
        SuperPoly both = ghost_differential(P, Ha) + (sab == Sabotage::homotopy
                             ? Rational(2) * h_fiber(P, G, ghost_differential(P, a))
                             : h_fiber(P, G, ghost_differential(P, a)));
        if (both != a - iota_lift(P, G, pr_base(P, a)))
          return "Q H + H Q misses id - lift restrict at " + a.str();
        if (!h_fiber(P, G, Ha).is_zero())
          return std::string("H . H != 0 at ") + a.str();
        if (pr_base(P, iota_lift(P, G, f)) != f)
          return std::string("restrict . lift != id at ") + f.str();
        if (!ghost_differential(P, iota_lift(P, G, f)).is_zero())
          return std::string("lifted section is not Q-closed at ") + f.str();
      }
      return std::string();
    });
    detail::verify_run(out, "bracket.axioms", [&] {
      PolySampler sam(seed ^ 0x33u, P.table, jet_ids);
      for (int t = 0; t < trials; ++t) {
        SuperPoly a = sam.monomial(), b = sam.monomial(), c = sam.monomial();
        int pa = detail::lead_parity(a), pb = detail::lead_parity(b);
        if (bfv_bracket(S, a, b * c) !=
            bfv_bracket(S, a, b) * c +
                Rational((pa & pb) ? -1 : 1) * (b * bfv_bracket(S, a, c)))
          return std::string("product rule fails at ") + a.str();
        if (bfv_bracket(S, a, b) !=
            Rational((pa & pb) ? 1 : -1) * bfv_bracket(S, b, a))
          return std::string("graded symmetry fails at ") + a.str();
        if (!bfv_bracket(S, S.omega, bfv_bracket(S, S.omega, a)).is_zero())
          return std::string("charge differential does not square to zero at ") +
                 a.str();
      }
      return std::string();
    });
    detail::verify_run(out, "differential.square", [&] {
      PolySampler sam(seed ^ 0x44u, P.table, small_ids);
      for (int t = 0; t < trials; ++t) {
        SuperPoly v = sam.poly(3);
        if (!delta1(S, delta1(S, v)).is_zero())
          return std::string("delta1 . delta1 != 0 at ") + v.str();
      }
      return std::string();
    });
  }

  detail::verify_run(out, "transfer.derived-match", [&] {
    auto DB = multivector_brackets(P, S.pi);
    std::vector<SuperPoly> pool;
    for (int a = 0; a < P.s; ++a) pool.push_back(P.gen(P.x(a)));
    for (int j = 0; j < P.e; ++j) pool.push_back(P.gen(P.ys(j)));
    int n = static_cast<int>(pool.size());
    std::vector<std::vector<int>> picks;
    for (int i = 0; i < n; ++i) picks.push_back({i});
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) picks.push_back({i, j});
    for (const auto& pick : picks) {
      std::vector<SuperPoly> raw;
      std::vector<GradedElem> wrapped;
      for (int idx : pick) {
        raw.push_back(pool[static_cast<size_t>(idx)]);
        wrapped.push_back(
            wrap_small(P, frame_to_ghost(P, pool[static_cast<size_t>(idx)])));
      }
      SuperPoly want = frame_to_ghost(P, DB.derived(raw));
      SuperPoly got = transferred_op(M, static_cast<int>(pick.size()), wrapped,
                                     1, true, weight)
                          .val;
      if (got != want)
        return "arity " + std::to_string(pick.size()) + " at (" +
               raw.front().str() + ", " + raw.back().str() + "): tree sum " +
               got.str() + " vs derived " + want.str();
    }
    return std::string();
  });

  if (trials > 0) {
    detail::verify_run(out, "transfer.linfty", [&] {
      auto sam = std::make_shared<PolySampler>(seed ^ 0x55u, P.table, small_ids);
      auto sample = [&P, sam](int) {
        for (;;) {
          SuperPoly v = sam->homogeneous(sam->pick_int(1, 2), 2);
          if (!v.is_zero()) return wrap_small(P, v);
        }
      };
      auto nu = transferred_structure(M, 3, 1);
      auto rep = check_linfty(nu, 3, std::min(trials, 3), sample);
      return rep.ok ? ""
                    : "arity " + std::to_string(rep.arity) + ": " + rep.detail;
    });
    detail::verify_run(out, "morphism.defect", [&] {
      auto sam = std::make_shared<PolySampler>(seed ^ 0x66u, P.table, small_ids);
      auto sample = [&P, sam](int) {
        for (;;) {
          SuperPoly v = sam->homogeneous(sam->pick_int(1, 2), 2);
          if (!v.is_zero()) return wrap_small(P, v);
        }
      };
      auto nu = transferred_structure(M, 3, 1);
      const PhaseSpace Pc = P;
      auto dst = big_side_structure(
          M, [Pc](const SuperPoly& a) { return delta(Pc, a); });
      auto lam = transfer_morphism(M, 3, P.e);
      for (int arity = 1; arity <= 2; ++arity)
        for (int t = 0; t < std::min(trials, 3); ++t) {
          std::vector<GradedElem> args;
          for (int i = 0; i < arity; ++i) args.push_back(sample(i));
          auto defect = morphism_defect(nu, dst, lam, arity, args);
          if (!defect.val.is_zero())
            return "arity " + std::to_string(arity) + " residual " +
                   defect.val.str();
        }
      return std::string();
    });
  }

  detail::verify_run(out, "mc.zero-section", [&] {
    std::vector<SuperPoly> zero_section(static_cast<size_t>(P.e), P.zero());
    auto res = extend_section_to_mc(S, zero_section);
    if (!res.coisotropic) return std::string("zero section reported obstructed");
    if (!res.beta.is_zero())
      return std::string("zero section extension is nonzero: ") + res.beta.str();
    return std::string();
  });

  detail::verify_run(out, "trees.oracle", [&] {
    for (int n = 1; n <= 3; ++n)
      for (int dec = 0; dec <= 1; ++dec) {
        auto classes = enumerate_trees(n, dec);
        auto census = plane_tree_census(n, dec);
        if (classes.size() != census.size())
          return "class count (" + std::to_string(n) + ", " +
                 std::to_string(dec) + "): " + std::to_string(classes.size()) +
                 " vs census " + std::to_string(census.size());
        for (const auto& t : classes) {
          auto it = census.find(encode(t));
          long members = (1L << internal_count(t)) / aut_order(t);
          if (it == census.end() || it->second != members)
            return "automorphism order mismatch on " + encode(t);
        }
      }
    return std::string();
  });

  return out;
}

}  // namespace bfvcalc
