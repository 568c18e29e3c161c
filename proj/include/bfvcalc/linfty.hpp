#pragma once

#include "bfvcalc/errors.hpp"
#include "bfvcalc/signs.hpp"
#include "bfvcalc/superpoly.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bfvcalc {

// Polynomial payload tagged with the structural degree the sign calculus
// sees. The payload's internal grading is unrelated: embeddings shift it.
struct GradedElem {
  SuperPoly val;
  int deg = 0;

  bool is_zero() const { return val.is_zero(); }
};

inline GradedElem operator+(const GradedElem& a, const GradedElem& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.deg != b.deg) throw InternalError("adding elements of different degrees");
  return {a.val + b.val, a.deg};
}

inline GradedElem operator*(const Rational& s, const GradedElem& a) {
  return {s * a.val, a.deg};
}

// Collection of graded-symmetric n-ary brackets, each raising the
// structural degree by one. Missing arities act as zero.
struct LinftyStructure {
  using Op = std::function<SuperPoly(const std::vector<GradedElem>&)>;
  std::map<int, Op> ops;
  GenTablePtr table;

  GradedElem zero() const { return {SuperPoly::zero(table), 0}; }

  GradedElem apply(int arity, const std::vector<GradedElem>& args) const {
    if (static_cast<int>(args.size()) != arity)
      throw ArgumentError("arity mismatch in bracket application");
    int deg = 1;
    for (const auto& a : args) deg += a.deg;
    auto it = ops.find(arity);
    if (it == ops.end()) return {SuperPoly::zero(table), deg};
    return {it->second(args), deg};
  }
};

namespace detail {

inline std::vector<int> elem_degs(const std::vector<GradedElem>& args) {
  std::vector<int> d;
  d.reserve(args.size());
  for (const auto& a : args) d.push_back(a.deg);
  return d;
}

}  // namespace detail

// n-th Jacobiator: sum over r+s = n, r >= 1, and (r,s)-unshuffles of
//   sign(sigma) m^{s+1}( m^r(x_{sigma first}) , x_{sigma rest} ).
// Vanishing for all n is the defining identity of the structure.
inline GradedElem jacobiator(const LinftyStructure& S, int n,
                             const std::vector<GradedElem>& args) {
  if (static_cast<int>(args.size()) != n)
    throw ArgumentError("jacobiator arity mismatch");
  auto degs = detail::elem_degs(args);
  GradedElem total = S.zero();
  bool set = false;
  for (int r = 1; r <= n; ++r) {
    int s = n - r;
    for (const auto& sigma : unshuffles(r, s)) {
      int sign = koszul_sign(sigma, degs);
      std::vector<GradedElem> first, rest;
      for (int i = 0; i < r; ++i) first.push_back(args[sigma[i]]);
      for (int i = r; i < n; ++i) rest.push_back(args[sigma[i]]);
      GradedElem inner = S.apply(r, first);
      std::vector<GradedElem> outer;
      outer.reserve(s + 1);
      outer.push_back(inner);
      for (auto& a : rest) outer.push_back(a);
      GradedElem term = Rational(sign) * S.apply(s + 1, outer);
      if (!set) {
        total = term;
        set = true;
      } else {
        total = total + term;
      }
    }
  }
  return total;
}

struct JacobiReport {
  bool ok = true;
  int arity = 0;
  std::string detail;
};

// Check the generalized Jacobi identities up to max_arity on sampled
// homogeneous tuples. `sample` must return elements the structure acts on.
inline JacobiReport check_linfty(const LinftyStructure& S, int max_arity,
                                 int trials_per_arity,
                                 const std::function<GradedElem(int)>& sample) {
  for (int n = 1; n <= max_arity; ++n)
    for (int t = 0; t < trials_per_arity; ++t) {
      std::vector<GradedElem> args;
      for (int i = 0; i < n; ++i) args.push_back(sample(t * n + i));
      GradedElem J = jacobiator(S, n, args);
      if (!J.is_zero()) {
        JacobiReport r;
        r.ok = false;
        r.arity = n;
        r.detail = "jacobiator residual " + J.val.str();
        return r;
      }
    }
  return {};
}

// sum_{n>=1} (1/n!) m^n(mu, ..., mu) truncated at max_arity. A solution of
// the Maurer-Cartan equation has residual zero; mu must have degree 0.
inline GradedElem mc_residual(const LinftyStructure& S, const GradedElem& mu,
                              int max_arity) {
  if (!mu.is_zero() && mu.deg != 0)
    throw ArgumentError("curved element must have degree 0");
  GradedElem acc = {SuperPoly::zero(S.table), 1};
  for (int n = 1; n <= max_arity; ++n) {
    std::vector<GradedElem> args(n, mu);
    GradedElem term = S.apply(n, args);
    acc = acc + Rational(1) / factorial(n) * term;
  }
  return acc;
}

// Degree-0 multilinear family F = (F^1, F^2, ...); F^n symmetric of degree 0.
struct LinftyMorphism {
  using Comp = std::function<SuperPoly(const std::vector<GradedElem>&)>;
  std::map<int, Comp> comps;
  GenTablePtr table;

  GradedElem apply(int arity, const std::vector<GradedElem>& args) const {
    int deg = 0;
    for (const auto& a : args) deg += a.deg;
    auto it = comps.find(arity);
    if (it == comps.end()) return {SuperPoly::zero(table), deg};
    return {it->second(args), deg};
  }
};

// Defect of F being a morphism from S into a two-term target (d, bracket):
//   d F^n(x) + 1/2 sum_{r+s=n, r,s>=1} sum_unshuffles sign mu2(F^r, F^s)
//     - sum_{r=1..n} sum_unshuffles sign F^{s+1}(m^r (x) rest).
// Zero for all n and all homogeneous tuples characterizes a morphism.
inline GradedElem morphism_defect(const LinftyStructure& src,
                                  const LinftyStructure& dst,
                                  const LinftyMorphism& F, int n,
                                  const std::vector<GradedElem>& args) {
  if (static_cast<int>(args.size()) != n)
    throw ArgumentError("morphism_defect arity mismatch");
  auto degs = detail::elem_degs(args);

  GradedElem total = dst.apply(1, {F.apply(n, args)});

  for (int r = 1; r <= n - 1; ++r) {
    int s = n - r;
    for (const auto& sigma : unshuffles(r, s)) {
      int sign = koszul_sign(sigma, degs);
      std::vector<GradedElem> first, rest;
      for (int i = 0; i < r; ++i) first.push_back(args[sigma[i]]);
      for (int i = r; i < n; ++i) rest.push_back(args[sigma[i]]);
      GradedElem term =
          dst.apply(2, {F.apply(r, first), F.apply(s, rest)});
      total = total + Rational(sign, 2) * term;
    }
  }

  for (int r = 1; r <= n; ++r) {
    int s = n - r;
    for (const auto& sigma : unshuffles(r, s)) {
      int sign = koszul_sign(sigma, degs);
      std::vector<GradedElem> first, rest;
      for (int i = 0; i < r; ++i) first.push_back(args[sigma[i]]);
      for (int i = r; i < n; ++i) rest.push_back(args[sigma[i]]);
      GradedElem inner = src.apply(r, first);
      std::vector<GradedElem> outer;
      outer.push_back(inner);
      for (auto& a : rest) outer.push_back(a);
      total = total + Rational(-sign) * F.apply(s + 1, outer);
    }
  }
  return total;
}

}  // namespace bfvcalc
