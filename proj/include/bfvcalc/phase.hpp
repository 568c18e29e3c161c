#pragma once

#include "bfvcalc/errors.hpp"
#include "bfvcalc/superpoly.hpp"

#include <array>
#include <map>
#include <vector>

namespace bfvcalc {

// Coordinate ring of the shifted cotangent bundle attached to a trivial
// vector bundle of rank e over a base subspace sitting inside R^{s+e}.
//
// generator  degree  meaning
//   x1..xs      0    base coordinates
//   y1..ye      0    transverse coordinates
//   c1..ce     +1    frame of the bundle (ghosts)
//   b1..be     -1    dual frame (antighosts)
//   xs*,ys*    +1    momenta of x, y
//   cs*         0    momenta of c
//   bs*        +2    momenta of b
//
// The canonical bracket has degree -1 and is pinned by
//   [momentum, coordinate] = +1   on conjugate pairs,
//   [coordinate, momentum] = -1   (both parities; see sn_bracket).
// Consequences used by tests: for P = sum_{a<b} P^{ab} zs_a zs_b the
// second derived bracket is P^2(f,g) = -P^{ab} df/dza dg/dzb.
enum class GenKind {
  base,
  fiber,
  ghost,
  antighost,
  base_mom,
  fiber_mom,
  ghost_mom,
  antighost_mom
};

struct PhaseSpace {
  GenTablePtr table;
  int s = 0;
  int e = 0;

  static PhaseSpace make(int s, int e) {
    if (s < 1 || e < 1) throw ArgumentError("dimensions must be positive");
    auto t = std::make_shared<GenTable>();
    auto family = [&](const std::string& stem, int count, int degree) {
      for (int i = 1; i <= count; ++i) t->add(stem + std::to_string(i), degree);
    };
    family("x", s, 0);
    family("y", e, 0);
    family("c", e, 1);
    family("b", e, -1);
    family("xs", s, 1);
    family("ys", e, 1);
    family("cs", e, 0);
    family("bs", e, 2);
    return PhaseSpace{std::move(t), s, e};
  }

  // Id layout mirrors the family order above; indices are 0-based here.
  int x(int a) const { return a; }
  int y(int j) const { return s + j; }
  int c(int j) const { return s + e + j; }
  int b(int j) const { return s + 2 * e + j; }
  int xs(int a) const { return s + 3 * e + a; }
  int ys(int j) const { return 2 * s + 3 * e + j; }
  int cs(int j) const { return 2 * s + 4 * e + j; }
  int bs(int j) const { return 2 * s + 5 * e + j; }

  GenKind kind(int id) const {
    if (id < s) return GenKind::base;
    id -= s;
    if (id < e) return GenKind::fiber;
    id -= e;
    if (id < e) return GenKind::ghost;
    id -= e;
    if (id < e) return GenKind::antighost;
    id -= e;
    if (id < s) return GenKind::base_mom;
    id -= s;
    if (id < e) return GenKind::fiber_mom;
    id -= e;
    if (id < e) return GenKind::ghost_mom;
    id -= e;
    if (id < e) return GenKind::antighost_mom;
    throw ArgumentError("generator id out of range");
  }

  bool is_momentum(int id) const { return id >= s + 3 * e; }

  int partner(int id) const {
    switch (kind(id)) {
      case GenKind::base: return xs(id);
      case GenKind::fiber: return ys(id - s);
      case GenKind::ghost: return cs(id - s - e);
      case GenKind::antighost: return bs(id - s - 2 * e);
      case GenKind::base_mom: return id - s - 3 * e;
      case GenKind::fiber_mom: return y(id - 2 * s - 3 * e);
      case GenKind::ghost_mom: return c(id - 2 * s - 4 * e);
      case GenKind::antighost_mom: return b(id - 2 * s - 5 * e);
    }
    throw InternalError("unreachable");
  }

  SuperPoly gen(int id) const { return SuperPoly::generator(table, id); }
  SuperPoly zero() const { return SuperPoly::zero(table); }
  SuperPoly constant(const Rational& r) const { return SuperPoly::constant(table, r); }

  std::vector<int> ids_of(std::initializer_list<GenKind> kinds) const {
    std::vector<int> out;
    for (int id = 0; id < table->size(); ++id)
      for (GenKind k : kinds)
        if (kind(id) == k) out.push_back(id);
    return out;
  }
  std::vector<int> fiber_direction_ids() const {
    return ids_of({GenKind::ghost, GenKind::antighost, GenKind::ghost_mom,
                   GenKind::antighost_mom});
  }
  std::vector<int> momentum_ids() const {
    return ids_of({GenKind::base_mom, GenKind::fiber_mom, GenKind::ghost_mom,
                   GenKind::antighost_mom});
  }

  // Exponent totals of the four bundle families in one monomial.
  struct FiberCounts {
    int c = 0, b = 0, cs = 0, bs = 0;
    int total() const { return c + b + cs + bs; }
  };
  FiberCounts fiber_counts(const Monomial& m) const {
    FiberCounts out;
    for (auto [id, exp] : m.f) switch (kind(id)) {
        case GenKind::ghost: out.c += exp; break;
        case GenKind::antighost: out.b += exp; break;
        case GenKind::ghost_mom: out.cs += exp; break;
        case GenKind::antighost_mom: out.bs += exp; break;
        default: break;
      }
    return out;
  }

  // Membership in the bifiltration: every term multiplies at least m frame
  // and n dual-frame factors.
  bool in_filtration(const SuperPoly& p, int m, int n) const {
    for (const auto& [mono, coeff] : p.terms()) {
      auto fc = fiber_counts(mono);
      if (fc.c < m || fc.b < n) return false;
    }
    return true;
  }
};

namespace detail {

inline SuperPoly mono_poly(const PhaseSpace& P, const Monomial& m) {
  SuperPoly r = P.constant(1);
  for (auto [id, e] : m.f)
    for (int k = 0; k < e; ++k) r = r * P.gen(id);
  return r;
}

// [mA, mB] by peeling the leftmost factor u of mA:
//   [u A, B] = u [A, B] + (-1)^{|A| (|B|-1)} [u, B] A
// with the base case [u, B] = pairing(u) * d B / d partner(u).
inline SuperPoly sn_bracket_mono(const PhaseSpace& P, const Monomial& mA,
                                 const Monomial& mB) {
  if (mA.empty() || mB.empty()) return P.zero();
  const GenTable& t = *P.table;
  auto [g, e] = mA.f.front();
  Monomial rest = mA;
  if (e == 1)
    rest.f.erase(rest.f.begin());
  else
    rest.f.front().second = e - 1;

  SuperPoly out = P.gen(g) * sn_bracket_mono(P, rest, mB);

  int pid = P.partner(g);
  if (mB.exponent_of(pid) > 0) {
    int pairing = P.is_momentum(g) ? 1 : -1;
    int rest_par = mono_parity(rest, t);
    int eps_B = (mono_degree(mB, t) - 1) & 1;
    int sign = (rest_par && eps_B) ? -1 : 1;
    SuperPoly dB = mono_poly(P, mB).partial(pid);
    out += Rational(sign * pairing) * (dB * mono_poly(P, rest));
  }
  return out;
}

}  // namespace detail

// Degree -1 Poisson bracket of the shifted cotangent bundle. Graded
// skew-symmetric and Jacobi for the shifted degree |A| - 1; a derivation of
// its second slot in the ordinary product.
inline SuperPoly sn_bracket(const PhaseSpace& P, const SuperPoly& A,
                            const SuperPoly& B) {
  SuperPoly out = P.zero();
  for (const auto& [mA, cA] : A.terms())
    for (const auto& [mB, cB] : B.terms())
      out += (cA * cB) * detail::sn_bracket_mono(P, mA, mB);
  return out;
}

// Connection coefficients Gamma^{t}_{alpha r}: polynomials in the base
// coordinates only. alpha indexes x, r and t index the frame; all 0-based.
// The zero map is a valid (flat) connection.
struct Connection {
  std::map<std::array<int, 3>, SuperPoly> coef;  // key {alpha, r, t}

  SuperPoly get(const PhaseSpace& P, int alpha, int r, int t) const {
    auto it = coef.find({alpha, r, t});
    return it == coef.end() ? P.zero() : it->second;
  }

  void set(const PhaseSpace& P, int alpha, int r, int t, SuperPoly value) {
    for (const auto& [m, c] : value.terms())
      for (auto [id, e] : m.f)
        if (P.kind(id) != GenKind::base)
          throw ArgumentError("connection entries must be polynomial in the base coordinates");
    if (!value.is_zero()) coef[{alpha, r, t}] = std::move(value);
  }
};

namespace detail {

// Substitution sending each base momentum to its covariant version:
//   xs_alpha -> xs_alpha + dir * Gamma^{t}_{alpha r} (c_t cs_r - b_r bs_t).
inline SuperPoly covariant_sub(const PhaseSpace& P, const Connection& G,
                               const SuperPoly& A, int dir) {
  std::map<int, SuperPoly> images;
  for (int a = 0; a < P.s; ++a) {
    SuperPoly corr = P.zero();
    for (int r = 0; r < P.e; ++r)
      for (int t = 0; t < P.e; ++t) {
        SuperPoly gamma = G.get(P, a, r, t);
        if (gamma.is_zero()) continue;
        corr += gamma * (P.gen(P.c(t)) * P.gen(P.cs(r)) -
                         P.gen(P.b(r)) * P.gen(P.bs(t)));
      }
    if (!corr.is_zero())
      images.emplace(P.xs(a), P.gen(P.xs(a)) + Rational(dir) * corr);
  }
  return images.empty() ? A : A.substitute(images);
}

}  // namespace detail

// Horizontal lift: an algebra morphism, identity on everything except that
// base momenta pick up the connection correction.
inline SuperPoly iota_lift(const PhaseSpace& P, const Connection& G,
                           const SuperPoly& A) {
  return detail::covariant_sub(P, G, A, +1);
}

// Exact inverse of iota_lift (the corrections carry no base momenta).
inline SuperPoly iota_lift_inv(const PhaseSpace& P, const Connection& G,
                               const SuperPoly& A) {
  return detail::covariant_sub(P, G, A, -1);
}

// Projection killing all bundle directions. Independent of the connection:
// conjugating by the lift only shuffles terms that die here anyway.
inline SuperPoly pr_base(const PhaseSpace& P, const SuperPoly& A) {
  return A.set_zero(P.fiber_direction_ids());
}

// Ghost charge G = sum_j cs_j bs_j; its bracket is the ghost differential.
inline SuperPoly ghost_charge(const PhaseSpace& P) {
  SuperPoly g = P.zero();
  for (int j = 0; j < P.e; ++j) g += P.gen(P.cs(j)) * P.gen(P.bs(j));
  return g;
}

inline SuperPoly ghost_differential(const PhaseSpace& P, const SuperPoly& A) {
  return sn_bracket(P, ghost_charge(P), A);
}

namespace detail {

// Odd contracting derivation bs_j -> c_j, cs_j -> b_j.
inline SuperPoly htilde(const PhaseSpace& P, const SuperPoly& A) {
  SuperPoly out = P.zero();
  for (int j = 0; j < P.e; ++j) {
    out += P.gen(P.c(j)) * A.partial(P.bs(j));
    out += P.gen(P.b(j)) * A.partial(P.cs(j));
  }
  return out;
}

}  // namespace detail

// Fiberwise homotopy for the ghost differential, twisted by the connection:
// conjugate by the lift, contract, divide by the total bundle weight of each
// monomial (zero on weight-0 terms). Satisfies, exactly,
//   Q H + H Q = id - iota_lift . pr_base,   H^2 = 0,
//   H . iota_lift = 0,   pr_base . H = 0.
inline SuperPoly h_fiber(const PhaseSpace& P, const Connection& G,
                         const SuperPoly& A) {
  SuperPoly flat = iota_lift_inv(P, G, A);
  std::map<int, SuperPoly> by_weight;
  for (const auto& [m, c] : flat.terms()) {
    int w = P.fiber_counts(m).total();
    if (w == 0) continue;
    by_weight.try_emplace(w, P.zero()).first->second.add_term(m, c);
  }
  SuperPoly acc = P.zero();
  for (const auto& [w, part] : by_weight)
    acc += Rational(1, w) * detail::htilde(P, part);
  return iota_lift(P, G, acc);
}

}  // namespace bfvcalc
