#pragma once

#include "bfvcalc/bfv.hpp"
#include "bfvcalc/linalg.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bfvcalc {

// Sections of the bundle enter as one base polynomial per fiber direction.
inline void require_section(const PhaseSpace& P,
                            const std::vector<SuperPoly>& mu) {
  if (static_cast<int>(mu.size()) != P.e)
    throw ArgumentError("section needs one component per fiber direction");
  for (const auto& comp : mu)
    for (const auto& [m, coef] : comp.terms())
      for (auto [id, ex] : m.f)
        if (P.kind(id) != GenKind::base)
          throw ArgumentError(
              "section components must be polynomials in the base "
              "coordinates");
}

// Pairing of a section against the ghosts, sum mu^j c_j.
inline SuperPoly section_term(const PhaseSpace& P,
                              const std::vector<SuperPoly>& mu) {
  require_section(P, mu);
  SuperPoly r = P.zero();
  for (int j = 0; j < P.e; ++j) r += mu[static_cast<size_t>(j)] * P.gen(P.c(j));
  return r;
}

// Restriction to the graph of a section: fiber coordinates evaluate to the
// negated components, antighosts die. The sign matches the convention that
// the graph is cut out by y + mu(x).
inline SuperPoly graph_restrict(const PhaseSpace& P,
                                const std::vector<SuperPoly>& mu,
                                const SuperPoly& A) {
  require_section(P, mu);
  std::vector<int> bids;
  for (int j = 0; j < P.e; ++j) bids.push_back(P.b(j));
  SuperPoly r = A.set_zero(bids);
  std::map<int, SuperPoly> images;
  for (int j = 0; j < P.e; ++j)
    images.emplace(P.y(j), -mu[static_cast<size_t>(j)]);
  return r.substitute(images);
}

// Koszul differential of the fiber coordinates shifted onto the graph.
inline SuperPoly shifted_delta(const PhaseSpace& P,
                               const std::vector<SuperPoly>& mu,
                               const SuperPoly& A) {
  SuperPoly r = delta(P, A);
  for (int j = 0; j < P.e; ++j)
    r += mu[static_cast<size_t>(j)] * A.partial(P.b(j));
  return r;
}

// Homotopy conjugated by the shift of the fiber coordinates: satisfies the
// side conditions of homotopy_h relative to shifted_delta, with the graph
// restriction in place of the base one.
inline SuperPoly shifted_homotopy(const PhaseSpace& P,
                                  const std::vector<SuperPoly>& mu,
                                  const SuperPoly& A) {
  require_section(P, mu);
  std::map<int, SuperPoly> down, up;
  for (int j = 0; j < P.e; ++j) {
    const SuperPoly& c = mu[static_cast<size_t>(j)];
    if (c.is_zero()) continue;
    down.emplace(P.y(j), P.gen(P.y(j)) - c);
    up.emplace(P.y(j), P.gen(P.y(j)) + c);
  }
  if (down.empty()) return homotopy_h(P, A);
  return homotopy_h(P, A.substitute(down)).substitute(up);
}

// Projection onto the section-shaped part: ghost count one, no antighosts.
inline SuperPoly truncation_T(const PhaseSpace& P, const SuperPoly& A) {
  return bigrade_part(P, A, 1, 0);
}

// Square of the deformed charge; zero exactly on solutions.
inline SuperPoly mc_residual_bfv(const BfvSetup& S, const SuperPoly& beta) {
  const PhaseSpace& P = S.phase();
  for (const auto& [m, coef] : beta.terms())
    if (mono_degree(m, *P.table) != 1)
      throw ArgumentError("deformation term " + detail::mono_poly(P, m).str() +
                          " does not have total degree one");
  SuperPoly full = S.omega + beta;
  return bfv_bracket(S, full, full);
}

// A solution is normalized when its visible part pairs a plain base section
// against the ghosts.
inline bool is_normalized(const PhaseSpace& P, const SuperPoly& beta) {
  return is_small(P, truncation_T(P, beta));
}

struct ExtensionResult {
  bool coisotropic = false;
  SuperPoly obstruction;  // graph restriction of the squared naive extension
  SuperPoly beta;         // deformation with truncation equal to the section
  std::vector<SuperPoly> levels;  // correction added at each antighost level
};

// Extend the graph of a section to a solution of the structure equation.
// The graph restriction of the first self bracket is the full obstruction:
// when it vanishes the same induction that builds the charge goes through
// with the shifted differential and homotopy.
inline ExtensionResult extend_section_to_mc(const BfvSetup& S,
                                            const std::vector<SuperPoly>& mu) {
  const PhaseSpace& P = S.phase();
  SuperPoly pmu = section_term(P, mu);
  SuperPoly full = tautological_term(P) + pmu;
  ExtensionResult out;
  out.obstruction = P.zero();
  out.beta = P.zero();
  for (int k = 0;; ++k) {
    SuperPoly r = bfv_bracket(S, full, full);
    if (k == 0) {
      out.obstruction = graph_restrict(P, mu, r);
      if (!out.obstruction.is_zero()) return out;
      out.coisotropic = true;
    }
    if (r.is_zero()) break;
    if (k >= P.e)
      throw InternalError(
          "extension residual survives past the antighost bound: " + r.str());
    for (int q = 0; q < k; ++q)
      if (!antighost_part(P, r, q).is_zero())
        throw InternalError("extension residual reappeared below level " +
                            std::to_string(k));
    SuperPoly rk = Rational(1, 2) * antighost_part(P, r, k);
    if (rk.is_zero()) continue;
    if (!shifted_delta(P, mu, rk).is_zero())
      throw InternalError("extension obstruction is not closed: " + rk.str());
    if (!graph_restrict(P, mu, rk).is_zero())
      throw InternalError("extension obstruction survives on the graph: " +
                          rk.str());
    SuperPoly corr = -shifted_homotopy(P, mu, rk);
    if (corr != bigrade_part(P, corr, k + 2, k + 1))
      throw InternalError("extension correction leaves bigrade (" +
                          std::to_string(k + 2) + ", " +
                          std::to_string(k + 1) + "): " + corr.str());
    out.levels.push_back(corr);
    full += corr;
  }
  out.beta = full - S.omega;
  if (truncation_T(P, out.beta) != pmu)
    throw InternalError("extension changed the visible section");
  return out;
}

namespace detail {

// exp(sign [eps, -]) for an even generator whose bracket raises the
// antighost count; the raise makes the series finite.
inline SuperPoly inner_gauge(const BfvSetup& S, const SuperPoly& eps,
                             const SuperPoly& start, int sign) {
  SuperPoly acc = start, term = start;
  for (int n = 1; n <= 2 * S.phase().e + 2; ++n) {
    term = Rational(sign, n) * bfv_bracket(S, eps, term);
    if (term.is_zero()) return acc;
    acc += term;
  }
  throw InternalError("gauge exponential failed to terminate");
}

}  // namespace detail

// Connect two solutions with equal normalized truncation by a finite chain
// of inner automorphisms, one per antighost level. Returns the generators;
// composing exp(-[eps, -]) over them in order maps the first argument
// exactly onto the second.
inline std::vector<SuperPoly> gauge_between(const BfvSetup& S,
                                            const SuperPoly& alpha,
                                            const SuperPoly& beta) {
  const PhaseSpace& P = S.phase();
  if (!mc_residual_bfv(S, alpha).is_zero())
    throw PreconditionError("first element does not solve the structure equation");
  if (!mc_residual_bfv(S, beta).is_zero())
    throw PreconditionError("second element does not solve the structure equation");
  SuperPoly ta = truncation_T(P, alpha);
  if (ta != truncation_T(P, beta))
    throw PreconditionError("elements deform different sections");
  if (!is_small(P, ta))
    throw PreconditionError("shared truncation is not normalized");
  std::vector<SuperPoly> mu;
  for (int j = 0; j < P.e; ++j) mu.push_back(ta.partial(P.c(j)));

  SuperPoly work = alpha;
  std::vector<SuperPoly> gens;
  for (int k = 1; k <= P.e; ++k) {
    SuperPoly diff = beta - work;
    if (diff.is_zero()) break;
    for (int q = 0; q < k; ++q)
      if (!antighost_part(P, diff, q).is_zero())
        throw InternalError("gauge difference dropped below level " +
                            std::to_string(k));
    SuperPoly dk = antighost_part(P, diff, k);
    if (dk.is_zero()) continue;
    SuperPoly eps = -shifted_homotopy(P, mu, dk);
    if (shifted_delta(P, mu, eps) != -dk)
      throw InternalError("level difference is not exact at level " +
                          std::to_string(k) + ": " + dk.str());
    work = detail::inner_gauge(S, eps, S.omega + work, -1) - S.omega;
    gens.push_back(eps);
  }
  if (work != beta)
    throw InternalError("gauge composition failed to reach the target");
  return gens;
}

// Deformations with a formal parameter: order of the parameter mapped to
// the coefficient. Orders above the working cutoff are dropped eagerly.
using FormalPoly = std::map<int, SuperPoly>;

inline void formal_trim(FormalPoly& a) {
  for (auto it = a.begin(); it != a.end();)
    it = it->second.is_zero() ? a.erase(it) : std::next(it);
}

inline FormalPoly formal_add(const FormalPoly& a, const FormalPoly& b) {
  FormalPoly r = a;
  for (const auto& [o, v] : b) {
    auto it = r.find(o);
    if (it == r.end())
      r.emplace(o, v);
    else
      it->second += v;
  }
  formal_trim(r);
  return r;
}

inline FormalPoly formal_bracket(const BfvSetup& S, const FormalPoly& a,
                                 const FormalPoly& b, int cutoff) {
  FormalPoly r;
  for (const auto& [i, ai] : a)
    for (const auto& [j, bj] : b) {
      if (i + j > cutoff) continue;
      SuperPoly v = bfv_bracket(S, ai, bj);
      if (v.is_zero()) continue;
      auto it = r.try_emplace(i + j, S.phase().zero()).first;
      it->second += v;
    }
  formal_trim(r);
  return r;
}

// Square of the deformed charge through the given order.
inline FormalPoly formal_mc_residual(const BfvSetup& S, const FormalPoly& beta,
                                     int cutoff) {
  FormalPoly full = beta;
  auto it = full.try_emplace(0, S.phase().zero()).first;
  it->second += S.omega;
  return formal_bracket(S, full, full, cutoff);
}

// exp([g, -]) applied to the charge, as a formal series in the parameter.
// g must start at order one; the result is the deformation part only (the
// charge itself is subtracted). Solutions built this way are exactly the
// gauge-trivial ones, the inverse of the exp(-ad) steps the normalization
// composes.
inline FormalPoly formal_gauge_of_charge(const BfvSetup& S, const FormalPoly& g,
                                         int order) {
  if (!g.empty() && g.begin()->first < 1)
    throw ArgumentError("gauge generator must start at order one");
  FormalPoly acc, term;
  term.emplace(0, S.omega);
  acc = term;
  for (int n = 1; n <= order; ++n) {
    term = formal_bracket(S, g, term, order);
    if (term.empty()) break;
    for (auto& [o, v] : term) v = Rational(1, n) * v;
    acc = formal_add(acc, term);
  }
  acc.erase(0);
  return acc;
}

struct FormalNormalization {
  std::vector<std::pair<int, SuperPoly>> gens;  // (order, generator)
  FormalPoly beta;
};

// Push the visible part of a formal solution off the fiber coordinates,
// one order of the parameter at a time. Each step applies exp(-[gen eps^l, -])
// for a ghost-count-one generator gen; the bracket action raises the
// parameter order, so every exponential is a finite sum.
inline FormalNormalization normalize_formal_mc(const BfvSetup& S,
                                               FormalPoly beta, int order) {
  const PhaseSpace& P = S.phase();
  if (order < 0) throw ArgumentError("order must be nonnegative");
  beta.erase(beta.upper_bound(order), beta.end());
  formal_trim(beta);
  if (!beta.empty() && beta.begin()->first < 1)
    throw ArgumentError("deformation must start at order one");
  for (const auto& [o, v] : beta)
    for (const auto& [m, coef] : v.terms())
      if (mono_degree(m, *P.table) != 1)
        throw ArgumentError("deformation term " +
                            detail::mono_poly(P, m).str() +
                            " does not have total degree one");
  {
    FormalPoly res = formal_mc_residual(S, beta, order);
    if (!res.empty())
      throw PreconditionError(
          "structure equation fails at order " +
          std::to_string(res.begin()->first) + ": " +
          res.begin()->second.str());
  }

  FormalNormalization out;
  out.beta = std::move(beta);
  for (int l = 1; l <= order; ++l) {
    auto at = out.beta.find(l);
    if (at == out.beta.end()) continue;
    SuperPoly visible = truncation_T(P, at->second);
    SuperPoly gen = homotopy_h(P, visible);
    if (gen.is_zero()) continue;  // already free of fiber coordinates

    FormalPoly full = out.beta;
    full.try_emplace(0, P.zero()).first->second += S.omega;
    FormalPoly acc = full, term = full;
    for (int n = 1; n * l <= order; ++n) {
      FormalPoly next;
      for (const auto& [o, v] : term) {
        if (o + l > order) continue;
        SuperPoly w = Rational(-1, n) * bfv_bracket(S, gen, v);
        if (w.is_zero()) continue;
        next.try_emplace(o + l, P.zero()).first->second += w;
      }
      formal_trim(next);
      term = std::move(next);
      if (term.empty()) break;
      acc = formal_add(acc, term);
    }
    acc.try_emplace(0, P.zero()).first->second -= S.omega;
    formal_trim(acc);
    out.beta = std::move(acc);
    out.gens.emplace_back(l, gen);
  }

  for (const auto& [o, v] : out.beta)
    if (!is_small(P, truncation_T(P, v)))
      throw InternalError("normalization left a fiber-dependent section at order " +
                          std::to_string(o));
  if (!formal_mc_residual(S, out.beta, order).empty())
    throw InternalError("normalization broke the structure equation");
  return out;
}

namespace detail {

// All monomials in the listed even generators with total polynomial degree
// at most the bound, constant included.
inline void monomials_up_to(const PhaseSpace& P, const std::vector<int>& ids,
                            int bound, size_t at, const SuperPoly& prefix,
                            std::vector<SuperPoly>& out) {
  if (at == ids.size()) {
    out.push_back(prefix);
    return;
  }
  SuperPoly cur = prefix;
  for (int k = 0; k <= bound; ++k) {
    monomials_up_to(P, ids, bound - k, at + 1, cur, out);
    cur = cur * P.gen(ids[at]);
  }
}

}  // namespace detail

struct CoisotropeReport {
  std::vector<SuperPoly> generators;  // one cutting function per fiber slot
  // pair (i, j), zero-based -> expansion coefficients, one per generator;
  // empty optional when no certificate exists within the degree bound
  std::map<std::pair<int, int>, std::optional<std::vector<SuperPoly>>>
      certificates;
  bool closed = true;
};

// Cutting functions of the deformed zero set and exact closure certificates
// for their pairwise classical brackets, with expansion coefficients of
// bounded degree. Absence of a certificate is a finding, not an error.
inline CoisotropeReport coisotrope_generators(const BfvSetup& S,
                                              const SuperPoly& beta,
                                              int degree_bound) {
  const PhaseSpace& P = S.phase();
  if (!mc_residual_bfv(S, beta).is_zero())
    throw PreconditionError("element does not solve the structure equation");
  if (!is_normalized(P, beta))
    throw PreconditionError("element is not normalized");
  SuperPoly vis = truncation_T(P, beta);

  CoisotropeReport out;
  for (int j = 0; j < P.e; ++j)
    out.generators.push_back(P.gen(P.y(j)) + vis.partial(P.c(j)));

  std::vector<int> fun_ids;
  for (int a = 0; a < P.s; ++a) fun_ids.push_back(P.x(a));
  for (int j = 0; j < P.e; ++j) fun_ids.push_back(P.y(j));
  std::vector<SuperPoly> basis;
  detail::monomials_up_to(P, fun_ids, degree_bound, 0, P.constant(1), basis);

  for (int i = 0; i < P.e; ++i)
    for (int j = i + 1; j < P.e; ++j) {
      SuperPoly lhs = pi_bracket(S, out.generators[static_cast<size_t>(i)],
                                 out.generators[static_cast<size_t>(j)]);
      std::vector<SuperPoly> cols;
      for (int k = 0; k < P.e; ++k)
        for (const auto& mono : basis)
          cols.push_back(mono * out.generators[static_cast<size_t>(k)]);
      std::map<Monomial, size_t> rows;
      auto index_rows = [&rows](const SuperPoly& p) {
        for (const auto& [m, coef] : p.terms()) rows.try_emplace(m, rows.size());
      };
      index_rows(lhs);
      for (const auto& col : cols) index_rows(col);
      Mat a = mat_zero(rows.size(), cols.size());
      Vec b(rows.size(), Rational(0));
      for (size_t cidx = 0; cidx < cols.size(); ++cidx)
        for (const auto& [m, coef] : cols[cidx].terms())
          a[rows.at(m)][cidx] = coef;
      for (const auto& [m, coef] : lhs.terms()) b[rows.at(m)] = coef;
      auto sol = solve_linear(std::move(a), std::move(b));
      if (!sol) {
        out.certificates[{i, j}] = std::nullopt;
        out.closed = false;
        continue;
      }
      std::vector<SuperPoly> coeffs;
      for (int k = 0; k < P.e; ++k) {
        SuperPoly ck = P.zero();
        for (size_t m = 0; m < basis.size(); ++m) {
          const Rational& val =
              (*sol)[static_cast<size_t>(k) * basis.size() + m];
          if (val != 0) ck += val * basis[m];
        }
        coeffs.push_back(ck);
      }
      out.certificates[{i, j}] = std::move(coeffs);
    }
  return out;
}

}  // namespace bfvcalc
