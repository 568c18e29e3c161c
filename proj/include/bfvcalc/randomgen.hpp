#pragma once

#include "bfvcalc/superpoly.hpp"

#include <random>
#include <vector>

namespace bfvcalc {

// Deterministic sampler for property tests. All randomness in the library
// and the tools flows through explicitly seeded instances of this.
struct PolySampler {
  std::mt19937_64 rng;
  GenTablePtr table;
  std::vector<int> allowed;
  int max_factors = 3;

  PolySampler(uint64_t seed, GenTablePtr t, std::vector<int> ids)
      : rng(seed), table(std::move(t)), allowed(std::move(ids)) {}

  int pick_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  }

  Rational coefficient() {
    int c = pick_int(1, 3);
    return pick_int(0, 1) ? Rational(c) : Rational(-c);
  }

  // One nonzero monomial (odd squares are resampled away).
  SuperPoly monomial() {
    for (int attempt = 0; attempt < 64; ++attempt) {
      SuperPoly m = SuperPoly::constant(table, coefficient());
      int nf = pick_int(1, max_factors);
      for (int k = 0; k < nf; ++k)
        m = m * SuperPoly::generator(table, allowed[static_cast<size_t>(
                                          pick_int(0, static_cast<int>(allowed.size()) - 1))]);
      if (!m.is_zero()) return m;
    }
    return SuperPoly::constant(table, 1);
  }

  SuperPoly poly(int max_terms) {
    SuperPoly p = SuperPoly::zero(table);
    int n = pick_int(1, max_terms);
    for (int k = 0; k < n; ++k) p += monomial();
    return p;
  }

  // Homogeneous of the requested total degree, by rejection. May return
  // fewer terms than asked for if the degree is hard to hit; callers pick
  // degrees their generator pool can realize.
  SuperPoly homogeneous(int degree, int max_terms) {
    SuperPoly p = SuperPoly::zero(table);
    int want = pick_int(1, max_terms);
    int got = 0;
    for (int attempt = 0; attempt < 400 && got < want; ++attempt) {
      SuperPoly m = monomial();
      int d = 0;
      if (m.is_homogeneous(&d) && d == degree) {
        p += m;
        ++got;
      }
    }
    return p;
  }
};

}  // namespace bfvcalc
