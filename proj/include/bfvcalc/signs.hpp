#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace bfvcalc {

// Permutations are 0-based: perm[i] is the index of the original slot whose
// entry lands in position i after the move x_0 (x) ... (x) x_{n-1}  |->
// x_{perm[0]} (x) ... (x) x_{perm[n-1]}.
using Perm = std::vector<int>;

inline bool is_permutation_of_n(const Perm& p) {
  std::vector<char> seen(p.size(), 0);
  for (int v : p) {
    if (v < 0 || v >= static_cast<int>(p.size()) || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

// Koszul sign of rearranging graded symbols with the given degrees (only
// parity matters). Computed by decomposing the move into adjacent swaps:
// every inversion pair crossed contributes (-1)^{deg_u * deg_v}. The bubble
// pass is the decomposition itself, so the result is convention-free once
// the meaning of `perm` above is fixed.
inline int koszul_sign(const Perm& perm, const std::vector<int>& degrees) {
  if (perm.size() != degrees.size())
    throw std::invalid_argument("koszul_sign: size mismatch");
  if (!is_permutation_of_n(perm))
    throw std::invalid_argument("koszul_sign: not a permutation");
  std::vector<int> work = perm;
  int sign = 1;
  for (size_t pass = 0; pass + 1 < work.size(); ++pass) {
    for (size_t i = 0; i + 1 < work.size() - pass; ++i) {
      if (work[i] > work[i + 1]) {
        if ((degrees[work[i]] & 1) && (degrees[work[i + 1]] & 1)) sign = -sign;
        std::swap(work[i], work[i + 1]);
      }
    }
  }
  return sign;
}

// result[i] = items[perm[i]]; the arrangement `perm` describes.
template <class T>
std::vector<T> apply_perm(const Perm& perm, const std::vector<T>& items) {
  std::vector<T> out;
  out.reserve(items.size());
  for (int v : perm) out.push_back(items[v]);
  return out;
}

// "sigma then tau": composite arrangement reached by first forming the
// sigma-arrangement and then rearranging it by tau.
inline Perm perm_then(const Perm& sigma, const Perm& tau) {
  Perm out(tau.size());
  for (size_t i = 0; i < tau.size(); ++i) out[i] = sigma[tau[i]];
  return out;
}

// All (r,s)-unshuffles of {0..r+s-1}: both blocks strictly increasing.
// Ordered lexicographically by the first block. Size C(r+s, r).
inline std::vector<Perm> unshuffles(int r, int s) {
  if (r < 0 || s < 0) throw std::invalid_argument("unshuffles: negative block");
  const int n = r + s;
  std::vector<Perm> out;
  std::vector<int> pick(r);
  std::iota(pick.begin(), pick.end(), 0);
  auto emit = [&] {
    Perm p;
    p.reserve(n);
    std::vector<char> used(n, 0);
    for (int v : pick) {
      p.push_back(v);
      used[v] = 1;
    }
    for (int v = 0; v < n; ++v)
      if (!used[v]) p.push_back(v);
    out.push_back(std::move(p));
  };
  if (r == 0 || s == 0) {
    Perm id(n);
    std::iota(id.begin(), id.end(), 0);
    out.push_back(id);
    return out;
  }
  while (true) {
    emit();
    int i = r - 1;
    while (i >= 0 && pick[i] == n - r + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < r; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

inline std::vector<Perm> all_perms(int n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Perm> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Sign relating the n-th symmetric power of V[1] to the antisymmetric power
// of V: (-1)^{sum_i (n-i) deg x_i} with 1-based i.
inline int decalage_sign(const std::vector<int>& degrees) {
  const int n = static_cast<int>(degrees.size());
  long acc = 0;
  for (int i = 0; i < n; ++i) acc += static_cast<long>(n - 1 - i) * degrees[i];
  return (acc & 1) ? -1 : 1;
}

}  // namespace bfvcalc
