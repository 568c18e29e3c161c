#pragma once

#include "bfvcalc/errors.hpp"
#include "bfvcalc/signs.hpp"

#include <map>
#include <string>
#include <vector>

namespace bfvcalc {

// Rooted full binary tree; `dec` counts the decorations sitting on the edge
// above this node (the root's edge is the one leading to the final
// projection/homotopy). Children are unordered; the canonical encoding
// below fixes a representative order.
struct DTree {
  int dec = 0;
  std::vector<DTree> kids;  // empty or exactly two

  bool is_leaf() const { return kids.empty(); }
};

inline int leaf_count(const DTree& t) {
  if (t.is_leaf()) return 1;
  return leaf_count(t.kids[0]) + leaf_count(t.kids[1]);
}

inline int total_decorations(const DTree& t) {
  int d = t.dec;
  for (const auto& k : t.kids) d += total_decorations(k);
  return d;
}

inline int internal_count(const DTree& t) {
  if (t.is_leaf()) return 0;
  return 1 + internal_count(t.kids[0]) + internal_count(t.kids[1]);
}

// Canonical encoding: leaf "l", internal "(A B)" with A <= B as strings,
// ":n" appended when the edge above carries n > 0 decorations.
inline std::string encode(const DTree& t) {
  std::string s;
  if (t.is_leaf()) {
    s = "l";
  } else {
    std::string a = encode(t.kids[0]);
    std::string b = encode(t.kids[1]);
    if (b < a) std::swap(a, b);
    s = "(" + a + " " + b + ")";
  }
  if (t.dec > 0) s += ":" + std::to_string(t.dec);
  return s;
}

// |Aut| by the sibling rule: every level with equal child encodings doubles
// the count. Valid because an automorphism of a rooted binary tree is a
// choice, per internal node, of whether to swap isomorphic children.
inline long aut_order(const DTree& t) {
  if (t.is_leaf()) return 1;
  long a = aut_order(t.kids[0]);
  long b = aut_order(t.kids[1]);
  bool same = encode(t.kids[0]) == encode(t.kids[1]);
  return same ? 2 * a * a : a * b;
}

namespace detail {

// Labeled encoding used by the exhaustive automorphism search: leaves show
// their (permuted) label, children still sort canonically.
inline std::string encode_labeled(const DTree& t, const Perm& labels,
                                  int& cursor) {
  std::string s;
  if (t.is_leaf()) {
    s = "L" + std::to_string(labels[cursor++]);
  } else {
    std::string a = encode_labeled(t.kids[0], labels, cursor);
    std::string b = encode_labeled(t.kids[1], labels, cursor);
    if (b < a) std::swap(a, b);
    s = "(" + a + " " + b + ")";
  }
  if (t.dec > 0) s += ":" + std::to_string(t.dec);
  return s;
}

}  // namespace detail

// Independent |Aut|: count leaf permutations that induce an automorphism.
// An automorphism is determined by its leaf action, so this is exact.
// Exponential in leaf count; intended for the small arities used here.
inline long aut_order_by_leaf_perms(const DTree& t) {
  int n = leaf_count(t);
  Perm id(n);
  for (int i = 0; i < n; ++i) id[i] = i;
  int cur = 0;
  std::string reference = detail::encode_labeled(t, id, cur);
  long count = 0;
  for (const auto& sigma : all_perms(n)) {
    cur = 0;
    if (detail::encode_labeled(t, sigma, cur) == reference) ++count;
  }
  return count;
}

// All isomorphism classes of decorated trees with the given leaf count and
// total decorations <= max_dec. The one-leaf zero-decoration tree (a bare
// identity line) is excluded: it carries no operation.
inline std::vector<DTree> enumerate_trees(int leaves, int max_dec) {
  if (leaves < 1) throw ArgumentError("tree needs at least one leaf");
  if (max_dec < 0) throw ArgumentError("negative decoration budget");

  // undecorated[n] = canonical class representatives with n leaves
  std::vector<std::vector<DTree>> undecorated(leaves + 1);
  undecorated[1].push_back(DTree{});
  for (int n = 2; n <= leaves; ++n)
    for (int k = 1; k <= n / 2; ++k)
      for (const auto& a : undecorated[k])
        for (const auto& b : undecorated[n - k]) {
          if (k == n - k && encode(b) < encode(a)) continue;
          DTree t;
          t.kids = {a, b};
          if (encode(t.kids[1]) < encode(t.kids[0]))
            std::swap(t.kids[0], t.kids[1]);
          undecorated[n].push_back(t);
        }

  // Decoration placements up to isomorphism: assign to the canonical
  // representative and dedupe by encoding. Edge counts are tiny (2n-1).
  std::vector<DTree> out;
  std::map<std::string, bool> seen;
  for (const auto& shape : undecorated[leaves]) {
    std::vector<DTree*> edges;
    std::vector<DTree> work{shape};
    // collect nodes of a working copy in preorder
    std::vector<DTree*> stack{&work[0]};
    while (!stack.empty()) {
      DTree* cur = stack.back();
      stack.pop_back();
      edges.push_back(cur);
      for (auto& kid : cur->kids) stack.push_back(&kid);
    }
    int ne = static_cast<int>(edges.size());
    std::vector<int> assign(ne, 0);
    auto rec = [&](auto&& self, int idx, int left) -> void {
      if (idx == ne) {
        for (int i = 0; i < ne; ++i) edges[i]->dec = assign[i];
        if (leaf_count(work[0]) == 1 && total_decorations(work[0]) == 0) return;
        std::string enc = encode(work[0]);
        if (!seen.count(enc)) {
          seen[enc] = true;
          out.push_back(work[0]);
        }
        return;
      }
      for (int d = 0; d <= left; ++d) {
        assign[idx] = d;
        self(self, idx + 1, left - d);
      }
    };
    rec(rec, 0, max_dec);
  }
  return out;
}

// Oracle used to cross-check class enumeration and |Aut|: enumerate plane
// (child-ordered) decorated trees and quotient by the canonical encoding.
// Each class of trees with v internal nodes has 2^v / |Aut| plane members.
inline std::map<std::string, long> plane_tree_census(int leaves, int max_dec) {
  std::vector<std::vector<DTree>> plane(leaves + 1);
  plane[1].push_back(DTree{});
  for (int n = 2; n <= leaves; ++n)
    for (int k = 1; k <= n - 1; ++k)
      for (const auto& a : plane[k])
        for (const auto& b : plane[n - k]) {
          DTree t;
          t.kids = {a, b};  // order kept: plane tree
          plane[n].push_back(t);
        }

  std::map<std::string, long> census;
  for (const auto& shape : plane[leaves]) {
    std::vector<DTree> work{shape};
    std::vector<DTree*> edges;
    std::vector<DTree*> stack{&work[0]};
    while (!stack.empty()) {
      DTree* cur = stack.back();
      stack.pop_back();
      edges.push_back(cur);
      for (auto& kid : cur->kids) stack.push_back(&kid);
    }
    int ne = static_cast<int>(edges.size());
    std::vector<int> assign(ne, 0);
    auto rec = [&](auto&& self, int idx, int left) -> void {
      if (idx == ne) {
        for (int i = 0; i < ne; ++i) edges[i]->dec = assign[i];
        if (leaf_count(work[0]) == 1 && total_decorations(work[0]) == 0) return;
        ++census[encode(work[0])];
        return;
      }
      for (int d = 0; d <= left; ++d) {
        assign[idx] = d;
        self(self, idx + 1, left - d);
      }
    };
    rec(rec, 0, max_dec);
  }
  return census;
}

}  // namespace bfvcalc
