#include <catch2/catch_amalgamated.hpp>

#include "bfvcalc/trees.hpp"

using namespace bfvcalc;

namespace {

DTree leaf(int dec = 0) {
  DTree t;
  t.dec = dec;
  return t;
}

DTree node(DTree a, DTree b, int dec = 0) {
  DTree t;
  t.dec = dec;
  t.kids = {std::move(a), std::move(b)};
  return t;
}

}  // namespace

TEST_CASE("encoding and basic counts") {
  CHECK(encode(leaf()) == "l");
  CHECK(encode(leaf(2)) == "l:2");
  CHECK(encode(node(leaf(), leaf())) == "(l l)");
  CHECK(encode(node(leaf(1), leaf())) == "(l l:1)");
  CHECK(encode(node(leaf(), leaf(1))) == "(l l:1)");  // unordered children
  auto comb = node(node(leaf(), leaf()), leaf());
  CHECK(encode(comb) == "((l l) l)");
  CHECK(leaf_count(comb) == 3);
  CHECK(internal_count(comb) == 2);
  CHECK(total_decorations(node(leaf(1), leaf(2), 3)) == 6);
}

TEST_CASE("undecorated class counts match the classical sequence") {
  // Unordered rooted full binary trees: 1, 1, 1, 2, 3, 6 for 1..6 leaves.
  CHECK(enumerate_trees(2, 0).size() == 1);
  CHECK(enumerate_trees(3, 0).size() == 1);
  CHECK(enumerate_trees(4, 0).size() == 2);
  CHECK(enumerate_trees(5, 0).size() == 3);
  CHECK(enumerate_trees(6, 0).size() == 6);
  // One leaf: only decorated lines count as trees.
  CHECK(enumerate_trees(1, 0).empty());
  CHECK(enumerate_trees(1, 3).size() == 3);
  // Two leaves, one decoration: root edge, or one leaf edge (the two leaf
  // placements are isomorphic), plus the undecorated tree.
  CHECK(enumerate_trees(2, 1).size() == 3);
}

TEST_CASE("automorphism orders") {
  CHECK(aut_order(node(leaf(), leaf())) == 2);
  CHECK(aut_order(node(leaf(1), leaf())) == 1);
  CHECK(aut_order(node(node(leaf(), leaf()), leaf())) == 2);
  CHECK(aut_order(node(node(leaf(), leaf()), node(leaf(), leaf()))) == 8);
  CHECK(aut_order(node(node(leaf(1), leaf()), node(leaf(), leaf()))) == 2);
  CHECK(aut_order(leaf(5)) == 1);
}

TEST_CASE("sibling rule agrees with exhaustive leaf stabilizer") {
  for (int n = 1; n <= 5; ++n)
    for (const auto& t : enumerate_trees(n, 2))
      REQUIRE(aut_order(t) == aut_order_by_leaf_perms(t));
}

TEST_CASE("plane census quotient reproduces classes and automorphisms") {
  for (int n = 1; n <= 5; ++n)
    for (int dec : {0, 1, 2}) {
      auto classes = enumerate_trees(n, dec);
      auto census = plane_tree_census(n, dec);
      REQUIRE(classes.size() == census.size());
      for (const auto& t : classes) {
        auto it = census.find(encode(t));
        REQUIRE(it != census.end());
        long expected = (1L << internal_count(t)) / aut_order(t);
        REQUIRE(it->second == expected);
      }
    }
}

TEST_CASE("enumeration respects the decoration budget") {
  for (const auto& t : enumerate_trees(3, 2)) {
    REQUIRE(total_decorations(t) <= 2);
    REQUIRE(leaf_count(t) == 3);
  }
  // Budgets are cumulative: the list for a bigger budget contains the
  // smaller one.
  auto small = enumerate_trees(3, 1);
  auto big = enumerate_trees(3, 2);
  REQUIRE(big.size() > small.size());
  std::map<std::string, bool> enc;
  for (const auto& t : big) enc[encode(t)] = true;
  for (const auto& t : small) REQUIRE(enc.count(encode(t)) == 1);
}
