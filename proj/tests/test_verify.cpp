#include "bfvcalc/verify.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <string>

using namespace bfvcalc;

#ifndef BFVCALC_SETUPS_DIR
#error "build must define BFVCALC_SETUPS_DIR"
#endif

namespace {

LoadedSetupPtr load(const std::string& name) {
  return load_setup_file(std::string(BFVCALC_SETUPS_DIR) + "/" + name +
                         ".setup");
}

}  // namespace

TEST_CASE("verify suite passes on the corpus") {
  for (const char* name : {"fiberlin", "split4", "mixedgamma"}) {
    INFO(name);
    auto L = load(name);
    auto res = run_verify(*L, 7, 3);
    for (const auto& item : res.items) {
      INFO(item.name << ": " << item.detail);
      CHECK(item.passed);
    }
    CHECK(res.ok());
    CHECK(res.first_failure() == nullptr);
  }
}

TEST_CASE("structural-only run covers every model") {
  for (const char* name :
       {"split4", "fiberlin", "quadgamma", "rank1gamma", "mixedgamma",
        "casimir"}) {
    INFO(name);
    auto L = load(name);
    auto res = run_verify(*L, 1, 0);
    CHECK(res.ok());
    for (const auto& item : res.items) {
      CHECK(item.name.find("contraction.") == std::string::npos);
      CHECK(item.name.find("bracket.") == std::string::npos);
    }
  }
}

TEST_CASE("verify names the broken structure") {
  auto bad1 = load("notpoisson");
  auto r1 = run_verify(*bad1, 1, 2);
  REQUIRE(r1.first_failure() != nullptr);
  CHECK(r1.first_failure()->name == "structure.poisson");
  CHECK(!r1.first_failure()->detail.empty());

  auto bad2 = load("notcoiso");
  auto r2 = run_verify(*bad2, 1, 2);
  REQUIRE(r2.first_failure() != nullptr);
  CHECK(r2.first_failure()->name == "structure.zero-section");
}

TEST_CASE("sabotage modes are caught by the identity named after them") {
  auto L = load("split4");

  auto r1 = run_verify(*L, 7, 2, Sabotage::homotopy);
  REQUIRE(r1.first_failure() != nullptr);
  CHECK(r1.first_failure()->name == "contraction.jet");

  auto r2 = run_verify(*L, 7, 2, Sabotage::orientation);
  REQUIRE(r2.first_failure() != nullptr);
  CHECK(r2.first_failure()->name == "transfer.derived-match");

  auto r3 = run_verify(*L, 7, 2, Sabotage::treeweight);
  REQUIRE(r3.first_failure() != nullptr);
  CHECK(r3.first_failure()->name == "transfer.derived-match");

  CHECK(sabotage_from_name("") == Sabotage::none);
  CHECK(sabotage_from_name("none") == Sabotage::none);
  CHECK(sabotage_from_name("homotopy") == Sabotage::homotopy);
  CHECK_THROWS_AS(sabotage_from_name("gremlins"), ArgumentError);
}
