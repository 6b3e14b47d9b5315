#include <catch2/catch_amalgamated.hpp>

#include "rolewicz/prop_oracles.hpp"

using namespace rolewicz;

namespace {

Family boundary_family() {
  return make_family(
      {IncreasingMap::affine(Nat(2), Nat(0)),
       IncreasingMap::patched(IncreasingMap::affine(Nat(2), Nat(-1)), {{Nat(1), Nat(2)}})});
}

// f1: 1 -> 3, k -> 2k; f2: 1 -> 2, 2 -> 4, k -> 2k - 1. They agree at k = 2
// only, ranges are otherwise disjoint, so the threshold is 3. Asserting a
// threshold of 1 instead breaks every class proposition at length 2.
std::vector<IncreasingMap> slow_growth_maps() {
  return {IncreasingMap::patched(IncreasingMap::affine(Nat(2), Nat(0)), {{Nat(1), Nat(3)}}),
          IncreasingMap::patched(IncreasingMap::affine(Nat(2), Nat(-1)),
                                 {{Nat(1), Nat(2)}, {Nat(2), Nat(4)}})};
}

void check_all_clean(const Family& fam, const std::vector<Rat>& coeffs, const SweepConfig& cfg) {
  auto results = run_all_sweeps(fam, coeffs, cfg);
  REQUIRE(results.size() == 6);
  for (const auto& res : results) {
    INFO(res.sweep);
    CHECK(res.cases_checked > 0);
    CHECK(res.clean());
  }
}

}  // namespace

TEST_CASE("all structural sweeps pass on sound families", "[oracles]") {
  SweepConfig cfg;
  cfg.r_max = 4;
  cfg.k_max = 12;
  cfg.i_max = 10;
  check_all_clean(boundary_family(), {Rat(2), Rat(2)}, cfg);

  auto tri = make_family({IncreasingMap::interleaved(3, 1), IncreasingMap::interleaved(3, 2),
                          IncreasingMap::interleaved(3, 3)});
  cfg.k_max = 10;
  cfg.i_max = 8;
  check_all_clean(tri, {Rat(1, 2), Rat(1, 3), Rat(1, 4)}, cfg);

  auto ceils = make_family(
      {IncreasingMap::ceil_pair(Rat(3, 2)), IncreasingMap::ceil_pair(Rat(5, 4))});
  REQUIRE(ceils.m() == 3);
  SweepConfig deep;
  deep.r_max = 5;  // threshold 3 needs length-5 words to exercise the liftings
  deep.k_max = 8;
  deep.i_max = 6;
  check_all_clean(ceils, {Rat(2), Rat(2)}, deep);
}

TEST_CASE("cross overlap breaks base uniqueness", "[oracles]") {
  // two plain shifts: f1(2) = 3 = f2(1), so one value has two base indices
  auto fake = Family::unchecked({IncreasingMap::shift(1), IncreasingMap::shift(2)}, 1);
  auto res = sweep_base_uniqueness(fake);
  REQUIRE_FALSE(res.clean());
  CHECK(res.violations.front().detail.find("two base indices") != std::string::npos);

  // the sweep itself is fine with a genuinely overlap-free family
  CHECK(sweep_base_uniqueness(boundary_family()).clean());
}

TEST_CASE("an understated threshold breaks word injectivity", "[oracles]") {
  // both boundary maps send 1 to 2; claiming threshold 1 exposes the collision
  auto true_fam = boundary_family();
  auto fake = Family::unchecked(true_fam.maps(), 1);
  auto res = sweep_word_injectivity(fake);
  REQUIRE_FALSE(res.clean());
  const auto& v = res.violations.front();
  CHECK(v.k == 1);
  CHECK(v.detail.find("collide") != std::string::npos);

  CHECK(sweep_word_injectivity(true_fam).clean());
}

TEST_CASE("an understated threshold breaks the class propositions", "[oracles]") {
  auto true_fam = make_family(slow_growth_maps());
  CHECK(true_fam.m() == 3);
  REQUIRE(true_fam.agreements().size() == 1);
  CHECK(true_fam.agreements().front().k == 2);
  CHECK(true_fam.agreements().front().value == 4);

  auto fake = Family::unchecked(slow_growth_maps(), 1);
  std::vector<Rat> coeffs{Rat(2), Rat(3)};
  SweepConfig cfg;
  cfg.r_max = 3;
  cfg.i_max = 4;

  // two distinct (base class, tail) pairs land on the key 4
  auto fac = sweep_class_factorization(fake, coeffs, cfg);
  REQUIRE_FALSE(fac.clean());
  bool dup = false, mismatch = false;
  for (const auto& v : fac.violations) {
    dup |= v.detail.find("share the key") != std::string::npos;
    mismatch |= v.detail.find("member sets differ") != std::string::npos ||
                v.detail.find("no lifted counterpart") != std::string::npos;
  }
  CHECK(dup);
  CHECK(mismatch);

  // sharp(2, 1) is 3, not the geometric prediction 4
  auto counts = sweep_class_counts(fake, coeffs, cfg);
  REQUIRE_FALSE(counts.clean());
  CHECK(counts.violations.front().detail.find("!=") != std::string::npos);

  // the merged class at key 4 sums to 15, not the tail-factored 6
  auto sums = sweep_sum_factorization(fake, coeffs, cfg);
  REQUIRE_FALSE(sums.clean());
  CHECK(sums.violations.front().detail.find("tail-factored") != std::string::npos);

  // with the genuine threshold every sweep is clean again
  SweepConfig honest;
  honest.r_max = 5;
  honest.k_max = 10;
  honest.i_max = 6;
  check_all_clean(true_fam, coeffs, honest);
}

TEST_CASE("a vanishing class sum breaks the gamma lower bound", "[oracles]") {
  // with coefficients (2, -2) the words (2,1) and (2,2) cancel at base 1;
  // the understated threshold hides that from the level-1 condition check
  auto fake = Family::unchecked(slow_growth_maps(), 1);
  std::vector<Rat> coeffs{Rat(2), Rat(-2)};
  SweepConfig cfg;
  cfg.r_max = 2;
  cfg.i_max = 3;
  auto res = sweep_sum_lower_bound(fake, coeffs, cfg);
  REQUIRE_FALSE(res.clean());
  CHECK(res.violations.front().detail.find("|class sum| = 0") != std::string::npos);

  // the genuine threshold refuses these coefficients outright instead
  CHECK_THROWS_AS(sweep_sum_lower_bound(make_family(slow_growth_maps()), coeffs, cfg),
                  nonzero_condition_error);
}
