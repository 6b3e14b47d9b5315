#include <catch2/catch_amalgamated.hpp>

#include "rolewicz/func_family.hpp"

using namespace rolewicz;

TEST_CASE("pairing walks the antidiagonals", "[family]") {
  // (1,1) (1,2) (2,1) (1,3) (2,2) (3,1) (1,4) ...
  CHECK(pairing(Nat(1), Nat(1)) == 1);
  CHECK(pairing(Nat(1), Nat(2)) == 2);
  CHECK(pairing(Nat(2), Nat(1)) == 3);
  CHECK(pairing(Nat(1), Nat(3)) == 4);
  CHECK(pairing(Nat(2), Nat(2)) == 5);
  CHECK(pairing(Nat(3), Nat(1)) == 6);
  CHECK(pairing(Nat(1), Nat(4)) == 7);
  CHECK_THROWS_AS(pairing(Nat(0), Nat(1)), std::invalid_argument);

  for (Nat v = 1; v <= 300; ++v) {
    auto [i, j] = unpair(v);
    CHECK(pairing(i, j) == v);
  }
  // injectivity in the first argument is what rules out cross equalities
  auto [i, j] = unpair(pairing(Nat(17), Nat(40)));
  CHECK(i == 17);
  CHECK(j == 40);
}

TEST_CASE("closed-form maps evaluate and invert", "[family]") {
  auto s = IncreasingMap::shift(2);
  CHECK(s(5) == 7);
  CHECK(s.preimage(7) == Nat(5));
  CHECK_FALSE(s.preimage(2).has_value());
  CHECK_THROWS_AS(IncreasingMap::shift(0), std::invalid_argument);

  auto g = IncreasingMap::interleaved(3, 2);  // k -> 3k + 1
  CHECK(g(1) == 4);
  CHECK(g(10) == 31);
  CHECK(g.preimage(31) == Nat(10));
  CHECK_FALSE(g.preimage(30).has_value());
  CHECK_THROWS_AS(IncreasingMap::interleaved(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(IncreasingMap::interleaved(3, 4), std::invalid_argument);

  auto a = IncreasingMap::affine(Nat(2), Nat(3));
  CHECK(a(4) == 11);
  CHECK(a.preimage(11) == Nat(4));
  CHECK_FALSE(a.preimage(12).has_value());
  CHECK(a.deficient_max() == 0);
  CHECK_THROWS_AS(IncreasingMap::affine(Nat(0), Nat(5)), std::invalid_argument);
  CHECK_THROWS_AS(IncreasingMap::affine(Nat(1), Nat(0)), std::invalid_argument);

  auto c = IncreasingMap::ceil_pair(Rat(3, 2));  // k -> pairing(k, ceil(3k/2))
  CHECK(c(1) == 2);    // pairing(1, 2)
  CHECK(c(2) == 8);    // pairing(2, 3)
  CHECK(c(3) == 24);   // pairing(3, 5)
  CHECK(c.preimage(24) == Nat(3));
  CHECK_FALSE(c.preimage(23).has_value());
  CHECK_THROWS_AS(IncreasingMap::ceil_pair(Rat(1)), std::invalid_argument);
  for (Nat k = 1; k <= 40; ++k) CHECK(c(k) >= 2 * k * k);  // super-quadratic growth
}

TEST_CASE("deficient affine maps only work under a patch", "[family]") {
  auto d = IncreasingMap::affine(Nat(2), Nat(-1));  // 2k - 1 fixes k = 1
  CHECK(d.deficient_max() == 1);
  CHECK_THROWS_AS(d(1), family_error);
  CHECK(d(2) == 3);
  CHECK_FALSE(d.preimage(1).has_value());  // would land at the deficient argument

  CHECK_THROWS_AS(make_family({IncreasingMap::interleaved(2, 1), d}), family_error);

  auto p = IncreasingMap::patched(d, {{Nat(1), Nat(2)}});
  CHECK(p(1) == 2);
  CHECK(p(2) == 3);
  CHECK(p.preimage(2) == Nat(1));
  CHECK(p.preimage(3) == Nat(2));
  CHECK_FALSE(p.preimage(1).has_value());

  // every deficient argument must be covered
  auto d2 = IncreasingMap::affine(Nat(3), Nat(-5));  // violates f(k) > k at k = 1, 2
  CHECK(d2.deficient_max() == 2);
  CHECK_THROWS_AS(IncreasingMap::patched(d2, {{Nat(1), Nat(2)}}), std::invalid_argument);
  auto p2 = IncreasingMap::patched(d2, {{Nat(1), Nat(2)}, {Nat(2), Nat(3)}});
  CHECK(p2(1) == 2);
  CHECK(p2(2) == 3);
  CHECK(p2(3) == 4);  // base takes over: 3*3 - 5
}

TEST_CASE("patch validation", "[family]") {
  auto base = IncreasingMap::shift(1);
  // redundant override collapses back to the closed form
  auto same = IncreasingMap::patched(base, {{Nat(2), Nat(3)}});
  CHECK(same.kind() == IncreasingMap::Kind::shift);

  CHECK_THROWS_AS(IncreasingMap::patched(base, {{Nat(2), Nat(10)}}), std::invalid_argument);
  CHECK_THROWS_AS(IncreasingMap::patched(base, {{Nat(2), Nat(2)}}), std::invalid_argument);
  CHECK_THROWS_AS(IncreasingMap::patched(base, {{Nat(2), Nat(4)}, {Nat(2), Nat(5)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(IncreasingMap::patched(base, {{Nat(0), Nat(4)}}), std::invalid_argument);

  // a bumped value must stay inside the gap its neighbors leave open
  CHECK_THROWS_AS(IncreasingMap::patched(base, {{Nat(2), Nat(5)}}), std::invalid_argument);
  auto f = IncreasingMap::patched(IncreasingMap::affine(Nat(3), Nat(0)), {{Nat(2), Nat(7)}});
  CHECK(f(1) == 3);
  CHECK(f(2) == 7);
  CHECK(f(3) == 9);
  CHECK(f.kind() == IncreasingMap::Kind::patched);
  CHECK(f.preimage(7) == Nat(2));
  CHECK_FALSE(f.preimage(6).has_value());  // shadowed base value

  // nested patches flatten, outer key wins
  auto g = IncreasingMap::patched(f, {{Nat(2), Nat(8)}});
  CHECK(g(2) == 8);
  CHECK(g.overrides().size() == 1);
  CHECK(g.base().kind() == IncreasingMap::Kind::affine);
}

TEST_CASE("semantic map identity ignores construction route", "[family]") {
  CHECK(IncreasingMap::shift(1).same_map(IncreasingMap::affine(Nat(1), Nat(1))));
  CHECK(IncreasingMap::interleaved(2, 1).same_map(IncreasingMap::affine(Nat(2), Nat(0))));
  CHECK_FALSE(IncreasingMap::shift(1).same_map(IncreasingMap::shift(2)));
  CHECK_THROWS_AS(
      make_family({IncreasingMap::interleaved(2, 1), IncreasingMap::affine(Nat(2), Nat(0))}),
      family_error);
}

TEST_CASE("family validation accepts disjoint closed forms", "[family]") {
  auto fam = make_family({IncreasingMap::interleaved(2, 1), IncreasingMap::interleaved(2, 2)});
  CHECK(fam.t() == 2);
  CHECK(fam.m() == 1);
  CHECK(fam.m_status() == MStatus::exact);
  CHECK(fam.agreements().empty());
  auto rr = disjoint_ranges(fam);
  CHECK(rr.disjoint);
  CHECK(rr.exact);
}

TEST_CASE("two maps agreeing at one point get threshold two", "[family]") {
  auto f1 = IncreasingMap::affine(Nat(2), Nat(0));
  auto f2 = IncreasingMap::patched(IncreasingMap::affine(Nat(2), Nat(-1)), {{Nat(1), Nat(2)}});
  auto fam = make_family({f1, f2});
  CHECK(fam.m() == 2);
  CHECK(fam.m_status() == MStatus::exact);
  REQUIRE(fam.agreements().size() == 1);
  CHECK(fam.agreements()[0].k == 1);
  CHECK(fam.agreements()[0].value == 2);
  auto rr = disjoint_ranges(fam);
  CHECK_FALSE(rr.disjoint);
  REQUIRE(rr.witness.has_value());
  CHECK(rr.witness->value == 2);
}

TEST_CASE("off-diagonal overlaps are rejected", "[family]") {
  // shift ranges are cofinite, so two distinct shifts always collide off-diagonal
  CHECK_THROWS_AS(make_family({IncreasingMap::shift(1), IncreasingMap::shift(2)}), family_error);
  CHECK_THROWS_MATCHES(
      make_family({IncreasingMap::shift(1), IncreasingMap::shift(2)}), family_error,
      Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("overlap off-diagonal")));
  // identical cores agree at infinitely many points even if one is patched
  auto moved = IncreasingMap::patched(IncreasingMap::affine(Nat(2), Nat(0)), {{Nat(1), Nat(3)}});
  CHECK_THROWS_MATCHES(
      make_family({IncreasingMap::affine(Nat(2), Nat(0)), moved}), family_error,
      Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("infinitely many")));
  // duplicate maps
  CHECK_THROWS_AS(make_family({IncreasingMap::shift(3), IncreasingMap::shift(3)}), family_error);
}

TEST_CASE("ceil pairs agree exactly below the ratio gap", "[family]") {
  // 3/2 vs 5/4: ceil(3k/2) = ceil(5k/4) exactly at k = 1, 2
  auto fam =
      make_family({IncreasingMap::ceil_pair(Rat(3, 2)), IncreasingMap::ceil_pair(Rat(5, 4))});
  CHECK(fam.m() == 3);
  CHECK(fam.m_status() == MStatus::exact);
  REQUIRE(fam.agreements().size() == 2);
  CHECK(fam.agreements()[0].k == 1);
  CHECK(fam.agreements()[1].k == 2);

  // 2 vs 3: no agreements at all
  auto fam2 = make_family({IncreasingMap::ceil_pair(Rat(2)), IncreasingMap::ceil_pair(Rat(3))});
  CHECK(fam2.m() == 1);
  CHECK(fam2.m_status() == MStatus::exact);

  // proportional ratios agree everywhere
  CHECK_THROWS_AS(
      make_family({IncreasingMap::ceil_pair(Rat(2)), IncreasingMap::ceil_pair(Rat(2))}),
      family_error);
}

TEST_CASE("agreement scans refuse astronomically wide windows", "[family]") {
  // ratios this close push the agreement window past any reasonable scan
  auto near1 = IncreasingMap::ceil_pair(Rat(1000001, 1000000));
  auto near2 = IncreasingMap::ceil_pair(Rat(1000002, 1000001));
  CHECK_THROWS_AS(make_family({near1, near2}), budget_error);
}

TEST_CASE("mixed closed forms are horizon-bounded", "[family]") {
  // the affine range must dodge every pairing value up to the horizon, which
  // needs a slope far above the scanned window
  auto fam = make_family(
      {IncreasingMap::affine(Nat(1000003), Nat(5)), IncreasingMap::ceil_pair(Rat(3, 2))}, 512);
  CHECK(fam.m_status() == MStatus::horizon_bounded);
  CHECK(fam.horizon() == 512);

  // a small-slope affine map hits the pairing range off-diagonal and is rejected
  CHECK_THROWS_AS(
      make_family({IncreasingMap::affine(Nat(2), Nat(1)), IncreasingMap::ceil_pair(Rat(3, 2))}),
      family_error);
}

TEST_CASE("threshold caps protect downstream enumeration", "[family]") {
  // valid pair with an agreement far out would make t^m explode; simulate with
  // a patched agreement at a large index
  auto base1 = IncreasingMap::interleaved(2, 1);
  auto base2 = IncreasingMap::interleaved(2, 2);
  // move f2 over f1 at k = 50: f1(50) = 100; override must stay monotone: f2(49) = 99 < 100 < f2(51) = 103
  auto bumped = IncreasingMap::patched(base2, {{Nat(50), Nat(100)}});
  auto fam = make_family({base1, bumped});
  CHECK(fam.m() == 51);
  REQUIRE(fam.agreements().size() == 1);
  CHECK(fam.agreements()[0].k == 50);
}
