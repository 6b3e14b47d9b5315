#include <catch2/catch_amalgamated.hpp>

#include "rolewicz/sparse_seq.hpp"

using namespace rolewicz;

TEST_CASE("rational parsing normalizes and rejects junk", "[scalar]") {
  CHECK(rat_str(parse_rat("4/6")) == "2/3");
  CHECK(rat_str(parse_rat("-4/6")) == "-2/3");
  CHECK(rat_str(parse_rat("3/-4")) == "-3/4");
  CHECK(rat_str(parse_rat("0/5")) == "0");
  CHECK(rat_str(parse_rat("7")) == "7");
  CHECK(parse_rat("-0") == Rat(0));
  CHECK_THROWS_AS(parse_rat("1/0"), config_error);
  CHECK_THROWS_AS(parse_rat("a/2"), config_error);
  CHECK_THROWS_AS(parse_rat(""), config_error);
  CHECK_THROWS_AS(parse_rat("1.5"), config_error);
  CHECK_THROWS_AS(parse_rat("1e3"), config_error);
  CHECK_THROWS_AS(parse_nat("-"), config_error);
}

TEST_CASE("integer and scalar powers", "[scalar]") {
  CHECK(pow_nat(Nat(3), 0) == 1);
  CHECK(pow_nat(Nat(3), 7) == 2187);
  CHECK(pow_nat(Nat(2), 64) == Nat("18446744073709551616"));
  CHECK(pow_scalar(Rat(2, 3), 3) == Rat(8, 27));
  CHECK(pow_scalar(Rat(2, 3), -2) == Rat(9, 4));
  CHECK(pow_scalar(Rat(-2), 3) == Rat(-8));
  CHECK(pow_scalar(Rat(5), 0) == Rat(1));
  CHECK_THROWS_AS(pow_scalar(Rat(0), -1), std::domain_error);
}

TEST_CASE("floor and ceiling on negatives", "[scalar]") {
  CHECK(floor_rat(Rat(-3, 2)) == -2);
  CHECK(ceil_rat(Rat(-3, 2)) == -1);
  CHECK(floor_rat(Rat(3, 2)) == 1);
  CHECK(ceil_rat(Rat(3, 2)) == 2);
  CHECK(floor_rat(Rat(4)) == 4);
  CHECK(ceil_rat(Rat(-4)) == -4);
  CHECK(abs_val(Rat(-5, 7)) == Rat(5, 7));
}

TEST_CASE("machine narrowing guards", "[scalar]") {
  CHECK(to_long(Nat(123456), "x") == 123456);
  CHECK_THROWS_AS(to_long(pow_nat(Nat(2), 80), "x"), budget_error);
}

TEST_CASE("sparse sequences prune zeros and keep 1-based indices", "[scalar][seq]") {
  SparseSeq<Rat> x;
  CHECK(x.empty());
  CHECK(x.max_support() == 0);

  x.set(3, Rat(5));
  x.set(1, Rat(-1, 2));
  CHECK(x.support_size() == 2);
  CHECK(x.at(3) == Rat(5));
  CHECK(x.at(2) == Rat(0));
  CHECK(x.max_support() == 3);

  x.add(3, Rat(-5));  // cancels to zero: entry must disappear
  CHECK(x.support_size() == 1);
  CHECK(x.at(3) == Rat(0));

  x.set(1, Rat(0));
  CHECK(x.empty());

  CHECK_THROWS_AS(x.set(0, Rat(1)), std::invalid_argument);
  CHECK_THROWS_AS(x.add(-2, Rat(1)), std::invalid_argument);
}

TEST_CASE("norms are exact p-th powers", "[scalar][seq]") {
  SparseSeq<Rat> x{{Nat(1), Rat(3)}, {Nat(4), Rat(-2)}};
  CHECK(lp_norm_pow(x, 1).value == Rat(5));
  CHECK(lp_norm_pow(x, 2).value == Rat(13));
  CHECK(lp_norm_pow(x, 3).value == Rat(35));
  CHECK(sup_norm(x).value == Rat(3));
  CHECK(lp_norm_pow(SparseSeq<Rat>{}, 2).value == Rat(0));
  CHECK(sup_norm(SparseSeq<Rat>{}).value == Rat(0));
  CHECK_THROWS_AS(lp_norm_pow(x, 0), std::invalid_argument);
}

TEST_CASE("axpy combines and cancels exactly", "[scalar][seq]") {
  SparseSeq<Rat> x{{Nat(1), Rat(1)}, {Nat(2), Rat(2)}};
  SparseSeq<Rat> y{{Nat(2), Rat(-6)}, {Nat(5), Rat(1, 3)}};
  auto z = seq_axpy(Rat(3), x, y);  // 3x + y
  CHECK(z.at(1) == Rat(3));
  CHECK(z.at(2) == Rat(0));  // 6 - 6 cancels and is pruned
  CHECK(z.at(5) == Rat(1, 3));
  CHECK(z.support_size() == 2);

  // a = -1 gives the difference used by the direct norm checks
  auto d = seq_axpy(Rat(-1), x, x);
  CHECK(d.empty());
}

TEST_CASE("equality is support equality", "[scalar][seq]") {
  SparseSeq<Rat> a{{Nat(2), Rat(1, 2)}};
  SparseSeq<Rat> b;
  b.set(2, Rat(2, 4));
  CHECK(a == b);
  b.add(7, Rat(1));
  CHECK(a != b);
}
