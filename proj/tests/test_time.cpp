#include <doctest.h>

#include <stdexcept>

#include "tvg/time.hpp"

using tvg::Rat;

TEST_CASE("rationals reduce to canonical form") {
  CHECK(Rat(2, 4) == Rat(1, 2));
  CHECK(Rat(-2, 4) == Rat(-1, 2));
  CHECK(Rat(2, -4) == Rat(-1, 2));
  CHECK(Rat(0, 7) == Rat(0));
  CHECK(Rat(6, 3).num() == 2);
  CHECK(Rat(6, 3).den() == 1);
  CHECK_THROWS_AS(Rat(1, 0), std::domain_error);
}

TEST_CASE("arithmetic is exact and closed") {
  CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
  CHECK(Rat(1, 2) - Rat(2, 3) == Rat(-1, 6));
  CHECK(Rat(3, 4) * Rat(2, 9) == Rat(1, 6));
  CHECK(Rat(3, 4) / Rat(3, 2) == Rat(1, 2));
  CHECK_THROWS_AS(Rat(1) / Rat(0), std::domain_error);
  CHECK(-Rat(1, 2) == Rat(-1, 2));

  // repeated accumulation stays exact
  Rat s;
  for (int i = 0; i < 8; ++i) s += Rat(1, 8);
  CHECK(s == Rat(1));
}

TEST_CASE("ordering is total and consistent") {
  CHECK(Rat(1, 3) < Rat(1, 2));
  CHECK(Rat(-1, 2) < Rat(-1, 3));
  CHECK(Rat(2, 6) <= Rat(1, 3));
  CHECK(Rat(7, 2) > Rat(3));
  CHECK(Rat(5, 5) == Rat(1));
}

TEST_CASE("floorDiv and mod") {
  CHECK(Rat(7, 2).floorDiv(Rat(1)) == 3);
  CHECK(Rat(-7, 2).floorDiv(Rat(1)) == -4);
  CHECK(Rat(8).floorDiv(Rat(4)) == 2);
  CHECK(Rat(5).mod(Rat(4)) == Rat(1));
  CHECK(Rat(-1, 2).mod(Rat(4)) == Rat(7, 2));
  CHECK(Rat(9, 2).mod(Rat(3, 2)) == Rat(0));
  CHECK_THROWS_AS(Rat(1).floorDiv(Rat(0)), std::domain_error);
  CHECK_THROWS_AS(Rat(1).floorDiv(Rat(-1)), std::domain_error);

  // mod result always lands in [0, m)
  for (long long n = -20; n <= 20; ++n) {
    Rat r = Rat(n, 3).mod(Rat(5, 2));
    CHECK(r >= Rat(0));
    CHECK(r < Rat(5, 2));
    CHECK((Rat(n, 3) - r).mod(Rat(5, 2)) == Rat(0));
  }
}

TEST_CASE("overflow detection") {
  Rat big(INT64_MAX, 1);
  CHECK_THROWS_AS(big * big, std::overflow_error);
  CHECK_THROWS_AS(big + big, std::overflow_error);
  // products that reduce back to range are fine
  CHECK(Rat(INT64_MAX, 2) * Rat(2, INT64_MAX) == Rat(1));
}

TEST_CASE("string form") {
  CHECK(Rat(3).str() == "3");
  CHECK(Rat(-3, 2).str() == "-3/2");
  CHECK(Rat(0).str() == "0");
  CHECK(Rat(1, 2).isZero() == false);
  CHECK(Rat(0, 9).isZero());
  CHECK(Rat(4, 2).isInteger());
  CHECK(!Rat(1, 2).isInteger());
}
