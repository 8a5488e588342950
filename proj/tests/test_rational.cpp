#include <catch2/catch_amalgamated.hpp>

#include <onocplan/rational.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>

using onoc::Rat;

TEST_CASE("construction normalizes sign and gcd", "[rational]") {
  CHECK(Rat(6, 4).num() == 3);
  CHECK(Rat(6, 4).den() == 2);
  CHECK(Rat(-6, 4).num() == -3);
  CHECK(Rat(6, -4).num() == -3);
  CHECK(Rat(6, -4).den() == 2);
  CHECK(Rat(-6, -4).num() == 3);
  CHECK(Rat(0, 7).num() == 0);
  CHECK(Rat(0, 7).den() == 1);
  CHECK(Rat().is_zero());
  CHECK(Rat(5).is_integer());
  CHECK_THROWS_AS(Rat(1, 0), std::invalid_argument);
}

TEST_CASE("arithmetic is exact", "[rational]") {
  const Rat a(1, 3), b(1, 6);
  CHECK(a + b == Rat(1, 2));
  CHECK(a - b == Rat(1, 6));
  CHECK(a * b == Rat(1, 18));
  CHECK(a / b == Rat(2));
  CHECK(-a == Rat(-1, 3));
  CHECK_THROWS_AS(a / Rat(0), std::invalid_argument);

  Rat s;
  for (int i = 0; i < 10; ++i) s += Rat(1, 10);
  CHECK(s == Rat(1));  // the classic 0.1 accumulation is exact here

  // mixed-magnitude sum stays normalized
  CHECK((Rat(7, 12) + Rat(5, 12)) == Rat(1));
}

TEST_CASE("comparisons use exact cross products", "[rational]") {
  CHECK(Rat(1, 3) < Rat(34, 100));
  CHECK(Rat(2, 3) > Rat(66, 100));
  CHECK(Rat(-1, 2) < Rat(1, 3));
  CHECK(Rat(5, 10) == Rat(1, 2));
  CHECK(Rat(1, 3) <= Rat(1, 3));
  CHECK(Rat(1, 3) >= Rat(1, 3));
  CHECK(Rat(1, 3) != Rat(1, 4));
  // magnitudes where double comparison would tie
  const Rat big1(std::numeric_limits<std::int64_t>::max() / 2, 3);
  const Rat big2 = big1 + Rat(1, 3);
  CHECK(big1 < big2);
}

TEST_CASE("floor, ceil, and round-half-up", "[rational]") {
  CHECK(Rat(7, 2).floor_ll() == 3);
  CHECK(Rat(7, 2).ceil_ll() == 4);
  CHECK(Rat(-7, 2).floor_ll() == -4);
  CHECK(Rat(-7, 2).ceil_ll() == -3);
  CHECK(Rat(6, 2).floor_ll() == 3);
  CHECK(Rat(6, 2).ceil_ll() == 3);

  CHECK(Rat(1, 2).round_half_up_ll() == 1);
  CHECK(Rat(3, 2).round_half_up_ll() == 2);
  CHECK(Rat(5, 2).round_half_up_ll() == 3);
  CHECK(Rat(-1, 2).round_half_up_ll() == 0);
  CHECK(Rat(-3, 2).round_half_up_ll() == -1);
  CHECK(Rat(2, 5).round_half_up_ll() == 0);
  CHECK(Rat(3, 5).round_half_up_ll() == 1);
  CHECK(Rat(7).round_half_up_ll() == 7);
}

TEST_CASE("from_double is exact on representable values", "[rational]") {
  CHECK(Rat::from_double(0.5) == Rat(1, 2));
  CHECK(Rat::from_double(-0.25) == Rat(-1, 4));
  CHECK(Rat::from_double(3.0) == Rat(3));
  CHECK(Rat::from_double(0.0).is_zero());
  // 0.1 is a binary fraction with a 2^55 denominator: representable, not 1/10
  const Rat tenth = Rat::from_double(0.1);
  CHECK(tenth.num() == 3602879701896397LL);
  CHECK(tenth.den() == 36028797018963968LL);
  CHECK(tenth != Rat(1, 10));
  // values that need a denominator beyond the 2^62 budget must refuse
  CHECK_THROWS_AS(Rat::from_double(1e-300), std::overflow_error);
  CHECK_THROWS_AS(Rat::from_double(std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
  CHECK_THROWS_AS(Rat::from_double(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}

TEST_CASE("overflow is detected, never wrapped", "[rational]") {
  const Rat big(std::numeric_limits<std::int64_t>::max());
  CHECK_THROWS_AS(big + big, std::overflow_error);
  CHECK_THROWS_AS(big * Rat(2), std::overflow_error);
  const Rat pow40(1LL << 40);
  CHECK_THROWS_AS(pow40 * pow40, std::overflow_error);
  // near-limit values that do fit still work
  CHECK((big - Rat(1)) + Rat(1) == big);
}

TEST_CASE("string and double views", "[rational]") {
  CHECK(Rat(22, 7).str() == "22/7");
  CHECK(Rat(-22, 7).str() == "-22/7");
  CHECK(Rat(9).str() == "9");
  CHECK(Rat(1, 2).to_double() == 0.5);
  CHECK(onoc::to_double(Rat(3, 4)) == 0.75);
}

TEST_CASE("ceil_div on integers", "[rational]") {
  CHECK(onoc::ceil_div(10, 3) == 4);
  CHECK(onoc::ceil_div(9, 3) == 3);
  CHECK(onoc::ceil_div(1, 64) == 1);
  CHECK(onoc::ceil_div(0, 5) == 0);
  CHECK_THROWS_AS(onoc::ceil_div(1, 0), std::invalid_argument);
}
