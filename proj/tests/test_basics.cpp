#include <catch2/catch_amalgamated.hpp>

#include "advreal/basics.hpp"
#include "advreal/dovetail.hpp"

using namespace advreal;

namespace {

Fuel big_fuel() { return Fuel(64, 1000000); }

// A deliberately coarse name: answers only to the advertised precision.
RealName coarse(const Rational& x) {
  return RealName([x](long n) { return x + pow2(-n - 1); });
}

}  // namespace

TEST_CASE("floor with parity advice uses a single coarse query") {
  CHECK(floor_with_parity(RealName::constant(Rational(37, 10)), Parity::Odd) == 3);
  CHECK(floor_with_parity(RealName::constant(Rational(-1, 2)), Parity::Odd) == -1);
  CHECK(floor_with_parity(RealName::constant(Rational(4)), Parity::Even) == 4);
  CHECK(floor_with_parity(RealName::constant(Rational(5, 2)), Parity::Even) == 2);
  CHECK(floor_with_parity(RealName::constant(Rational(7, 2)), Parity::Odd) == 3);
  CHECK(floor_with_parity(coarse(Rational(6)), Parity::Even) == 6);
  CHECK(floor_with_parity(coarse(Rational(-3)), Parity::Odd) == -3);
}

TEST_CASE("floor with parity probes exactly one precision") {
  long asked = -1;
  RealName x([&asked](long n) {
    asked = n;
    return Rational(37, 10);
  });
  floor_with_parity(x, Parity::Odd);
  CHECK(asked == 1);
}

TEST_CASE("floor with integrality advice") {
  Fuel fuel = big_fuel();
  auto a = floor_with_intnot(RealName::constant(Rational(3, 10)), Integrality::NotInteger, fuel);
  REQUIRE(a.ok());
  CHECK(a.value() == 0);
  auto b = floor_with_intnot(RealName::constant(Rational(3)), Integrality::IsInteger, fuel);
  REQUIRE(b.ok());
  CHECK(b.value() == 3);
  auto c = floor_with_intnot(RealName::constant(Rational(-7, 3)), Integrality::NotInteger, fuel);
  REQUIRE(c.ok());
  CHECK(c.value() == -3);
}

TEST_CASE("lying integrality advice burns fuel instead of lying back") {
  Fuel fuel(40, 100000);
  auto r = floor_with_intnot(RealName::constant(Rational(3)), Integrality::NotInteger, fuel);
  REQUIRE(!r.ok());
  CHECK(r.kind() == FailKind::FuelExhausted);
}

TEST_CASE("leading digits with a truthful extra bit") {
  Fuel fuel = big_fuel();
  auto one = leading_digits_with_bit(RealName::constant(Rational(1, 2)), 1, 1, fuel);
  REQUIRE(one.ok());
  CHECK(one.value() == std::vector<int>({1}));
  auto zero = leading_digits_with_bit(RealName::constant(Rational(1, 2)), 1, 0, fuel);
  REQUIRE(zero.ok());
  CHECK(zero.value() == std::vector<int>({0}));
  auto fiveeighth = leading_digits_with_bit(RealName::constant(Rational(5, 8)), 2, 0, fuel);
  REQUIRE(fiveeighth.ok());
  CHECK(fiveeighth.value() == std::vector<int>({1, 0}));
  auto third = leading_digits_with_bit(RealName::constant(Rational(1, 3)), 4, 1, fuel);
  REQUIRE(third.ok());
  CHECK(third.value() == std::vector<int>({0, 1, 0, 1}));
}

TEST_CASE("digit prefixes reconstruct a window around x") {
  Fuel fuel = big_fuel();
  for (const Rational& x : {Rational(3, 7), Rational(1, 5), Rational(255, 256)}) {
    for (long n = 1; n <= 6; ++n) {
      // A non-dyadic x has a unique expansion; read the true bit as advice.
      int bit = static_cast<int>(floor_rat(x * pow2(n)) % 2);
      auto r = leading_digits_with_bit(RealName::constant(x), n, bit, fuel);
      REQUIRE(r.ok());
      Rational k(0);
      for (int b : r.value()) k = 2 * k + b;
      k /= pow2(n);
      CHECK(k <= x);
      CHECK(x <= k + pow2(-n));
    }
  }
}

TEST_CASE("flipped advice bit on a dyadic switches to the other expansion") {
  Fuel fuel = big_fuel();
  // x = 5/8 has expansions 0.101000... and 0.100111...; at n=4 past the
  // dyadic level, the flipped bit selects the other expansion's prefix.
  auto low = leading_digits_with_bit(RealName::constant(Rational(5, 8)), 4, 0, fuel);
  REQUIRE(low.ok());
  CHECK(low.value() == std::vector<int>({1, 0, 1, 0}));
  auto high = leading_digits_with_bit(RealName::constant(Rational(5, 8)), 4, 1, fuel);
  REQUIRE(high.ok());
  CHECK(high.value() == std::vector<int>({1, 0, 0, 1}));

  auto truthful = leading_digits_with_bit(RealName::constant(Rational(1, 2)), 8, 0, fuel);
  REQUIRE(truthful.ok());
  CHECK(truthful.value() == std::vector<int>({1, 0, 0, 0, 0, 0, 0, 0}));
  auto flipped = leading_digits_with_bit(RealName::constant(Rational(1, 2)), 8, 1, fuel);
  REQUIRE(flipped.ok());
  CHECK(flipped.value() == std::vector<int>({0, 1, 1, 1, 1, 1, 1, 1}));
}

TEST_CASE("flipped advice bit on a non-dyadic is certified suspect") {
  Fuel fuel = big_fuel();
  // 1/3 = 0.0101...; the flipped second bit forces the window [0, 1/4],
  // which a refined enclosure of 1/3 certifiably escapes.
  auto r = leading_digits_with_bit(RealName::constant(Rational(1, 3)), 2, 0, fuel);
  REQUIRE(!r.ok());
  CHECK(r.kind() == FailKind::AdviceSuspect);
}

TEST_CASE("digit search rejects malformed requests") {
  Fuel fuel = big_fuel();
  CHECK_THROWS_AS(leading_digits_with_bit(RealName::constant(Rational(1, 2)), 0, 1, fuel),
                  std::invalid_argument);
  CHECK_THROWS_AS(leading_digits_with_bit(RealName::constant(Rational(1, 2)), 2, 7, fuel),
                  std::invalid_argument);
}

TEST_CASE("overlap components accumulate separations") {
  std::vector<RealName> xs = {
      RealName::constant(Rational(1)),
      RealName::constant(Rational(1)),
      RealName::constant(Rational(2)),
      RealName::constant(Rational(2)),
  };
  auto at0 = detail::overlap_components(xs, 0);
  CHECK(at0.size() == 1);
  auto at4 = detail::overlap_components(xs, 4);
  REQUIRE(at4.size() == 2);
  CHECK(at4[0] == IndexClass({0, 1}));
  CHECK(at4[1] == IndexClass({2, 3}));
  CHECK(card_lower(xs, 0) == 1);
  CHECK(card_lower(xs, 4) == 2);
}

TEST_CASE("component counts never decrease with precision") {
  std::vector<RealName> xs = {
      RealName::constant(Rational(0)),
      RealName::constant(pow2(-6)),
      RealName::constant(Rational(1, 3)),
  };
  int prev = 0;
  for (long n = 0; n <= 12; ++n) {
    int cur = card_lower(xs, n);
    CHECK(cur >= prev);
    prev = cur;
  }
  CHECK(prev == 3);
}

TEST_CASE("class search finds the doubleton in the worked example") {
  Fuel fuel = big_fuel();
  std::vector<RealName> xs = {
      RealName::constant(Rational(1)),
      RealName::constant(Rational(1)),
      RealName::constant(Rational(2)),
      RealName::constant(Rational(2)),
  };
  auto r = find_class(xs, 2, fuel);
  REQUIRE(r.ok());
  CHECK(r.value() == IndexClass({0, 1}));

  auto singleton = find_class({RealName::constant(Rational(0)),
                               RealName::constant(Rational(1))},
                              1, fuel);
  REQUIRE(singleton.ok());
  CHECK(singleton.value() == IndexClass({0}));
}

TEST_CASE("class search with an oversized k") {
  // Every candidate subset splits the one true class, so nothing certifies.
  Fuel fuel(24, 50000);
  std::vector<RealName> xs(4, RealName::constant(Rational(7)));
  auto r = find_class(xs, 2, fuel);
  REQUIRE(!r.ok());
  CHECK(r.kind() == FailKind::FuelExhausted);

  // The full tuple is vacuously separated from its empty complement; under a
  // false promise the result is a union of classes, which callers must audit.
  Fuel fresh(24, 50000);
  std::vector<RealName> two = {RealName::constant(Rational(0)),
                               RealName::constant(Rational(1))};
  auto full = find_class(two, 2, fresh);
  REQUIRE(full.ok());
  CHECK(full.value() == IndexClass({0, 1}));
}

TEST_CASE("partitioning with the exact cardinality") {
  Fuel fuel = big_fuel();
  std::vector<RealName> xs = {
      RealName::constant(Rational(1, 3)),
      RealName::constant(Rational(1, 2)),
      RealName::constant(Rational(1, 3)),
  };
  auto r = partition_classes(xs, 2, fuel);
  REQUIRE(r.ok());
  REQUIRE(r.value().size() == 2);
  CHECK(r.value()[0] == IndexClass({0, 2}));
  CHECK(r.value()[1] == IndexClass({1}));

  auto high = partition_classes(xs, 3, fuel);
  REQUIRE(!high.ok());
  CHECK(high.kind() == FailKind::FuelExhausted);

  // Undercounting merges clusters that still overlap at precision 0; the
  // coarse partition is consistent with the (false) advice, so it is returned
  // and the burden of detection falls on downstream residual audits.
  Fuel fresh = big_fuel();
  auto low = partition_classes(xs, 1, fresh);
  REQUIRE(low.ok());
  CHECK(low.value() == std::vector<IndexClass>({{0, 1, 2}}));

  // With points already separated at precision 0 the undercount is caught.
  Fuel fresh2 = big_fuel();
  std::vector<RealName> spread = {RealName::constant(Rational(0)),
                                  RealName::constant(Rational(100)),
                                  RealName::constant(Rational(0))};
  auto over = partition_classes(spread, 1, fresh2);
  REQUIRE(!over.ok());
  CHECK(over.kind() == FailKind::ClusterOvershoot);
}

TEST_CASE("distinct members picks least-index representatives") {
  Fuel fuel = big_fuel();
  std::vector<RealName> xs = {
      RealName::constant(Rational(2)),
      RealName::constant(Rational(1)),
      RealName::constant(Rational(2)),
  };
  auto r = distinct_members(xs, 2, fuel);
  REQUIRE(r.ok());
  REQUIRE(r.value().size() == 2);
  CHECK(r.value()[0].query(10) == 2);
  CHECK(r.value()[1].query(10) == 1);
}

TEST_CASE("advice composition indexes the product space") {
  // First stage: floor of x/2 with parity advice; second stage consumes it.
  AdviceAlg<Rational, Rational> halve{
      2, [](const Rational& x, int advice, const Fuel&) -> Outcome<Rational> {
        Parity p = advice == 0 ? Parity::Even : Parity::Odd;
        return Rational(floor_with_parity(RealName::constant(x / 2), p));
      }};
  AdviceAlg<Rational, Rational> identity{
      1, [](const Rational& x, int, const Fuel&) -> Outcome<Rational> { return x; }};
  auto composed = compose_advice(halve, identity);
  CHECK(composed.advice_count == 2);
  Fuel fuel = big_fuel();
  auto r = composed.run(Rational(5), 0, fuel);  // 5/2 = 2.5, floor even -> 2
  REQUIRE(r.ok());
  CHECK(r.value() == 2);
}

TEST_CASE("rational enumeration hits small values early and uniquely") {
  CHECK(enumerate_rationals(0) == 0);
  CHECK(enumerate_rationals(1) == 1);
  CHECK(enumerate_rationals(2) == -1);
  std::set<Rational> seen;
  for (std::size_t i = 0; i < 200; ++i) {
    Rational q = enumerate_rationals(i);
    CHECK(!seen.count(q));
    seen.insert(q);
  }
  CHECK(seen.count(Rational(1, 2)));
  CHECK(seen.count(Rational(-2)));
  CHECK(seen.count(Rational(3, 2)));
}

TEST_CASE("subset enumeration is by size then lexicographic") {
  CHECK(enumerate_subsets(3, 1, 2, 0) == std::vector<int>({0}));
  CHECK(enumerate_subsets(3, 1, 2, 1) == std::vector<int>({1}));
  CHECK(enumerate_subsets(3, 1, 2, 2) == std::vector<int>({2}));
  CHECK(enumerate_subsets(3, 1, 2, 3) == std::vector<int>({0, 1}));
  CHECK(enumerate_subsets(3, 1, 2, 4) == std::vector<int>({0, 2}));
  CHECK(enumerate_subsets(3, 1, 2, 5) == std::vector<int>({1, 2}));
  CHECK(!enumerate_subsets(3, 1, 2, 6));
}

TEST_CASE("bound stream resolution meets in the middle") {
  Fuel fuel = big_fuel();
  BoundStream lower = [](long t) { return std::min<long>(t, 5); };
  BoundStream upper = [](long) { return 5L; };
  auto r = resolve_integer(lower, upper, fuel);
  REQUIRE(r.ok());
  CHECK(r.value() == 5);

  BoundStream bad_lower = [](long t) { return t < 3 ? 2 : 1; };  // decreases
  auto bad = resolve_integer(bad_lower, upper, fuel);
  REQUIRE(!bad.ok());
  CHECK(bad.kind() == FailKind::MonotonicityViolation);

  BoundStream too_low = [](long) { return 7L; };
  auto crossed = resolve_integer(lower, [](long) { return 6L; }, fuel);
  (void)too_low;
  REQUIRE(!crossed.ok());
  CHECK(crossed.kind() == FailKind::FuelExhausted);
}

TEST_CASE("dovetailing finds the first verifiable candidate") {
  Fuel fuel = big_fuel();
  auto candidate = [](std::size_t i) -> std::optional<long> {
    return i < 10 ? std::optional<long>(static_cast<long>(i)) : std::nullopt;
  };
  auto verified = [](const long& c, long p) { return c == 7 && p >= 9; };
  auto r = dovetail<long>(candidate, verified, fuel);
  REQUIRE(r.ok());
  CHECK(r.value().candidate == 7);
  CHECK(r.value().index == 7);
  CHECK(r.value().round == 9);
}

TEST_CASE("dovetailing over an empty candidate space fails cleanly") {
  Fuel fuel(16, 1000);
  auto r = dovetail<int>([](std::size_t) { return std::optional<int>(); },
                         [](const int&, long) { return true; }, fuel);
  REQUIRE(!r.ok());
  CHECK(r.kind() == FailKind::FuelExhausted);
}

TEST_CASE("serial and parallel dovetailing agree including fuel use") {
  auto candidate = [](std::size_t i) -> std::optional<long> {
    return i < 64 ? std::optional<long>(static_cast<long>(i)) : std::nullopt;
  };
  auto verified = [](const long& c, long p) { return c == 13 && p >= 20; };

  parallel_mode() = false;
  Fuel serial(64, 1000000);
  auto a = dovetail<long>(candidate, verified, serial);

  parallel_mode() = true;
  Fuel parallel(64, 1000000);
  auto b = dovetail<long>(candidate, verified, parallel);
  parallel_mode() = false;

  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(a.value().candidate == b.value().candidate);
  CHECK(a.value().round == b.value().round);
  CHECK(serial.steps_used() == parallel.steps_used());
}

TEST_CASE("direction enumeration yields primitive integer vectors once") {
  DirectionEnum dirs(2);
  std::set<RatVector> seen;
  bool has_diag = false, has_axis = false;
  for (std::size_t i = 0; i < 40; ++i) {
    auto u = dirs(i);
    REQUIRE(u);
    CHECK(!seen.count(*u));
    seen.insert(*u);
    BigInt g(0);
    for (const auto& c : *u) g = boost::multiprecision::gcd(g, numerator(c));
    CHECK(g == 1);
    if (*u == RatVector({Rational(-1), Rational(-1)})) has_diag = true;
    if (*u == RatVector({Rational(0), Rational(1)})) has_axis = true;
  }
  CHECK(has_diag);
  CHECK(has_axis);
}
