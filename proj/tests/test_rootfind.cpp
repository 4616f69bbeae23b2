#include <catch2/catch_amalgamated.hpp>

#include "advreal/rootfind.hpp"

using namespace advreal;

namespace {

Fuel big_fuel() { return Fuel(64, 1000000); }

// f(x) = 2x - 1: the unique zero sits at 1/2.
FuncName ramp() {
  return piecewise_linear_funcname({{Rational(0), Rational(-1)}, {Rational(1), Rational(1)}});
}

// -1 up to 1/3, flat zero until 2/3, then up to 1.
FuncName plateau() {
  return piecewise_linear_funcname({{Rational(0), Rational(-1)},
                                    {Rational(1, 3), Rational(0)},
                                    {Rational(2, 3), Rational(0)},
                                    {Rational(1), Rational(1)}});
}

}  // namespace

TEST_CASE("piecewise linear breakpoints are validated") {
  CHECK_THROWS_AS(piecewise_linear_funcname({{Rational(0), Rational(0)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(piecewise_linear_funcname(
                      {{Rational(0), Rational(-1)}, {Rational(1, 2), Rational(1)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(piecewise_linear_funcname({{Rational(1, 4), Rational(-1)},
                                             {Rational(1), Rational(1)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(piecewise_linear_funcname({{Rational(0), Rational(-1)},
                                             {Rational(1, 2), Rational(0)},
                                             {Rational(1, 2), Rational(1)},
                                             {Rational(1), Rational(1)}}),
                  std::invalid_argument);
}

TEST_CASE("piecewise linear evaluation is exact interpolation") {
  FuncName f = ramp();
  CHECK(f.eval(Rational(1, 2), 10) == Rational(0));
  CHECK(f.eval(Rational(1, 4), 10) == Rational(-1, 2));
  CHECK(f.eval(Rational(0), 10) == Rational(-1));
  CHECK(f.eval(Rational(1), 10) == Rational(1));
  CHECK_THROWS_AS(f.eval(Rational(-1, 8), 10), std::invalid_argument);
  CHECK_THROWS_AS(f.eval(Rational(9, 8), 10), std::invalid_argument);

  FuncName g = plateau();
  CHECK(g.eval(Rational(1, 3), 10) == Rational(0));
  CHECK(g.eval(Rational(1, 2), 10) == Rational(0));
  CHECK(g.eval(Rational(5, 6), 10) == Rational(1, 2));
}

TEST_CASE("rational advice is echoed exactly") {
  Fuel fuel = big_fuel();
  auto r = ivt_with_advice(ramp(), IntermedAdvice::rational(Rational(1, 2)), 20, fuel);
  REQUIRE(r.ok());
  CHECK(r.value().query(30) == Rational(1, 2));
  CHECK(r.value().query(5) == Rational(1, 2));
}

TEST_CASE("rational advice within tolerance is accepted") {
  // f(33/64) = 1/32 and the k=4 check only certifies lies beyond 2 2^-4.
  Fuel fuel = big_fuel();
  auto r = ivt_with_advice(ramp(), IntermedAdvice::rational(Rational(33, 64)), 4, fuel);
  REQUIRE(r.ok());
  CHECK(r.value().query(10) == Rational(33, 64));
}

TEST_CASE("rational advice on the plateau is truthful") {
  Fuel fuel = big_fuel();
  auto mid = ivt_with_advice(plateau(), IntermedAdvice::rational(Rational(1, 2)), 16, fuel);
  REQUIRE(mid.ok());
  CHECK(mid.value().query(16) == Rational(1, 2));
  auto edge = ivt_with_advice(plateau(), IntermedAdvice::rational(Rational(1, 3)), 16, fuel);
  REQUIRE(edge.ok());
}

TEST_CASE("lying rational advice is certified suspect") {
  Fuel f1 = big_fuel();
  auto outside = ivt_with_advice(ramp(), IntermedAdvice::rational(Rational(3, 2)), 10, f1);
  REQUIRE(!outside.ok());
  CHECK(outside.kind() == FailKind::AdviceSuspect);

  Fuel f2 = big_fuel();
  auto off = ivt_with_advice(ramp(), IntermedAdvice::rational(Rational(1, 4)), 10, f2);
  REQUIRE(!off.ok());
  CHECK(off.kind() == FailKind::AdviceSuspect);
}

TEST_CASE("isolated advice refines a bracket to the zero") {
  Fuel fuel = big_fuel();
  auto r = ivt_with_advice(ramp(), IntermedAdvice::isolated(), 20, fuel);
  REQUIRE(r.ok());
  CHECK(abs_rat(Rational(r.value().query(20) - Rational(1, 2))) <= pow2(-20));
  CHECK(abs_rat(Rational(r.value().query(26) - Rational(1, 2))) <= pow2(-26));

  // A kinked crossing away from any dyadic midpoint: zero at 11/18.
  FuncName kinked = piecewise_linear_funcname({{Rational(0), Rational(-1)},
                                               {Rational(1, 3), Rational(-1, 2)},
                                               {Rational(3, 4), Rational(1, 4)},
                                               {Rational(1), Rational(1)}});
  Fuel f2 = big_fuel();
  auto k = ivt_with_advice(kinked, IntermedAdvice::isolated(), 16, f2);
  REQUIRE(k.ok());
  CHECK(abs_rat(Rational(k.value().query(16) - Rational(11, 18))) <= pow2(-16));
}

TEST_CASE("root names answer coarse and fine queries consistently") {
  Fuel fuel = big_fuel();
  auto r = ivt_with_advice(ramp(), IntermedAdvice::isolated(), 8, fuel);
  REQUIRE(r.ok());
  Rational coarse = r.value().query(4);
  Rational fine = r.value().query(18);
  CHECK(abs_rat(Rational(coarse - fine)) <= pow2(-4) + pow2(-18));
}

TEST_CASE("each trisection step contracts the bracket by at most 2/3") {
  FuncName f = ramp();
  detail::Bracket br{Rational(0), Rational(1)};
  Fuel fuel = big_fuel();
  for (int i = 0; i < 6; ++i) {
    auto next = detail::contract(f, br, fuel);
    REQUIRE(next.ok());
    CHECK(next.value().width() * 3 <= br.width() * 2);
    CHECK(next.value().a >= br.a);
    CHECK(next.value().b <= br.b);
    // The bracket still straddles the zero.
    CHECK(next.value().a < Rational(1, 2));
    CHECK(next.value().b > Rational(1, 2));
    br = next.value();
  }
}

TEST_CASE("false isolated advice on a plateau burns out honestly") {
  // Every middle-third cut of [0,1] lands inside the flat zero stretch, so no
  // sign ever certifies; the lie is indistinguishable from a hard instance.
  Fuel fuel(20, 5000);
  auto r = ivt_with_advice(plateau(), IntermedAdvice::isolated(), 10, fuel);
  REQUIRE(!r.ok());
  CHECK(r.kind() == FailKind::FuelExhausted);
}

TEST_CASE("certified wrong endpoint signs violate the precondition") {
  FuncName pos = piecewise_linear_funcname({{Rational(0), Rational(1)}, {Rational(1), Rational(1)}});
  Fuel f1 = big_fuel();
  auto r1 = ivt_with_advice(pos, IntermedAdvice::isolated(), 10, f1);
  REQUIRE(!r1.ok());
  CHECK(r1.kind() == FailKind::PreconditionViolated);

  FuncName neg = piecewise_linear_funcname({{Rational(0), Rational(-1)}, {Rational(1), Rational(-1)}});
  Fuel f2 = big_fuel();
  auto r2 = ivt_with_advice(neg, IntermedAdvice::isolated(), 10, f2);
  REQUIRE(!r2.ok());
  CHECK(r2.kind() == FailKind::PreconditionViolated);
}

TEST_CASE("validation respects the precision budget") {
  Fuel fuel(8, 100000);
  auto r = ivt_with_advice(ramp(), IntermedAdvice::isolated(), 20, fuel);
  REQUIRE(!r.ok());
  CHECK(r.kind() == FailKind::FuelExhausted);
}
