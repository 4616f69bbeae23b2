#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "advreal/dovetail.hpp"
#include "advreal/fuel.hpp"
#include "advreal/interval.hpp"
#include "advreal/names.hpp"
#include "advreal/outcome.hpp"
#include "advreal/rational.hpp"

namespace advreal {

// Advice for the intermediate-value search: either an explicit rational zero
// (the plateau case) or the promise that the zero set has empty interior.
struct IntermedAdvice {
  std::optional<Rational> at;  // nullopt: isolated promise

  static IntermedAdvice rational(const Rational& r) { return IntermedAdvice{r}; }
  static IntermedAdvice isolated() { return IntermedAdvice{std::nullopt}; }
};

// Exact piecewise-linear function on [0,1] from its breakpoints; evaluation
// is exact rational interpolation, so every enclosure has width zero.
inline FuncName piecewise_linear_funcname(std::vector<std::pair<Rational, Rational>> pts) {
  if (pts.size() < 2) throw std::invalid_argument("piecewise linear: need two breakpoints");
  if (pts.front().first != 0 || pts.back().first != 1)
    throw std::invalid_argument("piecewise linear: breakpoints must span [0,1]");
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (!(pts[i - 1].first < pts[i].first))
      throw std::invalid_argument("piecewise linear: x-coordinates must strictly increase");
  return FuncName([pts = std::move(pts)](const Rational& q, long) {
    if (q < 0 || q > 1) throw std::invalid_argument("piecewise linear: argument outside [0,1]");
    std::size_t i = 1;
    while (i + 1 < pts.size() && pts[i].first < q) ++i;
    const auto& [x0, y0] = pts[i - 1];
    const auto& [x1, y1] = pts[i];
    return y0 + (q - x0) * (y1 - y0) / (x1 - x0);
  });
}

namespace detail {

// Sign of f(c) once certified: the value enclosure excludes zero.
inline std::optional<int> certified_sign(const FuncName& f, const Rational& c, long p) {
  Interval e = f.enclosure(c, p);
  if (e.lo > 0) return 1;
  if (e.hi < 0) return -1;
  return std::nullopt;
}

// Fixed enumeration of dyadic cut points of a bracket [a, b], restricted to
// its middle third: level l = 1, 2, ... contributes a + (b-a) j/2^l for odd
// j, in increasing j. Dense in the middle third, so under the isolated-zeros
// promise some candidate has f != 0.
class MiddleThirdEnum {
 public:
  MiddleThirdEnum(const Rational& a, const Rational& b) : a_(a), w_(b - a) {}

  std::optional<Rational> operator()(std::size_t i) {
    std::lock_guard<std::mutex> lock(mu_);
    while (cache_.size() <= i) {
      BigInt denom = BigInt(1) << level_;
      for (BigInt j(1); j < denom; j += 2) {
        Rational frac(j, denom);
        if (3 * frac >= 1 && 3 * frac <= 2) cache_.push_back(a_ + w_ * frac);
      }
      ++level_;
    }
    return cache_[i];
  }

 private:
  Rational a_, w_;
  long level_ = 1;
  std::mutex mu_;
  std::vector<Rational> cache_;
};

struct Bracket {
  Rational a, b;  // certified f(a) < 0 < f(b)
  Rational width() const { return b - a; }
};

// One trisection step: find a middle-third point with certified sign, move
// the matching endpoint. Width shrinks by a factor <= 2/3.
inline Outcome<Bracket> contract(const FuncName& f, const Bracket& br, const Fuel& fuel) {
  auto en = std::make_shared<MiddleThirdEnum>(br.a, br.b);
  auto candidate = [en](std::size_t i) { return (*en)(i); };
  auto verified = [&f](const Rational& c, long p) {
    return detail::certified_sign(f, c, p).has_value();
  };
  auto found = dovetail<Rational>(candidate, verified, fuel);
  if (!found) return found.propagate<Bracket>();
  Rational c = found.value().candidate;
  int sgn = *detail::certified_sign(f, c, found.value().round);
  return sgn > 0 ? Bracket{br.a, c} : Bracket{c, br.b};
}

}  // namespace detail

// A zero of f given the advice, as a real name. f must be continuous on
// [0,1] with f(0) = -1 and f(1) = 1 (certified before searching).
//
// Rational advice: the name is constant. Isolated advice: a sign-certified
// bracket shrinks by trisection; each query contracts until the bracket fits
// the precision and returns its midpoint. Either way the result is checked at
// precision k: a certified |f(result)| > 2 2^-k means the advice lied.
inline Outcome<RealName> ivt_with_advice(const FuncName& f, const IntermedAdvice& advice, long k,
                                         const Fuel& fuel) {
  using Out = Outcome<RealName>;

  auto validate = [&f, k, &fuel](const Rational& x) -> std::optional<Failure> {
    long p = k + 1;
    if (!fuel.allows_precision(p) || !fuel.spend())
      return Failure{FailKind::FuelExhausted, "ivt: no budget to validate"};
    Rational v = f.eval(x, p);
    if (abs_rat(v) - pow2(-p) > 2 * pow2(-k))
      return Failure{FailKind::AdviceSuspect, "ivt: |f| at the result certifiably exceeds 2^-k bounds"};
    return std::nullopt;
  };

  if (advice.at) {
    const Rational& r = *advice.at;
    if (r < 0 || r > 1)
      return Out::fail(FailKind::AdviceSuspect, "ivt: advised zero lies outside [0,1]");
    if (auto bad = validate(r)) return Out::fail(bad->kind, bad->detail);
    return RealName::constant(r);
  }

  // Certify the endpoint signs; a certified wrong sign is a broken
  // precondition, an uncertifiable one burns fuel.
  for (long p = 1;; ++p) {
    if (!fuel.allows_precision(p) || !fuel.spend())
      return Out::fail(FailKind::FuelExhausted, "ivt: endpoint signs never certified");
    auto s0 = detail::certified_sign(f, Rational(0), p);
    auto s1 = detail::certified_sign(f, Rational(1), p);
    if (s0 && *s0 > 0)
      return Out::fail(FailKind::PreconditionViolated, "ivt: f(0) certified positive");
    if (s1 && *s1 < 0)
      return Out::fail(FailKind::PreconditionViolated, "ivt: f(1) certified negative");
    if (s0 && s1) break;
  }

  struct State {
    detail::Bracket br;
    std::mutex mu;
  };
  auto st = std::make_shared<State>();
  st->br = detail::Bracket{Rational(0), Rational(1)};

  RealName root([st, f, fuel](long q) {
    std::lock_guard<std::mutex> lock(st->mu);
    Rational target = pow2(-q);
    while (st->br.width() > target) {
      auto next = detail::contract(f, st->br, fuel);
      if (!next)
        throw NameFailure(next.kind(), "ivt root name: " + next.failure().detail);
      st->br = next.value();
    }
    return (st->br.a + st->br.b) / 2;
  });

  Rational xk;
  try {
    xk = root.query(k);
  } catch (const NameFailure& e) {
    return Out::fail(e.kind, e.what());
  }
  if (auto bad = validate(xk)) return Out::fail(bad->kind, bad->detail);
  return root;
}

}  // namespace advreal
