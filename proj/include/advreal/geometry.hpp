#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "advreal/dovetail.hpp"
#include "advreal/fuel.hpp"
#include "advreal/interval.hpp"
#include "advreal/names.hpp"
#include "advreal/outcome.hpp"
#include "advreal/rational.hpp"

namespace advreal {

// Certificate that point j is extreme: at the certification precision, the
// interval value of <u, x_j> strictly dominates <u, x_i> for every i != j.
// The normal is an exact (integer) vector, so the dominance is re-checkable
// with exact arithmetic on exact inputs.
struct HalfspaceWitness {
  RatVector normal;
  int index = 0;
  long precision = 0;
};

namespace detail {

inline Interval dot_enclosure(const RatVector& u, const RatVector& point, const Rational& rad) {
  Interval acc = Interval::point(0);
  for (std::size_t c = 0; c < u.size(); ++c)
    acc = acc + u[c] * Interval::around(point[c], rad);
  return acc;
}

inline bool dominates(const std::vector<VectorName>& points, int j, const RatVector& u, long p) {
  Rational rad = pow2(-p);
  Interval best = dot_enclosure(u, points[j].query(p), rad);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (static_cast<int>(i) == j) continue;
    if (!dot_enclosure(u, points[i].query(p), rad).strictly_below(best)) return false;
  }
  return true;
}

}  // namespace detail

// Semi-decides "x_j is extreme in the hull of the points" by dovetailing over
// integer normals: a witness exists iff x_j is extreme, but a negative can
// only show up as fuel exhaustion.
inline Outcome<HalfspaceWitness> semidecide_extreme(const std::vector<VectorName>& points, int j,
                                                    const Fuel& fuel) {
  if (points.empty() || j < 0 || j >= static_cast<int>(points.size()))
    throw std::invalid_argument("semidecide_extreme: index out of range");
  int d = points.front().dim();
  auto dirs = std::make_shared<DirectionEnum>(d);
  auto candidate = [dirs](std::size_t i) { return (*dirs)(i); };
  auto verified = [&points, j](const RatVector& u, long p) {
    return detail::dominates(points, j, u, p);
  };
  auto found = dovetail<RatVector>(candidate, verified, fuel);
  if (!found) return found.propagate<HalfspaceWitness>();
  return HalfspaceWitness{found.value().candidate, j, found.value().round};
}

struct ExtremeSet {
  std::vector<int> indices;                // sorted ascending
  std::vector<HalfspaceWitness> witnesses; // aligned with indices
};

namespace detail {

enum class RoundsEnd { Stopped, Overshoot, FuelOut };

struct RoundsResult {
  RoundsEnd end;
  ExtremeSet set;  // whatever was witnessed, even on fuel exhaustion
};

// Shared engine for the interleaved per-point searches. Round t evaluates
// joint candidates c = 0..t at precision t, where c encodes (point c mod N,
// direction c div N); points already witnessed in earlier rounds are skipped.
// Rounds always complete so serial and parallel runs agree exactly; stop()
// decides after each round.
template <class Stop>
RoundsResult witness_rounds(const std::vector<VectorName>& points, const Fuel& fuel, Stop stop) {
  int n = static_cast<int>(points.size());
  int d = points.front().dim();
  DirectionEnum dirs(d);
  std::map<int, HalfspaceWitness> found;

  auto finish = [&found]() {
    ExtremeSet s;
    for (auto& [idx, w] : found) {
      s.indices.push_back(idx);
      s.witnesses.push_back(w);
    }
    return s;
  };

  for (long t = 0;; ++t) {
    if (!fuel.allows_precision(t)) return RoundsResult{RoundsEnd::FuelOut, finish()};
    struct Job {
      int j;
      RatVector u;
      bool ok = false;
    };
    std::vector<Job> jobs;
    for (long c = 0; c <= t; ++c) {
      int j = static_cast<int>(c % n);
      if (found.count(j)) continue;  // witnessed in an earlier round
      auto u = dirs(static_cast<std::size_t>(c / n));
      jobs.push_back(Job{j, std::move(*u)});
    }
    bool parallel = parallel_mode().load() &&
                    fuel.steps_used() + static_cast<std::int64_t>(jobs.size()) <= fuel.max_steps();
    if (parallel) {
      constexpr std::size_t kBatch = 8;
      for (std::size_t base = 0; base < jobs.size(); base += kBatch) {
        std::size_t end = std::min(base + kBatch, jobs.size());
        std::vector<std::future<bool>> fs;
        for (std::size_t i = base; i < end; ++i)
          fs.push_back(std::async(std::launch::async, [&points, &jobs, i, t] {
            return detail::dominates(points, jobs[i].j, jobs[i].u, t);
          }));
        for (std::size_t i = base; i < end; ++i) jobs[i].ok = fs[i - base].get();
      }
      for (std::size_t i = 0; i < jobs.size(); ++i) fuel.spend();
    } else {
      for (auto& job : jobs) {
        if (!fuel.spend()) return RoundsResult{RoundsEnd::FuelOut, finish()};
        job.ok = detail::dominates(points, job.j, job.u, t);
      }
    }
    for (const auto& job : jobs)
      if (job.ok && !found.count(job.j)) found[job.j] = HalfspaceWitness{job.u, job.j, t};

    if (auto res = stop(static_cast<int>(found.size()))) {
      RoundsEnd end = *res ? RoundsEnd::Stopped : RoundsEnd::Overshoot;
      return RoundsResult{end, finish()};
    }
  }
}

}  // namespace detail

// All extreme points, given M = their exact number. Witnesses accumulate
// across rounds; the search stops when M points are witnessed. Every witness
// certifies genuine extremeness, so a count above M certifies the advice
// false, and a count that never reaches M (M too large) burns out the fuel.
inline Outcome<ExtremeSet> extchull_with_count(const std::vector<VectorName>& points, int m,
                                               const Fuel& fuel) {
  using Out = Outcome<ExtremeSet>;
  if (points.size() < 2 || m < 2 || m > static_cast<int>(points.size()))
    throw std::invalid_argument("extchull_with_count: need 2 <= M <= N");
  auto res = detail::witness_rounds(points, fuel, [m](int got) -> std::optional<bool> {
    if (got == m) return true;
    if (got > m) return false;
    return std::nullopt;
  });
  switch (res.end) {
    case detail::RoundsEnd::Stopped: return res.set;
    case detail::RoundsEnd::Overshoot:
      return Out::fail(FailKind::AdviceSuspect,
                       "extreme search: more witnessed points than the advised count");
    case detail::RoundsEnd::FuelOut:
    default:
      return Out::fail(FailKind::FuelExhausted, "extreme search: fuel exhausted");
  }
}

// Anytime enumeration: runs until fuel runs out and returns whatever verified.
// Sound (every index is extreme) but not necessarily complete.
inline ExtremeSet extchull_enumerate(const std::vector<VectorName>& points, const Fuel& fuel) {
  if (points.empty()) return {};
  auto res = detail::witness_rounds(
      points, fuel, [](int) -> std::optional<bool> { return std::nullopt; });
  return res.set;
}

// The hull fixture behind the count lower bound: inputs x_1 >= ... >= x_n = 0
// become the 2D points (0,0), (i, x_1+...+x_i) for i = 1..n-1, and (n, x_n).
// Point i is non-extreme exactly when x_i = x_{i+1} (collinear slopes), which
// is what transfers hull counting to tuple cardinality.
inline std::vector<VectorName> staircase_embed(const std::vector<RealName>& xs) {
  int n = static_cast<int>(xs.size());
  if (n < 1) throw std::invalid_argument("staircase_embed: empty input");
  std::vector<VectorName> out;
  out.reserve(n + 1);
  out.push_back(VectorName::exact({Rational(0), Rational(0)}));
  for (int i = 1; i <= n - 1; ++i) {
    std::vector<RealName> prefix(xs.begin(), xs.begin() + i);
    out.push_back(VectorName::from_components(
        {RealName::constant(Rational(i)), sum_names(prefix)}));
  }
  out.push_back(VectorName::from_components({RealName::constant(Rational(n)), xs.back()}));
  return out;
}

}  // namespace advreal
