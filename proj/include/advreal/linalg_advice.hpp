#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "advreal/basics.hpp"
#include "advreal/dovetail.hpp"
#include "advreal/fuel.hpp"
#include "advreal/interval.hpp"
#include "advreal/names.hpp"
#include "advreal/outcome.hpp"
#include "advreal/poly.hpp"
#include "advreal/ratlinalg.hpp"
#include "advreal/rational.hpp"

namespace advreal {

namespace detail {

using IntervalMatrix = std::vector<std::vector<Interval>>;

inline IntervalMatrix enclose_matrix(const RatMatrix& m, long p) {
  Rational r = pow2(-p);
  IntervalMatrix out(m.rows, std::vector<Interval>(m.cols, Interval::point(0)));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out[i][j] = Interval::around(m.at(i, j), r);
  return out;
}

// Laplace expansion along the first column; fine for the small orders the
// rank search ever sees.
inline Interval interval_det(const IntervalMatrix& m) {
  int n = static_cast<int>(m.size());
  if (n == 0) return Interval::point(1);
  if (n == 1) return m[0][0];
  Interval acc = Interval::point(0);
  for (int i = 0; i < n; ++i) {
    IntervalMatrix minor;
    minor.reserve(n - 1);
    for (int r = 0; r < n; ++r) {
      if (r == i) continue;
      minor.emplace_back(m[r].begin() + 1, m[r].end());
    }
    Interval term = m[i][0] * interval_det(minor);
    acc = (i % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

inline IntervalMatrix submatrix(const IntervalMatrix& m, const std::vector<int>& rows,
                                const std::vector<int>& cols) {
  IntervalMatrix out;
  out.reserve(rows.size());
  for (int r : rows) {
    std::vector<Interval> row;
    row.reserve(cols.size());
    for (int c : cols) row.push_back(m[r][c]);
    out.push_back(std::move(row));
  }
  return out;
}

// Gaussian elimination over intervals; pivot = first row whose entry excludes
// zero. Returns nullopt when no certified pivot exists at this precision (the
// caller refines and retries). The result encloses the exact solution.
inline std::optional<std::vector<Interval>> interval_solve(IntervalMatrix m,
                                                           std::vector<Interval> b) {
  int n = static_cast<int>(m.size());
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (m[r][col].excludes_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) return std::nullopt;
    std::swap(m[col], m[piv]);
    std::swap(b[col], b[piv]);
    for (int r = col + 1; r < n; ++r) {
      Interval f = m[r][col] / m[col][col];
      for (int c = col; c < n; ++c) m[r][c] = m[r][c] - f * m[col][c];
      b[r] = b[r] - f * b[col];
    }
  }
  std::vector<Interval> x(n, Interval::point(0));
  for (int row = n - 1; row >= 0; --row) {
    Interval s = b[row];
    for (int c = row + 1; c < n; ++c) s = s - m[row][c] * x[c];
    x[row] = s / m[row][row];
  }
  return x;
}

// Largest r with an r x r minor whose interval determinant at precision p
// excludes zero.
inline int certified_rank_at(const MatrixName& a, long p) {
  IntervalMatrix m = enclose_matrix(a.query(p), p);
  int lim = std::min(a.rows(), a.cols());
  for (int r = lim; r >= 1; --r) {
    for (std::size_t i = 0;; ++i) {
      auto rows = enumerate_subsets(a.rows(), r, r, i);
      if (!rows) break;
      for (std::size_t j = 0;; ++j) {
        auto cols = enumerate_subsets(a.cols(), r, r, j);
        if (!cols) break;
        if (interval_det(submatrix(m, *rows, *cols)).excludes_zero()) return r;
      }
    }
  }
  return 0;
}

}  // namespace detail

// Certified lower bound on rank(A). Certificates from coarse precisions stay
// valid, so the running max is nondecreasing in n and reaches the true rank
// once some minor separates from zero.
inline int rank_lower(const MatrixName& a, long n) {
  int best = 0;
  int lim = std::min(a.rows(), a.cols());
  for (long p = 0; p <= n && best < lim; ++p)
    best = std::max(best, detail::certified_rank_at(a, p));
  return best;
}

// Exact rank from a converging upper-bound advice stream met with the
// certified lower bounds.
inline Outcome<long> rank_with_upper(const MatrixName& a, const BoundStream& upper,
                                     const Fuel& fuel) {
  auto best = std::make_shared<int>(0);
  BoundStream lower = [a, best](long t) {
    *best = std::max(*best, detail::certified_rank_at(a, t));
    return static_cast<long>(*best);
  };
  return resolve_integer(lower, upper, fuel);
}

// A committed choice of pivot rows/columns: at `precision`, the interval
// determinant of the submatrix excludes zero, so the true submatrix is
// invertible and stays the anchor for every later query.
struct PivotCommitment {
  std::vector<int> rows, cols;
  long precision = 0;
};

namespace detail {

// One kernel basis vector at output precision q: free column f carries 1,
// other free columns 0, pivot coordinates solved from the committed system.
// Refines input precision until every solved entry has width <= 2^-q; the
// enclosure always contains the exact kernel vector, so midpoints form a
// valid name.
inline RatVector kernel_point(const MatrixName& a, const PivotCommitment& commit, int f, long q,
                              const Fuel& fuel) {
  Rational target = pow2(-q);
  for (long p = std::max(commit.precision, q + 4);; p += 6) {
    if (!fuel.allows_precision(p))
      throw NameFailure(FailKind::FuelExhausted, "kernel name: precision budget exhausted");
    if (!fuel.spend())
      throw NameFailure(FailKind::FuelExhausted, "kernel name: step budget exhausted");
    IntervalMatrix enc = enclose_matrix(a.query(p), p);
    IntervalMatrix m = submatrix(enc, commit.rows, commit.cols);
    std::vector<Interval> b;
    b.reserve(commit.rows.size());
    for (int r : commit.rows) b.push_back(Rational(-1) * enc[r][f]);
    auto x = interval_solve(std::move(m), std::move(b));
    if (!x) continue;
    bool tight = true;
    for (const auto& iv : *x) tight = tight && iv.width() <= target;
    if (!tight) continue;
    RatVector v(a.cols(), Rational(0));
    v[f] = 1;
    for (std::size_t j = 0; j < commit.cols.size(); ++j) v[commit.cols[j]] = (*x)[j].mid();
    return v;
  }
}

}  // namespace detail

// Basis of kernel(A) given r = rank(A), as cols - r vector names. The pivot
// submatrix is committed by dovetailing over (row set, column set) pairs in
// lexicographic order; each emitted vector is post-validated by an exact
// residual check against an input approximant, which certifies false advice
// (r too small) since the emitted vectors are independent by construction.
inline Outcome<std::vector<VectorName>> kernel_with_rank(const MatrixName& a, int r, long k,
                                                         const Fuel& fuel) {
  using Out = Outcome<std::vector<VectorName>>;
  if (r < 0 || k < 0) throw std::invalid_argument("kernel_with_rank: negative rank or precision");
  int rows = a.rows(), cols = a.cols();

  PivotCommitment commit;
  if (r > 0) {
    using RC = std::pair<std::vector<int>, std::vector<int>>;
    BigInt num_c = detail::binomial(cols, r);
    auto candidate = [&a, r, num_c](std::size_t i) -> std::optional<RC> {
      if (num_c == 0) return std::nullopt;
      BigInt idx(static_cast<unsigned long long>(i));
      auto rs = enumerate_subsets(a.rows(), r, r, static_cast<std::size_t>(idx / num_c));
      auto cs = enumerate_subsets(a.cols(), r, r, static_cast<std::size_t>(idx % num_c));
      if (!rs || !cs) return std::nullopt;
      return RC{*rs, *cs};
    };
    auto verified = [&a](const RC& rc, long p) {
      auto m = detail::submatrix(detail::enclose_matrix(a.query(p), p), rc.first, rc.second);
      return detail::interval_det(m).excludes_zero();
    };
    auto found = dovetail<RC>(candidate, verified, fuel);
    if (!found) return found.propagate<std::vector<VectorName>>();
    commit.rows = found.value().candidate.first;
    commit.cols = found.value().candidate.second;
    commit.precision = found.value().round;
  }

  std::vector<char> is_pivot(cols, 0);
  for (int c : commit.cols) is_pivot[c] = 1;
  std::vector<VectorName> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    if (r == 0) {
      RatVector e(cols, Rational(0));
      e[f] = 1;
      basis.push_back(VectorName::exact(std::move(e)));
    } else {
      basis.push_back(VectorName(
          cols, [a, commit, f, fuel](long q) { return detail::kernel_point(a, commit, f, q, fuel); }));
    }
  }

  // Exact residual check at output precision: with truthful advice each
  // emitted vector tracks a true kernel vector, so ||A_p v|| stays far below
  // the threshold; with r too small some vector cannot be in the kernel.
  Rational tol = Rational(cols + 1) * pow2(-k);
  RatMatrix ap = a.query(k + 8);
  for (const auto& name : basis) {
    RatVector v;
    try {
      v = name.query(k + 6);
    } catch (const NameFailure& e) {
      return Out::fail(e.kind, e.what());
    }
    if (max_abs(ap.apply(v)) > tol)
      return Out::fail(FailKind::AdviceSuspect,
                       "kernel: residual exceeds tolerance; rank advice too small");
  }
  return basis;
}

// Unit-norm member of kernel(A) \ {0}: the first kernel basis vector,
// normalized. Its free coordinate is exactly 1, so the norm is certified >= 1
// and normalization never divides by an interval containing zero.
inline Outcome<VectorName> lineq_with_rank(const MatrixName& a, int r, long k, const Fuel& fuel) {
  using Out = Outcome<VectorName>;
  auto basis = kernel_with_rank(a, r, k, fuel);
  if (!basis) return basis.propagate<VectorName>();
  if (basis.value().empty())
    return Out::fail(FailKind::PreconditionViolated,
                     "lineq: advised rank leaves a trivial kernel");
  VectorName v = basis.value().front();
  int d = v.dim();
  VectorName unit(d, [v, d, fuel](long q) {
    for (long p = q + 3;; p += 6) {
      if (!fuel.allows_precision(p))
        throw NameFailure(FailKind::FuelExhausted, "normalize: precision budget exhausted");
      if (!fuel.spend())
        throw NameFailure(FailKind::FuelExhausted, "normalize: step budget exhausted");
      RatVector w = v.query(p);
      Rational rad = pow2(-p);
      Interval s = Interval::point(0);
      for (const auto& wi : w) {
        Interval e = Interval::around(wi, rad);
        s = s + e * e;
      }
      if (!(s.lo > 0)) continue;
      Interval nrm = sqrt_interval(s, p + 2);
      std::vector<Interval> out;
      out.reserve(w.size());
      bool tight = true;
      Rational target = pow2(-q);
      for (const auto& wi : w) {
        Interval e = Interval::around(wi, rad) / nrm;
        tight = tight && e.width() <= target;
        out.push_back(e);
      }
      if (!tight) continue;
      RatVector res;
      res.reserve(out.size());
      for (const auto& e : out) res.push_back(e.mid());
      return res;
    }
  });
  // Force the requested precision now so fuel problems surface here and the
  // value is memoized for later queries.
  try {
    unit.query(k);
  } catch (const NameFailure& e) {
    return Out::fail(e.kind, e.what());
  }
  return unit;
}

// Name of the sorted eigenvalue tuple of a symmetric matrix, repeated by
// multiplicity. A query at k reads the input at n = k + ceil(log2(d+1)) + 1,
// takes the exact characteristic polynomial of that rational matrix, and
// refines its real roots to width 2^-n. Weyl's bound gives
// |lambda_i(A_n) - lambda_i(A)| <= ||A - A_n||_2 <= d 2^-n, so each component
// is within (d+1) 2^-n <= 2^-(k+1) of the true sorted eigenvalue.
class EigenTupleName {
  struct State {
    MatrixName a;
    std::map<long, RatVector> memo;
    std::mutex mu;
    explicit State(MatrixName m) : a(std::move(m)) {}
  };

 public:
  explicit EigenTupleName(const MatrixName& a) : s_(std::make_shared<State>(a)) {
    if (a.rows() != a.cols() || !a.symmetric())
      throw std::invalid_argument("EigenTupleName: symmetric-flagged square name required");
  }

  int dim() const { return s_->a.rows(); }

  RatVector query(long k) const {
    if (k < 0) k = 0;
    std::lock_guard<std::mutex> lock(s_->mu);
    auto it = s_->memo.find(k);
    if (it != s_->memo.end()) return it->second;
    int d = dim();
    long n = k + ceil_log2(Rational(d + 1)) + 1;
    RatMatrix an = s_->a.query(n);
    auto roots = isolate_and_refine(charpoly_exact(an), pow2(-n));
    if (!roots)
      throw std::logic_error("eigenvalue isolation failed: " + roots.failure().detail);
    RatVector tuple;
    tuple.reserve(d);
    for (const auto& rt : roots.value())
      for (int c = 0; c < rt.multiplicity; ++c) tuple.push_back(rt.iv.mid());
    if (static_cast<int>(tuple.size()) != d)
      throw std::logic_error("eigenvalue multiplicities do not sum to the dimension");
    s_->memo.emplace(k, tuple);
    return tuple;
  }

  RealName component(int i) const {
    if (i < 0 || i >= dim()) throw std::out_of_range("EigenTupleName::component");
    EigenTupleName self = *this;
    return RealName([self, i](long n) { return self.query(n)[i]; });
  }

  std::vector<RealName> components() const {
    std::vector<RealName> out;
    out.reserve(dim());
    for (int i = 0; i < dim(); ++i) out.push_back(component(i));
    return out;
  }

 private:
  std::shared_ptr<State> s_;
};

// Sorted eigenvalue tuple at precision k (componentwise within 2^-k).
inline RatVector eigenvalues_with_multiplicity(const MatrixName& a, long k) {
  return EigenTupleName(a).query(k);
}

// Upper bound on floor(log2 m(A)), m(A) = least eigenvalue multiplicity.
// Clusters of the accumulated overlap graph only ever split as n grows, and
// every cluster contains a whole multiplicity class, so the value is
// nonincreasing and never below the true floor(log2 m(A)).
inline long min_mult_log_upper(const MatrixName& a, long n) {
  EigenTupleName ev(a);
  auto classes = detail::overlap_components(ev.components(), n);
  std::size_t m = classes.front().size();
  for (const auto& c : classes) m = std::min(m, c.size());
  return floor_log2_int(BigInt(static_cast<unsigned long long>(m)));
}

// Classical Gram-Schmidt over interval arithmetic, emitted as names. Each
// query refines until every projection denominator <ui, ui> is certified
// positive (this certifies linear independence) and all output entries have
// width <= 2^-q.
inline Outcome<std::vector<VectorName>> gram_schmidt_name(const std::vector<VectorName>& vs,
                                                          long k, const Fuel& fuel) {
  using Out = Outcome<std::vector<VectorName>>;
  if (vs.empty()) return std::vector<VectorName>{};
  int d = vs.front().dim();
  int len = static_cast<int>(vs.size());

  auto compute = [vs, d, len, fuel](long q) {
    Rational target = pow2(-q);
    for (long p = q + 4;; p += 6) {
      if (!fuel.allows_precision(p))
        throw NameFailure(FailKind::FuelExhausted,
                          "gram-schmidt: linear dependence never excluded within fuel");
      if (!fuel.spend())
        throw NameFailure(FailKind::FuelExhausted, "gram-schmidt: step budget exhausted");
      Rational rad = pow2(-p);
      std::vector<std::vector<Interval>> u(len);
      bool certified = true;
      std::vector<Interval> norm2(len, Interval::point(0));
      for (int i = 0; i < len && certified; ++i) {
        RatVector w = vs[i].query(p);
        u[i].reserve(d);
        for (int c = 0; c < d; ++c) u[i].push_back(Interval::around(w[c], rad));
        for (int j = 0; j < i; ++j) {
          Interval num = Interval::point(0);
          for (int c = 0; c < d; ++c) num = num + u[i][c] * u[j][c];
          Interval f = num / norm2[j];
          for (int c = 0; c < d; ++c) u[i][c] = u[i][c] - f * u[j][c];
        }
        Interval s = Interval::point(0);
        for (int c = 0; c < d; ++c) s = s + u[i][c] * u[i][c];
        if (!(s.lo > 0)) {
          certified = false;
          break;
        }
        norm2[i] = s;
      }
      if (!certified) continue;
      std::vector<RatVector> out(len);
      bool tight = true;
      for (int i = 0; i < len && tight; ++i) {
        Interval nrm = sqrt_interval(norm2[i], p + 2);
        out[i].reserve(d);
        for (int c = 0; c < d; ++c) {
          Interval e = u[i][c] / nrm;
          tight = tight && e.width() <= target;
          out[i].push_back(e.mid());
        }
      }
      if (tight) return out;
    }
  };
  // All emitted names share one memo so a query at q runs the elimination once.
  struct Shared {
    std::mutex mu;
    std::map<long, std::vector<RatVector>> memo;
  };
  auto shared = std::make_shared<Shared>();
  auto at = [compute, shared](long q) {
    std::lock_guard<std::mutex> lock(shared->mu);
    auto it = shared->memo.find(q);
    if (it == shared->memo.end()) it = shared->memo.emplace(q, compute(q)).first;
    return it->second;
  };

  std::vector<VectorName> names;
  for (int i = 0; i < len; ++i)
    names.push_back(VectorName(d, [at, i](long q) { return at(q)[i]; }));
  for (const auto& nm : names) {
    try {
      nm.query(k);
    } catch (const NameFailure& e) {
      return Out::fail(e.kind, e.what());
    }
  }
  return names;
}

struct DiagResult {
  std::vector<RealName> eigenvalues;   // sorted ascending, repeated
  std::vector<VectorName> vectors;     // orthonormal, aligned with eigenvalues
};

namespace detail {

// Exact residual/orthonormality audit shared by the diagonalization ops.
inline bool eigenpair_within(const RatMatrix& ap, const RatVector& v, const Rational& lam,
                             const Rational& tol) {
  RatVector av = ap.apply(v);
  for (std::size_t i = 0; i < av.size(); ++i) av[i] -= lam * v[i];
  return max_abs(av) <= tol;
}

}  // namespace detail

// Orthonormal eigenbasis with eigenvalue names, given t = number of distinct
// eigenvalues. Eigenvalue components are clustered into exactly t classes;
// each class contributes kernel(A - lambda I) at rank d - (class size),
// orthonormalized per class. Everything is validated at precision k with the
// loose constant 4d: residuals ||A v - lambda v||_inf and all pairwise
// |<v_i, v_j> - delta_ij| must come out <= 4d 2^-k.
inline Outcome<DiagResult> diag_with_count(const MatrixName& a, int t, long k, const Fuel& fuel) {
  using Out = Outcome<DiagResult>;
  int d = a.rows();
  EigenTupleName ev(a);
  auto parts = partition_classes(ev.components(), t, fuel);
  if (!parts) return parts.propagate<DiagResult>();

  DiagResult res;
  for (const auto& cls : parts.value()) {
    RealName lam = ev.component(cls.front());
    int m = static_cast<int>(cls.size());
    auto kb = kernel_with_rank(MatrixName::shifted(a, lam), d - m, k, fuel);
    if (!kb) return kb.propagate<DiagResult>();
    if (static_cast<int>(kb.value().size()) != m)
      return Out::fail(FailKind::AdviceSuspect, "diag: kernel dimension mismatch");
    auto ortho = gram_schmidt_name(kb.value(), k, fuel);
    if (!ortho) return ortho.propagate<DiagResult>();
    for (int i = 0; i < m; ++i) {
      res.eigenvalues.push_back(lam);
      res.vectors.push_back(ortho.value()[i]);
    }
  }

  Rational tol = Rational(4 * d) * pow2(-k);
  RatMatrix ap = a.query(k + 8);
  std::vector<RatVector> vhat(d);
  try {
    for (int i = 0; i < d; ++i) vhat[i] = res.vectors[i].query(k + 6);
  } catch (const NameFailure& e) {
    return Out::fail(e.kind, e.what());
  }
  for (int i = 0; i < d; ++i) {
    if (!detail::eigenpair_within(ap, vhat[i], res.eigenvalues[i].query(k + 6), tol))
      return Out::fail(FailKind::AdviceSuspect, "diag: eigenpair residual exceeds tolerance");
    for (int j = 0; j <= i; ++j) {
      Rational g = dot(vhat[i], vhat[j]) - (i == j ? 1 : 0);
      if (abs_rat(g) > tol)
        return Out::fail(FailKind::AdviceSuspect, "diag: orthonormality check failed");
    }
  }
  return res;
}

// One unit eigenvector, given l = floor(log2 m(A)). With kappa = 2^l the true
// minimum multiplicity lies in [kappa, 2 kappa), so find_class on the
// eigenvalue tuple returns a genuine multiplicity class I; the vector is a
// unit kernel member of A - lambda_I. Validated against the whole computed
// spectrum: some component must pair with the vector within 4d 2^-k.
inline Outcome<VectorName> evec_with_logmult(const MatrixName& a, int l, long k,
                                             const Fuel& fuel) {
  using Out = Outcome<VectorName>;
  int d = a.rows();
  if (l < 0 || l > 30 || (1 << l) > d)
    throw std::invalid_argument("evec_with_logmult: advice outside {0..floor(log2 d)}");
  EigenTupleName ev(a);
  auto cls = find_class(ev.components(), 1 << l, fuel);
  if (!cls) return cls.propagate<VectorName>();
  RealName lam = ev.component(cls.value().front());
  auto v = lineq_with_rank(MatrixName::shifted(a, lam), d - static_cast<int>(cls.value().size()),
                           k, fuel);
  if (!v) return v;

  Rational tol = Rational(4 * d) * pow2(-k);
  RatMatrix ap = a.query(k + 8);
  RatVector vhat;
  try {
    vhat = v.value().query(k + 6);
  } catch (const NameFailure& e) {
    return Out::fail(e.kind, e.what());
  }
  RatVector spectrum = ev.query(k + 6);
  for (const auto& lamhat : spectrum)
    if (detail::eigenpair_within(ap, vhat, lamhat, tol)) return v;
  return Out::fail(FailKind::AdviceSuspect,
                   "evec: no computed eigenvalue pairs with the vector within tolerance");
}

}  // namespace advreal
