// Command-line front end: every operation on file inputs, with a uniform
// run report on stderr and results on stdout.
//
// Exit codes: 0 OK, 2 input error, 3 fuel exhausted, 4 advice suspect.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "advreal/basics.hpp"
#include "advreal/dovetail.hpp"
#include "advreal/geometry.hpp"
#include "advreal/io.hpp"
#include "advreal/linalg_advice.hpp"
#include "advreal/rootfind.hpp"
#include "advreal/witnesses.hpp"

namespace {

using namespace advreal;

struct Options {
  long precision = 20;
  long fuel_precision = 64;
  long long fuel_steps = 1000000;
  std::string advice;
  std::string input;
  std::string format = "text";
  bool parallel = false;
};

// Canonical text plus the mandatory parse(print(x)) == x round trip.
std::string fmt(const Rational& q) {
  std::string s = print_rat(q);
  auto back = try_parse_rat(s);
  if (!back || *back != q) throw std::logic_error("rational round-trip failed on '" + s + "'");
  return s;
}

std::string fmt_row(const RatVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
  return s;
}

void report(const std::string& outcome, const Options& o, const Fuel& fuel) {
  std::cerr << "outcome: " << outcome << "\n"
            << "precision: " << o.precision << "\n"
            << "fuel-steps: " << fuel.steps_used() << "\n";
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

long to_long(const std::string& s) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
  return v;
}

std::vector<long> to_longs(const std::string& csv) {
  std::vector<long> out;
  if (csv.empty()) return out;
  for (const auto& part : split(csv, ',')) out.push_back(to_long(part));
  return out;
}

std::vector<int> to_bits(const std::string& s) {
  std::vector<int> out;
  for (char c : s) {
    if (c != '0' && c != '1') throw std::invalid_argument("bad bit string '" + s + "'");
    out.push_back(c - '0');
  }
  return out;
}

Rational to_rat(const std::string& s) {
  auto q = try_parse_rat(s);
  if (!q) throw std::invalid_argument("bad rational '" + s + "'");
  return *q;
}

const std::string& need_advice(const Options& o) {
  if (o.advice.empty()) throw std::invalid_argument("this subcommand requires --advice");
  return o.advice;
}

const std::string& need_input(const Options& o) {
  if (o.input.empty()) throw std::invalid_argument("this subcommand requires --input <file>");
  return o.input;
}

RealName single_real(const Options& o) {
  RatVector t = read_tuple_file(need_input(o));
  if (t.size() != 1) throw std::invalid_argument("expected exactly one rational in input");
  return RealName::constant(t[0]);
}

std::vector<RealName> real_list(const Options& o) {
  RatVector t = read_tuple_file(need_input(o));
  std::vector<RealName> xs;
  for (const auto& q : t) xs.push_back(RealName::constant(q));
  return xs;
}

int fail_exit(const Failure& f, const Options& o, const Fuel& fuel) {
  std::cerr << "error: " << to_string(f.kind) << ": " << f.detail << "\n";
  switch (f.kind) {
    case FailKind::FuelExhausted:
      report("FUEL_EXHAUSTED", o, fuel);
      return 3;
    case FailKind::PreconditionViolated:
      report("INPUT_ERROR", o, fuel);
      return 2;
    default:
      report("ADVICE_SUSPECT", o, fuel);
      return 4;
  }
}

int run_floor(const Options& o, const Fuel& fuel) {
  RealName x = single_real(o);
  auto parts = split(need_advice(o), ':');
  if (parts.size() != 2) throw std::invalid_argument("floor advice: parity:{even|odd} or int:{yes|no}");
  if (parts[0] == "parity") {
    Parity p;
    if (parts[1] == "even")
      p = Parity::Even;
    else if (parts[1] == "odd")
      p = Parity::Odd;
    else
      throw std::invalid_argument("floor advice: parity must be even or odd");
    std::cout << fmt(Rational(floor_with_parity(x, p))) << "\n";
  } else if (parts[0] == "int") {
    Integrality adv;
    if (parts[1] == "yes")
      adv = Integrality::IsInteger;
    else if (parts[1] == "no")
      adv = Integrality::NotInteger;
    else
      throw std::invalid_argument("floor advice: int must be yes or no");
    auto r = floor_with_intnot(x, adv, fuel);
    if (!r) return fail_exit(r.failure(), o, fuel);
    std::cout << fmt(Rational(r.value())) << "\n";
  } else {
    throw std::invalid_argument("floor advice: parity:{even|odd} or int:{yes|no}");
  }
  report("OK", o, fuel);
  return 0;
}

int run_digits(const Options& o, const Fuel& fuel) {
  RealName x = single_real(o);
  auto parts = split(need_advice(o), ':');
  if (parts.size() != 3 || parts[0] != "bit")
    throw std::invalid_argument("digits advice: bit:<n>:<0|1>");
  long n = to_long(parts[1]);
  long bit = to_long(parts[2]);
  if (bit != 0 && bit != 1) throw std::invalid_argument("digits advice: bit value must be 0 or 1");
  auto r = leading_digits_with_bit(x, n, static_cast<int>(bit), fuel);
  if (!r) return fail_exit(r.failure(), o, fuel);
  for (int d : r.value()) std::cout << d << "\n";
  report("OK", o, fuel);
  return 0;
}

int parse_count_advice(const Options& o, const char* what) {
  auto parts = split(need_advice(o), ':');
  if (parts.size() != 2 || parts[0] != "count")
    throw std::invalid_argument(std::string(what) + " advice: count:<t>");
  long t = to_long(parts[1]);
  if (t < 1) throw std::invalid_argument(std::string(what) + " advice: count must be >= 1");
  return static_cast<int>(t);
}

int run_classes(const Options& o, const Fuel& fuel) {
  auto xs = real_list(o);
  auto r = partition_classes(xs, parse_count_advice(o, "classes"), fuel);
  if (!r) return fail_exit(r.failure(), o, fuel);
  for (const auto& cls : r.value()) {
    std::string line;
    for (std::size_t i = 0; i < cls.size(); ++i)
      line += (i ? " " : "") + std::to_string(cls[i] + 1);
    std::cout << line << "\n";
  }
  report("OK", o, fuel);
  return 0;
}

int run_members(const Options& o, const Fuel& fuel) {
  auto xs = real_list(o);
  auto r = distinct_members(xs, parse_count_advice(o, "members"), fuel);
  if (!r) return fail_exit(r.failure(), o, fuel);
  for (const auto& name : r.value()) std::cout << fmt(name.query(o.precision)) << "\n";
  report("OK", o, fuel);
  return 0;
}

int run_rank(const Options& o, const Fuel& fuel) {
  MatrixName a = MatrixName::exact(read_matrix_file(need_input(o)));
  if (o.advice.empty()) {
    std::cout << rank_lower(a, o.precision) << "\n";
    report("OK", o, fuel);
    return 0;
  }
  auto parts = split(o.advice, ':');
  if (parts.size() != 2 || parts[0] != "rank")
    throw std::invalid_argument("rank advice: rank:<upper bound>");
  long r = to_long(parts[1]);
  BoundStream upper = [r](long) { return r; };
  auto got = rank_with_upper(a, upper, fuel);
  if (!got) return fail_exit(got.failure(), o, fuel);
  std::cout << got.value() << "\n";
  report("OK", o, fuel);
  return 0;
}

int parse_rank_advice(const Options& o, const char* what) {
  auto parts = split(need_advice(o), ':');
  if (parts.size() != 2 || parts[0] != "rank")
    throw std::invalid_argument(std::string(what) + " advice: rank:<r>");
  long r = to_long(parts[1]);
  if (r < 0) throw std::invalid_argument(std::string(what) + " advice: rank must be >= 0");
  return static_cast<int>(r);
}

int run_lineq(const Options& o, const Fuel& fuel) {
  MatrixName a = MatrixName::exact(read_matrix_file(need_input(o)));
  auto r = lineq_with_rank(a, parse_rank_advice(o, "lineq"), o.precision, fuel);
  if (!r) return fail_exit(r.failure(), o, fuel);
  for (const auto& q : r.value().query(o.precision)) std::cout << fmt(q) << "\n";
  report("OK", o, fuel);
  return 0;
}

int run_eig(const Options& o, const Fuel& fuel) {
  MatrixName a = MatrixName::exact(read_matrix_file(need_input(o)));
  for (const auto& q : eigenvalues_with_multiplicity(a, o.precision)) std::cout << fmt(q) << "\n";
  report("OK", o, fuel);
  return 0;
}

int run_diag(const Options& o, const Fuel& fuel) {
  MatrixName a = MatrixName::exact(read_matrix_file(need_input(o)));
  auto r = diag_with_count(a, parse_count_advice(o, "diag"), o.precision, fuel);
  if (!r) return fail_exit(r.failure(), o, fuel);
  for (const auto& lam : r.value().eigenvalues) std::cout << fmt(lam.query(o.precision)) << "\n";
  for (const auto& v : r.value().vectors) std::cout << fmt_row(v.query(o.precision)) << "\n";
  report("OK", o, fuel);
  return 0;
}

int run_evec(const Options& o, const Fuel& fuel) {
  MatrixName a = MatrixName::exact(read_matrix_file(need_input(o)));
  auto parts = split(need_advice(o), ':');
  if (parts.size() != 2 || parts[0] != "logmult")
    throw std::invalid_argument("evec advice: logmult:<l>");
  auto r = evec_with_logmult(a, static_cast<int>(to_long(parts[1])), o.precision, fuel);
  if (!r) return fail_exit(r.failure(), o, fuel);
  for (const auto& q : r.value().query(o.precision)) std::cout << fmt(q) << "\n";
  report("OK", o, fuel);
  return 0;
}

int run_minmultlog(const Options& o, const Fuel& fuel) {
  MatrixName a = MatrixName::exact(read_matrix_file(need_input(o)));
  std::cout << min_mult_log_upper(a, o.precision) << "\n";
  report("OK", o, fuel);
  return 0;
}

int run_chull(const Options& o, const Fuel& fuel) {
  std::vector<VectorName> pts;
  for (const auto& p : read_points_file(need_input(o))) pts.push_back(VectorName::exact(p));
  ExtremeSet set;
  if (o.advice.empty()) {
    set = extchull_enumerate(pts, fuel);
  } else {
    auto parts = split(o.advice, ':');
    if (parts.size() != 2 || parts[0] != "extreme")
      throw std::invalid_argument("chull advice: extreme:<M>");
    auto r = extchull_with_count(pts, static_cast<int>(to_long(parts[1])), fuel);
    if (!r) return fail_exit(r.failure(), o, fuel);
    set = std::move(r).take();
  }
  for (int j : set.indices) std::cout << j + 1 << "\n";
  for (const auto& w : set.witnesses)
    std::cerr << "witness " << w.index + 1 << ": direction " << fmt_row(w.normal)
              << " precision " << w.precision << "\n";
  report("OK", o, fuel);
  return 0;
}

int run_ivt(const Options& o, const Fuel& fuel) {
  FuncName f = piecewise_linear_funcname(read_pwl_file(need_input(o)));
  std::string adv = need_advice(o);
  if (adv.rfind("ivt:", 0) == 0) adv = adv.substr(4);
  IntermedAdvice advice = IntermedAdvice::isolated();
  if (adv.rfind("rational:", 0) == 0)
    advice = IntermedAdvice::rational(to_rat(adv.substr(9)));
  else if (adv != "isolated")
    throw std::invalid_argument("ivt advice: rational:<p/q> or isolated");
  auto r = ivt_with_advice(f, advice, o.precision, fuel);
  if (!r) return fail_exit(r.failure(), o, fuel);
  std::cout << fmt(r.value().query(o.precision)) << "\n";
  report("OK", o, fuel);
  return 0;
}

int run_witness(const Options& o, const Fuel& fuel) {
  auto parts = split(need_advice(o), ':');
  const std::string& kind = parts[0];
  auto arity = [&](std::size_t n, const char* usage) {
    if (parts.size() != n) throw std::invalid_argument(std::string("witness advice: ") + usage);
  };
  if (kind == "card") {
    arity(3, "card:<d>:<n1,n2,...>");
    auto v = card_flag(static_cast<int>(to_long(parts[1])), to_longs(parts[2]));
    write_tuple(std::cout, v.query(o.precision));
  } else if (kind == "rankflag") {
    arity(4, "rankflag:<rows>:<cols>:<n1,...>");
    write_matrix(std::cout, rank_flag(static_cast<int>(to_long(parts[1])),
                                      static_cast<int>(to_long(parts[2])), to_longs(parts[3])));
  } else if (kind == "adic") {
    arity(3, "adic:<+-pattern>:<n1,...>");
    std::vector<int> signs;
    for (char c : parts[1]) {
      if (c != '+' && c != '-') throw std::invalid_argument("adic signs must be + or -");
      signs.push_back(c == '+' ? 1 : -1);
    }
    auto nbar = to_longs(parts[2]);
    RealName x = adic_flag_name(signs, nbar);
    long total = 4;
    for (long n : nbar) total += n;
    for (long j = 0; j < total; ++j) std::cout << fmt(x.query(j)) << "\n";
  } else if (kind == "perturb") {
    arity(2, "perturb:<delta> (with --input matrix)");
    auto mats = lineq_perturb(read_matrix_file(need_input(o)), to_rat(parts[1]));
    for (std::size_t i = 0; i < mats.size(); ++i) {
      if (i) std::cout << "---\n";
      write_matrix(std::cout, mats[i]);
    }
  } else if (kind == "diagbreak") {
    arity(4, "diagbreak:<lambda>:<eps>:<w1,w2,...> (with --input matrix)");
    RatVector w;
    for (const auto& part : split(parts[3], ',')) w.push_back(to_rat(part));
    write_matrix(std::cout,
                 diag_break(read_matrix_file(need_input(o)), to_rat(parts[1]), w, to_rat(parts[2])));
  } else if (kind == "evecsub") {
    arity(4, "evecsub:<d>:<jbits>:<ibits>");
    auto basis =
        evec_subspaces(static_cast<int>(to_long(parts[1])), to_bits(parts[2]), to_bits(parts[3]));
    write_points(std::cout, basis);
  } else if (kind == "evecbreak") {
    arity(4, "evecbreak:<d>:<jbits>:<n1,...>");
    write_matrix(std::cout, evec_break(static_cast<int>(to_long(parts[1])), to_bits(parts[2]),
                                       to_longs(parts[3])));
  } else if (kind == "intermed") {
    arity(3, "intermed:<ibits>:<n1,...>");
    auto point = intermed_flag(to_bits(parts[1]), to_longs(parts[2]));
    write_pwl(std::cout, point.breakpoints);
    std::cerr << "zero: " << fmt(point.zero.lo) << " " << fmt(point.zero.hi) << "\n";
  } else if (kind == "borelencode") {
    arity(2, "borelencode:<n1,...>");
    std::cout << fmt(borel_encode(to_longs(parts[1]))) << "\n";
  } else if (kind == "borelf") {
    arity(1, "borelf (with --input single-rational tuple)");
    RatVector t = read_tuple_file(need_input(o));
    if (t.size() != 1) throw std::invalid_argument("borelf: expected one rational in input");
    std::cout << fmt(borel_f(t[0])) << "\n";
  } else if (kind == "commoneig") {
    arity(2, "commoneig:<second matrix file> (with --input matrix)");
    auto verdict = common_eigvec_check(read_matrix_file(need_input(o)), read_matrix_file(parts[1]));
    std::cout << (verdict == CommonEigVerdict::Impossible ? "Impossible" : "CommonBasisPossible")
              << "\n";
  } else {
    throw std::invalid_argument("unknown witness kind '" + kind + "'");
  }
  report("OK", o, fuel);
  return 0;
}

int run_selfcheck(const Options& o, const Fuel& fuel) {
  int failures = 0;
  auto check = [&failures](const char* label, bool ok) {
    std::cout << (ok ? "ok: " : "FAIL: ") << label << "\n";
    if (!ok) ++failures;
  };

  check("floor parity", floor_with_parity(RealName::constant(Rational(37, 10)), Parity::Odd) == 3);
  {
    auto r = floor_with_intnot(RealName::constant(Rational(3, 10)), Integrality::NotInteger, fuel);
    check("floor integrality", r.ok() && r.value() == 0);
  }
  {
    auto r = leading_digits_with_bit(RealName::constant(Rational(5, 8)), 2, 0, fuel);
    check("binary digits", r.ok() && r.value() == std::vector<int>({1, 0}));
  }
  {
    auto r = sep_order(RealName::constant(Rational(1, 2)),
                       RealName::constant(Rational(1, 2) + pow2(-9)), fuel);
    check("separation order", r.ok() && r.value().precision == 11);
  }
  {
    RatMatrix m(2, 2);
    m.at(0, 0) = 1; m.at(0, 1) = 1; m.at(1, 0) = 1; m.at(1, 1) = 1;
    auto r = kernel_with_rank(MatrixName::exact(m), 1, 10, fuel);
    bool ok = r.ok() && r.value().size() == 1;
    if (ok) {
      RatVector v = r.value()[0].query(10);
      ok = v.size() == 2 && abs_rat(v[0] + v[1]) <= pow2(-8);
    }
    check("kernel direction", ok);
  }
  {
    std::vector<VectorName> tri = {VectorName::exact({Rational(0), Rational(0)}),
                                   VectorName::exact({Rational(1), Rational(0)}),
                                   VectorName::exact({Rational(1, 2), Rational(1, 4)})};
    auto r = extchull_with_count(tri, 3, fuel);
    check("hull of a triangle", r.ok() && r.value().indices == std::vector<int>({0, 1, 2}));
  }
  check("pairing function",
        borel_pair(0, 0) == 1 && borel_pair(1, 0) == 2 && borel_pair(0, 1) == 3);
  {
    auto base = intermed_flag({}, {});
    check("plateau base interval",
          base.zero.lo == Rational(1, 3) && base.zero.hi == Rational(2, 3));
  }
  check("rank flag law", rank_exact(rank_flag(3, 3, {2, 3})).rank == 2);
  {
    auto pts = staircase_embed({RealName::constant(Rational(1)), RealName::constant(Rational(1)),
                                RealName::constant(Rational(0))});
    bool ok = pts.size() == 4;
    if (ok) {
      auto at = [&](int i) { return pts[i].query(20); };
      ok = at(0) == RatVector({Rational(0), Rational(0)}) &&
           at(1) == RatVector({Rational(1), Rational(1)}) &&
           at(2) == RatVector({Rational(2), Rational(2)}) &&
           at(3) == RatVector({Rational(3), Rational(0)});
    }
    check("staircase embedding", ok);
  }
  {
    auto r = ivt_with_advice(piecewise_linear_funcname({{Rational(0), Rational(-1)},
                                                        {Rational(1), Rational(1)}}),
                             IntermedAdvice::isolated(), 16, fuel);
    check("ivt on a line",
          r.ok() && abs_rat(r.value().query(16) - Rational(1, 2)) <= pow2(-16));
  }

  report(failures == 0 ? "OK" : "INPUT_ERROR", o, fuel);
  return failures == 0 ? 0 : 1;
}

int dispatch(const std::string& cmd, const Options& o, const Fuel& fuel) {
  if (cmd == "floor") return run_floor(o, fuel);
  if (cmd == "digits") return run_digits(o, fuel);
  if (cmd == "classes") return run_classes(o, fuel);
  if (cmd == "members") return run_members(o, fuel);
  if (cmd == "rank") return run_rank(o, fuel);
  if (cmd == "lineq") return run_lineq(o, fuel);
  if (cmd == "eig") return run_eig(o, fuel);
  if (cmd == "diag") return run_diag(o, fuel);
  if (cmd == "evec") return run_evec(o, fuel);
  if (cmd == "minmultlog") return run_minmultlog(o, fuel);
  if (cmd == "chull") return run_chull(o, fuel);
  if (cmd == "ivt") return run_ivt(o, fuel);
  if (cmd == "witness") return run_witness(o, fuel);
  if (cmd == "selfcheck") return run_selfcheck(o, fuel);
  throw std::invalid_argument("unknown subcommand " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact real computation with discrete advice"};
  app.require_subcommand(1);

  Options o;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"floor", "integer part; advice parity:{even|odd} or int:{yes|no}"},
      {"digits", "leading binary digits; advice bit:<n>:<0|1>"},
      {"classes", "partition reals into equality classes; advice count:<t>"},
      {"members", "one representative per equality class; advice count:<t>"},
      {"rank", "matrix rank: certified lower bound, or exact with advice rank:<upper>"},
      {"lineq", "nontrivial kernel vector; advice rank:<r>"},
      {"eig", "eigenvalue tuple of a symmetric matrix (no advice)"},
      {"diag", "orthonormal eigenbasis; advice count:<distinct eigenvalues>"},
      {"evec", "some eigenvector; advice logmult:<floor log2 of min multiplicity>"},
      {"minmultlog", "upper bound on floor log2 of the minimum eigenspace dimension"},
      {"chull", "extreme points of a planar set; advice extreme:<M>, or anytime without"},
      {"ivt", "zero of a sign-changing function; advice rational:<p/q> or isolated"},
      {"witness", "emit adversarial fixture files; see --advice kinds in the manual"},
      {"selfcheck", "run the built-in example suite"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    cmd->add_option("--precision", o.precision, "target precision k: answers within 2^-k");
    cmd->add_option("--fuel-precision", o.fuel_precision, "maximum working precision");
    cmd->add_option("--fuel-steps", o.fuel_steps, "maximum verification steps");
    cmd->add_option("--advice", o.advice, "discrete advice token (per-subcommand syntax)");
    cmd->add_option("--input", o.input, "input file (matrix / points / tuple / pwl)");
    cmd->add_option("--format", o.format, "output format (text)");
    cmd->add_flag("--parallel", o.parallel, "evaluate search rounds in parallel");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (o.format != "text") throw std::invalid_argument("only --format text is supported");
    if (o.precision < 1 || o.precision > 4096)
      throw std::invalid_argument("--precision out of range");
    if (o.fuel_precision < o.precision)
      throw std::invalid_argument("--fuel-precision below --precision");
    if (o.fuel_steps < 1) throw std::invalid_argument("--fuel-steps must be positive");
    parallel_mode() = o.parallel;
    Fuel fuel(o.fuel_precision, o.fuel_steps);
    try {
      return dispatch(app.get_subcommands().front()->get_name(), o, fuel);
    } catch (const NameFailure& e) {
      std::cerr << "error: " << to_string(e.kind) << ": " << e.what() << "\n";
      if (e.kind == FailKind::FuelExhausted) {
        report("FUEL_EXHAUSTED", o, fuel);
        return 3;
      }
      report("ADVICE_SUSPECT", o, fuel);
      return 4;
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      report("INPUT_ERROR", o, fuel);
      return 2;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
