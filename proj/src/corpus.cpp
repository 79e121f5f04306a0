// SPDX-License-Identifier: Apache-2.0

#include "clerical/corpus.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "clerical/parser.hpp"
#include "clerical/typecheck.hpp"

namespace clerical {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void fail(property_report& r, const std::string& what) {
  ++r.failures;
  if (r.notes.size() < 8) r.notes.push_back(what);
}

run_result run_main(const typed_program& tp, uint32_t digits,
                    std::optional<uint64_t> fuel = {},
                    std::optional<uint64_t> seed = {}) {
  run_options o;
  o.digits = digits;
  o.fuel = fuel;
  o.scheduler_seed = seed;
  return run_with_restarts(tp, o);
}

std::string result_str(const run_result& r) {
  if (const auto* s = std::get_if<std::string>(&r)) return *s;
  switch (std::get<diagnostic>(r).why) {
    case failure::deadlock: return "<deadlock>";
    case failure::fuel_exhausted: return "<fuel exhausted>";
    case failure::precision_cap: return "<precision cap>";
  }
  return "<?>";
}

// |computed - want| < tol, where computed is a decimal string.
bool close_to(const run_result& r, const rational& want, const rational& tol) {
  const auto* s = std::get_if<std::string>(&r);
  if (!s) return false;
  rational got = rat_from_decimal(*s);
  rational err = got - want;
  if (err < 0) err = -err;
  return err < tol;
}

rational pow10_inv(uint32_t d) {
  bigint p = 1;
  for (uint32_t i = 0; i < d; ++i) p *= 10;
  return rational(1, p);
}

// Random rational num/den with den in [dlo_den, dhi_den] and value in
// (lo, hi) when `open`, else [lo, hi].
rational random_rational(std::mt19937_64& rng, int64_t lo, int64_t hi, bool open) {
  std::uniform_int_distribution<int64_t> dden(2, 999);
  int64_t den = dden(rng);
  int64_t nlo = lo * den + (open ? 1 : 0);
  int64_t nhi = hi * den - (open ? 1 : 0);
  std::uniform_int_distribution<int64_t> dnum(nlo, nhi);
  return rational(bigint(dnum(rng)), bigint(den));
}

std::string cl_path(const check_options& o, const std::string& file) {
  return o.corpus_dir + "/" + file;
}

// Divergent bool expression, for building undefined arguments inline.
const char* kDivergesTrue = "(while true do skip end ; true)";

power_set<frag_value> bool_set(bool tt, bool ff, bool bot) {
  std::set<frag_value> s;
  if (tt) s.insert(frag_value(true));
  if (ff) s.insert(frag_value(false));
  return power_set<frag_value>::make(std::move(s), bot);
}

// ---- entry checkers ----

property_report check_abs(const check_options& o) {
  property_report r;
  r.name = "abs";
  uint64_t trials = o.trials ? o.trials : 200;
  std::mt19937_64 rng(20260819);
  rational tol = pow10_inv(12);
  for (uint64_t i = 0; i < trials; ++i) {
    rational x = random_rational(rng, -10, 10, false);
    rational want = x < 0 ? rational(-x) : x;
    auto tp = load_with_main(cl_path(o, "abs.cl"),
                             "abs(" + rational_literal(x) + ")");
    run_result got = run_main(tp, 14);
    ++r.samples;
    if (!close_to(got, want, tol))
      fail(r, "abs(" + rational_literal(x) + ") = " + result_str(got));
  }
  return r;
}

property_report check_sin(const check_options& o) {
  property_report r;
  r.name = "sin";
  uint64_t trials = o.trials ? o.trials : 12;
  std::mt19937_64 rng(19930201);
  rational tol = pow10_inv(12);
  rational ref_tol = pow10_inv(16);
  for (uint64_t i = 0; i < trials; ++i) {
    rational x = random_rational(rng, 3, 4, true);
    rational want = sin_reference(x, ref_tol);
    auto tp = load_with_main(cl_path(o, "sin.cl"),
                             "sin(" + rational_literal(x) + ")");
    run_result got = run_main(tp, 14);
    ++r.samples;
    if (!close_to(got, want, tol))
      fail(r, "sin(" + rational_literal(x) + ") = " + result_str(got));
  }
  return r;
}

property_report check_pi(const check_options& o) {
  property_report r;
  r.name = "pi";
  uint32_t digits = 30;
  std::string want = std::string("3.") + std::string(pi_digits_40).substr(0, digits);
  auto tp = load_file(cl_path(o, "pi.cl"));
  run_result got = run_main(tp, digits);
  ++r.samples;
  if (result_str(got) != want)
    fail(r, "pi to " + std::to_string(digits) + " digits: got " + result_str(got));
  return r;
}

property_report check_soft_cmp(const check_options& o) {
  property_report r;
  r.name = "soft_cmp";
  const std::string path = cl_path(o, "soft_cmp.cl");
  // Grid around the tie x = y: x = 1 + k/32, y = 1, n = 3.  The guards
  // overlap on |x - y| < 1/8, i.e. |k| < 4; outside the overlap the answer
  // is forced, at |k| = 4 exactly one comparison is decidable.
  for (int64_t k = -250; k < 250; ++k) {
    rational x = rational(bigint(32 + k), bigint(32));
    std::string main_src =
        "soft_cmp(" + rational_literal(x) + ", real(1), 3)";
    auto tp = load_with_main(path, main_src);
    power_set<frag_value> want =
        k < 4 && k > -4 ? bool_set(true, true, false)
                        : (k <= -4 ? bool_set(true, false, false)
                                   : bool_set(false, true, false));
    power_set<frag_value> den = denote(tp, 4);
    ++r.samples;
    if (den != want) {
      fail(r, "k=" + std::to_string(k) + ": denotation " + to_string(den));
      continue;
    }
    run_result got = run_main(tp, 5);
    const auto* s = std::get_if<std::string>(&got);
    bool ok = s && (*s == "true" || *s == "false") &&
              den.values().count(frag_value(*s == "true")) > 0;
    if (!ok)
      fail(r, "k=" + std::to_string(k) + ": evaluator " + result_str(got) +
                  " outside " + to_string(den));
  }
  return r;
}

property_report check_binary_choice(const check_options& o) {
  property_report r;
  r.name = "binary_choice";
  auto tp = load_file(cl_path(o, "binary_choice.cl"));
  std::set<frag_value> want{frag_value(bigint(0)), frag_value(bigint(1))};
  power_set<frag_value> den = denote(tp, 2);
  ++r.samples;
  if (den != power_set<frag_value>::make(want, false))
    fail(r, "denotation " + to_string(den));
  ++r.samples;
  std::string first = result_str(run_main(tp, 5));
  if (first != "0") fail(r, "unseeded run picked " + first);
  ++r.samples;
  std::string seeded = result_str(run_main(tp, 5, {}, uint64_t{7}));
  if (seeded != "0" && seeded != "1") fail(r, "seeded run picked " + seeded);
  return r;
}

property_report check_amb(const check_options& o) {
  property_report r;
  r.name = "amb";
  auto tp = load_file(cl_path(o, "amb.cl"));
  power_set<frag_value> den = denote(tp, 4);
  ++r.samples;
  if (den != pd_unit(frag_value(bigint(1))))
    fail(r, "denotation " + to_string(den));
  ++r.samples;
  std::string got = result_str(run_main(tp, 5));
  if (got != "1") fail(r, "run gave " + got);
  return r;
}

property_report check_neg(const check_options& o) {
  property_report r;
  r.name = "neg";
  const std::string path = cl_path(o, "neg.cl");
  for (bool b : {false, true}) {
    std::string arg = b ? "true" : "false";
    auto tp = load_with_main(path, "neg(" + arg + ")");
    ++r.samples;
    power_set<frag_value> den = denote(tp, 1);
    if (den != pd_unit(frag_value(!b)))
      fail(r, "neg(" + arg + ") denotes " + to_string(den));
    ++r.samples;
    std::string got = result_str(run_main(tp, 5));
    if (got != (b ? "false" : "true")) fail(r, "neg(" + arg + ") ran to " + got);
  }
  // Strictness: a divergent argument starves the call.
  auto tp = load_with_main(path, std::string("neg") + "(" + kDivergesTrue + ")");
  ++r.samples;
  power_set<frag_value> den = denote(tp, 4);
  if (den != power_set<frag_value>::bottom())
    fail(r, "neg(diverge) denotes " + to_string(den));
  ++r.samples;
  run_result got = run_main(tp, 5, uint64_t{16});
  const auto* d = std::get_if<diagnostic>(&got);
  if (!d || d->why != failure::fuel_exhausted)
    fail(r, "neg(diverge) ran to " + result_str(got));
  return r;
}

property_report check_nonmono_blocked(const check_options& o) {
  property_report r;
  r.name = "nonmono_blocked";
  auto tp = load_file(cl_path(o, "nonmono_blocked.cl"));
  ++r.samples;
  power_set<frag_value> den = denote(tp, 2);
  if (den != pd_unit(frag_value(std::monostate{})))
    fail(r, "denotation " + to_string(den));
  ++r.samples;
  std::string got = result_str(run_main(tp, 5));
  if (got != "()") fail(r, "run gave " + got);
  return r;
}

property_report check_nonmono_open(const check_options& o) {
  property_report r;
  r.name = "nonmono_open";
  auto open_tp = load_file(cl_path(o, "nonmono_open.cl"));
  auto blocked_tp = load_file(cl_path(o, "nonmono_blocked.cl"));
  power_set<frag_value> open_d = denote(open_tp, 2);
  power_set<frag_value> blocked_d = denote(blocked_tp, 2);
  ++r.samples;
  if (open_d != power_set<frag_value>::make({frag_value(std::monostate{})}, true))
    fail(r, "open denotation " + to_string(open_d));
  // Raising a guard from divergent to true must NOT move the result set up:
  // the open variant adds a divergent branch.  This is the witness that the
  // guarded case is not monotone in its guards.
  ++r.samples;
  if (pd_leq(blocked_d, open_d))
    fail(r, to_string(blocked_d) + " <= " + to_string(open_d) +
                " would make the case monotone");
  // Which branch the evaluator picks depends on the polling order; every
  // outcome must stay inside the denotation (() or divergence).
  bool saw_skip = false;
  for (uint64_t seed = 0; seed < 6; ++seed) {
    ++r.samples;
    run_result got = run_main(open_tp, 5, uint64_t{4},
                              seed == 0 ? std::optional<uint64_t>{}
                                        : std::optional<uint64_t>{seed});
    if (const auto* s = std::get_if<std::string>(&got)) {
      if (*s != "()") fail(r, "run gave " + *s);
      saw_skip = true;
    } else if (std::get<diagnostic>(got).why != failure::fuel_exhausted) {
      fail(r, "run gave " + result_str(got));
    }
  }
  ++r.samples;
  if (!saw_skip) fail(r, "no polling order ever picked the live branch");
  return r;
}

property_report check_parallel_or(const check_options& o) {
  property_report r;
  r.name = "parallel_or";
  const std::string path = cl_path(o, "parallel_or.cl");
  ++r.samples;
  std::string demo = result_str(run_main(load_file(path), 5));
  if (demo != "true") fail(r, "demo main gave " + demo);

  // Full three-valued table; undefined arguments are spelled inline as
  // divergent expressions, since function calls evaluate arguments first.
  // 0 = false, 1 = true, 2 = undefined.
  auto arg_src = [](int v) -> std::string {
    return v == 0 ? "false" : v == 1 ? "true" : kDivergesTrue;
  };
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      std::string src = "case " + arg_src(a) + " => true | " + arg_src(b) +
                        " => true | neg(" + arg_src(a) + ") => " + arg_src(b) +
                        " end";
      auto tp = load_with_main(path, src);
      power_set<frag_value> want =
          (a == 1 || b == 1) ? bool_set(true, false, false)
          : (a == 0 && b == 0) ? bool_set(false, true, false)
                               : power_set<frag_value>::bottom();
      ++r.samples;
      power_set<frag_value> den = denote(tp, 8);
      if (den != want)
        fail(r, "or(" + std::to_string(a) + "," + std::to_string(b) +
                    ") denotes " + to_string(den));
      ++r.samples;
      run_result got = run_main(tp, 5, uint64_t{32});
      if (want.has_bottom()) {
        const auto* d = std::get_if<diagnostic>(&got);
        if (!d || d->why != failure::fuel_exhausted)
          fail(r, "or(" + std::to_string(a) + "," + std::to_string(b) +
                      ") ran to " + result_str(got));
      } else {
        std::string want_str = want.values().count(frag_value(true)) ? "true"
                                                                     : "false";
        if (result_str(got) != want_str)
          fail(r, "or(" + std::to_string(a) + "," + std::to_string(b) +
                      ") ran to " + result_str(got));
      }
    }
  }
  return r;
}

property_report check_strict_or(const check_options& o) {
  property_report r;
  r.name = "strict_or";
  const std::string path = cl_path(o, "strict_or.cl");
  for (bool a : {false, true}) {
    for (bool b : {false, true}) {
      std::string src = std::string("strict_or(") + (a ? "true" : "false") +
                        ", " + (b ? "true" : "false") + ")";
      auto tp = load_with_main(path, src);
      ++r.samples;
      std::string got = result_str(run_main(tp, 5));
      if (got != ((a || b) ? "true" : "false")) fail(r, src + " ran to " + got);
    }
  }
  // Left divergence wins even against a true right argument — the contrast
  // with the parallel table's or(undefined, true) = true.
  auto tp = load_with_main(path, std::string("strict_or(") + kDivergesTrue +
                                     ", true)");
  ++r.samples;
  power_set<frag_value> den = denote(tp, 4);
  if (den != power_set<frag_value>::bottom())
    fail(r, "strict_or(diverge, true) denotes " + to_string(den));
  ++r.samples;
  run_result got = run_main(tp, 5, uint64_t{16});
  const auto* d = std::get_if<diagnostic>(&got);
  if (!d || d->why != failure::fuel_exhausted)
    fail(r, "strict_or(diverge, true) ran to " + result_str(got));
  return r;
}

}  // namespace

std::vector<corpus_entry> load_corpus() {
  return {
      {"abs", "abs.cl",
       "random rationals in [-10,10]; result within 1e-12 of |x|", check_abs},
      {"sin", "sin.cl",
       "random rationals in (3,4); result within 1e-12 of the exact Taylor "
       "reference", check_sin},
      {"pi", "pi.cl", "first 30 fraction digits match the reference expansion",
       check_pi},
      {"soft_cmp", "soft_cmp.cl",
       "500-point grid across the comparison band; evaluator answer always "
       "inside the exact denotation, forced outside the overlap",
       check_soft_cmp},
      {"binary_choice", "binary_choice.cl",
       "denotes {0, 1}; deterministic and seeded scheduling stay inside",
       check_binary_choice},
      {"amb", "amb.cl",
       "divergent alternative is discarded: denotes {1} and runs to 1",
       check_amb},
      {"neg", "neg.cl", "truth table plus strictness in the argument",
       check_neg},
      {"nonmono_blocked", "nonmono_blocked.cl",
       "divergent guard blocks its branch: denotes {()}", check_nonmono_blocked},
      {"nonmono_open", "nonmono_open.cl",
       "raising a guard to true adds divergence: {()} does not precede "
       "{(), bottom}", check_nonmono_open},
      {"parallel_or", "parallel_or.cl",
       "full three-valued disjunction table, oracle and evaluator",
       check_parallel_or},
      {"strict_or", "strict_or.cl",
       "sequential disjunction truth table; strict in the left argument",
       check_strict_or},
  };
}

property_report check_entry(const corpus_entry& e, const check_options& o) {
  try {
    return e.check(o);
  } catch (const std::exception& ex) {
    property_report r;
    r.name = e.name;
    r.samples = 1;
    fail(r, std::string("exception: ") + ex.what());
    return r;
  }
}

std::string report_text(const std::vector<property_report>& rs) {
  std::ostringstream out;
  for (const property_report& r : rs) {
    out << (r.pass() ? "pass" : "FAIL") << "  " << r.name << "  ("
        << r.samples << " samples";
    if (r.failures) out << ", " << r.failures << " failures";
    out << ")\n";
    for (const std::string& n : r.notes) out << "      " << n << "\n";
  }
  return out.str();
}

std::string report_summary(const std::vector<property_report>& rs) {
  std::ostringstream out;
  for (const property_report& r : rs)
    out << r.name << " " << (r.pass() ? "pass" : "fail") << " " << r.samples
        << "\n";
  return out.str();
}

rational sin_reference(const rational& x, const rational& tol) {
  if (tol <= 0) throw internal_fault("sin_reference: tol must be positive");
  rational s = x;
  rational t = -(x * x * x) / 6;
  bigint j = 0;
  // |sin(x) - s| <= |t| throughout (Taylor remainder of an entire series).
  while (abs(t) >= tol) {
    j += 1;
    s += t;
    t *= -(x * x) / rational((2 * j + 2) * (2 * j + 3));
  }
  return s;
}

rational rat_from_decimal(const std::string& s) {
  size_t i = 0;
  bool negate = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) negate = s[i++] == '-';
  bigint num = 0;
  bigint den = 1;
  bool any = false, frac = false;
  for (; i < s.size(); ++i) {
    if (s[i] == '.') {
      if (frac) throw std::runtime_error("bad decimal: " + s);
      frac = true;
      continue;
    }
    if (s[i] < '0' || s[i] > '9') throw std::runtime_error("bad decimal: " + s);
    num = num * 10 + (s[i] - '0');
    if (frac) den *= 10;
    any = true;
  }
  if (!any) throw std::runtime_error("bad decimal: " + s);
  rational r(num, den);
  return negate ? rational(-r) : r;
}

const char* const pi_digits_40 = "1415926535897932384626433832795028841971";

std::string rational_literal(const rational& r) {
  bigint num = numerator(r);
  bigint den = denominator(r);
  std::string n = "real(" + num.str() + ")";
  if (den == 1) return n;
  return "(" + n + " * inv(real(" + den.str() + ")))";
}

typed_program load_file(const std::string& path) {
  return elaborate(parse_program(read_file(path)));
}

typed_program load_with_main(const std::string& path, const std::string& main_src) {
  program p = parse_program(read_file(path));
  p.main = parse_expr_string(main_src);
  return elaborate(p);
}

}  // namespace clerical
