// SPDX-License-Identifier: Apache-2.0
//
// Interval evaluator and restart driver: value forms, guarded-choice
// scheduling (fairness, seeding, budget replay), loop fuel accounting,
// limit widening, and the precision-restart loop with its diagnostics.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

#include "clerical/eval.hpp"
#include "clerical/parser.hpp"

using namespace clerical;

namespace {

typed_program tp(const std::string& src) {
  return elaborate(parse_program(src));
}

outcome ev(const std::string& src, const eval_config& cfg = {}) {
  typed_program p = tp(src);
  store s;
  return eval(p, p.main, s, cfg);
}

run_result run(const std::string& src, run_options opts = {},
               run_report* report = nullptr) {
  typed_program p = tp(src);
  return run_with_restarts(p, opts, report);
}

std::string run_str(const std::string& src, run_options opts = {}) {
  run_result r = run(src, opts);
  REQUIRE(std::holds_alternative<std::string>(r));
  return std::get<std::string>(r);
}

diagnostic run_diag(const std::string& src, run_options opts = {}) {
  run_result r = run(src, opts);
  REQUIRE(std::holds_alternative<diagnostic>(r));
  return std::get<diagnostic>(r);
}

const char* const kDiv = "(while true do skip end ; true)";

}  // namespace

TEST_CASE("discrete results render exactly") {
  CHECK(run_str("do 1 + 2 * 3") == "7");
  CHECK(run_str("do 0 - 5") == "-5");
  CHECK(run_str("do true") == "true");
  CHECK(run_str("do 1 = 2") == "false");
  CHECK(run_str("do skip") == "()");
  CHECK(run_str("do var x := 1 in (x := x + 1 ; x)") == "2");
}

TEST_CASE("evaluation yields the matching value alternative") {
  outcome o_int = ev("do 3");
  REQUIRE(o_int.is_done());
  CHECK(std::get<bigint>(o_int.v) == 3);
  outcome o_bool = ev("do false");
  REQUIRE(o_bool.is_done());
  CHECK(std::get<bool>(o_bool.v) == false);
  outcome o_unit = ev("do skip");
  REQUIRE(o_unit.is_done());
  CHECK(std::holds_alternative<std::monostate>(o_unit.v));
  outcome o_real = ev("do real(7)");
  REQUIRE(o_real.is_done());
  const interval& iv = std::get<interval>(o_real.v);
  CHECK(iv.lo <= dyadic::from_int(7));
  CHECK(dyadic::from_int(7) <= iv.hi);
}

TEST_CASE("real results render with the requested fraction digits") {
  run_options d5;
  d5.digits = 5;
  CHECK(run_str("do real(1) * inv(real(2))", d5) == "0.50000");
  run_options d10;
  d10.digits = 10;
  CHECK(run_str("do real(1) * inv(real(3))", d10) == "0.3333333333");
  CHECK(run_str("do real(0) - real(13) * inv(real(4))", d10) ==
        "-3.2500000000");
}

TEST_CASE("the store is balanced across evaluation") {
  typed_program p = tp("do var x := 1 in var y := 2 in (x := x + y ; x * y)");
  store s;
  outcome o = eval(p, p.main, s, {});
  REQUIRE(o.is_done());
  CHECK(std::get<bigint>(o.v) == 6);
  CHECK(s.slots.empty());
}

TEST_CASE("guarded choice commits the first true guard in polling order") {
  CHECK(run_str("do case true => 0 | true => 1 end") == "0");
  // A divergent first guard cannot starve the rest: round-robin polling
  // lets the second guard finish and commit.
  CHECK(run_str(std::string("do case ") + kDiv + " => 0 | true => 1 end") ==
        "1");
  // Decidable real guards commit without restarts.
  CHECK(run_str("do case real(1) < real(2) => 1 | real(2) < real(1) => 0 end") ==
        "1");
}

TEST_CASE("seeded scheduling permutes the commit order deterministically") {
  typed_program p = tp("do case true => 0 | true => 1 end");
  std::set<std::string> seen;
  for (uint64_t seed = 0; seed < 21; ++seed) {
    run_options o;
    o.scheduler_seed = seed;
    run_result r1 = run_with_restarts(p, o);
    run_result r2 = run_with_restarts(p, o);
    REQUIRE(std::holds_alternative<std::string>(r1));
    REQUIRE(std::holds_alternative<std::string>(r2));
    CHECK(std::get<std::string>(r1) == std::get<std::string>(r2));
    std::string v = std::get<std::string>(r1);
    CHECK((v == "0" || v == "1"));
    seen.insert(v);
  }
  CHECK(seen.size() == 2);  // both orders occur across seeds
}

TEST_CASE("guard polls are traced round-robin with growing budgets") {
  // Branch 0 diverges; branch 1 needs thousands of steps, so it is polled
  // across several rounds before finishing.  The divergent guard must keep
  // being polled alongside it without ever becoming terminal.
  std::string src = std::string("do case ") + kDiv +
                    " => 0 | (var k := 5000 in "
                    "(while 0 < k do k := k - 1 end ; true)) => 1 end";
  typed_program p = tp(src);
  eval_trace trace;
  eval_config cfg;
  cfg.trace = &trace;
  store s;
  outcome o = eval(p, p.main, s, cfg);
  REQUIRE(o.is_done());
  CHECK(std::get<bigint>(o.v) == 1);
  REQUIRE(!trace.polls.empty());
  uint64_t max_round = 0;
  bool branch0_terminal = false;
  uint64_t branch1_terminal_round = 0;
  for (const guard_poll& gp : trace.polls) {
    max_round = std::max(max_round, gp.round);
    if (gp.branch == 0 && gp.terminal) branch0_terminal = true;
    if (gp.branch == 1 && gp.terminal) branch1_terminal_round = gp.round;
  }
  CHECK(max_round >= 2);
  CHECK(!branch0_terminal);
  CHECK(branch1_terminal_round == max_round);
  // Every round before the commit polls both guards exactly once.
  for (uint64_t r = 1; r < max_round; ++r) {
    int b0 = 0, b1 = 0;
    for (const guard_poll& gp : trace.polls)
      if (gp.round == r) (gp.branch == 0 ? b0 : b1)++;
    CHECK(b0 == 1);
    CHECK(b1 == 1);
  }
}

TEST_CASE("a tiny step budget still completes via replay") {
  run_options o;
  o.guard_step_budget = 1;
  CHECK(run_str("do case (skip ; skip ; true) => 5 end", o) == "5");
}

TEST_CASE("guards proven false deadlock the case") {
  diagnostic d = run_diag("do case false => 0 | false => 1 end");
  CHECK(d.why == failure::deadlock);
  CHECK(run_diag("do case real(2) < real(1) => 0 end").why ==
        failure::deadlock);
  // At the evaluator level the signal is a deadlock, not precision loss.
  CHECK(ev("do case false => 0 end").k == outcome_kind::deadlock);
}

TEST_CASE("a deadlock under a limit retries as precision loss") {
  // The guard is false at every precision, so the limit keeps restarting
  // until the precision cap: the hopeless case is reported as a cap hit,
  // never as a deadlock (a fresh precision might in general revive it).
  std::string src = "do lim n. case real(1) < real(0) => real(0) end";
  CHECK(ev(src).k == outcome_kind::precision_loss);
  run_options o;
  o.max_precision = 300;
  diagnostic d = run_diag(src, o);
  CHECK(d.why == failure::precision_cap);
}

TEST_CASE("loop fuel counts condition evaluations per loop entry") {
  std::string five = "do var x := 0 in while x < 5 do x := x + 1 end";
  run_options fuel6;
  fuel6.fuel = 6;  // 6 condition evaluations: x = 0..4 true, x = 5 false
  CHECK(run_str(five, fuel6) == "()");
  run_options fuel5;
  fuel5.fuel = 5;
  CHECK(run_diag(five, fuel5).why == failure::fuel_exhausted);
  // Each entry to an inner loop gets the full bound again: 3 outer passes
  // of a 3-step inner loop run fine on fuel 4 even though the inner loop
  // evaluates its condition 12 times in total.
  std::string nested =
      "do var i := 0 in while i < 3 do "
      "(var j := 0 in ((while j < 3 do j := j + 1 end) ; i := i + 1)) end";
  run_options fuel4;
  fuel4.fuel = 4;
  CHECK(run_str(nested, fuel4) == "()");
  run_options fuel3;
  fuel3.fuel = 3;
  CHECK(run_diag(nested, fuel3).why == failure::fuel_exhausted);
  // Without fuel, loops run to completion.
  CHECK(run_str("do var x := 1000 in while 0 < x do x := x - 1 end") == "()");
  // Evaluator-level signal kinds.
  eval_config tight;
  tight.fuel = 5;
  CHECK(ev(five, tight).k == outcome_kind::fuel_exhausted);
}

TEST_CASE("case guards replay soundly as loop conditions") {
  CHECK(run_str("do var x := 4 in "
                "((while (case 0 < x => true | x < 1 => false end) "
                "do x := x - 1 end) ; x)") == "0");
}

TEST_CASE("limit widening matches the depth-0 index schedule") {
  // At working precision p the outermost limit uses index n = p - p/2 + 2,
  // so a point body comes back widened to exactly 2^(1-n).
  eval_config cfg;
  cfg.prec = precision{60};
  outcome o = ev("do lim n. real(0)", cfg);
  REQUIRE(o.is_done());
  const interval& iv = std::get<interval>(o.v);
  CHECK(iv.width() == dyadic::pow2(-31));
  CHECK(iv.contains_zero());
}

TEST_CASE("limits concentrate with precision until printable") {
  run_options d10;
  d10.digits = 10;
  CHECK(run_str("do lim n. real(1) * inv(real(3))", d10) == "0.3333333333");
  CHECK(run_str("do lim n. 2 ^ (-n)", d10) == "0.0000000000");
  // The limit index is read-only but fully usable in the body.
  CHECK(run_str("do lim n. 2 ^ (-n) * real(0) + real(1) * inv(real(4))", d10) ==
        "0.2500000000");
}

TEST_CASE("nested limits resolve inner-first") {
  run_options d10;
  d10.digits = 10;
  CHECK(run_str("do lim m. lim n. real(1) * inv(real(3))", d10) ==
        "0.3333333333");
}

TEST_CASE("restart schedule: precision grows by a quarter plus a constant") {
  CHECK(next_precision(60) == 107);
  CHECK(next_precision(107) == 166);
  CHECK(next_precision(166) == 240);
  CHECK(next_precision(240) == 332);
  for (uint32_t p = 2; p < 5000; p = p * 3 / 2 + 1)
    CHECK(next_precision(p) > p);
}

TEST_CASE("the driver records each attempt and stops at the cap") {
  run_options o;
  o.max_precision = 300;
  run_report rep;
  run_result r = run("do inv(real(0))", o, &rep);
  REQUIRE(std::holds_alternative<diagnostic>(r));
  diagnostic d = std::get<diagnostic>(r);
  CHECK(d.why == failure::precision_cap);
  REQUIRE(!rep.precisions_tried.empty());
  CHECK(rep.precisions_tried.front() == o.precision_start);
  // The last step clamps to the cap so the full allowance gets one try.
  for (size_t i = 0; i + 1 < rep.precisions_tried.size(); ++i) {
    CHECK(rep.precisions_tried[i + 1] ==
          std::min(next_precision(rep.precisions_tried[i]), o.max_precision));
    CHECK(rep.precisions_tried[i + 1] <= o.max_precision);
  }
  CHECK(rep.precisions_tried.back() == o.max_precision);
  CHECK(d.precision == rep.precisions_tried.back());
  // An undecidable comparison exhausts the schedule the same way.
  CHECK(run_diag("do real(1) < real(1)", o).why == failure::precision_cap);
}

TEST_CASE("more digits demand more restarts") {
  typed_program p = tp("do lim n. real(1) * inv(real(3))");
  run_options d5;
  d5.digits = 5;
  run_options d40;
  d40.digits = 40;
  run_report rep5, rep40;
  run_result r5 = run_with_restarts(p, d5, &rep5);
  run_result r40 = run_with_restarts(p, d40, &rep40);
  CHECK(std::get<std::string>(r5) == "0.33333");
  CHECK(std::get<std::string>(r40) == "0." + std::string(40, '3'));
  CHECK(rep5.precisions_tried.size() == 1);
  CHECK(rep40.precisions_tried.size() > rep5.precisions_tried.size());
}

TEST_CASE("evaluation is deterministic for a fixed configuration") {
  std::string src =
      "do case true => real(1) * inv(real(7)) | true => real(2) end";
  run_options o;
  o.digits = 15;
  o.scheduler_seed = 42;
  std::string first = run_str(src, o);
  for (int i = 0; i < 5; ++i) CHECK(run_str(src, o) == first);
}
