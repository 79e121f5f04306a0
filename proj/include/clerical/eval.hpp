// SPDX-License-Identifier: Apache-2.0
//
// Big-step interval evaluator.  All arithmetic runs on dyadic intervals at
// one working precision; an evaluation either completes with a value or
// stops with a signal:
//
//   precision_loss — some comparison or reciprocal was undecidable at this
//     precision (retryable at a higher one);
//   deadlock — a guarded case proved every guard false (no precision or
//     fuel can revive it, except under a limit, where it converts to
//     precision_loss);
//   fuel_exhausted — a while loop exceeded the configured iteration bound.
//
// Guarded cases poll their guards round-robin: each live guard in turn gets
// a step budget; guards that neither finish nor fail keep their progress
// frontier and are retried with a larger budget next round, so one
// divergent guard cannot starve the others.  The first guard to complete
// with true (in polling order) commits its branch.  Guards are pure, so
// each attempt replays from scratch on a snapshot of the store; the replay
// reaches the same frontier a suspended resumption would.
//
// The restart driver reruns the whole program on a growing precision
// schedule until the result is tight enough to print, or a non-retryable
// signal / the precision cap is hit.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "clerical/interval.hpp"
#include "clerical/typecheck.hpp"

namespace clerical {

using value = std::variant<std::monostate, bool, bigint, interval>;

enum class outcome_kind { done, precision_loss, deadlock, fuel_exhausted };

struct outcome {
  outcome_kind k = outcome_kind::done;
  value v;  // meaningful only when k == done

  static outcome done(value val) { return {outcome_kind::done, std::move(val)}; }
  static outcome signal(outcome_kind k) { return {k, {}}; }
  bool is_done() const { return k == outcome_kind::done; }
};

// One guard poll, for scheduler-fairness instrumentation.
struct guard_poll {
  uint32_t branch;  // branch index in source order
  uint64_t round;   // scheduling round, starting at 1
  bool terminal;    // guard reached a final state during this poll
};

struct eval_trace {
  std::vector<guard_poll> polls;
};

struct eval_config {
  precision prec{60};
  uint32_t guard_step_budget = 256;       // steps granted per poll
  std::optional<uint64_t> fuel;           // max condition evaluations per loop entry
  // Limit index at nesting depth d is p - p/2^(d+1) + offset (inner limits
  // must out-resolve the enclosing one; see eval_limit).
  int32_t limit_index_offset = 2;
  std::optional<uint64_t> scheduler_seed; // permutes guard polling order
  eval_trace* trace = nullptr;            // optional instrumentation sink
};

struct store {
  std::vector<value> slots;
};

// Evaluates e against s (main expressions start from an empty store).
// Deterministic: (program, store, config) fixes the outcome exactly.
outcome eval(const typed_program& p, const typed_expr& e, store& s,
             const eval_config& cfg);

// ---- restart driver ----

struct run_options {
  uint32_t digits = 20;
  uint32_t precision_start = 60;
  uint32_t max_precision = 1000000;
  std::optional<uint64_t> fuel;
  std::optional<uint64_t> scheduler_seed;
  uint32_t guard_step_budget = 256;
};

enum class failure { deadlock, fuel_exhausted, precision_cap };

struct diagnostic {
  failure why;
  uint32_t precision;  // working precision of the final attempt
};

struct run_report {
  std::vector<uint32_t> precisions_tried;  // strictly increasing
};

using run_result = std::variant<std::string, diagnostic>;

// Next precision in the restart schedule: ceil(1.25 * p) + 32.
uint32_t next_precision(uint32_t p);

// Runs main through the precision schedule.  Real results are rendered with
// exactly `digits` fraction digits; bool/int/unit results render as "true",
// "-7", "()" after the first successful attempt.
run_result run_with_restarts(const typed_program& p, const run_options& opts,
                             run_report* report = nullptr);

}  // namespace clerical
