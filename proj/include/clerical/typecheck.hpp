// SPDX-License-Identifier: Apache-2.0
//
// Bidirectional-free, syntax-directed typechecker for the two judgement
// forms: read-only (pure expressions) and read-write (commands).  The
// read-only judgement is the read-write one with an empty writable zone;
// entering any pure position (guards, conditions, initializers, assignment
// right-hand sides, operands, arguments, limit bodies) seals every variable
// currently in scope read-only, so commands inside pure expressions can
// only mutate locals they introduce themselves.
//
// Elaboration resolves the overloaded surface operators to their int/real
// forms, rewrites unary minus to subtraction from zero, resolves every
// variable to an absolute slot index in the runtime stack, and resolves
// calls to indices into the typed environment.  A function may call only
// functions defined strictly before it; recursion is rejected as an
// unknown name.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "clerical/syntax.hpp"

namespace clerical {

struct type_error : std::runtime_error {
  source_span span;
  std::string judgement;  // "ro" | "rw"
  type_error(std::string msg, source_span s, std::string j)
      : std::runtime_error(std::move(msg)), span(s), judgement(std::move(j)) {}
};

enum class tkind {
  var, lit_bool, lit_int, skip, coerce, pow2, int_op, real_op, recip,
  int_eq, int_lt, real_lt, lim, seq, new_var, assign, cond, case_of,
  while_do, call,
};

struct typed_expr {
  tkind k = tkind::skip;
  base_type type = base_type::unit;
  source_span span;
  bool bval = false;      // lit_bool
  bigint lit;             // lit_int
  op_kind op = op_kind::add;
  uint32_t slot = 0;      // var / assign target (absolute stack index)
  uint32_t fn = 0;        // call: index into typed_program::funs
  std::string name;       // original identifier, diagnostics only
  std::vector<typed_expr> kids;
};

bool operator==(const typed_expr& a, const typed_expr& b);

struct typed_fun {
  std::string name;
  std::vector<base_type> params;
  base_type ret = base_type::unit;
  typed_expr body;  // stack layout: slots 0..n-1 are the parameters
};

struct typed_program {
  std::vector<typed_fun> funs;
  typed_expr main;
};

// Γ ⊢ro e : τ with all of gamma read-only.
base_type check_ro(const top_env& env, const context& gamma, const expr& e);

// Γ;Δ ⊢rw e : τ — gamma read-only, delta writable.
base_type check_rw(const top_env& env, const context& gamma, const context& delta,
                   const expr& e);

// Validates the function definitions sequentially (each body may refer only
// to strictly earlier functions).  Throws type_error.
void check_env(const top_env& env);

// Full program elaboration; main is checked in the empty context.
typed_program elaborate(const program& p);

}  // namespace clerical
