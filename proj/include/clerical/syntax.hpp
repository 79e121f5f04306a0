// SPDX-License-Identifier: Apache-2.0
//
// Surface abstract syntax as produced by the parser.  Arithmetic (+ - *),
// comparison (<) and unary minus are overloaded between int and real in the
// concrete syntax; they parse to the unresolved kinds `arith`, `less` and
// `neg`, which elaboration rewrites to the type-resolved kinds.  `=` exists
// only at int type and parses directly to int_eq.

#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace clerical {

using bigint = boost::multiprecision::cpp_int;

enum class base_type { unit, boolean, integer, real };

const char* type_name(base_type t);  // "unit" | "bool" | "int" | "real"

struct source_span {
  uint32_t line = 0, col = 0;          // 1-based start
  uint32_t end_line = 0, end_col = 0;  // exclusive end column
};

enum class op_kind { add, sub, mul };

enum class ekind {
  var,        // name
  lit_true,
  lit_false,
  lit_int,    // lit
  skip,
  coerce,     // real(e)           kids: e
  pow2,       // 2 ^ e             kids: e
  arith,      // e1 op e2, unresolved
  int_op,     // resolved int arithmetic
  real_op,    // resolved real arithmetic
  neg,        // -e, unresolved
  recip,      // inv(e)
  less,       // e1 < e2, unresolved
  int_eq,     // e1 = e2
  int_lt,     // resolved int <
  real_lt,    // resolved real <
  lim,        // lim name. e       kids: e
  seq,        // kids: e1 e2
  new_var,    // var name := e1 in e2
  assign,     // name := e
  cond,       // kids: cond then else
  case_of,    // kids: g1 b1 g2 b2 ...
  while_do,   // kids: cond body
  call,       // name(kids...)
};

struct expr {
  ekind k = ekind::skip;
  source_span span;
  std::string name;  // var / binder / assign target / callee
  bigint lit;        // lit_int payload
  op_kind op = op_kind::add;
  std::vector<expr> kids;
};

// Structural equality; spans are ignored, binder names are compared.
bool operator==(const expr& a, const expr& b);
inline bool operator!=(const expr& a, const expr& b) { return !(a == b); }

struct fun_def {
  std::string name;
  std::vector<std::pair<std::string, base_type>> params;
  base_type ret = base_type::unit;
  expr body;
  source_span span;
};

using top_env = std::vector<fun_def>;

struct program {
  top_env funs;
  expr main;
};

// Typing context: name/type pairs, innermost last (lookups scan backwards,
// so shadowing picks the innermost binding).
using context = std::vector<std::pair<std::string, base_type>>;

std::optional<base_type> ctx_lookup(const context& g, const std::string& name);

// Free variables of an expression (lim and var-in bind; function names are
// not variables and are excluded).
std::set<std::string> free_vars(const expr& e);

// Concrete syntax rendering; parse(pretty_print(e)) is structurally equal
// to e for every parser-produced e.
std::string pretty_print(const expr& e);
std::string pretty_print(const program& p);

// Convenience constructors used by tests and the corpus harness.
expr mk_var(std::string name);
expr mk_int(bigint k);
expr mk_bool(bool b);
expr mk_call(std::string fn, std::vector<expr> args);

}  // namespace clerical
