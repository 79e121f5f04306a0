// SPDX-License-Identifier: Apache-2.0
//
// Hand-written lexer and recursive-descent parser.  Grammar layering, from
// loosest to tightest binding:
//
//   program := fundef* "do" expr
//   fundef  := "let" ident "(" [params] ")" ":" type ":=" expr
//   expr    := stmt [";" expr]                        (right-associative)
//   stmt    := "var" ident ":=" stmt "in" expr
//            | ident ":=" stmt
//            | "if" expr "then" expr "else" expr "end"
//            | "case" expr "=>" expr ("|" expr "=>" expr)* "end"
//            | "while" expr "do" expr "end"
//            | "lim" ident "." expr
//            | cmp
//   cmp     := arith [("<" | "=") arith]              (non-associative)
//   arith   := term (("+" | "-") term)*
//   term    := unary ("*" unary)*
//   unary   := "-" unary | pow
//   pow     := "2" "^" unary          (only the literal 2 may be a base)
//            | atom
//   atom    := "(" expr ")" | "true" | "false" | "skip" | intlit
//            | "real" "(" expr ")" | "inv" "(" expr ")"
//            | ident ["(" [expr ("," expr)*] ")"]
//
// `var x := e in c` and `lim n. c` extend maximally to the right, so a `;`
// after their body belongs to the body (parenthesize to cut the scope).
// Comments run from `#` to end of line.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "clerical/syntax.hpp"

namespace clerical {

struct parse_error : std::runtime_error {
  source_span span;
  parse_error(std::string msg, source_span s)
      : std::runtime_error(std::move(msg)), span(s) {}
};

enum class tok {
  ident, int_lit,
  kw_let, kw_do, kw_var, kw_in, kw_if, kw_then, kw_else, kw_end, kw_case,
  kw_while, kw_lim, kw_skip, kw_true, kw_false, kw_real, kw_inv,
  kw_int, kw_bool, kw_unit,
  lparen, rparen, comma, colon, assign, eq, arrow, bar, semi,
  lt, plus, minus, star, caret, dot,
  eof,
};

struct token {
  tok kind = tok::eof;
  std::string text;  // identifier spelling
  bigint value;      // int_lit payload
  source_span span;
};

// Throws parse_error on an illegal character.  The returned vector always
// ends with an eof token.
std::vector<token> tokenize(const std::string& source);

program parse_program(const std::string& source);

// Parses a single expression (whole input must be consumed); test helper.
expr parse_expr_string(const std::string& source);

}  // namespace clerical
