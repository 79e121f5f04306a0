// SPDX-License-Identifier: Apache-2.0

#include "clerical/parser.hpp"

#include <map>

namespace clerical {

namespace {

const std::map<std::string, tok, std::less<>> keywords = {
    {"let", tok::kw_let},     {"do", tok::kw_do},       {"var", tok::kw_var},
    {"in", tok::kw_in},       {"if", tok::kw_if},       {"then", tok::kw_then},
    {"else", tok::kw_else},   {"end", tok::kw_end},     {"case", tok::kw_case},
    {"while", tok::kw_while}, {"lim", tok::kw_lim},     {"skip", tok::kw_skip},
    {"true", tok::kw_true},   {"false", tok::kw_false}, {"real", tok::kw_real},
    {"inv", tok::kw_inv},     {"int", tok::kw_int},     {"bool", tok::kw_bool},
    {"unit", tok::kw_unit},
};

const char* tok_name(tok k) {
  switch (k) {
    case tok::ident: return "identifier";
    case tok::int_lit: return "integer literal";
    case tok::kw_let: return "'let'";
    case tok::kw_do: return "'do'";
    case tok::kw_var: return "'var'";
    case tok::kw_in: return "'in'";
    case tok::kw_if: return "'if'";
    case tok::kw_then: return "'then'";
    case tok::kw_else: return "'else'";
    case tok::kw_end: return "'end'";
    case tok::kw_case: return "'case'";
    case tok::kw_while: return "'while'";
    case tok::kw_lim: return "'lim'";
    case tok::kw_skip: return "'skip'";
    case tok::kw_true: return "'true'";
    case tok::kw_false: return "'false'";
    case tok::kw_real: return "'real'";
    case tok::kw_inv: return "'inv'";
    case tok::kw_int: return "'int'";
    case tok::kw_bool: return "'bool'";
    case tok::kw_unit: return "'unit'";
    case tok::lparen: return "'('";
    case tok::rparen: return "')'";
    case tok::comma: return "','";
    case tok::colon: return "':'";
    case tok::assign: return "':='";
    case tok::eq: return "'='";
    case tok::arrow: return "'=>'";
    case tok::bar: return "'|'";
    case tok::semi: return "';'";
    case tok::lt: return "'<'";
    case tok::plus: return "'+'";
    case tok::minus: return "'-'";
    case tok::star: return "'*'";
    case tok::caret: return "'^'";
    case tok::dot: return "'.'";
    case tok::eof: return "end of input";
  }
  return "?";
}

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_cont(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

}  // namespace

std::vector<token> tokenize(const std::string& src) {
  std::vector<token> out;
  uint32_t line = 1, col = 1;
  size_t i = 0;
  auto span_from = [&](uint32_t l, uint32_t c) {
    source_span s;
    s.line = l;
    s.col = c;
    s.end_line = line;
    s.end_col = col;
    return s;
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    uint32_t tl = line, tc = col;
    token t;
    if (ident_start(c)) {
      size_t j = i;
      while (j < src.size() && ident_cont(src[j])) ++j;
      t.text = src.substr(i, j - i);
      col += static_cast<uint32_t>(j - i);
      i = j;
      auto kw = keywords.find(t.text);
      t.kind = kw == keywords.end() ? tok::ident : kw->second;
    } else if (c >= '0' && c <= '9') {
      size_t j = i;
      while (j < src.size() && src[j] >= '0' && src[j] <= '9') ++j;
      t.kind = tok::int_lit;
      // Skip leading zeros: bigint's string constructor reads them as an
      // octal prefix ("09" would be rejected, "017" misread as 15).
      size_t nz = i;
      while (nz + 1 < j && src[nz] == '0') ++nz;
      t.value = bigint(src.substr(nz, j - nz));
      col += static_cast<uint32_t>(j - i);
      i = j;
    } else {
      auto two = [&](char second) { return i + 1 < src.size() && src[i + 1] == second; };
      switch (c) {
        case '(': t.kind = tok::lparen; break;
        case ')': t.kind = tok::rparen; break;
        case ',': t.kind = tok::comma; break;
        case ';': t.kind = tok::semi; break;
        case '|': t.kind = tok::bar; break;
        case '<': t.kind = tok::lt; break;
        case '+': t.kind = tok::plus; break;
        case '-': t.kind = tok::minus; break;
        case '*': t.kind = tok::star; break;
        case '^': t.kind = tok::caret; break;
        case '.': t.kind = tok::dot; break;
        case ':':
          if (two('=')) {
            t.kind = tok::assign;
            ++i;
            ++col;
          } else {
            t.kind = tok::colon;
          }
          break;
        case '=':
          if (two('>')) {
            t.kind = tok::arrow;
            ++i;
            ++col;
          } else {
            t.kind = tok::eq;
          }
          break;
        default: {
          source_span s;
          s.line = tl;
          s.col = tc;
          s.end_line = tl;
          s.end_col = tc + 1;
          throw parse_error(std::string("illegal character '") + c + "'", s);
        }
      }
      ++i;
      ++col;
    }
    t.span = span_from(tl, tc);
    out.push_back(std::move(t));
  }
  token e;
  e.kind = tok::eof;
  e.span = span_from(line, col);
  out.push_back(std::move(e));
  return out;
}

namespace {

class parser {
 public:
  explicit parser(std::vector<token> toks) : toks_(std::move(toks)) {}

  program parse_program() {
    program p;
    while (at(tok::kw_let)) p.funs.push_back(parse_fundef());
    expect(tok::kw_do);
    p.main = parse_expr();
    expect(tok::eof);
    return p;
  }

  expr parse_whole_expr() {
    expr e = parse_expr();
    expect(tok::eof);
    return e;
  }

 private:
  std::vector<token> toks_;
  size_t pos_ = 0;

  const token& cur() const { return toks_[pos_]; }
  const token& peek() const { return toks_[std::min(pos_ + 1, toks_.size() - 1)]; }
  bool at(tok k) const { return cur().kind == k; }

  token advance() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& expected) {
    throw parse_error("expected " + expected + ", found " + tok_name(cur().kind),
                      cur().span);
  }

  token expect(tok k) {
    if (!at(k)) fail(tok_name(k));
    return advance();
  }

  base_type parse_type() {
    switch (cur().kind) {
      case tok::kw_int: advance(); return base_type::integer;
      case tok::kw_bool: advance(); return base_type::boolean;
      case tok::kw_real: advance(); return base_type::real;
      case tok::kw_unit: advance(); return base_type::unit;
      default: fail("a type ('int', 'bool', 'real' or 'unit')");
    }
  }

  fun_def parse_fundef() {
    fun_def f;
    f.span = cur().span;
    expect(tok::kw_let);
    f.name = expect(tok::ident).text;
    expect(tok::lparen);
    if (!at(tok::rparen)) {
      for (;;) {
        std::string pn = expect(tok::ident).text;
        expect(tok::colon);
        f.params.emplace_back(pn, parse_type());
        if (!at(tok::comma)) break;
        advance();
      }
    }
    expect(tok::rparen);
    expect(tok::colon);
    f.ret = parse_type();
    expect(tok::assign);
    f.body = parse_expr();
    return f;
  }

  expr node(ekind k, source_span sp) {
    expr e;
    e.k = k;
    e.span = sp;
    return e;
  }

  expr parse_expr() {  // seq level
    expr left = parse_stmt();
    if (at(tok::semi)) {
      source_span sp = advance().span;
      expr s = node(ekind::seq, sp);
      s.kids.push_back(std::move(left));
      s.kids.push_back(parse_expr());
      return s;
    }
    return left;
  }

  expr parse_stmt() {
    switch (cur().kind) {
      case tok::kw_var: {
        expr e = node(ekind::new_var, cur().span);
        advance();
        e.name = expect(tok::ident).text;
        expect(tok::assign);
        e.kids.push_back(parse_stmt());
        expect(tok::kw_in);
        e.kids.push_back(parse_expr());
        return e;
      }
      case tok::kw_if: {
        expr e = node(ekind::cond, cur().span);
        advance();
        e.kids.push_back(parse_expr());
        expect(tok::kw_then);
        e.kids.push_back(parse_expr());
        expect(tok::kw_else);
        e.kids.push_back(parse_expr());
        expect(tok::kw_end);
        return e;
      }
      case tok::kw_case: {
        expr e = node(ekind::case_of, cur().span);
        advance();
        for (;;) {
          e.kids.push_back(parse_expr());
          expect(tok::arrow);
          e.kids.push_back(parse_expr());
          if (!at(tok::bar)) break;
          advance();
        }
        expect(tok::kw_end);
        return e;
      }
      case tok::kw_while: {
        expr e = node(ekind::while_do, cur().span);
        advance();
        e.kids.push_back(parse_expr());
        expect(tok::kw_do);
        e.kids.push_back(parse_expr());
        expect(tok::kw_end);
        return e;
      }
      case tok::kw_lim: {
        expr e = node(ekind::lim, cur().span);
        advance();
        e.name = expect(tok::ident).text;
        expect(tok::dot);
        e.kids.push_back(parse_expr());
        return e;
      }
      case tok::ident:
        if (peek().kind == tok::assign) {
          expr e = node(ekind::assign, cur().span);
          e.name = advance().text;
          advance();  // :=
          e.kids.push_back(parse_stmt());
          return e;
        }
        return parse_cmp();
      default:
        return parse_cmp();
    }
  }

  expr parse_cmp() {
    expr left = parse_arith();
    if (at(tok::lt) || at(tok::eq)) {
      bool is_eq = at(tok::eq);
      expr e = node(is_eq ? ekind::int_eq : ekind::less, advance().span);
      e.kids.push_back(std::move(left));
      e.kids.push_back(parse_arith());
      return e;
    }
    return left;
  }

  expr parse_arith() {
    expr left = parse_term();
    while (at(tok::plus) || at(tok::minus)) {
      bool add = at(tok::plus);
      expr e = node(ekind::arith, advance().span);
      e.op = add ? op_kind::add : op_kind::sub;
      e.kids.push_back(std::move(left));
      e.kids.push_back(parse_term());
      left = std::move(e);
    }
    return left;
  }

  expr parse_term() {
    expr left = parse_unary();
    while (at(tok::star)) {
      expr e = node(ekind::arith, advance().span);
      e.op = op_kind::mul;
      e.kids.push_back(std::move(left));
      e.kids.push_back(parse_unary());
      left = std::move(e);
    }
    return left;
  }

  expr parse_unary() {
    if (at(tok::minus)) {
      expr e = node(ekind::neg, advance().span);
      e.kids.push_back(parse_unary());
      return e;
    }
    if (at(tok::int_lit) && cur().value == 2 && peek().kind == tok::caret) {
      expr e = node(ekind::pow2, cur().span);
      advance();
      advance();  // ^
      e.kids.push_back(parse_unary());
      return e;
    }
    return parse_atom();
  }

  expr parse_atom() {
    switch (cur().kind) {
      case tok::lparen: {
        advance();
        expr e = parse_expr();
        expect(tok::rparen);
        return e;
      }
      case tok::kw_true: return node(ekind::lit_true, advance().span);
      case tok::kw_false: return node(ekind::lit_false, advance().span);
      case tok::kw_skip: return node(ekind::skip, advance().span);
      case tok::int_lit: {
        expr e = node(ekind::lit_int, cur().span);
        e.lit = advance().value;
        return e;
      }
      case tok::kw_real: {
        expr e = node(ekind::coerce, advance().span);
        expect(tok::lparen);
        e.kids.push_back(parse_expr());
        expect(tok::rparen);
        return e;
      }
      case tok::kw_inv: {
        expr e = node(ekind::recip, advance().span);
        expect(tok::lparen);
        e.kids.push_back(parse_expr());
        expect(tok::rparen);
        return e;
      }
      case tok::ident: {
        expr e = node(ekind::var, cur().span);
        e.name = advance().text;
        if (at(tok::lparen)) {
          e.k = ekind::call;
          advance();
          if (!at(tok::rparen)) {
            for (;;) {
              e.kids.push_back(parse_expr());
              if (!at(tok::comma)) break;
              advance();
            }
          }
          expect(tok::rparen);
        }
        return e;
      }
      default:
        fail("an expression");
    }
  }
};

}  // namespace

program parse_program(const std::string& source) {
  return parser(tokenize(source)).parse_program();
}

expr parse_expr_string(const std::string& source) {
  return parser(tokenize(source)).parse_whole_expr();
}

}  // namespace clerical
