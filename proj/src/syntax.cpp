// SPDX-License-Identifier: Apache-2.0

#include "clerical/syntax.hpp"

#include <sstream>

namespace clerical {

const char* type_name(base_type t) {
  switch (t) {
    case base_type::unit: return "unit";
    case base_type::boolean: return "bool";
    case base_type::integer: return "int";
    case base_type::real: return "real";
  }
  return "?";
}

bool operator==(const expr& a, const expr& b) {
  if (a.k != b.k || a.name != b.name || a.kids.size() != b.kids.size()) return false;
  if (a.k == ekind::lit_int && a.lit != b.lit) return false;
  if ((a.k == ekind::arith || a.k == ekind::int_op || a.k == ekind::real_op) && a.op != b.op)
    return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!(a.kids[i] == b.kids[i])) return false;
  return true;
}

std::optional<base_type> ctx_lookup(const context& g, const std::string& name) {
  for (auto it = g.rbegin(); it != g.rend(); ++it)
    if (it->first == name) return it->second;
  return std::nullopt;
}

namespace {

void fv(const expr& e, std::set<std::string>& acc, std::vector<std::string>& bound) {
  switch (e.k) {
    case ekind::var:
      for (auto it = bound.rbegin(); it != bound.rend(); ++it)
        if (*it == e.name) return;
      acc.insert(e.name);
      return;
    case ekind::assign:
      for (auto it = bound.rbegin(); it != bound.rend(); ++it)
        if (*it == e.name) {
          fv(e.kids[0], acc, bound);
          return;
        }
      acc.insert(e.name);
      fv(e.kids[0], acc, bound);
      return;
    case ekind::lim:
      bound.push_back(e.name);
      fv(e.kids[0], acc, bound);
      bound.pop_back();
      return;
    case ekind::new_var:
      fv(e.kids[0], acc, bound);
      bound.push_back(e.name);
      fv(e.kids[1], acc, bound);
      bound.pop_back();
      return;
    default:
      for (const expr& kid : e.kids) fv(kid, acc, bound);
      return;
  }
}

// Printer levels mirror the grammar layering; a node printed in a position
// that demands a tighter level gets parenthesized.
enum level { l_seq, l_stmt, l_cmp, l_arith, l_term, l_unary, l_atom };

level natural_level(const expr& e) {
  switch (e.k) {
    case ekind::seq: return l_seq;
    case ekind::new_var:
    case ekind::assign:
    case ekind::cond:
    case ekind::case_of:
    case ekind::while_do:
    case ekind::lim: return l_stmt;
    case ekind::less:
    case ekind::int_eq:
    case ekind::int_lt:
    case ekind::real_lt: return l_cmp;
    case ekind::arith:
    case ekind::int_op:
    case ekind::real_op: return e.op == op_kind::mul ? l_term : l_arith;
    case ekind::neg:
    case ekind::pow2: return l_unary;
    default: return l_atom;
  }
}

// True when the node's rightmost edge keeps consuming after a `;` (var-in
// and lim bodies extend maximally), so it must be parenthesized when
// something follows it in a sequence.
bool open_right(const expr& e) {
  switch (e.k) {
    case ekind::new_var:
    case ekind::lim: return true;
    case ekind::assign: return open_right(e.kids[0]);
    case ekind::seq: return open_right(e.kids[1]);
    default: return false;
  }
}

void pp(std::ostream& os, const expr& e, level want);

void pp_wrapped(std::ostream& os, const expr& e, level want, bool force_parens) {
  if (force_parens || natural_level(e) < want) {
    os << "(";
    pp(os, e, l_seq);
    os << ")";
  } else {
    pp(os, e, want);
  }
}

const char* op_sym(op_kind op) {
  switch (op) {
    case op_kind::add: return "+";
    case op_kind::sub: return "-";
    case op_kind::mul: return "*";
  }
  return "?";
}

void pp(std::ostream& os, const expr& e, level want) {
  if (natural_level(e) < want) {
    os << "(";
    pp(os, e, l_seq);
    os << ")";
    return;
  }
  switch (e.k) {
    case ekind::var: os << e.name; break;
    case ekind::lit_true: os << "true"; break;
    case ekind::lit_false: os << "false"; break;
    case ekind::lit_int: os << e.lit.str(); break;
    case ekind::skip: os << "skip"; break;
    case ekind::coerce:
      os << "real(";
      pp(os, e.kids[0], l_seq);
      os << ")";
      break;
    case ekind::recip:
      os << "inv(";
      pp(os, e.kids[0], l_seq);
      os << ")";
      break;
    case ekind::pow2:
      os << "2 ^ ";
      pp_wrapped(os, e.kids[0], l_unary, false);
      break;
    case ekind::neg:
      os << "-";
      pp_wrapped(os, e.kids[0], l_unary, false);
      break;
    case ekind::arith:
    case ekind::int_op:
    case ekind::real_op: {
      level mine = natural_level(e);
      pp_wrapped(os, e.kids[0], mine, false);
      os << " " << op_sym(e.op) << " ";
      pp_wrapped(os, e.kids[1], static_cast<level>(mine + 1), false);
      break;
    }
    case ekind::less:
    case ekind::int_lt:
    case ekind::real_lt:
      pp_wrapped(os, e.kids[0], l_arith, false);
      os << " < ";
      pp_wrapped(os, e.kids[1], l_arith, false);
      break;
    case ekind::int_eq:
      pp_wrapped(os, e.kids[0], l_arith, false);
      os << " = ";
      pp_wrapped(os, e.kids[1], l_arith, false);
      break;
    case ekind::lim:
      os << "lim " << e.name << ". ";
      pp(os, e.kids[0], l_seq);
      break;
    case ekind::seq:
      // Left arm must stay a closed statement: parenthesize nested
      // sequences and anything whose right edge would swallow the `;`.
      pp_wrapped(os, e.kids[0], l_stmt, open_right(e.kids[0]));
      os << " ; ";
      pp(os, e.kids[1], l_seq);
      break;
    case ekind::new_var:
      os << "var " << e.name << " := ";
      pp(os, e.kids[0], l_stmt);
      os << " in ";
      pp(os, e.kids[1], l_seq);
      break;
    case ekind::assign:
      os << e.name << " := ";
      pp(os, e.kids[0], l_stmt);
      break;
    case ekind::cond:
      os << "if ";
      pp(os, e.kids[0], l_seq);
      os << " then ";
      pp(os, e.kids[1], l_seq);
      os << " else ";
      pp(os, e.kids[2], l_seq);
      os << " end";
      break;
    case ekind::case_of:
      os << "case ";
      for (size_t i = 0; i + 1 < e.kids.size(); i += 2) {
        if (i > 0) os << " | ";
        pp(os, e.kids[i], l_seq);
        os << " => ";
        pp(os, e.kids[i + 1], l_seq);
      }
      os << " end";
      break;
    case ekind::while_do:
      os << "while ";
      pp(os, e.kids[0], l_seq);
      os << " do ";
      pp(os, e.kids[1], l_seq);
      os << " end";
      break;
    case ekind::call:
      os << e.name << "(";
      for (size_t i = 0; i < e.kids.size(); ++i) {
        if (i > 0) os << ", ";
        pp(os, e.kids[i], l_seq);
      }
      os << ")";
      break;
  }
}

}  // namespace

std::set<std::string> free_vars(const expr& e) {
  std::set<std::string> acc;
  std::vector<std::string> bound;
  fv(e, acc, bound);
  return acc;
}

std::string pretty_print(const expr& e) {
  std::ostringstream os;
  pp(os, e, l_seq);
  return os.str();
}

std::string pretty_print(const program& p) {
  std::ostringstream os;
  for (const fun_def& f : p.funs) {
    os << "let " << f.name << "(";
    for (size_t i = 0; i < f.params.size(); ++i) {
      if (i > 0) os << ", ";
      os << f.params[i].first << " : " << type_name(f.params[i].second);
    }
    os << ") : " << type_name(f.ret) << " :=\n  " << pretty_print(f.body) << "\n\n";
  }
  os << "do " << pretty_print(p.main) << "\n";
  return os.str();
}

expr mk_var(std::string name) {
  expr e;
  e.k = ekind::var;
  e.name = std::move(name);
  return e;
}

expr mk_int(bigint k) {
  expr e;
  e.k = ekind::lit_int;
  e.lit = std::move(k);
  return e;
}

expr mk_bool(bool b) {
  expr e;
  e.k = b ? ekind::lit_true : ekind::lit_false;
  return e;
}

expr mk_call(std::string fn, std::vector<expr> args) {
  expr e;
  e.k = ekind::call;
  e.name = std::move(fn);
  e.kids = std::move(args);
  return e;
}

}  // namespace clerical
