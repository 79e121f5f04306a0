// SPDX-License-Identifier: Apache-2.0

#include "clerical/typecheck.hpp"

#include <map>

#include "clerical/dyadic.hpp"  // internal_fault

namespace clerical {

bool operator==(const typed_expr& a, const typed_expr& b) {
  if (a.k != b.k || a.type != b.type || a.kids.size() != b.kids.size()) return false;
  switch (a.k) {
    case tkind::lit_bool:
      if (a.bval != b.bval) return false;
      break;
    case tkind::lit_int:
      if (a.lit != b.lit) return false;
      break;
    case tkind::int_op:
    case tkind::real_op:
      if (a.op != b.op) return false;
      break;
    case tkind::var:
    case tkind::assign:
      if (a.slot != b.slot) return false;
      break;
    case tkind::call:
      if (a.fn != b.fn) return false;
      break;
    default: break;
  }
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!(a.kids[i] == b.kids[i])) return false;
  return true;
}

namespace {

struct entry {
  std::string name;
  base_type type;
  bool writable;
};

class checker {
 public:
  checker(const top_env& env, bool build_funs) {
    if (build_funs) {
      for (const fun_def& f : env) add_fun(f);
    } else {
      // Contexts supplied externally (check_ro / check_rw): all functions
      // are visible, mirroring a fully checked environment.
      for (const fun_def& f : env) add_fun(f, /*check=*/false);
    }
  }

  std::vector<typed_fun> take_funs() { return std::move(funs_); }

  void push(const context& ctx, bool writable) {
    for (const auto& [n, t] : ctx) stack_.push_back({n, t, writable});
  }

  void seal() { barrier_ = stack_.size(); }

  typed_expr check(const expr& e, bool /*rw*/ = true) { return check_node(e); }

 private:
  std::vector<entry> stack_;
  size_t barrier_ = 0;  // slots below are read-only in the current judgement
  std::vector<typed_fun> funs_;
  std::map<std::string, uint32_t> fun_index_;

  void add_fun(const fun_def& f, bool check = true) {
    if (fun_index_.count(f.name))
      throw type_error("duplicate function name '" + f.name + "'", f.span, "ro");
    typed_fun tf;
    tf.name = f.name;
    tf.ret = f.ret;
    if (check) {
      std::vector<entry> saved_stack;
      size_t saved_barrier = barrier_;
      std::swap(saved_stack, stack_);
      for (const auto& [pn, pt] : f.params) {
        for (const entry& en : stack_)
          if (en.name == pn)
            throw type_error("duplicate parameter '" + pn + "' in '" + f.name + "'",
                             f.span, "ro");
        stack_.push_back({pn, pt, false});
      }
      barrier_ = stack_.size();  // body is a read-only judgement
      tf.body = check_node(f.body);
      if (tf.body.type != f.ret)
        throw type_error("body of '" + f.name + "' has type " +
                             type_name(tf.body.type) + ", declared " + type_name(f.ret),
                         f.span, "ro");
      std::swap(saved_stack, stack_);
      barrier_ = saved_barrier;
    }
    for (const auto& [pn, pt] : f.params) tf.params.push_back(pt);
    fun_index_[f.name] = static_cast<uint32_t>(funs_.size());
    funs_.push_back(std::move(tf));
  }

  [[noreturn]] void err(const expr& e, const std::string& msg) const {
    throw type_error(msg, e.span, barrier_ == stack_.size() ? "ro" : "rw");
  }

  const entry* lookup(const std::string& name, uint32_t& slot_out) const {
    for (size_t i = stack_.size(); i-- > 0;) {
      if (stack_[i].name == name) {
        slot_out = static_cast<uint32_t>(i);
        return &stack_[i];
      }
    }
    return nullptr;
  }

  typed_expr mk(tkind k, base_type t, const expr& src) {
    typed_expr n;
    n.k = k;
    n.type = t;
    n.span = src.span;
    return n;
  }

  // Checks a child in a pure (read-only) position: the whole current stack
  // is sealed for the duration.
  typed_expr check_pure(const expr& e) {
    size_t saved = barrier_;
    barrier_ = stack_.size();
    typed_expr r = check_node(e);
    barrier_ = saved;
    return r;
  }

  typed_expr want(const expr& e, base_type t, bool pure, const char* what) {
    typed_expr r = pure ? check_pure(e) : check_node(e);
    if (r.type != t)
      err(e, std::string(what) + " must have type " + type_name(t) + ", got " +
                 type_name(r.type));
    return r;
  }

  typed_expr check_node(const expr& e) {
    switch (e.k) {
      case ekind::var: {
        uint32_t slot;
        const entry* en = lookup(e.name, slot);
        if (!en) err(e, "unknown variable '" + e.name + "'");
        typed_expr n = mk(tkind::var, en->type, e);
        n.slot = slot;
        n.name = e.name;
        return n;
      }
      case ekind::lit_true:
      case ekind::lit_false: {
        typed_expr n = mk(tkind::lit_bool, base_type::boolean, e);
        n.bval = e.k == ekind::lit_true;
        return n;
      }
      case ekind::lit_int: {
        typed_expr n = mk(tkind::lit_int, base_type::integer, e);
        n.lit = e.lit;
        return n;
      }
      case ekind::skip: return mk(tkind::skip, base_type::unit, e);
      case ekind::coerce: {
        typed_expr n = mk(tkind::coerce, base_type::real, e);
        n.kids.push_back(want(e.kids[0], base_type::integer, true, "real(-) argument"));
        return n;
      }
      case ekind::pow2: {
        typed_expr n = mk(tkind::pow2, base_type::real, e);
        n.kids.push_back(want(e.kids[0], base_type::integer, true, "2^(-) exponent"));
        return n;
      }
      case ekind::arith:
      case ekind::int_op:
      case ekind::real_op: {
        typed_expr a = check_pure(e.kids[0]);
        typed_expr b = check_pure(e.kids[1]);
        if (a.type != b.type ||
            (a.type != base_type::integer && a.type != base_type::real))
          err(e, std::string("operands of '") +
                     (e.op == op_kind::add ? "+" : e.op == op_kind::sub ? "-" : "*") +
                     "' must both be int or both real, got " + type_name(a.type) +
                     " and " + type_name(b.type));
        if (e.k == ekind::int_op && a.type != base_type::integer)
          err(e, "integer operator applied to real operands");
        if (e.k == ekind::real_op && a.type != base_type::real)
          err(e, "real operator applied to int operands");
        typed_expr n = mk(a.type == base_type::integer ? tkind::int_op : tkind::real_op,
                          a.type, e);
        n.op = e.op;
        n.kids.push_back(std::move(a));
        n.kids.push_back(std::move(b));
        return n;
      }
      case ekind::neg: {
        typed_expr a = check_pure(e.kids[0]);
        if (a.type == base_type::integer) {
          typed_expr n = mk(tkind::int_op, base_type::integer, e);
          n.op = op_kind::sub;
          typed_expr zero = mk(tkind::lit_int, base_type::integer, e);
          zero.lit = 0;
          n.kids.push_back(std::move(zero));
          n.kids.push_back(std::move(a));
          return n;
        }
        if (a.type == base_type::real) {
          typed_expr n = mk(tkind::real_op, base_type::real, e);
          n.op = op_kind::sub;
          typed_expr zero = mk(tkind::coerce, base_type::real, e);
          typed_expr zl = mk(tkind::lit_int, base_type::integer, e);
          zl.lit = 0;
          zero.kids.push_back(std::move(zl));
          n.kids.push_back(std::move(zero));
          n.kids.push_back(std::move(a));
          return n;
        }
        err(e, std::string("operand of unary '-' must be int or real, got ") +
                   type_name(a.type));
      }
      case ekind::recip: {
        typed_expr n = mk(tkind::recip, base_type::real, e);
        n.kids.push_back(want(e.kids[0], base_type::real, true, "inv(-) argument"));
        return n;
      }
      case ekind::less:
      case ekind::int_lt:
      case ekind::real_lt: {
        typed_expr a = check_pure(e.kids[0]);
        typed_expr b = check_pure(e.kids[1]);
        if (a.type != b.type ||
            (a.type != base_type::integer && a.type != base_type::real))
          err(e, "operands of '<' must both be int or both real, got " +
                     std::string(type_name(a.type)) + " and " + type_name(b.type));
        if (e.k == ekind::int_lt && a.type != base_type::integer)
          err(e, "integer comparison applied to real operands");
        if (e.k == ekind::real_lt && a.type != base_type::real)
          err(e, "real comparison applied to int operands");
        typed_expr n = mk(a.type == base_type::integer ? tkind::int_lt : tkind::real_lt,
                          base_type::boolean, e);
        n.kids.push_back(std::move(a));
        n.kids.push_back(std::move(b));
        return n;
      }
      case ekind::int_eq: {
        typed_expr n = mk(tkind::int_eq, base_type::boolean, e);
        n.kids.push_back(want(e.kids[0], base_type::integer, true, "operand of '='"));
        n.kids.push_back(want(e.kids[1], base_type::integer, true, "operand of '='"));
        return n;
      }
      case ekind::lim: {
        // lim n. e — the index variable joins the read-only zone; the body
        // is itself a pure position.
        size_t saved = barrier_;
        barrier_ = stack_.size();
        stack_.push_back({e.name, base_type::integer, false});
        typed_expr body = check_node(e.kids[0]);
        stack_.pop_back();
        barrier_ = saved;
        if (body.type != base_type::real)
          err(e, std::string("limit body must have type real, got ") +
                     type_name(body.type));
        typed_expr n = mk(tkind::lim, base_type::real, e);
        n.name = e.name;
        n.slot = static_cast<uint32_t>(stack_.size());
        n.kids.push_back(std::move(body));
        return n;
      }
      case ekind::seq: {
        typed_expr a = check_node(e.kids[0]);
        if (a.type != base_type::unit)
          err(e.kids[0], std::string("left of ';' must have type unit, got ") +
                             type_name(a.type));
        typed_expr b = check_node(e.kids[1]);
        typed_expr n = mk(tkind::seq, b.type, e);
        n.kids.push_back(std::move(a));
        n.kids.push_back(std::move(b));
        return n;
      }
      case ekind::new_var: {
        typed_expr init = check_pure(e.kids[0]);
        stack_.push_back({e.name, init.type, true});
        typed_expr body = check_node(e.kids[1]);
        stack_.pop_back();
        typed_expr n = mk(tkind::new_var, body.type, e);
        n.name = e.name;
        n.slot = static_cast<uint32_t>(stack_.size());
        n.kids.push_back(std::move(init));
        n.kids.push_back(std::move(body));
        return n;
      }
      case ekind::assign: {
        uint32_t slot;
        const entry* en = lookup(e.name, slot);
        if (!en) err(e, "unknown variable '" + e.name + "'");
        if (slot < barrier_ || !en->writable)
          err(e, "variable '" + e.name + "' is read-only here");
        typed_expr rhs = check_pure(e.kids[0]);
        if (rhs.type != en->type)
          err(e, "assignment to '" + e.name + "' of type " + type_name(en->type) +
                     " from " + type_name(rhs.type));
        typed_expr n = mk(tkind::assign, base_type::unit, e);
        n.slot = slot;
        n.name = e.name;
        n.kids.push_back(std::move(rhs));
        return n;
      }
      case ekind::cond: {
        typed_expr c = want(e.kids[0], base_type::boolean, true, "'if' condition");
        typed_expr t = check_node(e.kids[1]);
        typed_expr f = check_node(e.kids[2]);
        if (t.type != f.type)
          err(e, std::string("'if' branches have different types: ") +
                     type_name(t.type) + " and " + type_name(f.type));
        typed_expr n = mk(tkind::cond, t.type, e);
        n.kids.push_back(std::move(c));
        n.kids.push_back(std::move(t));
        n.kids.push_back(std::move(f));
        return n;
      }
      case ekind::case_of: {
        typed_expr n = mk(tkind::case_of, base_type::unit, e);
        for (size_t i = 0; i + 1 < e.kids.size(); i += 2) {
          typed_expr g = want(e.kids[i], base_type::boolean, true, "'case' guard");
          typed_expr b = check_node(e.kids[i + 1]);
          if (i == 0) {
            n.type = b.type;
          } else if (b.type != n.type) {
            err(e, std::string("'case' branches have different types: ") +
                       type_name(n.type) + " and " + type_name(b.type));
          }
          n.kids.push_back(std::move(g));
          n.kids.push_back(std::move(b));
        }
        return n;
      }
      case ekind::while_do: {
        typed_expr c = want(e.kids[0], base_type::boolean, true, "'while' condition");
        typed_expr b = want(e.kids[1], base_type::unit, false, "'while' body");
        typed_expr n = mk(tkind::while_do, base_type::unit, e);
        n.kids.push_back(std::move(c));
        n.kids.push_back(std::move(b));
        return n;
      }
      case ekind::call: {
        auto it = fun_index_.find(e.name);
        if (it == fun_index_.end())
          err(e, "unknown function '" + e.name +
                     "' (functions may call only previously defined functions)");
        const typed_fun& f = funs_[it->second];
        if (f.params.size() != e.kids.size())
          err(e, "'" + e.name + "' expects " + std::to_string(f.params.size()) +
                     " argument(s), got " + std::to_string(e.kids.size()));
        typed_expr n = mk(tkind::call, f.ret, e);
        n.fn = it->second;
        n.name = e.name;
        for (size_t i = 0; i < e.kids.size(); ++i) {
          typed_expr a = check_pure(e.kids[i]);
          if (a.type != f.params[i])
            err(e.kids[i], "argument " + std::to_string(i + 1) + " of '" + e.name +
                               "' must have type " + type_name(f.params[i]) +
                               ", got " + type_name(a.type));
          n.kids.push_back(std::move(a));
        }
        return n;
      }
    }
    throw internal_fault("check_node: unhandled node kind");
  }
};

}  // namespace

base_type check_ro(const top_env& env, const context& gamma, const expr& e) {
  checker c(env, /*build_funs=*/false);
  c.push(gamma, false);
  c.seal();
  return c.check(e).type;
}

base_type check_rw(const top_env& env, const context& gamma, const context& delta,
                   const expr& e) {
  checker c(env, /*build_funs=*/false);
  c.push(gamma, false);
  c.seal();
  c.push(delta, true);
  return c.check(e).type;
}

void check_env(const top_env& env) { checker c(env, /*build_funs=*/true); }

typed_program elaborate(const program& p) {
  checker c(p.funs, /*build_funs=*/true);
  typed_program tp;
  tp.main = c.check(p.main);
  tp.funs = c.take_funs();
  return tp;
}

}  // namespace clerical
