// SPDX-License-Identifier: Apache-2.0

#include "clerical/eval.hpp"

#include <algorithm>
#include <numeric>

namespace clerical {

namespace {

// Thrown when a guard attempt exhausts its step budget; carries the limit
// that fired so nested schedulers can tell their own budget from an
// enclosing one.
struct yield_signal {
  uint64_t limit;
};

const bool& val_bool(const value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  throw internal_fault("eval: expected bool");
}
const bigint& val_int(const value& v) {
  if (const bigint* k = std::get_if<bigint>(&v)) return *k;
  throw internal_fault("eval: expected int");
}
const interval& val_real(const value& v) {
  if (const interval* r = std::get_if<interval>(&v)) return *r;
  throw internal_fault("eval: expected real");
}

class evaluator {
 public:
  evaluator(const typed_program& p, const eval_config& cfg)
      : prog_(p), cfg_(cfg), rng_(cfg.scheduler_seed.value_or(0)) {}

  outcome run(const typed_expr& e, store& s) { return eval_node(e, s); }

 private:
  const typed_program& prog_;
  const eval_config& cfg_;
  std::mt19937_64 rng_;
  uint64_t steps_ = 0;
  uint64_t active_limit_ = UINT64_MAX;
  uint32_t lim_depth_ = 0;

  void step() {
    if (++steps_ > active_limit_) throw yield_signal{active_limit_};
  }

  struct depth_scope {
    uint32_t& d;
    explicit depth_scope(uint32_t& depth) : d(depth) { ++d; }
    ~depth_scope() { --d; }
  };

  struct budget_scope {
    evaluator& ev;
    uint64_t saved;
    uint64_t mine;
    budget_scope(evaluator& e, uint64_t budget) : ev(e), saved(e.active_limit_) {
      uint64_t lim = e.steps_ + budget;
      mine = std::min(saved, lim);
      ev.active_limit_ = mine;
    }
    ~budget_scope() { ev.active_limit_ = saved; }
  };

  outcome eval_node(const typed_expr& e, store& s) {
    step();
    switch (e.k) {
      case tkind::var:
        if (e.slot >= s.slots.size()) throw internal_fault("eval: slot out of range");
        return outcome::done(s.slots[e.slot]);
      case tkind::lit_bool: return outcome::done(value(e.bval));
      case tkind::lit_int: return outcome::done(value(e.lit));
      case tkind::skip: return outcome::done(value(std::monostate{}));
      case tkind::coerce: {
        outcome a = eval_node(e.kids[0], s);
        if (!a.is_done()) return a;
        return outcome::done(value(interval::from_int(val_int(a.v))));
      }
      case tkind::pow2: {
        outcome a = eval_node(e.kids[0], s);
        if (!a.is_done()) return a;
        return outcome::done(value(iv_pow2(val_int(a.v))));
      }
      case tkind::int_op: {
        outcome a = eval_node(e.kids[0], s);
        if (!a.is_done()) return a;
        outcome b = eval_node(e.kids[1], s);
        if (!b.is_done()) return b;
        const bigint &x = val_int(a.v), &y = val_int(b.v);
        bigint r = e.op == op_kind::add ? bigint(x + y)
                   : e.op == op_kind::sub ? bigint(x - y)
                                          : bigint(x * y);
        return outcome::done(value(std::move(r)));
      }
      case tkind::real_op: {
        outcome a = eval_node(e.kids[0], s);
        if (!a.is_done()) return a;
        outcome b = eval_node(e.kids[1], s);
        if (!b.is_done()) return b;
        const interval &x = val_real(a.v), &y = val_real(b.v);
        interval r = e.op == op_kind::add ? iv_add(x, y, cfg_.prec)
                     : e.op == op_kind::sub ? iv_sub(x, y, cfg_.prec)
                                            : iv_mul(x, y, cfg_.prec);
        return outcome::done(value(std::move(r)));
      }
      case tkind::recip: {
        outcome a = eval_node(e.kids[0], s);
        if (!a.is_done()) return a;
        std::optional<interval> r = iv_recip(val_real(a.v), cfg_.prec);
        if (!r) return outcome::signal(outcome_kind::precision_loss);
        return outcome::done(value(std::move(*r)));
      }
      case tkind::int_eq:
      case tkind::int_lt: {
        outcome a = eval_node(e.kids[0], s);
        if (!a.is_done()) return a;
        outcome b = eval_node(e.kids[1], s);
        if (!b.is_done()) return b;
        bool r = e.k == tkind::int_eq ? val_int(a.v) == val_int(b.v)
                                      : val_int(a.v) < val_int(b.v);
        return outcome::done(value(r));
      }
      case tkind::real_lt: {
        outcome a = eval_node(e.kids[0], s);
        if (!a.is_done()) return a;
        outcome b = eval_node(e.kids[1], s);
        if (!b.is_done()) return b;
        switch (iv_compare(val_real(a.v), val_real(b.v))) {
          case order::lt: return outcome::done(value(true));
          case order::gt: return outcome::done(value(false));
          case order::inconclusive:
            return outcome::signal(outcome_kind::precision_loss);
        }
        throw internal_fault("eval: unreachable");
      }
      case tkind::lim: return eval_limit(e, s);
      case tkind::seq: {
        outcome a = eval_node(e.kids[0], s);
        if (!a.is_done()) return a;
        return eval_node(e.kids[1], s);
      }
      case tkind::new_var: {
        outcome init = eval_node(e.kids[0], s);
        if (!init.is_done()) return init;
        s.slots.push_back(std::move(init.v));
        outcome body = eval_node(e.kids[1], s);
        s.slots.pop_back();
        return body;
      }
      case tkind::assign: {
        outcome rhs = eval_node(e.kids[0], s);
        if (!rhs.is_done()) return rhs;
        if (e.slot >= s.slots.size()) throw internal_fault("eval: assign slot");
        s.slots[e.slot] = std::move(rhs.v);
        return outcome::done(value(std::monostate{}));
      }
      case tkind::cond: {
        outcome c = eval_node(e.kids[0], s);
        if (!c.is_done()) return c;
        return eval_node(e.kids[val_bool(c.v) ? 1 : 2], s);
      }
      case tkind::case_of: return run_case(e, s);
      case tkind::while_do: {
        uint64_t cond_evals = 0;
        for (;;) {
          if (cfg_.fuel && cond_evals == *cfg_.fuel)
            return outcome::signal(outcome_kind::fuel_exhausted);
          ++cond_evals;
          outcome c = eval_node(e.kids[0], s);
          if (!c.is_done()) return c;
          if (!val_bool(c.v)) return outcome::done(value(std::monostate{}));
          outcome b = eval_node(e.kids[1], s);
          if (!b.is_done()) return b;
        }
      }
      case tkind::call: {
        store callee;
        callee.slots.reserve(e.kids.size());
        for (const typed_expr& arg : e.kids) {
          outcome a = eval_node(arg, s);
          if (!a.is_done()) return a;
          callee.slots.push_back(std::move(a.v));
        }
        return eval_node(prog_.funs.at(e.fn).body, callee);
      }
    }
    throw internal_fault("eval: unhandled node kind");
  }

  // lim n. e — evaluate the body at index n and widen by 2^-n, the body's
  // guaranteed distance from the limit value.  The index must lag the
  // working precision: the body settles comparisons at scale 2^-n, which
  // costs n bits plus rounding slop, so an index growing as fast as p
  // itself would stay undecidable at every precision and the restart loop
  // would never terminate.  Nested limits must lag each other the same way
  // (an enclosing limit takes scale-2^-n decisions on values the inner
  // limit computed, so the inner one needs a strict accuracy surplus).
  // Hence n(depth) = p - p/2^(depth+1) + offset: depth 0 gets p/2, depth 1
  // gets 3p/4, and every adjacent pair keeps a gap of p/2^(depth+2), which
  // grows without bound as the schedule raises p.  Restarts are then driven
  // only by the demanded output width.  A deadlock inside the body converts
  // to precision loss: at a higher precision the index moves, so the guards
  // may revive.
  outcome eval_limit(const typed_expr& e, store& s) {
    int64_t p = int64_t(cfg_.prec.bits);
    uint32_t shift = lim_depth_ + 1 < 62 ? lim_depth_ + 1 : 62;
    int64_t n = p - (p >> shift) + cfg_.limit_index_offset;
    if (n < 1) n = 1;
    s.slots.push_back(value(bigint(n)));
    outcome body = [&] {
      depth_scope inner(lim_depth_);
      return eval_node(e.kids[0], s);
    }();
    s.slots.pop_back();
    if (body.k == outcome_kind::deadlock)
      return outcome::signal(outcome_kind::precision_loss);
    if (!body.is_done()) return body;
    return outcome::done(value(iv_widen(val_real(body.v), dyadic::pow2(-n))));
  }

  outcome run_case(const typed_expr& e, store& s) {
    const size_t nb = e.kids.size() / 2;
    enum class gst { live, f, never, incl, fuel };
    std::vector<gst> st(nb, gst::live);
    std::vector<uint64_t> frontier(nb, 0);
    std::vector<uint32_t> order(nb);
    std::iota(order.begin(), order.end(), 0);
    if (cfg_.scheduler_seed) std::shuffle(order.begin(), order.end(), rng_);

    for (uint64_t round = 1;; ++round) {
      bool any_live = false;
      for (uint32_t idx : order) {
        if (st[idx] != gst::live) continue;
        store snap = s;  // guards are pure; attempts replay on a snapshot
        bool terminal = true;
        bool commit = false;
        uint64_t budget = frontier[idx] + cfg_.guard_step_budget;
        {
          budget_scope scope(*this, budget);
          try {
            outcome g = eval_node(e.kids[2 * idx], snap);
            switch (g.k) {
              case outcome_kind::done:
                if (val_bool(g.v)) commit = true;
                else st[idx] = gst::f;
                break;
              case outcome_kind::precision_loss: st[idx] = gst::incl; break;
              case outcome_kind::deadlock: st[idx] = gst::never; break;
              case outcome_kind::fuel_exhausted: st[idx] = gst::fuel; break;
            }
          } catch (const yield_signal& y) {
            if (y.limit != scope.mine) throw;  // an enclosing budget fired
            frontier[idx] += cfg_.guard_step_budget;
            terminal = false;
            any_live = true;
          }
        }
        if (cfg_.trace) cfg_.trace->polls.push_back({idx, round, terminal});
        // Body of the winning branch runs on the live store, outside the
        // guard's budget.
        if (commit) return eval_node(e.kids[2 * idx + 1], s);
      }
      if (!any_live) {
        bool some_incl = false, some_fuel = false;
        for (gst g : st) {
          some_incl = some_incl || g == gst::incl;
          some_fuel = some_fuel || g == gst::fuel;
        }
        if (some_incl) return outcome::signal(outcome_kind::precision_loss);
        if (some_fuel) return outcome::signal(outcome_kind::fuel_exhausted);
        return outcome::signal(outcome_kind::deadlock);
      }
    }
  }
};

}  // namespace

outcome eval(const typed_program& p, const typed_expr& e, store& s,
             const eval_config& cfg) {
  return evaluator(p, cfg).run(e, s);
}

uint32_t next_precision(uint32_t p) {
  uint64_t next = (uint64_t(5) * p + 3) / 4 + 32;  // ceil(1.25 p) + 32
  return next > UINT32_MAX ? UINT32_MAX : static_cast<uint32_t>(next);
}

run_result run_with_restarts(const typed_program& p, const run_options& opts,
                             run_report* report) {
  uint32_t prec = std::min(opts.precision_start, opts.max_precision);
  for (;;) {
    eval_config cfg;
    cfg.prec.bits = prec;
    cfg.guard_step_budget = opts.guard_step_budget;
    cfg.fuel = opts.fuel;
    cfg.scheduler_seed = opts.scheduler_seed;
    if (report) report->precisions_tried.push_back(prec);

    store s;
    outcome r = eval(p, p.main, s, cfg);
    switch (r.k) {
      case outcome_kind::done: {
        if (const interval* iv = std::get_if<interval>(&r.v)) {
          if (std::optional<std::string> txt = to_decimal(*iv, opts.digits))
            return *txt;
          break;  // not tight enough: restart wider
        }
        if (const bool* b = std::get_if<bool>(&r.v)) return std::string(*b ? "true" : "false");
        if (const bigint* k = std::get_if<bigint>(&r.v)) return k->str();
        return std::string("()");
      }
      case outcome_kind::precision_loss: break;  // restart wider
      case outcome_kind::deadlock: return diagnostic{failure::deadlock, prec};
      case outcome_kind::fuel_exhausted:
        return diagnostic{failure::fuel_exhausted, prec};
    }
    if (prec >= opts.max_precision)
      return diagnostic{failure::precision_cap, prec};
    prec = std::min(next_precision(prec), opts.max_precision);
  }
}

}  // namespace clerical
