// SPDX-License-Identifier: Apache-2.0

#include "clerical/denote.hpp"

#include <sstream>

namespace clerical {

namespace {

using ps_val = power_set<frag_value>;
using ps_sv = power_set<state_val>;

const bool& as_bool(const frag_value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  throw internal_fault("denote: expected bool value");
}
const bigint& as_int(const frag_value& v) {
  if (const bigint* k = std::get_if<bigint>(&v)) return *k;
  throw internal_fault("denote: expected int value");
}
const rational& as_rat(const frag_value& v) {
  if (const rational* r = std::get_if<rational>(&v)) return *r;
  throw internal_fault("denote: expected real value");
}

struct ctx {
  const typed_program& prog;
  uint64_t fuel;
};

ps_val den_ro(const ctx& c, const typed_expr& e, const frag_state& ro);
ps_sv den_rw(const ctx& c, const typed_expr& e, const frag_state& ro,
             const frag_state& rw);

frag_value pow2_rat(const bigint& k) {
  constexpr int64_t range = 1 << 20;
  if (k > range || k < -range) throw internal_fault("denote: 2^k exponent out of range");
  if (k >= 0) return rational(bigint(1) << static_cast<unsigned>(k));
  return rational(1, bigint(1) << static_cast<unsigned>(-bigint(k).convert_to<int64_t>()));
}

ps_val den_ro(const ctx& c, const typed_expr& e, const frag_state& ro) {
  switch (e.k) {
    case tkind::var:
      if (e.slot >= ro.size()) throw internal_fault("denote: slot out of range");
      return pd_unit(ro[e.slot]);
    case tkind::lit_bool: return pd_unit(frag_value(e.bval));
    case tkind::lit_int: return pd_unit(frag_value(e.lit));
    case tkind::skip: return pd_unit(frag_value(std::monostate{}));
    case tkind::coerce:
      return pd_bind(den_ro(c, e.kids[0], ro), [](const frag_value& v) {
        return pd_unit(frag_value(rational(as_int(v))));
      });
    case tkind::pow2:
      return pd_bind(den_ro(c, e.kids[0], ro), [](const frag_value& v) {
        return pd_unit(pow2_rat(as_int(v)));
      });
    case tkind::int_op:
      return pd_bind(den_ro(c, e.kids[0], ro), [&](const frag_value& a) {
        return pd_bind(den_ro(c, e.kids[1], ro), [&](const frag_value& b) {
          const bigint &x = as_int(a), &y = as_int(b);
          bigint r = e.op == op_kind::add ? bigint(x + y)
                     : e.op == op_kind::sub ? bigint(x - y)
                                            : bigint(x * y);
          return pd_unit(frag_value(std::move(r)));
        });
      });
    case tkind::real_op:
      return pd_bind(den_ro(c, e.kids[0], ro), [&](const frag_value& a) {
        return pd_bind(den_ro(c, e.kids[1], ro), [&](const frag_value& b) {
          const rational &x = as_rat(a), &y = as_rat(b);
          rational r = e.op == op_kind::add ? rational(x + y)
                       : e.op == op_kind::sub ? rational(x - y)
                                              : rational(x * y);
          return pd_unit(frag_value(std::move(r)));
        });
      });
    case tkind::recip:
      return pd_bind(den_ro(c, e.kids[0], ro), [](const frag_value& v) {
        const rational& x = as_rat(v);
        if (x == 0) return ps_val::bottom();  // 1/0 diverges
        return pd_unit(frag_value(rational(1 / x)));
      });
    case tkind::int_eq:
    case tkind::int_lt:
      return pd_bind(den_ro(c, e.kids[0], ro), [&](const frag_value& a) {
        return pd_bind(den_ro(c, e.kids[1], ro), [&](const frag_value& b) {
          bool r = e.k == tkind::int_eq ? as_int(a) == as_int(b) : as_int(a) < as_int(b);
          return pd_unit(frag_value(r));
        });
      });
    case tkind::real_lt:
      return pd_bind(den_ro(c, e.kids[0], ro), [&](const frag_value& a) {
        return pd_bind(den_ro(c, e.kids[1], ro), [&](const frag_value& b) {
          const rational &x = as_rat(a), &y = as_rat(b);
          if (x == y) return ps_val::bottom();  // equality is undecidable
          return pd_unit(frag_value(x < y));
        });
      });
    case tkind::call: {
      // Call-by-value via monadic pairing of the argument denotations.
      power_set<frag_state> tuples = pd_unit(frag_state{});
      for (const typed_expr& arg : e.kids) {
        tuples = pd_bind(tuples, [&](const frag_state& tup) {
          return pd_bind(den_ro(c, arg, ro), [&](const frag_value& v) {
            frag_state t2 = tup;
            t2.push_back(v);
            return pd_unit(std::move(t2));
          });
        });
      }
      const typed_fun& f = c.prog.funs.at(e.fn);
      return pd_bind(tuples, [&](const frag_state& args) {
        return den_ro(c, f.body, args);
      });
    }
    case tkind::lim:
      throw fragment_violation("lim is outside the finite fragment", e.span);
    default:
      // Command form in a pure position: run it with an empty writable zone
      // and project the value.
      return pd_bind(den_rw(c, e, ro, {}), [](const state_val& sv) {
        return pd_unit(sv.second);
      });
  }
}

ps_sv den_rw(const ctx& c, const typed_expr& e, const frag_state& ro,
             const frag_state& rw) {
  auto merged = [&]() {
    frag_state m = ro;
    m.insert(m.end(), rw.begin(), rw.end());
    return m;
  };
  switch (e.k) {
    case tkind::seq:
      return pd_bind(den_rw(c, e.kids[0], ro, rw), [&](const state_val& sv) {
        return den_rw(c, e.kids[1], ro, sv.first);
      });
    case tkind::new_var:
      return pd_bind(den_ro(c, e.kids[0], merged()), [&](const frag_value& v) {
        frag_state rw2 = rw;
        rw2.push_back(v);
        return pd_bind(den_rw(c, e.kids[1], ro, rw2), [&](const state_val& sv) {
          frag_state out = sv.first;
          out.pop_back();  // local leaves scope
          return pd_unit(state_val{std::move(out), sv.second});
        });
      });
    case tkind::assign:
      return pd_bind(den_ro(c, e.kids[0], merged()), [&](const frag_value& v) {
        if (e.slot < ro.size() || e.slot - ro.size() >= rw.size())
          throw internal_fault("denote: assignment outside writable zone");
        frag_state out = rw;
        out[e.slot - ro.size()] = v;
        return pd_unit(state_val{std::move(out), frag_value(std::monostate{})});
      });
    case tkind::cond:
      return pd_bind(den_ro(c, e.kids[0], merged()), [&](const frag_value& b) {
        return den_rw(c, e.kids[as_bool(b) ? 1 : 2], ro, rw);
      });
    case tkind::case_of: {
      // Erroneous if any guard errs, or a fireable branch errs.  Otherwise
      // the union of the fireable branches, with bottom unless some guard
      // denotes exactly {true}.
      size_t nb = e.kids.size() / 2;
      std::vector<ps_val> guards;
      guards.reserve(nb);
      for (size_t i = 0; i < nb; ++i) {
        ps_val g = den_ro(c, e.kids[2 * i], merged());
        if (g.is_error()) return ps_sv::error();
        guards.push_back(std::move(g));
      }
      ps_sv::value_set acc;
      bool bot = false;
      bool some_certain = false;  // some guard is exactly {true}
      const ps_val certainly_true = pd_unit(frag_value(true));
      for (size_t i = 0; i < nb; ++i) {
        if (guards[i] == certainly_true) some_certain = true;
        if (guards[i].values().count(frag_value(true))) {
          ps_sv b = den_rw(c, e.kids[2 * i + 1], ro, rw);
          if (b.is_error()) return ps_sv::error();
          bot = bot || b.has_bottom();
          acc.insert(b.values().begin(), b.values().end());
        }
      }
      if (!some_certain) bot = true;
      return ps_sv::make(std::move(acc), bot);
    }
    case tkind::while_do: {
      // W^fuel(const bottom) at the current state.
      std::function<ps_sv(uint64_t, const frag_state&)> w =
          [&](uint64_t k, const frag_state& d) -> ps_sv {
        if (k == 0) return ps_sv::bottom();
        frag_state m = ro;
        m.insert(m.end(), d.begin(), d.end());
        return pd_bind(den_ro(c, e.kids[0], m), [&](const frag_value& b) {
          if (!as_bool(b))
            return pd_unit(state_val{d, frag_value(std::monostate{})});
          return pd_bind(den_rw(c, e.kids[1], ro, d), [&](const state_val& sv) {
            return w(k - 1, sv.first);
          });
        });
      };
      return w(c.fuel, rw);
    }
    default:
      // Pure form as a command: evaluate read-only, state unchanged.
      return pd_bind(den_ro(c, e, merged()), [&](const frag_value& v) {
        return pd_unit(state_val{rw, v});
      });
  }
}

}  // namespace

std::optional<source_span> find_lim(const typed_expr& e) {
  if (e.k == tkind::lim) return e.span;
  for (const typed_expr& kid : e.kids)
    if (auto s = find_lim(kid)) return s;
  return std::nullopt;
}

std::optional<source_span> find_lim(const typed_program& p) {
  for (const typed_fun& f : p.funs)
    if (auto s = find_lim(f.body)) return s;
  return find_lim(p.main);
}

power_set<frag_value> denote_ro(const typed_program& p, const typed_expr& e,
                                const frag_state& ro, uint64_t fuel) {
  return den_ro(ctx{p, fuel}, e, ro);
}

power_set<state_val> denote_rw(const typed_program& p, const typed_expr& e,
                               const frag_state& ro, const frag_state& rw,
                               uint64_t fuel) {
  return den_rw(ctx{p, fuel}, e, ro, rw);
}

power_set<frag_value> denote(const typed_program& p, uint64_t fuel) {
  return den_ro(ctx{p, fuel}, p.main, {});
}

std::vector<power_set<state_val>> while_chain(const typed_program& p,
                                              const typed_expr& while_node,
                                              const frag_state& ro,
                                              const frag_state& rw, uint64_t k) {
  std::vector<ps_sv> out;
  for (uint64_t i = 0; i <= k; ++i) {
    ctx c{p, i};
    out.push_back(den_rw(c, while_node, ro, rw));
  }
  return out;
}

std::string to_string(const frag_value& v) {
  struct visitor {
    std::string operator()(std::monostate) const { return "()"; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const bigint& k) const { return k.str(); }
    std::string operator()(const rational& r) const {
      if (boost::multiprecision::denominator(r) == 1)
        return boost::multiprecision::numerator(r).str();
      return boost::multiprecision::numerator(r).str() + "/" +
             boost::multiprecision::denominator(r).str();
    }
  };
  return std::visit(visitor{}, v);
}

std::string to_string(const power_set<frag_value>& x) {
  if (x.is_error()) return "error";
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const frag_value& v : x.values()) {
    if (!first) os << ", ";
    first = false;
    os << to_string(v);
  }
  if (x.has_bottom()) {
    if (!first) os << ", ";
    os << "\xE2\x8A\xA5";  // UTF-8 for the bottom sign
  }
  os << "}";
  return os.str();
}

}  // namespace clerical
