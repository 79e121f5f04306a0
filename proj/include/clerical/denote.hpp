// SPDX-License-Identifier: Apache-2.0
//
// Exact denotational reference for the limit-free fragment.  Values are
// exact (unit / bool / arbitrary integer / arbitrary rational) and results
// are finite powerdomain elements, so this is an independent oracle for the
// interval evaluator: every terminating evaluator run must land inside the
// denotation computed here.
//
// while loops are interpreted by the k-th Kleene iterate of their loop
// functional, where k is the supplied fuel: the approximant still carrying
// bottom wherever the loop needs more than k condition evaluations.  This
// matches the evaluator's per-entry fuel bound exactly.

#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "clerical/powerdomain.hpp"
#include "clerical/typecheck.hpp"

namespace clerical {

using rational = boost::multiprecision::cpp_rational;

// Exact semantic value: () | bool | integer | rational (reals restricted to
// the rationals, which is all the fragment can produce).
using frag_value = std::variant<std::monostate, bool, bigint, rational>;

using frag_state = std::vector<frag_value>;          // writable slots
using state_val = std::pair<frag_state, frag_value>;

// Thrown when denotation reaches a lim node (not part of the fragment).
struct fragment_violation : std::runtime_error {
  source_span span;
  fragment_violation(std::string msg, source_span s)
      : std::runtime_error(std::move(msg)), span(s) {}
};

// Span of the first lim, if any (lim-free programs are the fragment).
std::optional<source_span> find_lim(const typed_expr& e);
std::optional<source_span> find_lim(const typed_program& p);

// Γ ⊢ro e — pure denotation; `ro` holds the values of every slot in scope.
power_set<frag_value> denote_ro(const typed_program& p, const typed_expr& e,
                                const frag_state& ro, uint64_t fuel);

// Γ;Δ ⊢rw e — command denotation from writable state `rw`; results pair the
// final writable state with the value.
power_set<state_val> denote_rw(const typed_program& p, const typed_expr& e,
                               const frag_state& ro, const frag_state& rw,
                               uint64_t fuel);

// Denotation of the whole program's main expression from the empty state.
power_set<frag_value> denote(const typed_program& p, uint64_t fuel);

// The first k+1 approximants W^0 .. W^k of the loop functional of a
// while node, each evaluated at the probe state `rw`.  Consecutive entries
// are ordered by pd_leq (tested invariant).
std::vector<power_set<state_val>> while_chain(const typed_program& p,
                                              const typed_expr& while_node,
                                              const frag_state& ro,
                                              const frag_state& rw, uint64_t k);

// Canonical rendering: "()", "true", "-7", "3/2"; sets as "{v1, v2, ⊥}" in
// ascending value order with bottom last, or "error".
std::string to_string(const frag_value& v);
std::string to_string(const power_set<frag_value>& x);

}  // namespace clerical
