// SPDX-License-Identifier: Apache-2.0
//
// Finite modified Plotkin powerdomain over a value type T.
//
// An element is either the error element, or a finite set of proper values
// together with a flag recording whether the divergence element (bottom) is
// present.  A non-error element must be nonempty (values or bottom); the
// empty set is reserved for error.  Bottom alone ({bottom}) is the least
// element of the order:
//
//   X <= Y  iff  X = Y, or (bottom in X and (Y = error or values(X) <=
//   values(Y)))
//
// Chains are sequences increasing in this order; the supremum of a chain is
// the union of the values if every link contains bottom, and otherwise the
// first bottom-free link (from which point the chain is constant).

#pragma once

#include <functional>
#include <set>
#include <vector>

#include "clerical/dyadic.hpp"  // internal_fault

namespace clerical {

template <typename T>
class power_set {
 public:
  using value_type = T;
  using value_set = std::set<T>;

  static power_set error() { return power_set(true, {}, false); }
  static power_set bottom() { return power_set(false, {}, true); }
  static power_set unit(T v) {
    std::set<T> s;
    s.insert(std::move(v));
    return power_set(false, std::move(s), false);
  }
  static power_set make(std::set<T> vals, bool bot) {
    if (vals.empty() && !bot)
      throw internal_fault("power_set: empty non-error element");
    return power_set(false, std::move(vals), bot);
  }

  bool is_error() const { return error_; }
  bool has_bottom() const { return !error_ && bottom_; }
  const std::set<T>& values() const { return vals_; }

  bool operator==(const power_set& o) const {
    return error_ == o.error_ && bottom_ == o.bottom_ && vals_ == o.vals_;
  }
  bool operator!=(const power_set& o) const { return !(*this == o); }

 private:
  power_set(bool err, std::set<T> vals, bool bot)
      : error_(err), vals_(std::move(vals)), bottom_(bot) {}

  bool error_;
  std::set<T> vals_;
  bool bottom_;
};

template <typename T>
power_set<T> pd_unit(T v) {
  return power_set<T>::unit(std::move(v));
}

// Kleisli extension: error if X is error or f hits error on any value of X;
// otherwise the union of the f-images, keeping bottom if X had it or any
// image does.
template <typename T, typename F>
auto pd_bind(const power_set<T>& x, F f) -> decltype(f(std::declval<const T&>())) {
  using R = decltype(f(std::declval<const T&>()));
  if (x.is_error()) return R::error();
  bool bot = x.has_bottom();
  typename R::value_set acc;
  for (const T& v : x.values()) {
    R y = f(v);
    if (y.is_error()) return R::error();
    bot = bot || y.has_bottom();
    acc.insert(y.values().begin(), y.values().end());
  }
  return R::make(std::move(acc), bot);
}

// Union, strict in error (the algebra operation of the monad).
template <typename T>
power_set<T> pd_strict_union(const power_set<T>& a, const power_set<T>& b) {
  if (a.is_error() || b.is_error()) return power_set<T>::error();
  std::set<T> vals = a.values();
  vals.insert(b.values().begin(), b.values().end());
  return power_set<T>::make(std::move(vals), a.has_bottom() || b.has_bottom());
}

template <typename T>
bool pd_leq(const power_set<T>& a, const power_set<T>& b) {
  if (a == b) return true;
  if (!a.has_bottom()) return false;
  if (b.is_error()) return true;
  return std::includes(b.values().begin(), b.values().end(), a.values().begin(),
                       a.values().end());
}

// Supremum of a finite chain prefix; the precondition (consecutive pd_leq)
// is asserted.
template <typename T>
power_set<T> pd_sup_chain(const std::vector<power_set<T>>& chain) {
  if (chain.empty()) throw internal_fault("pd_sup_chain: empty chain");
  for (size_t i = 0; i + 1 < chain.size(); ++i)
    if (!pd_leq(chain[i], chain[i + 1]))
      throw internal_fault("pd_sup_chain: argument is not a chain");
  std::set<T> acc;
  for (const power_set<T>& x : chain) {
    if (!x.has_bottom()) return x;  // chain is constant from here on
    acc.insert(x.values().begin(), x.values().end());
  }
  return power_set<T>::make(std::move(acc), true);
}

}  // namespace clerical
