// SPDX-License-Identifier: Apache-2.0
//
// Closed dyadic intervals with outward rounding at a working precision.
// Every operation returns an interval containing the exact image of its
// argument intervals; endpoints carry at most `precision.bits` mantissa
// bits (inputs may be wider, e.g. exact integer coercions).

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "clerical/dyadic.hpp"

namespace clerical {

struct precision {
  uint32_t bits = 60;  // invariant: >= 2
};

struct interval {
  dyadic lo, hi;  // invariant: lo <= hi

  interval() = default;
  interval(dyadic l, dyadic h);

  static interval point(const dyadic& d) { return interval(d, d); }
  static interval from_int(const bigint& k) { return point(dyadic::from_int(k)); }

  // hi - lo, computed exactly.
  dyadic width() const { return dy_sub(hi, lo); }
  bool contains_zero() const { return lo.sign() <= 0 && hi.sign() >= 0; }
};

interval iv_add(const interval& a, const interval& b, precision p);
interval iv_sub(const interval& a, const interval& b, precision p);
interval iv_mul(const interval& a, const interval& b, precision p);
interval iv_neg(const interval& a);  // exact

// Reciprocal; empty when the interval contains zero (the caller signals
// precision loss and retries wider).
std::optional<interval> iv_recip(const interval& a, precision p);

// 2^n as an exact point interval.
interval iv_pow2(const bigint& n);

// Widen both endpoints outward by eps >= 0, exactly (no rounding): used by
// the limit rule, whose error bound must not be eroded.
interval iv_widen(const interval& a, const dyadic& eps);

enum class order { lt, gt, inconclusive };

// a < b iff a.hi < b.lo; a > b iff b.hi < a.lo; otherwise the intervals
// overlap and the comparison is inconclusive at this precision.
order iv_compare(const interval& a, const interval& b);

// Decimal rendering with exactly d fraction digits such that every r in a
// satisfies |r - value(s)| < 10^-d; empty when width(a) >= 10^-d.  When the
// interval fits inside one 10^-d cell the output is that cell's truncated
// digits, so sufficiently tight intervals print the exact leading digits.
std::optional<std::string> to_decimal(const interval& a, uint32_t d);

}  // namespace clerical
