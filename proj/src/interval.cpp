// SPDX-License-Identifier: Apache-2.0

#include "clerical/interval.hpp"

#include <array>

namespace clerical {

interval::interval(dyadic l, dyadic h) : lo(std::move(l)), hi(std::move(h)) {
  if (hi < lo) throw internal_fault("interval: lo > hi");
}

interval iv_add(const interval& a, const interval& b, precision p) {
  return interval(dy_add_dir(a.lo, b.lo, p.bits, rounding::down),
                  dy_add_dir(a.hi, b.hi, p.bits, rounding::up));
}

interval iv_sub(const interval& a, const interval& b, precision p) {
  return interval(dy_sub_dir(a.lo, b.hi, p.bits, rounding::down),
                  dy_sub_dir(a.hi, b.lo, p.bits, rounding::up));
}

interval iv_neg(const interval& a) {
  return interval(a.hi.negated(), a.lo.negated());
}

interval iv_mul(const interval& a, const interval& b, precision p) {
  // min/max over the four exact endpoint products, then round outward.
  std::array<dyadic, 4> c = {dy_mul(a.lo, b.lo), dy_mul(a.lo, b.hi),
                             dy_mul(a.hi, b.lo), dy_mul(a.hi, b.hi)};
  dyadic lo = c[0], hi = c[0];
  for (int i = 1; i < 4; ++i) {
    if (c[i] < lo) lo = c[i];
    if (hi < c[i]) hi = c[i];
  }
  return interval(round_dir(lo, p.bits, rounding::down),
                  round_dir(hi, p.bits, rounding::up));
}

std::optional<interval> iv_recip(const interval& a, precision p) {
  if (a.contains_zero()) return std::nullopt;
  // Sign-definite: 1/[lo,hi] = [1/hi, 1/lo].
  return interval(dy_recip_dir(a.hi, p.bits, rounding::down),
                  dy_recip_dir(a.lo, p.bits, rounding::up));
}

interval iv_pow2(const bigint& n) {
  // A one-bit mantissa always fits any precision, so the result is exact.
  constexpr int64_t range = int64_t(1) << 40;
  if (n > range || n < -range) throw internal_fault("iv_pow2: exponent out of range");
  return interval::point(dyadic::pow2(static_cast<int64_t>(n)));
}

interval iv_widen(const interval& a, const dyadic& eps) {
  if (eps.sign() < 0) throw internal_fault("iv_widen: eps must be nonnegative");
  return interval(dy_sub(a.lo, eps), dy_add(a.hi, eps));
}

order iv_compare(const interval& a, const interval& b) {
  if (a.hi < b.lo) return order::lt;
  if (b.hi < a.lo) return order::gt;
  return order::inconclusive;
}

namespace {

// Render c * 10^-d with exactly d fraction digits.
std::string render_scaled(bigint c, uint32_t d) {
  std::string sign;
  if (c < 0) {
    sign = "-";
    c = -c;
  }
  bigint cell = boost::multiprecision::pow(bigint(10), d);
  bigint ip = c / cell, fp = c % cell;
  std::string frac = fp.str();
  if (frac.size() < d) frac.insert(0, d - frac.size(), '0');
  return sign + ip.str() + "." + frac;
}

}  // namespace

std::optional<std::string> to_decimal(const interval& a, uint32_t d) {
  if (d == 0) throw internal_fault("to_decimal: d must be >= 1");
  // width >= 10^-d?  Compare width * 10^d >= 1 exactly.
  dyadic w = a.width();
  bigint scaled = w.m * boost::multiprecision::pow(bigint(10), d);
  bool too_wide;
  if (w.e >= 0) {
    too_wide = (scaled << static_cast<unsigned>(w.e)) >= 1;
  } else {
    too_wide = scaled >= (bigint(1) << static_cast<unsigned>(-w.e));
  }
  if (too_wide) return std::nullopt;
  bigint clo = floor_scaled_pow10(a.lo, d);
  bigint chi = floor_scaled_pow10(a.hi, d);
  if (clo == chi) return render_scaled(clo, d);  // one cell: truncated digits
  // Interval straddles a cell boundary but is narrower than a cell: round
  // the midpoint to the nearest cell; |r - s| <= width/2 + cell/2 < cell
  // for every r in a.  Round-half-up of mid*10^d = floor((2*mid*10^d+1)/2),
  // and 2*mid = lo + hi exactly.
  bigint twice = floor_scaled_pow10(dy_add(a.lo, a.hi), d);
  bigint c = (twice + 1) >> 1;
  return render_scaled(c, d);
}

}  // namespace clerical
