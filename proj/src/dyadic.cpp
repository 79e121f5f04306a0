// SPDX-License-Identifier: Apache-2.0

#include "clerical/dyadic.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace clerical {

namespace {

// Exponents stay far inside int64 for sane programs; the margin catches
// runaway computations before mantissa alignment can exhaust memory.
constexpr int64_t exp_limit = int64_t(1) << 44;

int64_t checked_exp(int64_t e) {
  if (e > exp_limit || e < -exp_limit)
    throw internal_fault("dyadic exponent out of range");
  return e;
}

uint64_t bit_len(const bigint& m) {
  // msb() is 0-based; bit_len(0) taken as 0.
  return m == 0 ? 0 : boost::multiprecision::msb(boost::multiprecision::abs(m)) + 1;
}

}  // namespace

dyadic::dyadic(bigint mantissa, int64_t exponent) : m(std::move(mantissa)), e(exponent) {
  if (m == 0) {
    e = 0;
    return;
  }
  uint64_t tz = boost::multiprecision::lsb(boost::multiprecision::abs(m));
  if (tz > 0) m >>= static_cast<unsigned>(tz);
  e = checked_exp(e + static_cast<int64_t>(tz));
}

dyadic dyadic::negated() const {
  dyadic r;
  r.m = -m;
  r.e = e;
  return r;
}

int64_t dyadic::top() const {
  return checked_exp(e + static_cast<int64_t>(bit_len(m)));
}

bool operator==(const dyadic& a, const dyadic& b) {
  return a.m == b.m && a.e == b.e;  // canonical form
}

bool operator<(const dyadic& a, const dyadic& b) {
  int sa = a.sign(), sb = b.sign();
  if (sa != sb) return sa < sb;
  if (sa == 0) return false;
  // Same nonzero sign: compare leading-bit positions first so we never
  // shift by a huge exponent difference.
  int64_t ta = a.top(), tb = b.top();
  if (ta != tb) return sa > 0 ? ta < tb : tb < ta;
  // Tops equal: the alignment shift is bounded by the mantissa widths.
  int64_t d = a.e - b.e;
  bigint ma = a.m, mb = b.m;
  if (d > 0) ma <<= static_cast<unsigned>(d);
  else if (d < 0) mb <<= static_cast<unsigned>(-d);
  return ma < mb;
}

dyadic round_dir(const dyadic& x, uint32_t bits, rounding dir) {
  if (bits == 0) throw internal_fault("round_dir: zero precision");
  uint64_t len = x.m == 0 ? 0 : bit_len(x.m);
  if (len <= bits) return x;  // exact fit
  unsigned drop = static_cast<unsigned>(len - bits);
  bigint q = x.m >> drop;  // arithmetic shift: floors toward -inf
  bool inexact = (q << drop) != x.m;
  if (dir == rounding::up && inexact) ++q;
  return dyadic(std::move(q), checked_exp(x.e + drop));
}

dyadic dy_add(const dyadic& a, const dyadic& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  int64_t e = std::min(a.e, b.e);
  bigint ma = a.m << static_cast<unsigned>(a.e - e);
  bigint mb = b.m << static_cast<unsigned>(b.e - e);
  return dyadic(ma + mb, e);
}

dyadic dy_sub(const dyadic& a, const dyadic& b) { return dy_add(a, b.negated()); }

dyadic dy_mul(const dyadic& a, const dyadic& b) {
  if (a.is_zero() || b.is_zero()) return dyadic();
  return dyadic(a.m * b.m, checked_exp(a.e + b.e));
}

namespace {

dyadic add_dir(const dyadic& a, const dyadic& b, uint32_t bits, rounding dir) {
  if (a.is_zero()) return round_dir(b, bits, dir);
  if (b.is_zero()) return round_dir(a, bits, dir);
  const dyadic *big = &a, *tiny = &b;
  if (big->top() < tiny->top()) std::swap(big, tiny);
  // When the smaller operand sits entirely below the rounding cutoff of the
  // larger one, forming the exact sum would build a mantissa proportional to
  // the exponent gap just to round it away.  Bound the sum instead: if the
  // tiny term points against the rounding direction, rounding the dominant
  // term alone is already a valid bound; if it points with it, overshoot it
  // by half an ulp (which dominates |tiny|) and round.
  int64_t cutoff = big->top() - int64_t(bits);  // ulp exponent of the result
  if (tiny->top() <= cutoff - 2) {
    bool with_dir = (dir == rounding::up) == (tiny->sign() > 0);
    if (!with_dir) return round_dir(*big, bits, dir);
    dyadic step(dir == rounding::up ? 1 : -1, checked_exp(cutoff - 1));
    return round_dir(dy_add(*big, step), bits, dir);
  }
  return round_dir(dy_add(a, b), bits, dir);
}

}  // namespace

dyadic dy_add_dir(const dyadic& a, const dyadic& b, uint32_t bits, rounding dir) {
  return add_dir(a, b, bits, dir);
}

dyadic dy_sub_dir(const dyadic& a, const dyadic& b, uint32_t bits, rounding dir) {
  return add_dir(a, b.negated(), bits, dir);
}

dyadic dy_mul_dir(const dyadic& a, const dyadic& b, uint32_t bits, rounding dir) {
  return round_dir(dy_mul(a, b), bits, dir);  // product mantissa is bounded
}

dyadic dy_recip_dir(const dyadic& x, uint32_t bits, rounding dir) {
  if (x.is_zero()) throw internal_fault("dy_recip_dir: zero");
  // 1 / (m * 2^e) = (2^k / m) * 2^(-k-e); pick k so the quotient carries
  // bits+1 significant bits.
  bigint am = boost::multiprecision::abs(x.m);
  int64_t k = int64_t(bit_len(am)) + int64_t(bits) + 1;
  bigint num = bigint(1) << static_cast<unsigned>(k);
  bigint q, r;
  boost::multiprecision::divide_qr(num, am, q, r);
  bool inexact = r != 0;
  bool down = (dir == rounding::down);
  if (x.sign() > 0) {
    if (!down && inexact) ++q;  // ceil for upper bound
  } else {
    // 1/x negative: result is -(q or q+1) * 2^(-k-e)
    if (down && inexact) ++q;  // larger magnitude downward
    q = -q;
  }
  return round_dir(dyadic(std::move(q), checked_exp(-k - x.e)), bits, dir);
}

bigint floor_scaled_pow10(const dyadic& x, uint32_t d) {
  bigint scaled = x.m * boost::multiprecision::pow(bigint(10), d);
  if (x.e >= 0) return scaled << static_cast<unsigned>(x.e);
  // floor division by 2^-e, correct for negatives
  unsigned sh = static_cast<unsigned>(-x.e);
  bigint q = scaled >> sh;  // arithmetic shift floors
  return q;
}

std::string to_string(const dyadic& x) {
  return x.m.str() + "*2^" + std::to_string(x.e);
}

}  // namespace clerical
