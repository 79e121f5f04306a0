// SPDX-License-Identifier: Apache-2.0
//
// Arbitrary-precision dyadic rationals m * 2^e with directed rounding.
// Canonical form: mantissa odd, or mantissa == 0 and exponent == 0, so
// equal values have equal representations.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace clerical {

using bigint = boost::multiprecision::cpp_int;

// Fatal internal fault (evaluator bug or resource-range violation, not a
// user error).  The CLI maps this to exit code 1.
struct internal_fault : std::logic_error {
  using std::logic_error::logic_error;
};

enum class rounding { down, up };  // toward -inf / toward +inf

struct dyadic {
  bigint m;       // mantissa
  int64_t e = 0;  // exponent: value is m * 2^e

  dyadic() : m(0) {}
  dyadic(bigint mantissa, int64_t exponent);  // normalizes

  static dyadic from_int(const bigint& k) { return dyadic(k, 0); }
  static dyadic pow2(int64_t e) { return dyadic(1, e); }

  bool is_zero() const { return m == 0; }
  int sign() const { return m < 0 ? -1 : m == 0 ? 0 : 1; }
  dyadic negated() const;

  // Position of the leading bit: |value| < 2^top(), and top() is the least
  // such exponent.  Undefined on zero.
  int64_t top() const;
};

bool operator==(const dyadic& a, const dyadic& b);
bool operator<(const dyadic& a, const dyadic& b);
inline bool operator!=(const dyadic& a, const dyadic& b) { return !(a == b); }
inline bool operator<=(const dyadic& a, const dyadic& b) { return a == b || a < b; }

// Nearest dyadic with at most `bits` mantissa bits on the chosen side of x.
// round_dir(x, p, down) <= x <= round_dir(x, p, up), gap < one ulp of x at p.
dyadic round_dir(const dyadic& x, uint32_t bits, rounding dir);

// Exact arithmetic (mantissa width grows as needed).
dyadic dy_add(const dyadic& a, const dyadic& b);
dyadic dy_sub(const dyadic& a, const dyadic& b);
dyadic dy_mul(const dyadic& a, const dyadic& b);

// Directed-rounded arithmetic at a working precision: result has at most
// `bits` mantissa bits and bounds the exact result from the requested side.
// Short-circuits the exact sum when operand magnitudes are too far apart
// for the negligible term to survive rounding.
dyadic dy_add_dir(const dyadic& a, const dyadic& b, uint32_t bits, rounding dir);
dyadic dy_sub_dir(const dyadic& a, const dyadic& b, uint32_t bits, rounding dir);
dyadic dy_mul_dir(const dyadic& a, const dyadic& b, uint32_t bits, rounding dir);

// Directed-rounded reciprocal; fault on zero (callers test the sign first).
dyadic dy_recip_dir(const dyadic& x, uint32_t bits, rounding dir);

// floor(x * 10^d) as an integer; d >= 0.
bigint floor_scaled_pow10(const dyadic& x, uint32_t d);

std::string to_string(const dyadic& x);  // debugging form "m*2^e"

}  // namespace clerical
