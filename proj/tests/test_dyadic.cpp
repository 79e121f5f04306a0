// SPDX-License-Identifier: Apache-2.0
//
// Dyadic arithmetic against an exact rational oracle: every directed
// operation must bound the exact value from the requested side and land
// within one ulp of it, and exact operations must match the oracle bit for
// bit.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "clerical/dyadic.hpp"

using namespace clerical;
using rational = boost::multiprecision::cpp_rational;

namespace {

rational to_rat(const dyadic& x) {
  if (x.e >= 0) return rational(x.m * (bigint(1) << x.e));
  return rational(x.m, bigint(1) << -x.e);
}

dyadic random_dyadic(std::mt19937_64& rng) {
  std::uniform_int_distribution<int64_t> dm(-(int64_t(1) << 40), int64_t(1) << 40);
  std::uniform_int_distribution<int64_t> de(-50, 50);
  return dyadic(bigint(dm(rng)), de(rng));
}

bigint abs_big(bigint x) { return x < 0 ? bigint(-x) : x; }

rational rat_abs(const rational& x) { return x < 0 ? rational(-x) : x; }

// Mantissa must fit the working precision.
void check_fits(const dyadic& x, uint32_t bits) {
  CHECK(abs_big(x.m) < (bigint(1) << bits));
}

}  // namespace

TEST_CASE("construction normalizes to odd mantissa or canonical zero") {
  dyadic a(bigint(12), 0);  // 12 = 3 * 2^2
  CHECK(a.m == 3);
  CHECK(a.e == 2);
  dyadic z(bigint(0), 77);
  CHECK(z.m == 0);
  CHECK(z.e == 0);
  CHECK(z.is_zero());
  dyadic n(bigint(-8), -1);  // -8 * 2^-1 = -1 * 2^2
  CHECK(n.m == -1);
  CHECK(n.e == 2);
  CHECK(dyadic(bigint(7), 3) == dyadic(bigint(56), 0));
}

TEST_CASE("ordering matches rational ordering") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 2000; ++i) {
    dyadic a = random_dyadic(rng), b = random_dyadic(rng);
    CHECK((a < b) == (to_rat(a) < to_rat(b)));
    CHECK((a == b) == (to_rat(a) == to_rat(b)));
  }
}

TEST_CASE("top bounds the magnitude tightly") {
  CHECK(dyadic(bigint(1), 0).top() == 1);   // 1 < 2^1
  CHECK(dyadic(bigint(3), 0).top() == 2);   // 3 < 2^2
  CHECK(dyadic(bigint(4), 0).top() == 3);   // 4 < 2^3
  CHECK(dyadic(bigint(-5), -3).top() == 0); // 5/8 < 2^0
  std::mt19937_64 rng(2);
  for (int i = 0; i < 2000; ++i) {
    dyadic a = random_dyadic(rng);
    if (a.is_zero()) continue;
    int64_t t = a.top();
    rational v = rat_abs(to_rat(a));
    rational hi = to_rat(dyadic::pow2(t));
    rational lo = to_rat(dyadic::pow2(t - 1));
    CHECK(v < hi);
    CHECK(v >= lo);
  }
}

TEST_CASE("round_dir worked example: 11 at three bits") {
  dyadic x(bigint(11), 0);
  dyadic down = round_dir(x, 3, rounding::down);
  dyadic up = round_dir(x, 3, rounding::up);
  CHECK(down == dyadic(bigint(5), 1));  // 10
  CHECK(up == dyadic(bigint(3), 2));    // 12
  // Mirrored for the negative value.
  dyadic nx = x.negated();
  CHECK(round_dir(nx, 3, rounding::down) == dyadic(bigint(-3), 2));
  CHECK(round_dir(nx, 3, rounding::up) == dyadic(bigint(-5), 1));
}

TEST_CASE("round_dir is the identity when the mantissa already fits") {
  dyadic x(bigint(11), -4);
  CHECK(round_dir(x, 4, rounding::down) == x);
  CHECK(round_dir(x, 4, rounding::up) == x);
  CHECK(round_dir(dyadic(), 2, rounding::up).is_zero());
}

TEST_CASE("round_dir brackets the value within one ulp") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<uint32_t> dbits(2, 40);
  for (int i = 0; i < 5000; ++i) {
    dyadic x = random_dyadic(rng);
    uint32_t bits = dbits(rng);
    dyadic down = round_dir(x, bits, rounding::down);
    dyadic up = round_dir(x, bits, rounding::up);
    check_fits(down, bits);
    check_fits(up, bits);
    rational v = to_rat(x);
    CHECK(to_rat(down) <= v);
    CHECK(to_rat(up) >= v);
    if (!x.is_zero()) {
      rational ulp = to_rat(dyadic::pow2(x.top() - int64_t(bits) + 1));
      CHECK(to_rat(up) - to_rat(down) <= ulp);
    }
  }
}

TEST_CASE("exact add, sub, mul agree with the rational oracle") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 5000; ++i) {
    dyadic a = random_dyadic(rng), b = random_dyadic(rng);
    CHECK(to_rat(dy_add(a, b)) == to_rat(a) + to_rat(b));
    CHECK(to_rat(dy_sub(a, b)) == to_rat(a) - to_rat(b));
    CHECK(to_rat(dy_mul(a, b)) == to_rat(a) * to_rat(b));
  }
}

TEST_CASE("directed add and sub bound the exact value from the right side") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<uint32_t> dbits(2, 60);
  for (int i = 0; i < 5000; ++i) {
    dyadic a = random_dyadic(rng), b = random_dyadic(rng);
    uint32_t bits = dbits(rng);
    rational sum = to_rat(a) + to_rat(b);
    dyadic lo = dy_add_dir(a, b, bits, rounding::down);
    dyadic hi = dy_add_dir(a, b, bits, rounding::up);
    check_fits(lo, bits);
    check_fits(hi, bits);
    CHECK(to_rat(lo) <= sum);
    CHECK(to_rat(hi) >= sum);
    rational diff = to_rat(a) - to_rat(b);
    CHECK(to_rat(dy_sub_dir(a, b, bits, rounding::down)) <= diff);
    CHECK(to_rat(dy_sub_dir(a, b, bits, rounding::up)) >= diff);
  }
}

TEST_CASE("directed add stays sound across huge magnitude gaps") {
  // Exponent gaps large enough to take the negligible-term short cut; the
  // directed bound must survive in both directions and both signs.
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int64_t> dm(-1000, 1000);
  std::uniform_int_distribution<int64_t> dgap(70, 5000);
  for (int i = 0; i < 2000; ++i) {
    int64_t gap = dgap(rng);
    dyadic big(bigint(dm(rng)), 0);
    dyadic tiny(bigint(dm(rng)), -gap);
    if (big.is_zero() || tiny.is_zero()) continue;
    rational sum = to_rat(big) + to_rat(tiny);
    dyadic lo = dy_add_dir(big, tiny, 20, rounding::down);
    dyadic hi = dy_add_dir(big, tiny, 20, rounding::up);
    check_fits(lo, 20);
    check_fits(hi, 20);
    CHECK(to_rat(lo) <= sum);
    CHECK(to_rat(hi) >= sum);
    // The bracket stays within one ulp of the dominant operand.
    rational ulp = to_rat(dyadic::pow2(big.top() - 20 + 1));
    CHECK(to_rat(hi) - to_rat(lo) <= 2 * ulp);
  }
}

TEST_CASE("directed mul bounds the exact product") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<uint32_t> dbits(2, 60);
  for (int i = 0; i < 5000; ++i) {
    dyadic a = random_dyadic(rng), b = random_dyadic(rng);
    uint32_t bits = dbits(rng);
    rational prod = to_rat(a) * to_rat(b);
    CHECK(to_rat(dy_mul_dir(a, b, bits, rounding::down)) <= prod);
    CHECK(to_rat(dy_mul_dir(a, b, bits, rounding::up)) >= prod);
  }
}

TEST_CASE("directed reciprocal brackets 1/x tightly") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<uint32_t> dbits(4, 60);
  for (int i = 0; i < 5000; ++i) {
    dyadic x = random_dyadic(rng);
    if (x.is_zero()) continue;
    uint32_t bits = dbits(rng);
    rational inv = rational(1) / to_rat(x);
    dyadic lo = dy_recip_dir(x, bits, rounding::down);
    dyadic hi = dy_recip_dir(x, bits, rounding::up);
    CHECK(to_rat(lo) <= inv);
    CHECK(to_rat(hi) >= inv);
    // Within a few ulp at the scale of 1/x.
    rational ulp = to_rat(dyadic::pow2(-x.top() - int64_t(bits) + 2));
    CHECK(to_rat(hi) - to_rat(lo) <= 2 * ulp);
  }
  CHECK_THROWS_AS(dy_recip_dir(dyadic(), 10, rounding::down), internal_fault);
}

TEST_CASE("reciprocal of exact powers of two is exact") {
  for (int64_t e = -20; e <= 20; ++e) {
    dyadic x = dyadic::pow2(e);
    CHECK(dy_recip_dir(x, 4, rounding::down) == dyadic::pow2(-e));
    CHECK(dy_recip_dir(x, 4, rounding::up) == dyadic::pow2(-e));
  }
}

TEST_CASE("floor_scaled_pow10 floors toward minus infinity") {
  CHECK(floor_scaled_pow10(dyadic(bigint(13), -2), 1) == 32);   // 3.25 -> 32
  CHECK(floor_scaled_pow10(dyadic(bigint(-13), -2), 1) == -33); // -3.25 -> -33
  CHECK(floor_scaled_pow10(dyadic(bigint(1), 0), 3) == 1000);
  CHECK(floor_scaled_pow10(dyadic(), 5) == 0);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<uint32_t> dd(0, 25);
  for (int i = 0; i < 3000; ++i) {
    dyadic x = random_dyadic(rng);
    uint32_t d = dd(rng);
    bigint p10 = 1;
    for (uint32_t j = 0; j < d; ++j) p10 *= 10;
    rational scaled = to_rat(x) * p10;
    bigint got = floor_scaled_pow10(x, d);
    CHECK(rational(got) <= scaled);
    CHECK(rational(got + 1) > scaled);
  }
}

TEST_CASE("exponent range violations fault instead of wrapping") {
  dyadic huge(bigint(1), int64_t(1) << 44);
  CHECK_THROWS_AS(dy_mul(huge, huge), internal_fault);
}

TEST_CASE("debug rendering") {
  CHECK(to_string(dyadic(bigint(3), -1)) == "3*2^-1");
  CHECK(to_string(dyadic()) == "0*2^0");
}
