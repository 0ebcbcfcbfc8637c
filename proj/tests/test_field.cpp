#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "d2dsc/field.hpp"

using d2dsc::field;
using d2dsc::field_spec;
using d2dsc::symbol;

TEST_CASE("default specs construct for every supported width") {
  for (unsigned w = 2; w <= 16; ++w) {
    const field f(field::default_spec(w));
    CHECK(f.order() == (1u << w));
    CHECK(f.generator() >= 2);
    // generator order is exactly q-1: g^(q-1) = 1 and no smaller power is 1
    CHECK(f.pow(f.generator(), f.order() - 1) == 1);
  }
  CHECK_THROWS_AS(field::default_spec(1), d2dsc::field_error);
  CHECK_THROWS_AS(field::default_spec(17), d2dsc::field_error);
}

TEST_CASE("reducible polynomial is rejected") {
  // x^4 + 1 = (x+1)^4 over GF(2)
  CHECK_THROWS_AS(field(field_spec{4, 0x11}), d2dsc::field_error);
  // x^8 + 1
  CHECK_THROWS_AS(field(field_spec{8, 0x101}), d2dsc::field_error);
  // degree mismatch
  CHECK_THROWS_AS(field(field_spec{8, 0x13}), d2dsc::field_error);
}

TEST_CASE("characteristic-2 identities hold exhaustively in small widths") {
  for (unsigned w : {2u, 3u, 4u}) {
    const field f(field::default_spec(w));
    const unsigned q = f.order();
    for (unsigned a = 0; a < q; ++a) {
      CHECK(field::add(static_cast<symbol>(a), static_cast<symbol>(a)) == 0);
      CHECK(f.mul(static_cast<symbol>(a), 1) == a);
      CHECK(f.mul(static_cast<symbol>(a), 0) == 0);
      for (unsigned b = 0; b < q; ++b) {
        const auto sa = static_cast<symbol>(a);
        const auto sb = static_cast<symbol>(b);
        CHECK(f.mul(sa, sb) == f.mul(sb, sa));
        CHECK(f.mul(sa, sb) == f.mul_ref(sa, sb));
        // distributivity over a fixed third element
        for (unsigned c : {1u, q - 1}) {
          const auto sc = static_cast<symbol>(c);
          CHECK(f.mul(sc, field::add(sa, sb)) ==
                field::add(f.mul(sc, sa), f.mul(sc, sb)));
        }
      }
      if (a != 0) {
        CHECK(f.mul(static_cast<symbol>(a), f.inv(static_cast<symbol>(a))) == 1);
      }
    }
  }
}

TEST_CASE("associativity spot checks across widths") {
  for (unsigned w : {2u, 3u, 4u, 8u, 16u}) {
    const field f(field::default_spec(w));
    std::mt19937_64 rng(99);
    for (int i = 0; i < 2000; ++i) {
      const auto a = static_cast<symbol>(rng() & (f.order() - 1));
      const auto b = static_cast<symbol>(rng() & (f.order() - 1));
      const auto c = static_cast<symbol>(rng() & (f.order() - 1));
      CHECK(f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c));
    }
  }
}

TEST_CASE("table multiplication matches the carry-less reference on random pairs") {
  for (unsigned w : {8u, 16u}) {
    const field f(field::default_spec(w));
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 10000; ++i) {
      const auto a = static_cast<symbol>(rng() & (f.order() - 1));
      const auto b = static_cast<symbol>(rng() & (f.order() - 1));
      CHECK(f.mul(a, b) == f.mul_ref(a, b));
    }
  }
}

TEST_CASE("GF(256) with poly 0x11B: 0x80 * 0x02 reduces to 0x1B") {
  const field f(field_spec{8, 0x11B});
  CHECK(f.mul(0x80, 0x02) == 0x1B);
  CHECK(f.mul_ref(0x80, 0x02) == 0x1B);
}

TEST_CASE("inverse of zero throws") {
  const field f(field::default_spec(8));
  CHECK_THROWS_AS(f.inv(0), d2dsc::field_error);
}

TEST_CASE("pow agrees with iterated multiplication") {
  const field f(field::default_spec(8));
  for (symbol a : {symbol{0}, symbol{1}, symbol{2}, symbol{0x53}, symbol{0xFF}}) {
    symbol acc = 1;
    for (unsigned e = 0; e <= 520; ++e) {
      CHECK(f.pow(a, e) == acc);
      acc = f.mul(acc, a);
    }
  }
  CHECK(f.pow(0, 0) == 1);
}

TEST_CASE("eval_poly implements Horner evaluation") {
  // 1 + x + x^2 at x=2 over GF(16): 1 ^ 2 ^ 4 = 7
  const field f(field::default_spec(4));
  const std::vector<symbol> coeffs{1, 1, 1};
  CHECK(f.eval_poly(coeffs, 2) == 7);

  const field f8(field::default_spec(8));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<symbol> cs(1 + (rng() % 6));
    for (auto& c : cs) c = static_cast<symbol>(rng() & 0xFF);
    const auto x = static_cast<symbol>(rng() & 0xFF);
    symbol expect = 0;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      expect = field::add(expect, f8.mul(cs[i], f8.pow(x, i)));
    }
    CHECK(f8.eval_poly(cs, x) == expect);
  }
  CHECK_THROWS_AS(f8.eval_poly({}, 1), d2dsc::field_error);
}

TEST_CASE("distinct nonzero points stay distinct under the numeric embedding") {
  const field f(field::default_spec(5));
  // the first n nonzero elements used as ramp evaluation points
  for (unsigned i = 1; i < f.order(); ++i) {
    CHECK_NOTHROW(f.check_element(static_cast<symbol>(i)));
  }
  CHECK_THROWS_AS(f.check_element(static_cast<symbol>(f.order())), d2dsc::field_error);
}
