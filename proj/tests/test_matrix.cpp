#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "d2dsc/field.hpp"
#include "d2dsc/matrix.hpp"

using d2dsc::field;
using d2dsc::symbol;
using d2dsc::symbol_matrix;

namespace {

symbol_matrix random_matrix(const field& f, unsigned rows, unsigned cols, std::mt19937_64& rng) {
  symbol_matrix m(rows, cols);
  for (unsigned r = 0; r < rows; ++r) {
    for (unsigned c = 0; c < cols; ++c) m.at(r, c) = static_cast<symbol>(rng() & (f.order() - 1));
  }
  return m;
}

}  // namespace

TEST_CASE("rank of identity and zero matrices") {
  const field f(field::default_spec(8));
  CHECK(d2dsc::rank(f, symbol_matrix::identity(7)) == 7);
  CHECK(d2dsc::rank_serial(f, symbol_matrix::identity(7)) == 7);
  CHECK(d2dsc::rank(f, symbol_matrix(5, 9)) == 0);
  CHECK(d2dsc::rank_serial(f, symbol_matrix(5, 9)) == 0);
}

TEST_CASE("square Vandermonde on distinct points has full rank") {
  const field f(field::default_spec(8));
  const unsigned n = 12;
  symbol_matrix v(n, n);
  for (unsigned i = 0; i < n; ++i) {
    symbol p = 1;
    for (unsigned j = 0; j < n; ++j) {
      v.at(i, j) = p;
      p = f.mul(p, static_cast<symbol>(i + 1));
    }
  }
  CHECK(d2dsc::rank(f, v) == n);
  CHECK(d2dsc::rank_serial(f, v) == n);

  // duplicate a point: rank drops by one
  symbol_matrix w = v;
  for (unsigned j = 0; j < n; ++j) w.at(1, j) = v.at(0, j);
  CHECK(d2dsc::rank(f, w) == n - 1);
}

TEST_CASE("parallel and serial elimination agree on random matrices") {
  const field f(field::default_spec(16));
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const unsigned rows = 1 + (rng() % 40);
    const unsigned cols = 1 + (rng() % 40);
    const auto m = random_matrix(f, rows, cols, rng);
    const unsigned a = d2dsc::rank(f, m);
    const unsigned b = d2dsc::rank_serial(f, m);
    CHECK(a == b);
    CHECK(a == d2dsc::rank_serial(f, m.transposed()));
  }
  // one instance large enough to engage the parallel branch
  const auto big = random_matrix(f, 200, 160, rng);
  CHECK(d2dsc::rank(f, big) == d2dsc::rank_serial(f, big));
}

TEST_CASE("rank is bounded by min(rows, cols) and additive under block diag") {
  const field f(field::default_spec(8));
  std::mt19937_64 rng(3);
  const auto a = random_matrix(f, 6, 4, rng);
  const auto b = random_matrix(f, 5, 7, rng);
  const unsigned ra = d2dsc::rank(f, a);
  const unsigned rb = d2dsc::rank(f, b);
  CHECK(ra <= 4);
  CHECK(rb <= 5);
  symbol_matrix blk(11, 11);
  for (unsigned r = 0; r < 6; ++r)
    for (unsigned c = 0; c < 4; ++c) blk.at(r, c) = a.at(r, c);
  for (unsigned r = 0; r < 5; ++r)
    for (unsigned c = 0; c < 7; ++c) blk.at(6 + r, 4 + c) = b.at(r, c);
  CHECK(d2dsc::rank(f, blk) == ra + rb);
}

TEST_CASE("solve on a diagonal system divides componentwise") {
  const field f(field::default_spec(8));
  symbol_matrix a(4, 4);
  const std::vector<symbol> diag{3, 9, 0x53, 0xCA};
  for (unsigned i = 0; i < 4; ++i) a.at(i, i) = diag[i];
  const std::vector<symbol> b{1, 2, 3, 4};
  const auto x = d2dsc::solve(f, a, b);
  for (unsigned i = 0; i < 4; ++i) CHECK(x[i] == f.mul(f.inv(diag[i]), b[i]));
}

TEST_CASE("solve round-trips against mat_vec on random invertible systems") {
  const field f(field::default_spec(16));
  std::mt19937_64 rng(17);
  int solved = 0;
  while (solved < 20) {
    const auto a = random_matrix(f, 8, 8, rng);
    if (d2dsc::rank(f, a) < 8) continue;
    std::vector<symbol> x_true(8);
    for (auto& v : x_true) v = static_cast<symbol>(rng() & 0xFFFF);
    const auto b = d2dsc::mat_vec(f, a, x_true);
    CHECK(d2dsc::solve(f, a, b) == x_true);
    ++solved;
  }
}

TEST_CASE("singular systems throw") {
  const field f(field::default_spec(8));
  symbol_matrix a(3, 3);
  a.at(0, 0) = 1;
  a.at(1, 1) = 1;  // rank 2
  CHECK_THROWS_AS(d2dsc::solve(f, a, std::vector<symbol>{1, 2, 3}), d2dsc::singular_matrix);
  CHECK_THROWS_AS(d2dsc::inverse(f, a), d2dsc::singular_matrix);
}

TEST_CASE("inverse composes to the identity") {
  const field f(field::default_spec(8));
  std::mt19937_64 rng(23);
  int done = 0;
  while (done < 10) {
    const auto a = random_matrix(f, 6, 6, rng);
    if (d2dsc::rank(f, a) < 6) continue;
    const auto ainv = d2dsc::inverse(f, a);
    // a * ainv == I, column by column
    for (unsigned c = 0; c < 6; ++c) {
      std::vector<symbol> col(6);
      for (unsigned r = 0; r < 6; ++r) col[r] = ainv.at(r, c);
      const auto e = d2dsc::mat_vec(f, a, col);
      for (unsigned r = 0; r < 6; ++r) CHECK(e[r] == (r == c ? 1 : 0));
    }
    ++done;
  }
}

TEST_CASE("hconcat stacks columns and feeds augmented ranks") {
  const field f(field::default_spec(8));
  const auto i3 = symbol_matrix::identity(3);
  symbol_matrix z(3, 2);
  const auto m = d2dsc::hconcat(i3, z);
  CHECK(m.cols() == 5);
  CHECK(d2dsc::rank(f, m) == 3);
  CHECK_THROWS_AS(d2dsc::hconcat(i3, symbol_matrix(2, 2)), std::invalid_argument);
}
