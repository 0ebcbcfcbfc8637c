#pragma once

// Dense matrices over GF(2^w) with Gaussian elimination for rank and linear
// solves. rank() eliminates with an OpenMP-parallel row update; rank_serial()
// is an independent straight-line implementation kept as the reference the
// parallel kernel is tested and benchmarked against.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "d2dsc/field.hpp"

namespace d2dsc {

class singular_matrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class symbol_matrix {
 public:
  symbol_matrix() = default;
  symbol_matrix(unsigned rows, unsigned cols)
      : rows_(rows), cols_(cols), d_(static_cast<std::size_t>(rows) * cols, 0) {}

  unsigned rows() const noexcept { return rows_; }
  unsigned cols() const noexcept { return cols_; }

  symbol& at(unsigned r, unsigned c) { return d_[static_cast<std::size_t>(r) * cols_ + c]; }
  symbol at(unsigned r, unsigned c) const { return d_[static_cast<std::size_t>(r) * cols_ + c]; }

  std::span<symbol> row(unsigned r) { return {d_.data() + static_cast<std::size_t>(r) * cols_, cols_}; }
  std::span<const symbol> row(unsigned r) const {
    return {d_.data() + static_cast<std::size_t>(r) * cols_, cols_};
  }

  friend bool operator==(const symbol_matrix&, const symbol_matrix&) = default;

  static symbol_matrix identity(unsigned n);
  symbol_matrix transposed() const;

 private:
  unsigned rows_ = 0;
  unsigned cols_ = 0;
  std::vector<symbol> d_;
};

// Columns of `a` followed by columns of `b`; row counts must match.
symbol_matrix hconcat(const symbol_matrix& a, const symbol_matrix& b);

unsigned rank(const field& f, symbol_matrix m);         // OpenMP row updates
unsigned rank_serial(const field& f, symbol_matrix m);  // reference path

// Solves a x = b for square a; throws singular_matrix if a is not invertible.
std::vector<symbol> solve(const field& f, symbol_matrix a, std::vector<symbol> b);

// Inverse of a square matrix; throws singular_matrix.
symbol_matrix inverse(const field& f, symbol_matrix a);

// y = a x over the field.
std::vector<symbol> mat_vec(const field& f, const symbol_matrix& a, std::span<const symbol> x);

}  // namespace d2dsc
