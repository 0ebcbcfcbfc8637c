#include "d2dsc/matrix.hpp"

#include <algorithm>
#include <utility>

namespace d2dsc {

symbol_matrix symbol_matrix::identity(unsigned n) {
  symbol_matrix m(n, n);
  for (unsigned i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

symbol_matrix symbol_matrix::transposed() const {
  symbol_matrix t(cols_, rows_);
  for (unsigned r = 0; r < rows_; ++r) {
    for (unsigned c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  }
  return t;
}

symbol_matrix hconcat(const symbol_matrix& a, const symbol_matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hconcat: row count mismatch");
  symbol_matrix m(a.rows(), a.cols() + b.cols());
  for (unsigned r = 0; r < a.rows(); ++r) {
    for (unsigned c = 0; c < a.cols(); ++c) m.at(r, c) = a.at(r, c);
    for (unsigned c = 0; c < b.cols(); ++c) m.at(r, a.cols() + c) = b.at(r, c);
  }
  return m;
}

namespace {

void swap_rows(symbol_matrix& m, unsigned a, unsigned b) {
  if (a == b) return;
  auto ra = m.row(a);
  auto rb = m.row(b);
  std::swap_ranges(ra.begin(), ra.end(), rb.begin());
}

// row_i -= factor * row_p from column `from` on (subtraction is XOR).
inline void axpy_row(const field& f, std::span<symbol> dst, std::span<const symbol> src,
                     symbol factor, unsigned from) {
  for (unsigned j = from; j < dst.size(); ++j) {
    dst[j] = static_cast<symbol>(dst[j] ^ f.mul(factor, src[j]));
  }
}

}  // namespace

unsigned rank(const field& f, symbol_matrix m) {
  const unsigned rows = m.rows();
  const unsigned cols = m.cols();
  unsigned r = 0;
  for (unsigned c = 0; c < cols && r < rows; ++c) {
    unsigned pivot = rows;
    for (unsigned i = r; i < rows; ++i) {
      if (m.at(i, c) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot == rows) continue;
    swap_rows(m, r, pivot);
    const symbol inv_piv = f.inv(m.at(r, c));
    const auto prow = m.row(r);
    const bool big = (rows - r) >= 64 && (cols - c) >= 32;
#pragma omp parallel for schedule(static) if (big)
    for (int i = static_cast<int>(r) + 1; i < static_cast<int>(rows); ++i) {
      const symbol lead = m.at(i, c);
      if (lead == 0) continue;
      axpy_row(f, m.row(i), prow, f.mul(lead, inv_piv), c);
    }
    ++r;
  }
  return r;
}

unsigned rank_serial(const field& f, symbol_matrix m) {
  const unsigned rows = m.rows();
  const unsigned cols = m.cols();
  unsigned r = 0;
  for (unsigned c = 0; c < cols && r < rows; ++c) {
    unsigned pivot = rows;
    for (unsigned i = r; i < rows; ++i) {
      if (m.at(i, c) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot == rows) continue;
    swap_rows(m, r, pivot);
    const symbol inv_piv = f.inv(m.at(r, c));
    for (unsigned i = r + 1; i < rows; ++i) {
      const symbol lead = m.at(i, c);
      if (lead == 0) continue;
      const symbol factor = f.mul(lead, inv_piv);
      for (unsigned j = c; j < cols; ++j) {
        m.at(i, j) = static_cast<symbol>(m.at(i, j) ^ f.mul(factor, m.at(r, j)));
      }
    }
    ++r;
  }
  return r;
}

std::vector<symbol> solve(const field& f, symbol_matrix a, std::vector<symbol> b) {
  const unsigned n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("solve: shape mismatch");
  // Forward elimination with the right-hand side carried along.
  for (unsigned c = 0; c < n; ++c) {
    unsigned pivot = n;
    for (unsigned i = c; i < n; ++i) {
      if (a.at(i, c) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot == n) throw singular_matrix("solve: singular matrix");
    swap_rows(a, c, pivot);
    std::swap(b[c], b[pivot]);
    const symbol inv_piv = f.inv(a.at(c, c));
    const bool big = (n - c) >= 64;
#pragma omp parallel for schedule(static) if (big)
    for (int i = static_cast<int>(c) + 1; i < static_cast<int>(n); ++i) {
      const symbol lead = a.at(i, c);
      if (lead == 0) continue;
      const symbol factor = f.mul(lead, inv_piv);
      axpy_row(f, a.row(i), a.row(c), factor, c);
      b[i] = static_cast<symbol>(b[i] ^ f.mul(factor, b[c]));
    }
  }
  // Back substitution.
  std::vector<symbol> x(n, 0);
  for (unsigned ii = n; ii-- > 0;) {
    symbol acc = b[ii];
    for (unsigned j = ii + 1; j < n; ++j) {
      acc = static_cast<symbol>(acc ^ f.mul(a.at(ii, j), x[j]));
    }
    x[ii] = f.mul(acc, f.inv(a.at(ii, ii)));
  }
  return x;
}

symbol_matrix inverse(const field& f, symbol_matrix a) {
  const unsigned n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("inverse: matrix not square");
  symbol_matrix aug = hconcat(a, symbol_matrix::identity(n));
  // Gauss-Jordan to reduced row echelon form.
  for (unsigned c = 0; c < n; ++c) {
    unsigned pivot = n;
    for (unsigned i = c; i < n; ++i) {
      if (aug.at(i, c) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot == n) throw singular_matrix("inverse: singular matrix");
    swap_rows(aug, c, pivot);
    const symbol inv_piv = f.inv(aug.at(c, c));
    for (unsigned j = c; j < 2 * n; ++j) aug.at(c, j) = f.mul(aug.at(c, j), inv_piv);
    for (unsigned i = 0; i < n; ++i) {
      if (i == c) continue;
      const symbol lead = aug.at(i, c);
      if (lead == 0) continue;
      axpy_row(f, aug.row(i), aug.row(c), lead, c);
    }
  }
  symbol_matrix out(n, n);
  for (unsigned r = 0; r < n; ++r) {
    for (unsigned c = 0; c < n; ++c) out.at(r, c) = aug.at(r, n + c);
  }
  return out;
}

std::vector<symbol> mat_vec(const field& f, const symbol_matrix& a, std::span<const symbol> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("mat_vec: shape mismatch");
  std::vector<symbol> y(a.rows(), 0);
  for (unsigned r = 0; r < a.rows(); ++r) {
    symbol acc = 0;
    const auto row = a.row(r);
    for (unsigned c = 0; c < a.cols(); ++c) acc = static_cast<symbol>(acc ^ f.mul(row[c], x[c]));
    y[r] = acc;
  }
  return y;
}

}  // namespace d2dsc
