#pragma once

// Ramp (m, n) secret sharing over GF(2^w). A block of n-m secret symbols and
// m fresh random symbols form the coefficient vector of
//   f(x) = r_0 + r_1 x + ... + r_{m-1} x^{m-1} + s_0 x^m + ... + s_{n-m-1} x^{n-1}
// and the n shares are f at the first n nonzero field elements (1, 2, ..., n
// in numeric order). Any n shares reconstruct the secret; any m shares are
// statistically independent of it.

#include <cstdint>
#include <span>
#include <vector>

#include "d2dsc/field.hpp"
#include "d2dsc/matrix.hpp"

namespace d2dsc {

struct ramp_scheme {
  unsigned m = 0;                   // random (leakage-free) degree count
  unsigned n = 0;                   // share count
  std::vector<symbol> eval_points;  // n distinct nonzero elements, ascending

  unsigned secret_len() const noexcept { return n - m; }
};

// Validates 1 <= m < n <= q-1 and fixes the evaluation points.
ramp_scheme make_ramp_scheme(const field& f, unsigned m, unsigned n);

// shares[i] = f(eval_points[i]); secret and randomness sizes must match the scheme.
std::vector<symbol> share_block(const field& f, const ramp_scheme& s,
                                std::span<const symbol> secret,
                                std::span<const symbol> randomness);

// Recovers the n-m secret symbols from all n shares (in eval-point order).
std::vector<symbol> reconstruct(const field& f, const ramp_scheme& s,
                                std::span<const symbol> shares);

// shares = A_secret * secret + B_random * randomness, as explicit matrices.
// A_secret is n x (n-m) (columns x^m..x^{n-1}); B_random is n x m (x^0..x^{m-1}).
struct sharing_matrices {
  symbol_matrix a_secret;
  symbol_matrix b_random;
};
sharing_matrices sharing_matrix(const field& f, const ramp_scheme& s);

// True iff every m-row subset of B_random has full rank m, i.e. any m shares
// are padded by an invertible image of the randomness (the zero-leakage
// certificate).
bool randomness_covers_all_m_subsets(const field& f, const ramp_scheme& s);

}  // namespace d2dsc
