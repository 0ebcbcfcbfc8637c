#include "d2dsc/ramp.hpp"

#include <stdexcept>

#include "d2dsc/subsets.hpp"

namespace d2dsc {

ramp_scheme make_ramp_scheme(const field& f, unsigned m, unsigned n) {
  if (m < 1) throw std::invalid_argument("ramp scheme needs at least one random coefficient");
  if (n <= m) throw std::invalid_argument("ramp scheme needs n > m");
  if (n > f.order() - 1) {
    throw std::invalid_argument("ramp scheme needs n distinct nonzero evaluation points; field too small");
  }
  ramp_scheme s;
  s.m = m;
  s.n = n;
  s.eval_points.reserve(n);
  for (unsigned i = 1; i <= n; ++i) s.eval_points.push_back(static_cast<symbol>(i));
  return s;
}

std::vector<symbol> share_block(const field& f, const ramp_scheme& s,
                                std::span<const symbol> secret,
                                std::span<const symbol> randomness) {
  if (secret.size() != s.secret_len()) throw std::invalid_argument("share_block: secret size mismatch");
  if (randomness.size() != s.m) throw std::invalid_argument("share_block: randomness size mismatch");
  std::vector<symbol> coeffs(s.n);
  for (unsigned i = 0; i < s.m; ++i) coeffs[i] = randomness[i];
  for (unsigned i = 0; i < s.secret_len(); ++i) coeffs[s.m + i] = secret[i];
  std::vector<symbol> shares(s.n);
  for (unsigned i = 0; i < s.n; ++i) shares[i] = f.eval_poly(coeffs, s.eval_points[i]);
  return shares;
}

std::vector<symbol> reconstruct(const field& f, const ramp_scheme& s,
                                std::span<const symbol> shares) {
  if (shares.size() != s.n) throw std::invalid_argument("reconstruct: expected all n shares");
  // Vandermonde system V c = shares with V[i][j] = e_i^j.
  symbol_matrix v(s.n, s.n);
  for (unsigned i = 0; i < s.n; ++i) {
    symbol p = 1;
    for (unsigned j = 0; j < s.n; ++j) {
      v.at(i, j) = p;
      p = f.mul(p, s.eval_points[i]);
    }
  }
  std::vector<symbol> coeffs = solve(f, std::move(v), {shares.begin(), shares.end()});
  return {coeffs.begin() + s.m, coeffs.end()};
}

sharing_matrices sharing_matrix(const field& f, const ramp_scheme& s) {
  sharing_matrices out{symbol_matrix(s.n, s.secret_len()), symbol_matrix(s.n, s.m)};
  for (unsigned i = 0; i < s.n; ++i) {
    symbol p = 1;
    for (unsigned j = 0; j < s.n; ++j) {
      if (j < s.m) {
        out.b_random.at(i, j) = p;
      } else {
        out.a_secret.at(i, j - s.m) = p;
      }
      p = f.mul(p, s.eval_points[i]);
    }
  }
  return out;
}

bool randomness_covers_all_m_subsets(const field& f, const ramp_scheme& s) {
  const sharing_matrices mats = sharing_matrix(f, s);
  for (set_mask rows : combinations(s.n, s.m)) {
    symbol_matrix sub(s.m, s.m);
    unsigned r = 0;
    for (unsigned e : set_elements(rows)) {
      for (unsigned c = 0; c < s.m; ++c) sub.at(r, c) = mats.b_random.at(e - 1, c);
      ++r;
    }
    if (rank_serial(f, sub) != s.m) return false;
  }
  return true;
}

}  // namespace d2dsc
