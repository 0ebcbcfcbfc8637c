#include "d2dsc/subsets.hpp"

#include <algorithm>
#include <stdexcept>

namespace d2dsc {

std::vector<unsigned> set_elements(set_mask s) {
  std::vector<unsigned> out;
  out.reserve(set_size(s));
  for (unsigned e = 1; s; ++e, s >>= 1) {
    if (s & 1u) out.push_back(e);
  }
  return out;
}

set_mask mask_of(const std::vector<unsigned>& elements) {
  set_mask m = 0;
  for (unsigned e : elements) {
    if (e == 0 || e > 31) throw std::invalid_argument("set element out of range [1,31]");
    const set_mask b = element_bit(e);
    if (m & b) throw std::invalid_argument("duplicate set element");
    m |= b;
  }
  return m;
}

std::vector<set_mask> combinations(unsigned k, unsigned r) {
  if (k > 31) throw std::invalid_argument("universe larger than 31 elements");
  std::vector<set_mask> out;
  if (r > k) return out;
  if (r == 0) {
    out.push_back(0);
    return out;
  }
  std::vector<unsigned> idx(r);
  for (unsigned i = 0; i < r; ++i) idx[i] = i + 1;
  while (true) {
    set_mask m = 0;
    for (unsigned e : idx) m |= element_bit(e);
    out.push_back(m);
    // advance to the next lexicographic r-tuple
    int pos = static_cast<int>(r) - 1;
    while (pos >= 0 && idx[pos] == k - (r - 1 - pos)) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (unsigned i = pos + 1; i < r; ++i) idx[i] = idx[i - 1] + 1;
  }
  return out;
}

std::uint64_t comb_rank_lex(set_mask subset, unsigned k) {
  const auto elems = set_elements(subset);
  const auto r = static_cast<unsigned>(elems.size());
  // count subsets that sort lexicographically before `subset`: those matching
  // on the first i-1 elements whose i-th element is smaller
  std::uint64_t rank = 0;
  unsigned prev = 0;
  for (unsigned i = 0; i < r; ++i) {
    for (unsigned v = prev + 1; v < elems[i]; ++v) {
      rank += binomial_u64(k - v, r - i - 1);
    }
    prev = elems[i];
  }
  return rank;
}

std::uint64_t binomial_u64(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t acc = 1;
  for (unsigned i = 1; i <= k; ++i) {
    const std::uint64_t factor = n - k + i;
    if (acc > UINT64_MAX / factor) throw std::overflow_error("binomial_u64 overflow");
    acc = acc * factor / i;
  }
  return acc;
}

}  // namespace d2dsc
