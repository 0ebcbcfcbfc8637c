#pragma once

// Small-set combinatorics over user/slot universes {1..K}, K <= 31.
// Sets are bitmasks: bit (e-1) represents element e. Combination lists are
// produced in lexicographic order of the sorted element tuples, which is the
// canonical order used everywhere (share indexing, key registries, schedules).

#include <cstdint>
#include <vector>

namespace d2dsc {

using set_mask = std::uint32_t;

inline set_mask element_bit(unsigned e) { return set_mask{1} << (e - 1); }

inline bool contains(set_mask s, unsigned e) { return (s & element_bit(e)) != 0; }

inline unsigned set_size(set_mask s) { return static_cast<unsigned>(__builtin_popcount(s)); }

// 1-based position of element e among the ascending elements of s.
// Precondition: contains(s, e).
inline unsigned rank_in(set_mask s, unsigned e) {
  return static_cast<unsigned>(__builtin_popcount(s & (element_bit(e) - 1))) + 1;
}

std::vector<unsigned> set_elements(set_mask s);           // ascending
set_mask mask_of(const std::vector<unsigned>& elements);  // throws on dup/0/>31

// All r-subsets of {1..k} in lexicographic tuple order.
std::vector<set_mask> combinations(unsigned k, unsigned r);

// 0-based rank of `subset` within combinations(k, set_size(subset)).
std::uint64_t comb_rank_lex(set_mask subset, unsigned k);

std::uint64_t binomial_u64(unsigned n, unsigned k);  // throws on overflow

}  // namespace d2dsc
