#pragma once

// Converse bounds and comparison rates for device-to-device coded delivery
// with secrecy, all in exact rational arithmetic: the cut-set style lower
// bound, the server-based multicast upper/lower pair, memory-rate corner
// points, and the piecewise-linear envelope between corners.

#include <optional>
#include <vector>

#include "d2dsc/rational.hpp"

namespace d2dsc {

class infeasible_memory : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One achievable (memory, rate) corner, tagged with its integer parameter t.
struct corner_point {
  unsigned t = 0;
  rational memory;
  rational rate;
};

// Rate of the memory-sharing envelope at memory M: the lower convex envelope
// of the corners, extended non-increasingly past its minimum (extra memory is
// never harmful: a scheme may simply leave cache space unused). Throws
// infeasible_memory below the smallest corner.
rational envelope_rate(std::vector<corner_point> corners, const rational& memory);

// Cut-set lower bound on the secure delivery rate for K users, N files,
// per-user cache M. Maximizes over s = 1 .. min(K, floor(N/2)), skipping
// s = K and any s with floor(N/s) = 1; negative terms clamp to zero.
rational cutset_lower_bound(unsigned users, unsigned files, const rational& memory);

// The individual (s, term) pairs the bound maximizes over, after clamping.
std::vector<std::pair<unsigned, rational>> cutset_terms(unsigned users, unsigned files,
                                                        const rational& memory);

// Server-based secure multicast comparison rates. Requires memory >= 1.
struct multicast_bounds {
  rational upper;
  rational lower;
};
multicast_bounds multicast_rates(unsigned users, unsigned files, const rational& memory);

// Gap diagnostics at one centralized corner t: the achieved rate against the
// cut-set lower bound and against the multicast upper bound.
struct gap_row {
  unsigned t = 0;
  rational memory;
  rational rate;            // K/t
  rational lower;           // cut-set bound at this memory
  rational ratio_to_lower;  // rate / lower
  rational multicast_upper;
  rational ratio_to_multicast;  // rate / multicast upper
  bool within_factor_five = false;
};
gap_row gap_report(unsigned users, unsigned files, unsigned t);

}  // namespace d2dsc
