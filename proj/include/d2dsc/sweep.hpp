#pragma once

// Memory-rate curve sweeps rendered as CSV. One row per grid memory M with
// the centralized envelope rate, optional decentralized envelopes (one per
// requested group size), the cut-set lower bound, the server-multicast
// upper/lower pair, and gap ratios. Every value is exact; cells carry the
// fraction and a decimal rendering side by side. Rows whose memory lies below
// a curve's smallest corner keep the row and mark the gap in the notes column
// instead of being dropped.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "d2dsc/bounds.hpp"
#include "d2dsc/rational.hpp"

namespace d2dsc {

struct sweep_config {
  unsigned users = 0;  // K
  unsigned files = 0;  // N
  std::vector<unsigned> group_sizes;     // decentralized overlays (L values)
  std::vector<rational> extra_memories;  // grid points beyond the corners
  // For small populations (K <= 8) rerun the centralized scheme at each of its
  // corner memories and record the measured rate next to the formula value.
  bool spot_check = true;
  std::uint64_t seed = 1;  // spot-check runs only
};

struct sweep_row {
  rational memory;
  std::optional<rational> centralized;      // envelope rate, empty below corners
  std::optional<rational> measured;         // simulation spot check (K <= 8)
  rational cutset_lower_value;              // defined for every memory
  std::optional<rational> multicast_upper;  // needs memory >= 1
  std::optional<rational> multicast_lower;
  std::optional<rational> ratio_vs_cutset;     // centralized / cut-set
  std::optional<rational> ratio_vs_multicast;  // centralized / multicast upper
  std::vector<std::optional<rational>> decentralized;  // parallel to group_sizes
  std::vector<std::string> notes;  // infeasibility and undefined-value markers
};

struct sweep_result {
  sweep_config config;
  std::vector<corner_point> centralized_corners_used;
  std::vector<std::vector<corner_point>> decentralized_corners_used;  // per L
  std::vector<sweep_row> rows;  // ascending memory
};

// Builds the grid (union of every curve's corner memories plus the extras,
// deduplicated and sorted) and evaluates every column at every grid point.
sweep_result run_sweep(const sweep_config& config);

// UTF-8, header row, LF line endings, fixed column order:
//   memory, centralized_rate, measured_rate, cutset_lower, multicast_upper,
//   multicast_lower, ratio_vs_cutset, ratio_vs_multicast,
//   decentralized_L<L>..., notes
// with a "_dec" decimal column following each fraction column.
std::string sweep_csv(const sweep_result& result);

void save_sweep_csv(const sweep_result& result, const std::string& path);

}  // namespace d2dsc
