#include "d2dsc/sweep.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "d2dsc/centralized.hpp"
#include "d2dsc/decentralized.hpp"
#include "d2dsc/run.hpp"

namespace d2dsc {

namespace {

std::optional<rational> envelope_or_note(const std::vector<corner_point>& corners,
                                         const rational& memory, const std::string& tag,
                                         std::vector<std::string>& notes) {
  try {
    return envelope_rate(corners, memory);
  } catch (const infeasible_memory&) {
    notes.push_back(tag + "_infeasible");
    return std::nullopt;
  }
}

// Measured rate of one centralized run at a corner. Placement and delivery
// only; decode and secrecy verdicts are covered elsewhere and would dominate
// the sweep's runtime.
rational measure_centralized(const sweep_config& sc, unsigned t) {
  experiment_config cfg;
  cfg.scheme = scheme_kind::centralized;
  cfg.users = sc.users;
  cfg.files = sc.files;
  cfg.t = t;
  cfg.blocks = 1;
  cfg.field_bits = field_spec{10, 0x409};
  cfg.seed = sc.seed;
  cfg.demands.resize(sc.users);
  for (unsigned k = 1; k <= sc.users; ++k) cfg.demands[k - 1] = (k - 1) % sc.files + 1;
  run_options opts;
  opts.decode = false;
  opts.verdicts = false;
  return run_e2e(cfg, opts).rates.measured;
}

}  // namespace

sweep_result run_sweep(const sweep_config& config) {
  if (config.users < 2) throw std::invalid_argument("sweep needs at least two users");
  if (config.files < 1) throw std::invalid_argument("sweep needs at least one file");
  for (const unsigned group : config.group_sizes)
    if (group < 2 || group > config.users)
      throw std::invalid_argument("group size must lie in [2, users]");

  sweep_result out;
  out.config = config;
  out.centralized_corners_used = centralized_corners(config.users, config.files);
  for (const unsigned group : config.group_sizes)
    out.decentralized_corners_used.push_back(
        decentralized_corners(config.users, group, config.files));

  std::set<rational> grid;
  for (const auto& c : out.centralized_corners_used) grid.insert(c.memory);
  for (const auto& curve : out.decentralized_corners_used)
    for (const auto& c : curve) grid.insert(c.memory);
  for (const auto& m : config.extra_memories) grid.insert(m);

  for (const rational& memory : grid) {
    sweep_row row;
    row.memory = memory;
    row.centralized =
        envelope_or_note(out.centralized_corners_used, memory, "centralized", row.notes);

    if (config.spot_check && config.users <= 8 && row.centralized) {
      for (const auto& c : out.centralized_corners_used)
        if (c.memory == memory) {
          row.measured = measure_centralized(config, c.t);
          break;
        }
    }

    row.cutset_lower_value = cutset_lower_bound(config.users, config.files, memory);
    if (memory >= 1) {
      const multicast_bounds mc = multicast_rates(config.users, config.files, memory);
      row.multicast_upper = mc.upper;
      row.multicast_lower = mc.lower;
    } else {
      row.notes.push_back("multicast_undefined");
    }

    if (row.centralized && row.cutset_lower_value > 0)
      row.ratio_vs_cutset = *row.centralized / row.cutset_lower_value;
    if (row.centralized && row.multicast_upper)
      row.ratio_vs_multicast = *row.centralized / *row.multicast_upper;

    for (std::size_t i = 0; i < config.group_sizes.size(); ++i)
      row.decentralized.push_back(envelope_or_note(
          out.decentralized_corners_used[i], memory,
          "decentralized_L" + std::to_string(config.group_sizes[i]), row.notes));

    out.rows.push_back(std::move(row));
  }
  return out;
}

namespace {

void put_pair(std::ostringstream& os, const std::optional<rational>& v) {
  if (v) os << ',' << fraction_string(*v) << ',' << decimal_string(*v, 10);
  else os << ",,";
}

}  // namespace

std::string sweep_csv(const sweep_result& result) {
  std::ostringstream os;
  os << "memory,memory_dec,centralized_rate,centralized_rate_dec,"
        "measured_rate,measured_rate_dec,cutset_lower,cutset_lower_dec,"
        "multicast_upper,multicast_upper_dec,multicast_lower,multicast_lower_dec,"
        "ratio_vs_cutset,ratio_vs_cutset_dec,ratio_vs_multicast,ratio_vs_multicast_dec";
  for (const unsigned group : result.config.group_sizes)
    os << ",decentralized_L" << group << ",decentralized_L" << group << "_dec";
  os << ",notes\n";

  for (const auto& row : result.rows) {
    os << fraction_string(row.memory) << ',' << decimal_string(row.memory, 10);
    put_pair(os, row.centralized);
    put_pair(os, row.measured);
    put_pair(os, row.cutset_lower_value);
    put_pair(os, row.multicast_upper);
    put_pair(os, row.multicast_lower);
    put_pair(os, row.ratio_vs_cutset);
    put_pair(os, row.ratio_vs_multicast);
    for (const auto& dec : row.decentralized) put_pair(os, dec);
    os << ',';
    for (std::size_t i = 0; i < row.notes.size(); ++i) {
      if (i) os << ';';
      os << row.notes[i];
    }
    os << '\n';
  }
  return os.str();
}

void save_sweep_csv(const sweep_result& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << sweep_csv(result);
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace d2dsc
