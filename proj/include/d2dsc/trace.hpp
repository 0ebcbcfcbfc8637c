#pragma once

// The experiment trace: a complete, self-describing record of one placement
// plus delivery round. Everything downstream (decoding, rate accounting,
// secrecy verdicts, the exhaustive oracle) is a pure function of this
// document, and the JSON form round-trips byte-identically for a fixed seed.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "d2dsc/field.hpp"
#include "d2dsc/labels.hpp"
#include "d2dsc/rational.hpp"

namespace d2dsc {

enum class scheme_kind : std::uint8_t { centralized, keyless, decentralized };

std::string to_string(scheme_kind s);
scheme_kind scheme_from_string(const std::string& s);

struct experiment_config {
  scheme_kind scheme = scheme_kind::centralized;
  unsigned users = 0;        // K
  unsigned files = 0;        // N
  unsigned t = 0;            // cache fraction parameter (unused for keyless)
  unsigned group_size = 0;   // L, decentralized only (0 elsewhere)
  unsigned blocks = 1;       // blocks per file
  field_spec field_bits{};   // symbol field
  std::uint64_t seed = 0;
  std::vector<unsigned> demands;  // 1-based file ids, one per user
  bool worst_case_demands = true;

  friend bool operator==(const experiment_config&, const experiment_config&) = default;
};

struct rate_report {
  rational measured = 0;               // transmitted symbols / file symbols
  rational formula = 0;                // closed-form target for this scheme
  std::vector<rational> per_stage;     // decentralized: one entry per stage
  std::optional<rational> formula_last_stage;  // closed-form last-stage value
  bool formula_matches = false;

  friend bool operator==(const rate_report&, const rate_report&) = default;
};

struct memory_entry {
  unsigned user = 0;
  std::uint64_t stored_symbols = 0;
  rational bound_symbols = 0;  // M * (file symbols), exact
  bool exact = false;          // stored == bound
  bool within = false;         // stored <= bound

  friend bool operator==(const memory_entry&, const memory_entry&) = default;
};

struct secrecy_verdict {
  // observer: user id, or 0 for the external eavesdropper
  unsigned observer = 0;
  bool pass = false;
  unsigned rank_joint = 0;     // rank of [A | B] of the view
  unsigned rank_baseline = 0;  // rank of [A_without_protected | B]
  std::optional<unsigned> witness_file;  // a file whose columns escape the baseline span

  friend bool operator==(const secrecy_verdict&, const secrecy_verdict&) = default;
};

struct trace_document {
  static constexpr unsigned schema_version = 1;

  experiment_config config;

  // sharing scheme dimensions actually used (per file block)
  unsigned m = 0;
  unsigned n = 0;

  // decentralized bookkeeping: cache slot and group role per user (1-based
  // positions in config order). role == group number, or 0 for the shared
  // last-stage role. Empty for single-stage schemes.
  struct member_info {
    unsigned user = 0;
    unsigned slot = 0;
    unsigned group = 0;
    bool last_group = false;
    friend bool operator==(const member_info&, const member_info&) = default;
  };
  std::vector<member_info> members;

  // file contents: [file][block][symbol], sizes files x blocks x (n-m)
  std::vector<std::vector<std::vector<symbol>>> file_symbols;

  std::vector<registry_entry> registry;
  std::string registry_digest;  // FNV-1a 64 over payloads in registry order

  std::vector<cache_content> caches;
  std::vector<transmission_record> transmissions;

  // results (recomputable from the above)
  std::vector<decode_result> decode_results;
  rate_report rates;
  std::vector<memory_entry> memory;
  std::vector<secrecy_verdict> caching_verdicts;      // one per user
  std::optional<secrecy_verdict> delivery_verdict;    // eavesdropper
  bool delivery_failure_expected = false;             // keyless annotation

  friend bool operator==(const trace_document&, const trace_document&) = default;

  // Demand of a user, respecting the member list when present (demands are
  // indexed by join order after mobility reassignments).
  unsigned demand_of(unsigned user) const;
};

std::string compute_registry_digest(const std::vector<registry_entry>& reg);

// JSON (de)serialization. Serialization is deterministic: fixed key order,
// lowercase fixed-width hex payloads, LF line endings.
std::string trace_to_json(const trace_document& doc);
trace_document trace_from_json(const std::string& json_text);

void save_trace(const trace_document& doc, const std::string& path);
trace_document load_trace(const std::string& path);

// Payload lookup helpers (derived views over the document).
class payload_index {
 public:
  explicit payload_index(const trace_document& doc);

  // All shares of every (file, block), indexed by scheme share position.
  symbol share(unsigned file, unsigned block, unsigned scheme_index) const;
  symbol key(const key_label& l) const;
  const std::vector<symbol>& shares_of(unsigned file, unsigned block) const;

 private:
  const trace_document* doc_;
  std::vector<std::vector<std::vector<symbol>>> shares_;  // [file-1][block][index]
  std::vector<std::pair<key_label, symbol>> keys_;        // sorted by label
};

// Maps a share label to its scheme share index (allocation subsets appear in
// lexicographic order, replicas within a subset consecutively).
unsigned share_scheme_index(const trace_document& doc, const share_label& l);

// Inverse of share_scheme_index for a given (file, block).
share_label share_label_from_scheme_index(const trace_document& doc, unsigned file,
                                          unsigned block, unsigned index);

}  // namespace d2dsc
