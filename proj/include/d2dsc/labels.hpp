#pragma once

// Shared label vocabulary for caches, transmissions, and the randomness
// registry. Every payload that moves through a scheme carries a structured
// label so that views can be rebuilt and audited from metadata alone.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "d2dsc/field.hpp"
#include "d2dsc/subsets.hpp"

namespace d2dsc {

// One share of one file block. `subset` is the allocation set: a t-subset of
// users (centralized), a t-subset of cache slots (decentralized), or the
// singleton slot {i} (keyless). `replica` is the 1-based index j among the
// replicas tied to the same subset.
struct share_label {
  unsigned file = 0;  // 1-based
  set_mask subset = 0;
  unsigned replica = 0;
  unsigned block = 0;  // 0-based

  auto operator<=>(const share_label&) const = default;
};

// Key family: the centralized scheme has a single family; the decentralized
// scheme has one family per regular group plus the shared last-stage family.
enum class key_family : std::uint8_t { central, group, last_stage };

struct key_label {
  key_family family = key_family::central;
  unsigned group = 0;  // meaningful only for key_family::group
  set_mask subset = 0;  // the (t+1)-subset the key serves
  unsigned index = 0;   // 1-based index within the subset's key bundle
  unsigned block = 0;

  auto operator<=>(const key_label&) const = default;
};

std::string to_string(const share_label& l);
std::string to_string(const key_label& l);

// A transmission: sender XORs the listed components into one symbol.
struct transmission_record {
  unsigned stage = 0;   // 0 = single-stage schemes; decentralized stages are 1-based
  unsigned sender = 0;  // user id
  set_mask subset = 0;  // the serving set (users or slots, scheme-dependent)
  unsigned block = 0;
  symbol payload = 0;
  std::vector<share_label> share_parts;
  std::vector<key_label> key_parts;

  friend bool operator==(const transmission_record&, const transmission_record&) = default;
};

// What one user stores after placement. Payloads are carried alongside the
// labels (they are what the user actually holds); the audit recomputes every
// one of them from the file contents and the randomness registry.
struct cached_share {
  share_label label;
  symbol payload = 0;
  friend bool operator==(const cached_share&, const cached_share&) = default;
};

struct cached_key {
  key_label label;
  symbol payload = 0;
  friend bool operator==(const cached_key&, const cached_key&) = default;
};

struct cache_content {
  unsigned user = 0;
  std::vector<cached_share> shares;
  std::vector<cached_key> keys;

  friend bool operator==(const cache_content&, const cache_content&) = default;
};

// Randomness registry entry: every random symbol drawn after the file
// contents, in draw order. Sharing coefficients are identified by their
// (file, block, coefficient) slot, keys by their label.
struct registry_entry {
  enum class kind : std::uint8_t { sharing, key } k = kind::sharing;
  // sharing
  unsigned file = 0;
  unsigned block = 0;
  unsigned coeff = 0;
  // key
  key_label key;
  symbol payload = 0;

  friend bool operator==(const registry_entry&, const registry_entry&) = default;
};

struct decode_result {
  unsigned user = 0;
  unsigned demand = 0;
  bool ok = false;
  // allocation subsets of the demanded file that never became available
  std::vector<share_label> missing;

  friend bool operator==(const decode_result&, const decode_result&) = default;
};

}  // namespace d2dsc
