#pragma once

// Centralized secure coded caching for device-to-device delivery, plus its
// keyless variant.
//
// Placement (per file block): an (m, n) = (t*C(K-1,t-1), t*C(K,t)) ramp
// sharing; the n shares are grouped by the C(K,t) t-subsets of users, t
// replicas each, and user k caches every share whose subset contains k.
// One-time keys: (t+1) per (t+1)-subset of users per block, cached by the
// subset's members.
//
// Delivery: for each (t+1)-subset S and sender k in S, one symbol XOR-ing a
// fresh share of each other member's demand with one key of S. Indices follow
// the sorted-rank rule: the key index is k's rank in S; the share replica for
// member l is k's rank in S \ {l}.
//
// Keyless variant: an ((K-1)^2, K(K-1)) sharing per block, shares labeled by
// (slot i, replica j); user k caches all slots i != k and each sender XORs
// one share per other user's demand with no keys at all (secure caching
// holds, secure delivery does not).

#include <cstdint>
#include <optional>
#include <vector>

#include "d2dsc/bounds.hpp"
#include "d2dsc/rational.hpp"
#include "d2dsc/trace.hpp"

namespace d2dsc {

// Sharing dimensions per file block.
unsigned centralized_sharing_m(unsigned users, unsigned t);
unsigned centralized_sharing_n(unsigned users, unsigned t);

// Per-user cache size in file units at corner t: N t/(K-t) + 1/t + 1.
rational centralized_memory(unsigned users, unsigned files, unsigned t);

// Smallest operating point, at t = K-1: M = 2 + N/(K-1).
rational centralized_min_memory(unsigned users, unsigned files);

// All corners t = 1..K-1 with their delivery rates K/t, ascending in t.
std::vector<corner_point> centralized_corners(unsigned users, unsigned files);

// Largest t whose corner memory fits within `memory`, by integer scan.
// nullopt when even t = K-1 does not fit (infeasible memory).
std::optional<unsigned> t_from_memory(unsigned users, unsigned files, const rational& memory);

// Keyless operating point: M = N (K-1).
rational keyless_memory(unsigned users, unsigned files);

// --- simulation over trace documents ---

// Validates the config and runs placement: draws file contents and the
// randomness registry, computes shares and keys, and fills every cache.
trace_document place_centralized(const experiment_config& config);
trace_document place_keyless(const experiment_config& config);

struct delivery_options {
  // Diagnostic ablation: senders skip the one-time keys (payloads become raw
  // share XORs and the key components disappear from the records). Used to
  // demonstrate that the secrecy checks catch a broken delivery.
  bool omit_keys = false;
};

// Appends the full transmission schedule. Demands come from the document
// config (defaulting to worst case d_k = ((k-1) mod N) + 1).
void deliver_centralized(trace_document& doc, const delivery_options& opts = {});
void deliver_keyless(trace_document& doc);

}  // namespace d2dsc
