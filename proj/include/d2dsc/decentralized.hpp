#pragma once

// Decentralized (sequential-arrival) secure caching. Users join in order and
// are assigned cache slots round-robin inside groups of L: user k gets slot
// ((k-1) mod L) + 1 in group ceil(k/L). All users sharing a slot store the
// same slot cache, built from a ramp sharing over the L slots with
// (m, n) = (t*C(L-1,t-1), t*C(L,t)) per file block.
//
// Keys come in families: one family per regular group u (stored in full by
// that group's members), plus a shared last-stage family. Group-1 users store
// their rank-indexed single key from each last-stage bundle; the final
// (possibly partial, size p) group stores the last-stage family in full.
//
// Delivery runs one stage per regular group (exactly the centralized exchange
// over slots, keyed by that group's family) and a final stage in which
// group-1 users act as helpers for the partial group. When K <= L there is a
// single full group: its stage is the regular exchange keyed by family 1, and
// the last-stage singles sit unused in the caches.
//
// Mobility: while placement is open (no transmissions yet), a departing
// user's cache can be handed to a fresh arrival or, absent one, to the most
// recent joiner (whose own cache is released).

#include <optional>
#include <vector>

#include "d2dsc/bounds.hpp"
#include "d2dsc/rational.hpp"
#include "d2dsc/trace.hpp"

namespace d2dsc {

class phase_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct group_layout {
  unsigned users = 0;       // K
  unsigned group_size = 0;  // L
  unsigned num_groups = 0;  // ceil(K/L)
  unsigned last_size = 0;   // p = K - (num_groups-1)*L, in [1, L]
};

group_layout make_group_layout(unsigned users, unsigned group_size);
unsigned slot_of(const group_layout& g, unsigned user);
unsigned group_of(const group_layout& g, unsigned user);

unsigned decentralized_sharing_m(unsigned group_size, unsigned t);
unsigned decentralized_sharing_n(unsigned group_size, unsigned t);

// Per-user cache budget at corner t: N t/(L-t) + 2/t + 1. Group-1 users meet
// it exactly; every other user stores exactly 1/t file units less.
rational decentralized_memory(unsigned group_size, unsigned files, unsigned t);

// Closed-form total delivery rate: (ceil(K/L)-1) * L/t regular stages plus
// the closed-form last-stage term. A single full group (K <= L) delivers at
// L/t. Note the closed form undercounts schedules with several partial-group
// slots per serving set; see decentralized_last_stage_count.
rational decentralized_rate_closed_form(unsigned users, unsigned group_size, unsigned t);
rational decentralized_last_stage_closed_form(unsigned group_size, unsigned last_size, unsigned t);

// Exact last-stage load of the implemented schedule, by direct counting:
// serving sets with one partial-group slot cost t transmissions, sets with
// u >= 2 partial-group slots cost t+1, summed over all C(p,u)*C(L-p,t+1-u)
// set choices, normalized by the file block size.
rational decentralized_last_stage_count(unsigned group_size, unsigned last_size, unsigned t);

// Corners t = 1..L-1 with closed-form rates (memory from decentralized_memory).
std::vector<corner_point> decentralized_corners(unsigned users, unsigned group_size,
                                                unsigned files);

// --- simulation ---

trace_document place_decentralized(const experiment_config& config);
void deliver_decentralized(trace_document& doc);

// Hands the departing user's cache over while placement is open. With an
// arriving user id, the arrival replaces the departed member at the same
// join position; otherwise the most recent joiner takes over the departed
// cache (releasing its own) and the population shrinks by one.
void reassign_on_departure(trace_document& doc, unsigned departing_user,
                           std::optional<unsigned> arriving_user);

}  // namespace d2dsc
