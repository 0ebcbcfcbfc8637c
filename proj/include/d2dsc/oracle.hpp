#pragma once

// Exhaustive independence oracle: the ground-truth counterpart to the
// rank-based verifier. Instead of trusting a linear-algebra criterion, it
// re-derives the observer's view from the trace, enumerates the randomness
// registry outright, and decides whether the view distribution is identical
// across sampled realizations of the protected files.
//
// The joint view distribution factors across connected components of the
// rows-to-randomness-pools incidence graph, where a pool is either one
// (file, block) vector of sharing coefficients or one one-time key. Each
// component is decided by one of three strategies:
//
//   direct      - tabulate the packed view multiset and compare shifted
//                 copies (exact)
//   dense_conv  - enumerate each pool separately into a histogram over the
//                 packed component rows, XOR-convolve the histograms into the
//                 exact joint distribution, and scan it for shift invariance
//                 (exact; needs the packed width to stay small)
//   structured  - enumerate each pool separately; rows private to one pool
//                 are checked by count shift-invariance, rows straddling
//                 pools by an exact XOR convolution of the remaining pool
//                 histograms (exact; handles wide private blocks, but falls
//                 back if a private value fails to determine its straddling
//                 contribution)
//   fingerprint - full joint enumeration folded into order-independent dual
//                 hash sums (randomized; collision odds ~ 2^-128 per check)
//
// Components whose rows are untouched by every sampled realization are
// reported with states == 0: their conditional distributions coincide as
// mathematical objects and need no enumeration.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "d2dsc/trace.hpp"

namespace d2dsc {

// Raised when a component exceeds every enumeration budget.
class oracle_infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class oracle_strategy : std::uint8_t {
  automatic,
  direct,
  dense_conv,
  structured,
  fingerprint,
};

std::string to_string(oracle_strategy s);

struct oracle_options {
  unsigned samples = 16;  // alternative realizations compared with the trace
  std::uint64_t seed = 0x6f7261636c65ULL;
  std::uint64_t max_states = 1ULL << 24;        // joint budget (fingerprint)
  std::uint64_t exact_tab_limit = 1ULL << 22;   // joint budget (direct)
  std::uint64_t group_state_limit = 1ULL << 18; // per-pool budget (structured)
  unsigned dense_bits = 20;  // packed width budget for convolved distributions
  oracle_strategy force = oracle_strategy::automatic;
};

struct component_report {
  std::vector<unsigned> rows;  // view row indices (build_view order)
  unsigned pools = 0;          // randomness pools joined by these rows
  oracle_strategy strategy = oracle_strategy::direct;
  std::uint64_t states = 0;    // enumeration work performed
  bool identical = true;       // distribution invariant across realizations
};

struct oracle_verdict {
  unsigned observer = 0;  // user id, or 0 for the external eavesdropper
  bool pass = true;
  unsigned samples = 0;
  std::vector<unsigned> protected_files;  // 1-based, sorted
  std::vector<component_report> components;
};

// Decides whether the observer's view distribution is independent of the
// protected files. Throws std::invalid_argument if the trace payloads do not
// match their labels, and oracle_infeasible if a component exceeds the
// enumeration budgets.
oracle_verdict exhaustive_independence(const trace_document& doc, unsigned observer,
                                       std::vector<unsigned> protected_files,
                                       const oracle_options& opts = {});

// Secure caching for one user: every file except the user's demand must be
// invisible given the cache plus the other users' signals.
oracle_verdict oracle_secure_caching(const trace_document& doc, unsigned user,
                                     const oracle_options& opts = {});

// Secure delivery: every file must be invisible to an external observer of
// the full transmission schedule.
oracle_verdict oracle_secure_delivery(const trace_document& doc,
                                      const oracle_options& opts = {});

}  // namespace d2dsc
