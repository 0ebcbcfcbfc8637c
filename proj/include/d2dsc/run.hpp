#pragma once

// One-call experiment pipeline and whole-trace audit.

#include <string>
#include <vector>

#include "d2dsc/centralized.hpp"
#include "d2dsc/trace.hpp"

namespace d2dsc {

struct run_options {
  bool decode = true;
  bool verdicts = true;
  delivery_options delivery{};  // centralized scheme only
};

// Placement, delivery, decoding, rate and memory accounting, and (optionally)
// secrecy verdicts, in one deterministic pass driven by config.seed.
trace_document run_e2e(const experiment_config& config, const run_options& opts = {});

// Fills doc.rates from the recorded schedule: measured load, the closed-form
// target for the scheme, per-stage loads (decentralized), and the closed-form
// last-stage value where a partial-group stage exists.
void compute_rates(trace_document& doc);

// Fills doc.memory: per-user stored symbols against the scheme's corner
// budget M * (file symbols).
void account_memory(trace_document& doc);

// Audits a (possibly deserialized) trace end to end: dimensions, registry
// digest, payload recomputation, schedule regeneration, sender feasibility,
// key single-use, decode replay, and recorded result sections. Returns
// human-readable problems; empty means the trace is internally consistent.
std::vector<std::string> verify_trace(const trace_document& doc);

}  // namespace d2dsc
