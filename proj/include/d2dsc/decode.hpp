#pragma once

// Receiver-side decoding, shared by every scheme. A user knows its cached
// shares and keys; each received transmission is an XOR of labeled
// components. Whenever all but one component of a record is known, the
// remaining one is recovered; iterating to a fixpoint yields everything the
// user can strip out. Decoding succeeds when all n shares of the demanded
// file are available and the ramp reconstruction matches the original file
// bit for bit.

#include <vector>

#include "d2dsc/trace.hpp"

namespace d2dsc {

struct decoded_file {
  unsigned user = 0;
  unsigned demand = 0;
  bool ok = false;
  // reconstruction output, [block][symbol]; empty when shares were missing
  std::vector<std::vector<symbol>> blocks;
  // demanded-file share labels that never became available
  std::vector<share_label> missing;
};

decoded_file decode_user(const trace_document& doc, unsigned user);

// decode_user for every member, reduced to the trace result rows.
std::vector<decode_result> decode_all(const trace_document& doc);

}  // namespace d2dsc
