#pragma once

// Algebraic secrecy verification. An observer's view (cached symbols plus
// overheard transmissions) is expressed as a linear map over GF(2^w):
//
//   view = A * (file symbols) + B * (registry randomness)
//
// with one row per observed symbol. Since the files and the registry symbols
// are uniform and independent, a set of file columns is information-free for
// the observer exactly when it lies in the column span of the remaining
// columns: secure caching for user k demands rank [A_{d_k} | B] = rank [A | B]
// (files other than the demand add nothing), and secure delivery for the
// eavesdropper demands rank B = rank [A | B].

#include <optional>

#include "d2dsc/matrix.hpp"
#include "d2dsc/trace.hpp"

namespace d2dsc {

struct linear_view {
  unsigned observer = 0;  // user id, or 0 for the external eavesdropper
  unsigned rows = 0;
  unsigned file_cols = 0;      // files * blocks * (n-m), file-major
  unsigned registry_cols = 0;  // one per registry entry, registry order
  symbol_matrix a;             // rows x file_cols
  symbol_matrix b;             // rows x registry_cols

  // first column of (file, block)'s secret symbols within `a`
  unsigned file_col_base(const trace_document& doc, unsigned file, unsigned block) const;
};

// Observer 0 sees every transmission. A user sees its own cache (shares, then
// keys) followed by every transmission sent by the other users; its own
// signals are omitted since they are functions of the cache.
linear_view build_view(const trace_document& doc, unsigned observer);

secrecy_verdict check_secure_caching(const trace_document& doc, const linear_view& view,
                                     unsigned demanded_file);
secrecy_verdict check_secure_delivery(const trace_document& doc, const linear_view& view);

// Convenience: replays both checks for every member plus the eavesdropper
// and writes the verdicts into the document.
void apply_secrecy_verdicts(trace_document& doc);

}  // namespace d2dsc
