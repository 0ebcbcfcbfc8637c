#include "d2dsc/decode.hpp"

#include <map>
#include <stdexcept>

#include "d2dsc/ramp.hpp"
#include "d2dsc/subsets.hpp"

namespace d2dsc {

decoded_file decode_user(const trace_document& doc, unsigned user) {
  decoded_file out;
  out.user = user;
  out.demand = doc.demand_of(user);

  std::map<share_label, symbol> shares;
  std::map<key_label, symbol> keys;
  const cache_content& cache = doc.caches.at(user - 1);
  for (const auto& cs : cache.shares) shares.emplace(cs.label, cs.payload);
  for (const auto& ck : cache.keys) keys.emplace(ck.label, ck.payload);

  // strip known components off received records until nothing new appears
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& rec : doc.transmissions) {
      if (rec.sender == user) continue;  // own signal: built from known parts
      symbol acc = rec.payload;
      const share_label* unknown_share = nullptr;
      const key_label* unknown_key = nullptr;
      unsigned unknown = 0;
      for (const auto& sl : rec.share_parts) {
        if (auto it = shares.find(sl); it != shares.end()) {
          acc = static_cast<symbol>(acc ^ it->second);
        } else {
          ++unknown;
          unknown_share = &sl;
        }
      }
      for (const auto& kl : rec.key_parts) {
        if (auto it = keys.find(kl); it != keys.end()) {
          acc = static_cast<symbol>(acc ^ it->second);
        } else {
          ++unknown;
          unknown_key = &kl;
        }
      }
      if (unknown != 1) continue;
      if (unknown_share != nullptr) {
        shares.emplace(*unknown_share, acc);
      } else {
        keys.emplace(*unknown_key, acc);
      }
      progress = true;
    }
  }

  // assemble the demanded file share by share
  const field f(doc.config.field_bits);
  const auto scheme = make_ramp_scheme(f, doc.m, doc.n);
  out.ok = true;
  out.blocks.assign(doc.config.blocks, {});
  for (unsigned block = 0; block < doc.config.blocks; ++block) {
    std::vector<symbol> ordered(doc.n, 0);
    std::vector<bool> have(doc.n, false);
    for (const auto& [label, payload] : shares) {
      if (label.file != out.demand || label.block != block) continue;
      const unsigned idx = share_scheme_index(doc, label);
      ordered[idx] = payload;
      have[idx] = true;
    }
    bool complete = true;
    for (unsigned i = 0; i < doc.n; ++i) {
      if (!have[i]) {
        complete = false;
        out.missing.push_back(share_label_from_scheme_index(doc, out.demand, block, i));
      }
    }
    if (!complete) {
      out.ok = false;
      out.blocks[block].clear();
      continue;
    }
    out.blocks[block] = reconstruct(f, scheme, ordered);
    if (out.blocks[block] != doc.file_symbols.at(out.demand - 1).at(block)) out.ok = false;
  }
  return out;
}

std::vector<decode_result> decode_all(const trace_document& doc) {
  std::vector<decode_result> out;
  auto run_one = [&](unsigned user) {
    const decoded_file d = decode_user(doc, user);
    decode_result r;
    r.user = d.user;
    r.demand = d.demand;
    r.ok = d.ok;
    r.missing = d.missing;
    out.push_back(std::move(r));
  };
  if (!doc.members.empty()) {
    for (const auto& mi : doc.members) run_one(mi.user);
  } else {
    for (unsigned k = 1; k <= doc.config.users; ++k) run_one(k);
  }
  return out;
}

}  // namespace d2dsc
