#include "d2dsc/decentralized.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include "d2dsc/subsets.hpp"

namespace d2dsc {

group_layout make_group_layout(unsigned users, unsigned group_size) {
  if (group_size < 2) throw std::invalid_argument("group size must be at least 2");
  if (group_size > users) throw std::invalid_argument("group size cannot exceed the user count");
  group_layout g;
  g.users = users;
  g.group_size = group_size;
  g.num_groups = (users + group_size - 1) / group_size;
  g.last_size = users - (g.num_groups - 1) * group_size;
  return g;
}

unsigned slot_of(const group_layout& g, unsigned user) {
  if (user < 1 || user > g.users) throw std::invalid_argument("user out of range");
  return (user - 1) % g.group_size + 1;
}

unsigned group_of(const group_layout& g, unsigned user) {
  if (user < 1 || user > g.users) throw std::invalid_argument("user out of range");
  return (user - 1) / g.group_size + 1;
}

unsigned decentralized_sharing_m(unsigned group_size, unsigned t) {
  return static_cast<unsigned>(t * binomial_u64(group_size - 1, t - 1));
}

unsigned decentralized_sharing_n(unsigned group_size, unsigned t) {
  return static_cast<unsigned>(t * binomial_u64(group_size, t));
}

rational decentralized_memory(unsigned group_size, unsigned files, unsigned t) {
  if (t < 1 || t >= group_size) throw std::invalid_argument("corner needs t in [1, L-1]");
  return rational(files) * t / (group_size - t) + rational(2, t) + 1;
}

rational decentralized_last_stage_closed_form(unsigned group_size, unsigned last_size, unsigned t) {
  const unsigned L = group_size;
  const unsigned p = last_size;
  auto guarded_binom = [](unsigned h, unsigned r) -> bigint {
    return r > h ? bigint(0) : binomial(h, r);
  };
  bigint num = bigint(p) * t * guarded_binom(L - p, t);
  for (unsigned u = 2; u <= std::min(p, t); ++u) {
    num += bigint(t + 1) * guarded_binom(L - p, t - u + 1);
  }
  const bigint den = bigint(L - t) * binomial(L - 1, t - 1);
  return rational(num, den);
}

rational decentralized_last_stage_count(unsigned group_size, unsigned last_size, unsigned t) {
  const unsigned L = group_size;
  const unsigned p = last_size;
  auto guarded_binom = [](unsigned h, unsigned r) -> bigint {
    return r > h ? bigint(0) : binomial(h, r);
  };
  bigint num = bigint(p) * t * guarded_binom(L - p, t);
  for (unsigned u = 2; u <= std::min(p, t + 1); ++u) {
    num += bigint(t + 1) * binomial(p, u) * guarded_binom(L - p, t + 1 - u);
  }
  const bigint den = bigint(L - t) * binomial(L - 1, t - 1);
  return rational(num, den);
}

rational decentralized_rate_closed_form(unsigned users, unsigned group_size, unsigned t) {
  const group_layout g = make_group_layout(users, group_size);
  if (t < 1 || t >= group_size) throw std::invalid_argument("corner needs t in [1, L-1]");
  if (g.num_groups == 1) {
    // single full group: one regular exchange
    return rational(group_size) / t;
  }
  return rational(group_size) * (g.num_groups - 1) / t +
         decentralized_last_stage_closed_form(group_size, g.last_size, t);
}

std::vector<corner_point> decentralized_corners(unsigned users, unsigned group_size,
                                                unsigned files) {
  std::vector<corner_point> out;
  out.reserve(group_size - 1);
  for (unsigned t = 1; t < group_size; ++t) {
    out.push_back({t, decentralized_memory(group_size, files, t),
                   decentralized_rate_closed_form(users, group_size, t)});
  }
  return out;
}

namespace {

std::vector<unsigned> effective_demands(const experiment_config& c, unsigned members) {
  if (!c.demands.empty() && c.demands.size() == members) return c.demands;
  std::vector<unsigned> d(members);
  for (unsigned k = 0; k < members; ++k) d[k] = (k % c.files) + 1;
  return d;
}

}  // namespace

trace_document place_decentralized(const experiment_config& config) {
  if (config.files < 1) throw std::invalid_argument("need at least one file");
  if (config.blocks < 1) throw std::invalid_argument("need at least one block per file");
  const group_layout g = make_group_layout(config.users, config.group_size);
  const unsigned L = config.group_size;
  const unsigned t = config.t;
  if (t < 1 || t >= L) throw std::invalid_argument("decentralized scheme needs t in [1, L-1]");
  if (!config.demands.empty()) {
    if (config.demands.size() != config.users) {
      throw std::invalid_argument("demand vector must list one file per user");
    }
    for (unsigned d : config.demands) {
      if (d < 1 || d > config.files) throw std::invalid_argument("demand index out of range");
    }
  }

  trace_document doc;
  doc.config = config;
  doc.config.demands = effective_demands(config, config.users);
  doc.config.worst_case_demands = config.demands.empty();
  doc.m = decentralized_sharing_m(L, t);
  doc.n = decentralized_sharing_n(L, t);

  const field f(config.field_bits);
  if (doc.n > f.order() - 1) {
    throw std::invalid_argument("field too small for " + std::to_string(doc.n) + " shares");
  }

  for (unsigned k = 1; k <= config.users; ++k) {
    trace_document::member_info mi;
    mi.user = k;
    mi.slot = slot_of(g, k);
    mi.group = group_of(g, k);
    mi.last_group = (g.num_groups > 1 && mi.group == g.num_groups);
    doc.members.push_back(mi);
  }

  std::mt19937_64 rng(config.seed);
  const auto mask = static_cast<symbol>(f.order() - 1);
  auto draw = [&] { return static_cast<symbol>(rng() & mask); };

  const unsigned secret_len = doc.n - doc.m;
  doc.file_symbols.assign(config.files, {});
  for (auto& file : doc.file_symbols) {
    file.assign(config.blocks, {});
    for (auto& block : file) {
      block.resize(secret_len);
      for (auto& s : block) s = draw();
    }
  }

  const unsigned regular_families = std::max(1u, g.num_groups - 1);
  const auto key_sets = combinations(L, t + 1);
  for (unsigned block = 0; block < config.blocks; ++block) {
    for (unsigned file = 1; file <= config.files; ++file) {
      for (unsigned coeff = 0; coeff < doc.m; ++coeff) {
        registry_entry e;
        e.k = registry_entry::kind::sharing;
        e.file = file;
        e.block = block;
        e.coeff = coeff;
        e.payload = draw();
        doc.registry.push_back(e);
      }
    }
    for (unsigned u = 1; u <= regular_families; ++u) {
      for (set_mask s : key_sets) {
        for (unsigned i = 1; i <= t + 1; ++i) {
          registry_entry e;
          e.k = registry_entry::kind::key;
          e.key = key_label{key_family::group, u, s, i, block};
          e.payload = draw();
          doc.registry.push_back(e);
        }
      }
    }
    for (set_mask s : key_sets) {
      for (unsigned i = 1; i <= t + 1; ++i) {
        registry_entry e;
        e.k = registry_entry::kind::key;
        e.key = key_label{key_family::last_stage, 0, s, i, block};
        e.payload = draw();
        doc.registry.push_back(e);
      }
    }
  }
  doc.registry_digest = compute_registry_digest(doc.registry);

  const payload_index idx(doc);
  const auto slot_subsets = combinations(L, t);
  doc.caches.resize(config.users);
  for (const auto& mi : doc.members) {
    cache_content& cache = doc.caches[mi.user - 1];
    cache.user = mi.user;
    for (unsigned file = 1; file <= config.files; ++file) {
      for (unsigned block = 0; block < config.blocks; ++block) {
        for (set_mask sub : slot_subsets) {
          if (!contains(sub, mi.slot)) continue;
          for (unsigned j = 1; j <= t; ++j) {
            share_label l{file, sub, j, block};
            cache.shares.push_back({l, idx.share(file, block, share_scheme_index(doc, l))});
          }
        }
      }
    }
    for (unsigned block = 0; block < config.blocks; ++block) {
      if (mi.last_group) {
        // full last-stage family
        for (set_mask s : key_sets) {
          if (!contains(s, mi.slot)) continue;
          for (unsigned i = 1; i <= t + 1; ++i) {
            key_label l{key_family::last_stage, 0, s, i, block};
            cache.keys.push_back({l, idx.key(l)});
          }
        }
      } else {
        // full own-group family
        for (set_mask s : key_sets) {
          if (!contains(s, mi.slot)) continue;
          for (unsigned i = 1; i <= t + 1; ++i) {
            key_label l{key_family::group, mi.group, s, i, block};
            cache.keys.push_back({l, idx.key(l)});
          }
        }
        if (mi.group == 1) {
          // one last-stage key per bundle, at the member's slot rank
          for (set_mask s : key_sets) {
            if (!contains(s, mi.slot)) continue;
            key_label l{key_family::last_stage, 0, s, rank_in(s, mi.slot), block};
            cache.keys.push_back({l, idx.key(l)});
          }
        }
      }
    }
  }
  return doc;
}

void reassign_on_departure(trace_document& doc, unsigned departing_user,
                           std::optional<unsigned> arriving_user) {
  if (doc.config.scheme != scheme_kind::decentralized) {
    throw std::invalid_argument("mobility reassignment applies to decentralized placements only");
  }
  if (!doc.transmissions.empty()) {
    throw phase_error("placement already closed: delivery has started");
  }
  auto dep = std::find_if(doc.members.begin(), doc.members.end(),
                          [&](const auto& m) { return m.user == departing_user; });
  if (dep == doc.members.end()) throw std::invalid_argument("departing user is not a member");

  if (arriving_user) {
    for (const auto& m : doc.members) {
      if (m.user == *arriving_user) throw std::invalid_argument("arriving user id already in use");
    }
    // the arrival takes over the departed cache, label for label
    cache_content cache = std::move(doc.caches[departing_user - 1]);
    cache.user = *arriving_user;
    dep->user = *arriving_user;
    if (doc.caches.size() < *arriving_user) doc.caches.resize(*arriving_user);
    doc.caches[*arriving_user - 1] = std::move(cache);
    doc.caches[departing_user - 1] = cache_content{};
    return;
  }

  // no arrival: the most recent joiner inherits the departed cache
  auto& last = doc.members.back();
  if (last.user == departing_user) {
    doc.caches[departing_user - 1] = cache_content{};
    doc.members.pop_back();
    return;
  }
  cache_content cache = std::move(doc.caches[departing_user - 1]);
  cache.user = last.user;
  doc.caches[departing_user - 1] = cache_content{};
  doc.caches[last.user - 1] = std::move(cache);
  last.slot = dep->slot;
  last.group = dep->group;
  last.last_group = dep->last_group;
  doc.members.erase(dep);
  // keep join order: the inheritor stays at its original position
}

void deliver_decentralized(trace_document& doc) {
  if (doc.config.scheme != scheme_kind::decentralized) {
    throw std::invalid_argument("document was not placed with the decentralized scheme");
  }
  if (!doc.transmissions.empty()) throw std::invalid_argument("delivery already ran");
  const unsigned L = doc.config.group_size;
  const unsigned t = doc.config.t;

  // demands by member (join order); regenerate worst case if sizes drifted
  const auto demands = effective_demands(doc.config, static_cast<unsigned>(doc.members.size()));
  doc.config.demands = demands;

  // role maps: slot -> user for every regular group and for the last group
  std::map<unsigned, std::map<unsigned, unsigned>> regular;  // group -> slot -> user
  std::map<unsigned, unsigned> last_slots;                   // slot -> user
  std::map<unsigned, unsigned> demand_of;                    // user -> file
  for (std::size_t i = 0; i < doc.members.size(); ++i) {
    const auto& mi = doc.members[i];
    demand_of[mi.user] = demands[i];
    if (mi.last_group) {
      if (!last_slots.emplace(mi.slot, mi.user).second) {
        throw std::invalid_argument("duplicate slot in the last group");
      }
    } else {
      if (!regular[mi.group].emplace(mi.slot, mi.user).second) {
        throw std::invalid_argument("duplicate slot in a regular group");
      }
    }
  }
  for (const auto& [u, slots] : regular) {
    if (slots.size() != L) {
      throw std::invalid_argument("regular group " + std::to_string(u) +
                                  " does not cover all slots");
    }
  }
  const unsigned p_eff = static_cast<unsigned>(last_slots.size());
  for (const auto& [slot, user] : last_slots) {
    if (slot > p_eff) {
      throw std::invalid_argument("last-group slots must form a prefix of the slot range");
    }
  }
  unsigned last_stage_id = 0;
  if (p_eff > 0) {
    last_stage_id = regular.empty() ? 1 : regular.rbegin()->first + 1;
  }

  const payload_index idx(doc);
  const auto serving_sets = combinations(L, t + 1);

  auto share_payload = [&](const share_label& l) {
    return idx.share(l.file, l.block, share_scheme_index(doc, l));
  };

  for (unsigned block = 0; block < doc.config.blocks; ++block) {
    // one regular exchange per full group, keyed by that group's family
    for (const auto& [u, slots] : regular) {
      for (set_mask s : serving_sets) {
        for (unsigned l : set_elements(s)) {
          transmission_record rec;
          rec.stage = u;
          rec.sender = slots.at(l);
          rec.subset = s;
          rec.block = block;
          symbol payload = 0;
          for (unsigned lv : set_elements(s)) {
            if (lv == l) continue;
            const set_mask alloc = s & ~element_bit(lv);
            share_label sl{demand_of.at(slots.at(lv)), alloc, rank_in(alloc, l), block};
            payload = static_cast<symbol>(payload ^ share_payload(sl));
            rec.share_parts.push_back(sl);
          }
          key_label kl{key_family::group, u, s, rank_in(s, l), block};
          payload = static_cast<symbol>(payload ^ idx.key(kl));
          rec.key_parts.push_back(kl);
          rec.payload = payload;
          doc.transmissions.push_back(std::move(rec));
        }
      }
    }

    // last stage: serve the partial group with group-1 helpers
    if (p_eff == 0) continue;
    set_mask partial_mask = 0;
    for (unsigned sl = 1; sl <= p_eff; ++sl) partial_mask |= element_bit(sl);
    static const std::map<unsigned, unsigned> no_helpers;
    const auto& helpers = regular.empty() ? no_helpers : regular.begin()->second;
    auto sender_at = [&](unsigned slot) -> unsigned {
      if (auto it = last_slots.find(slot); it != last_slots.end()) return it->second;
      return helpers.at(slot);
    };

    for (set_mask s : serving_sets) {
      const set_mask star = s & partial_mask;
      if (star == 0) continue;
      if (set_size(star) == 1) {
        // one partial-group target; the other t slots are group-1 helpers
        const unsigned target_slot = set_elements(star)[0];
        const unsigned target_user = last_slots.at(target_slot);
        const set_mask alloc = s & ~element_bit(target_slot);
        for (unsigned lh : set_elements(alloc)) {
          transmission_record rec;
          rec.stage = last_stage_id;
          rec.sender = helpers.at(lh);
          rec.subset = s;
          rec.block = block;
          share_label sl{demand_of.at(target_user), alloc, rank_in(alloc, lh), block};
          key_label kl{key_family::last_stage, 0, s, rank_in(s, lh), block};
          rec.payload = static_cast<symbol>(share_payload(sl) ^ idx.key(kl));
          rec.share_parts.push_back(sl);
          rec.key_parts.push_back(kl);
          doc.transmissions.push_back(std::move(rec));
        }
      } else {
        // several partial-group targets: every member of the set transmits
        for (unsigned l : set_elements(s)) {
          transmission_record rec;
          rec.stage = last_stage_id;
          rec.sender = sender_at(l);
          rec.subset = s;
          rec.block = block;
          symbol payload = 0;
          for (unsigned lv : set_elements(star)) {
            if (lv == l) continue;
            const set_mask alloc = s & ~element_bit(lv);
            share_label sl{demand_of.at(last_slots.at(lv)), alloc, rank_in(alloc, l), block};
            payload = static_cast<symbol>(payload ^ share_payload(sl));
            rec.share_parts.push_back(sl);
          }
          key_label kl{key_family::last_stage, 0, s, rank_in(s, l), block};
          payload = static_cast<symbol>(payload ^ idx.key(kl));
          rec.key_parts.push_back(kl);
          rec.payload = payload;
          doc.transmissions.push_back(std::move(rec));
        }
      }
    }
  }
}

}  // namespace d2dsc
