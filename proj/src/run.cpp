#include "d2dsc/run.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "d2dsc/decentralized.hpp"
#include "d2dsc/decode.hpp"
#include "d2dsc/field.hpp"
#include "d2dsc/subsets.hpp"
#include "d2dsc/verifier.hpp"

namespace d2dsc {

trace_document run_e2e(const experiment_config& config, const run_options& opts) {
  trace_document doc;
  switch (config.scheme) {
    case scheme_kind::centralized:
      doc = place_centralized(config);
      deliver_centralized(doc, opts.delivery);
      break;
    case scheme_kind::keyless:
      doc = place_keyless(config);
      deliver_keyless(doc);
      break;
    case scheme_kind::decentralized:
      doc = place_decentralized(config);
      deliver_decentralized(doc);
      break;
  }
  if (opts.decode) doc.decode_results = decode_all(doc);
  compute_rates(doc);
  account_memory(doc);
  if (opts.verdicts) apply_secrecy_verdicts(doc);
  return doc;
}

void compute_rates(trace_document& doc) {
  const auto& c = doc.config;
  if (doc.n <= doc.m || c.blocks == 0)
    throw std::logic_error("compute_rates: document has no sharing dimensions");
  const bigint file_symbols = bigint(c.blocks) * (doc.n - doc.m);

  doc.rates = rate_report{};
  doc.rates.measured = rational(bigint(doc.transmissions.size()), file_symbols);
  switch (c.scheme) {
    case scheme_kind::centralized:
      doc.rates.formula = rational(c.users, c.t);
      break;
    case scheme_kind::keyless:
      doc.rates.formula = rational(c.users, c.users - 1);
      break;
    case scheme_kind::decentralized: {
      const unsigned members =
          doc.members.empty() ? c.users : static_cast<unsigned>(doc.members.size());
      doc.rates.formula = decentralized_rate_closed_form(members, c.group_size, c.t);
      std::map<unsigned, std::uint64_t> stage_counts;
      for (const auto& rec : doc.transmissions) ++stage_counts[rec.stage];
      for (const auto& [stage, count] : stage_counts)
        doc.rates.per_stage.push_back(rational(bigint(count), file_symbols));
      const group_layout g = make_group_layout(members, c.group_size);
      if (g.num_groups >= 2)
        doc.rates.formula_last_stage =
            decentralized_last_stage_closed_form(c.group_size, g.last_size, c.t);
      break;
    }
  }
  doc.rates.formula_matches = doc.rates.measured == doc.rates.formula;
}

namespace {

rational memory_budget(const experiment_config& c) {
  switch (c.scheme) {
    case scheme_kind::centralized:
      return centralized_memory(c.users, c.files, c.t);
    case scheme_kind::keyless:
      return keyless_memory(c.users, c.files);
    case scheme_kind::decentralized:
      return decentralized_memory(c.group_size, c.files, c.t);
  }
  throw std::logic_error("unknown scheme");
}

std::vector<unsigned> active_users(const trace_document& doc) {
  std::vector<unsigned> users;
  if (!doc.members.empty()) {
    for (const auto& mi : doc.members) users.push_back(mi.user);
  } else {
    for (unsigned k = 1; k <= doc.config.users; ++k) users.push_back(k);
  }
  return users;
}

}  // namespace

void account_memory(trace_document& doc) {
  const bigint file_symbols = bigint(doc.config.blocks) * (doc.n - doc.m);
  const rational bound = memory_budget(doc.config) * rational(file_symbols);
  doc.memory.clear();
  for (const unsigned user : active_users(doc)) {
    const auto& cache = doc.caches.at(user - 1);
    memory_entry e;
    e.user = user;
    e.stored_symbols = cache.shares.size() + cache.keys.size();
    e.bound_symbols = bound;
    e.exact = rational(bigint(e.stored_symbols)) == bound;
    e.within = rational(bigint(e.stored_symbols)) <= bound;
    doc.memory.push_back(e);
  }
}

namespace {

struct audit {
  std::vector<std::string> problems;

  void add(const std::string& p) { problems.push_back(p); }

  template <typename A, typename B>
  void expect_eq(const A& got, const B& want, const std::string& what) {
    if (!(got == want)) {
      std::ostringstream os;
      os << what << ": got " << got << ", want " << want;
      problems.push_back(os.str());
    }
  }
};

void check_dimensions(const trace_document& doc, audit& a) {
  const auto& c = doc.config;
  if (c.users < 2) a.add("config: needs at least two users");
  if (c.files < 1) a.add("config: needs at least one file");
  if (c.blocks < 1) a.add("config: needs at least one block");
  const std::size_t expected_demands =
      doc.members.empty() ? c.users : doc.members.size();
  if (c.demands.size() != expected_demands)
    a.add("config: demand list does not match the population size");
  for (const unsigned d : c.demands)
    if (d < 1 || d > c.files) a.add("config: demand out of file range");

  unsigned m = 0, n = 0;
  switch (c.scheme) {
    case scheme_kind::centralized:
      if (c.t < 1 || c.t >= c.users) {
        a.add("config: t out of range");
        return;
      }
      m = static_cast<unsigned>(c.t * binomial_u64(c.users - 1, c.t - 1));
      n = static_cast<unsigned>(c.t * binomial_u64(c.users, c.t));
      break;
    case scheme_kind::keyless:
      m = (c.users - 1) * (c.users - 1);
      n = c.users * (c.users - 1);
      break;
    case scheme_kind::decentralized:
      if (c.group_size < 2 || c.t < 1 || c.t >= c.group_size) {
        a.add("config: group size or t out of range");
        return;
      }
      m = decentralized_sharing_m(c.group_size, c.t);
      n = decentralized_sharing_n(c.group_size, c.t);
      break;
  }
  a.expect_eq(doc.m, m, "sharing threshold m");
  a.expect_eq(doc.n, n, "sharing size n");
  if (doc.n >= field(c.field_bits).order())
    a.add("field too small for the sharing size");
}

void check_payloads(const trace_document& doc, audit& a) {
  a.expect_eq(doc.registry_digest, compute_registry_digest(doc.registry),
              "registry digest");
  const payload_index idx(doc);
  for (const auto& cache : doc.caches) {
    for (const auto& cs : cache.shares) {
      if (cs.payload != idx.share(cs.label.file, cs.label.block,
                                  share_scheme_index(doc, cs.label)))
        a.add("cache of user " + std::to_string(cache.user) +
              ": share payload does not match " + to_string(cs.label));
    }
    for (const auto& ck : cache.keys) {
      if (ck.payload != idx.key(ck.label))
        a.add("cache of user " + std::to_string(cache.user) +
              ": key payload does not match " + to_string(ck.label));
    }
  }
  std::size_t i = 0;
  for (const auto& rec : doc.transmissions) {
    symbol acc = 0;
    for (const auto& sl : rec.share_parts)
      acc = field::add(acc, idx.share(sl.file, sl.block, share_scheme_index(doc, sl)));
    for (const auto& kl : rec.key_parts) acc = field::add(acc, idx.key(kl));
    if (acc != rec.payload)
      a.add("transmission " + std::to_string(i) +
            ": payload does not equal the XOR of its parts");
    ++i;
  }
}

void check_schedule(const trace_document& doc, audit& a) {
  // Sender feasibility: every part of a signal must sit in the sender's cache.
  std::size_t i = 0;
  for (const auto& rec : doc.transmissions) {
    if (rec.sender < 1 || rec.sender > doc.caches.size()) {
      a.add("transmission " + std::to_string(i) + ": unknown sender");
      ++i;
      continue;
    }
    const auto& cache = doc.caches.at(rec.sender - 1);
    for (const auto& sl : rec.share_parts) {
      const bool held = std::any_of(cache.shares.begin(), cache.shares.end(),
                                    [&](const cached_share& cs) { return cs.label == sl; });
      if (!held)
        a.add("transmission " + std::to_string(i) + ": sender " +
              std::to_string(rec.sender) + " does not hold " + to_string(sl));
    }
    for (const auto& kl : rec.key_parts) {
      const bool held = std::any_of(cache.keys.begin(), cache.keys.end(),
                                    [&](const cached_key& ck) { return ck.label == kl; });
      if (!held)
        a.add("transmission " + std::to_string(i) + ": sender " +
              std::to_string(rec.sender) + " does not hold " + to_string(kl));
    }
    ++i;
  }

  // One-time keys: no key label may appear in two signals.
  std::set<key_label> used;
  for (const auto& rec : doc.transmissions)
    for (const auto& kl : rec.key_parts)
      if (!used.insert(kl).second) a.add("key used twice: " + to_string(kl));
}

// Regenerate placement (seed-deterministic) and the delivery schedule, and
// compare them with the recorded ones. Placement comparison only applies
// while the member list is the canonical join order; mobility rewrites it.
void check_regeneration(const trace_document& doc, audit& a) {
  // Placement is a function of the seed alone; use a canonical demand list so
  // that a trace whose population changed after placement still regenerates.
  experiment_config pc = doc.config;
  pc.demands.resize(pc.users);
  for (unsigned k = 1; k <= pc.users; ++k) pc.demands[k - 1] = (k - 1) % pc.files + 1;
  trace_document fresh;
  switch (pc.scheme) {
    case scheme_kind::centralized: fresh = place_centralized(pc); break;
    case scheme_kind::keyless: fresh = place_keyless(pc); break;
    case scheme_kind::decentralized: fresh = place_decentralized(pc); break;
  }
  const bool canonical = fresh.members == doc.members;
  if (canonical) {
    if (fresh.file_symbols != doc.file_symbols) a.add("file symbols deviate from the seed");
    if (fresh.registry != doc.registry) a.add("registry deviates from the seed");
    if (fresh.caches != doc.caches) a.add("caches deviate from placement");
  }

  if (doc.transmissions.empty()) return;
  trace_document replay = doc;
  replay.transmissions.clear();
  switch (doc.config.scheme) {
    case scheme_kind::centralized: deliver_centralized(replay); break;
    case scheme_kind::keyless: deliver_keyless(replay); break;
    case scheme_kind::decentralized: deliver_decentralized(replay); break;
  }
  if (replay.transmissions != doc.transmissions)
    a.add("transmission schedule deviates from regeneration");
}

void check_results(const trace_document& doc, audit& a) {
  if (!doc.decode_results.empty()) {
    if (decode_all(doc) != doc.decode_results)
      a.add("recorded decode results deviate from replay");
    for (const auto& dr : doc.decode_results)
      if (!dr.ok) a.add("user " + std::to_string(dr.user) + " cannot decode its demand");
  }
  {
    trace_document replay = doc;
    compute_rates(replay);
    if (!(replay.rates == doc.rates)) a.add("recorded rates deviate from recomputation");
  }
  if (!doc.memory.empty()) {
    trace_document replay = doc;
    account_memory(replay);
    if (replay.memory != doc.memory) a.add("recorded memory deviates from recomputation");
    for (const auto& e : doc.memory)
      if (!e.within)
        a.add("user " + std::to_string(e.user) + " exceeds the memory budget");
  }
  if (!doc.caching_verdicts.empty() || doc.delivery_verdict.has_value()) {
    trace_document replay = doc;
    apply_secrecy_verdicts(replay);
    if (replay.caching_verdicts != doc.caching_verdicts)
      a.add("recorded caching verdicts deviate from recomputation");
    if (!(replay.delivery_verdict == doc.delivery_verdict))
      a.add("recorded delivery verdict deviates from recomputation");
    if (replay.delivery_failure_expected != doc.delivery_failure_expected)
      a.add("delivery expected-failure annotation deviates");
  }
}

}  // namespace

std::vector<std::string> verify_trace(const trace_document& doc) {
  audit a;
  check_dimensions(doc, a);
  if (!a.problems.empty()) return a.problems;  // later checks assume sane dimensions
  try {
    check_payloads(doc, a);
    check_schedule(doc, a);
    check_regeneration(doc, a);
    check_results(doc, a);
  } catch (const std::exception& e) {
    a.add(std::string("audit aborted: ") + e.what());
  }
  return a.problems;
}

}  // namespace d2dsc
