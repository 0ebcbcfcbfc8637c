#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "d2dsc/centralized.hpp"
#include "d2dsc/decode.hpp"
#include "d2dsc/run.hpp"
#include "d2dsc/subsets.hpp"
#include "d2dsc/trace.hpp"

using namespace d2dsc;

namespace {

experiment_config golden_config() {
  experiment_config cfg;
  cfg.scheme = scheme_kind::centralized;
  cfg.users = 4;
  cfg.files = 4;
  cfg.t = 2;
  cfg.blocks = 1;
  cfg.field_bits = field_spec{8, 0x11B};
  cfg.seed = 20260825;
  cfg.demands = {1, 2, 3, 4};
  return cfg;
}

struct expected_signal {
  unsigned sender;
  std::vector<unsigned> subset;
  // (file, allocation set, replica) per share part, ascending helped user
  std::vector<std::tuple<unsigned, std::vector<unsigned>, unsigned>> shares;
  unsigned key_index;
};

// The full delivery schedule for K=N=4, t=2, d=(1,2,3,4). Indices follow the
// sorted-rank rule: a sender's share replica is its rank within the share's
// allocation set, and its key index is its rank within the transmission set.
const std::vector<expected_signal> golden_table = {
    {1, {1, 2, 3}, {{2, {1, 3}, 1}, {3, {1, 2}, 1}}, 1},
    {2, {1, 2, 3}, {{1, {2, 3}, 1}, {3, {1, 2}, 2}}, 2},
    {3, {1, 2, 3}, {{1, {2, 3}, 2}, {2, {1, 3}, 2}}, 3},
    {1, {1, 2, 4}, {{2, {1, 4}, 1}, {4, {1, 2}, 1}}, 1},
    {2, {1, 2, 4}, {{1, {2, 4}, 1}, {4, {1, 2}, 2}}, 2},
    {4, {1, 2, 4}, {{1, {2, 4}, 2}, {2, {1, 4}, 2}}, 3},
    {1, {1, 3, 4}, {{3, {1, 4}, 1}, {4, {1, 3}, 1}}, 1},
    {3, {1, 3, 4}, {{1, {3, 4}, 1}, {4, {1, 3}, 2}}, 2},
    {4, {1, 3, 4}, {{1, {3, 4}, 2}, {3, {1, 4}, 2}}, 3},
    {2, {2, 3, 4}, {{3, {2, 4}, 1}, {4, {2, 3}, 1}}, 1},
    {3, {2, 3, 4}, {{2, {3, 4}, 1}, {4, {2, 3}, 2}}, 2},
    {4, {2, 3, 4}, {{2, {3, 4}, 2}, {3, {2, 4}, 2}}, 3},
};

}  // namespace

TEST_CASE("corner memories and their inverse lookup") {
  CHECK(centralized_memory(4, 4, 1) == rational(10, 3));
  CHECK(centralized_memory(4, 4, 2) == rational(11, 2));
  CHECK(centralized_memory(4, 4, 3) == rational(40, 3));
  CHECK_THROWS_AS(centralized_memory(4, 4, 0), std::invalid_argument);
  CHECK_THROWS_AS(centralized_memory(4, 4, 4), std::invalid_argument);

  CHECK(t_from_memory(4, 4, rational(11, 2)) == 2);
  CHECK(t_from_memory(4, 4, rational(5)) == 1);   // largest corner at or below 5
  CHECK(t_from_memory(4, 4, rational(100)) == 3);
  CHECK(!t_from_memory(4, 4, rational(3)).has_value());
}

TEST_CASE("golden run: schedule matches the worked four-user example signal for signal") {
  const trace_document doc = run_e2e(golden_config());
  CHECK(doc.m == 6);
  CHECK(doc.n == 12);
  REQUIRE(doc.transmissions.size() == golden_table.size());

  for (std::size_t i = 0; i < golden_table.size(); ++i) {
    const auto& rec = doc.transmissions[i];
    const auto& want = golden_table[i];
    CAPTURE(i);
    CHECK(rec.sender == want.sender);
    CHECK(rec.subset == mask_of(want.subset));
    CHECK(rec.stage == 0);
    CHECK(rec.block == 0);
    REQUIRE(rec.share_parts.size() == want.shares.size());
    for (std::size_t j = 0; j < want.shares.size(); ++j) {
      const auto& [file, alloc, replica] = want.shares[j];
      CHECK(rec.share_parts[j].file == file);
      CHECK(rec.share_parts[j].subset == mask_of(alloc));
      CHECK(rec.share_parts[j].replica == replica);
      CHECK(rec.share_parts[j].block == 0);
    }
    REQUIRE(rec.key_parts.size() == 1);
    CHECK(rec.key_parts[0].family == key_family::central);
    CHECK(rec.key_parts[0].subset == rec.subset);
    CHECK(rec.key_parts[0].index == want.key_index);
  }
}

TEST_CASE("golden run: decode, rate, memory, and verdicts") {
  const trace_document doc = run_e2e(golden_config());
  REQUIRE(doc.decode_results.size() == 4);
  for (const auto& dr : doc.decode_results) CHECK(dr.ok);

  CHECK(doc.rates.measured == rational(2));
  CHECK(doc.rates.formula == rational(2));
  CHECK(doc.rates.formula_matches);

  // stored symbols = M * (file symbols) = (11/2) * 6 = 33, met exactly
  REQUIRE(doc.memory.size() == 4);
  for (const auto& e : doc.memory) {
    CHECK(e.stored_symbols == 33);
    CHECK(e.bound_symbols == rational(33));
    CHECK(e.exact);
  }
  for (const auto& v : doc.caching_verdicts) CHECK(v.pass);
  REQUIRE(doc.delivery_verdict.has_value());
  CHECK(doc.delivery_verdict->pass);
  CHECK(!doc.delivery_failure_expected);
  CHECK(verify_trace(doc).empty());
}

TEST_CASE("every corner parameter runs clean") {
  for (unsigned t : {1u, 2u, 3u}) {
    experiment_config cfg = golden_config();
    cfg.t = t;
    const trace_document doc = run_e2e(cfg);
    CAPTURE(t);
    CHECK(doc.rates.measured == rational(4, t));
    for (const auto& dr : doc.decode_results) CHECK(dr.ok);
    for (const auto& e : doc.memory) CHECK(e.exact);
    CHECK(verify_trace(doc).empty());
  }
}

TEST_CASE("share coverage: each share sits in exactly the caches of its allocation set") {
  const trace_document doc = run_e2e(golden_config());
  // collect who holds each share label
  std::map<share_label, std::set<unsigned>> holders;
  for (const auto& cache : doc.caches)
    for (const auto& cs : cache.shares) holders[cs.label].insert(cache.user);
  for (const auto& [label, users] : holders) {
    std::set<unsigned> expect;
    for (unsigned u : set_elements(label.subset)) expect.insert(u);
    CHECK(users == expect);
  }
  // per user and file: t * C(K-1, t-1) = 6 shares, the sharing threshold
  for (const auto& cache : doc.caches) {
    std::map<unsigned, unsigned> per_file;
    for (const auto& cs : cache.shares) ++per_file[cs.label.file];
    for (const auto& [file, count] : per_file) CHECK(count == doc.m);
  }
}

TEST_CASE("dropping one signal surfaces as a named missing share") {
  trace_document doc = run_e2e(golden_config());
  // drop the first signal: sender 1 in {1,2,3} carrying shares for users 2, 3
  doc.transmissions.erase(doc.transmissions.begin());
  const auto results = decode_all(doc);
  REQUIRE(results.size() == 4);
  CHECK(results[0].ok);
  CHECK(results[3].ok);

  CHECK(!results[1].ok);
  REQUIRE(results[1].missing.size() == 1);
  CHECK(results[1].missing[0] == share_label{2, mask_of({1, 3}), 1, 0});
  CHECK(!results[2].ok);
  REQUIRE(results[2].missing.size() == 1);
  CHECK(results[2].missing[0] == share_label{3, mask_of({1, 2}), 1, 0});
}

TEST_CASE("determinism: the trace is a pure function of the config") {
  const trace_document a = run_e2e(golden_config());
  const trace_document b = run_e2e(golden_config());
  CHECK(a == b);
  CHECK(trace_to_json(a) == trace_to_json(b));

  experiment_config other = golden_config();
  other.seed = 20260826;
  const trace_document c = run_e2e(other);
  CHECK(c.registry_digest != a.registry_digest);
}

TEST_CASE("one-time keys and sender feasibility hold across the schedule") {
  const trace_document doc = run_e2e(golden_config());
  std::set<key_label> used;
  for (const auto& rec : doc.transmissions) {
    for (const auto& kl : rec.key_parts) CHECK(used.insert(kl).second);
    const auto& cache = doc.caches.at(rec.sender - 1);
    for (const auto& sl : rec.share_parts)
      CHECK(std::any_of(cache.shares.begin(), cache.shares.end(),
                        [&](const cached_share& cs) { return cs.label == sl; }));
    for (const auto& kl : rec.key_parts)
      CHECK(std::any_of(cache.keys.begin(), cache.keys.end(),
                        [&](const cached_key& ck) { return ck.label == kl; }));
  }
}

TEST_CASE("multi-block runs keep the normalized rate") {
  experiment_config cfg = golden_config();
  cfg.blocks = 3;
  const trace_document doc = run_e2e(cfg);
  CHECK(doc.transmissions.size() == 36);
  CHECK(doc.rates.measured == rational(2));
  for (const auto& dr : doc.decode_results) CHECK(dr.ok);
  CHECK(verify_trace(doc).empty());
}

TEST_CASE("config validation") {
  experiment_config cfg = golden_config();
  cfg.demands = {1, 2};
  CHECK_THROWS_AS(place_centralized(cfg), std::invalid_argument);
  cfg = golden_config();
  cfg.demands = {1, 2, 3, 5};
  CHECK_THROWS_AS(place_centralized(cfg), std::invalid_argument);
  cfg = golden_config();
  cfg.t = 4;
  CHECK_THROWS_AS(place_centralized(cfg), std::invalid_argument);
  cfg = golden_config();
  cfg.field_bits = field_spec{2, 0x7};  // GF(4) cannot host 12 distinct points
  CHECK_THROWS_AS(place_centralized(cfg), std::invalid_argument);
}
