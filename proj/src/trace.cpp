#include "d2dsc/trace.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "d2dsc/ramp.hpp"
#include "d2dsc/subsets.hpp"

namespace d2dsc {

using ordered_json = nlohmann::ordered_json;

std::string to_string(scheme_kind s) {
  switch (s) {
    case scheme_kind::centralized: return "centralized";
    case scheme_kind::keyless: return "keyless";
    case scheme_kind::decentralized: return "decentralized";
  }
  throw std::logic_error("unknown scheme kind");
}

scheme_kind scheme_from_string(const std::string& s) {
  if (s == "centralized") return scheme_kind::centralized;
  if (s == "keyless") return scheme_kind::keyless;
  if (s == "decentralized") return scheme_kind::decentralized;
  throw std::invalid_argument("unknown scheme: " + s);
}

namespace {

std::string set_string(set_mask m) {
  std::string out = "{";
  bool first = true;
  for (unsigned e : set_elements(m)) {
    if (!first) out += ",";
    out += std::to_string(e);
    first = false;
  }
  return out + "}";
}

std::string family_string(const key_label& l) {
  switch (l.family) {
    case key_family::central: return "central";
    case key_family::group: return "g" + std::to_string(l.group);
    case key_family::last_stage: return "last";
  }
  throw std::logic_error("unknown key family");
}

void family_from_string(const std::string& s, key_label& l) {
  if (s == "central") {
    l.family = key_family::central;
    l.group = 0;
  } else if (s == "last") {
    l.family = key_family::last_stage;
    l.group = 0;
  } else if (s.size() > 1 && s[0] == 'g') {
    l.family = key_family::group;
    l.group = static_cast<unsigned>(std::stoul(s.substr(1)));
  } else {
    throw std::invalid_argument("unknown key family: " + s);
  }
}

}  // namespace

std::string to_string(const share_label& l) {
  return "S[file=" + std::to_string(l.file) + ",set=" + set_string(l.subset) +
         ",j=" + std::to_string(l.replica) + ",b=" + std::to_string(l.block) + "]";
}

std::string to_string(const key_label& l) {
  return "K[" + family_string(l) + ",set=" + set_string(l.subset) +
         ",i=" + std::to_string(l.index) + ",b=" + std::to_string(l.block) + "]";
}

unsigned trace_document::demand_of(unsigned user) const {
  if (!members.empty()) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (members[i].user == user) return config.demands.at(i);
    }
    throw std::invalid_argument("user is not a member of this run");
  }
  if (user < 1 || user > config.users) throw std::invalid_argument("user out of range");
  return config.demands.at(user - 1);
}

std::string compute_registry_digest(const std::vector<registry_entry>& reg) {
  // FNV-1a over the little-endian payload bytes in registry order
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto feed = [&h](std::uint8_t byte) {
    h ^= byte;
    h *= 0x100000001b3ull;
  };
  for (const auto& e : reg) {
    feed(static_cast<std::uint8_t>(e.payload & 0xFF));
    feed(static_cast<std::uint8_t>(e.payload >> 8));
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

unsigned share_scheme_index(const trace_document& doc, const share_label& l) {
  const auto& c = doc.config;
  if (l.file < 1 || l.file > c.files) throw std::invalid_argument("share label: bad file");
  if (l.block >= c.blocks) throw std::invalid_argument("share label: bad block");
  if (c.scheme == scheme_kind::keyless) {
    if (set_size(l.subset) != 1) throw std::invalid_argument("keyless share label needs one slot");
    const unsigned slot = set_elements(l.subset)[0];
    if (slot > c.users || l.replica < 1 || l.replica > c.users - 1) {
      throw std::invalid_argument("keyless share label out of range");
    }
    return (slot - 1) * (c.users - 1) + (l.replica - 1);
  }
  const unsigned universe = c.scheme == scheme_kind::decentralized ? c.group_size : c.users;
  if (set_size(l.subset) != c.t) throw std::invalid_argument("share label: subset size != t");
  if (l.replica < 1 || l.replica > c.t) throw std::invalid_argument("share label: bad replica");
  const auto idx = comb_rank_lex(l.subset, universe) * c.t + (l.replica - 1);
  return static_cast<unsigned>(idx);
}

share_label share_label_from_scheme_index(const trace_document& doc, unsigned file,
                                          unsigned block, unsigned index) {
  const auto& c = doc.config;
  share_label l;
  l.file = file;
  l.block = block;
  if (c.scheme == scheme_kind::keyless) {
    l.subset = element_bit(index / (c.users - 1) + 1);
    l.replica = index % (c.users - 1) + 1;
    return l;
  }
  const unsigned universe = c.scheme == scheme_kind::decentralized ? c.group_size : c.users;
  const auto combs = combinations(universe, c.t);
  l.subset = combs.at(index / c.t);
  l.replica = index % c.t + 1;
  return l;
}

payload_index::payload_index(const trace_document& doc) : doc_(&doc) {
  const field f(doc.config.field_bits);
  const auto scheme = make_ramp_scheme(f, doc.m, doc.n);

  // gather sharing coefficients per (file, block)
  std::vector<std::vector<std::vector<symbol>>> coeffs(
      doc.config.files,
      std::vector<std::vector<symbol>>(doc.config.blocks, std::vector<symbol>(doc.m, 0)));
  std::vector<std::vector<std::vector<bool>>> seen(
      doc.config.files,
      std::vector<std::vector<bool>>(doc.config.blocks, std::vector<bool>(doc.m, false)));
  for (const auto& e : doc.registry) {
    if (e.k == registry_entry::kind::sharing) {
      if (e.file < 1 || e.file > doc.config.files || e.block >= doc.config.blocks ||
          e.coeff >= doc.m) {
        throw std::invalid_argument("registry sharing entry out of range");
      }
      coeffs[e.file - 1][e.block][e.coeff] = e.payload;
      seen[e.file - 1][e.block][e.coeff] = true;
    } else {
      keys_.emplace_back(e.key, e.payload);
    }
  }
  for (const auto& per_file : seen) {
    for (const auto& per_block : per_file) {
      for (bool s : per_block) {
        if (!s) throw std::invalid_argument("registry is missing sharing coefficients");
      }
    }
  }
  std::sort(keys_.begin(), keys_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  shares_.assign(doc.config.files, {});
  for (unsigned file = 1; file <= doc.config.files; ++file) {
    shares_[file - 1].assign(doc.config.blocks, {});
    for (unsigned block = 0; block < doc.config.blocks; ++block) {
      shares_[file - 1][block] = share_block(f, scheme, doc.file_symbols[file - 1][block],
                                             coeffs[file - 1][block]);
    }
  }
}

symbol payload_index::share(unsigned file, unsigned block, unsigned scheme_index) const {
  return shares_.at(file - 1).at(block).at(scheme_index);
}

const std::vector<symbol>& payload_index::shares_of(unsigned file, unsigned block) const {
  return shares_.at(file - 1).at(block);
}

symbol payload_index::key(const key_label& l) const {
  auto it = std::lower_bound(keys_.begin(), keys_.end(), l,
                             [](const auto& a, const key_label& b) { return a.first < b; });
  if (it == keys_.end() || !(it->first == l)) {
    throw std::invalid_argument("key not present in registry: " + to_string(l));
  }
  return it->second;
}

// --- JSON serialization ---

namespace {

unsigned hex_width(const field_spec& fs) { return (fs.bits + 3) / 4; }

std::string hex_symbol(symbol v, unsigned width) {
  char buf[16];
  const int w = static_cast<int>(width > 8 ? 8 : width);
  std::snprintf(buf, sizeof(buf), "%0*x", w, static_cast<unsigned>(v));
  return buf;
}

symbol symbol_from_hex(const std::string& s) {
  return static_cast<symbol>(std::stoul(s, nullptr, 16));
}

ordered_json set_json(set_mask m) {
  ordered_json arr = ordered_json::array();
  for (unsigned e : set_elements(m)) arr.push_back(e);
  return arr;
}

set_mask set_from_json(const ordered_json& arr) {
  std::vector<unsigned> elems;
  for (const auto& e : arr) elems.push_back(e.get<unsigned>());
  return mask_of(elems);
}

ordered_json share_label_json(const share_label& l) {
  return ordered_json{
      {"file", l.file}, {"set", set_json(l.subset)}, {"replica", l.replica}, {"block", l.block}};
}

share_label share_label_from_json(const ordered_json& j) {
  share_label l;
  l.file = j.at("file").get<unsigned>();
  l.subset = set_from_json(j.at("set"));
  l.replica = j.at("replica").get<unsigned>();
  l.block = j.at("block").get<unsigned>();
  return l;
}

ordered_json key_label_json(const key_label& l) {
  return ordered_json{{"family", family_string(l)},
                      {"set", set_json(l.subset)},
                      {"index", l.index},
                      {"block", l.block}};
}

key_label key_label_from_json(const ordered_json& j) {
  key_label l;
  family_from_string(j.at("family").get<std::string>(), l);
  l.subset = set_from_json(j.at("set"));
  l.index = j.at("index").get<unsigned>();
  l.block = j.at("block").get<unsigned>();
  return l;
}

ordered_json rational_json(const rational& r) { return fraction_string(r); }

rational rational_from_json(const ordered_json& j) {
  return parse_rational(j.get<std::string>());
}

ordered_json verdict_json(const secrecy_verdict& v) {
  ordered_json j{{"observer", v.observer},
                 {"pass", v.pass},
                 {"rank_joint", v.rank_joint},
                 {"rank_baseline", v.rank_baseline}};
  if (v.witness_file) {
    j["witness_file"] = *v.witness_file;
  } else {
    j["witness_file"] = nullptr;
  }
  return j;
}

secrecy_verdict verdict_from_json(const ordered_json& j) {
  secrecy_verdict v;
  v.observer = j.at("observer").get<unsigned>();
  v.pass = j.at("pass").get<bool>();
  v.rank_joint = j.at("rank_joint").get<unsigned>();
  v.rank_baseline = j.at("rank_baseline").get<unsigned>();
  if (!j.at("witness_file").is_null()) v.witness_file = j.at("witness_file").get<unsigned>();
  return v;
}

}  // namespace

std::string trace_to_json(const trace_document& doc) {
  const unsigned w = hex_width(doc.config.field_bits);
  ordered_json j;
  j["schema_version"] = trace_document::schema_version;

  {
    ordered_json c;
    c["scheme"] = to_string(doc.config.scheme);
    c["users"] = doc.config.users;
    c["files"] = doc.config.files;
    c["t"] = doc.config.t;
    c["group_size"] = doc.config.group_size;
    c["blocks"] = doc.config.blocks;
    c["field_bits"] = doc.config.field_bits.bits;
    char poly[16];
    std::snprintf(poly, sizeof(poly), "0x%x", doc.config.field_bits.poly);
    c["reduction_poly"] = poly;
    c["seed"] = doc.config.seed;
    c["demands"] = doc.config.demands;
    c["worst_case_demands"] = doc.config.worst_case_demands;
    j["config"] = std::move(c);
  }

  j["sharing"] = ordered_json{{"m", doc.m}, {"n", doc.n}};

  {
    ordered_json arr = ordered_json::array();
    for (const auto& mi : doc.members) {
      arr.push_back(ordered_json{{"user", mi.user},
                                 {"slot", mi.slot},
                                 {"group", mi.group},
                                 {"last_group", mi.last_group}});
    }
    j["members"] = std::move(arr);
  }

  {
    ordered_json arr = ordered_json::array();
    for (unsigned file = 1; file <= doc.config.files; ++file) {
      ordered_json blocks = ordered_json::array();
      for (const auto& block : doc.file_symbols[file - 1]) {
        ordered_json syms = ordered_json::array();
        for (symbol s : block) syms.push_back(hex_symbol(s, w));
        blocks.push_back(std::move(syms));
      }
      arr.push_back(ordered_json{{"file", file}, {"blocks", std::move(blocks)}});
    }
    j["files"] = std::move(arr);
  }

  {
    ordered_json arr = ordered_json::array();
    for (const auto& e : doc.registry) {
      if (e.k == registry_entry::kind::sharing) {
        arr.push_back(ordered_json{{"kind", "sharing"},
                                   {"file", e.file},
                                   {"block", e.block},
                                   {"coeff", e.coeff},
                                   {"payload", hex_symbol(e.payload, w)}});
      } else {
        ordered_json kj = key_label_json(e.key);
        kj["payload"] = hex_symbol(e.payload, w);
        ordered_json entry{{"kind", "key"}};
        entry.update(kj);
        arr.push_back(std::move(entry));
      }
    }
    j["registry"] = std::move(arr);
    j["registry_digest"] = doc.registry_digest;
  }

  {
    ordered_json arr = ordered_json::array();
    for (const auto& cache : doc.caches) {
      ordered_json shares = ordered_json::array();
      for (const auto& cs : cache.shares) {
        ordered_json sj = share_label_json(cs.label);
        sj["payload"] = hex_symbol(cs.payload, w);
        shares.push_back(std::move(sj));
      }
      ordered_json keys = ordered_json::array();
      for (const auto& ck : cache.keys) {
        ordered_json kj = key_label_json(ck.label);
        kj["payload"] = hex_symbol(ck.payload, w);
        keys.push_back(std::move(kj));
      }
      arr.push_back(ordered_json{
          {"user", cache.user}, {"shares", std::move(shares)}, {"keys", std::move(keys)}});
    }
    j["caches"] = std::move(arr);
  }

  {
    ordered_json arr = ordered_json::array();
    for (const auto& rec : doc.transmissions) {
      ordered_json shares = ordered_json::array();
      for (const auto& sl : rec.share_parts) shares.push_back(share_label_json(sl));
      ordered_json keys = ordered_json::array();
      for (const auto& kl : rec.key_parts) keys.push_back(key_label_json(kl));
      arr.push_back(ordered_json{{"stage", rec.stage},
                                 {"sender", rec.sender},
                                 {"set", set_json(rec.subset)},
                                 {"block", rec.block},
                                 {"payload", hex_symbol(rec.payload, w)},
                                 {"shares", std::move(shares)},
                                 {"keys", std::move(keys)}});
    }
    j["transmissions"] = std::move(arr);
  }

  {
    ordered_json arr = ordered_json::array();
    for (const auto& r : doc.decode_results) {
      ordered_json missing = ordered_json::array();
      for (const auto& sl : r.missing) missing.push_back(share_label_json(sl));
      arr.push_back(ordered_json{{"user", r.user},
                                 {"demand", r.demand},
                                 {"ok", r.ok},
                                 {"missing", std::move(missing)}});
    }
    j["decode"] = std::move(arr);
  }

  {
    ordered_json r;
    r["measured"] = rational_json(doc.rates.measured);
    r["measured_decimal"] = decimal_string(doc.rates.measured);
    r["formula"] = rational_json(doc.rates.formula);
    r["formula_decimal"] = decimal_string(doc.rates.formula);
    r["formula_matches"] = doc.rates.formula_matches;
    ordered_json per_stage = ordered_json::array();
    for (const auto& s : doc.rates.per_stage) per_stage.push_back(rational_json(s));
    r["per_stage"] = std::move(per_stage);
    if (doc.rates.formula_last_stage) {
      r["last_stage_formula"] = rational_json(*doc.rates.formula_last_stage);
    } else {
      r["last_stage_formula"] = nullptr;
    }
    j["rates"] = std::move(r);
  }

  {
    ordered_json arr = ordered_json::array();
    for (const auto& me : doc.memory) {
      arr.push_back(ordered_json{{"user", me.user},
                                 {"stored_symbols", me.stored_symbols},
                                 {"bound_symbols", rational_json(me.bound_symbols)},
                                 {"exact", me.exact},
                                 {"within", me.within}});
    }
    j["memory"] = std::move(arr);
  }

  {
    ordered_json v;
    ordered_json caching = ordered_json::array();
    for (const auto& cv : doc.caching_verdicts) caching.push_back(verdict_json(cv));
    v["secure_caching"] = std::move(caching);
    if (doc.delivery_verdict) {
      v["secure_delivery"] = verdict_json(*doc.delivery_verdict);
    } else {
      v["secure_delivery"] = nullptr;
    }
    v["delivery_failure_expected"] = doc.delivery_failure_expected;
    j["verdicts"] = std::move(v);
  }

  return j.dump(2) + "\n";
}

trace_document trace_from_json(const std::string& json_text) {
  const ordered_json j = ordered_json::parse(json_text);
  if (j.at("schema_version").get<unsigned>() != trace_document::schema_version) {
    throw std::invalid_argument("unsupported trace schema version");
  }
  trace_document doc;

  {
    const auto& c = j.at("config");
    doc.config.scheme = scheme_from_string(c.at("scheme").get<std::string>());
    doc.config.users = c.at("users").get<unsigned>();
    doc.config.files = c.at("files").get<unsigned>();
    doc.config.t = c.at("t").get<unsigned>();
    doc.config.group_size = c.at("group_size").get<unsigned>();
    doc.config.blocks = c.at("blocks").get<unsigned>();
    doc.config.field_bits.bits = c.at("field_bits").get<unsigned>();
    doc.config.field_bits.poly = static_cast<std::uint32_t>(
        std::stoul(c.at("reduction_poly").get<std::string>(), nullptr, 16));
    doc.config.seed = c.at("seed").get<std::uint64_t>();
    doc.config.demands = c.at("demands").get<std::vector<unsigned>>();
    doc.config.worst_case_demands = c.at("worst_case_demands").get<bool>();
  }

  doc.m = j.at("sharing").at("m").get<unsigned>();
  doc.n = j.at("sharing").at("n").get<unsigned>();

  for (const auto& mj : j.at("members")) {
    trace_document::member_info mi;
    mi.user = mj.at("user").get<unsigned>();
    mi.slot = mj.at("slot").get<unsigned>();
    mi.group = mj.at("group").get<unsigned>();
    mi.last_group = mj.at("last_group").get<bool>();
    doc.members.push_back(mi);
  }

  doc.file_symbols.assign(doc.config.files, {});
  for (const auto& fj : j.at("files")) {
    const unsigned file = fj.at("file").get<unsigned>();
    if (file < 1 || file > doc.config.files) throw std::invalid_argument("file id out of range");
    auto& blocks = doc.file_symbols[file - 1];
    for (const auto& bj : fj.at("blocks")) {
      std::vector<symbol> syms;
      for (const auto& sj : bj) syms.push_back(symbol_from_hex(sj.get<std::string>()));
      blocks.push_back(std::move(syms));
    }
  }

  for (const auto& ej : j.at("registry")) {
    registry_entry e;
    if (ej.at("kind").get<std::string>() == "sharing") {
      e.k = registry_entry::kind::sharing;
      e.file = ej.at("file").get<unsigned>();
      e.block = ej.at("block").get<unsigned>();
      e.coeff = ej.at("coeff").get<unsigned>();
    } else {
      e.k = registry_entry::kind::key;
      e.key = key_label_from_json(ej);
    }
    e.payload = symbol_from_hex(ej.at("payload").get<std::string>());
    doc.registry.push_back(e);
  }
  doc.registry_digest = j.at("registry_digest").get<std::string>();

  for (const auto& cj : j.at("caches")) {
    cache_content cache;
    cache.user = cj.at("user").get<unsigned>();
    for (const auto& sj : cj.at("shares")) {
      cache.shares.push_back(
          {share_label_from_json(sj), symbol_from_hex(sj.at("payload").get<std::string>())});
    }
    for (const auto& kj : cj.at("keys")) {
      cache.keys.push_back(
          {key_label_from_json(kj), symbol_from_hex(kj.at("payload").get<std::string>())});
    }
    doc.caches.push_back(std::move(cache));
  }

  for (const auto& tj : j.at("transmissions")) {
    transmission_record rec;
    rec.stage = tj.at("stage").get<unsigned>();
    rec.sender = tj.at("sender").get<unsigned>();
    rec.subset = set_from_json(tj.at("set"));
    rec.block = tj.at("block").get<unsigned>();
    rec.payload = symbol_from_hex(tj.at("payload").get<std::string>());
    for (const auto& sj : tj.at("shares")) rec.share_parts.push_back(share_label_from_json(sj));
    for (const auto& kj : tj.at("keys")) rec.key_parts.push_back(key_label_from_json(kj));
    doc.transmissions.push_back(std::move(rec));
  }

  for (const auto& dj : j.at("decode")) {
    decode_result r;
    r.user = dj.at("user").get<unsigned>();
    r.demand = dj.at("demand").get<unsigned>();
    r.ok = dj.at("ok").get<bool>();
    for (const auto& mj : dj.at("missing")) r.missing.push_back(share_label_from_json(mj));
    doc.decode_results.push_back(std::move(r));
  }

  {
    const auto& r = j.at("rates");
    doc.rates.measured = rational_from_json(r.at("measured"));
    doc.rates.formula = rational_from_json(r.at("formula"));
    doc.rates.formula_matches = r.at("formula_matches").get<bool>();
    for (const auto& sj : r.at("per_stage")) doc.rates.per_stage.push_back(rational_from_json(sj));
    if (!r.at("last_stage_formula").is_null()) {
      doc.rates.formula_last_stage = rational_from_json(r.at("last_stage_formula"));
    }
  }

  for (const auto& mj : j.at("memory")) {
    memory_entry me;
    me.user = mj.at("user").get<unsigned>();
    me.stored_symbols = mj.at("stored_symbols").get<std::uint64_t>();
    me.bound_symbols = rational_from_json(mj.at("bound_symbols"));
    me.exact = mj.at("exact").get<bool>();
    me.within = mj.at("within").get<bool>();
    doc.memory.push_back(me);
  }

  {
    const auto& v = j.at("verdicts");
    for (const auto& vj : v.at("secure_caching")) {
      doc.caching_verdicts.push_back(verdict_from_json(vj));
    }
    if (!v.at("secure_delivery").is_null()) {
      doc.delivery_verdict = verdict_from_json(v.at("secure_delivery"));
    }
    doc.delivery_failure_expected = v.at("delivery_failure_expected").get<bool>();
  }

  return doc;
}

void save_trace(const trace_document& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: keep LF endings everywhere
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << trace_to_json(doc);
  if (!out) throw std::runtime_error("write failed: " + path);
}

trace_document load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return trace_from_json(ss.str());
}

}  // namespace d2dsc
