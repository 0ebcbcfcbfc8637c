#include "d2dsc/verifier.hpp"

#include <map>
#include <stdexcept>

#include "d2dsc/ramp.hpp"

namespace d2dsc {

unsigned linear_view::file_col_base(const trace_document& doc, unsigned file,
                                    unsigned block) const {
  const unsigned secret_len = doc.n - doc.m;
  return ((file - 1) * doc.config.blocks + block) * secret_len;
}

namespace {

struct registry_map {
  // (file, block, coeff) -> registry column; key label -> registry column
  std::map<std::tuple<unsigned, unsigned, unsigned>, unsigned> sharing;
  std::map<key_label, unsigned> keys;

  explicit registry_map(const trace_document& doc) {
    for (unsigned i = 0; i < doc.registry.size(); ++i) {
      const auto& e = doc.registry[i];
      if (e.k == registry_entry::kind::sharing) {
        sharing[{e.file, e.block, e.coeff}] = i;
      } else {
        keys[e.key] = i;
      }
    }
  }
};

}  // namespace

linear_view build_view(const trace_document& doc, unsigned observer) {
  const field f(doc.config.field_bits);
  const auto scheme = make_ramp_scheme(f, doc.m, doc.n);
  const auto mats = sharing_matrix(f, scheme);
  const registry_map rmap(doc);
  const unsigned secret_len = doc.n - doc.m;

  linear_view view;
  view.observer = observer;
  view.file_cols = doc.config.files * doc.config.blocks * secret_len;
  view.registry_cols = static_cast<unsigned>(doc.registry.size());

  const cache_content* cache = nullptr;
  if (observer != 0) {
    cache = &doc.caches.at(observer - 1);
    view.rows = static_cast<unsigned>(cache->shares.size() + cache->keys.size());
  }
  // a user observes the signals of the other users; the eavesdropper sees all
  for (const auto& rec : doc.transmissions) {
    if (rec.sender != observer) ++view.rows;
  }

  view.a = symbol_matrix(view.rows, view.file_cols);
  view.b = symbol_matrix(view.rows, view.registry_cols);

  unsigned row = 0;
  auto add_share_part = [&](unsigned r, const share_label& l) {
    const unsigned idx = share_scheme_index(doc, l);
    const unsigned base = view.file_col_base(doc, l.file, l.block);
    for (unsigned c = 0; c < secret_len; ++c) {
      view.a.at(r, base + c) =
          static_cast<symbol>(view.a.at(r, base + c) ^ mats.a_secret.at(idx, c));
    }
    for (unsigned c = 0; c < doc.m; ++c) {
      const unsigned col = rmap.sharing.at({l.file, l.block, c});
      view.b.at(r, col) = static_cast<symbol>(view.b.at(r, col) ^ mats.b_random.at(idx, c));
    }
  };
  auto add_key_part = [&](unsigned r, const key_label& l) {
    const auto it = rmap.keys.find(l);
    if (it == rmap.keys.end()) {
      throw std::invalid_argument("view references a key missing from the registry");
    }
    view.b.at(r, it->second) = static_cast<symbol>(view.b.at(r, it->second) ^ 1);
  };

  if (cache != nullptr) {
    for (const auto& cs : cache->shares) add_share_part(row++, cs.label);
    for (const auto& ck : cache->keys) add_key_part(row++, ck.label);
  }
  for (const auto& rec : doc.transmissions) {
    if (rec.sender == observer) continue;
    for (const auto& sl : rec.share_parts) add_share_part(row, sl);
    for (const auto& kl : rec.key_parts) add_key_part(row, kl);
    ++row;
  }
  return view;
}

namespace {

// rank of [B | selected file column groups]
unsigned rank_with_files(const trace_document& doc, const linear_view& view,
                         const std::vector<unsigned>& files) {
  const unsigned secret_len = doc.n - doc.m;
  const unsigned extra = static_cast<unsigned>(files.size()) * doc.config.blocks * secret_len;
  symbol_matrix m(view.rows, view.registry_cols + extra);
  for (unsigned r = 0; r < view.rows; ++r) {
    for (unsigned c = 0; c < view.registry_cols; ++c) m.at(r, c) = view.b.at(r, c);
    unsigned out = view.registry_cols;
    for (unsigned file : files) {
      for (unsigned block = 0; block < doc.config.blocks; ++block) {
        const unsigned base = view.file_col_base(doc, file, block);
        for (unsigned c = 0; c < secret_len; ++c) m.at(r, out++) = view.a.at(r, base + c);
      }
    }
  }
  return rank(field(doc.config.field_bits), std::move(m));
}

secrecy_verdict span_check(const trace_document& doc, const linear_view& view,
                           const std::vector<unsigned>& baseline_files) {
  secrecy_verdict v;
  v.observer = view.observer;
  std::vector<unsigned> all_files(doc.config.files);
  for (unsigned i = 0; i < doc.config.files; ++i) all_files[i] = i + 1;

  v.rank_baseline = rank_with_files(doc, view, baseline_files);
  v.rank_joint = rank_with_files(doc, view, all_files);
  v.pass = v.rank_baseline == v.rank_joint;
  if (!v.pass) {
    // name one protected file whose columns escape the baseline span
    for (unsigned file = 1; file <= doc.config.files; ++file) {
      bool in_baseline = false;
      for (unsigned b : baseline_files) in_baseline |= (b == file);
      if (in_baseline) continue;
      auto with = baseline_files;
      with.push_back(file);
      if (rank_with_files(doc, view, with) > v.rank_baseline) {
        v.witness_file = file;
        break;
      }
    }
  }
  return v;
}

}  // namespace

secrecy_verdict check_secure_caching(const trace_document& doc, const linear_view& view,
                                     unsigned demanded_file) {
  if (view.observer == 0) {
    throw std::invalid_argument("secure caching is checked per user, not for the eavesdropper");
  }
  return span_check(doc, view, {demanded_file});
}

secrecy_verdict check_secure_delivery(const trace_document& doc, const linear_view& view) {
  return span_check(doc, view, {});
}

void apply_secrecy_verdicts(trace_document& doc) {
  doc.caching_verdicts.clear();
  auto check_user = [&](unsigned user) {
    const linear_view view = build_view(doc, user);
    doc.caching_verdicts.push_back(check_secure_caching(doc, view, doc.demand_of(user)));
  };
  if (!doc.members.empty()) {
    for (const auto& mi : doc.members) check_user(mi.user);
  } else {
    for (unsigned k = 1; k <= doc.config.users; ++k) check_user(k);
  }
  const linear_view eve = build_view(doc, 0);
  doc.delivery_verdict = check_secure_delivery(doc, eve);
  doc.delivery_failure_expected = doc.config.scheme == scheme_kind::keyless;
}

}  // namespace d2dsc
