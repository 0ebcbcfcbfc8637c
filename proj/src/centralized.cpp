#include "d2dsc/centralized.hpp"

#include <random>
#include <stdexcept>

#include "d2dsc/ramp.hpp"
#include "d2dsc/subsets.hpp"

namespace d2dsc {

unsigned centralized_sharing_m(unsigned users, unsigned t) {
  return static_cast<unsigned>(t * binomial_u64(users - 1, t - 1));
}

unsigned centralized_sharing_n(unsigned users, unsigned t) {
  return static_cast<unsigned>(t * binomial_u64(users, t));
}

rational centralized_memory(unsigned users, unsigned files, unsigned t) {
  if (t < 1 || t >= users) throw std::invalid_argument("centralized corner needs t in [1, K-1]");
  return rational(files) * t / (users - t) + rational(1, t) + 1;
}

rational centralized_min_memory(unsigned users, unsigned files) {
  return rational(2) + rational(files, users - 1);
}

std::vector<corner_point> centralized_corners(unsigned users, unsigned files) {
  if (users < 2) throw std::invalid_argument("need at least two users");
  std::vector<corner_point> out;
  out.reserve(users - 1);
  for (unsigned t = 1; t < users; ++t) {
    out.push_back({t, centralized_memory(users, files, t), rational(users) / t});
  }
  return out;
}

std::optional<unsigned> t_from_memory(unsigned users, unsigned files, const rational& memory) {
  std::optional<unsigned> best;
  for (unsigned t = 1; t < users; ++t) {
    if (centralized_memory(users, files, t) <= memory) best = t;
  }
  return best;
}

rational keyless_memory(unsigned users, unsigned files) {
  return rational(files) * (users - 1);
}

namespace {

void validate_common(const experiment_config& c) {
  if (c.users < 2) throw std::invalid_argument("need at least two users");
  if (c.files < 1) throw std::invalid_argument("need at least one file");
  if (c.blocks < 1) throw std::invalid_argument("need at least one block per file");
  if (!c.demands.empty()) {
    if (c.demands.size() != c.users) {
      throw std::invalid_argument("demand vector must list one file per user");
    }
    for (unsigned d : c.demands) {
      if (d < 1 || d > c.files) throw std::invalid_argument("demand index out of range");
    }
  }
}

std::vector<unsigned> effective_demands(const experiment_config& c) {
  if (!c.demands.empty()) return c.demands;
  std::vector<unsigned> d(c.users);
  for (unsigned k = 0; k < c.users; ++k) d[k] = (k % c.files) + 1;
  return d;
}

// Draws file contents, sharing coefficients, and keys in the frozen global
// order: all file symbols first (file-major), then per block the sharing
// coefficients (file-major) followed by the key bundle.
struct draw_ctx {
  std::mt19937_64 rng;
  symbol mask;
  symbol draw() { return static_cast<symbol>(rng() & mask); }
};

void draw_files(trace_document& doc, draw_ctx& dc) {
  const unsigned secret_len = doc.n - doc.m;
  doc.file_symbols.assign(doc.config.files, {});
  for (auto& file : doc.file_symbols) {
    file.assign(doc.config.blocks, {});
    for (auto& block : file) {
      block.resize(secret_len);
      for (auto& s : block) s = dc.draw();
    }
  }
}

void draw_sharing_coeffs(trace_document& doc, draw_ctx& dc, unsigned block) {
  for (unsigned file = 1; file <= doc.config.files; ++file) {
    for (unsigned coeff = 0; coeff < doc.m; ++coeff) {
      registry_entry e;
      e.k = registry_entry::kind::sharing;
      e.file = file;
      e.block = block;
      e.coeff = coeff;
      e.payload = dc.draw();
      doc.registry.push_back(e);
    }
  }
}

}  // namespace

trace_document place_centralized(const experiment_config& config) {
  validate_common(config);
  const unsigned K = config.users;
  const unsigned t = config.t;
  if (t < 1 || t >= K) throw std::invalid_argument("centralized scheme needs t in [1, K-1]");

  trace_document doc;
  doc.config = config;
  doc.config.demands = effective_demands(config);
  doc.config.worst_case_demands = config.demands.empty();
  doc.m = centralized_sharing_m(K, t);
  doc.n = centralized_sharing_n(K, t);

  const field f(config.field_bits);
  if (doc.n > f.order() - 1) {
    unsigned need = 2;
    while ((1u << need) - 1 < doc.n) ++need;
    throw std::invalid_argument("field too small for " + std::to_string(doc.n) +
                                " shares; needs at least " + std::to_string(need) + " bits");
  }

  draw_ctx dc{std::mt19937_64(config.seed), static_cast<symbol>(f.order() - 1)};
  draw_files(doc, dc);

  const auto key_sets = combinations(K, t + 1);
  for (unsigned block = 0; block < config.blocks; ++block) {
    draw_sharing_coeffs(doc, dc, block);
    for (set_mask s : key_sets) {
      for (unsigned i = 1; i <= t + 1; ++i) {
        registry_entry e;
        e.k = registry_entry::kind::key;
        e.key = key_label{key_family::central, 0, s, i, block};
        e.payload = dc.draw();
        doc.registry.push_back(e);
      }
    }
  }
  doc.registry_digest = compute_registry_digest(doc.registry);

  // caches
  const payload_index idx(doc);
  const auto subsets = combinations(K, t);
  doc.caches.resize(K);
  for (unsigned k = 1; k <= K; ++k) {
    cache_content& cache = doc.caches[k - 1];
    cache.user = k;
    for (unsigned file = 1; file <= config.files; ++file) {
      for (unsigned block = 0; block < config.blocks; ++block) {
        for (set_mask sub : subsets) {
          if (!contains(sub, k)) continue;
          for (unsigned j = 1; j <= t; ++j) {
            share_label l{file, sub, j, block};
            cache.shares.push_back({l, idx.share(file, block, share_scheme_index(doc, l))});
          }
        }
      }
    }
    for (unsigned block = 0; block < config.blocks; ++block) {
      for (set_mask s : key_sets) {
        if (!contains(s, k)) continue;
        for (unsigned i = 1; i <= t + 1; ++i) {
          key_label l{key_family::central, 0, s, i, block};
          cache.keys.push_back({l, idx.key(l)});
        }
      }
    }
  }
  return doc;
}

void deliver_centralized(trace_document& doc, const delivery_options& opts) {
  if (doc.config.scheme != scheme_kind::centralized) {
    throw std::invalid_argument("document was not placed with the centralized scheme");
  }
  if (!doc.transmissions.empty()) throw std::invalid_argument("delivery already ran");
  const unsigned K = doc.config.users;
  const unsigned t = doc.config.t;
  const auto& d = doc.config.demands;
  const payload_index idx(doc);

  for (unsigned block = 0; block < doc.config.blocks; ++block) {
    for (set_mask s : combinations(K, t + 1)) {
      const auto members = set_elements(s);
      for (unsigned k : members) {
        transmission_record rec;
        rec.stage = 0;
        rec.sender = k;
        rec.subset = s;
        rec.block = block;
        symbol payload = 0;
        for (unsigned l : members) {
          if (l == k) continue;
          const set_mask alloc = s & ~element_bit(l);
          share_label sl{d[l - 1], alloc, rank_in(alloc, k), block};
          payload = static_cast<symbol>(payload ^
                                        idx.share(sl.file, block, share_scheme_index(doc, sl)));
          rec.share_parts.push_back(sl);
        }
        if (!opts.omit_keys) {
          key_label kl{key_family::central, 0, s, rank_in(s, k), block};
          payload = static_cast<symbol>(payload ^ idx.key(kl));
          rec.key_parts.push_back(kl);
        }
        rec.payload = payload;
        doc.transmissions.push_back(std::move(rec));
      }
    }
  }
}

trace_document place_keyless(const experiment_config& config) {
  validate_common(config);
  const unsigned K = config.users;
  if (K < 2) throw std::invalid_argument("keyless scheme needs at least two users");

  trace_document doc;
  doc.config = config;
  doc.config.demands = effective_demands(config);
  doc.config.worst_case_demands = config.demands.empty();
  {
    // distinct demands are a precondition of the keyless exchange
    std::vector<unsigned> seen(config.files + 1, 0);
    for (unsigned d : doc.config.demands) {
      if (seen[d]++) throw std::invalid_argument("keyless scheme needs distinct demands");
    }
  }
  doc.m = (K - 1) * (K - 1);
  doc.n = K * (K - 1);

  const field f(config.field_bits);
  if (doc.n > f.order() - 1) {
    throw std::invalid_argument("field too small for " + std::to_string(doc.n) + " shares");
  }

  draw_ctx dc{std::mt19937_64(config.seed), static_cast<symbol>(f.order() - 1)};
  draw_files(doc, dc);
  for (unsigned block = 0; block < config.blocks; ++block) {
    draw_sharing_coeffs(doc, dc, block);
  }
  doc.registry_digest = compute_registry_digest(doc.registry);

  const payload_index idx(doc);
  doc.caches.resize(K);
  for (unsigned k = 1; k <= K; ++k) {
    cache_content& cache = doc.caches[k - 1];
    cache.user = k;
    for (unsigned file = 1; file <= config.files; ++file) {
      for (unsigned block = 0; block < config.blocks; ++block) {
        for (unsigned slot = 1; slot <= K; ++slot) {
          if (slot == k) continue;
          for (unsigned j = 1; j <= K - 1; ++j) {
            share_label l{file, element_bit(slot), j, block};
            cache.shares.push_back({l, idx.share(file, block, share_scheme_index(doc, l))});
          }
        }
      }
    }
  }
  return doc;
}

void deliver_keyless(trace_document& doc) {
  if (doc.config.scheme != scheme_kind::keyless) {
    throw std::invalid_argument("document was not placed with the keyless scheme");
  }
  if (!doc.transmissions.empty()) throw std::invalid_argument("delivery already ran");
  const unsigned K = doc.config.users;
  const auto& d = doc.config.demands;
  const payload_index idx(doc);
  set_mask everyone = 0;
  for (unsigned u = 1; u <= K; ++u) everyone |= element_bit(u);

  for (unsigned block = 0; block < doc.config.blocks; ++block) {
    for (unsigned k = 1; k <= K; ++k) {
      transmission_record rec;
      rec.stage = 0;
      rec.sender = k;
      rec.subset = everyone;
      rec.block = block;
      symbol payload = 0;
      for (unsigned l = 1; l <= K; ++l) {
        if (l == k) continue;
        const unsigned j = k < l ? k : k - 1;  // rank of k in [K] \ {l}
        share_label sl{d[l - 1], element_bit(l), j, block};
        payload = static_cast<symbol>(payload ^
                                      idx.share(sl.file, block, share_scheme_index(doc, sl)));
        rec.share_parts.push_back(sl);
      }
      rec.payload = payload;
      doc.transmissions.push_back(std::move(rec));
    }
  }
}

}  // namespace d2dsc
