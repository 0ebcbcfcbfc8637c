#include "d2dsc/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>
#include <utility>

#include "d2dsc/field.hpp"
#include "d2dsc/matrix.hpp"
#include "d2dsc/verifier.hpp"

namespace d2dsc {

std::string to_string(oracle_strategy s) {
  switch (s) {
    case oracle_strategy::automatic: return "automatic";
    case oracle_strategy::direct: return "direct";
    case oracle_strategy::dense_conv: return "dense_conv";
    case oracle_strategy::structured: return "structured";
    case oracle_strategy::fingerprint: return "fingerprint";
  }
  throw std::logic_error("unknown oracle strategy");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// ---------------------------------------------------------------------------
// Linear-model audit: the strategies reason about the view as A*f + B*r, so
// first certify that the recorded payloads equal that expression, and that
// re-randomized file/registry contents pushed through the real placement and
// delivery composition rules still track it.

std::vector<symbol> observed_payloads(const trace_document& doc, unsigned observer) {
  std::vector<symbol> out;
  if (observer != 0) {
    const auto& cache = doc.caches.at(observer - 1);
    for (const auto& cs : cache.shares) out.push_back(cs.payload);
    for (const auto& ck : cache.keys) out.push_back(ck.payload);
  }
  for (const auto& rec : doc.transmissions) {
    if (rec.sender != observer) out.push_back(rec.payload);
  }
  return out;
}

std::vector<symbol> flatten_files(const trace_document& doc) {
  std::vector<symbol> out;
  for (const auto& file : doc.file_symbols)
    for (const auto& block : file)
      for (symbol s : block) out.push_back(s);
  return out;
}

std::vector<symbol> registry_payloads(const trace_document& doc) {
  std::vector<symbol> out;
  out.reserve(doc.registry.size());
  for (const auto& e : doc.registry) out.push_back(e.payload);
  return out;
}

symbol model_row_value(const field& f, const linear_view& view, unsigned row,
                       const std::vector<symbol>& files, const std::vector<symbol>& reg) {
  symbol acc = 0;
  for (unsigned c = 0; c < view.file_cols; ++c) {
    const symbol a = view.a.at(row, c);
    if (a != 0) acc = field::add(acc, f.mul(a, files[c]));
  }
  for (unsigned c = 0; c < view.registry_cols; ++c) {
    const symbol b = view.b.at(row, c);
    if (b != 0) acc = field::add(acc, f.mul(b, reg[c]));
  }
  return acc;
}

// Rebuilds every cached and transmitted payload from the file symbols and the
// registry, using the same composition rules the schemes use.
void recompute_payloads(trace_document& doc) {
  const payload_index idx(doc);
  for (auto& cache : doc.caches) {
    for (auto& cs : cache.shares)
      cs.payload = idx.share(cs.label.file, cs.label.block, share_scheme_index(doc, cs.label));
    for (auto& ck : cache.keys) ck.payload = idx.key(ck.label);
  }
  for (auto& rec : doc.transmissions) {
    symbol acc = 0;
    for (const auto& sl : rec.share_parts)
      acc = field::add(acc, idx.share(sl.file, sl.block, share_scheme_index(doc, sl)));
    for (const auto& kl : rec.key_parts) acc = field::add(acc, idx.key(kl));
    rec.payload = acc;
  }
}

void verify_linear_model(const trace_document& doc, unsigned observer,
                         const linear_view& view, const field& f, std::uint64_t seed) {
  const auto check = [&](const trace_document& d, const char* what) {
    const std::vector<symbol> files = flatten_files(d);
    const std::vector<symbol> reg = registry_payloads(d);
    const std::vector<symbol> obs = observed_payloads(d, observer);
    if (obs.size() != view.rows)
      throw std::logic_error("oracle: view row count does not match the observed payloads");
    for (unsigned r = 0; r < view.rows; ++r) {
      if (model_row_value(f, view, r, files, reg) != obs[r])
        throw std::invalid_argument(std::string("oracle: ") + what +
                                    " payloads do not match the view model (row " +
                                    std::to_string(r) + ")");
    }
  };
  check(doc, "trace");

  // Counterfactual probes: fresh uniform files and registry, payloads rebuilt
  // through the real pipeline, must still equal A*f + B*r row for row.
  std::mt19937_64 rng(splitmix64(seed ^ 0x70726f6265ULL));
  const symbol mask = static_cast<symbol>(f.order() - 1);
  for (int probe = 0; probe < 2; ++probe) {
    trace_document synth = doc;
    for (auto& file : synth.file_symbols)
      for (auto& block : file)
        for (auto& s : block) s = static_cast<symbol>(rng() & mask);
    for (auto& e : synth.registry) e.payload = static_cast<symbol>(rng() & mask);
    recompute_payloads(synth);
    check(synth, "probe");
  }
}

// ---------------------------------------------------------------------------
// Randomness pools and components.

struct pool_set {
  std::vector<unsigned> pool_of_col;           // registry column -> pool id
  std::vector<std::vector<unsigned>> columns;  // pool id -> registry columns
};

pool_set build_pools(const trace_document& doc) {
  pool_set ps;
  ps.pool_of_col.resize(doc.registry.size());
  std::map<std::pair<unsigned, unsigned>, unsigned> sharing;  // (file, block) -> pool
  for (std::size_t c = 0; c < doc.registry.size(); ++c) {
    const auto& e = doc.registry[c];
    unsigned id;
    if (e.k == registry_entry::kind::sharing) {
      const auto key = std::make_pair(e.file, e.block);
      const auto it = sharing.find(key);
      if (it != sharing.end()) {
        id = it->second;
      } else {
        id = static_cast<unsigned>(ps.columns.size());
        ps.columns.emplace_back();
        sharing.emplace(key, id);
      }
    } else {
      id = static_cast<unsigned>(ps.columns.size());
      ps.columns.emplace_back();
    }
    ps.pool_of_col[c] = id;
    ps.columns[id].push_back(static_cast<unsigned>(c));
  }
  return ps;
}

struct disjoint_set {
  std::vector<unsigned> parent;
  explicit disjoint_set(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  unsigned find(unsigned x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(unsigned a, unsigned b) { parent[find(a)] = find(b); }
};

// One component handed to a strategy. Rows are local (0-based within the
// component); deltas[s][i] is the realization-s shift of local row i.
struct component_ctx {
  const field* f = nullptr;
  const linear_view* view = nullptr;
  std::vector<unsigned> rows;                   // global view rows, ascending
  std::vector<std::vector<unsigned>> pool_cols; // local pool -> registry columns
  std::vector<std::vector<symbol>> deltas;      // [sample][local row]
  unsigned bits = 0;
  std::uint32_t q = 0;

  std::size_t nrows() const { return rows.size(); }

  // Total joint states, saturating when the exponent overflows.
  std::uint64_t joint_states() const {
    std::uint64_t total_bits = 0;
    for (const auto& pc : pool_cols) total_bits += bits * static_cast<std::uint64_t>(pc.size());
    if (total_bits >= 63) return std::numeric_limits<std::uint64_t>::max();
    return 1ULL << total_bits;
  }
};

// Per-column incidence: which local rows a registry column feeds, with the
// field coefficient, plus the packed contribution of each column value under
// a row-to-position packing (UINT32_MAX positions are left out).
struct column_tab {
  std::vector<std::pair<unsigned, symbol>> touched;  // (local row, coeff)
  std::vector<std::uint64_t> packed;                 // value -> packed contribution
};

column_tab make_column_tab(const component_ctx& cx, unsigned col,
                           const std::vector<unsigned>& pack_pos) {
  column_tab t;
  for (std::size_t i = 0; i < cx.nrows(); ++i) {
    const symbol coeff = cx.view->b.at(cx.rows[i], col);
    if (coeff != 0) t.touched.emplace_back(static_cast<unsigned>(i), coeff);
  }
  t.packed.assign(cx.q, 0);
  for (std::uint32_t v = 0; v < cx.q; ++v) {
    std::uint64_t acc = 0;
    for (const auto& [row, coeff] : t.touched) {
      if (pack_pos[row] == UINT32_MAX) continue;
      acc ^= static_cast<std::uint64_t>(cx.f->mul(coeff, static_cast<symbol>(v)))
             << (pack_pos[row] * cx.bits);
    }
    t.packed[v] = acc;
  }
  return t;
}

std::uint64_t pack_rows(const std::vector<symbol>& values,
                        const std::vector<unsigned>& rows_to_pack, unsigned bits) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < rows_to_pack.size(); ++i)
    acc |= static_cast<std::uint64_t>(values[rows_to_pack[i]]) << (i * bits);
  return acc;
}

std::vector<unsigned> identity_positions(std::size_t n) {
  std::vector<unsigned> pos(n);
  std::iota(pos.begin(), pos.end(), 0u);
  return pos;
}

// Runs the mixed-radix odometer over the given column tables, invoking
// visit(packed) for every joint state. The packing is whatever the tables
// were built with.
template <typename Visit>
std::uint64_t enumerate_packed(const component_ctx& cx, std::vector<column_tab>& cols,
                               Visit&& visit) {
  std::vector<std::uint32_t> digit(cols.size(), 0);
  std::uint64_t packed = 0;
  std::uint64_t count = 0;
  for (;;) {
    ++count;
    visit(packed);
    std::size_t pos = 0;
    for (; pos < cols.size(); ++pos) {
      const std::uint32_t v = digit[pos];
      packed ^= cols[pos].packed[v];
      if (v + 1 < cx.q) {
        digit[pos] = v + 1;
        packed ^= cols[pos].packed[v + 1];
        break;
      }
      digit[pos] = 0;  // contribution of value 0 is zero
    }
    if (pos == cols.size()) break;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Exact XOR convolution accumulator (Walsh-Hadamard over __int128; the total
// mass is kept <= 2^62, which bounds every intermediate).

struct conv_acc {
  unsigned width = 0;
  std::vector<__int128> hat;  // running product of transforms

  explicit conv_acc(unsigned width_bits)
      : width(width_bits), hat(std::size_t{1} << width_bits, 1) {}

  static void wht(std::vector<__int128>& a) {
    const std::size_t n = a.size();
    for (std::size_t len = 1; len < n; len <<= 1) {
      for (std::size_t i = 0; i < n; i += len << 1) {
        for (std::size_t j = i; j < i + len; ++j) {
          const __int128 u = a[j];
          const __int128 v = a[j + len];
          a[j] = u + v;
          a[j + len] = u - v;
        }
      }
    }
  }

  void mul(const std::vector<long long>& hist) {
    std::vector<__int128> tmp(hat.size());
    for (std::size_t i = 0; i < hat.size(); ++i) tmp[i] = hist[i];
    wht(tmp);
    for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= tmp[i];
  }

  std::vector<long long> finish() {
    wht(hat);  // involution up to the 1/size factor
    std::vector<long long> out(hat.size());
    for (std::size_t i = 0; i < hat.size(); ++i)
      out[i] = static_cast<long long>(hat[i] / static_cast<__int128>(hat.size()));
    return out;
  }
};

// ---------------------------------------------------------------------------
// direct: tabulate the packed multiset of B*r over all joint states, then
// check multiset equality against each shifted copy.

bool run_direct(const component_ctx& cx, component_report& rep) {
  const std::vector<unsigned> pack_pos = identity_positions(cx.nrows());
  std::vector<column_tab> cols;
  for (const auto& pc : cx.pool_cols)
    for (unsigned c : pc) cols.push_back(make_column_tab(cx, c, pack_pos));

  std::vector<std::uint64_t> tab;
  tab.reserve(cx.joint_states());
  rep.states = enumerate_packed(cx, cols, [&](std::uint64_t packed) { tab.push_back(packed); });
  std::sort(tab.begin(), tab.end());

  std::vector<std::uint64_t> shifted;
  for (const auto& delta : cx.deltas) {
    const std::uint64_t dp = pack_rows(delta, pack_pos, cx.bits);
    if (dp == 0) continue;
    shifted = tab;
    for (auto& x : shifted) x ^= dp;
    std::sort(shifted.begin(), shifted.end());
    if (shifted != tab) {
      rep.identical = false;
      break;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// dense_conv: per-pool histograms over the packed component rows, convolved
// into the exact joint distribution (pools are independent; overlapping rows
// accumulate by XOR), then a shift-invariance scan per realization.

bool run_dense_conv(const component_ctx& cx, const oracle_options& opts,
                    component_report& rep) {
  const std::size_t nr = cx.nrows();
  const unsigned wt = static_cast<unsigned>(nr) * cx.bits;
  if (wt > opts.dense_bits) return false;

  std::uint64_t mass_bits = 0;
  for (const auto& pc : cx.pool_cols) {
    const std::uint64_t pool_bits = static_cast<std::uint64_t>(cx.bits) * pc.size();
    if (pool_bits >= 63 || (1ULL << pool_bits) > opts.group_state_limit) return false;
    mass_bits += pool_bits;
  }
  if (mass_bits > 62) return false;

  const std::vector<unsigned> pack_pos = identity_positions(nr);
  conv_acc acc(wt);
  std::vector<long long> hist(std::size_t{1} << wt);
  rep.states = 0;
  for (const auto& pc : cx.pool_cols) {
    std::vector<column_tab> cols;
    for (unsigned c : pc) cols.push_back(make_column_tab(cx, c, pack_pos));
    std::fill(hist.begin(), hist.end(), 0LL);
    rep.states += enumerate_packed(cx, cols, [&](std::uint64_t packed) { ++hist[packed]; });
    acc.mul(hist);
  }
  const std::vector<long long> joint = acc.finish();

  for (const auto& delta : cx.deltas) {
    const std::uint64_t dp = pack_rows(delta, pack_pos, cx.bits);
    if (dp == 0) continue;
    for (std::size_t x = 0; x < joint.size(); ++x) {
      if (joint[x] != joint[x ^ dp]) {
        rep.identical = false;
        break;
      }
    }
    if (!rep.identical) break;
  }
  return true;
}

// ---------------------------------------------------------------------------
// structured: per-pool enumeration for wide views. For each pool g let priv_g
// be the rows only g feeds and let the straddling rows be shared. Enumerating
// g yields a map priv -> (count, shared contribution); the distribution is
// invariant under a shift (dP_1..dP_G, dS) iff every count map is invariant
// under its dP_g and the convolution D of the pool histograms without private
// rows satisfies D(x) == D(x ^ sigma) for every
// sigma = dS ^ r_1 ^ ... ^ r_G with r_g a realized residual
// shared(x ^ dP_g) ^ shared(x). Exact, provided each priv value determines
// its shared contribution (checked during enumeration; fails over to another
// strategy otherwise).

struct structured_pool {
  std::vector<unsigned> priv_rows;  // local rows private to this pool
  bool free = false;                // no private rows
  // private pools: packed priv -> (count, packed shared contribution)
  std::unordered_map<std::uint64_t, std::pair<long long, std::uint64_t>> table;
  std::vector<long long> hist;  // free pools: histogram over shared coords
};

bool run_structured(const component_ctx& cx, const oracle_options& opts,
                    component_report& rep) {
  const std::size_t nr = cx.nrows();
  const std::size_t npools = cx.pool_cols.size();

  // Which pools feed each row (ascending, deduplicated).
  std::vector<std::vector<unsigned>> row_pools(nr);
  for (std::size_t g = 0; g < npools; ++g) {
    for (unsigned c : cx.pool_cols[g]) {
      for (std::size_t i = 0; i < nr; ++i) {
        if (cx.view->b.at(cx.rows[i], c) != 0 &&
            (row_pools[i].empty() || row_pools[i].back() != g))
          row_pools[i].push_back(static_cast<unsigned>(g));
      }
    }
  }
  std::vector<unsigned> shared_rows;
  std::vector<std::vector<unsigned>> priv_of(npools);
  for (std::size_t i = 0; i < nr; ++i) {
    if (row_pools[i].size() >= 2)
      shared_rows.push_back(static_cast<unsigned>(i));
    else if (row_pools[i].size() == 1)
      priv_of[row_pools[i][0]].push_back(static_cast<unsigned>(i));
    else
      return false;  // pool-free row inside a pooled component
  }

  const unsigned ws = static_cast<unsigned>(shared_rows.size()) * cx.bits;
  if (ws > opts.dense_bits) return false;

  // Budgets: per-pool enumeration, private packing width, and total mass of
  // the convolved (free) pools, which bounds every WHT intermediate.
  std::uint64_t free_mass_bits = 0;
  for (std::size_t g = 0; g < npools; ++g) {
    const std::uint64_t pool_bits =
        static_cast<std::uint64_t>(cx.bits) * cx.pool_cols[g].size();
    if (pool_bits >= 63 || (1ULL << pool_bits) > opts.group_state_limit) return false;
    if (static_cast<std::uint64_t>(priv_of[g].size()) * cx.bits > 64) return false;
    if (priv_of[g].empty()) free_mass_bits += pool_bits;
  }
  if (free_mass_bits > 62) return false;

  std::vector<unsigned> shared_pos(nr, UINT32_MAX);
  for (std::size_t i = 0; i < shared_rows.size(); ++i)
    shared_pos[shared_rows[i]] = static_cast<unsigned>(i);

  // Enumerate each pool.
  std::vector<structured_pool> pools(npools);
  conv_acc acc(ws);
  bool any_free = false;
  rep.states = 0;
  for (std::size_t g = 0; g < npools; ++g) {
    structured_pool& pg = pools[g];
    pg.priv_rows = priv_of[g];
    pg.free = pg.priv_rows.empty();

    std::vector<unsigned> priv_pos(nr, UINT32_MAX);
    for (std::size_t i = 0; i < pg.priv_rows.size(); ++i)
      priv_pos[pg.priv_rows[i]] = static_cast<unsigned>(i);

    // Two packings per column: private rows and shared rows. The odometer
    // runs over the private packing; the shared packing is tracked alongside.
    std::vector<column_tab> pcols, scols;
    for (unsigned c : cx.pool_cols[g]) {
      pcols.push_back(make_column_tab(cx, c, priv_pos));
      scols.push_back(make_column_tab(cx, c, shared_pos));
    }
    if (pg.free) pg.hist.assign(std::size_t{1} << ws, 0);

    bool single_valued = true;
    std::vector<std::uint32_t> digit(pcols.size(), 0);
    std::uint64_t priv_packed = 0, shared_packed = 0;
    for (;;) {
      ++rep.states;
      if (pg.free) {
        ++pg.hist[shared_packed];
      } else {
        const auto [it, inserted] = pg.table.try_emplace(priv_packed, 1LL, shared_packed);
        if (!inserted) {
          if (it->second.second != shared_packed) {
            single_valued = false;
            break;
          }
          ++it->second.first;
        }
      }
      std::size_t pos = 0;
      for (; pos < pcols.size(); ++pos) {
        const std::uint32_t v = digit[pos];
        priv_packed ^= pcols[pos].packed[v];
        shared_packed ^= scols[pos].packed[v];
        if (v + 1 < cx.q) {
          digit[pos] = v + 1;
          priv_packed ^= pcols[pos].packed[v + 1];
          shared_packed ^= scols[pos].packed[v + 1];
          break;
        }
        digit[pos] = 0;
      }
      if (pos == pcols.size()) break;
    }
    if (!single_valued) return false;
    if (pg.free) {
      acc.mul(pg.hist);
      any_free = true;
      pg.hist.clear();
    }
  }

  std::vector<long long> dfree;
  if (any_free) {
    dfree = acc.finish();
  } else {
    dfree.assign(std::size_t{1} << ws, 0);
    dfree[0] = 1;
  }

  // Per-realization checks.
  for (const auto& delta : cx.deltas) {
    bool any = false;
    for (std::size_t i = 0; i < nr && !any; ++i) any = delta[i] != 0;
    if (!any) continue;

    const std::uint64_t ds = pack_rows(delta, shared_rows, cx.bits);
    std::vector<std::uint64_t> sigmas{ds};
    bool ok = true;
    for (std::size_t g = 0; g < npools && ok; ++g) {
      const structured_pool& pg = pools[g];
      if (pg.free) continue;
      const std::uint64_t dp = pack_rows(delta, pg.priv_rows, cx.bits);
      if (dp == 0) continue;  // counts trivially invariant, residual zero
      std::set<std::uint64_t> residuals;
      for (const auto& [x, cs] : pg.table) {
        const auto it = pg.table.find(x ^ dp);
        if (it == pg.table.end() || it->second.first != cs.first) {
          ok = false;
          break;
        }
        residuals.insert(it->second.second ^ cs.second);
      }
      if (!ok) break;
      std::vector<std::uint64_t> next;
      next.reserve(sigmas.size() * residuals.size());
      for (const std::uint64_t s : sigmas)
        for (const std::uint64_t r : residuals) next.push_back(s ^ r);
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      if (next.size() > 4096) return false;  // residual blow-up; fall back
      sigmas = std::move(next);
    }
    for (std::size_t si = 0; si < sigmas.size() && ok; ++si) {
      const std::uint64_t sigma = sigmas[si];
      if (sigma == 0) continue;
      for (std::size_t z = 0; z < dfree.size(); ++z) {
        if (dfree[z] != dfree[z ^ sigma]) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) {
      rep.identical = false;
      break;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// fingerprint: one joint enumeration, folding every state into dual
// order-independent hash sums per realization.

bool run_fingerprint(const component_ctx& cx, const oracle_options& opts,
                     component_report& rep) {
  const std::size_t nr = cx.nrows();
  const std::uint64_t states = cx.joint_states();
  const std::size_t nsamp = cx.deltas.size();
  const bool packable = nr * cx.bits <= 64;
  const std::uint64_t per_state = packable ? nsamp + 1 : (nsamp + 1) * nr;
  if (states > opts.max_states ||
      states > (1ULL << 29) / std::max<std::uint64_t>(per_state, 1))
    return false;

  constexpr std::uint64_t seed1 = 0x9ae16a3b2f90404fULL;
  constexpr std::uint64_t seed2 = 0xc3a5c85c97cb3127ULL;
  std::vector<std::uint64_t> fp1(nsamp + 1, 0), fp2(nsamp + 1, 0);

  if (packable) {
    const std::vector<unsigned> pack_pos = identity_positions(nr);
    std::vector<column_tab> cols;
    for (const auto& pc : cx.pool_cols)
      for (unsigned c : pc) cols.push_back(make_column_tab(cx, c, pack_pos));
    std::vector<std::uint64_t> dpack(nsamp + 1, 0);
    for (std::size_t s = 0; s < nsamp; ++s)
      dpack[s + 1] = pack_rows(cx.deltas[s], pack_pos, cx.bits);
    rep.states = enumerate_packed(cx, cols, [&](std::uint64_t packed) {
      for (std::size_t s = 0; s <= nsamp; ++s) {
        const std::uint64_t v = packed ^ dpack[s];
        fp1[s] += splitmix64(v ^ seed1);
        fp2[s] += splitmix64(v ^ seed2);
      }
    });
  } else {
    // Wide views: keep per-row accumulators and chain-hash them in row order.
    const std::vector<unsigned> none(nr, UINT32_MAX);
    std::vector<column_tab> cols;
    for (const auto& pc : cx.pool_cols)
      for (unsigned c : pc) cols.push_back(make_column_tab(cx, c, none));
    std::vector<symbol> row_acc(nr, 0);
    std::vector<std::uint32_t> digit(cols.size(), 0);
    std::uint64_t counted = 0;
    for (;;) {
      ++counted;
      for (std::size_t s = 0; s <= nsamp; ++s) {
        std::uint64_t h1 = seed1, h2 = seed2;
        for (std::size_t i = 0; i < nr; ++i) {
          const symbol v =
              s == 0 ? row_acc[i] : static_cast<symbol>(row_acc[i] ^ cx.deltas[s - 1][i]);
          h1 = splitmix64(h1 ^ v);
          h2 = splitmix64(h2 ^ (v + 0x9e37ULL));
        }
        fp1[s] += h1;
        fp2[s] += h2;
      }
      std::size_t pos = 0;
      for (; pos < cols.size(); ++pos) {
        const std::uint32_t v = digit[pos];
        for (const auto& [row, coeff] : cols[pos].touched)
          row_acc[row] = field::add(row_acc[row], cx.f->mul(coeff, static_cast<symbol>(v)));
        if (v + 1 < cx.q) {
          digit[pos] = v + 1;
          for (const auto& [row, coeff] : cols[pos].touched)
            row_acc[row] =
                field::add(row_acc[row], cx.f->mul(coeff, static_cast<symbol>(v + 1)));
          break;
        }
        digit[pos] = 0;
      }
      if (pos == cols.size()) break;
    }
    rep.states = counted;
  }

  for (std::size_t s = 1; s <= nsamp; ++s) {
    if (fp1[s] != fp1[0] || fp2[s] != fp2[0]) {
      rep.identical = false;
      break;
    }
  }
  return true;
}

void run_component(const component_ctx& cx, const oracle_options& opts,
                   component_report& rep) {
  const std::uint64_t joint = cx.joint_states();
  const bool packable = cx.nrows() * cx.bits <= 64;

  const auto infeasible = [&](const char* why) -> oracle_infeasible {
    return oracle_infeasible(std::string("oracle: component with ") +
                             std::to_string(cx.nrows()) + " rows and " +
                             std::to_string(cx.pool_cols.size()) +
                             " pools is too large: " + why);
  };
  const auto reset = [&rep](oracle_strategy s) {
    rep.strategy = s;
    rep.states = 0;
    rep.identical = true;
  };

  if (opts.force != oracle_strategy::automatic) {
    reset(opts.force);
    bool done = false;
    switch (opts.force) {
      case oracle_strategy::direct:
        if (joint > opts.exact_tab_limit || !packable)
          throw infeasible("exceeds the direct tabulation budget");
        done = run_direct(cx, rep);
        break;
      case oracle_strategy::dense_conv:
        done = run_dense_conv(cx, opts, rep);
        break;
      case oracle_strategy::structured:
        done = run_structured(cx, opts, rep);
        break;
      case oracle_strategy::fingerprint:
        done = run_fingerprint(cx, opts, rep);
        break;
      default:
        break;
    }
    if (!done) throw infeasible("the forced strategy's preconditions do not hold");
    return;
  }

  if (joint <= opts.exact_tab_limit && packable) {
    reset(oracle_strategy::direct);
    run_direct(cx, rep);
    return;
  }
  reset(oracle_strategy::dense_conv);
  if (run_dense_conv(cx, opts, rep)) return;
  reset(oracle_strategy::structured);
  if (run_structured(cx, opts, rep)) return;
  reset(oracle_strategy::fingerprint);
  if (run_fingerprint(cx, opts, rep)) return;
  throw infeasible("exceeds every enumeration budget");
}

}  // namespace

oracle_verdict exhaustive_independence(const trace_document& doc, unsigned observer,
                                       std::vector<unsigned> protected_files,
                                       const oracle_options& opts) {
  if (doc.config.users == 0 || doc.config.files == 0)
    throw std::invalid_argument("oracle: document has no configuration");
  if (observer > doc.config.users)
    throw std::invalid_argument("oracle: observer out of range");
  if (doc.n <= doc.m) throw std::invalid_argument("oracle: invalid sharing dimensions");
  std::sort(protected_files.begin(), protected_files.end());
  protected_files.erase(std::unique(protected_files.begin(), protected_files.end()),
                        protected_files.end());
  for (const unsigned pf : protected_files)
    if (pf < 1 || pf > doc.config.files)
      throw std::invalid_argument("oracle: protected file out of range");

  const field f(doc.config.field_bits);
  const linear_view view = build_view(doc, observer);
  verify_linear_model(doc, observer, view, f, opts.seed);

  oracle_verdict out;
  out.observer = observer;
  out.samples = opts.samples;
  out.protected_files = protected_files;

  // Realization shifts: redraw the protected files and push the difference
  // through A. Row r of realization s shifts by sum_c A[r][c] * delta_f[c].
  const symbol mask = static_cast<symbol>(f.order() - 1);
  const unsigned secret_len = doc.n - doc.m;
  std::vector<std::vector<symbol>> delta_rows(opts.samples,
                                              std::vector<symbol>(view.rows, 0));
  for (unsigned s = 0; s < opts.samples; ++s) {
    std::mt19937_64 rng(splitmix64(opts.seed + 0x517cc1b727220a95ULL * (s + 1)));
    std::vector<std::pair<unsigned, symbol>> dcols;
    for (const unsigned pf : protected_files) {
      for (unsigned b = 0; b < doc.config.blocks; ++b) {
        const unsigned base = view.file_col_base(doc, pf, b);
        for (unsigned i = 0; i < secret_len; ++i) {
          const symbol fresh = static_cast<symbol>(rng() & mask);
          const symbol delta =
              static_cast<symbol>(fresh ^ doc.file_symbols[pf - 1][b][i]);
          if (delta != 0) dcols.emplace_back(base + i, delta);
        }
      }
    }
    for (unsigned r = 0; r < view.rows; ++r) {
      symbol acc = 0;
      for (const auto& [c, dv] : dcols) {
        const symbol a = view.a.at(r, c);
        if (a != 0) acc = field::add(acc, f.mul(a, dv));
      }
      delta_rows[s][r] = acc;
    }
  }

  // Components of the rows-to-pools incidence.
  const pool_set ps = build_pools(doc);
  std::vector<std::vector<unsigned>> row_pools(view.rows);
  for (unsigned r = 0; r < view.rows; ++r) {
    std::set<unsigned> touched;
    for (unsigned c = 0; c < view.registry_cols; ++c)
      if (view.b.at(r, c) != 0) touched.insert(ps.pool_of_col[c]);
    row_pools[r].assign(touched.begin(), touched.end());
  }
  disjoint_set ds(ps.columns.size());
  for (unsigned r = 0; r < view.rows; ++r)
    for (std::size_t i = 1; i < row_pools[r].size(); ++i)
      ds.unite(row_pools[r][0], row_pools[r][i]);

  std::map<unsigned, std::pair<std::vector<unsigned>, std::set<unsigned>>> comps;
  std::vector<unsigned> deterministic_rows;
  for (unsigned r = 0; r < view.rows; ++r) {
    if (row_pools[r].empty()) {
      deterministic_rows.push_back(r);
      continue;
    }
    auto& [rows, pools] = comps[ds.find(row_pools[r][0])];
    rows.push_back(r);
    for (const unsigned g : row_pools[r]) pools.insert(g);
  }

  // Deterministic rows carry no randomness: identical iff never shifted.
  for (const unsigned r : deterministic_rows) {
    component_report rep;
    rep.rows = {r};
    rep.pools = 0;
    rep.strategy = oracle_strategy::direct;
    rep.states = 1;
    for (const auto& delta : delta_rows)
      if (delta[r] != 0) {
        rep.identical = false;
        break;
      }
    out.pass = out.pass && rep.identical;
    out.components.push_back(std::move(rep));
  }

  for (auto& [root, rp] : comps) {
    component_ctx cx;
    cx.f = &f;
    cx.view = &view;
    cx.rows = rp.first;
    for (const unsigned g : rp.second) cx.pool_cols.push_back(ps.columns[g]);
    cx.bits = f.bits();
    cx.q = f.order();

    component_report rep;
    rep.rows = cx.rows;
    rep.pools = static_cast<unsigned>(cx.pool_cols.size());

    bool any_shift = false;
    cx.deltas.reserve(delta_rows.size());
    for (const auto& delta : delta_rows) {
      std::vector<symbol> local(cx.rows.size());
      for (std::size_t i = 0; i < cx.rows.size(); ++i) local[i] = delta[cx.rows[i]];
      for (const symbol v : local) any_shift = any_shift || v != 0;
      cx.deltas.push_back(std::move(local));
    }
    if (!any_shift) {
      // Untouched by every realization: the conditionals coincide exactly.
      rep.strategy = oracle_strategy::direct;
      rep.states = 0;
    } else {
      run_component(cx, opts, rep);
    }
    out.pass = out.pass && rep.identical;
    out.components.push_back(std::move(rep));
  }
  return out;
}

oracle_verdict oracle_secure_caching(const trace_document& doc, unsigned user,
                                     const oracle_options& opts) {
  if (user == 0) throw std::invalid_argument("oracle: secure caching needs a user view");
  const unsigned demand = doc.demand_of(user);
  std::vector<unsigned> prot;
  for (unsigned file = 1; file <= doc.config.files; ++file)
    if (file != demand) prot.push_back(file);
  return exhaustive_independence(doc, user, std::move(prot), opts);
}

oracle_verdict oracle_secure_delivery(const trace_document& doc,
                                      const oracle_options& opts) {
  std::vector<unsigned> prot(doc.config.files);
  std::iota(prot.begin(), prot.end(), 1u);
  return exhaustive_independence(doc, 0, std::move(prot), opts);
}

}  // namespace d2dsc
