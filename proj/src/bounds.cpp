#include "d2dsc/bounds.hpp"

#include <algorithm>
#include <stdexcept>

#include "d2dsc/centralized.hpp"

namespace d2dsc {

rational envelope_rate(std::vector<corner_point> corners, const rational& memory) {
  if (corners.empty()) throw std::invalid_argument("envelope_rate: no corners");
  std::sort(corners.begin(), corners.end(),
            [](const corner_point& a, const corner_point& b) {
              if (a.memory != b.memory) return a.memory < b.memory;
              return a.rate < b.rate;
            });
  // keep the best rate per memory value
  std::vector<corner_point> pts;
  for (const auto& c : corners) {
    if (!pts.empty() && pts.back().memory == c.memory) continue;
    pts.push_back(c);
  }
  if (memory < pts.front().memory) {
    throw infeasible_memory("memory below the smallest achievable corner");
  }

  // lower convex hull over (memory, rate), Andrew scan
  std::vector<corner_point> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull[hull.size() - 1];
      // pop b unless it lies strictly below the a-p chord
      const rational cross = (b.memory - a.memory) * (p.rate - a.rate) -
                             (b.rate - a.rate) * (p.memory - a.memory);
      if (cross > 0) break;  // b below the chord: convex so far
      hull.pop_back();
    }
    hull.push_back(p);
  }

  // global minimum of a convex piecewise-linear function sits at a vertex;
  // beyond it the envelope stays flat (non-increasing extension)
  std::size_t min_idx = 0;
  for (std::size_t i = 1; i < hull.size(); ++i) {
    if (hull[i].rate < hull[min_idx].rate) min_idx = i;
  }
  if (memory >= hull[min_idx].memory) return hull[min_idx].rate;

  // interpolate on the descending part
  for (std::size_t i = 0; i + 1 <= min_idx; ++i) {
    const auto& a = hull[i];
    const auto& b = hull[i + 1];
    if (memory >= a.memory && memory <= b.memory) {
      const rational alpha = (b.memory - memory) / (b.memory - a.memory);
      return alpha * a.rate + (1 - alpha) * b.rate;
    }
  }
  throw std::logic_error("envelope_rate: query fell outside the hull sweep");
}

std::vector<std::pair<unsigned, rational>> cutset_terms(unsigned users, unsigned files,
                                                        const rational& memory) {
  if (users < 2 || files < 1) throw std::invalid_argument("cutset_terms: need K >= 2, N >= 1");
  std::vector<std::pair<unsigned, rational>> terms;
  const unsigned s_max = std::min<unsigned>(users, files / 2);
  for (unsigned s = 1; s <= s_max; ++s) {
    if (s == users) continue;
    const unsigned l = files / s;  // files fully refreshable through this cut
    if (l <= 1) continue;
    rational term = rational(users) *
                    (rational(static_cast<std::uint64_t>(s) * l - 1) - rational(s - 1) * memory) /
                    (rational(l - 1) * rational(users - s));
    if (term < 0) term = 0;
    terms.emplace_back(s, term);
  }
  return terms;
}

rational cutset_lower_bound(unsigned users, unsigned files, const rational& memory) {
  rational best = 0;
  for (const auto& [s, term] : cutset_terms(users, files, memory)) {
    best = std::max(best, term);
  }
  return best;
}

multicast_bounds multicast_rates(unsigned users, unsigned files, const rational& memory) {
  if (memory < 1) {
    throw infeasible_memory("multicast comparison needs at least one file-equivalent of cache");
  }
  multicast_bounds out;
  out.upper = rational(users) * (rational(files) + memory - 1) /
              (rational(files) + rational(users + 1) * (memory - 1));
  out.lower = 0;
  const unsigned s_max = std::min<unsigned>(users, files / 2);
  for (unsigned s = 1; s <= s_max; ++s) {
    if (s == users) continue;
    const unsigned l = files / s;
    if (l <= 1) continue;
    rational term = (rational(static_cast<std::uint64_t>(s) * l - 1) - rational(s - 1) * memory) /
                    rational(l - 1);
    if (term < 0) term = 0;
    out.lower = std::max(out.lower, term);
  }
  return out;
}

gap_row gap_report(unsigned users, unsigned files, unsigned t) {
  if (t < 1 || t >= users) throw std::invalid_argument("gap_report: t must be in [1, K-1]");
  gap_row row;
  row.t = t;
  row.memory = centralized_memory(users, files, t);
  row.rate = rational(users) / t;
  row.lower = cutset_lower_bound(users, files, row.memory);
  if (row.lower == 0) throw std::logic_error("gap_report: degenerate lower bound");
  row.ratio_to_lower = row.rate / row.lower;
  row.multicast_upper = multicast_rates(users, files, row.memory).upper;
  row.ratio_to_multicast = row.rate / row.multicast_upper;
  row.within_factor_five = row.ratio_to_multicast <= 5;
  return row;
}

}  // namespace d2dsc
