#include "opinion/landscape.hpp"

#include <algorithm>
#include <cstddef>
#include <deque>
#include <limits>
#include <stdexcept>

namespace opinion {

long long energy_key_of_mask(const ModelSpec& spec, std::uint64_t mask) {
  const int N = spec.N, V = N * N;
  long long mb_minus_ma = 0;
  long long contour = 0;
  for (int v = 0; v < V; ++v) {
    int plus = (mask >> v) & 1;  // M_A, M_B count +1 sites only
    RegionLabel reg = spec.region_of_col(v % N);
    if (reg == RegionLabel::A) mb_minus_ma -= plus;
    if (reg == RegionLabel::B) mb_minus_ma += plus;
    // Count each edge once via the right and down neighbors.
    int r = v / N, c = v % N;
    int right = r * N + (c + 1) % N;
    int down = ((r + 1) % N) * N + c;
    contour += ((mask >> v) & 1) != ((mask >> right) & 1);
    contour += ((mask >> v) & 1) != ((mask >> down) & 1);
  }
  long long p = spec.alpha.numerator(), q = spec.alpha.denominator();
  long long field = static_cast<long long>(N) * (spec.n - spec.m) +
                    2 * mb_minus_ma;
  return q * field + p * (contour - static_cast<long long>(V));
}

Rational energy_of_mask(const ModelSpec& spec, std::uint64_t mask) {
  return Rational(energy_key_of_mask(spec, mask),
                  spec.alpha.denominator());
}

// ---------------------------------------------------------------------------
// SublevelGraph construction
// ---------------------------------------------------------------------------

SublevelGraph SublevelGraph::full_space(const ModelSpec& spec,
                                        LandscapeGuard guard) {
  spec.validate();
  const int V = spec.N * spec.N;
  if (V > 63 || (std::size_t{1} << V) > guard.max_states)
    throw ResourceGuardError("full state space exceeds the guard");
  SublevelGraph g(spec);
  std::size_t n = std::size_t{1} << V;
  g.states_.resize(n);
  g.keys_.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    g.states_[s] = s;
    g.keys_[s] = energy_key_of_mask(spec, s);
  }
  g.order_.resize(n);
  for (std::size_t s = 0; s < n; ++s) g.order_[s] = s;
  std::sort(g.order_.begin(), g.order_.end(),
            [&](std::size_t a, std::size_t b) { return g.keys_[a] < g.keys_[b]; });
  return g;
}

SublevelGraph SublevelGraph::restricted(
    const ModelSpec& spec, const std::vector<std::uint64_t>& seed_masks,
    RestrictedOptions opt) {
  spec.validate();
  if (seed_masks.empty()) throw std::invalid_argument("no seed states");
  // Masks are per-site bits; unlike full_space no 2^V table is built, so
  // V = 64 (N = 8) is fine.
  const int V = spec.N * spec.N;
  if (V > 64) throw ResourceGuardError("lattice too large for mask states");
  SublevelGraph g(spec);
  g.restricted_ = true;
  long long q = spec.alpha.denominator();
  long long max_seed = std::numeric_limits<long long>::min();
  for (auto m : seed_masks)
    max_seed = std::max(max_seed, energy_key_of_mask(spec, m));
  // floor((window) * q), window >= 0
  Rational wq = opt.window * Rational(q);
  long long allowance = wq.numerator() / wq.denominator();
  long long threshold = max_seed + allowance;

  std::deque<std::uint64_t> queue;
  for (auto m : seed_masks) {
    if (g.index_.count(m)) continue;
    g.index_.emplace(m, g.states_.size());
    g.states_.push_back(m);
    g.keys_.push_back(energy_key_of_mask(spec, m));
    queue.push_back(m);
  }
  while (!queue.empty()) {
    std::uint64_t m = queue.front();
    queue.pop_front();
    for (int b = 0; b < V; ++b) {
      std::uint64_t nm = m ^ (std::uint64_t{1} << b);
      if (g.index_.count(nm)) continue;
      long long key = energy_key_of_mask(spec, nm);
      if (key > threshold) continue;
      if (g.states_.size() >= opt.max_states)
        throw ResourceGuardError("restricted subspace exceeds the cap");
      g.index_.emplace(nm, g.states_.size());
      g.states_.push_back(nm);
      g.keys_.push_back(key);
      queue.push_back(nm);
    }
  }
  g.order_.resize(g.states_.size());
  for (std::size_t s = 0; s < g.order_.size(); ++s) g.order_[s] = s;
  std::sort(g.order_.begin(), g.order_.end(),
            [&](std::size_t a, std::size_t b) { return g.keys_[a] < g.keys_[b]; });
  return g;
}

std::optional<std::size_t> SublevelGraph::index_of(std::uint64_t mask) const {
  if (!restricted_) {
    if (mask < states_.size()) return static_cast<std::size_t>(mask);
    return std::nullopt;
  }
  auto it = index_.find(mask);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Rational SublevelGraph::energy(std::size_t i) const {
  return Rational(keys_[i], spec_.alpha.denominator());
}

template <typename Fn>
void SublevelGraph::for_each_neighbor(std::size_t i, Fn&& fn) const {
  const int V = spec_.N * spec_.N;
  std::uint64_t m = states_[i];
  for (int b = 0; b < V; ++b) {
    std::uint64_t nm = m ^ (std::uint64_t{1} << b);
    if (!restricted_) {
      fn(static_cast<std::size_t>(nm));
    } else {
      auto it = index_.find(nm);
      if (it != index_.end()) fn(it->second);
    }
  }
}

// ---------------------------------------------------------------------------
// Union-find sweep
// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kInactive = std::numeric_limits<std::size_t>::max();

std::size_t dsu_find(std::vector<std::size_t>& parent, std::size_t x) {
  std::size_t root = x;
  while (parent[root] != root) root = parent[root];
  while (parent[x] != root) {
    std::size_t next = parent[x];
    parent[x] = root;
    x = next;
  }
  return root;
}

}  // namespace

long long SublevelGraph::phi_key(std::size_t i, std::size_t j) const {
  if (i == j) return keys_[i];
  std::size_t n = states_.size();
  std::vector<std::size_t> parent(n, kInactive);
  std::size_t pos = 0;
  while (pos < n) {
    long long level = keys_[order_[pos]];
    std::size_t batch_end = pos;
    while (batch_end < n && keys_[order_[batch_end]] == level) {
      std::size_t idx = order_[batch_end];
      parent[idx] = idx;
      ++batch_end;
    }
    for (std::size_t t = pos; t < batch_end; ++t) {
      std::size_t idx = order_[t];
      for_each_neighbor(idx, [&](std::size_t nb) {
        if (parent[nb] == kInactive) return;
        std::size_t ra = dsu_find(parent, idx), rb = dsu_find(parent, nb);
        if (ra != rb) parent[rb] = ra;
      });
    }
    if (parent[i] != kInactive && parent[j] != kInactive &&
        dsu_find(parent, i) == dsu_find(parent, j))
      return level;
    pos = batch_end;
  }
  throw std::runtime_error("states not connected in the state graph");
}

Rational SublevelGraph::communication_height(std::size_t i,
                                             std::size_t j) const {
  return Rational(phi_key(i, j), spec_.alpha.denominator());
}

bool SublevelGraph::reachable_below(std::size_t i, std::size_t j,
                                    long long level_key,
                                    const std::vector<char>& banned) const {
  if (keys_[i] > level_key || keys_[j] > level_key) return false;
  if (!banned.empty() && (banned[i] || banned[j])) return false;
  if (i == j) return true;
  std::vector<char> seen(states_.size(), 0);
  std::vector<std::size_t> stack{i};
  seen[i] = 1;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    bool found = false;
    for_each_neighbor(u, [&](std::size_t nb) {
      if (found || seen[nb] || keys_[nb] > level_key) return;
      if (!banned.empty() && banned[nb]) return;
      if (nb == j) {
        found = true;
        return;
      }
      seen[nb] = 1;
      stack.push_back(nb);
    });
    if (found) return true;
  }
  return false;
}

Rational SublevelGraph::communication_height_oracle(std::size_t i,
                                                    std::size_t j) const {
  // Candidate levels: distinct energies >= max(H(i), H(j)).
  long long lo = std::max(keys_[i], keys_[j]);
  std::vector<long long> levels;
  for (long long k : keys_)
    if (k >= lo) levels.push_back(k);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<char> no_ban;
  if (!reachable_below(i, j, levels.back(), no_ban))
    throw std::runtime_error("states not connected in the state graph");
  std::size_t a = 0, b = levels.size() - 1;  // reachable at levels[b]
  while (a < b) {
    std::size_t mid = (a + b) / 2;
    if (reachable_below(i, j, levels[mid], no_ban))
      b = mid;
    else
      a = mid + 1;
  }
  return Rational(levels[a], spec_.alpha.denominator());
}

LandscapeReport SublevelGraph::report() const {
  std::size_t n = states_.size();
  std::vector<std::size_t> parent(n, kInactive);
  std::vector<long long> min_key(n, 0);
  std::vector<std::vector<std::size_t>> unresolved(n);
  std::vector<std::optional<long long>> barrier_key(n);

  auto unite = [&](std::size_t a, std::size_t b, long long level) {
    std::size_t ra = dsu_find(parent, a), rb = dsu_find(parent, b);
    if (ra == rb) return;
    if (min_key[ra] > min_key[rb]) std::swap(ra, rb);
    if (min_key[rb] > min_key[ra]) {
      // The higher-valley side first connects to something strictly lower
      // here; all of its pending states (energy == its min) resolve now.
      for (std::size_t z : unresolved[rb]) barrier_key[z] = level - min_key[rb];
      unresolved[rb].clear();
    } else {
      auto& dst = unresolved[ra];
      dst.insert(dst.end(), unresolved[rb].begin(), unresolved[rb].end());
      unresolved[rb].clear();
      unresolved[rb].shrink_to_fit();
    }
    parent[rb] = ra;
  };

  std::size_t pos = 0;
  while (pos < n) {
    long long level = keys_[order_[pos]];
    std::size_t batch_end = pos;
    while (batch_end < n && keys_[order_[batch_end]] == level) {
      std::size_t idx = order_[batch_end];
      parent[idx] = idx;
      min_key[idx] = level;
      unresolved[idx] = {idx};
      ++batch_end;
    }
    for (std::size_t t = pos; t < batch_end; ++t) {
      std::size_t idx = order_[t];
      for_each_neighbor(idx, [&](std::size_t nb) {
        if (parent[nb] != kInactive) unite(idx, nb, level);
      });
    }
    pos = batch_end;
  }

  LandscapeReport rep;
  rep.restricted = restricted_;
  rep.state_count = n;
  rep.states = states_;
  long long q = spec_.alpha.denominator();
  rep.energy_table.reserve(n);
  for (long long k : keys_) rep.energy_table.emplace_back(k, q);
  rep.stability_levels.resize(n);
  std::optional<long long> max_finite;
  for (std::size_t s = 0; s < n; ++s) {
    if (barrier_key[s]) {
      rep.stability_levels[s] = Rational(*barrier_key[s], q);
      if (!max_finite || *barrier_key[s] > *max_finite)
        max_finite = *barrier_key[s];
    } else {
      rep.stable_set.push_back(s);
    }
  }
  // gamma_m is the decay constant of low-temperature relaxation: the deepest
  // barrier any state outside one reference minimum must climb to reach a
  // strictly lower state or that minimum. For a unique minimum this is the
  // maximal finite stability level; degenerate minima add their tunneling
  // level to the reference one (lowest state index).
  std::optional<long long> best;
  if (max_finite) best = *max_finite;
  if (rep.stable_set.size() > 1) {
    std::size_t s0 = rep.stable_set.front();
    for (std::size_t s : rep.stable_set)
      if (s != s0) {
        long long t = phi_key(s, s0) - keys_[s];
        if (!best || t > *best) best = t;
      }
  }
  if (best) {
    rep.gamma_m = Rational(*best, q);
    for (std::size_t s = 0; s < n; ++s)
      if (barrier_key[s] && *barrier_key[s] == *best)
        rep.metastable_set.push_back(s);
    if (rep.stable_set.size() > 1) {
      std::size_t s0 = rep.stable_set.front();
      for (std::size_t s : rep.stable_set)
        if (s != s0 && phi_key(s, s0) - keys_[s] == *best)
          rep.metastable_set.push_back(s);
    }
  }
  return rep;
}

bool SublevelGraph::gate_check(
    std::size_t i, std::size_t j,
    const std::vector<std::uint64_t>& gate_masks) const {
  long long level = phi_key(i, j);
  std::vector<char> banned(states_.size(), 0);
  for (std::uint64_t m : gate_masks) {
    auto idx = index_of(m);
    if (idx && keys_[*idx] == level) banned[*idx] = 1;
  }
  return !reachable_below(i, j, level, banned);
}

// ---------------------------------------------------------------------------
// Convenience wrappers
// ---------------------------------------------------------------------------

Rational communication_height(const ModelSpec& spec,
                              const SpinConfiguration& x,
                              const SpinConfiguration& y,
                              LandscapeGuard guard) {
  auto g = SublevelGraph::full_space(spec, guard);
  return g.communication_height(*g.index_of(x.to_mask()),
                                *g.index_of(y.to_mask()));
}

std::optional<Rational> stability_level(const ModelSpec& spec,
                                        const SpinConfiguration& z,
                                        LandscapeGuard guard) {
  auto g = SublevelGraph::full_space(spec, guard);
  auto rep = g.report();
  return rep.stability_levels[*g.index_of(z.to_mask())];
}

LandscapeReport landscape_report(const ModelSpec& spec, LandscapeGuard guard) {
  return SublevelGraph::full_space(spec, guard).report();
}

bool gate_check(const ModelSpec& spec, const SpinConfiguration& x,
                const SpinConfiguration& y,
                const std::vector<SpinConfiguration>& gate,
                LandscapeGuard guard) {
  auto g = SublevelGraph::full_space(spec, guard);
  std::vector<std::uint64_t> masks;
  masks.reserve(gate.size());
  for (const auto& c : gate) masks.push_back(c.to_mask());
  return g.gate_check(*g.index_of(x.to_mask()), *g.index_of(y.to_mask()),
                      masks);
}

LandscapeReport restricted_subspace_analysis(
    const ModelSpec& spec, const std::vector<SpinConfiguration>& seeds,
    RestrictedOptions opt) {
  std::vector<std::uint64_t> masks;
  masks.reserve(seeds.size());
  for (const auto& c : seeds) masks.push_back(c.to_mask());
  return SublevelGraph::restricted(spec, masks, opt).report();
}

}  // namespace opinion
