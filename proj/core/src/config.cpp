#include "opinion/config.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace opinion {

SpinConfiguration::SpinConfiguration(const ModelSpec& spec, int fill_sign)
    : spec_(&spec), spins_(spec.sites(), static_cast<std::int8_t>(fill_sign)) {
  if (fill_sign != 1 && fill_sign != -1)
    throw std::invalid_argument("fill sign must be +1 or -1");
  rebuild_caches();
}

SpinConfiguration::SpinConfiguration(const ModelSpec& spec, const std::string& pm)
    : spec_(&spec), spins_(spec.sites()) {
  if (static_cast<int>(pm.size()) != spec.sites())
    throw std::invalid_argument("configuration string length != N^2");
  for (int i = 0; i < spec.sites(); ++i) {
    if (pm[i] == '+')
      spins_[i] = 1;
    else if (pm[i] == '-')
      spins_[i] = -1;
    else
      throw std::invalid_argument("configuration string must be '+'/'-'");
  }
  rebuild_caches();
}

void SpinConfiguration::set_all(int sign) {
  std::fill(spins_.begin(), spins_.end(), static_cast<std::int8_t>(sign));
  rebuild_caches();
}

void SpinConfiguration::rebuild_caches() {
  const ModelSpec& sp = *spec_;
  m_a_ = m_b_ = contour_ = 0;
  for (int i = 0; i < sp.sites(); ++i) {
    if (spins_[i] == 1) {
      RegionLabel r = sp.region_of_col(i % sp.N);
      if (r == RegionLabel::A) ++m_a_;
      if (r == RegionLabel::B) ++m_b_;
    }
    auto nb = sp.neighbor_indices(i);
    // Count each undirected edge once: down and right.
    if (spins_[i] != spins_[nb[1]]) ++contour_;
    if (spins_[i] != spins_[nb[3]]) ++contour_;
  }
}

void SpinConfiguration::flip(int idx) {
  const ModelSpec& sp = *spec_;
  int old = spins_[idx];
  spins_[idx] = static_cast<std::int8_t>(-old);
  RegionLabel r = sp.region_of_col(idx % sp.N);
  if (r == RegionLabel::A) m_a_ += (old == 1 ? -1 : 1);
  if (r == RegionLabel::B) m_b_ += (old == 1 ? -1 : 1);
  for (int nb : sp.neighbor_indices(idx)) contour_ += (spins_[nb] == old) ? 1 : -1;
}

Rational SpinConfiguration::hamiltonian() const {
  return energy_from_parts(*spec_, m_b_ - m_a_, contour_);
}

Rational SpinConfiguration::hamiltonian_direct() const {
  const ModelSpec& sp = *spec_;
  long long field = 0;
  long long pair = 0;
  for (int i = 0; i < sp.sites(); ++i) {
    field -= sp.hidden_preference_col(i % sp.N) * spins_[i];
    auto nb = sp.neighbor_indices(i);
    pair += spins_[i] * (spins_[nb[1]] + spins_[nb[3]]);
  }
  return Rational(field) - sp.alpha * Rational(pair, 2);
}

long long energy_key_from_parts(const ModelSpec& spec, int mb_minus_ma, int contour) {
  long long q = spec.alpha.denominator();
  long long p = spec.alpha.numerator();
  long long integer_part =
      static_cast<long long>(spec.N) * (spec.n - spec.m) + 2LL * mb_minus_ma;
  long long alpha_mult = static_cast<long long>(contour) -
                         static_cast<long long>(spec.N) * spec.N;
  return q * integer_part + p * alpha_mult;
}

Rational energy_from_parts(const ModelSpec& spec, int mb_minus_ma, int contour) {
  return Rational(energy_key_from_parts(spec, mb_minus_ma, contour),
                  spec.alpha.denominator());
}

Rational energy_from_key(const ModelSpec& spec, long long key) {
  return Rational(key, spec.alpha.denominator());
}

long long SpinConfiguration::energy_key() const {
  return energy_key_from_parts(*spec_, m_b_ - m_a_, contour_);
}

void SpinConfiguration::delta_parts(int idx, int& field, int& edge) const {
  const ModelSpec& sp = *spec_;
  int s = sp.hidden_preference_col(idx % sp.N);
  int sigma = spins_[idx];
  int sum = 0;
  for (int nb : sp.neighbor_indices(idx)) sum += spins_[nb];
  field = 2 * s * sigma;
  edge = sigma * sum;
}

Rational SpinConfiguration::delta_h(int idx) const {
  int f, e;
  delta_parts(idx, f, e);
  return Rational(f) + spec_->alpha * e;
}

long long SpinConfiguration::energy_key_after_flip(int idx) const {
  int f, e;
  delta_parts(idx, f, e);
  return energy_key() + spec_->alpha.denominator() * static_cast<long long>(f) +
         spec_->alpha.numerator() * static_cast<long long>(e);
}

ClusterDecomposition SpinConfiguration::decompose_clusters() const {
  const ModelSpec& sp = *spec_;
  const int V = sp.sites();
  ClusterDecomposition out;
  std::vector<int> comp(V, -1);
  // Lift coordinates in the universal cover; a component winds when an edge
  // closes a cycle with nonzero accumulated displacement.
  std::vector<int> lift_r(V), lift_c(V);
  std::vector<int> stack;
  for (int s0 = 0; s0 < V; ++s0) {
    if (comp[s0] >= 0) continue;
    int id = static_cast<int>(out.clusters.size());
    Cluster cl;
    cl.sign = spins_[s0];
    bool wind_v = false, wind_h = false;
    comp[s0] = id;
    lift_r[s0] = lift_c[s0] = 0;
    stack.assign(1, s0);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      cl.cells.push_back(u);
      auto nb = sp.neighbor_indices(u);
      static constexpr int dr[4] = {-1, 1, 0, 0};
      static constexpr int dc[4] = {0, 0, -1, 1};
      for (int d = 0; d < 4; ++d) {
        int v = nb[d];
        if (spins_[v] != cl.sign) continue;
        if (comp[v] == -1) {
          comp[v] = id;
          lift_r[v] = lift_r[u] + dr[d];
          lift_c[v] = lift_c[u] + dc[d];
          stack.push_back(v);
        } else {
          if (lift_r[v] != lift_r[u] + dr[d]) wind_v = true;
          if (lift_c[v] != lift_c[u] + dc[d]) wind_h = true;
        }
      }
    }
    std::sort(cl.cells.begin(), cl.cells.end());
    cl.winding = wind_v ? (wind_h ? Winding::Both : Winding::Vertical)
                        : (wind_h ? Winding::Horizontal : Winding::None);
    out.clusters.push_back(std::move(cl));
  }
  return out;
}

std::string SpinConfiguration::to_string() const {
  std::string s(spins_.size(), '-');
  for (size_t i = 0; i < spins_.size(); ++i)
    if (spins_[i] == 1) s[i] = '+';
  return s;
}

std::string SpinConfiguration::to_rle() const {
  std::string out;
  int i = 0, V = size();
  while (i < V) {
    int j = i;
    while (j < V && spins_[j] == spins_[i]) ++j;
    out += std::to_string(j - i);
    out += (spins_[i] == 1 ? '+' : '-');
    i = j;
  }
  return out;
}

SpinConfiguration SpinConfiguration::from_rle(const ModelSpec& spec,
                                              const std::string& rle) {
  std::string pm;
  size_t i = 0;
  while (i < rle.size()) {
    size_t j = i;
    while (j < rle.size() && std::isdigit(static_cast<unsigned char>(rle[j]))) ++j;
    if (j == i || j == rle.size() || (rle[j] != '+' && rle[j] != '-'))
      throw std::invalid_argument("malformed RLE configuration");
    pm.append(std::stoul(rle.substr(i, j - i)), rle[j]);
    i = j + 1;
  }
  return SpinConfiguration(spec, pm);
}

bool SpinConfiguration::validate_caches() const {
  SpinConfiguration fresh(*spec_, to_string());
  return fresh.m_a_ == m_a_ && fresh.m_b_ == m_b_ && fresh.contour_ == contour_;
}

std::uint64_t SpinConfiguration::to_mask() const {
  if (size() > 64) throw std::domain_error("mask form needs N <= 8");
  std::uint64_t mask = 0;
  for (int i = 0; i < size(); ++i)
    if (spins_[i] == 1) mask |= (1ULL << i);
  return mask;
}

SpinConfiguration SpinConfiguration::from_mask(const ModelSpec& spec,
                                               std::uint64_t mask) {
  std::string pm(spec.sites(), '-');
  for (int i = 0; i < spec.sites(); ++i)
    if (mask & (1ULL << i)) pm[i] = '+';
  return SpinConfiguration(spec, pm);
}

}  // namespace opinion
