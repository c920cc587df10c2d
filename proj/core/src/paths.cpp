#include "opinion/paths.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace opinion {

namespace {

int wrap(int x, int N) { return ((x % N) + N) % N; }

struct ColSpan {
  int c0;  // leftmost column
  int w;   // width in columns
};

ColSpan span_of(const ModelSpec& s, DropletRegion r) {
  switch (r) {
    case DropletRegion::A: return {0, s.n};
    case DropletRegion::B: return {s.n + s.k, s.m};
    case DropletRegion::Wide: return {s.n, s.m + 2 * s.k};
  }
  throw std::logic_error("bad region");
}

// A-side droplets are positive islands; B/Wide droplets are negative ones.
int droplet_sign(DropletRegion r) { return r == DropletRegion::A ? +1 : -1; }

SpinConfiguration config_with_cells(const ModelSpec& spec, int cell_sign,
                                    const std::vector<int>& cells) {
  SpinConfiguration c(spec, -cell_sign);
  for (int idx : cells) c.set_spin(idx, cell_sign);
  return c;
}

// Column visit order for droplet growth: `base` columns from c0 rightward,
// then alternating right / left of that block (wrapping), `total` in all.
std::vector<int> growth_columns(const ModelSpec& spec, int c0, int base,
                                int total) {
  std::vector<int> cols;
  for (int c = 0; c < base; ++c) cols.push_back(wrap(c0 + c, spec.N));
  int right = c0 + base, left = c0 - 1;
  while (static_cast<int>(cols.size()) < total) {
    cols.push_back(wrap(right++, spec.N));
    if (static_cast<int>(cols.size()) < total)
      cols.push_back(wrap(left--, spec.N));
  }
  return cols;
}

// Flip order growing a droplet from w0 x h0 (columns cols[0..w0), rows
// 0..h0) to w1 x h1 through quasi-squares: squares and tall shapes start the
// next column, wide shapes fill the next row; width saturates at w1.
void grow_quasi(const std::vector<int>& cols, int N, int w0, int h0, int w1,
                int h1, std::vector<int>& flips) {
  int w = w0, h = h0;
  if (w == 0) {
    flips.push_back(cols[0]);
    w = h = 1;
  }
  auto add_col = [&] {
    for (int r = 0; r < h; ++r) flips.push_back(r * N + cols[w]);
    ++w;
  };
  auto add_row = [&] {
    std::vector<int> cs(cols.begin(), cols.begin() + w);
    std::sort(cs.begin(), cs.end());
    for (int c : cs) flips.push_back(h * N + c);
    ++h;
  };
  while (w < w1 || h < h1) {
    if (w < w1 && h >= w)
      add_col();
    else if (h < h1)
      add_row();
    else
      add_col();
  }
}

void fill_column(const ModelSpec& spec, int col, std::vector<int>& flips) {
  for (int r = 0; r < spec.N; ++r) flips.push_back(r * spec.N + col);
}

PathRecord make_path(const ModelSpec& spec, SpinConfiguration state,
                     const std::vector<int>& flips) {
  PathRecord rec;
  rec.states.push_back(state);
  rec.elevations.push_back(state.hamiltonian());
  for (int idx : flips) {
    state.flip(idx);
    rec.states.push_back(state);
    rec.elevations.push_back(state.hamiltonian());
  }
  rec.max_elevation = rec.elevations[0];
  for (const auto& e : rec.elevations)
    rec.max_elevation = std::max(rec.max_elevation, e);
  for (std::size_t i = 0; i < rec.elevations.size(); ++i)
    if (rec.elevations[i] == rec.max_elevation) rec.saddle_indices.push_back(i);
  return rec;
}

// Flip lists for the elementary pieces, each relative to its start state.

std::vector<int> flips_bar_w1(const ModelSpec& s) {
  std::vector<int> f;
  grow_quasi(growth_columns(s, 0, s.n, s.n), s.N, 0, 0, s.n, s.n + 1, f);
  return f;
}

std::vector<int> flips_bar_w2(const ModelSpec& s) {
  std::vector<int> f;
  grow_quasi(growth_columns(s, 0, s.n, s.n), s.N, s.n, s.n + 1, s.n, s.N, f);
  return f;
}

std::vector<int> flips_tilde_w1(const ModelSpec& s) {
  std::vector<int> f;
  grow_quasi(growth_columns(s, s.n + s.k, s.m, s.m), s.N, 0, 0, s.m, s.m + 1,
             f);
  return f;
}

std::vector<int> flips_tilde_w2(const ModelSpec& s) {
  std::vector<int> f;
  grow_quasi(growth_columns(s, s.n + s.k, s.m, s.m), s.N, s.m, s.m + 1, s.m,
             s.N, f);
  return f;
}

std::vector<int> flips_tilde_w3(const ModelSpec& s) {
  std::vector<int> f;
  int wide = 2 * s.k + s.m;
  grow_quasi(growth_columns(s, s.n + s.k, s.m, wide), s.N, s.m, s.m + 1, wide,
             wide + 1, f);
  return f;
}

std::vector<int> flips_tilde_w4(const ModelSpec& s) {
  std::vector<int> f;
  int wide = 2 * s.k + s.m;
  grow_quasi(growth_columns(s, s.n + s.k, s.m, wide), s.N, wide, wide + 1,
             wide, s.N, f);
  return f;
}

std::vector<int> flips_tilde_w5(const ModelSpec& s) {
  std::vector<int> f;
  int wide = 2 * s.k + s.m;
  grow_quasi(growth_columns(s, s.n + s.k, s.m, s.N), s.N, wide, wide + 1, s.N,
             s.N, f);
  return f;
}

std::vector<int> flips_w_prime(const ModelSpec& s) {
  std::vector<int> f;
  for (int c = s.n + s.k; c < s.n + s.k + s.m; ++c) fill_column(s, c, f);
  return f;
}

std::vector<int> flips_tilde_w6(const ModelSpec& s) {
  // Column 0 borders S2 through the wrap, so removal starts there.
  std::vector<int> f;
  for (int c = 0; c < s.n; ++c) fill_column(s, c, f);
  return f;
}

std::vector<int> flips_tilde_w7(const ModelSpec& s) {
  // S1 columns from the B boundary leftward, then S2 rightward, then A.
  std::vector<int> f;
  for (int c = s.n + s.k - 1; c >= s.n; --c) fill_column(s, c, f);
  for (int c = s.n + s.k + s.m; c < s.N; ++c) fill_column(s, c, f);
  auto a = flips_tilde_w6(s);
  f.insert(f.end(), a.begin(), a.end());
  return f;
}

// sigma_A(0,0) -> sigma_A(k,k): fill S1 rightward from A, then S2 leftward
// from the wrap; reverses the first part of flips_tilde_w7.
std::vector<int> flips_sigma_bridge(const ModelSpec& s) {
  std::vector<int> f;
  for (int c = s.n; c < s.n + s.k; ++c) fill_column(s, c, f);
  for (int c = s.N - 1; c >= s.n + s.k + s.m; --c) fill_column(s, c, f);
  return f;
}

void append(std::vector<int>& into, const std::vector<int>& piece) {
  into.insert(into.end(), piece.begin(), piece.end());
}

void require_regime(const ModelSpec& s, bool ok, const char* what) {
  if (!ok) throw std::domain_error(std::string(what) + " outside its regime");
}

bool alpha_low(const ModelSpec& s) {
  return Rational(2) <= s.alpha && s.alpha <= Rational(s.n);
}

bool alpha_high(const ModelSpec& s) { return s.alpha >= Rational(s.m + 1); }

}  // namespace

const char* to_string(PathName name) {
  switch (name) {
    case PathName::BarW1: return "bar_w1";
    case PathName::TildeW1: return "tilde_w1";
    case PathName::BarW2: return "bar_w2";
    case PathName::TildeW2: return "tilde_w2";
    case PathName::TildeW3: return "tilde_w3";
    case PathName::TildeW4: return "tilde_w4";
    case PathName::TildeW5: return "tilde_w5";
    case PathName::TildeW6: return "tilde_w6";
    case PathName::TildeW7: return "tilde_w7";
    case PathName::WPrime: return "w_prime";
    case PathName::BarStar1: return "bar_star1";
    case PathName::BarStar2: return "bar_star2";
    case PathName::BarStar3: return "bar_star3";
    case PathName::Star1: return "star1";
    case PathName::Star2: return "star2";
    case PathName::Star3: return "star3";
    case PathName::Star4: return "star4";
  }
  return "?";
}

SpinConfiguration homogeneous(const ModelSpec& spec, int sign) {
  return SpinConfiguration(spec, sign);
}

SpinConfiguration sigma_A(const ModelSpec& spec, int l, int p) {
  if (l < 0 || l > spec.k || p < 0 || p > spec.k)
    throw std::invalid_argument("interface shifts must lie in [0, k]");
  SpinConfiguration c(spec, -1);
  for (int col = 0; col < spec.N; ++col) {
    bool plus = col < spec.n ||
                (col >= spec.n && col < spec.n + l) ||  // into S1
                col >= spec.N - p;                      // into S2 via wrap
    if (plus)
      for (int r = 0; r < spec.N; ++r) c.set_spin(r * spec.N + col, +1);
  }
  return c;
}

SpinConfiguration rect_prot_config(const ModelSpec& spec, DropletRegion region,
                                   int a, int b, int k) {
  auto span = span_of(spec, region);
  if (a < 1 || a > span.w || b < 1 || b > spec.N || k < 0 || k > a ||
      (k > 0 && b >= spec.N))
    throw std::invalid_argument("rectangle does not fit the region");
  std::vector<int> cells;
  for (int r = 0; r < b; ++r)
    for (int c = 0; c < a; ++c) cells.push_back(r * spec.N + span.c0 + c);
  for (int c = 0; c < k; ++c) cells.push_back(b * spec.N + span.c0 + c);
  return config_with_cells(spec, droplet_sign(region), cells);
}

std::vector<SpinConfiguration> rect_prot_family(const ModelSpec& spec,
                                                DropletRegion region, int a,
                                                int b, int k) {
  auto span = span_of(spec, region);
  const int N = spec.N;
  std::set<std::vector<int>> seen;
  std::vector<SpinConfiguration> out;
  auto emit = [&](std::vector<int> cells) {
    std::sort(cells.begin(), cells.end());
    if (seen.insert(cells).second)
      out.push_back(config_with_cells(spec, droplet_sign(region), cells));
  };
  // Orientation 0: a columns x b rows, k-run in the row above or below.
  if (a <= span.w && (k == 0 || b < N)) {
    for (int c0 = span.c0; c0 + a <= span.c0 + span.w; ++c0)
      for (int r0 = 0; r0 < N; ++r0)
        for (int side = 0; side < (k ? 2 : 1); ++side)
          for (int off = 0; off + k <= a; ++off) {
            std::vector<int> cells;
            for (int r = 0; r < b; ++r)
              for (int c = 0; c < a; ++c)
                cells.push_back(wrap(r0 + r, N) * N + c0 + c);
            int pr = side ? wrap(r0 + b, N) : wrap(r0 - 1, N);
            for (int c = 0; c < k; ++c) cells.push_back(pr * N + c0 + off + c);
            emit(std::move(cells));
            if (k == 0) break;
          }
  }
  // Orientation 1: b columns x a rows, k-run in the column left or right.
  if (b <= span.w) {
    for (int c0 = span.c0; c0 + b <= span.c0 + span.w; ++c0)
      for (int r0 = 0; r0 < N; ++r0)
        for (int side = 0; side < (k ? 2 : 1); ++side) {
          int pc = side ? c0 + b : c0 - 1;
          if (k > 0 && (pc < span.c0 || pc >= span.c0 + span.w)) continue;
          for (int off = 0; off + k <= a; ++off) {
            std::vector<int> cells;
            for (int r = 0; r < a; ++r)
              for (int c = 0; c < b; ++c)
                cells.push_back(wrap(r0 + r, N) * N + c0 + c);
            for (int r = 0; r < k; ++r)
              cells.push_back(wrap(r0 + off + r, N) * N + pc);
            emit(std::move(cells));
            if (k == 0) break;
          }
        }
  }
  return out;
}

SpinConfiguration column_config(const ModelSpec& spec, DropletRegion region,
                                int s, int t) {
  auto span = span_of(spec, region);
  if (s < 0 || s >= span.w || t < 1 || t > spec.N)
    throw std::invalid_argument("column set does not fit the region");
  std::vector<int> cells;
  if (region == DropletRegion::A) {
    // Full columns at distance 1..s from S1 (rightmost columns of A), the
    // incomplete one on the next column inward.
    for (int j = 1; j <= s; ++j)
      for (int r = 0; r < spec.N; ++r)
        cells.push_back(r * spec.N + (spec.n - j));
    int pc = spec.n - s - 1;
    if (s == 0) pc = spec.n - 1;
    for (int r = 0; r < t; ++r) cells.push_back(r * spec.N + pc);
  } else {
    // Full columns at distance 1..s from S1 (leftmost columns of B), the
    // incomplete one on the next column rightward.
    for (int j = 1; j <= s; ++j)
      for (int r = 0; r < spec.N; ++r)
        cells.push_back(r * spec.N + (span.c0 + j - 1));
    int pc = span.c0 + s;
    if (s == 0) pc = span.c0;
    for (int r = 0; r < t; ++r) cells.push_back(r * spec.N + pc);
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return config_with_cells(spec, droplet_sign(region), cells);
}

namespace {

// Critical droplet family: the a x (a-1) quasi-square with the unit
// protuberance on any of its four sides. All placements sit at the same
// level; the two calls cover the long-side and short-side attachments.
std::vector<SpinConfiguration> critical_droplets(const ModelSpec& spec,
                                                 DropletRegion region, int a) {
  std::vector<SpinConfiguration> out =
      rect_prot_family(spec, region, a, a - 1, 1);
  for (auto& c : rect_prot_family(spec, region, a - 1, a, 1))
    out.push_back(std::move(c));
  return out;
}

}  // namespace

std::vector<SpinConfiguration> gate_GA(const ModelSpec& spec) {
  int a = static_cast<int>(spec.alpha.numerator());
  if (!is_integer(spec.alpha) || a < 2) return {};
  return critical_droplets(spec, DropletRegion::A, a);
}

std::vector<SpinConfiguration> gate_GB(const ModelSpec& spec) {
  int a = static_cast<int>(spec.alpha.numerator());
  if (!is_integer(spec.alpha) || a < 2) return {};
  return critical_droplets(spec, DropletRegion::B, a);
}

std::vector<SpinConfiguration> gate_RA(const ModelSpec& spec) {
  std::vector<SpinConfiguration> out;
  for (int a = spec.n - 1; a <= spec.N - 2; ++a) {
    auto fam = rect_prot_family(spec, DropletRegion::A, spec.n, a, 1);
    out.insert(out.end(), fam.begin(), fam.end());
  }
  return out;
}

std::vector<SpinConfiguration> gate_RB(const ModelSpec& spec) {
  std::vector<SpinConfiguration> out;
  for (int a = spec.m - 1; a <= spec.N - 2; ++a) {
    auto fam = rect_prot_family(spec, DropletRegion::B, spec.m, a, 1);
    out.insert(out.end(), fam.begin(), fam.end());
  }
  return out;
}

namespace {

std::vector<SpinConfiguration> column_gate(const ModelSpec& spec,
                                           DropletRegion region) {
  auto span = span_of(spec, region);
  std::vector<SpinConfiguration> out;
  for (int c = span.c0; c < span.c0 + span.w; ++c)
    for (int side : {-1, +1}) {
      int pc = c + side;
      if (pc < span.c0 || pc >= span.c0 + span.w) continue;
      for (int r = 0; r < spec.N; ++r) {
        std::vector<int> cells;
        for (int rr = 0; rr < spec.N; ++rr) cells.push_back(rr * spec.N + c);
        cells.push_back(r * spec.N + pc);
        std::sort(cells.begin(), cells.end());
        out.push_back(config_with_cells(spec, droplet_sign(region), cells));
      }
    }
  return out;
}

}  // namespace

std::vector<SpinConfiguration> gate_CA(const ModelSpec& spec) {
  return column_gate(spec, DropletRegion::A);
}

std::vector<SpinConfiguration> gate_CB(const ModelSpec& spec) {
  return column_gate(spec, DropletRegion::B);
}

std::vector<GateSet> gate_family(const ModelSpec& spec) {
  auto join = [](std::initializer_list<std::vector<SpinConfiguration>> parts) {
    std::vector<SpinConfiguration> out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
  };
  switch (spec.regime()) {
    case Regime::LowAlpha:
      return {{"GA", "-1 -> sigma_A", gate_GA(spec)},
              {"GB", "+1 -> sigma_A", gate_GB(spec)}};
    case Regime::CriticalEqual:
      return {{"RA", "-1 -> +1", gate_RA(spec)},
              {"RB", "-1 -> +1", gate_RB(spec)}};
    case Regime::CriticalStrict:
      return {{"RA", "-1 -> sigma_A", gate_RA(spec)}};
    case Regime::MidAlpha:
      // The alpha x (alpha-1) droplet no longer fits inside A or B here, so
      // the G components of the printed unions are empty.
      return {{"GA|RA|CA", "+1 -> -1",
               join({gate_GA(spec), gate_RA(spec), gate_CA(spec)})},
              {"GB|RB|CB", "+1 -> -1",
               join({gate_GB(spec), gate_RB(spec), gate_CB(spec)})}};
    case Regime::HighAlpha: {
      std::vector<GateSet> out;
      if (spec.m == spec.n)
        out.push_back({"RA(m,N-2,1)", "+1 -> -1",
                       rect_prot_family(spec, DropletRegion::A, spec.m,
                                        spec.N - 2, 1)});
      out.push_back({"RB(m,N-2,1)", "+1 -> -1",
                     rect_prot_family(spec, DropletRegion::B, spec.m,
                                      spec.N - 2, 1)});
      return out;
    }
    case Regime::VeryHighAlpha: {
      std::vector<GateSet> out;
      if (spec.m == spec.n) out.push_back({"CA", "+1 -> -1", gate_CA(spec)});
      out.push_back({"CB", "+1 -> -1", gate_CB(spec)});
      return out;
    }
    case Regime::Unsupported: break;
  }
  throw std::domain_error("no gate family outside the supported regimes");
}

PathRecord build_reference_path(const ModelSpec& spec, PathName name) {
  const ModelSpec& s = spec;
  std::vector<int> f;
  switch (name) {
    case PathName::BarW1:
      return make_path(s, homogeneous(s, -1), flips_bar_w1(s));
    case PathName::BarW2: {
      auto pre = make_path(s, homogeneous(s, -1), flips_bar_w1(s));
      return make_path(s, pre.states.back(), flips_bar_w2(s));
    }
    case PathName::TildeW1:
      return make_path(s, homogeneous(s, +1), flips_tilde_w1(s));
    case PathName::TildeW2: {
      auto pre = make_path(s, homogeneous(s, +1), flips_tilde_w1(s));
      return make_path(s, pre.states.back(), flips_tilde_w2(s));
    }
    case PathName::TildeW3: {
      auto pre = make_path(s, homogeneous(s, +1), flips_tilde_w1(s));
      return make_path(s, pre.states.back(), flips_tilde_w3(s));
    }
    case PathName::TildeW4: {
      f = flips_tilde_w1(s);
      append(f, flips_tilde_w3(s));
      auto pre = make_path(s, homogeneous(s, +1), f);
      return make_path(s, pre.states.back(), flips_tilde_w4(s));
    }
    case PathName::TildeW5: {
      f = flips_tilde_w1(s);
      append(f, flips_tilde_w3(s));
      auto pre = make_path(s, homogeneous(s, +1), f);
      return make_path(s, pre.states.back(), flips_tilde_w5(s));
    }
    case PathName::TildeW6:
      return make_path(s, sigma_A(s, 0, 0), flips_tilde_w6(s));
    case PathName::TildeW7:
      return make_path(s, sigma_A(s, s.k, s.k), flips_tilde_w7(s));
    case PathName::WPrime:
      return make_path(s, homogeneous(s, +1), flips_w_prime(s));
    case PathName::BarStar1:
      require_regime(s, alpha_low(s), "bar_star1");
      f = flips_tilde_w1(s);
      append(f, flips_tilde_w2(s));
      return make_path(s, homogeneous(s, +1), f);
    case PathName::BarStar2:
      require_regime(s, alpha_low(s), "bar_star2");
      f = flips_bar_w1(s);
      append(f, flips_bar_w2(s));
      return make_path(s, homogeneous(s, -1), f);
    case PathName::BarStar3: {
      require_regime(s, alpha_low(s), "bar_star3");
      f = flips_bar_w1(s);
      append(f, flips_bar_w2(s));
      append(f, flips_sigma_bridge(s));
      auto back = flips_tilde_w1(s);
      append(back, flips_tilde_w2(s));
      std::reverse(back.begin(), back.end());
      append(f, back);
      return make_path(s, homogeneous(s, -1), f);
    }
    case PathName::Star1:
      require_regime(s, alpha_high(s), "star1");
      f = flips_w_prime(s);
      append(f, flips_tilde_w7(s));
      return make_path(s, homogeneous(s, +1), f);
    case PathName::Star2:
      require_regime(s, alpha_high(s), "star2");
      f = flips_tilde_w1(s);
      append(f, flips_tilde_w2(s));
      append(f, flips_tilde_w7(s));
      return make_path(s, homogeneous(s, +1), f);
    case PathName::Star3:
      require_regime(s, alpha_high(s), "star3");
      f = flips_tilde_w1(s);
      append(f, flips_tilde_w3(s));
      append(f, flips_tilde_w4(s));
      append(f, flips_tilde_w6(s));
      return make_path(s, homogeneous(s, +1), f);
    case PathName::Star4:
      require_regime(s, alpha_high(s), "star4");
      f = flips_tilde_w1(s);
      append(f, flips_tilde_w3(s));
      append(f, flips_tilde_w5(s));
      return make_path(s, homogeneous(s, +1), f);
  }
  throw std::logic_error("bad path name");
}

Rational closed_form_phi(const ModelSpec& s, PathName name) {
  const long long N = s.N, n = s.n, m = s.m, k = s.k;
  const Rational& a = s.alpha;
  Rational h_plus = Rational(N * (m - n)) - a * Rational(N * N);
  auto rel = [&](PathName p) -> Rational {  // Phi - H(+1)
    switch (p) {
      case PathName::WPrime:
        return Rational(2 * (N * m - N - 1 - N * n) + 2 * N * (n - m)) +
               a * Rational(2 * (N + 1));
      case PathName::TildeW1:
        if (a <= Rational(m))
          return Rational(2 * (N * m - 1 - N * n) + 2 * N * (n - m)) -
                 Rational(2) * a * (a + Rational(1)) +
                 a * (Rational(4) * a + Rational(4));
        return Rational(2 * (N * m - m * (m + 1) - 1 - N * n) +
                        2 * N * (n - m)) +
               a * Rational(2 * (2 * m + 2));
      case PathName::TildeW2:
        return Rational(2 * (N * m - m * (N - 2) - 1 - N * n) +
                        2 * N * (n - m)) +
               a * Rational(2 * (m + N - 1));
      case PathName::TildeW3: {
        Rational g = std::max(Rational(m, 2), Rational(n + 1));
        if (a >= g) {
          long long q = 2 * k + m;
          return Rational(2 * (N * m - q * (q + 1) - 1 - N * n) +
                          2 * N * (n - m)) +
                 a * Rational(2 * (4 * k + 2 * m + 2));
        }
        return Rational(2 * (N * m - m * (m + 1) - 1 - N * n) +
                        2 * N * (n - m)) +
               a * Rational(2 * (2 * m + 2));
      }
      case PathName::TildeW4: {
        long long q = 2 * k + m;
        return Rational(2 * (N * m - q * (N - 2) - 1 - N * n) +
                        2 * N * (n - m)) +
               a * Rational(2 * (q + N - 1));
      }
      case PathName::TildeW5:
        return Rational(2 * (N * m - (N - 2) * (N - 2) - 1 - N * n +
                             (n - 2) * (N - 2)) +
                        2 * N * (n - m)) +
               a * Rational(2 * (2 * N - 3));
      case PathName::TildeW6:
      case PathName::TildeW7:
        return Rational(2 * (N * n - N - 1 - N * m) + 2 * N * (m - n)) +
               a * Rational(2 * (N + 1));
      default: throw std::logic_error("not elementary");
    }
  };
  switch (name) {
    case PathName::WPrime:
    case PathName::TildeW1:
    case PathName::TildeW2:
    case PathName::TildeW3:
    case PathName::TildeW4:
    case PathName::TildeW5:
    case PathName::TildeW6:
    case PathName::TildeW7:
      return h_plus + rel(name);
    case PathName::Star1:
      return h_plus + std::max(rel(PathName::WPrime), rel(PathName::TildeW7));
    case PathName::Star2:
      return h_plus + std::max({rel(PathName::TildeW1), rel(PathName::TildeW2),
                                rel(PathName::TildeW7)});
    case PathName::Star3:
      return h_plus + std::max({rel(PathName::TildeW1), rel(PathName::TildeW3),
                                rel(PathName::TildeW4),
                                rel(PathName::TildeW6)});
    case PathName::Star4:
      return h_plus + std::max({rel(PathName::TildeW1), rel(PathName::TildeW3),
                                rel(PathName::TildeW5)});
    case PathName::BarStar1:
    case PathName::BarStar2:
      require_regime(s, alpha_low(s), to_string(name));
      return Rational(N * (m - n) - 2) + Rational(2) * a * a -
             a * Rational(N * N - 2);
    case PathName::BarStar3:
      // Printed only at alpha = n = m; the same expression extends down the
      // low-coupling range when m = n, where both halves share one saddle.
      require_regime(s, alpha_low(s) && m == n, "bar_star3");
      return Rational(2) * a * a - a * Rational(N * N - 2) - Rational(2);
    case PathName::BarW1:
    case PathName::BarW2:
      throw std::domain_error("no printed closed form for this piece");
  }
  throw std::logic_error("bad path name");
}

Rational path_formula_discrepancy(const ModelSpec& spec, PathName name) {
  return build_reference_path(spec, name).max_elevation -
         closed_form_phi(spec, name);
}

Rational gamma_star_height(const ModelSpec& s) {
  const long long N = s.N, n = s.n, m = s.m;
  const Rational& a = s.alpha;
  switch (s.regime()) {
    case Regime::LowAlpha:
      return Rational(N * (m - n) - 2) + Rational(2) * a * a -
             a * Rational(N * N - 2);
    case Regime::CriticalEqual:
      return Rational(2 * n * n - n * (N * N - 2) - 2);
    case Regime::CriticalStrict:
      return Rational(N * (m - n) + 2 * n * n - n * (N * N - 2) - 2);
    case Regime::MidAlpha:
      return std::min({closed_form_phi(s, PathName::Star1),
                       closed_form_phi(s, PathName::Star2),
                       closed_form_phi(s, PathName::Star3),
                       closed_form_phi(s, PathName::Star4)});
    case Regime::HighAlpha:
      return Rational(-N * (n + m) + 2 * (2 * m - 1)) - a * Rational(N * N) +
             a * Rational(2 * (N + m - 1));
    case Regime::VeryHighAlpha:
      return Rational(N * (m - n) - 2 * (N + 1)) - a * Rational(N * N) +
             a * Rational(2 * (N + 1));
    case Regime::Unsupported: break;
  }
  throw std::domain_error("no barrier formula outside the supported regimes");
}

Rational barrier_from(const ModelSpec& spec, const SpinConfiguration& start) {
  return gamma_star_height(spec) - start.hamiltonian();
}

std::vector<SpinConfiguration> regime_start_states(const ModelSpec& spec) {
  switch (spec.regime()) {
    case Regime::LowAlpha:
    case Regime::CriticalEqual:
      return {homogeneous(spec, -1), homogeneous(spec, +1)};
    case Regime::CriticalStrict:
      return {homogeneous(spec, -1)};
    case Regime::MidAlpha:
    case Regime::HighAlpha:
    case Regime::VeryHighAlpha:
      return {homogeneous(spec, +1)};
    case Regime::Unsupported: break;
  }
  throw std::domain_error("no start states outside the supported regimes");
}

}  // namespace opinion
