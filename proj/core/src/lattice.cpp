#include "opinion/lattice.hpp"

#include <json.hpp>

#include <sstream>

namespace opinion {

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(s));
    long long p = std::stoll(s.substr(0, slash));
    long long q = std::stoll(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator");
    return Rational(p, q);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational: " + s);
  }
}

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << '/' << r.denominator();
  return os.str();
}

const char* to_string(RegionLabel r) {
  switch (r) {
    case RegionLabel::A: return "A";
    case RegionLabel::S1: return "S1";
    case RegionLabel::B: return "B";
    case RegionLabel::S2: return "S2";
  }
  return "?";
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::LowAlpha: return "LowAlpha";
    case Regime::CriticalEqual: return "CriticalEqual";
    case Regime::CriticalStrict: return "CriticalStrict";
    case Regime::MidAlpha: return "MidAlpha";
    case Regime::HighAlpha: return "HighAlpha";
    case Regime::VeryHighAlpha: return "VeryHighAlpha";
    case Regime::Unsupported: return "Unsupported";
  }
  return "?";
}

ModelSpec::ModelSpec(int N_, int n_, int m_, int k_, Rational alpha_, bool strict)
    : N(N_), n(n_), m(m_), k(k_), alpha(alpha_), strict_assumptions(strict) {
  validate();
}

void ModelSpec::validate() const {
  if (N < 2 || n < 1 || m < 1 || k < 1)
    throw std::invalid_argument("strip widths and side must be positive");
  if (n + m + 2 * k != N)
    throw std::invalid_argument("strip widths must satisfy n + m + 2k = N");
  // The coupling may be zero (field-only variant) but never negative.
  if (alpha < 0) throw std::invalid_argument("alpha must be nonnegative");
  if (strict_assumptions) {
    if (N % 2 != 0) throw std::invalid_argument("N must be even");
    if (!(3 <= n && n <= m)) throw std::invalid_argument("need 3 <= n <= m");
    if (!(1 <= k && 2 * k < N)) throw std::invalid_argument("need 1 <= k < N/2");
    if (!is_integer(alpha) ||
        !((Rational(2) <= alpha && alpha <= Rational(n)) || alpha >= Rational(m + 1)))
      throw std::invalid_argument(
          "alpha must be an integer with 2 <= alpha <= n or alpha >= m+1");
  }
}

RegionLabel ModelSpec::region_of_col(int col) const {
  if (col < n) return RegionLabel::A;
  if (col < n + k) return RegionLabel::S1;
  if (col < n + k + m) return RegionLabel::B;
  return RegionLabel::S2;
}

int ModelSpec::hidden_preference_col(int col) const {
  switch (region_of_col(col)) {
    case RegionLabel::A: return 1;
    case RegionLabel::B: return -1;
    default: return 0;
  }
}

int ModelSpec::hidden_preference(Site s) const { return hidden_preference_col(s.col); }

std::array<Site, 4> ModelSpec::neighbors(Site s) const {
  auto wrap = [this](int x) { return (x + N) % N; };
  return {Site{wrap(s.row - 1), s.col}, Site{wrap(s.row + 1), s.col},
          Site{s.row, wrap(s.col - 1)}, Site{s.row, wrap(s.col + 1)}};
}

std::array<int, 4> ModelSpec::neighbor_indices(int idx) const {
  int r = idx / N, c = idx % N;
  int up = (r == 0 ? N - 1 : r - 1) * N + c;
  int dn = (r == N - 1 ? 0 : r + 1) * N + c;
  int lf = r * N + (c == 0 ? N - 1 : c - 1);
  int rt = r * N + (c == N - 1 ? 0 : c + 1);
  return {up, dn, lf, rt};
}

Rational ModelSpec::alpha_star() const {
  if (m <= 2) throw std::domain_error("alpha_star requires m > 2");
  return Rational(static_cast<long long>(N) * (m - 1) - 2 * m, m - 2);
}

Regime ModelSpec::regime() const {
  // Classification is total; violations of the strip/interaction assumptions
  // map to Unsupported instead of throwing.
  if (N % 2 != 0 || !(3 <= n && n <= m) || !(1 <= k && 2 * k < N) ||
      n + m + 2 * k != N || !is_integer(alpha))
    return Regime::Unsupported;
  if (alpha < 2) return Regime::Unsupported;
  if (alpha < Rational(n)) return Regime::LowAlpha;
  if (alpha == Rational(n)) return n == m ? Regime::CriticalEqual : Regime::CriticalStrict;
  if (alpha <= Rational(m)) return Regime::Unsupported;  // n < alpha <= m excluded
  if (alpha < Rational(2 * k + m)) return Regime::MidAlpha;
  if (alpha < alpha_star()) return Regime::HighAlpha;
  return Regime::VeryHighAlpha;
}

int ModelSpec::col_distance_to_A(int col) const {
  if (col < n) return 0;
  // Distance through S1 (rightward from A) or through S2 (leftward, wrapping).
  return std::min(col - (n - 1), N - col);
}

std::string ModelSpec::to_json() const {
  nlohmann::json j;
  j["N"] = N;
  j["n"] = n;
  j["m"] = m;
  j["k"] = k;
  if (is_integer(alpha))
    j["alpha"] = alpha.numerator();
  else
    j["alpha"] = to_string(alpha);
  j["strict"] = strict_assumptions;
  return j.dump();
}

ModelSpec ModelSpec::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ModelSpec s;
  s.N = j.at("N").get<int>();
  s.n = j.at("n").get<int>();
  s.m = j.at("m").get<int>();
  s.k = j.at("k").get<int>();
  const auto& a = j.at("alpha");
  if (a.is_number_integer())
    s.alpha = Rational(a.get<long long>());
  else
    s.alpha = parse_rational(a.get<std::string>());
  s.strict_assumptions = j.value("strict", true);
  s.validate();
  return s;
}

}  // namespace opinion
