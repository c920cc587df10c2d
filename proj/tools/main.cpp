// Batch experiment runner: closed-form analysis, reference paths, shape
// enumeration, full-space brute force, Monte Carlo simulation, and the
// verification suite. JSON config in, CSV/JSON files out; every command
// writes a manifest. Exit codes: 0 ok, 2 invalid spec/config, 3 resource
// guard, 4 verification failure, 5 censored-dominated estimate.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "opinion/acceptance.hpp"
#include "opinion/dynamics.hpp"
#include "opinion/landscape.hpp"
#include "opinion/paths.hpp"
#include "opinion/polyomino.hpp"
#include "opinion/recurrence.hpp"

using nlohmann::json;
using namespace opinion;

namespace {

constexpr const char* kVersion = "1.0.0";

constexpr int kExitConfig = 2;
constexpr int kExitGuard = 3;
constexpr int kExitVerify = 4;
constexpr int kExitCensored = 5;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 1;
  bool guard_override = false;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_config(const CommonArgs& args) {
  if (args.config_path.empty()) throw ConfigError("--config is required");
  std::ifstream in(args.config_path);
  if (!in) throw ConfigError("cannot read " + args.config_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return j;
}

ModelSpec spec_of(const json& cfg) {
  if (!cfg.contains("spec")) throw ConfigError("config lacks a \"spec\" object");
  return ModelSpec::from_json(cfg.at("spec").dump());
}

// Seed must come from the config or the flag; there is no silent default.
std::uint64_t seed_of(const json& cfg, const CommonArgs& args) {
  if (args.seed_set) return args.seed;
  if (cfg.contains("seed")) return cfg.at("seed").get<std::uint64_t>();
  throw ConfigError("no seed: set \"seed\" in the config or pass --seed");
}

void require_positive(const json& cfg, const char* key, double value) {
  if (value <= 0)
    throw ConfigError(std::string(key) + " must be positive in the config");
  (void)cfg;
}

std::filesystem::path out_file(const CommonArgs& args, const std::string& name) {
  std::filesystem::create_directories(args.out_dir);
  return std::filesystem::path(args.out_dir) / name;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("failed to write " + p.string());
}

// Re-read a written CSV and check the header and the column count of every
// row; schema problems abort the run before the process exits cleanly.
void validate_csv(const std::filesystem::path& p, const std::string& header) {
  std::ifstream in(p);
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw std::runtime_error(p.string() + ": bad CSV header");
  auto columns = [](const std::string& s) {
    return 1 + std::count(s.begin(), s.end(), ',');
  };
  long long want = columns(header);
  while (std::getline(in, line))
    if (!line.empty() && columns(line) != want)
      throw std::runtime_error(p.string() + ": ragged CSV row");
}

void validate_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  json j;
  in >> j;  // throws on malformed output
}

void write_manifest(const CommonArgs& args, const std::string& command,
                    const ModelSpec* spec, std::uint64_t seed,
                    double wall_seconds) {
  json m;
  m["command"] = command;
  if (spec) m["spec"] = json::parse(spec->to_json());
  m["seed"] = seed;
  m["versions"] = {{"cli", kVersion}, {"library", kVersion}};
  m["wall_seconds"] = wall_seconds;
  // The timestamp lives only here so every other output is rerun-stable.
  m["timestamp"] = static_cast<long long>(std::time(nullptr));
  auto p = out_file(args, "manifest.json");
  write_text(p, m.dump(2) + "\n");
  validate_json_file(p);
}

std::string rat(const Rational& r) { return to_string(r); }

// Fixed formatting so reruns are byte-identical.
std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// analyze: the closed-form report for one spec
// ---------------------------------------------------------------------------

int cmd_analyze(const CommonArgs& args) {
  json cfg = load_config(args);
  ModelSpec spec = spec_of(cfg);
  std::uint64_t seed = seed_of(cfg, args);
  json rep;
  rep["regime"] = to_string(spec.regime());
  rep["alpha"] = rat(spec.alpha);
  rep["alpha_star"] = rat(spec.alpha_star());
  if (spec.regime() == Regime::Unsupported) {
    // Name the violated assumption instead of guessing at families.
    std::string why;
    if (spec.alpha < Rational(2))
      why = "alpha < 2";
    else if (spec.alpha >= Rational(spec.n) && spec.alpha < Rational(spec.m) &&
             spec.n != spec.m)
      why = "n < alpha < m is not covered";
    else
      why = "no regime hypothesis holds for (alpha, n, m)";
    rep["unsupported_because"] = why;
  } else {
    auto dump_set = [&](const std::vector<SpinConfiguration>& set) {
      json out = json::array();
      for (const SpinConfiguration& x : set)
        out.push_back({{"rle", x.to_rle()}, {"energy", rat(x.hamiltonian())}});
      return out;
    };
    rep["stable"] = dump_set(stable_states(spec));
    rep["metastable"] = dump_set(metastable_states(spec));
    rep["gamma_star"] = rat(gamma_star_height(spec));
    json barriers = json::array();
    for (const SpinConfiguration& start : regime_start_states(spec))
      barriers.push_back({{"start", start.to_rle()},
                          {"barrier", rat(barrier_from(spec, start))}});
    rep["barriers"] = barriers;
    json gates = json::array();
    for (const GateSet& g : gate_family(spec))
      gates.push_back({{"label", g.label},
                       {"transition", g.transition},
                       {"members", g.members.size()}});
    rep["gates"] = gates;
  }
  auto p = out_file(args, "analyze.json");
  write_text(p, rep.dump(2) + "\n");
  validate_json_file(p);
  (void)seed;
  return 0;
}

// ---------------------------------------------------------------------------
// paths: elevation profiles of every regime-valid reference path
// ---------------------------------------------------------------------------

int cmd_paths(const CommonArgs& args) {
  json cfg = load_config(args);
  ModelSpec spec = spec_of(cfg);
  bool dump_states = cfg.value("dump_states", false);
  const std::vector<PathName> all = {
      PathName::BarW1,    PathName::TildeW1,  PathName::BarW2,
      PathName::TildeW2,  PathName::TildeW3,  PathName::TildeW4,
      PathName::TildeW5,  PathName::TildeW6,  PathName::TildeW7,
      PathName::WPrime,   PathName::BarStar1, PathName::BarStar2,
      PathName::BarStar3, PathName::Star1,    PathName::Star2,
      PathName::Star3,    PathName::Star4};
  json summary = json::array();
  for (PathName nm : all) {
    PathRecord rec;
    try {
      rec = build_reference_path(spec, nm);
    } catch (const std::domain_error&) {
      continue;  // not valid in this regime
    }
    std::ostringstream csv;
    csv << "step,energy,is_saddle\n";
    for (std::size_t i = 0; i < rec.states.size(); ++i) {
      bool saddle = std::find(rec.saddle_indices.begin(),
                              rec.saddle_indices.end(),
                              i) != rec.saddle_indices.end();
      csv << i << ',' << rat(rec.elevations[i]) << ',' << (saddle ? 1 : 0)
          << '\n';
    }
    std::string base = std::string("path_") + to_string(nm);
    auto p = out_file(args, base + ".csv");
    write_text(p, csv.str());
    validate_csv(p, "step,energy,is_saddle");
    if (dump_states) {
      std::ostringstream states;
      for (const SpinConfiguration& x : rec.states) states << x.to_rle() << '\n';
      write_text(out_file(args, base + "_states.txt"), states.str());
    }
    json entry;
    entry["name"] = to_string(nm);
    entry["steps"] = rec.states.size() - 1;
    entry["max_elevation"] = rat(rec.max_elevation);
    try {
      entry["closed_form"] = rat(closed_form_phi(spec, nm));
      entry["discrepancy"] = rat(path_formula_discrepancy(spec, nm));
    } catch (const std::domain_error&) {
      // no printed form for this path in this regime
    }
    summary.push_back(entry);
  }
  auto p = out_file(args, "paths_summary.json");
  write_text(p, summary.dump(2) + "\n");
  validate_json_file(p);
  return 0;
}

// ---------------------------------------------------------------------------
// enumerate: minimal-perimeter shapes per area
// ---------------------------------------------------------------------------

int cmd_enumerate(const CommonArgs& args) {
  json cfg = load_config(args);
  ModelSpec spec = spec_of(cfg);
  int max_area = cfg.value("max_area", 12);
  require_positive(cfg, "max_area", max_area);
  EnumerationCaps caps;
  if (args.guard_override) {
    caps.max_area = max_area;
    caps.max_side = spec.N;
  }
  std::ostringstream csv;
  csv << "area,winding,min_perimeter,minimizer_count,classes\n";
  json shapes = json::array();
  for (int area = 1; area <= max_area && area <= spec.N * spec.N; ++area) {
    for (bool winding : {false, true}) {
      if (winding && area < spec.N) continue;
      MinimalPerimeterResult res =
          minimal_perimeter_shapes(area, spec.N, winding, caps);
      std::map<std::string, int> kinds;
      for (const ShapeClass& cls : res.classes) {
        const char* name = cls.kind == ShapeClass::QuasiSquareProt
                               ? "quasi_square_prot"
                           : cls.kind == ShapeClass::StripProt ? "strip_prot"
                           : cls.kind == ShapeClass::RectangleProt
                               ? "rectangle_prot"
                               : "other";
        ++kinds[name];
      }
      std::ostringstream kindstr;
      for (auto it = kinds.begin(); it != kinds.end(); ++it) {
        if (it != kinds.begin()) kindstr << '|';
        kindstr << it->first << ':' << it->second;
      }
      csv << area << ',' << (winding ? 1 : 0) << ',' << res.min_perimeter
          << ',' << res.minimizers.size() << ',' << kindstr.str() << '\n';
      json cells_of_area = json::array();
      for (const Polyomino& p : res.minimizers) {
        json cells = json::array();
        for (const Site& s : p.cells()) cells.push_back({s.row, s.col});
        cells_of_area.push_back(cells);
      }
      shapes.push_back({{"area", area},
                        {"winding", winding},
                        {"minimizers", cells_of_area}});
    }
  }
  auto p = out_file(args, "enumeration.csv");
  write_text(p, csv.str());
  validate_csv(p, "area,winding,min_perimeter,minimizer_count,classes");
  auto sp = out_file(args, "shapes.json");
  write_text(sp, shapes.dump(2) + "\n");
  validate_json_file(sp);
  return 0;
}

// ---------------------------------------------------------------------------
// bruteforce: full-space landscape report (small lattices only)
// ---------------------------------------------------------------------------

int cmd_bruteforce(const CommonArgs& args) {
  json cfg = load_config(args);
  ModelSpec spec = spec_of(cfg);
  LandscapeGuard guard;
  if (args.guard_override) guard.max_states = std::size_t{1} << 26;
  LandscapeReport rep = landscape_report(spec, guard);
  json out;
  out["state_count"] = rep.state_count;
  out["gamma_m"] = rat(rep.gamma_m);
  out["restricted"] = rep.restricted;
  json stable = json::array();
  for (std::size_t i : rep.stable_set) stable.push_back(rep.states[i]);
  out["stable_masks"] = stable;
  json meta = json::array();
  for (std::size_t i : rep.metastable_set) meta.push_back(rep.states[i]);
  out["metastable_masks"] = meta;
  auto p = out_file(args, "landscape.json");
  write_text(p, out.dump(2) + "\n");
  validate_json_file(p);

  std::map<std::string, long long> hist;
  std::map<std::string, Rational> order;
  for (const Rational& e : rep.energy_table) ++hist[rat(e)];
  std::vector<std::pair<Rational, long long>> rows;
  for (auto& [key, count] : hist) {
    // Recover the rational for sorting; keys are exact p/q strings.
    std::size_t slash = key.find('/');
    long long num = std::stoll(key.substr(0, slash));
    long long den =
        slash == std::string::npos ? 1 : std::stoll(key.substr(slash + 1));
    rows.push_back({Rational(num, den), count});
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::ostringstream csv;
  csv << "energy,count\n";
  for (auto& [e, count] : rows) csv << rat(e) << ',' << count << '\n';
  auto hp = out_file(args, "histogram.csv");
  write_text(hp, csv.str());
  validate_csv(hp, "energy,count");
  return 0;
}

// ---------------------------------------------------------------------------
// simulate: hitting-time replicas over a beta grid
// ---------------------------------------------------------------------------

int cmd_simulate(const CommonArgs& args) {
  json cfg = load_config(args);
  ModelSpec spec = spec_of(cfg);
  std::uint64_t seed = seed_of(cfg, args);
  std::vector<double> betas = cfg.value("betas", std::vector<double>{});
  int replicas = cfg.value("replicas", 0);
  if (betas.empty()) throw ConfigError("config lacks a \"betas\" grid");
  for (double b : betas) require_positive(cfg, "betas", b);
  require_positive(cfg, "replicas", replicas);
  std::string start_name = cfg.value("start", "minus");
  SpinConfiguration start = homogeneous(spec, start_name == "plus" ? 1 : -1);
  std::vector<SpinConfiguration> targets = stable_states(spec);
  // Cap multiplier over the default censoring cap e^{beta (barrier + 1)}.
  long long cap_mult = cfg.value("step_cap_multiplier", 1);
  require_positive(cfg, "step_cap_multiplier", static_cast<double>(cap_mult));

  auto gates = gate_family(spec);
  std::ostringstream csv;
  csv << hitting_csv_header() << '\n';
  json points = json::array();
  bool censored_dominated = false;
  for (std::size_t bi = 0; bi < betas.size(); ++bi) {
    double beta = betas[bi];
    std::vector<HittingTimeSample> samples(replicas);
    // Replicas fan out across workers; streams are keyed by replica index,
    // so the aggregate is identical for any worker count.
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    int workers = std::max(1, args.workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int r; (r = next.fetch_add(1)) < replicas;) {
          RunOptions opt;
          opt.seed = seed;
          opt.stream = bi * static_cast<std::uint64_t>(replicas) + r;
          opt.step_cap = cap_mult * default_step_cap(spec, start, beta);
          opt.gates = &gates;
          samples[r] = run_until_hit(spec, start, targets, beta, opt);
        }
      });
    for (std::thread& t : pool) t.join();
    long long censored = 0;
    double mean = 0;
    long long uncensored = 0;
    for (int r = 0; r < replicas; ++r) {
      csv << hitting_csv_row(r, beta, samples[r]) << '\n';
      if (samples[r].censored) {
        ++censored;
      } else {
        mean += static_cast<double>(samples[r].steps);
        ++uncensored;
      }
    }
    if (uncensored > 0) mean /= static_cast<double>(uncensored);
    points.push_back({{"beta", beta},
                      {"replicas", replicas},
                      {"censored", censored},
                      {"mean_steps", mean}});
    // The slope is driven by the largest beta; if that point is mostly
    // censored the estimate is not trustworthy.
    if (bi + 1 == betas.size() && censored * 2 > replicas)
      censored_dominated = true;
  }
  auto p = out_file(args, "samples.csv");
  write_text(p, csv.str());
  validate_csv(p, hitting_csv_header());

  json fit_json;
  if (betas.size() >= 2) {
    // Least-squares slope of log(mean steps) over beta from the recorded
    // points (uncensored means).
    double sb = 0, sl = 0, sbb = 0, sbl = 0;
    int used = 0;
    for (const json& pt : points) {
      double mean = pt.at("mean_steps").get<double>();
      if (mean <= 0) continue;
      double b = pt.at("beta").get<double>(), l = std::log(mean);
      sb += b;
      sl += l;
      sbb += b * b;
      sbl += b * l;
      ++used;
    }
    if (used >= 2)
      fit_json["slope"] = num((used * sbl - sb * sl) / (used * sbb - sb * sb));
  }
  fit_json["points"] = points;
  auto fp = out_file(args, "fit.json");
  write_text(fp, fit_json.dump(2) + "\n");
  validate_json_file(fp);
  return censored_dominated ? kExitCensored : 0;
}

// ---------------------------------------------------------------------------
// verify: the acceptance suite
// ---------------------------------------------------------------------------

int cmd_verify(const CommonArgs& args) {
  AcceptanceOptions opt;
  if (args.seed_set) opt.seed = args.seed;
  if (!args.config_path.empty()) {
    json cfg = load_config(args);
    if (cfg.contains("seed") && !args.seed_set)
      opt.seed = cfg.at("seed").get<std::uint64_t>();
    if (cfg.contains("only"))
      opt.only = cfg.at("only").get<std::vector<std::string>>();
  }
  json report = json::array();
  int failures = 0;
  for (const AcceptanceCheck& c : run_acceptance_suite(opt)) {
    std::cout << c.id << ' ' << (c.passed ? "PASS" : "FAIL") << " ("
              << c.title << "): " << c.detail << '\n'
              << std::flush;
    report.push_back({{"id", c.id},
                      {"title", c.title},
                      {"passed", c.passed},
                      {"detail", c.detail},
                      {"seconds", c.seconds}});
    failures += !c.passed;
  }
  auto p = out_file(args, "verify.json");
  write_text(p, report.dump(2) + "\n");
  validate_json_file(p);
  return failures ? kExitVerify : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Strip-field lattice model toolkit: closed-form analysis, reference "
      "paths, shape enumeration, brute-force landscapes, Monte Carlo "
      "simulation, and the verification suite"};
  app.require_subcommand(1);

  CommonArgs args;
  const char* env_out = std::getenv("OPINION_OUT");
  args.out_dir = env_out ? env_out : ".";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "JSON experiment config");
    sub->add_option("--seed", args.seed, "base RNG seed (overrides config)")
        ->each([&](const std::string&) { args.seed_set = true; });
    sub->add_option("--workers", args.workers, "worker threads for replicas");
    sub->add_option("--out", args.out_dir, "output directory");
    sub->add_flag("--guard-override", args.guard_override,
                  "lift the default resource guards");
  };

  auto* analyze = app.add_subcommand(
      "analyze", "closed-form report: regime, families, barriers, gates "
                 "(analyze.json)");
  auto* paths = app.add_subcommand(
      "paths", "reference path profiles as CSV (step,energy,is_saddle)");
  auto* enumerate = app.add_subcommand(
      "enumerate", "minimal-perimeter shapes as CSV "
                   "(area,winding,min_perimeter,minimizer_count,classes)");
  auto* bruteforce = app.add_subcommand(
      "bruteforce", "full-space landscape report + histogram CSV "
                    "(energy,count); guarded to small lattices");
  auto* simulate = app.add_subcommand(
      "simulate", "hitting-time replicas as CSV "
                  "(replica,beta,steps,censored,gate_tag,saddle_max)");
  auto* verify = app.add_subcommand(
      "verify", "run the acceptance suite; one PASS/FAIL line per criterion");
  for (auto* sub : {analyze, paths, enumerate, bruteforce, simulate, verify})
    add_common(sub);

  CLI11_PARSE(app, argc, argv);

  auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  std::string command;
  ModelSpec spec;
  bool have_spec = false;
  std::uint64_t seed_used = 0;
  try {
    if (analyze->parsed()) {
      command = "analyze";
      code = cmd_analyze(args);
    } else if (paths->parsed()) {
      command = "paths";
      code = cmd_paths(args);
    } else if (enumerate->parsed()) {
      command = "enumerate";
      code = cmd_enumerate(args);
    } else if (bruteforce->parsed()) {
      command = "bruteforce";
      code = cmd_bruteforce(args);
    } else if (simulate->parsed()) {
      command = "simulate";
      code = cmd_simulate(args);
    } else if (verify->parsed()) {
      command = "verify";
      code = cmd_verify(args);
    }
    if (command != "verify") {
      json cfg = load_config(args);
      spec = spec_of(cfg);
      have_spec = true;
      if (cfg.contains("seed") || args.seed_set) seed_used = seed_of(cfg, args);
    } else if (args.seed_set) {
      seed_used = args.seed;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid spec: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ResourceGuardError& e) {
    std::cerr << "resource guard: " << e.what()
              << " (see --guard-override)\n";
    return kExitGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
  try {
    write_manifest(args, command, have_spec ? &spec : nullptr, seed_used, wall);
  } catch (const std::exception& e) {
    std::cerr << "manifest: " << e.what() << '\n';
    return 1;
  }
  return code;
}
