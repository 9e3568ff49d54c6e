#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "schelling/dynamics.hpp"
#include "schelling/game.hpp"
#include "schelling/graph.hpp"
#include "schelling/graph_gen.hpp"
#include "schelling/instance_io.hpp"

namespace schelling {

// "torus:50x50:r1", "torus:50x50:vn", "path:N", "ring:N", "clique:N", "star:N", "file:PATH".
inline Graph make_graph(const std::string& text) {
  auto fail = [&]() -> Graph { throw std::invalid_argument("bad graph spec '" + text + "'"); };
  const auto colon = text.find(':');
  if (colon == std::string::npos) return fail();
  const std::string family = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  auto number = [&](const std::string& s) -> std::size_t {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      fail();
    }
    if (used != s.size()) fail();
    return static_cast<std::size_t>(v);
  };
  if (family == "file") return load_instance(rest).graph;
  if (family == "path") return make_path(number(rest));
  if (family == "ring") return make_ring(number(rest));
  if (family == "clique") return make_clique(number(rest));
  if (family == "star") return make_star(number(rest));
  if (family == "torus") {
    const auto x = rest.find('x');
    const auto c2 = rest.find(':');
    if (x == std::string::npos) return fail();
    const std::size_t w = number(rest.substr(0, x));
    const std::size_t h = number(rest.substr(x + 1, c2 == std::string::npos ? std::string::npos : c2 - x - 1));
    const std::string nb = c2 == std::string::npos ? "r1" : rest.substr(c2 + 1);
    if (nb == "vn") return make_von_neumann_torus(w, h);
    if (nb.size() < 2 || nb[0] != 'r') return fail();
    return make_torus(w, h, number(nb.substr(1)));
  }
  return fail();
}

struct ExperimentConfig {
  std::string graph = "torus:50x50:r1";
  std::string model = "mdg";
  Deviation mode = Deviation::kSwap;
  Isolation isolation = Isolation::kUnhappy;
  double empty_frac = 0.0;
  MovePolicy policy = MovePolicy::kUniformRandom;
  std::uint64_t seed_first = 0;
  std::uint64_t seed_last = 19;
  std::uint64_t max_steps = 10'000'000;
  std::vector<double> lambdas{0.1, 0.2, 0.3, 0.5};
  std::vector<std::string> sweep_graphs{"torus:50x50:vn", "torus:50x50:r1", "torus:50x50:r2", "torus:50x50:r3"};
  std::string out_dir;

  GameSpec spec() const {
    auto [m, lambda] = parse_cost_model(model);
    return GameSpec(m, mode, isolation, lambda);
  }

  std::size_t seed_count() const { return static_cast<std::size_t>(seed_last - seed_first + 1); }

  void validate() const {
    if (!(empty_frac >= 0.0 && empty_frac < 1.0)) throw std::invalid_argument("empty fraction must lie in [0,1)");
    if (seed_last < seed_first) throw std::invalid_argument("seed range is empty");
    if (lambdas.empty()) throw std::invalid_argument("lambda list is empty");
    if (mode == Deviation::kJump && empty_frac == 0.0) {
      throw std::invalid_argument("jump dynamics need empty nodes (empty fraction is 0)");
    }
    spec();
  }
};

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

inline Deviation parse_mode(const std::string& s) {
  if (s == "swap") return Deviation::kSwap;
  if (s == "jump") return Deviation::kJump;
  throw std::invalid_argument("mode must be swap or jump, got '" + s + "'");
}

inline Isolation parse_isolation(const std::string& s) {
  if (s == "uis") return Isolation::kUnhappy;
  if (s == "his") return Isolation::kHappy;
  throw std::invalid_argument("isolation must be uis or his, got '" + s + "'");
}

// "S0..S1" or a single seed.
inline std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      auto v = std::stoull(s);
      return {v, v};
    }
    const auto first = std::stoull(s.substr(0, dots));
    const auto last = std::stoull(s.substr(dots + 2));
    if (last >= first) return {first, last};
  } catch (const std::exception&) {
    throw std::invalid_argument("bad seed range '" + s + "' (expected S0..S1)");
  }
  throw std::invalid_argument("seed range '" + s + "' ends before it starts");
}

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw std::invalid_argument("bad number for " + key + ": '" + v + "'");
  return out;
}

// Applies one key=value setting. Keys match the long CLI flags without dashes.
inline void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "graph") c.graph = value;
  else if (key == "model") c.model = value;
  else if (key == "mode") c.mode = parse_mode(value);
  else if (key == "isolation") c.isolation = parse_isolation(value);
  else if (key == "empty-frac" || key == "empty_frac") c.empty_frac = parse_double(key, value);
  else if (key == "policy") c.policy = parse_policy(value);
  else if (key == "seeds") std::tie(c.seed_first, c.seed_last) = parse_seed_range(value);
  else if (key == "max-steps" || key == "max_steps") c.max_steps = static_cast<std::uint64_t>(parse_double(key, value));
  else if (key == "lambdas") {
    c.lambdas.clear();
    for (const auto& x : split(value, ',')) c.lambdas.push_back(parse_double(key, x));
  } else if (key == "graphs") c.sweep_graphs = split(value, ',');
  else if (key == "out") c.out_dir = value;
  else throw std::invalid_argument("unknown config key '" + key + "'");
}

// Flat key=value lines; '#' starts a comment.
inline void read_config(std::istream& in, ExperimentConfig& c) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(number) + ": missing '='");
    apply_setting(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

inline void load_config(const std::string& path, ExperimentConfig& c) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  read_config(in, c);
}

struct MetricsRow {
  std::string model;
  std::uint64_t seed = 0;
  bool converged = false;
  std::uint64_t steps = 0;
  double adgsc = 0.0;
  double mdgsc = 0.0;
  double pairs_leq_half = 0.0;  // an average in aggregate rows
  double max_d = 0.0;           // 0 when no two agents are adjacent
  double maxedge = 0.0;         // max_edge_cost, 1 when no two agents are adjacent

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

// ADG and MDG social cost plus neighbor-pair statistics of a final state.
inline MetricsRow compute_metrics(const Graph& graph, const TypeProfile& types, const Placement& placement,
                                  Isolation isolation = Isolation::kUnhappy) {
  MetricsRow row;
  row.adgsc = social_cost(graph, types, placement, GameSpec::adg(Deviation::kSwap, isolation));
  row.mdgsc = social_cost(graph, types, placement, GameSpec::mdg(Deviation::kSwap, isolation));
  std::uint64_t pairs = 0;
  double worst = -1.0;
  for (auto [u, v] : graph.edges()) {
    AgentId a = placement.agent_at(u), b = placement.agent_at(v);
    if (a == kNone || b == kNone) continue;
    const double d = types.distance(a, b);
    if (d <= 0.5) ++pairs;
    worst = std::max(worst, d);
  }
  row.pairs_leq_half = static_cast<double>(pairs);
  row.max_d = worst < 0.0 ? 0.0 : worst;
  row.maxedge = worst < 0.0 ? 1.0 : worst;
  return row;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Number of agents for a graph and empty fraction: floor(frac * nodes) nodes stay empty.
inline std::size_t agent_count_for(std::size_t nodes, double empty_frac) {
  const auto empty = static_cast<std::size_t>(std::floor(empty_frac * static_cast<double>(nodes)));
  return nodes - empty;
}

struct SampledInstance {
  TypeProfile types;
  Placement placement;
};

// Types uniform in [0,1) and a uniformly random injective placement, from `seed`.
inline SampledInstance sample_instance(const Graph& graph, std::size_t agents, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> t(agents);
  for (double& x : t) x = unit(rng);
  std::vector<NodeId> nodes(graph.node_count());
  std::iota(nodes.begin(), nodes.end(), NodeId{0});
  std::shuffle(nodes.begin(), nodes.end(), rng);
  nodes.resize(agents);
  // Agent ids follow sorted type order; node k of the shuffle goes to the k-th drawn agent.
  TypeProfile types(t);
  std::vector<NodeId> node_of(agents);
  for (AgentId i = 0; i < agents; ++i) node_of[i] = nodes[types.original_index(i)];
  return {std::move(types), Placement(graph.node_count(), std::move(node_of))};
}

struct RunOutput {
  MetricsRow row;
  TypeProfile types;
  Placement final_placement;
};

// One seeded run: sample, run dynamics, measure.
inline RunOutput run_single(const Graph& graph, const ExperimentConfig& config, std::uint64_t seed,
                            std::ostream* trace = nullptr) {
  const GameSpec spec = config.spec();
  const std::size_t agents = agent_count_for(graph.node_count(), config.empty_frac);
  if (spec.deviation() == Deviation::kJump && agents == graph.node_count()) {
    throw std::invalid_argument("jump dynamics need at least one empty node (raise the empty fraction)");
  }
  if (agents == 0) throw std::invalid_argument("empty fraction leaves no agents");
  SampledInstance inst = sample_instance(graph, agents, seed);
  GameState state(graph, inst.types, inst.placement, spec);
  DynamicsOptions opt;
  opt.policy = config.policy;
  opt.seed = splitmix64(seed);
  opt.max_steps = config.max_steps;
  opt.trace = trace;
  DynamicsResult res = run_dynamics(state, opt);
  RunOutput out;
  out.row = compute_metrics(graph, inst.types, res.final_placement, spec.isolation());
  out.row.model = spec.label();
  out.row.seed = seed;
  out.row.converged = res.converged;
  out.row.steps = res.steps;
  out.types = std::move(inst.types);
  out.final_placement = std::move(res.final_placement);
  return out;
}

// Worker count: hardware concurrency, capped by SCHELLING_THREADS when set.
inline std::size_t worker_count(std::size_t jobs) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SCHELLING_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

// Rows in seed order regardless of which worker finishes first.
inline std::vector<MetricsRow> run_batch(const ExperimentConfig& config) {
  config.validate();
  const Graph graph = make_graph(config.graph);
  const std::size_t jobs = config.seed_count();
  std::vector<MetricsRow> rows(jobs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&]() {
    for (std::size_t k = next++; k < jobs; k = next++) {
      try {
        rows[k] = run_single(graph, config, config.seed_first + k).row;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = jobs;
      }
    }
  };
  const std::size_t workers = worker_count(jobs);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return rows;
}

struct AggregateRow {
  std::string model;
  std::size_t runs = 0;
  std::size_t converged = 0;
  double steps = 0.0;
  double adgsc = 0.0;
  double mdgsc = 0.0;
  double pairs_leq_half = 0.0;
  double max_d = 0.0;
};

inline AggregateRow aggregate(const std::vector<MetricsRow>& rows) {
  AggregateRow a;
  if (rows.empty()) return a;
  a.model = rows.front().model;
  a.runs = rows.size();
  for (const auto& r : rows) {
    a.converged += r.converged ? 1 : 0;
    a.steps += static_cast<double>(r.steps);
    a.adgsc += r.adgsc;
    a.mdgsc += r.mdgsc;
    a.pairs_leq_half += r.pairs_leq_half;
    a.max_d += r.max_d;
  }
  const double n = static_cast<double>(rows.size());
  a.steps /= n;
  a.adgsc /= n;
  a.mdgsc /= n;
  a.pairs_leq_half /= n;
  a.max_d /= n;
  return a;
}

inline std::string format_g6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline constexpr const char* kCsvHeader = "model,seed,converged,steps,adgsc,mdgsc,pairs_leq_half,max_d";
inline constexpr const char* kSummaryHeader = "model,runs,converged,steps,adgsc,mdgsc,pairs_leq_half,max_d";

inline void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.model << ',' << r.seed << ',' << (r.converged ? 1 : 0) << ',' << r.steps << ',' << format_g6(r.adgsc)
        << ',' << format_g6(r.mdgsc) << ',' << format_g6(r.pairs_leq_half) << ',' << format_g6(r.max_d) << '\n';
  }
}

inline std::string to_csv(const std::vector<MetricsRow>& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

// Inverse of write_csv. maxedge is not stored; it is restored from max_d.
inline std::vector<MetricsRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kCsvHeader) throw std::invalid_argument("missing CSV header");
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto f = split(line, ',');
    if (f.size() != 8) throw std::invalid_argument("CSV row needs 8 fields: '" + line + "'");
    MetricsRow r;
    r.model = f[0];
    r.seed = std::stoull(f[1]);
    r.converged = f[2] == "1";
    r.steps = std::stoull(f[3]);
    r.adgsc = parse_double("adgsc", f[4]);
    r.mdgsc = parse_double("mdgsc", f[5]);
    r.pairs_leq_half = parse_double("pairs_leq_half", f[6]);
    r.max_d = parse_double("max_d", f[7]);
    r.maxedge = r.max_d;
    rows.push_back(r);
  }
  return rows;
}

inline std::vector<MetricsRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

inline void write_summary_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const auto& a : rows) {
    out << a.model << ',' << a.runs << ',' << a.converged << ',' << format_g6(a.steps) << ',' << format_g6(a.adgsc)
        << ',' << format_g6(a.mdgsc) << ',' << format_g6(a.pairs_leq_half) << ',' << format_g6(a.max_d) << '\n';
  }
}

// Binary PPM (P6): type t -> gray round(255 (1 - t)), empty -> green.
inline void render_ppm(const Graph& graph, const TypeProfile& types, const Placement& placement, std::ostream& out) {
  if (!graph.grid()) throw std::invalid_argument("render_ppm needs a grid graph");
  validate_instance(graph, types, placement);
  const auto [w, h] = *graph.grid();
  out << "P6\n" << w << ' ' << h << "\n255\n";
  std::string pixels(w * h * 3, '\0');
  for (NodeId v = 0; v < w * h; ++v) {
    unsigned char rgb[3] = {0, 255, 0};
    if (AgentId a = placement.agent_at(v); a != kNone) {
      const auto g = static_cast<unsigned char>(std::lround(255.0 * (1.0 - types[a])));
      rgb[0] = rgb[1] = rgb[2] = g;
    }
    for (int c = 0; c < 3; ++c) pixels[3 * v + c] = static_cast<char>(rgb[c]);
  }
  out.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
}

inline void render_ppm(const Graph& graph, const TypeProfile& types, const Placement& placement,
                       const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  render_ppm(graph, types, placement, out);
}

// The eight benchmark settings: every model in swap mode with full occupancy and in
// jump mode (UIS) with 2% empty nodes on the 50x50 8-regular torus.
inline std::vector<ExperimentConfig> all_model_configs(const ExperimentConfig& base) {
  std::vector<ExperimentConfig> out;
  for (Deviation mode : {Deviation::kSwap, Deviation::kJump}) {
    for (const char* model : {"mdg", "adg", "cg:0.1", "cg:0.2"}) {
      ExperimentConfig c = base;
      c.model = model;
      c.mode = mode;
      c.isolation = Isolation::kUnhappy;
      c.empty_frac = mode == Deviation::kSwap ? 0.0 : 0.02;
      out.push_back(c);
    }
  }
  return out;
}

struct SweepPoint {
  std::string graph;
  double lambda = 0.0;
  AggregateRow aggregate;
  std::string image;  // path of the rendered first-seed state, empty if not written
};

// Runs a CG batch for every (graph, lambda) pair; writes one image per pair
// (first seed) into config.out_dir when it is set.
inline std::vector<SweepPoint> sweep_lambda(const ExperimentConfig& config) {
  config.validate();
  std::vector<SweepPoint> out;
  for (const auto& g : config.sweep_graphs) {
    const Graph graph = make_graph(g);
    for (double lambda : config.lambdas) {
      ExperimentConfig c = config;
      c.graph = g;
      std::ostringstream model;
      model << "cg:" << lambda;
      c.model = model.str();
      SweepPoint p;
      p.graph = g;
      p.lambda = lambda;
      p.aggregate = aggregate(run_batch(c));
      p.aggregate.model = c.spec().label() + "@" + g;
      if (!c.out_dir.empty() && graph.grid()) {
        RunOutput first = run_single(graph, c, c.seed_first);
        std::string name = g + "_cg" + format_g6(lambda) + ".ppm";
        std::replace(name.begin(), name.end(), ':', '_');
        p.image = c.out_dir + "/" + name;
        render_ppm(graph, first.types, first.final_placement, p.image);
      }
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace schelling
