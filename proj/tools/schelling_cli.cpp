#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "schelling/schelling.hpp"

namespace fs = std::filesystem;
using namespace schelling;

namespace {

// Experiment flags kept as raw strings so a config file can be applied first
// and explicitly given flags override it.
struct ExperimentFlags {
  std::string config_file;
  std::map<std::string, std::string> values;

  void add(CLI::App* app, const std::vector<std::string>& keys) {
    app->add_option("--config", config_file, "key=value config file; flags override it");
    static const std::map<std::string, std::string> help = {
        {"graph", "torus:WxH:rR | torus:WxH:vn | path:N | ring:N | clique:N | star:N | file:PATH"},
        {"model", "mdg | adg | cg:LAMBDA"},
        {"mode", "swap | jump"},
        {"isolation", "uis | his"},
        {"empty-frac", "fraction of nodes left empty"},
        {"seeds", "seed range S0..S1"},
        {"max-steps", "move cap per run"},
        {"policy", "random | first | best"},
        {"lambdas", "comma-separated cutoffs for sweeps"},
        {"graphs", "comma-separated graphs for sweeps"},
        {"out", "output directory"},
    };
    for (const auto& k : keys) app->add_option("--" + k, values[k], help.at(k));
  }

  ExperimentConfig resolve(CLI::App* app) const {
    ExperimentConfig c;
    if (!config_file.empty()) load_config(config_file, c);
    for (const auto& [k, v] : values)
      if (app->count("--" + k) > 0) apply_setting(c, k, v);
    c.validate();
    return c;
  }
};

struct InstanceSpecFlags {
  std::string model = "mdg";
  std::string mode = "swap";
  std::string isolation = "uis";

  void add(CLI::App* app) {
    app->add_option("--model", model, "mdg | adg | cg:LAMBDA")->capture_default_str();
    app->add_option("--mode", mode, "swap | jump")->capture_default_str();
    app->add_option("--isolation", isolation, "uis | his")->capture_default_str();
  }

  GameSpec spec() const {
    auto [m, lambda] = parse_cost_model(model);
    return GameSpec(m, parse_mode(mode), parse_isolation(isolation), lambda);
  }
};

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(10) << x;
  return s.str();
}

// Moves printed with agents numbered as in the input file.
std::string move_text(const TypeProfile& types, const Move& m) {
  const auto a = types.original_index(m.agent);
  if (m.is_swap()) return "SWAP " + std::to_string(a) + " " + std::to_string(types.original_index(m.target));
  return "JUMP " + std::to_string(a) + " " + std::to_string(m.target);
}

void print_row(const MetricsRow& r) {
  std::cout << r.model << " seed=" << r.seed << " converged=" << (r.converged ? "yes" : "no") << " steps=" << r.steps
            << " ADGSC=" << fmt(r.adgsc) << " MDGSC=" << fmt(r.mdgsc) << " pairs<=1/2=" << r.pairs_leq_half
            << " max_d=" << fmt(r.max_d) << " maxedge=" << fmt(r.maxedge) << '\n';
}

void print_summary(const AggregateRow& a) {
  std::cout << std::left << std::setw(16) << a.model << std::right << " runs=" << a.runs << " converged=" << a.converged
            << std::fixed << std::setprecision(2) << " ADGSC=" << a.adgsc << " MDGSC=" << a.mdgsc
            << " pairs<=1/2=" << a.pairs_leq_half << " max_d=" << a.max_d << " steps=" << a.steps << '\n'
            << std::defaultfloat;
}

void ensure_dir(const std::string& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

int cmd_simulate(CLI::App* app, const ExperimentFlags& flags, std::uint64_t seed, const std::string& image,
                 const std::string& trace_path) {
  ExperimentConfig c = flags.resolve(app);
  const Graph graph = make_graph(c.graph);
  std::ofstream trace_file;
  if (!trace_path.empty()) {
    trace_file.open(trace_path);
    if (!trace_file) throw std::runtime_error("cannot write '" + trace_path + "'");
  }
  RunOutput run = run_single(graph, c, seed, trace_path.empty() ? nullptr : &trace_file);
  print_row(run.row);
  if (!image.empty()) {
    render_ppm(graph, run.types, run.final_placement, image);
    std::cout << "image " << image << '\n';
  }
  return 0;
}

int cmd_batch(CLI::App* app, const ExperimentFlags& flags, bool all_models) {
  ExperimentConfig base = flags.resolve(app);
  std::vector<ExperimentConfig> configs = all_models ? all_model_configs(base) : std::vector<ExperimentConfig>{base};
  std::vector<MetricsRow> all;
  std::vector<AggregateRow> summary;
  for (const auto& c : configs) {
    auto rows = run_batch(c);
    summary.push_back(aggregate(rows));
    print_summary(summary.back());
    all.insert(all.end(), rows.begin(), rows.end());
  }
  if (!base.out_dir.empty()) {
    ensure_dir(base.out_dir);
    std::ofstream runs(base.out_dir + "/runs.csv");
    write_csv(runs, all);
    std::ofstream sum(base.out_dir + "/summary.csv");
    write_summary_csv(sum, summary);
    std::cout << "wrote " << base.out_dir << "/runs.csv and summary.csv\n";
  } else {
    write_csv(std::cout, all);
  }
  return 0;
}

int cmd_sweep(CLI::App* app, const ExperimentFlags& flags) {
  ExperimentConfig c = flags.resolve(app);
  ensure_dir(c.out_dir);
  std::vector<AggregateRow> summary;
  for (const auto& p : sweep_lambda(c)) {
    summary.push_back(p.aggregate);
    print_summary(p.aggregate);
    if (!p.image.empty()) std::cout << "  image " << p.image << '\n';
  }
  if (!c.out_dir.empty()) {
    std::ofstream sum(c.out_dir + "/sweep.csv");
    write_summary_csv(sum, summary);
  }
  return 0;
}

int cmd_construct(const std::string& algorithm, const std::string& file) {
  Instance inst = load_instance(file);
  for (const auto& w : inst.warnings) std::cerr << "warning: " << w << '\n';
  Placement p;
  if (algorithm == "se-mdg-bfs") {
    p = se_mdg_bfs(inst.graph, inst.types);
  } else if (algorithm == "sorted-path") {
    p = sorted_path_placement(inst.graph, inst.types);
  } else if (algorithm == "je-his-path") {
    // je_his_path numbers nodes along the path; map them back to graph nodes.
    const auto order = path_order(inst.graph);
    Placement along = je_his_path(inst.types, inst.graph.node_count());
    std::vector<NodeId> node_of(inst.types.size());
    for (AgentId i = 0; i < node_of.size(); ++i) node_of[i] = order[along.node_of(i)];
    p = Placement(inst.graph.node_count(), node_of);
  } else if (algorithm == "je-his-k2e") {
    auto r = je_his_k2e(inst.graph, inst.types);
    if (!r) {
      std::cout << "no K_{2,e} subgraph\n";
      return 2;
    }
    p = *r;
  } else if (algorithm == "je-his-two-empty") {
    p = je_his_two_empty(inst.graph, inst.types);
  } else {
    throw std::invalid_argument("unknown algorithm '" + algorithm +
                                "' (se-mdg-bfs, sorted-path, je-his-path, je-his-k2e, je-his-two-empty)");
  }
  std::cout << placement_line(inst.types, p) << '\n';
  return 0;
}

Instance load_with_placement(const std::string& file) {
  Instance inst = load_instance(file);
  for (const auto& w : inst.warnings) std::cerr << "warning: " << w << '\n';
  return inst;
}

int cmd_verify(const std::string& file, const GameSpec& spec) {
  Instance inst = load_with_placement(file);
  if (!inst.placement) throw std::invalid_argument("instance has no placement line");
  Verdict v = is_equilibrium(inst.graph, inst.types, *inst.placement, spec);
  const double cost = social_cost(inst.graph, inst.types, *inst.placement, spec);
  if (v.holds) {
    std::cout << "equilibrium (" << spec.label() << ") cost=" << fmt(cost) << '\n';
    return 0;
  }
  std::cout << "not an equilibrium (" << spec.label() << ") cost=" << fmt(cost)
            << " witness=" << move_text(inst.types, *v.witness) << '\n';
  return 1;
}

int cmd_optimum(const std::string& file, const GameSpec& spec, std::uint64_t budget) {
  Instance inst = load_with_placement(file);
  OptimumResult r = brute_force_optimum(inst.graph, inst.types, spec, budget);
  std::cout << "optimum (" << spec.label() << ") cost=" << fmt(r.cost) << " space=" << r.stats.space
            << " evaluated=" << r.stats.evaluated << '\n'
            << placement_line(inst.types, r.placement) << '\n';
  return 0;
}

int cmd_exists(const std::string& file, const GameSpec& spec, std::uint64_t budget) {
  Instance inst = load_with_placement(file);
  ExistenceResult r = equilibrium_exists(inst.graph, inst.types, spec, budget);
  if (r.equilibrium) {
    std::cout << "equilibrium exists (" << spec.label() << ") space=" << r.stats.space << '\n'
              << placement_line(inst.types, *r.equilibrium) << '\n';
    return 0;
  }
  std::cout << "no equilibrium (" << spec.label() << ") certified over " << r.stats.space << " placements\n";
  return 1;
}

int cmd_maxedge(const std::string& file, std::uint64_t budget) {
  Instance inst = load_with_placement(file);
  MaxEdgeResult r = min_maxedge(inst.graph, inst.types, budget);
  std::cout << "min maxedge=" << fmt(r.value) << " space=" << r.stats.space << " evaluated=" << r.stats.evaluated
            << '\n'
            << placement_line(inst.types, r.placement) << '\n';
  return 0;
}

int cmd_fixtures_list() {
  for (const auto& f : fixtures()) {
    std::cout << std::left << std::setw(18) << f.name << std::setw(16) << f.spec.label() << f.graph.node_count()
              << " nodes, " << f.types.size() << " agents: " << f.claim.statement << '\n';
  }
  return 0;
}

int cmd_fixtures_export(const std::string& name, const std::string& out) {
  auto f = find_fixture(name);
  if (!f) throw std::invalid_argument("unknown fixture '" + name + "'");
  const Placement* p = f->claim.placement ? &*f->claim.placement : nullptr;
  if (out.empty()) {
    write_instance(std::cout, f->graph, f->types, p);
  } else {
    std::ofstream file(out);
    if (!file) throw std::runtime_error("cannot write '" + out + "'");
    write_instance(file, f->graph, f->types, p);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schelling games with continuous types: dynamics, constructions, exhaustive checks, experiments"};
  app.require_subcommand(1);

  const std::vector<std::string> run_keys = {"graph", "model", "mode", "isolation", "empty-frac", "max-steps", "policy"};

  auto* simulate = app.add_subcommand("simulate", "one seeded run; optional image and move trace");
  ExperimentFlags sim_flags;
  sim_flags.add(simulate, run_keys);
  std::uint64_t sim_seed = 0;
  std::string sim_image, sim_trace;
  simulate->add_option("--seed", sim_seed, "run seed")->capture_default_str();
  simulate->add_option("--image", sim_image, "write the final state as a PPM image");
  simulate->add_option("--trace", sim_trace, "write one SWAP/JUMP line per applied move");

  auto* batch = app.add_subcommand("batch", "seeded batch with per-run CSV and averages");
  ExperimentFlags batch_flags;
  auto batch_keys = run_keys;
  batch_keys.insert(batch_keys.end(), {"seeds", "out"});
  batch_flags.add(batch, batch_keys);
  bool all_models = false;
  batch->add_flag("--all-models", all_models, "run all eight swap/jump model rows on the configured graph");

  auto* sweep = app.add_subcommand("sweep", "cutoff sweep of the swap CG over several graphs");
  ExperimentFlags sweep_flags;
  sweep_flags.add(sweep, {"seeds", "lambdas", "graphs", "max-steps", "policy", "out"});

  auto* construct = app.add_subcommand("construct", "build an equilibrium placement");
  std::string algorithm, construct_file;
  construct->add_option("algorithm", algorithm, "se-mdg-bfs | sorted-path | je-his-path | je-his-k2e | je-his-two-empty")
      ->required();
  construct->add_option("instance", construct_file, "instance file")->required()->check(CLI::ExistingFile);

  std::uint64_t budget = kDefaultEnumerationBudget;
  auto add_instance_cmd = [&](const char* name, const char* help, std::string& file, InstanceSpecFlags* spec) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("instance", file, "instance file")->required()->check(CLI::ExistingFile);
    if (spec) spec->add(cmd);
    if (std::string(name) != "verify") {
      cmd->add_option("--budget", budget, "maximum number of placements to enumerate")->capture_default_str();
    }
    return cmd;
  };
  std::string verify_file, optimum_file, exists_file, maxedge_file;
  InstanceSpecFlags verify_spec, optimum_spec, exists_spec;
  auto* verify = add_instance_cmd("verify", "check the instance's placement for profitable moves", verify_file,
                                  &verify_spec);
  auto* optimum = add_instance_cmd("optimum", "exact social optimum by enumeration", optimum_file, &optimum_spec);
  auto* exists = add_instance_cmd("exists", "search all placements for an equilibrium", exists_file, &exists_spec);
  auto* maxedge = add_instance_cmd("maxedge", "exact minimum of the maximum edge cost", maxedge_file, nullptr);

  auto* fixtures_cmd = app.add_subcommand("fixtures", "named instances with known equilibria");
  fixtures_cmd->require_subcommand(1);
  auto* fx_list = fixtures_cmd->add_subcommand("list", "list fixtures");
  auto* fx_export = fixtures_cmd->add_subcommand("export", "print a fixture in the instance format");
  std::string fx_name, fx_out;
  fx_export->add_option("name", fx_name, "fixture name")->required();
  fx_export->add_option("--out", fx_out, "write to a file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return cmd_simulate(simulate, sim_flags, sim_seed, sim_image, sim_trace);
    if (*batch) return cmd_batch(batch, batch_flags, all_models);
    if (*sweep) return cmd_sweep(sweep, sweep_flags);
    if (*construct) return cmd_construct(algorithm, construct_file);
    if (*verify) return cmd_verify(verify_file, verify_spec.spec());
    if (*optimum) return cmd_optimum(optimum_file, optimum_spec.spec(), budget);
    if (*exists) return cmd_exists(exists_file, exists_spec.spec(), budget);
    if (*maxedge) return cmd_maxedge(maxedge_file, budget);
    if (*fx_list) return cmd_fixtures_list();
    if (*fx_export) return cmd_fixtures_export(fx_name, fx_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
