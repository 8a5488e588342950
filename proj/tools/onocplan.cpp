// onocplan — command-line front end for the ring-ONoC training planner.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <onocplan/onocplan.hpp>

namespace {

struct CliOpts {
  std::string config_path;
  std::string strategy;
  std::string backend;
  std::string method;
  std::string out;
  std::string format;
  int fnp_cores = 0;
  bool fnp_set = false;
  long long seed = 0;
  bool seed_set = false;
  bool overwrite = false;
  int sweep_from = 0, sweep_to = 0, sweep_step = 0, sweep_period = 0;
  bool sf_set = false, st_set = false, ss_set = false, sp_set = false;
};

void add_common_options(CLI::App* sub, CliOpts& o) {
  sub->add_option("-c,--config", o.config_path, "JSON configuration file");
  sub->add_option("--strategy", o.strategy, "neuron-to-core mapping strategy")
      ->check(CLI::IsMember({"fm", "rrm", "orrm"}));
  sub->add_option("--backend", o.backend, "interconnect backend")
      ->check(CLI::IsMember({"onoc", "enoc"}));
  sub->add_option("--method", o.method, "core-allocation method")
      ->check(CLI::IsMember({"closed", "brute"}));
  sub->add_option("-o,--out", o.out, "write the report to this file instead of stdout");
  sub->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--fnp-cores", o.fnp_cores, "core count for the fixed-count baseline")
      ->check(CLI::PositiveNumber)
      ->each([&o](const std::string&) { o.fnp_set = true; });
  sub->add_option("--seed", o.seed, "seed recorded in the report config")
      ->each([&o](const std::string&) { o.seed_set = true; });
  sub->add_flag("--overwrite", o.overwrite, "replace the output file if it exists");
}

void add_sweep_options(CLI::App* sub, CliOpts& o) {
  sub->add_option("--from", o.sweep_from, "first core count")
      ->each([&o](const std::string&) { o.sf_set = true; });
  sub->add_option("--to", o.sweep_to, "last core count")
      ->each([&o](const std::string&) { o.st_set = true; });
  sub->add_option("--step", o.sweep_step, "core-count increment")
      ->each([&o](const std::string&) { o.ss_set = true; });
  sub->add_option("--period", o.sweep_period,
                  "sweep one forward period's pair cost instead of the whole round")
      ->each([&o](const std::string&) { o.sp_set = true; });
}

onoc::RunConfig load_config(const CliOpts& o) {
  onoc::RunConfig c;
  if (!o.config_path.empty()) {
    std::ifstream f(o.config_path);
    if (!f) throw onoc::ValidationError("config: cannot open '" + o.config_path + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    onoc::json root;
    try {
      root = onoc::json::parse(buf.str());
    } catch (const onoc::json::parse_error& e) {
      throw onoc::ValidationError(std::string("config: invalid JSON: ") + e.what());
    }
    c = onoc::parse_config(root);
  } else {
    c = onoc::default_config();
  }
  if (!o.strategy.empty()) c.run.strategy = onoc::cfg::parse_strategy(o.strategy, "--strategy");
  if (!o.backend.empty()) c.run.backend = onoc::cfg::parse_backend(o.backend, "--backend");
  if (!o.method.empty()) c.run.method = onoc::cfg::parse_method(o.method, "--method");
  if (!o.out.empty()) c.run.out = o.out;
  if (!o.format.empty()) c.run.format = o.format;
  if (o.fnp_set) c.run.fnp_cores = o.fnp_cores;
  if (o.seed_set) c.run.seed = o.seed;
  if (o.overwrite) c.run.overwrite = true;
  if (o.sf_set || o.st_set || o.ss_set || o.sp_set) {
    onoc::SweepSpec sw = c.run.sweep ? *c.run.sweep : onoc::SweepSpec{};
    if (o.sf_set) sw.from = o.sweep_from;
    if (o.st_set) sw.to = o.sweep_to;
    if (o.ss_set) sw.step = o.sweep_step;
    if (o.sp_set) sw.period = o.sweep_period;
    c.run.sweep = sw;
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "onocplan: core allocation, neuron mapping, and epoch simulation for training "
      "fully connected networks on a wavelength-multiplexed optical ring"};
  app.require_subcommand(1);

  CliOpts opts;
  CLI::App* plan = app.add_subcommand("plan", "optimal per-layer core allocation");
  CLI::App* map = app.add_subcommand("map", "neuron-to-core mapping and its analysis");
  CLI::App* simulate = app.add_subcommand("simulate", "one training epoch on the ring");
  CLI::App* compare = app.add_subcommand("compare", "allocation policies across backends");
  CLI::App* sweep = app.add_subcommand("sweep", "cost as a function of core count");
  CLI::App* defaults = app.add_subcommand("defaults", "print the effective configuration");
  for (CLI::App* sub : {plan, map, simulate, compare, sweep, defaults})
    add_common_options(sub, opts);
  add_sweep_options(sweep, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const onoc::RunConfig c = load_config(opts);
    if (plan->parsed()) return onoc::cmd_plan(c, std::cout);
    if (map->parsed()) return onoc::cmd_map(c, std::cout);
    if (simulate->parsed()) return onoc::cmd_simulate(c, std::cout);
    if (compare->parsed()) return onoc::cmd_compare(c, std::cout);
    if (sweep->parsed()) return onoc::cmd_sweep(c, std::cout);
    if (defaults->parsed()) return onoc::cmd_defaults(c, std::cout);
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const onoc::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const onoc::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
