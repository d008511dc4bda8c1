// pvdim: command-line front end.
//
// Configuration is layered: built-in (or preset) defaults, then the JSON
// file named by PVDIM_CONFIG, then --config, then explicit flags.
// Exit status: 0 when every asserted invariant holds, 1 when one fails,
// 2 on errors.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pvdim/runner.hpp"

namespace {

using pvdim::RunConfig;

struct Flags {
  RunConfig v;  // parse targets only
  std::string config;
  std::string out = "-";
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> setters;

  template <class T>
  void bind(CLI::App* app, const std::string& name, T& target, T RunConfig::*field, const std::string& help) {
    CLI::Option* opt = app->add_option(name, target, help);
    setters.emplace_back(opt, [&target, field](RunConfig& c) { c.*field = target; });
  }

  void add_common(CLI::App* app) {
    bind(app, "--poly", v.poly, &RunConfig::poly,
         "golden | tribonacci | table1:K | family:N | ascending coefficients a0,a1,...,ad");
    bind(app, "--side", v.side, &RunConfig::side, "which root the coefficients describe: alpha | beta | auto");
    bind(app, "--n", v.n, &RunConfig::n, "string length");
    bind(app, "--nmax", v.n_max, &RunConfig::n_max, "largest string length in sequences");
    bind(app, "--tau", v.taus, &RunConfig::taus, "vertical contraction in (0, 0.5); repeatable");
    bind(app, "--measure", v.measures, &RunConfig::measures, "bernoulli:P | markov:a,b,c,d; repeatable");
    bind(app, "--bits", v.bits, &RunConfig::bits, "working precision in bits");
    bind(app, "--bits-cap", v.bits_cap, &RunConfig::bits_cap, "precision cap in bits");
    bind(app, "--budget", v.state_budget, &RunConfig::state_budget, "partition state budget");
    bind(app, "--seed", v.seed, &RunConfig::seed, "random seed");
    bind(app, "--format", v.format, &RunConfig::format, "json | csv");
    bind(app, "--threads", v.threads, &RunConfig::threads, "thread budget");
    bind(app, "--kmax", v.k_max, &RunConfig::k_max, "largest frequency index");
    bind(app, "--depth", v.depth, &RunConfig::depth, "attractor depth");
    bind(app, "--samples", v.samples, &RunConfig::samples, "random attractor samples or orbit length");
    bind(app, "--beta", v.beta, &RunConfig::beta, "plain beta in place of --poly (fourier, fractal)");
    bind(app, "--eps-from", v.eps_from, &RunConfig::eps_from, "coarsest scale 2^-k");
    bind(app, "--eps-to", v.eps_to, &RunConfig::eps_to, "finest scale 2^-k");
    app->add_option("--config", config, "JSON configuration file");
    app->add_option("--out", out, "output file, - for stdout");
  }

  RunConfig resolve(RunConfig base) const {
    if (const char* env = std::getenv("PVDIM_CONFIG"); env && *env) base.merge_file(env);
    if (!config.empty()) base.merge_file(config);
    for (const auto& [opt, set] : setters)
      if (opt->count() > 0) set(base);
    base.validate();
    return base;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Garsia partitions, dimension bounds and fractal estimators at Pisot parameters"};
  app.require_subcommand(1);
  Flags flags;
  std::function<pvdim::Report(const RunConfig&)> action;
  RunConfig defaults;

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                  std::function<pvdim::Report(const RunConfig&)> fn) {
    CLI::App* sub = parent->add_subcommand(name, help);
    flags.add_common(sub);
    sub->callback([&action, fn] { action = fn; });
    return sub;
  };

  CLI::App* pisot = app.add_subcommand("pisot", "PV verification")->require_subcommand(1);
  leaf(pisot, "verify", "verify a PV number and its near-integer powers", pvdim::pisot_verify_report);

  CLI::App* garsia = app.add_subcommand("garsia", "Garsia partitions")->require_subcommand(1);
  leaf(garsia, "build", "build the partition of length-n sign strings", pvdim::partition_report);

  CLI::App* dims = app.add_subcommand("dims", "dimension bounds")->require_subcommand(1);
  leaf(dims, "report", "u_n sequence, box dimension, Garsia and measure bounds",
       [](const RunConfig& c) { return pvdim::dims_report(c); });

  CLI::App* fourier = app.add_subcommand("fourier", "Fourier products")->require_subcommand(1);
  leaf(fourier, "scan", "|phi(omega_k)| along omega_k = 2 pi beta^-k / (1-beta)", pvdim::fourier_report);

  CLI::App* fractal = app.add_subcommand("fractal", "dynamics and estimators")->require_subcommand(1);
  leaf(fractal, "attractor", "points of the repeller", pvdim::attractor_report);
  leaf(fractal, "orbit", "Fat Baker orbit from a seeded start", pvdim::orbit_report);
  leaf(fractal, "boxdim", "box-counting slope of the repeller",
       [](const RunConfig& c) { return pvdim::boxdim_report(c); });
  leaf(fractal, "histogram", "Bernoulli convolution at partition resolution", pvdim::histogram_report);

  std::string preset_name;
  CLI::App* preset = app.add_subcommand("preset", "reproducible experiment presets");
  preset->add_option("name", preset_name, "table1-verify | golden-partition | thm22-gap | erdos-scan | boxdim-empirical")
      ->required();
  flags.add_common(preset);
  preset->callback([&] {
    action = [&](const RunConfig& c) { return pvdim::run_preset(preset_name, c); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (!preset_name.empty()) defaults = pvdim::preset_config(preset_name);
    const RunConfig cfg = flags.resolve(defaults);
    const pvdim::Report report = action(cfg);
    pvdim::emit_report(report, cfg.format, flags.out);
    if (!report.passed()) {
      for (const auto& [name, ok] : report.assertions)
        if (!ok) std::cerr << "assertion failed: " << name << '\n';
      return 1;
    }
    return 0;
  } catch (const pvdim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
