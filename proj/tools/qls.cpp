// qls: budgets, field profiles and protocol simulations from a config file.
//
//   qls budget    --config scenarios/paper-electron.json
//   qls field     --scenario paper-electron --out results/
//   qls lineshape --scenario linewidth-b2-4 --seed 7 --format records
//   qls sweep     --scenario paper-electron --axis resonator.detune_linewidths
//                 --from 5 --to 100 --points 20

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qls/report.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kSchema = 2,
  kDomain = 3,
  kTruncation = 4,
  kIo = 5,
  kInternal = 10,
};

int fail(int code, const std::string& kind, const std::string& message,
         const std::string& path = "") {
  qls::Json err{{"error", kind}, {"message", message}};
  if (!path.empty()) err["path"] = path;
  std::cerr << err.dump() << '\n';
  return code;
}

struct Options {
  std::string config;
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string format;
  qls::SweepSpec sweep;
  std::string sweep_report = "budget";
};

std::string resolve_config(const Options& o) {
  if (!o.config.empty()) return o.config;
  if (!o.scenario.empty()) return std::string(QLS_SCENARIO_DIR) + "/" + o.scenario + ".json";
  throw qls::SchemaError("/", "one of --config or --scenario is required");
}

int run(const std::string& command, const Options& o) {
  qls::RunConfig cfg = qls::load_config_file(resolve_config(o));
  if (o.seed) cfg.seed = *o.seed;
  if (!o.format.empty()) cfg.output.format = o.format;
  if (!o.out.empty()) cfg.output.directory = o.out;

  qls::Table table;
  if (command == "budget") {
    table = qls::cmd_budget(cfg);
  } else if (command == "field") {
    table = qls::cmd_field(cfg);
  } else if (command == "lineshape") {
    table = qls::cmd_lineshape(cfg);
  } else if (command == "protocol") {
    table = qls::cmd_protocol(cfg);
  } else {
    qls::SweepSpec spec = o.sweep;
    spec.report =
        o.sweep_report == "lineshape" ? qls::SweepReport::lineshape : qls::SweepReport::budget;
    table = qls::cmd_sweep(cfg, spec);
  }

  for (const auto& w : table.warnings) std::cerr << "warning: " << w << '\n';

  if (cfg.output.directory.empty()) {
    qls::write_table(std::cout, table, cfg.output.format);
    return kOk;
  }
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output.directory);
  const fs::path file = fs::path(cfg.output.directory) /
                        (command + (cfg.output.format == "records" ? ".jsonl" : ".csv"));
  std::ofstream out(file);
  if (!out) return fail(kIo, "io", "cannot write " + file.string());
  qls::write_table(out, table, cfg.output.format);
  std::cout << file.string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-trap quantum logic spectroscopy budgets and simulations"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "Config file (JSON)");
    sub->add_option("--scenario", o.scenario, "Bundled scenario name");
    sub->add_option("--out", o.out, "Output directory (default: stdout)");
    sub->add_option("--seed", o.seed, "RNG seed override");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "records"}));
  };
  for (const char* name : {"budget", "field", "lineshape", "protocol"})
    common(app.add_subcommand(name));

  auto* sweep = app.add_subcommand("sweep", "Re-evaluate a report along one config axis");
  common(sweep);
  sweep->add_option("--axis", o.sweep.axis, "Dotted path to a numeric config leaf")->required();
  sweep->add_option("--from", o.sweep.from, "First value")->required();
  sweep->add_option("--to", o.sweep.to, "Last value")->required();
  sweep->add_option("--points", o.sweep.points, "Number of values");
  sweep->add_flag("--log", o.sweep.logarithmic, "Logarithmic spacing");
  sweep->add_option("--report", o.sweep_report, "Report per point")
      ->check(CLI::IsMember({"budget", "lineshape"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail(kUsage, "usage", e.what());
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, o);
  } catch (const qls::SchemaError& e) {
    return fail(kSchema, "schema", e.what(), e.path());
  } catch (const qls::TruncationError& e) {
    return fail(kTruncation, "truncation", e.what());
  } catch (const qls::DomainError& e) {
    return fail(kDomain, "domain", e.what());
  } catch (const std::exception& e) {
    return fail(kInternal, "internal", e.what());
  }
}
