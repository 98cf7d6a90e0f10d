// Command-line front end: sweep orchestration, asymptote reports and the
// cross-oracle validation suite, with CSV/JSON result emission.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "risfso/sweep.hpp"
#include "risfso/validate.hpp"
#include "risfso/version.hpp"

namespace {

using risfso::analytics::AsymptoteReport;
using risfso::analytics::DominantHop;
using risfso::sweep::SweepConfig;
using risfso::sweep::SweepResult;

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<int> workers;
  std::optional<std::string> combiner;
};

void add_common(CLI::App* cmd, CommonOptions* opts, bool config_required) {
  auto* config = cmd->add_option("--config", opts->config_path,
                                 "JSON configuration file");
  if (config_required) config->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", opts->out_path,
                  "output file (default: stdout)");
  cmd->add_option("--format", opts->format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", opts->seed, "Monte Carlo seed override");
  cmd->add_option("--trials", opts->trials, "Monte Carlo trials override");
  cmd->add_option("--workers", opts->workers, "worker thread override");
  cmd->add_option("--combiner", opts->combiner,
                  "end-to-end SNR combiner for Monte Carlo")
      ->check(CLI::IsMember({"min", "harmonic"}));
}

int default_workers() {
  if (const char* env = std::getenv("RISFSO_WORKERS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return 0;  // auto
}

SweepConfig load_config(const CommonOptions& opts) {
  std::ifstream in(opts.config_path);
  if (!in) {
    throw risfso::DomainError("config: cannot open " + opts.config_path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw risfso::DomainError(std::string("config: invalid JSON: ") + e.what());
  }
  SweepConfig config = risfso::sweep::sweep_config_from_json(j);
  config.mc.workers = default_workers();
  if (opts.seed) config.mc.seed = *opts.seed;
  if (opts.trials) config.mc.trials = *opts.trials;
  if (opts.workers) config.mc.workers = *opts.workers;
  if (opts.combiner) {
    config.mc.combiner = *opts.combiner == "harmonic"
                             ? risfso::montecarlo::Combiner::kHarmonic
                             : risfso::montecarlo::Combiner::kMin;
  }
  return config;
}

void emit(const SweepResult& result, const CommonOptions& opts,
          const std::string& command) {
  std::ostringstream buffer;
  if (opts.format == "json") {
    risfso::sweep::write_json(result, buffer, command);
  } else {
    risfso::sweep::write_csv(result, buffer, command);
  }
  if (opts.out_path.empty()) {
    std::cout << buffer.str();
  } else {
    std::ofstream out(opts.out_path);
    if (!out) throw risfso::DomainError("cannot open " + opts.out_path);
    out << buffer.str();
  }
}

int run_metric_sweep(const CommonOptions& opts, const std::string& command,
                     bool force_outputs_outage) {
  SweepConfig config = load_config(opts);
  if (force_outputs_outage) {
    // keep only columns matching the command family
    std::vector<risfso::sweep::OutputColumn> filtered;
    for (auto c : config.outputs) {
      const bool outage_like =
          c == risfso::sweep::OutputColumn::kOutageAnalytic ||
          c == risfso::sweep::OutputColumn::kOutageAsymptotic ||
          c == risfso::sweep::OutputColumn::kOutageMc;
      if (outage_like == (command == "outage")) filtered.push_back(c);
    }
    if (filtered.empty()) {
      filtered.push_back(command == "outage"
                             ? risfso::sweep::OutputColumn::kOutageAnalytic
                             : risfso::sweep::OutputColumn::kAsepAnalytic);
    }
    config.outputs = filtered;
  }
  const SweepResult result = risfso::sweep::run_sweep(config);
  emit(result, opts, command);
  return result.has_errors() ? 1 : 0;
}

int run_asymptote(const CommonOptions& opts) {
  const SweepConfig config = load_config(opts);
  const AsymptoteReport report = risfso::analytics::asymptote(config.base);
  const char* hop = report.dominant == DominantHop::kRf    ? "rf"
                    : report.dominant == DominantHop::kFso ? "fso"
                                                           : "tie";
  nlohmann::json j = {
      {"diversity_order", report.diversity_order},
      {"dominant_hop", hop},
      {"upsilon", report.upsilon},
      {"near_degenerate", report.near_degenerate},
      {"rf_term", {{"gain", report.rf_term.gain},
                   {"exponent", report.rf_term.exponent}}},
      {"fso_term", {{"gain", report.fso_term.gain},
                    {"exponent", report.fso_term.exponent}}},
  };
  if (report.dominant != DominantHop::kTie) {
    j["coding_gain"] = report.coding_gain;
  } else {
    j["coding_gain_note"] =
        "tie between hop exponents; combined-term coding gain omitted";
  }
  std::ostringstream buffer;
  buffer << j.dump(2) << "\n";
  if (opts.out_path.empty()) {
    std::cout << buffer.str();
  } else {
    std::ofstream out(opts.out_path);
    out << buffer.str();
  }
  return 0;
}

int run_validate(const CommonOptions& opts) {
  risfso::validate::Options options;
  options.workers = default_workers();
  if (opts.seed) options.seed = *opts.seed;
  if (opts.trials) options.mc_trials = *opts.trials;
  if (opts.workers) options.workers = *opts.workers;
  const auto report = risfso::validate::run_validation(options);
  std::ostringstream buffer;
  if (opts.format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : report.checks) {
      rows.push_back({{"check", c.name},
                      {"metric", c.metric},
                      {"limit", c.limit},
                      {"pass", c.pass},
                      {"detail", c.detail}});
    }
    buffer << rows.dump(2) << "\n";
  } else {
    buffer << report.to_csv();
  }
  if (opts.out_path.empty()) {
    std::cout << buffer.str();
  } else {
    std::ofstream out(opts.out_path);
    out << buffer.str();
  }
  for (const auto& c : report.checks) {
    std::cerr << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " metric="
              << c.metric << "\n";
  }
  return report.all_pass() ? 0 : 1;
}

int run_figure(int number, const CommonOptions& opts) {
  const auto preset = risfso::sweep::figure_preset(number);
  SweepResult merged;
  bool first = true;
  for (const auto& [label, base_config] : preset.curves) {
    risfso::sweep::SweepConfig config = base_config;
    config.mc.workers = default_workers();
    if (opts.seed) config.mc.seed = *opts.seed;
    if (opts.trials) config.mc.trials = *opts.trials;
    if (opts.workers) config.mc.workers = *opts.workers;
    SweepResult result = risfso::sweep::run_sweep(config);
    for (auto& row : result.rows) row.curve = label;
    if (first) {
      merged.config = result.config;
      first = false;
    }
    merged.rows.insert(merged.rows.end(), result.rows.begin(),
                       result.rows.end());
  }
  emit(merged, opts, "fig" + std::to_string(number));
  return merged.has_errors() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "risfso: outage and error-rate analysis for RIS-assisted RF sources "
      "relayed over a Gamma-Gamma free-space optical link"};
  app.set_version_flag("--version", risfso::kVersion);
  app.require_subcommand(1);

  CommonOptions outage_opts, asep_opts, asym_opts, validate_opts, fig_opts;
  auto* outage = app.add_subcommand("outage", "outage probability sweep");
  add_common(outage, &outage_opts, true);
  auto* asep = app.add_subcommand("asep", "average symbol error sweep");
  add_common(asep, &asep_opts, true);
  auto* asym = app.add_subcommand(
      "asymptote", "diversity order and coding gain report");
  add_common(asym, &asym_opts, true);
  auto* validate = app.add_subcommand(
      "validate", "run the cross-oracle validation suites");
  add_common(validate, &validate_opts, false);
  auto* fig = app.add_subcommand("fig", "figure-reproduction presets");
  int fig_number = 0;
  fig->add_option("number", fig_number, "preset number (1-5)")
      ->required()
      ->check(CLI::Range(1, 5));
  add_common(fig, &fig_opts, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (outage->parsed()) return run_metric_sweep(outage_opts, "outage", true);
    if (asep->parsed()) return run_metric_sweep(asep_opts, "asep", true);
    if (asym->parsed()) return run_asymptote(asym_opts);
    if (validate->parsed()) return run_validate(validate_opts);
    if (fig->parsed()) return run_figure(fig_number, fig_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
