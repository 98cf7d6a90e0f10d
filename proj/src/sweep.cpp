#include "risfso/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "risfso/version.hpp"

namespace risfso::sweep {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
T get_field(const nlohmann::json& j, const std::string& context,
            const std::string& key) {
  if (!j.contains(key)) {
    throw DomainError(context + "." + key + ": missing required field");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DomainError(context + "." + key + ": wrong type");
  }
}

template <typename T>
T get_field_or(const nlohmann::json& j, const std::string& context,
               const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DomainError(context + "." + key + ": wrong type");
  }
}

}  // namespace

const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::kRfSnrDb: return "rf_snr_db";
    case SweepVariable::kFsoSnrDb: return "fso_snr_db";
    case SweepVariable::kBothDb: return "both_db";
  }
  return "?";
}

const char* to_string(OutputColumn c) {
  switch (c) {
    case OutputColumn::kOutageAnalytic: return "outage_analytic";
    case OutputColumn::kOutageAsymptotic: return "outage_asymptotic";
    case OutputColumn::kOutageMc: return "outage_mc";
    case OutputColumn::kAsepAnalytic: return "asep_analytic";
    case OutputColumn::kAsepQuad: return "asep_quad";
    case OutputColumn::kAsepMc: return "asep_mc";
  }
  return "?";
}

void SweepConfig::validate() const {
  base.validate();
  if (!(step_db > 0.0)) throw DomainError("sweep.step_db: must be positive");
  if (!(start_db < stop_db)) {
    throw DomainError("sweep.start_db: must be below sweep.stop_db");
  }
  if (outputs.empty()) {
    throw DomainError("sweep.outputs: at least one output required");
  }
}

bool SweepResult::has_errors() const {
  for (const auto& row : rows) {
    if (!row.error.empty()) return true;
  }
  return false;
}

nlohmann::json to_json(const analytics::SystemParams& params) {
  return {
      {"rf",
       {{"sources", params.rf.sources},
        {"elements", params.rf.elements},
        {"avg_snr_db", linear_to_db(params.rf.avg_snr)}}},
      {"fso",
       {{"alpha", params.fso.alpha},
        {"beta", params.fso.beta},
        {"zeta_sq", params.fso.zeta_sq},
        {"detection", params.fso.detection},
        {"avg_snr_db", linear_to_db(params.fso.avg_snr)}}},
      {"outage_threshold_db", linear_to_db(params.outage_threshold)},
      {"modulation", {{"a", params.modulation.a}, {"b", params.modulation.b}}},
  };
}

analytics::SystemParams system_params_from_json(const nlohmann::json& j) {
  analytics::SystemParams params;
  const auto rf = get_field<nlohmann::json>(j, "config", "rf");
  params.rf.sources = get_field<int>(rf, "rf", "sources");
  params.rf.elements = get_field<int>(rf, "rf", "elements");
  params.rf.avg_snr = db_to_linear(get_field<double>(rf, "rf", "avg_snr_db"));
  const auto fso = get_field<nlohmann::json>(j, "config", "fso");
  params.fso.alpha = get_field<double>(fso, "fso", "alpha");
  params.fso.beta = get_field<double>(fso, "fso", "beta");
  params.fso.zeta_sq = get_field<double>(fso, "fso", "zeta_sq");
  params.fso.detection = get_field_or<int>(fso, "fso", "detection", 1);
  params.fso.avg_snr = db_to_linear(get_field<double>(fso, "fso", "avg_snr_db"));
  params.outage_threshold =
      db_to_linear(get_field<double>(j, "config", "outage_threshold_db"));
  if (j.contains("modulation")) {
    const auto mod = j.at("modulation");
    params.modulation.a = get_field<double>(mod, "modulation", "a");
    params.modulation.b = get_field<double>(mod, "modulation", "b");
  }
  params.validate();
  return params;
}

nlohmann::json to_json(const SweepConfig& config) {
  nlohmann::json j = to_json(config.base);
  nlohmann::json outputs = nlohmann::json::array();
  for (auto c : config.outputs) outputs.push_back(to_string(c));
  j["sweep"] = {{"variable", to_string(config.variable)},
                {"start_db", config.start_db},
                {"stop_db", config.stop_db},
                {"step_db", config.step_db},
                {"outputs", outputs}};
  j["mc"] = {{"trials", config.mc.trials},
             {"seed", config.mc.seed},
             {"batch_size", config.mc.batch_size},
             {"combiner",
              config.mc.combiner == montecarlo::Combiner::kMin ? "min"
                                                               : "harmonic"},
             {"workers", config.mc.workers}};
  return j;
}

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  SweepConfig config;
  config.base = system_params_from_json(j);
  const auto sw = get_field<nlohmann::json>(j, "config", "sweep");
  const std::string variable = get_field<std::string>(sw, "sweep", "variable");
  if (variable == "rf_snr_db") {
    config.variable = SweepVariable::kRfSnrDb;
  } else if (variable == "fso_snr_db") {
    config.variable = SweepVariable::kFsoSnrDb;
  } else if (variable == "both_db") {
    config.variable = SweepVariable::kBothDb;
  } else {
    throw DomainError("sweep.variable: expected rf_snr_db|fso_snr_db|both_db");
  }
  config.start_db = get_field<double>(sw, "sweep", "start_db");
  config.stop_db = get_field<double>(sw, "sweep", "stop_db");
  config.step_db = get_field<double>(sw, "sweep", "step_db");
  config.outputs.clear();
  for (const auto& name :
       get_field<std::vector<std::string>>(sw, "sweep", "outputs")) {
    bool known = false;
    for (auto c :
         {OutputColumn::kOutageAnalytic, OutputColumn::kOutageAsymptotic,
          OutputColumn::kOutageMc, OutputColumn::kAsepAnalytic,
          OutputColumn::kAsepQuad, OutputColumn::kAsepMc}) {
      if (name == to_string(c)) {
        config.outputs.push_back(c);
        known = true;
        break;
      }
    }
    if (!known) {
      throw DomainError("sweep.outputs: unknown output '" + name + "'");
    }
  }
  if (j.contains("mc")) {
    const auto mc = j.at("mc");
    config.mc.trials = get_field_or<std::uint64_t>(mc, "mc", "trials",
                                                   config.mc.trials);
    config.mc.seed = get_field_or<std::uint64_t>(mc, "mc", "seed",
                                                 config.mc.seed);
    config.mc.batch_size = get_field_or<std::uint32_t>(mc, "mc", "batch_size",
                                                       config.mc.batch_size);
    const std::string comb =
        get_field_or<std::string>(mc, "mc", "combiner", "min");
    if (comb == "min") {
      config.mc.combiner = montecarlo::Combiner::kMin;
    } else if (comb == "harmonic") {
      config.mc.combiner = montecarlo::Combiner::kHarmonic;
    } else {
      throw DomainError("mc.combiner: expected min|harmonic");
    }
    config.mc.workers = get_field_or<int>(mc, "mc", "workers", 0);
  }
  config.validate();
  return config;
}

std::uint64_t config_hash(const SweepConfig& config) {
  const std::string canonical = to_json(config).dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

bool wants(const SweepConfig& config, OutputColumn c) {
  for (auto o : config.outputs) {
    if (o == c) return true;
  }
  return false;
}

McCell to_cell(const montecarlo::EstimateWithCI& e) {
  return {e.estimate, e.ci_low, e.ci_high, e.low_count};
}

void append_error(SweepRow& row, const char* column, const char* what) {
  if (!row.error.empty()) row.error += "; ";
  row.error += column;
  row.error += ": ";
  row.error += what;
}

SweepRow evaluate_point(const SweepConfig& config,
                        const analytics::AsymptoteReport& report,
                        double snr_db) {
  SweepRow row;
  row.snr_db = snr_db;
  analytics::SystemParams params = config.base;
  const double linear = db_to_linear(snr_db);
  if (config.variable == SweepVariable::kRfSnrDb ||
      config.variable == SweepVariable::kBothDb) {
    params.rf.avg_snr = linear;
  }
  if (config.variable == SweepVariable::kFsoSnrDb ||
      config.variable == SweepVariable::kBothDb) {
    params.fso.avg_snr = linear;
  }
  for (auto column : config.outputs) {
    try {
      switch (column) {
        case OutputColumn::kOutageAnalytic:
          row.outage_analytic = analytics::outage(params);
          break;
        case OutputColumn::kOutageAsymptotic:
          row.outage_asymptotic =
              report.total_at(params.rf.avg_snr, params.fso.avg_snr);
          break;
        case OutputColumn::kOutageMc: {
          montecarlo::SimPlan plan{params, config.mc.trials, config.mc.seed,
                                   config.mc.batch_size, config.mc.combiner,
                                   config.mc.workers};
          row.outage_mc = to_cell(montecarlo::simulate_outage(plan));
          break;
        }
        case OutputColumn::kAsepAnalytic:
          row.asep_analytic = analytics::asep_closed(params);
          break;
        case OutputColumn::kAsepQuad:
          row.asep_quad = analytics::asep_quadrature(params);
          break;
        case OutputColumn::kAsepMc: {
          montecarlo::SimPlan plan{params, config.mc.trials, config.mc.seed,
                                   config.mc.batch_size, config.mc.combiner,
                                   config.mc.workers};
          row.asep_mc = to_cell(montecarlo::simulate_sep(plan));
          break;
        }
      }
    } catch (const std::exception& e) {
      append_error(row, to_string(column), e.what());
    }
  }
  return row;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  SweepResult result;
  result.config = config;
  std::vector<double> points;
  for (double s = config.start_db; s <= config.stop_db + 1e-9;
       s += config.step_db) {
    points.push_back(s);
  }
  result.rows.resize(points.size());
  const analytics::AsymptoteReport report = analytics::asymptote(config.base);

  const bool heavy_mc = (wants(config, OutputColumn::kOutageMc) ||
                         wants(config, OutputColumn::kAsepMc)) &&
                        config.mc.trials >= (1u << 18);
  if (heavy_mc) {
    // Points run in order; the Monte Carlo engine parallelizes inside.
    for (std::size_t i = 0; i < points.size(); ++i) {
      result.rows[i] = evaluate_point(config, report, points[i]);
    }
    return result;
  }
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, points.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      result.rows[i] = evaluate_point(config, report, points[i]);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return result;
}

namespace {

void csv_meta(const SweepResult& result, std::ostream& out,
              const std::string& command) {
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config_hash(result.config)));
  out << "# risfso " << kVersion << "\n";
  out << "# command: " << command << "\n";
  out << "# config_hash: " << hash << "\n";
  out << "# seed: " << result.config.mc.seed << "\n";
  out << "# config: " << to_json(result.config).dump() << "\n";
}

std::vector<std::string> csv_header(const SweepConfig& config) {
  std::vector<std::string> cols{"curve", "snr_db"};
  for (auto c : config.outputs) {
    cols.push_back(to_string(c));
    if (c == OutputColumn::kOutageMc || c == OutputColumn::kAsepMc) {
      cols.push_back(std::string(to_string(c)) + "_ci_low");
      cols.push_back(std::string(to_string(c)) + "_ci_high");
    }
  }
  cols.push_back("flags");
  cols.push_back("error");
  return cols;
}

void append_cell(std::vector<std::string>& cells, std::string& flags,
                 const char* name, const std::optional<McCell>& cell) {
  if (cell) {
    cells.push_back(format_double(cell->estimate));
    cells.push_back(format_double(cell->ci_low));
    cells.push_back(format_double(cell->ci_high));
    if (cell->low_count) {
      if (!flags.empty()) flags += ";";
      flags += name;
      flags += "_low_count";
    }
  } else {
    cells.insert(cells.end(), 3, "");
  }
}

std::vector<std::string> csv_row(const SweepConfig& config,
                                 const SweepRow& row) {
  std::vector<std::string> cells{row.curve, format_double(row.snr_db)};
  std::string flags;
  for (auto c : config.outputs) {
    switch (c) {
      case OutputColumn::kOutageAnalytic:
        cells.push_back(row.outage_analytic ? format_double(*row.outage_analytic)
                                            : "");
        break;
      case OutputColumn::kOutageAsymptotic:
        cells.push_back(row.outage_asymptotic
                            ? format_double(*row.outage_asymptotic)
                            : "");
        break;
      case OutputColumn::kOutageMc:
        append_cell(cells, flags, "outage_mc", row.outage_mc);
        break;
      case OutputColumn::kAsepAnalytic:
        cells.push_back(row.asep_analytic ? format_double(*row.asep_analytic)
                                          : "");
        break;
      case OutputColumn::kAsepQuad:
        cells.push_back(row.asep_quad ? format_double(*row.asep_quad) : "");
        break;
      case OutputColumn::kAsepMc:
        append_cell(cells, flags, "asep_mc", row.asep_mc);
        break;
    }
  }
  cells.push_back(flags);
  cells.push_back(row.error);
  return cells;
}

}  // namespace

void write_csv(const SweepResult& result, std::ostream& out,
               const std::string& command) {
  csv_meta(result, out, command);
  const auto header = csv_header(result.config);
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << (i ? "," : "") << header[i];
  }
  out << "\n";
  for (const auto& row : result.rows) {
    const auto cells = csv_row(result.config, row);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << (i ? "," : "") << cells[i];
    }
    out << "\n";
  }
}

void write_json(const SweepResult& result, std::ostream& out,
                const std::string& command) {
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config_hash(result.config)));
  nlohmann::json doc;
  doc["meta"] = {{"risfso", kVersion},
                 {"command", command},
                 {"config_hash", hash},
                 {"seed", result.config.mc.seed},
                 {"config", to_json(result.config)}};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : result.rows) {
    nlohmann::json r;
    if (!row.curve.empty()) r["curve"] = row.curve;
    r["snr_db"] = row.snr_db;
    if (row.outage_analytic) r["outage_analytic"] = *row.outage_analytic;
    if (row.outage_asymptotic) r["outage_asymptotic"] = *row.outage_asymptotic;
    if (row.asep_analytic) r["asep_analytic"] = *row.asep_analytic;
    if (row.asep_quad) r["asep_quad"] = *row.asep_quad;
    const auto mc_json = [](const McCell& cell) {
      return nlohmann::json{{"estimate", cell.estimate},
                            {"ci_low", cell.ci_low},
                            {"ci_high", cell.ci_high},
                            {"low_count", cell.low_count}};
    };
    if (row.outage_mc) r["outage_mc"] = mc_json(*row.outage_mc);
    if (row.asep_mc) r["asep_mc"] = mc_json(*row.asep_mc);
    if (!row.error.empty()) r["error"] = row.error;
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << "\n";
}

std::vector<SweepRow> read_csv_rows(std::istream& in) {
  std::string line;
  std::vector<std::string> header;
  std::vector<SweepRow> rows;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(s);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.push_back("");
    return cells;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = split(line);
      continue;
    }
    const auto cells = split(line);
    SweepRow row;
    McCell outage_mc, asep_mc;
    bool has_outage_mc = false, has_asep_mc = false;
    for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) {
      const std::string& name = header[i];
      const std::string& value = cells[i];
      if (name == "curve") {
        row.curve = value;
        continue;
      }
      if (name == "error") {
        row.error = value;
        continue;
      }
      if (name == "flags") {
        outage_mc.low_count =
            value.find("outage_mc_low_count") != std::string::npos;
        asep_mc.low_count = value.find("asep_mc_low_count") != std::string::npos;
        continue;
      }
      if (value.empty()) continue;
      const double parsed = std::strtod(value.c_str(), nullptr);
      if (name == "snr_db") row.snr_db = parsed;
      else if (name == "outage_analytic") row.outage_analytic = parsed;
      else if (name == "outage_asymptotic") row.outage_asymptotic = parsed;
      else if (name == "asep_analytic") row.asep_analytic = parsed;
      else if (name == "asep_quad") row.asep_quad = parsed;
      else if (name == "outage_mc") { outage_mc.estimate = parsed; has_outage_mc = true; }
      else if (name == "outage_mc_ci_low") outage_mc.ci_low = parsed;
      else if (name == "outage_mc_ci_high") outage_mc.ci_high = parsed;
      else if (name == "asep_mc") { asep_mc.estimate = parsed; has_asep_mc = true; }
      else if (name == "asep_mc_ci_low") asep_mc.ci_low = parsed;
      else if (name == "asep_mc_ci_high") asep_mc.ci_high = parsed;
    }
    if (has_outage_mc) row.outage_mc = outage_mc;
    if (has_asep_mc) row.asep_mc = asep_mc;
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

SweepConfig preset_base() {
  SweepConfig config;
  config.base.rf = {2, 2, db_to_linear(20.0)};
  // Default channel: moderate turbulence, noticeable pointing error,
  // heterodyne detection. Chosen defaults, clearly not measurements.
  config.base.fso = {4.2, 1.4, 1.1, 1, db_to_linear(35.0)};
  config.base.outage_threshold = db_to_linear(5.0);
  config.base.modulation = analytics::Modulation::bpsk();
  config.variable = SweepVariable::kRfSnrDb;
  config.start_db = 0.0;
  config.stop_db = 60.0;
  config.step_db = 2.0;
  config.outputs = {OutputColumn::kOutageAnalytic,
                    OutputColumn::kOutageAsymptotic, OutputColumn::kOutageMc};
  // 1e7 trials keep every row with probability >= 1e-5 above the
  // low-count threshold; --trials trades that for speed.
  config.mc.trials = 10'000'000;
  return config;
}

}  // namespace

FigurePreset figure_preset(int number) {
  FigurePreset preset;
  switch (number) {
    case 1: {
      preset.description = "outage vs RF SNR for source counts K=1..3";
      for (int k : {1, 2, 3}) {
        SweepConfig c = preset_base();
        c.base.rf.sources = k;
        preset.curves.emplace_back("K=" + std::to_string(k), c);
      }
      return preset;
    }
    case 2: {
      preset.description = "outage vs RF SNR for element counts N=1,2,4";
      for (int n : {1, 2, 4}) {
        SweepConfig c = preset_base();
        c.base.rf.elements = n;
        preset.curves.emplace_back("N=" + std::to_string(n), c);
      }
      return preset;
    }
    case 3: {
      preset.description = "outage vs RF SNR for (K,N) combinations";
      for (auto [k, n] : {std::pair{1, 1}, {2, 1}, {1, 2}, {2, 2}}) {
        SweepConfig c = preset_base();
        c.base.rf.sources = k;
        c.base.rf.elements = n;
        preset.curves.emplace_back(
            "K=" + std::to_string(k) + " N=" + std::to_string(n), c);
      }
      return preset;
    }
    case 4: {
      preset.description =
          "ASEP vs FSO SNR for turbulence/pointing variations (BPSK)";
      const struct {
        double alpha, beta, zeta_sq;
      } sets[] = {{2.296, 1.822, 0.9}, {2.296, 1.822, 2.1}, {4.2, 3.8, 0.9}};
      for (const auto& s : sets) {
        SweepConfig c = preset_base();
        c.base.fso.alpha = s.alpha;
        c.base.fso.beta = s.beta;
        c.base.fso.zeta_sq = s.zeta_sq;
        c.base.rf.avg_snr = db_to_linear(35.0);
        c.variable = SweepVariable::kFsoSnrDb;
        c.outputs = {OutputColumn::kAsepAnalytic, OutputColumn::kAsepMc};
        char label[64];
        std::snprintf(label, sizeof label, "a=%g b=%g z2=%g", s.alpha, s.beta,
                      s.zeta_sq);
        preset.curves.emplace_back(label, c);
      }
      return preset;
    }
    case 5: {
      preset.description = "ASEP vs RF SNR for two modulation settings";
      for (int k : {1, 2}) {
        for (auto [label, b] : {std::pair{"a1_b1", 1.0}, {"a1_b0.5", 0.5}}) {
          SweepConfig c = preset_base();
          c.base.rf.sources = k;
          c.base.modulation = {1.0, b};
          c.outputs = {OutputColumn::kAsepAnalytic};
          preset.curves.emplace_back(
              "K=" + std::to_string(k) + "_" + label, c);
        }
      }
      return preset;
    }
    default:
      throw DomainError("figure preset: expected a number in 1..5");
  }
}

}  // namespace risfso::sweep
