#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "risfso/montecarlo.hpp"

namespace risfso::sweep {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

enum class SweepVariable { kRfSnrDb, kFsoSnrDb, kBothDb };

enum class OutputColumn {
  kOutageAnalytic,
  kOutageAsymptotic,
  kOutageMc,
  kAsepAnalytic,
  kAsepQuad,
  kAsepMc,
};

const char* to_string(SweepVariable v);
const char* to_string(OutputColumn c);

struct McSettings {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  std::uint32_t batch_size = 1u << 16;
  montecarlo::Combiner combiner = montecarlo::Combiner::kMin;
  int workers = 0;
};

struct SweepConfig {
  analytics::SystemParams base;
  SweepVariable variable = SweepVariable::kRfSnrDb;
  double start_db = 0.0;
  double stop_db = 40.0;
  double step_db = 2.0;
  std::vector<OutputColumn> outputs = {OutputColumn::kOutageAnalytic};
  McSettings mc;

  void validate() const;
};

struct McCell {
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool low_count = false;
};

struct SweepRow {
  std::string curve;  // label for multi-curve outputs; empty for single
  double snr_db = 0.0;
  std::optional<double> outage_analytic;
  std::optional<double> outage_asymptotic;
  std::optional<McCell> outage_mc;
  std::optional<double> asep_analytic;
  std::optional<double> asep_quad;
  std::optional<McCell> asep_mc;
  std::string error;  // empty when every requested output evaluated
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;

  bool has_errors() const;
};

// JSON bindings for configurations. All SNR fields carry an explicit _db
// suffix and are converted on ingestion; parse errors name the offending
// field.
nlohmann::json to_json(const analytics::SystemParams& params);
analytics::SystemParams system_params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SweepConfig& config);
SweepConfig sweep_config_from_json(const nlohmann::json& j);

// FNV-1a over the canonical serialized configuration.
std::uint64_t config_hash(const SweepConfig& config);

// One row per sweep point; per-point evaluation failures land in the
// row's error field and the run continues.
SweepResult run_sweep(const SweepConfig& config);

// CSV with a #-prefixed header block (version, config hash, seed);
// doubles are printed round-trip exact.
void write_csv(const SweepResult& result, std::ostream& out,
               const std::string& command);
void write_json(const SweepResult& result, std::ostream& out,
                const std::string& command);

// Re-parses the CSV row block; used to verify emitted files round-trip.
std::vector<SweepRow> read_csv_rows(std::istream& in);

// Named multi-curve presets reproducing the standard sweep shapes.
// Channel defaults (alpha=4.2, beta=1.4, zeta_sq=1.1, heterodyne) are
// documented choices, not measured values.
struct FigurePreset {
  std::string description;
  std::vector<std::pair<std::string, SweepConfig>> curves;
};

FigurePreset figure_preset(int number);

}  // namespace risfso::sweep
