#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "risfso/sweep.hpp"

using namespace risfso;
using nlohmann::json;
using sweep::OutputColumn;
using sweep::SweepConfig;
using sweep::SweepVariable;

namespace {

json sample_config() {
  return json::parse(R"({
    "rf": {"sources": 2, "elements": 2, "avg_snr_db": 15.0},
    "fso": {"alpha": 4.2, "beta": 1.4, "zeta_sq": 1.1, "detection": 1,
            "avg_snr_db": 25.0},
    "outage_threshold_db": 3.0,
    "modulation": {"a": 1.0, "b": 1.0},
    "sweep": {"variable": "rf_snr_db", "start_db": 0.0, "stop_db": 20.0,
              "step_db": 10.0,
              "outputs": ["outage_analytic", "outage_asymptotic"]},
    "mc": {"trials": 50000, "seed": 11, "batch_size": 16384,
           "combiner": "min", "workers": 2}
  })");
}

}  // namespace

TEST_CASE("config parsing round-trips") {
  const SweepConfig config = sweep::sweep_config_from_json(sample_config());
  CHECK(config.base.rf.sources == 2);
  CHECK(config.base.rf.avg_snr ==
        doctest::Approx(std::pow(10.0, 1.5)).epsilon(1e-12));
  CHECK(config.variable == SweepVariable::kRfSnrDb);
  CHECK(config.mc.seed == 11);
  const SweepConfig again =
      sweep::sweep_config_from_json(sweep::to_json(config));
  CHECK(again.base.rf.avg_snr ==
        doctest::Approx(config.base.rf.avg_snr).epsilon(1e-12));
  CHECK(again.base.fso.avg_snr ==
        doctest::Approx(config.base.fso.avg_snr).epsilon(1e-12));
  CHECK(again.outputs == config.outputs);
}

TEST_CASE("config errors name the offending field") {
  json j = sample_config();
  j["rf"].erase("sources");
  try {
    sweep::sweep_config_from_json(j);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("rf.sources") != std::string::npos);
  }

  j = sample_config();
  j["sweep"]["step_db"] = -1.0;
  CHECK_THROWS_AS(sweep::sweep_config_from_json(j), DomainError);

  j = sample_config();
  j["sweep"]["outputs"] = {"outage_analytic", "bogus"};
  try {
    sweep::sweep_config_from_json(j);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }

  j = sample_config();
  j["mc"]["combiner"] = "average";
  CHECK_THROWS_AS(sweep::sweep_config_from_json(j), DomainError);
}

TEST_CASE("config hash is stable and sensitive") {
  const SweepConfig config = sweep::sweep_config_from_json(sample_config());
  SweepConfig other = config;
  CHECK(sweep::config_hash(config) == sweep::config_hash(other));
  other.base.rf.elements = 3;
  CHECK(sweep::config_hash(config) != sweep::config_hash(other));
}

TEST_CASE("three-point analytic sweep is monotone") {
  const SweepConfig config = sweep::sweep_config_from_json(sample_config());
  const auto result = sweep::run_sweep(config);
  REQUIRE(result.rows.size() == 3);
  CHECK_FALSE(result.has_errors());
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    REQUIRE(result.rows[i].outage_analytic.has_value());
    CHECK(*result.rows[i].outage_analytic <=
          *result.rows[i - 1].outage_analytic + 1e-15);
  }
}

TEST_CASE("csv output re-parses to identical values") {
  SweepConfig config = sweep::sweep_config_from_json(sample_config());
  config.outputs = {OutputColumn::kOutageAnalytic, OutputColumn::kOutageMc};
  config.mc.trials = 20'000;
  const auto result = sweep::run_sweep(config);
  std::ostringstream out;
  sweep::write_csv(result, out, "outage");
  std::istringstream in(out.str());
  const auto rows = sweep::read_csv_rows(in);
  REQUIRE(rows.size() == result.rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].snr_db == result.rows[i].snr_db);
    REQUIRE(rows[i].outage_analytic.has_value());
    CHECK(*rows[i].outage_analytic == *result.rows[i].outage_analytic);
    REQUIRE(rows[i].outage_mc.has_value());
    CHECK(rows[i].outage_mc->estimate == result.rows[i].outage_mc->estimate);
    CHECK(rows[i].outage_mc->ci_low == result.rows[i].outage_mc->ci_low);
    CHECK(rows[i].outage_mc->ci_high == result.rows[i].outage_mc->ci_high);
    CHECK(rows[i].outage_mc->low_count == result.rows[i].outage_mc->low_count);
  }
  // JSON mirror parses back.
  std::ostringstream jout;
  sweep::write_json(result, jout, "outage");
  const json doc = json::parse(jout.str());
  CHECK(doc.at("rows").size() == result.rows.size());
  CHECK(doc.at("meta").at("command") == "outage");
}

TEST_CASE("figure 3 preset: N beats K at the same diversity order") {
  const auto preset = sweep::figure_preset(3);
  REQUIRE(preset.curves.size() == 4);
  auto run_curve = [&](const std::string& label) {
    for (const auto& [name, config] : preset.curves) {
      if (name != label) continue;
      SweepConfig analytic = config;
      analytic.outputs = {OutputColumn::kOutageAnalytic};
      analytic.start_db = 10.0;
      analytic.stop_db = 30.0;
      analytic.step_db = 5.0;
      return sweep::run_sweep(analytic);
    }
    throw std::runtime_error("curve not found: " + label);
  };
  const auto one_two = run_curve("K=1 N=2");
  const auto two_one = run_curve("K=2 N=1");
  REQUIRE(one_two.rows.size() == two_one.rows.size());
  for (std::size_t i = 0; i < one_two.rows.size(); ++i) {
    CHECK(*one_two.rows[i].outage_analytic <
          *two_one.rows[i].outage_analytic);
  }
}

TEST_CASE("figure 5 preset: error curves ordered by the kernel parameter") {
  // With a = 1 fixed, lowering b from 1 to 0.5 weakens the kernel's decay
  // so the ASEP curve sits uniformly higher.
  const auto preset = sweep::figure_preset(5);
  sweep::SweepResult reference, halved;
  for (const auto& [name, config] : preset.curves) {
    if (name != "K=2_a1_b1" && name != "K=2_a1_b0.5") continue;
    SweepConfig trimmed = config;
    trimmed.start_db = 5.0;
    trimmed.stop_db = 25.0;
    trimmed.step_db = 5.0;
    auto result = sweep::run_sweep(trimmed);
    if (name == "K=2_a1_b1") reference = std::move(result);
    else halved = std::move(result);
  }
  REQUIRE(reference.rows.size() == 5);
  REQUIRE(halved.rows.size() == 5);
  for (std::size_t i = 0; i < reference.rows.size(); ++i) {
    CHECK(*halved.rows[i].asep_analytic > *reference.rows[i].asep_analytic);
  }
}

TEST_CASE("sweep validation catches bad ranges") {
  SweepConfig config = sweep::sweep_config_from_json(sample_config());
  config.step_db = 0.0;
  CHECK_THROWS_AS(config.validate(), DomainError);
  config.step_db = 2.0;
  config.stop_db = config.start_db;
  CHECK_THROWS_AS(config.validate(), DomainError);
  config.stop_db = config.start_db + 10.0;
  config.outputs.clear();
  CHECK_THROWS_AS(config.validate(), DomainError);
}
