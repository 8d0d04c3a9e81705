// Batch CLI for vessel state-estimation runs: truth simulation, sensor
// stream synthesis, filtering, and report generation.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "marlin/marlin.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string scenario_path;
  std::string out_dir;
  std::optional<uint64_t> seed;
  std::string filter;
  std::string sensors;
  std::optional<double> horizon;
  std::optional<double> cadence;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_out = true) {
  cmd->add_option("--scenario", opt.scenario_path, "Scenario JSON file (built-in default if omitted)");
  if (with_out) cmd->add_option("--out", opt.out_dir, "Run artifact directory")->required();
  cmd->add_option("--seed", opt.seed, "Override the scenario seed");
  cmd->add_option("--filter", opt.filter, "Filter selection: nonlinear, linear or both")
      ->check(CLI::IsMember({"nonlinear", "linear", "both"}));
  cmd->add_option("--sensors", opt.sensors, "Comma list restricting enabled sensors (gps,imu,uvdar,apriltag)");
  cmd->add_option("--horizon", opt.horizon, "Prediction horizon in seconds");
  cmd->add_option("--cadence", opt.cadence, "Prediction cadence in seconds");
}

void apply_sensor_list(marlin::Scenario& sc, const std::string& list) {
  sc.sensors.gps_enabled = false;
  sc.sensors.imu_enabled = false;
  sc.sensors.uvdar_enabled = false;
  sc.sensors.apriltag_enabled = false;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    switch (marlin::sensor_from_string(item)) {
      case marlin::SensorId::Gps: sc.sensors.gps_enabled = true; break;
      case marlin::SensorId::Imu: sc.sensors.imu_enabled = true; break;
      case marlin::SensorId::Uvdar: sc.sensors.uvdar_enabled = true; break;
      case marlin::SensorId::Apriltag: sc.sensors.apriltag_enabled = true; break;
    }
  }
}

marlin::Scenario load_effective_scenario(const CommonOptions& opt,
                                         const fs::path& fallback_json = {}) {
  marlin::Scenario sc;
  if (!opt.scenario_path.empty()) {
    sc = marlin::load_scenario(opt.scenario_path);
  } else if (!fallback_json.empty() && fs::exists(fallback_json)) {
    sc = marlin::load_scenario(fallback_json);
  } else {
    sc = marlin::default_scenario();
  }
  if (opt.seed) sc.seed = *opt.seed;
  if (!opt.filter.empty()) sc.filters.selection = marlin::filter_selection_from_string(opt.filter);
  if (!opt.sensors.empty()) apply_sensor_list(sc, opt.sensors);
  if (opt.horizon) sc.prediction.horizon = *opt.horizon;
  if (opt.cadence) sc.prediction.cadence = *opt.cadence;
  sc.validate();
  return sc;
}

void write_scenario(const marlin::RunArtifacts& art, const marlin::Scenario& sc) {
  marlin::atomic_write(art.scenario_path(), marlin::scenario_to_json(sc).dump(2) + "\n");
}

void do_simulate(const marlin::Scenario& sc, const marlin::RunArtifacts& art,
                 marlin::TruthTrajectory* truth_out = nullptr,
                 std::vector<marlin::Measurement>* meas_out = nullptr) {
  fs::create_directories(art.dir);
  write_scenario(art, sc);
  marlin::TruthTrajectory truth = marlin::run_truth(sc);
  std::vector<marlin::Measurement> measurements = marlin::generate_measurements(sc, truth);
  marlin::write_truth_csv(art.truth_path(), truth);
  marlin::write_measurements_csv(art.measurements_path(), measurements);
  if (truth_out) *truth_out = std::move(truth);
  if (meas_out) *meas_out = std::move(measurements);
}

std::vector<marlin::Measurement> filter_sensors(const marlin::Scenario& sc,
                                                std::vector<marlin::Measurement> measurements) {
  std::vector<marlin::Measurement> kept;
  kept.reserve(measurements.size());
  for (auto& m : measurements) {
    if (sc.sensors.enabled(m.sensor)) kept.push_back(std::move(m));
  }
  return kept;
}

void write_estimation(const marlin::RunArtifacts& art, const marlin::Scenario& sc,
                      const marlin::EstimationResult& result) {
  const auto wave_names_nl = marlin::wave_column_names(sc.wave_layout());
  if (result.nonlinear) {
    marlin::write_estimates_csv(art.estimates_path("nonlinear"), result.nonlinear->estimates,
                                wave_names_nl);
    marlin::write_innovations_csv(art.innovations_path("nonlinear"),
                                  result.nonlinear->innovations);
    marlin::write_predictions_csv(art.predictions_path("nonlinear"),
                                  result.nonlinear->predictions);
  }
  if (result.linear) {
    std::vector<std::string> wave_names_l;
    for (int a = 0; a < 6; ++a) {
      for (size_t k = 0; k < sc.waves[a].size(); ++k) {
        for (int j = 1; j <= 2; ++j) {
          wave_names_l.push_back("lwave_" + std::string(marlin::kAxisNames[a]) +
                                 std::to_string(k + 1) + "_x" + std::to_string(j));
        }
      }
    }
    marlin::write_estimates_csv(art.estimates_path("linear"), result.linear->estimates,
                                wave_names_l);
    marlin::write_innovations_csv(art.innovations_path("linear"), result.linear->innovations);
    marlin::write_predictions_csv(art.predictions_path("linear"), result.linear->predictions);
  }
}

marlin::EstimationResult do_estimate(const marlin::Scenario& sc, const marlin::RunArtifacts& art,
                                     const marlin::TruthTrajectory& truth,
                                     const std::vector<marlin::Measurement>& measurements) {
  const auto fused = filter_sensors(sc, measurements);
  marlin::EstimationResult result = marlin::run_estimation(sc, truth, fused);
  write_estimation(art, sc, result);
  return result;
}

/// Reconstructs filter outputs from a run directory for offline validation.
std::optional<marlin::FilterOutput> read_filter_output(const marlin::RunArtifacts& art,
                                                       const std::string& name) {
  if (!fs::exists(art.estimates_path(name))) return std::nullopt;
  marlin::FilterOutput out;
  out.name = name;
  for (const auto& [t, vessel] : marlin::read_estimates_csv(art.estimates_path(name))) {
    marlin::EstimateRow row;
    row.t = t;
    row.vessel = vessel;
    out.estimates.push_back(std::move(row));
  }
  out.innovations = marlin::read_innovations_csv(art.innovations_path(name));
  out.predictions = marlin::read_predictions_csv(art.predictions_path(name));
  return out;
}

void do_validate(const marlin::RunArtifacts& art) {
  const marlin::Scenario sc = marlin::load_scenario(art.scenario_path());
  const marlin::TruthTrajectory truth = marlin::read_truth_csv(art.truth_path());
  marlin::EstimationResult result;
  result.nonlinear = read_filter_output(art, "nonlinear");
  result.linear = read_filter_output(art, "linear");
  if (!result.nonlinear && !result.linear) {
    throw marlin::ConfigError("no estimate CSVs found in " + art.dir.string());
  }
  marlin::emit_report(art, truth, result, sc.prediction.dt);
}

int run_command(const std::string& command, const CommonOptions& opt,
                const std::vector<std::string>& compare_paths) {
  if (command == "compare") {
    const auto a = marlin::read_estimates_csv(compare_paths.at(0));
    const auto b = marlin::read_estimates_csv(compare_paths.at(1));
    for (const auto& row : marlin::compare_estimates(a, b)) {
      std::printf("%s %s rmse=%s n=%ld\n", row.series.c_str(), row.group.c_str(),
                  marlin::format_double(row.rmse).c_str(), row.n);
    }
    return 0;
  }

  marlin::RunArtifacts art{fs::path(opt.out_dir)};

  if (command == "simulate") {
    const marlin::Scenario sc = load_effective_scenario(opt);
    do_simulate(sc, art);
    return 0;
  }
  if (command == "estimate") {
    const marlin::Scenario sc = load_effective_scenario(opt, art.scenario_path());
    const marlin::TruthTrajectory truth = marlin::read_truth_csv(art.truth_path());
    const auto measurements = marlin::read_measurements_csv(art.measurements_path());
    do_estimate(sc, art, truth, measurements);
    return 0;
  }
  if (command == "validate") {
    do_validate(art);
    return 0;
  }
  if (command == "run") {
    const marlin::Scenario sc = load_effective_scenario(opt);
    marlin::TruthTrajectory truth;
    std::vector<marlin::Measurement> measurements;
    do_simulate(sc, art, &truth, &measurements);
    const marlin::EstimationResult result = do_estimate(sc, art, truth, measurements);
    marlin::emit_report(art, truth, result, sc.prediction.dt);
    return 0;
  }
  throw marlin::ConfigError("unknown command: " + command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Marine vessel state estimation batch harness"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::vector<std::string> compare_paths;

  CLI::App* simulate = app.add_subcommand("simulate", "Generate truth trajectory and sensor streams");
  add_common(simulate, opt);
  CLI::App* estimate = app.add_subcommand("estimate", "Run the filters over an existing simulation");
  add_common(estimate, opt);
  CLI::App* validate = app.add_subcommand("validate", "Compute RMSE and innovation tests from run artifacts");
  validate->add_option("--out", opt.out_dir, "Run artifact directory")->required();
  CLI::App* run = app.add_subcommand("run", "simulate + estimate + validate");
  add_common(run, opt);
  CLI::App* compare = app.add_subcommand("compare", "Per-group RMSE between two estimate CSVs");
  compare->add_option("csvs", compare_paths, "Two estimate CSV paths")->expected(2)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    return run_command(command, opt, compare_paths);
  } catch (const marlin::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const marlin::NumericError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
