#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "marlin/csv.hpp"
#include "marlin/harness.hpp"
#include "marlin/validation.hpp"

namespace marlin {

/// Channel groups of the 12-dimensional vessel state, matching the reporting
/// convention: position, orientation, linear and angular velocity.
struct VesselGroup {
  const char* name;
  int offset;
  bool angles;
};

inline constexpr std::array<VesselGroup, 4> kVesselGroups = {
    VesselGroup{"pos", 0, false},
    VesselGroup{"ang", 3, true},
    VesselGroup{"linvel", 6, false},
    VesselGroup{"angvel", 9, true},
};

struct RmseRow {
  std::string series;  // "estimate" or "prediction"
  double offset_s{-1.0};  // horizon offset for predictions, -1 for estimates
  std::string group;
  double rmse{0.0};
  long n{0};
};

struct ValidationRow {
  std::string sensor;
  std::string group;
  TestReport report;
};

struct ReportBundle {
  std::string filter;
  std::vector<RmseRow> rmse;
  std::vector<ValidationRow> validation;
  long late_dropped{0};
};

namespace detail {

inline std::vector<int> wrap_channels_for_group(bool angles) {
  return angles ? std::vector<int>{0, 1, 2} : std::vector<int>{};
}

}  // namespace detail

/// Per-group RMSE of sampled estimates against the truth grid.
inline std::vector<RmseRow> estimate_rmse(const TruthTrajectory& truth,
                                          const std::vector<EstimateRow>& estimates) {
  std::vector<RmseRow> rows;
  for (const auto& g : kVesselGroups) {
    std::vector<VecX> est, tru;
    est.reserve(estimates.size());
    tru.reserve(estimates.size());
    for (const auto& e : estimates) {
      est.push_back(e.vessel.segment<3>(g.offset));
      tru.push_back(truth.at_time(e.t).segment<3>(g.offset));
    }
    RmseRow row;
    row.series = "estimate";
    row.group = g.name;
    row.rmse = vector_rmse(est, tru, detail::wrap_channels_for_group(g.angles));
    row.n = static_cast<long>(est.size());
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Per-offset, per-group RMSE of receding-horizon predictions. Targets past
/// the truth trajectory are skipped.
inline std::vector<RmseRow> prediction_rmse(const TruthTrajectory& truth,
                                            const std::vector<PredictionRow>& predictions,
                                            double prediction_dt) {
  std::map<long, std::vector<const PredictionRow*>> by_offset;
  const double t_end = truth.times.empty() ? 0.0 : truth.times.back();
  for (const auto& p : predictions) {
    if (p.t_target > t_end + 1e-9) continue;
    const long k = std::llround((p.t_target - p.t_issue) / prediction_dt);
    by_offset[k].push_back(&p);
  }
  std::vector<RmseRow> rows;
  for (const auto& [k, list] : by_offset) {
    for (const auto& g : kVesselGroups) {
      std::vector<VecX> est, tru;
      est.reserve(list.size());
      tru.reserve(list.size());
      for (const auto* p : list) {
        est.push_back(p->vessel.segment<3>(g.offset));
        tru.push_back(truth.at_time(p->t_target).segment<3>(g.offset));
      }
      RmseRow row;
      row.series = "prediction";
      row.offset_s = static_cast<double>(k) * prediction_dt;
      row.group = g.name;
      row.rmse = vector_rmse(est, tru, detail::wrap_channels_for_group(g.angles));
      row.n = static_cast<long>(est.size());
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

/// The sensor/channel-group rows of the consistency tables: GPS position,
/// IMU orientation, and position/orientation separately for the two
/// relative-pose sensors.
struct SensorGroupSpec {
  SensorId sensor;
  const char* group;
  int offset;
};

inline constexpr std::array<SensorGroupSpec, 6> kSensorGroups = {
    SensorGroupSpec{SensorId::Gps, "pos", 0},
    SensorGroupSpec{SensorId::Imu, "ang", 0},
    SensorGroupSpec{SensorId::Uvdar, "pos", 0},
    SensorGroupSpec{SensorId::Uvdar, "ang", 3},
    SensorGroupSpec{SensorId::Apriltag, "pos", 0},
    SensorGroupSpec{SensorId::Apriltag, "ang", 3},
};

/// Innovation consistency tests per sensor/group; groups without records are
/// skipped.
inline std::vector<ValidationRow> innovation_validation(
    const std::vector<InnovationRecord>& innovations, double alpha = 0.05) {
  std::vector<ValidationRow> rows;
  for (const auto& spec : kSensorGroups) {
    std::vector<InnovationRecord> sensor_records;
    for (const auto& r : innovations) {
      if (r.sensor == spec.sensor) sensor_records.push_back(r);
    }
    if (sensor_records.size() < 8) continue;
    const auto sliced = slice_records(sensor_records, spec.offset, 3);
    ValidationRow row;
    row.sensor = to_string(spec.sensor);
    row.group = spec.group;
    row.report = run_consistency_tests(sliced, alpha);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ReportBundle build_report(const TruthTrajectory& truth, const FilterOutput& out,
                                 double prediction_dt, double alpha = 0.05) {
  ReportBundle bundle;
  bundle.filter = out.name;
  bundle.rmse = estimate_rmse(truth, out.estimates);
  auto pred = prediction_rmse(truth, out.predictions, prediction_dt);
  bundle.rmse.insert(bundle.rmse.end(), pred.begin(), pred.end());
  bundle.validation = innovation_validation(out.innovations, alpha);
  bundle.late_dropped = out.late_dropped;
  return bundle;
}

// --- artifact paths ---------------------------------------------------------

/// File layout of one run directory. All files are written atomically
/// (temp file + rename).
struct RunArtifacts {
  std::filesystem::path dir;

  [[nodiscard]] std::filesystem::path scenario_path() const { return dir / "scenario.json"; }
  [[nodiscard]] std::filesystem::path truth_path() const { return dir / "truth.csv"; }
  [[nodiscard]] std::filesystem::path measurements_path() const {
    return dir / "measurements.csv";
  }
  [[nodiscard]] std::filesystem::path estimates_path(const std::string& filter) const {
    return dir / ("estimate_" + filter + ".csv");
  }
  [[nodiscard]] std::filesystem::path innovations_path(const std::string& filter) const {
    return dir / ("innovations_" + filter + ".csv");
  }
  [[nodiscard]] std::filesystem::path predictions_path(const std::string& filter) const {
    return dir / ("predictions_" + filter + ".csv");
  }
  [[nodiscard]] std::filesystem::path rmse_path(const std::string& filter) const {
    return dir / ("rmse_" + filter + ".csv");
  }
  [[nodiscard]] std::filesystem::path validation_path(const std::string& filter) const {
    return dir / ("validation_" + filter + ".csv");
  }
  [[nodiscard]] std::filesystem::path report_path() const { return dir / "report.txt"; }
};

// --- CSV writers / readers --------------------------------------------------

inline std::vector<std::string> wave_column_names(const WaveBankLayout& lay) {
  std::vector<std::string> names;
  for (int a = 0; a < 6; ++a) {
    for (int k = 0; k < lay.components(a); ++k) {
      for (int j = 1; j <= 3; ++j) {
        names.push_back("wave_" + std::string(kAxisNames[a]) + std::to_string(k + 1) + "_x" +
                        std::to_string(j));
      }
    }
  }
  return names;
}

inline constexpr const char* kVesselColumns = "x,y,z,phi,theta,psi,u,v,w,p,q,r";

inline void write_truth_csv(const std::filesystem::path& path, const TruthTrajectory& truth) {
  std::string out;
  out += "t,";
  out += kVesselColumns;
  for (const auto& name : wave_column_names(truth.layout)) out += "," + name;
  out += "\n";
  for (size_t i = 0; i < truth.states.size(); ++i) {
    out += format_double(truth.times[i]);
    for (Eigen::Index j = 0; j < truth.states[i].size(); ++j) {
      out += ",";
      out += format_double(truth.states[i][j]);
    }
    out += "\n";
  }
  atomic_write(path, out);
}

/// Reads a truth CSV back. The layout is not recoverable from the file; the
/// vessel columns and grid are, which is all reporting needs.
inline TruthTrajectory read_truth_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  TruthTrajectory truth;
  for (const auto& row : table.rows) {
    truth.times.push_back(parse_double(row.at(0)));
    VecX state(row.size() - 1);
    for (size_t j = 1; j < row.size(); ++j) state[static_cast<Eigen::Index>(j - 1)] = parse_double(row[j]);
    truth.states.push_back(std::move(state));
  }
  if (truth.times.size() < 2) throw ConfigError("truth CSV needs at least two rows");
  truth.dt = truth.times[1] - truth.times[0];
  return truth;
}

inline void write_measurements_csv(const std::filesystem::path& path,
                                   const std::vector<Measurement>& measurements) {
  std::string out = "t_meas,t_avail,sensor,y1,y2,y3,y4,y5,y6,r11,r22,r33,r44,r55,r66\n";
  for (const auto& m : measurements) {
    out += format_double(m.timestamp);
    out += ",";
    out += format_double(m.available_at);
    out += ",";
    out += to_string(m.sensor);
    for (int i = 0; i < 6; ++i) {
      out += ",";
      if (i < m.dim()) out += format_double(m.value[i]);
    }
    for (int i = 0; i < 6; ++i) {
      out += ",";
      if (i < m.dim()) out += format_double(m.noise(i, i));
    }
    out += "\n";
  }
  atomic_write(path, out);
}

inline std::vector<Measurement> read_measurements_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::vector<std::string> expected = {"t_meas", "t_avail", "sensor", "y1", "y2", "y3",
                                             "y4",     "y5",      "y6",     "r11", "r22", "r33",
                                             "r44",    "r55",     "r66"};
  if (table.header != expected) throw ConfigError("unexpected measurement CSV header");
  std::vector<Measurement> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    Measurement m;
    m.timestamp = parse_double(row.at(0));
    m.available_at = parse_double(row.at(1));
    m.sensor = sensor_from_string(row.at(2));
    const int dim = measurement_dim(m.sensor);
    m.value = VecX(dim);
    m.noise = MatX::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      m.value[i] = parse_double(row.at(3 + static_cast<size_t>(i)));
      m.noise(i, i) = parse_double(row.at(9 + static_cast<size_t>(i)));
    }
    out.push_back(std::move(m));
  }
  return out;
}

inline void write_estimates_csv(const std::filesystem::path& path,
                                const std::vector<EstimateRow>& rows,
                                const std::vector<std::string>& wave_names) {
  std::string out;
  out += "t,";
  out += kVesselColumns;
  for (const auto& name : wave_names) out += "," + name;
  const Eigen::Index cov_dim = rows.empty() ? 0 : rows.front().cov_diag.size();
  for (Eigen::Index i = 1; i <= cov_dim; ++i) out += ",cov_d" + std::to_string(i);
  out += "\n";
  for (const auto& r : rows) {
    out += format_double(r.t);
    for (int i = 0; i < 12; ++i) {
      out += ",";
      out += format_double(r.vessel[i]);
    }
    for (Eigen::Index i = 0; i < r.wave.size(); ++i) {
      out += ",";
      out += format_double(r.wave[i]);
    }
    for (Eigen::Index i = 0; i < r.cov_diag.size(); ++i) {
      out += ",";
      out += format_double(r.cov_diag[i]);
    }
    out += "\n";
  }
  atomic_write(path, out);
}

/// Reads back the time and vessel columns of an estimate CSV.
inline std::vector<std::pair<double, Vec12>> read_estimates_csv(
    const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  std::vector<std::pair<double, Vec12>> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    Vec12 v;
    for (int i = 0; i < 12; ++i) v[i] = parse_double(row.at(1 + static_cast<size_t>(i)));
    out.emplace_back(parse_double(row.at(0)), v);
  }
  return out;
}

inline void write_innovations_csv(const std::filesystem::path& path,
                                  const std::vector<InnovationRecord>& records) {
  std::string out = "t,sensor,m";
  for (int i = 1; i <= 6; ++i) out += ",z" + std::to_string(i);
  for (int i = 0; i < 6; ++i) {
    for (int j = i; j < 6; ++j) out += ",s" + std::to_string(i + 1) + std::to_string(j + 1);
  }
  out += "\n";
  for (const auto& r : records) {
    out += format_double(r.timestamp);
    out += ",";
    out += to_string(r.sensor);
    out += ",";
    out += std::to_string(r.dim());
    for (int i = 0; i < 6; ++i) {
      out += ",";
      if (i < r.dim()) out += format_double(r.innovation[i]);
    }
    for (int i = 0; i < 6; ++i) {
      for (int j = i; j < 6; ++j) {
        out += ",";
        if (j < r.dim()) out += format_double(r.covariance(i, j));
      }
    }
    out += "\n";
  }
  atomic_write(path, out);
}

inline std::vector<InnovationRecord> read_innovations_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  std::vector<InnovationRecord> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    InnovationRecord r;
    r.timestamp = parse_double(row.at(0));
    r.sensor = sensor_from_string(row.at(1));
    const int m = static_cast<int>(parse_double(row.at(2)));
    r.innovation = VecX(m);
    r.covariance = MatX::Zero(m, m);
    for (int i = 0; i < m; ++i) r.innovation[i] = parse_double(row.at(3 + static_cast<size_t>(i)));
    size_t col = 9;
    for (int i = 0; i < 6; ++i) {
      for (int j = i; j < 6; ++j, ++col) {
        if (j < m) {
          const double v = parse_double(row.at(col));
          r.covariance(i, j) = v;
          r.covariance(j, i) = v;
        }
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_predictions_csv(const std::filesystem::path& path,
                                  const std::vector<PredictionRow>& rows) {
  std::string out = "t_issue,t_target,";
  out += kVesselColumns;
  out += "\n";
  for (const auto& r : rows) {
    out += format_double(r.t_issue);
    out += ",";
    out += format_double(r.t_target);
    for (int i = 0; i < 12; ++i) {
      out += ",";
      out += format_double(r.vessel[i]);
    }
    out += "\n";
  }
  atomic_write(path, out);
}

inline std::vector<PredictionRow> read_predictions_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  std::vector<PredictionRow> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    PredictionRow r;
    r.t_issue = parse_double(row.at(0));
    r.t_target = parse_double(row.at(1));
    for (int i = 0; i < 12; ++i) r.vessel[i] = parse_double(row.at(2 + static_cast<size_t>(i)));
    out.push_back(r);
  }
  return out;
}

inline void write_rmse_csv(const std::filesystem::path& path, const std::vector<RmseRow>& rows) {
  std::string out = "series,offset_s,group,rmse,n\n";
  for (const auto& r : rows) {
    out += r.series;
    out += ",";
    if (r.offset_s >= 0.0) out += format_double(r.offset_s);
    out += "," + r.group + "," + format_double(r.rmse) + "," + std::to_string(r.n) + "\n";
  }
  atomic_write(path, out);
}

inline void write_validation_csv(const std::filesystem::path& path,
                                 const std::vector<ValidationRow>& rows) {
  std::string out = "sensor,group,test1_frac,test2_qbar,test2_r1,test2_r2,test2_pass,test3_frac,N\n";
  for (const auto& r : rows) {
    out += r.sensor + "," + r.group + ",";
    out += format_double(r.report.test1_fraction) + ",";
    out += format_double(r.report.test2_qbar) + ",";
    out += format_double(r.report.test2_r1) + ",";
    out += format_double(r.report.test2_r2) + ",";
    out += r.report.test2_pass ? "1" : "0";
    out += ",";
    out += format_double(r.report.test3_fraction) + ",";
    out += std::to_string(r.report.n) + "\n";
  }
  atomic_write(path, out);
}

inline std::string render_text_report(const std::vector<ReportBundle>& bundles) {
  char buf[256];
  std::string out = "run report\n==========\n";
  for (const auto& b : bundles) {
    out += "\nfilter: " + b.filter + "\n";
    out += "  late measurements dropped: " + std::to_string(b.late_dropped) + "\n";
    out += "  RMSE\n";
    for (const auto& r : b.rmse) {
      out += "    " + r.series;
      if (r.offset_s >= 0.0) {
        std::snprintf(buf, sizeof(buf), "+%.2fs", r.offset_s);
        out += buf;
      }
      std::snprintf(buf, sizeof(buf), " %s = %.6f (n=%ld)\n", r.group.c_str(), r.rmse, r.n);
      out += buf;
    }
    out += "  innovation tests\n";
    for (const auto& v : b.validation) {
      const auto& t = v.report;
      const double n = static_cast<double>(t.n);
      std::snprintf(buf, sizeof(buf),
                    "    %s %s: test1 %.4f, test2 qbar %.4f of [%.4f, %.4f] "
                    "(N*qbar %.1f of [%.1f, %.1f]) %s, test3 %.4f, N=%d\n",
                    v.sensor.c_str(), v.group.c_str(), t.test1_fraction, t.test2_qbar, t.test2_r1,
                    t.test2_r2, n * t.test2_qbar, n * t.test2_r1, n * t.test2_r2,
                    t.test2_pass ? "pass" : "FAIL", t.test3_fraction, t.n);
      out += buf;
    }
  }
  return out;
}

/// Computes reports for every filter output and writes the report files.
inline std::vector<ReportBundle> emit_report(const RunArtifacts& art,
                                             const TruthTrajectory& truth,
                                             const EstimationResult& result,
                                             double prediction_dt, double alpha = 0.05) {
  std::vector<ReportBundle> bundles;
  for (const auto* out : {&result.nonlinear, &result.linear}) {
    if (!out->has_value()) continue;
    ReportBundle b = build_report(truth, **out, prediction_dt, alpha);
    write_rmse_csv(art.rmse_path(b.filter), b.rmse);
    write_validation_csv(art.validation_path(b.filter), b.validation);
    bundles.push_back(std::move(b));
  }
  atomic_write(art.report_path(), render_text_report(bundles));
  return bundles;
}

/// Per-group vessel-state RMSE between two aligned estimate series.
inline std::vector<RmseRow> compare_estimates(const std::vector<std::pair<double, Vec12>>& a,
                                              const std::vector<std::pair<double, Vec12>>& b) {
  std::map<long, Vec12> b_by_tick;
  for (const auto& [t, v] : b) b_by_tick[std::llround(t * 1e9)] = v;
  std::vector<Vec12> sa, sb;
  for (const auto& [t, v] : a) {
    auto it = b_by_tick.find(std::llround(t * 1e9));
    if (it == b_by_tick.end()) continue;
    sa.push_back(v);
    sb.push_back(it->second);
  }
  if (sa.empty()) throw ConfigError("estimate series share no timestamps");
  std::vector<RmseRow> rows;
  for (const auto& g : kVesselGroups) {
    std::vector<VecX> ea, eb;
    for (size_t i = 0; i < sa.size(); ++i) {
      ea.push_back(sa[i].segment<3>(g.offset));
      eb.push_back(sb[i].segment<3>(g.offset));
    }
    RmseRow row;
    row.series = "difference";
    row.group = g.name;
    row.rmse = vector_rmse(ea, eb, detail::wrap_channels_for_group(g.angles));
    row.n = static_cast<long>(ea.size());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace marlin
