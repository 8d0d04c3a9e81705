#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "marlin/angles.hpp"
#include "marlin/errors.hpp"
#include "marlin/measurement.hpp"
#include "marlin/types.hpp"

namespace marlin {

namespace detail {

/// Regularized lower incomplete gamma P(a, x), series branch (x < a + 1).
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 10000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

/// Regularized upper incomplete gamma Q(a, x), continued-fraction branch.
inline double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw DomainError("gamma shape must be positive");
  if (x < 0.0) throw DomainError("gamma argument must be non-negative");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

/// Standard normal quantile (Acklam's rational approximation, refined once
/// with a Halley step on erfc).
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("probability must be in (0, 1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace detail

/// Chi-squared CDF with `dof` degrees of freedom at x.
inline double chi2_cdf(int dof, double x) {
  if (dof < 1) throw DomainError("degrees of freedom must be at least 1");
  if (x <= 0.0) return 0.0;
  return detail::regularized_gamma_p(0.5 * dof, 0.5 * x);
}

/// Chi-squared quantile: Wilson-Hilferty initial guess refined by a
/// bracket-safeguarded Newton iteration on the regularized incomplete gamma.
inline double chi2_quantile(int dof, double p) {
  if (dof < 1) throw DomainError("degrees of freedom must be at least 1");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("probability must be in (0, 1)");

  const double n = static_cast<double>(dof);
  const double z = detail::normal_quantile(p);
  const double wh = 1.0 - 2.0 / (9.0 * n) + z * std::sqrt(2.0 / (9.0 * n));
  double x = n * wh * wh * wh;
  if (!(x > 0.0)) x = n * std::exp((std::log(p) + std::lgamma(0.5 * n) +
                                    0.5 * n * std::numbers::ln2) / (0.5 * n)) / 2.0;
  if (!(x > 0.0) || !std::isfinite(x)) x = n;

  const double a = 0.5 * n;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const double cdf = chi2_cdf(dof, x);
    if (cdf > p) {
      hi = x;
    } else {
      lo = x;
    }
    const double log_pdf = (a - 1.0) * std::log(0.5 * x) - 0.5 * x - std::lgamma(a) -
                           std::numbers::ln2;
    const double pdf = std::exp(log_pdf);
    double next;
    if (pdf > 0.0 && std::isfinite(pdf)) {
      next = x + (p - cdf) / pdf;
    } else {
      next = std::numeric_limits<double>::quiet_NaN();
    }
    if (!(next > lo) || !(next < hi) || !std::isfinite(next)) {
      next = std::isfinite(hi) ? 0.5 * (lo + hi) : std::max(2.0 * x, 1.0);
    }
    if (std::abs(next - x) <= 1e-14 * std::max(1.0, x)) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

/// Consistency-test summary for one sensor/channel-group.
struct TestReport {
  double test1_fraction{0.0};
  double test2_qbar{0.0};
  double test2_r1{0.0};
  double test2_r2{0.0};
  bool test2_pass{false};
  double test3_fraction{0.0};
  int n{0};
  int m{0};
  double alpha{0.05};
};

/// Vector RMSE over aligned series: sqrt of the mean squared error norm.
/// Channels listed in angle_channels difference-wrap across +-pi.
inline double vector_rmse(const std::vector<VecX>& estimates, const std::vector<VecX>& truth,
                          const std::vector<int>& angle_channels = {}) {
  if (estimates.size() != truth.size()) {
    throw LengthMismatchError("estimate and truth series must have equal length");
  }
  if (estimates.empty()) throw LengthMismatchError("series must be non-empty");
  double acc = 0.0;
  for (size_t i = 0; i < estimates.size(); ++i) {
    if (estimates[i].size() != truth[i].size()) {
      throw LengthMismatchError("estimate and truth vectors must have equal dimension");
    }
    VecX e = estimates[i] - truth[i];
    for (int a : angle_channels) e[a] = wrap_angle_diff(estimates[i][a], truth[i][a]);
    acc += e.squaredNorm();
  }
  return std::sqrt(acc / static_cast<double>(estimates.size()));
}

/// Test 1: per-channel fraction of |zeta_i| <= 2 sqrt(S_ii), averaged over
/// the group's channels.
inline double test1_magnitude(const std::vector<InnovationRecord>& records) {
  if (records.empty()) throw EmptyInputError("innovation magnitude test needs records");
  const int m = records.front().dim();
  std::vector<long> inside(m, 0);
  for (const auto& r : records) {
    if (r.dim() != m) throw DimensionMismatchError("innovation records must share dimension");
    for (int i = 0; i < m; ++i) {
      if (std::abs(r.innovation[i]) <= 2.0 * std::sqrt(r.covariance(i, i))) ++inside[i];
    }
  }
  double frac = 0.0;
  for (int i = 0; i < m; ++i) {
    frac += static_cast<double>(inside[i]) / static_cast<double>(records.size());
  }
  return frac / static_cast<double>(m);
}

struct Test2Result {
  double qbar{0.0};
  double r1{0.0};
  double r2{0.0};
  bool pass{false};
};

/// Test 2: mean normalized innovation squared against the central (1-alpha)
/// chi-squared interval for N m degrees of freedom, expressed on the qbar
/// scale (interval endpoints divided by N).
inline Test2Result test2_nis(const std::vector<InnovationRecord>& records, double alpha) {
  if (records.empty()) throw EmptyInputError("NIS test needs records");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must be in (0, 1)");
  const int m = records.front().dim();
  double sum = 0.0;
  for (const auto& r : records) {
    if (r.dim() != m) throw DimensionMismatchError("innovation records must share dimension");
    Eigen::LLT<MatX> llt(r.covariance);
    if (llt.info() != Eigen::Success) {
      throw CovarianceNotPdError("innovation covariance not positive definite in NIS test");
    }
    sum += r.innovation.dot(llt.solve(r.innovation));
  }
  const auto n = static_cast<double>(records.size());
  Test2Result out;
  out.qbar = sum / n;
  const int dof = static_cast<int>(records.size()) * m;
  out.r1 = chi2_quantile(dof, alpha / 2.0) / n;
  out.r2 = chi2_quantile(dof, 1.0 - alpha / 2.0) / n;
  out.pass = out.qbar >= out.r1 && out.qbar <= out.r2;
  return out;
}

/// Test 3: fraction of time-averaged innovation autocorrelations (normalized
/// by lag zero) within +-2/sqrt(N) for lags 1..max_lag.
inline double test3_whiteness(const std::vector<InnovationRecord>& records, int max_lag) {
  const auto n = static_cast<long>(records.size());
  if (max_lag < 1) throw DomainError("whiteness test needs max_lag >= 1");
  if (n <= max_lag) throw InsufficientDataError("whiteness test needs more records than lags");
  const int m = records.front().dim();
  for (const auto& r : records) {
    if (r.dim() != m) throw DimensionMismatchError("innovation records must share dimension");
  }

  double corr0 = 0.0;
  for (const auto& r : records) corr0 += r.innovation.squaredNorm();
  corr0 /= static_cast<double>(n);
  if (corr0 == 0.0) throw ZeroEnergyError("zero innovation energy in whiteness test");

  const double band = 2.0 / std::sqrt(static_cast<double>(n));
  long inside = 0;
  for (int tau = 1; tau <= max_lag; ++tau) {
    double corr = 0.0;
    for (long k = 0; k + tau < n; ++k) {
      corr += records[k].innovation.dot(records[k + tau].innovation);
    }
    corr /= static_cast<double>(n);
    if (std::abs(corr / corr0) <= band) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(max_lag);
}

/// Default lag range for the whiteness test.
inline int default_max_lag(long n_records) {
  return static_cast<int>(std::min<long>(n_records - 1, 200));
}

/// Extracts a channel sub-range (offset, dim) from each record, slicing the
/// innovation vector and the matching covariance block.
inline std::vector<InnovationRecord> slice_records(const std::vector<InnovationRecord>& records,
                                                   int offset, int dim) {
  std::vector<InnovationRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (offset + dim > r.dim()) {
      throw DimensionMismatchError("record slice exceeds innovation dimension");
    }
    InnovationRecord s;
    s.timestamp = r.timestamp;
    s.sensor = r.sensor;
    s.innovation = r.innovation.segment(offset, dim);
    s.covariance = r.covariance.block(offset, offset, dim, dim);
    out.push_back(std::move(s));
  }
  return out;
}

/// Runs all three innovation tests on one record group.
inline TestReport run_consistency_tests(const std::vector<InnovationRecord>& records,
                                        double alpha = 0.05) {
  TestReport report;
  report.n = static_cast<int>(records.size());
  report.m = records.empty() ? 0 : records.front().dim();
  report.alpha = alpha;
  report.test1_fraction = test1_magnitude(records);
  const Test2Result t2 = test2_nis(records, alpha);
  report.test2_qbar = t2.qbar;
  report.test2_r1 = t2.r1;
  report.test2_r2 = t2.r2;
  report.test2_pass = t2.pass;
  report.test3_fraction = test3_whiteness(records, default_max_lag(static_cast<long>(records.size())));
  return report;
}

}  // namespace marlin
