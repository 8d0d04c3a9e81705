#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "marlin/errors.hpp"
#include "marlin/types.hpp"
#include "marlin/vessel.hpp"

namespace marlin {

/// One nonlinear wave oscillator. x1 is the phase state, x2 the output
/// (an acceleration forcing on the driven axis), x3 the squared frequency
/// (constant in time), gamma the damping term.
struct NonlinearWaveComponent {
  double x1{0.0};
  double x2{0.0};
  double x3{0.0};
  double gamma{0.0};
};

/// Ordered components forcing one body axis.
struct NonlinearWaveBank {
  std::vector<NonlinearWaveComponent> components;
};

/// One linear wave oscillator with frequency omega0 and damping ratio lambda.
struct LinearWaveComponent {
  double omega0{0.0};
  double lambda{0.0};
  double x1{0.0};
  double x2{0.0};
};

/// Tabulated one-sided wave spectrum with component phases.
class WaveSpectrumSample {
 public:
  WaveSpectrumSample(VecX frequencies, VecX densities, VecX spacings, VecX phases)
      : frequencies_(std::move(frequencies)),
        densities_(std::move(densities)),
        spacings_(std::move(spacings)),
        phases_(std::move(phases)) {
    const auto n = frequencies_.size();
    if (densities_.size() != n || spacings_.size() != n || phases_.size() != n) {
      throw LengthMismatchError("spectrum sample vectors must have equal length");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k > 0 && !(frequencies_[k] > frequencies_[k - 1])) {
        throw DomainError("spectrum frequencies must be strictly increasing");
      }
      if (densities_[k] < 0.0) throw DomainError("spectral density must be non-negative");
      if (!(spacings_[k] > 0.0)) throw DomainError("spectrum spacing must be positive");
    }
  }

  [[nodiscard]] const VecX& frequencies() const { return frequencies_; }
  [[nodiscard]] const VecX& densities() const { return densities_; }
  [[nodiscard]] const VecX& spacings() const { return spacings_; }
  [[nodiscard]] const VecX& phases() const { return phases_; }
  [[nodiscard]] Eigen::Index size() const { return frequencies_.size(); }

 private:
  VecX frequencies_;
  VecX densities_;
  VecX spacings_;
  VecX phases_;
};

/// Component amplitude from spectral density: A = sqrt(2 S dw).
inline double amplitude_from_spectrum(double density, double spacing) {
  if (density < 0.0) throw DomainError("spectral density must be non-negative");
  if (!(spacing > 0.0)) throw DomainError("spectrum spacing must be positive");
  return std::sqrt(2.0 * density * spacing);
}

/// Wave elevation as the sum of harmonic components at time t.
inline double wave_elevation(const WaveSpectrumSample& spectrum, double t) {
  double zeta = 0.0;
  for (Eigen::Index k = 0; k < spectrum.size(); ++k) {
    const double amp = amplitude_from_spectrum(spectrum.densities()[k], spectrum.spacings()[k]);
    zeta += amp * std::cos(spectrum.frequencies()[k] * t + spectrum.phases()[k]);
  }
  return zeta;
}

/// State derivative of one nonlinear component:
/// (x2, -x3 sin(x1) - gamma x2, 0).
inline Vec3 nonlinear_wave_derivative(const NonlinearWaveComponent& c) {
  return {c.x2, -c.x3 * std::sin(c.x1) - c.gamma * c.x2, 0.0};
}

/// Summed output of a bank (each component contributes its x2).
inline double bank_output(const NonlinearWaveBank& bank) {
  double y = 0.0;
  for (const auto& c : bank.components) y += c.x2;
  return y;
}

/// Damping terms of the six per-axis banks; fixes the flat layout of the
/// wave-augmented nonlinear state:
/// (eta, nu, per axis u,v,w,p,q,r: per component (x1, x2, x3)).
class WaveBankLayout {
 public:
  WaveBankLayout() = default;
  explicit WaveBankLayout(std::array<std::vector<double>, 6> gammas) : gammas_(std::move(gammas)) {
    for (const auto& axis : gammas_) {
      for (double g : axis) {
        if (g < 0.0) throw DomainError("wave component damping must be non-negative");
      }
    }
  }

  [[nodiscard]] int components(int axis) const { return static_cast<int>(gammas_[axis].size()); }
  [[nodiscard]] double gamma(int axis, int k) const { return gammas_[axis][k]; }

  [[nodiscard]] int total_components() const {
    int n = 0;
    for (const auto& axis : gammas_) n += static_cast<int>(axis.size());
    return n;
  }

  [[nodiscard]] int state_dim() const { return 12 + 3 * total_components(); }

  /// Offset of axis' first component triple within the flat state.
  [[nodiscard]] int axis_offset(int axis) const {
    int off = 12;
    for (int i = 0; i < axis; ++i) off += 3 * components(i);
    return off;
  }

 private:
  std::array<std::vector<double>, 6> gammas_{};
};

/// Pose, twist and the six wave banks of the full nonlinear model.
struct AugmentedNonlinearState {
  EulerPose pose;
  BodyTwist twist;
  std::array<NonlinearWaveBank, 6> banks{};

  [[nodiscard]] WaveBankLayout layout() const {
    std::array<std::vector<double>, 6> gammas;
    for (int a = 0; a < 6; ++a) {
      for (const auto& c : banks[a].components) gammas[a].push_back(c.gamma);
    }
    return WaveBankLayout(std::move(gammas));
  }

  [[nodiscard]] VecX to_vector() const {
    const WaveBankLayout lay = layout();
    VecX x(lay.state_dim());
    x.head<6>() = pose.vec();
    x.segment<6>(6) = twist.vec();
    int off = 12;
    for (const auto& bank : banks) {
      for (const auto& c : bank.components) {
        x[off++] = c.x1;
        x[off++] = c.x2;
        x[off++] = c.x3;
      }
    }
    return x;
  }

  static AugmentedNonlinearState from_vector(const VecX& x, const WaveBankLayout& lay) {
    if (x.size() != lay.state_dim()) {
      throw DimensionMismatchError("augmented state vector does not match bank layout");
    }
    AugmentedNonlinearState s;
    s.pose = EulerPose::from_vec(x.head<6>());
    s.twist = BodyTwist::from_vec(x.segment<6>(6));
    int off = 12;
    for (int a = 0; a < 6; ++a) {
      s.banks[a].components.resize(lay.components(a));
      for (auto& c : s.banks[a].components) {
        c.x1 = x[off++];
        c.x2 = x[off++];
        c.x3 = x[off++];
        c.gamma = 0.0;
      }
      for (int k = 0; k < lay.components(a); ++k) s.banks[a].components[k].gamma = lay.gamma(a, k);
    }
    return s;
  }
};

/// Flat-state derivative of the wave-augmented nonlinear model. The bank
/// outputs add to nu_dot; the banks themselves evolve autonomously.
inline void full_nonlinear_derivative(const VecX& x, const VesselParams& params,
                                      const WaveBankLayout& lay, VecX& dx) {
  if (x.size() != lay.state_dim()) {
    throw DimensionMismatchError("augmented state vector does not match bank layout");
  }
  dx.resize(x.size());
  const EulerPose pose = EulerPose::from_vec(x.head<6>());
  const BodyTwist twist = BodyTwist::from_vec(x.segment<6>(6));
  dx.head<6>() = kinematics(pose, twist);
  Vec6 nudot = twist_derivative(pose, twist, params);

  int off = 12;
  for (int a = 0; a < 6; ++a) {
    double y_wave = 0.0;
    for (int k = 0; k < lay.components(a); ++k) {
      const double x1 = x[off];
      const double x2 = x[off + 1];
      const double x3 = x[off + 2];
      dx[off] = x2;
      dx[off + 1] = -x3 * std::sin(x1) - lay.gamma(a, k) * x2;
      dx[off + 2] = 0.0;
      y_wave += x2;
      off += 3;
    }
    nudot[a] += y_wave;
  }
  dx.segment<6>(6) = nudot;
}

inline VecX full_nonlinear_derivative(const AugmentedNonlinearState& state,
                                      const VesselParams& params) {
  const WaveBankLayout lay = state.layout();
  VecX dx;
  full_nonlinear_derivative(state.to_vector(), params, lay, dx);
  return dx;
}

/// Block-diagonal state matrix and concatenated output row of one linear bank.
struct LinearWaveBank {
  MatX a;                  // 2N x 2N
  Eigen::RowVectorXd c;    // 1 x 2N
  int n_components{0};
};

/// Assembles a linear bank from (omega0, lambda) pairs. Each component block
/// is [[0, 1], [-omega0^2, -2 lambda omega0]] with output selector (0, 1).
inline LinearWaveBank build_linear_wave_bank(
    const std::vector<std::pair<double, double>>& components) {
  const int n = static_cast<int>(components.size());
  LinearWaveBank bank;
  bank.n_components = n;
  bank.a = MatX::Zero(2 * n, 2 * n);
  bank.c = Eigen::RowVectorXd::Zero(2 * n);
  for (int k = 0; k < n; ++k) {
    const auto [omega0, lambda] = components[k];
    if (!(omega0 > 0.0)) throw DomainError("linear wave component frequency must be positive");
    if (lambda < 0.0) throw DomainError("linear wave component damping must be non-negative");
    bank.a(2 * k, 2 * k + 1) = 1.0;
    bank.a(2 * k + 1, 2 * k) = -omega0 * omega0;
    bank.a(2 * k + 1, 2 * k + 1) = -2.0 * lambda * omega0;
    bank.c(2 * k + 1) = 1.0;
  }
  return bank;
}

/// Output routing matrix of the six banks into the six nu_dot rows.
inline MatX linear_wave_output_matrix(const std::array<LinearWaveBank, 6>& banks) {
  const int n_lc = banks[0].n_components;
  MatX c = MatX::Zero(6, 12 * n_lc);
  for (int a = 0; a < 6; ++a) {
    c.block(a, 2 * n_lc * a, 1, 2 * n_lc) = banks[a].c;
  }
  return c;
}

/// Full linear wave-augmented system matrix. All six banks must have the
/// same component count; with allow_empty set, six empty banks degrade to
/// the plain 12-state vessel-parallel system.
inline MatX build_full_linear_system(const VesselParams& params,
                                     const std::array<LinearWaveBank, 6>& banks,
                                     bool allow_empty = false) {
  const int n_lc = banks[0].n_components;
  for (const auto& b : banks) {
    if (b.n_components != n_lc) {
      throw MismatchedBankSizesError("all six linear wave banks must have equal size");
    }
  }
  if (n_lc == 0 && !allow_empty) {
    throw MismatchedBankSizesError("linear wave banks are empty");
  }

  const Mat12 a_vp = build_linear_system(params);
  const int dim = 12 + 12 * n_lc;
  MatX a = MatX::Zero(dim, dim);
  a.topLeftCorner<12, 12>() = a_vp;
  if (n_lc == 0) return a;

  a.block(6, 12, 6, 12 * n_lc) = linear_wave_output_matrix(banks);
  for (int bank = 0; bank < 6; ++bank) {
    a.block(12 + 2 * n_lc * bank, 12 + 2 * n_lc * bank, 2 * n_lc, 2 * n_lc) = banks[bank].a;
  }
  return a;
}

}  // namespace marlin
