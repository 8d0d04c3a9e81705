#include <catch2/catch_amalgamated.hpp>
#include <Eigen/Eigenvalues>

#include "marlin/estimation.hpp"
#include "marlin/scenario.hpp"
#include "marlin/sensors.hpp"
#include "marlin/waves.hpp"
#include "oracles.hpp"

using namespace marlin;

namespace {

VesselParams default_params() { return VesselConfig{}.make_params(); }

/// Integrates one nonlinear component with RK4.
std::vector<Vec3> integrate_component(NonlinearWaveComponent c, double dt, long steps) {
  std::vector<Vec3> out;
  out.reserve(steps + 1);
  out.push_back({c.x1, c.x2, c.x3});
  VecX x(3);
  x << c.x1, c.x2, c.x3;
  auto deriv = [&](const VecX& s) {
    NonlinearWaveComponent tmp{s[0], s[1], s[2], c.gamma};
    VecX d(3);
    d = nonlinear_wave_derivative(tmp);
    return d;
  };
  for (long k = 0; k < steps; ++k) {
    x = rk4_step(deriv, x, dt);
    out.push_back({x[0], x[1], x[2]});
  }
  return out;
}

}  // namespace

TEST_CASE("amplitude_from_spectrum") {
  CHECK(amplitude_from_spectrum(0.0, 0.1) == 0.0);
  CHECK(amplitude_from_spectrum(2.0, 0.25) == Catch::Approx(1.0).margin(1e-15));
  CHECK(amplitude_from_spectrum(0.7, 0.1) == Catch::Approx(std::sqrt(0.14)).margin(1e-15));
  CHECK_THROWS_AS(amplitude_from_spectrum(-0.1, 0.1), DomainError);
  CHECK_THROWS_AS(amplitude_from_spectrum(1.0, 0.0), DomainError);
}

TEST_CASE("wave_elevation") {
  {
    VecX w(2), s(2), dw(2), eps(2);
    w << 1.0, 2.0;
    s << 0.0, 0.0;
    dw << 0.1, 0.1;
    eps << 0.3, -0.7;
    const WaveSpectrumSample spectrum(w, s, dw, eps);
    CHECK(wave_elevation(spectrum, 0.0) == 0.0);
    CHECK(wave_elevation(spectrum, 3.7) == 0.0);
  }
  {
    // single component with amplitude 1 (S dw = 1/2) at phase 0
    VecX w(1), s(1), dw(1), eps(1);
    w << 2.0;
    s << 2.0;
    dw << 0.25;
    eps << 0.0;
    const WaveSpectrumSample spectrum(w, s, dw, eps);
    CHECK(wave_elevation(spectrum, 0.0) == Catch::Approx(1.0).margin(1e-15));
  }
  {
    VecX w(3), s(3), dw(3), eps(3);
    w << 0.8, 1.4, 2.1;
    s << 0.5, 1.2, 0.3;
    dw << 0.2, 0.2, 0.2;
    eps << 0.1, -1.0, 2.2;
    const WaveSpectrumSample spectrum(w, s, dw, eps);
    const double t = 1.7;
    double expected = 0.0;
    for (int k = 0; k < 3; ++k) {
      expected += std::sqrt(2.0 * s[k] * dw[k]) * std::cos(w[k] * t + eps[k]);
    }
    CHECK(wave_elevation(spectrum, t) == Catch::Approx(expected).margin(1e-15));
  }
  {
    VecX w(2), s(2), dw(2), eps(2);
    w << 2.0, 1.0;  // not increasing
    s << 1.0, 1.0;
    dw << 0.1, 0.1;
    eps << 0.0, 0.0;
    CHECK_THROWS_AS(WaveSpectrumSample(w, s, dw, eps), DomainError);
  }
}

TEST_CASE("nonlinear_wave_derivative") {
  CHECK(nonlinear_wave_derivative({0.0, 0.0, 4.0, 0.0}).norm() == 0.0);

  const Vec3 d = nonlinear_wave_derivative({kPi / 2, 1.0, 4.0, 0.5});
  CHECK(d[0] == 1.0);
  CHECK(d[1] == Catch::Approx(-4.5).margin(1e-15));
  CHECK(d[2] == 0.0);
}

TEST_CASE("nonlinear component oscillates at sqrt(x3)") {
  const double omega = 1.7;
  const double period = 2.0 * kPi / omega;
  const double dt = period / 400.0;
  const long steps = static_cast<long>(50.0 * period / dt);
  const auto traj = integrate_component({0.01, 0.0, omega * omega, 0.0}, dt, steps);

  // period from the x2 zero crossings
  std::vector<double> crossings;
  for (size_t k = 1; k < traj.size(); ++k) {
    const double a = traj[k - 1][1], b = traj[k][1];
    if (a == 0.0 || a * b < 0.0) {
      const double frac = a / (a - b);
      crossings.push_back((static_cast<double>(k - 1) + frac) * dt);
    }
  }
  REQUIRE(crossings.size() > 10);
  const double measured =
      2.0 * (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
  CHECK(std::abs(measured - period) / period < 0.01);
}

TEST_CASE("nonlinear component conserves the pendulum first integral") {
  const double omega = 1.3;
  const double period = 2.0 * kPi / omega;
  const double dt = period / 200.0;
  const long steps = static_cast<long>(100.0 * period / dt);
  const NonlinearWaveComponent c0{0.15, 0.0, omega * omega, 0.0};
  const auto traj = integrate_component(c0, dt, steps);

  auto energy = [&](const Vec3& s) { return 0.5 * s[1] * s[1] + s[2] * (1.0 - std::cos(s[0])); };
  const double e0 = energy(traj.front());
  double max_drift = 0.0;
  for (const auto& s : traj) max_drift = std::max(max_drift, std::abs(energy(s) - e0) / e0);
  CHECK(max_drift < 1e-6);
}

TEST_CASE("damped component amplitude decays across peaks") {
  const double omega = 1.5;
  const double period = 2.0 * kPi / omega;
  const double dt = period / 400.0;
  const auto traj = integrate_component({0.2, 0.0, omega * omega, 0.08}, dt,
                                        static_cast<long>(20.0 * period / dt));
  std::vector<double> peaks;
  for (size_t k = 1; k + 1 < traj.size(); ++k) {
    if (traj[k][1] > traj[k - 1][1] && traj[k][1] >= traj[k + 1][1]) peaks.push_back(traj[k][1]);
  }
  REQUIRE(peaks.size() > 5);
  for (size_t k = 1; k < peaks.size(); ++k) CHECK(peaks[k] <= peaks[k - 1] + 1e-12);
}

TEST_CASE("bank_output sums component outputs") {
  CHECK(bank_output({}) == 0.0);

  NonlinearWaveBank bank;
  bank.components.push_back({0.0, 0.3, 1.0, 0.0});
  bank.components.push_back({0.0, -0.1, 1.0, 0.0});
  CHECK(bank_output(bank) == Catch::Approx(0.2).margin(1e-15));

  Rng rng(4);
  NonlinearWaveBank big;
  double expected = 0.0;
  for (int k = 0; k < 5; ++k) {
    const double x2 = rng.gaussian();
    big.components.push_back({rng.gaussian(), x2, rng.uniform() + 0.5, 0.0});
    expected += x2;
  }
  CHECK(bank_output(big) == Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("full_nonlinear_derivative") {
  const VesselParams params = default_params();

  AugmentedNonlinearState rest;
  for (auto& bank : rest.banks) bank.components.push_back({0.0, 0.0, 1.0, 0.0});
  CHECK(full_nonlinear_derivative(rest, params).norm() == 0.0);

  // banks at rest, vessel displaced: equals the wave-free derivative padded
  AugmentedNonlinearState displaced = rest;
  displaced.pose = EulerPose{0.3, -0.2, 0.4, 0.05, -0.08, 0.7};
  displaced.twist = BodyTwist{0.5, -0.1, 0.2, 0.02, -0.03, 0.01};
  const VecX d = full_nonlinear_derivative(displaced, params);
  const Vec12 base = nonlinear_derivative(displaced.pose, displaced.twist, params);
  CHECK((d.head<12>() - base).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(d.tail(d.size() - 12).cwiseAbs().maxCoeff() == 0.0);

  // random state: twist derivative is the superposition of vessel dynamics
  // and per-axis bank outputs
  Rng rng(9);
  AugmentedNonlinearState s = displaced;
  for (auto& bank : s.banks) {
    bank.components.clear();
    const int n = 1 + static_cast<int>(rng.uniform() * 3);
    for (int k = 0; k < n; ++k) {
      bank.components.push_back({rng.gaussian(), rng.gaussian(), 1.0 + rng.uniform(),
                                 0.1 * rng.uniform()});
    }
  }
  const VecX ds = full_nonlinear_derivative(s, params);
  const Vec12 vessel_only = nonlinear_derivative(s.pose, s.twist, params);
  for (int a = 0; a < 6; ++a) {
    CHECK(ds[6 + a] ==
          Catch::Approx(vessel_only[6 + a] + bank_output(s.banks[a])).margin(1e-12));
  }

  // the wave sub-state derivative is independent of pose and twist
  AugmentedNonlinearState other = s;
  other.pose = EulerPose{9.0, 1.0, -2.0, 0.3, 0.2, -1.0};
  other.twist = BodyTwist{-1.0, 0.4, 0.1, 0.2, -0.1, 0.05};
  const VecX d_other = full_nonlinear_derivative(other, params);
  CHECK((ds.tail(ds.size() - 12) - d_other.tail(d_other.size() - 12)).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("build_linear_wave_bank") {
  {
    const LinearWaveBank bank = build_linear_wave_bank({{3.0, 0.0}});
    MatX expected(2, 2);
    expected << 0, 1, -9, 0;
    CHECK(bank.a.isApprox(expected, 1e-15));
    const Eigen::EigenSolver<MatX> eig(bank.a);
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(eig.eigenvalues()[i].real()) < 1e-12);
      CHECK(std::abs(std::abs(eig.eigenvalues()[i].imag()) - 3.0) < 1e-12);
    }
  }
  {
    const LinearWaveBank bank = build_linear_wave_bank({{1.0, 0.1}, {2.0, 0.2}});
    CHECK(bank.a.rows() == 4);
    CHECK(bank.a.topRightCorner(2, 2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(bank.a.bottomLeftCorner(2, 2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(bank.c.size() == 4);
  }
  {
    const LinearWaveBank bank = build_linear_wave_bank({{2.0, 0.1}});
    CHECK(bank.a(1, 0) == Catch::Approx(-4.0).margin(1e-15));
    CHECK(bank.a(1, 1) == Catch::Approx(-0.4).margin(1e-15));
  }
  CHECK_THROWS_AS(build_linear_wave_bank({{0.0, 0.1}}), DomainError);
  CHECK_THROWS_AS(build_linear_wave_bank({{-1.0, 0.1}}), DomainError);
  CHECK_THROWS_AS(build_linear_wave_bank({{1.0, -0.1}}), DomainError);
}

TEST_CASE("build_full_linear_system structure") {
  VesselConfig cfg;
  cfg.damping = {};
  cfg.restoring = {};
  const VesselParams params = cfg.make_params();

  std::array<LinearWaveBank, 6> banks;
  for (auto& b : banks) b = build_linear_wave_bank({{1.0, 0.0}});
  const MatX a = build_full_linear_system(params, banks);
  REQUIRE(a.rows() == 24);

  // expected nonzero set enumerated independently from the block pattern
  std::vector<std::pair<int, int>> expected;
  for (int i = 0; i < 6; ++i) expected.emplace_back(i, 6 + i);          // kinematic identity
  for (int bank = 0; bank < 6; ++bank) {
    expected.emplace_back(6 + bank, 12 + 2 * bank + 1);                 // output selector
    expected.emplace_back(12 + 2 * bank, 12 + 2 * bank + 1);            // oscillator x1dot
    expected.emplace_back(12 + 2 * bank + 1, 12 + 2 * bank);            // oscillator x2dot
  }
  long nonzeros = 0;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      if (a(i, j) != 0.0) ++nonzeros;
    }
  }
  CHECK(nonzeros == static_cast<long>(expected.size()));
  for (const auto& [i, j] : expected) CHECK(a(i, j) != 0.0);

  // degenerate empty banks
  std::array<LinearWaveBank, 6> empty;
  for (auto& b : empty) b = build_linear_wave_bank({});
  CHECK_THROWS_AS(build_full_linear_system(params, empty), MismatchedBankSizesError);
  const MatX fallback = build_full_linear_system(params, empty, true);
  CHECK(fallback.rows() == 12);
  CHECK(fallback.isApprox(build_linear_system(params), 1e-15));

  std::array<LinearWaveBank, 6> mismatched = banks;
  mismatched[3] = build_linear_wave_bank({{1.0, 0.0}, {2.0, 0.0}});
  CHECK_THROWS_AS(build_full_linear_system(params, mismatched), MismatchedBankSizesError);
}

TEST_CASE("build_full_linear_system routing block matches independent assembly") {
  const VesselParams params = default_params();
  std::array<LinearWaveBank, 6> banks;
  const std::vector<std::vector<std::pair<double, double>>> comps = {
      {{0.9, 0.0}, {1.7, 0.05}}, {{1.0, 0.0}, {1.9, 0.0}}, {{1.3, 0.1}, {2.2, 0.0}},
      {{1.5, 0.0}, {2.4, 0.0}},  {{1.4, 0.0}, {2.3, 0.2}}, {{0.8, 0.0}, {1.6, 0.0}}};
  for (int i = 0; i < 6; ++i) banks[i] = build_linear_wave_bank(comps[i]);

  const MatX a = build_full_linear_system(params, banks);
  const int n_lc = 2;
  REQUIRE(a.rows() == 12 + 12 * n_lc);

  MatX c_wave = MatX::Zero(6, 12 * n_lc);
  for (int bank = 0; bank < 6; ++bank) {
    for (int k = 0; k < n_lc; ++k) c_wave(bank, 2 * n_lc * bank + 2 * k + 1) = 1.0;
  }
  CHECK(a.block(6, 12, 6, 12 * n_lc).isApprox(c_wave, 1e-15));
  CHECK(a.topLeftCorner<12, 12>().isApprox(build_linear_system(params), 1e-15));
  CHECK(a.bottomLeftCorner(12 * n_lc, 12).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("undamped wave eigenvalues sit on the imaginary axis") {
  const VesselParams params = default_params();
  std::array<LinearWaveBank, 6> banks;
  const double omegas[6] = {0.9, 1.0, 1.3, 1.5, 1.4, 0.8};
  for (int i = 0; i < 6; ++i) banks[i] = build_linear_wave_bank({{omegas[i], 0.0}});
  const MatX a = build_full_linear_system(params, banks);

  // the wave blocks are decoupled from the vessel rows, so their eigenvalues
  // survive in the full spectrum
  const Eigen::EigenSolver<MatX> eig(a);
  for (int i = 0; i < 6; ++i) {
    int found = 0;
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
      const auto ev = eig.eigenvalues()[k];
      if (std::abs(ev.imag() - omegas[i]) < 1e-9 && std::abs(ev.real()) < 1e-9) ++found;
    }
    CHECK(found >= 1);
  }
}

TEST_CASE("linear component conserves its quadratic invariant when undamped") {
  const double omega = 2.1;
  const double period = 2.0 * kPi / omega;
  const double dt = period / 200.0;
  const LinearWaveBank bank = build_linear_wave_bank({{omega, 0.0}});

  VecX x(2);
  x << 0.2, 0.0;
  auto deriv = [&](const VecX& s) { return (bank.a * s).eval(); };
  const double e0 = omega * omega * x[0] * x[0] + x[1] * x[1];
  double max_drift = 0.0;
  for (long k = 0; k < static_cast<long>(100.0 * period / dt); ++k) {
    x = rk4_step(deriv, x, dt);
    const double e = omega * omega * x[0] * x[0] + x[1] * x[1];
    max_drift = std::max(max_drift, std::abs(e - e0) / e0);
  }
  CHECK(max_drift < 1e-6);
}
