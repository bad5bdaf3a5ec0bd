#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "spinsim/fft.hpp"
#include "spinsim/grid.hpp"
#include "spinsim/spectral.hpp"
#include "spinsim/state.hpp"

using namespace spinsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Field white_noise(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Field f(n);
  for (auto& v : f) v = Complex(dist(gen), dist(gen));
  return f;
}

double max_pointwise_diff(const Field& a, const Field& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("make_grid satisfies the definitional invariants") {
  const Grid1D g = make_grid(32.0, 16);
  CHECK(g.n_points == 16);
  CHECK_THAT(g.dz, WithinRel(2.0, 1e-15));
  CHECK_THAT(g.z[0], WithinAbs(-16.0, 1e-15));
  CHECK_THAT(g.z[8], WithinAbs(0.0, 1e-15));
  for (int i = 0; i < 16; ++i)
    CHECK_THAT(g.z[i], WithinAbs(g.z_min + i * g.dz, 1e-14));
  CHECK(g.k[0] == 0.0);  // DC component
  double kmax = 0;
  for (double k : g.k) kmax = std::max(kmax, std::abs(k));
  CHECK_THAT(kmax, WithinRel(constants::pi / g.dz, 1e-14));  // Nyquist
  // signed-index ordering
  CHECK_THAT(g.k[1], WithinRel(2.0 * constants::pi / 32.0, 1e-14));
  CHECK_THAT(g.k[15], WithinRel(-2.0 * constants::pi / 32.0, 1e-14));
}

TEST_CASE("make_grid rejects invalid sizes and extents") {
  CHECK_THROWS_AS(make_grid(10.0, 100), ValidationError);  // not a power of two
  CHECK_THROWS_AS(make_grid(10.0, 8), ValidationError);    // too small
  CHECK_THROWS_AS(make_grid(-5.0, 64), ValidationError);
  // Thomas-Fermi guard with paper-scale couplings: R_TF ~ 17.9 a_z.
  const SimCouplings c{0.192530519011, -9.54e-4};
  CHECK_THROWS_AS(make_grid(40.0, 1024, c, 20000.0), ValidationError);
  CHECK_NOTHROW(make_grid(51.0, 1024, c, 20000.0));
  CHECK_NOTHROW(make_grid(40.0, 1024, SimCouplings{0.0, 0.0}, 20000.0));
}

TEST_CASE("forward then inverse transform is the identity on white noise") {
  const int n = 256;
  FftPlan plan(n);
  const Field original = white_noise(n, 12345);
  Field f = original;
  plan.forward(f);
  plan.inverse(f);
  double scale = 0;
  for (const auto& v : original) scale = std::max(scale, std::abs(v));
  CHECK(max_pointwise_diff(f, original) / scale < 1e-13);
}

TEST_CASE("transform is unitary (Parseval)") {
  const int n = 128;
  FftPlan plan(n);
  Field f = white_noise(n, 777);
  double before = 0;
  for (const auto& v : f) before += std::norm(v);
  plan.forward(f);
  double after = 0;
  for (const auto& v : f) after += std::norm(v);
  CHECK_THAT(after, WithinRel(before, 1e-13));
}

TEST_CASE("plan rejects mismatched field lengths") {
  FftPlan plan(64);
  Field f(32);
  CHECK_THROWS_AS(plan.forward(f), ValidationError);
}

TEST_CASE("kinetic half step leaves a constant field unchanged") {
  const Grid1D g = make_grid(20.0, 64);
  SpinorState s = make_state(g);
  for (auto& v : s.psi[kZero]) v = Complex(0.7, -0.2);
  const SpinorState out = kinetic_half_step(s, 0.3);
  for (const auto& v : out.psi[kZero]) {
    CHECK_THAT(v.real(), WithinAbs(0.7, 1e-14));
    CHECK_THAT(v.imag(), WithinAbs(-0.2, 1e-14));
  }
}

TEST_CASE("plane waves are eigenstates with phase exp(-i k^2 dt/4)") {
  const Grid1D g = make_grid(16.0, 64);
  const double k = g.k[5];
  const double dt = 0.17;
  SpinorState s = make_state(g);
  for (int i = 0; i < g.n_points; ++i)
    s.psi[kPlus][i] = std::exp(Complex(0.0, k * g.z[i]));
  const SpinorState out = kinetic_half_step(s, dt);
  const Complex expected_phase = std::exp(Complex(0.0, -k * k * dt / 4.0));
  for (int i = 0; i < g.n_points; ++i) {
    const Complex want = expected_phase * s.psi[kPlus][i];
    CHECK_THAT(std::abs(out.psi[kPlus][i] - want), WithinAbs(0.0, 1e-13));
    CHECK_THAT(std::abs(out.psi[kPlus][i]), WithinAbs(1.0, 1e-13));
  }
}

TEST_CASE("kinetic half step preserves per-component norm") {
  const Grid1D g = make_grid(30.0, 128);
  SpinorState s = make_state(g);
  std::mt19937 gen(42);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int m : kComponents)
    for (auto& v : s.psi[m]) v = Complex(dist(gen), dist(gen));
  const std::array<double, 3> before = {component_atoms(s, 0),
                                        component_atoms(s, 1),
                                        component_atoms(s, 2)};
  const SpinorState out = kinetic_half_step(s, 0.05);
  for (int m : kComponents)
    CHECK_THAT(component_atoms(out, m), WithinRel(before[m], 1e-13));
}

TEST_CASE("two half steps compose to one full step exactly") {
  const Grid1D g = make_grid(24.0, 128);
  SpinorState s = make_state(g);
  std::mt19937 gen(9);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int m : kComponents)
    for (auto& v : s.psi[m]) v = Complex(dist(gen), dist(gen));
  const double dt = 0.21;
  const SpinorState twice = kinetic_half_step(kinetic_half_step(s, dt), dt);
  const SpinorState once = kinetic_half_step(s, 2.0 * dt);
  double scale = std::sqrt(max_density(s));
  for (int m : kComponents)
    CHECK(max_pointwise_diff(twice.psi[m], once.psi[m]) / scale < 1e-13);
}

TEST_CASE("free gaussian packet disperses with the analytic width") {
  // sigma(t) = sigma0 sqrt(1 + (t/(2 sigma0^2))^2) in oscillator units.
  const Grid1D g = make_grid(40.0, 256);
  const double sigma0 = 1.0;
  SpinorState s = make_state(g);
  for (int i = 0; i < g.n_points; ++i)
    s.psi[kZero][i] = std::exp(-g.z[i] * g.z[i] / (4.0 * sigma0 * sigma0));
  const double t_total = 2.0;
  FftPlan plan(g.n_points);
  const auto table = kinetic_half_step_table(g, 0.2);  // 20 half steps of 0.1
  for (int it = 0; it < 20; ++it) kinetic_half_step(s, table, plan);

  double w = 0, nrm = 0;
  for (int i = 0; i < g.n_points; ++i) {
    const double d = std::norm(s.psi[kZero][i]);
    w += g.z[i] * g.z[i] * d;
    nrm += d;
  }
  const double sigma_num = std::sqrt(w / nrm);
  const double sigma_ana =
      sigma0 * std::sqrt(1.0 + std::pow(t_total / (2.0 * sigma0 * sigma0), 2));
  CHECK_THAT(sigma_num, WithinRel(sigma_ana, 1e-6));
}

TEST_CASE("spectral second derivative matches plane-wave eigenvalues") {
  const Grid1D g = make_grid(12.0, 64);
  FftPlan plan(g.n_points);
  const double k = g.k[7];
  Field f(g.n_points);
  for (int i = 0; i < g.n_points; ++i)
    f[i] = std::exp(Complex(0.0, k * g.z[i]));
  const Field d2 = second_derivative(f, g, plan);
  for (int i = 0; i < g.n_points; ++i)
    CHECK_THAT(std::abs(d2[i] + k * k * f[i]), WithinAbs(0.0, 1e-11));
}
