#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "spinsim/hamiltonian.hpp"
#include "spinsim/state.hpp"

using namespace spinsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SpinorState random_state(const Grid1D& g, unsigned seed, double amp = 1.0) {
  SpinorState s = make_state(g);
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(0.0, amp);
  for (int m : kComponents)
    for (auto& v : s.psi[m]) v = Complex(dist(gen), dist(gen));
  return s;
}

// d/dt int |psi_m|^2 dz contracted from the right-hand side.
double population_rate(const SpinorState& s, const std::array<Field, 3>& rhs,
                       int m) {
  double acc = 0;
  for (std::size_t i = 0; i < rhs[m].size(); ++i)
    acc += 2.0 * (std::conj(s.psi[m][i]) * rhs[m][i]).real();
  return acc * s.grid.dz;
}

double rate_scale(const SpinorState& s, const std::array<Field, 3>& rhs) {
  double acc = 0;
  for (int m : kComponents)
    for (std::size_t i = 0; i < rhs[m].size(); ++i)
      acc += 2.0 * std::abs(s.psi[m][i]) * std::abs(rhs[m][i]);
  return acc * s.grid.dz;
}

}  // namespace

TEST_CASE("external potential: barrier peak and harmonic term") {
  TrapSpec t;
  t.omega = 1.0;
  t.barrier_height = 7.0;
  t.barrier_sigma = 2.0;
  t.barrier_on = true;
  CHECK_THAT(v_ext(0.0, t), WithinRel(7.0, 1e-15));
  t.barrier_on = false;
  CHECK(v_ext(0.0, t) == 0.0);
  t.barrier_on = true;
  // z = sigma: harmonic term plus A/e.
  CHECK_THAT(v_ext(2.0, t), WithinRel(0.5 * 4.0 + 7.0 / std::exp(1.0), 1e-14));
  // even in z
  for (double z : {0.3, 1.7, 5.2})
    CHECK_THAT(v_ext(z, t), WithinRel(v_ext(-z, t), 1e-15));
}

TEST_CASE("trap validation") {
  TrapSpec t;
  t.barrier_height = -1.0;
  CHECK_THROWS_AS(validate(t), ValidationError);
  t = TrapSpec{};
  t.barrier_sigma = 0.0;
  CHECK_THROWS_AS(validate(t), ValidationError);
  t = TrapSpec{};
  t.omega = 0.0;
  CHECK_THROWS_AS(validate(t), ValidationError);
}

TEST_CASE("rhs reduces to the scalar equation when only m=0 is populated") {
  const Grid1D g = make_grid(16.0, 64);
  SpinorState s = make_state(g);
  std::mt19937 gen(5);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (auto& v : s.psi[kZero]) v = Complex(dist(gen), dist(gen));
  TrapSpec trap;
  trap.barrier_on = false;
  const SimCouplings c{0.8, -0.05};
  const auto rhs = interaction_rhs(s, trap, c);
  for (int i = 0; i < g.n_points; ++i) {
    CHECK(rhs[kPlus][i] == Complex(0.0, 0.0));
    CHECK(rhs[kMinus][i] == Complex(0.0, 0.0));
    const double n = std::norm(s.psi[kZero][i]);
    const Complex want =
        Complex(0.0, -1.0) * (v_ext(g.z[i], trap) + c.c0 * n) * s.psi[kZero][i];
    CHECK_THAT(std::abs(rhs[kZero][i] - want), WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("no m=0 atoms means no population transfer (binary-mixture limit)") {
  const Grid1D g = make_grid(16.0, 64);
  SpinorState s = random_state(g, 11);
  for (auto& v : s.psi[kZero]) v = Complex(0.0, 0.0);
  TrapSpec trap;
  const SimCouplings c{0.8, -0.05};
  const auto rhs = interaction_rhs(s, trap, c);
  const double scale = rate_scale(s, rhs);
  for (int m : {kPlus, kMinus})
    CHECK_THAT(population_rate(s, rhs, m) / scale, WithinAbs(0.0, 1e-14));
}

TEST_CASE("uniform real ground-configuration state is stationary in lambda_0") {
  // lambda = (0.25, 0.50, 0.25) with all-real phases and no potential: the
  // imaginary parts driving |psi_0|^2 cancel identically.
  const Grid1D g = make_grid(16.0, 64);
  SpinorState s = make_state(g);
  for (int i = 0; i < g.n_points; ++i) {
    s.psi[kPlus][i] = Complex(0.5, 0.0);
    s.psi[kZero][i] = Complex(std::sqrt(0.5), 0.0);
    s.psi[kMinus][i] = Complex(0.5, 0.0);
  }
  TrapSpec trap;
  trap.omega = 1.0;
  trap.barrier_on = false;
  SpinorState flat = s;  // evaluate with V = 0 by using z = 0 samples only
  const SimCouplings c{1.3, -0.07};
  const auto rhs = interaction_rhs(flat, trap, c);
  // The diagonal terms are real and the exchange products are real, so the
  // transfer rate vanishes exactly.
  CHECK(population_rate(flat, rhs, kZero) == 0.0);
  CHECK(population_rate(flat, rhs, kPlus) == 0.0);
  CHECK(population_rate(flat, rhs, kMinus) == 0.0);
}

TEST_CASE("rhs conserves total atoms and magnetization (contraction identity)") {
  const Grid1D g = make_grid(20.0, 128);
  TrapSpec trap;
  trap.barrier_height = 3.0;
  trap.barrier_sigma = 1.5;
  const SimCouplings c{0.9, 0.04};
  for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
    const SpinorState s = random_state(g, seed);
    const auto rhs = interaction_rhs(s, trap, c);
    const double scale = rate_scale(s, rhs);
    const double dn = population_rate(s, rhs, kPlus) +
                      population_rate(s, rhs, kZero) +
                      population_rate(s, rhs, kMinus);
    const double dm =
        population_rate(s, rhs, kPlus) - population_rate(s, rhs, kMinus);
    CHECK_THAT(dn / scale, WithinAbs(0.0, 1e-12));
    CHECK_THAT(dm / scale, WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("spin exchange only transfers population where the product overlaps") {
  const Grid1D g = make_grid(16.0, 64);
  SpinorState s = make_state(g);
  // psi_+ lives strictly on the left, psi_0 and psi_- strictly on the right.
  for (int i = 1; i < g.n_points / 2 - 2; ++i) s.psi[kPlus][i] = Complex(1.0, 0.4);
  for (int i = g.n_points / 2 + 2; i < g.n_points - 1; ++i) {
    s.psi[kZero][i] = Complex(0.7, -0.1);
    s.psi[kMinus][i] = Complex(0.3, 0.2);
  }
  TrapSpec trap;
  const SimCouplings c{0.8, -0.6};
  const auto rhs = interaction_rhs(s, trap, c);
  for (int i = 0; i < g.n_points; ++i) {
    for (int m : kComponents) {
      const double rate = 2.0 * (std::conj(s.psi[m][i]) * rhs[m][i]).real();
      // Wherever the component itself vanishes the rate is exactly zero; the
      // populated points see only the diagonal phase rotation, which cancels
      // to rounding.
      if (s.psi[m][i] == Complex(0.0, 0.0))
        CHECK(rate == 0.0);
      else
        CHECK_THAT(rate, WithinAbs(0.0, 1e-12));
    }
  }
}

TEST_CASE("rhs is equivariant under the magnetization rotation") {
  const Grid1D g = make_grid(18.0, 64);
  TrapSpec trap;
  trap.barrier_height = 2.0;
  const SimCouplings c{1.1, -0.3};
  const SpinorState s = random_state(g, 21);
  const double theta = 0.83;
  const Complex up = std::exp(Complex(0.0, theta));
  const Complex dn = std::exp(Complex(0.0, -theta));

  SpinorState mapped = s;
  for (auto& v : mapped.psi[kPlus]) v *= up;
  for (auto& v : mapped.psi[kMinus]) v *= dn;

  const auto rhs_then_map = [&] {
    auto r = interaction_rhs(s, trap, c);
    for (auto& v : r[kPlus]) v *= up;
    for (auto& v : r[kMinus]) v *= dn;
    return r;
  }();
  const auto map_then_rhs = interaction_rhs(mapped, trap, c);

  double worst = 0;
  for (int m : kComponents)
    for (int i = 0; i < g.n_points; ++i)
      worst = std::max(worst,
                       std::abs(rhs_then_map[m][i] - map_then_rhs[m][i]));
  double scale = 0;
  for (int m : kComponents)
    for (int i = 0; i < g.n_points; ++i)
      scale = std::max(scale, std::abs(map_then_rhs[m][i]));
  CHECK(worst / scale < 1e-13);
}
