#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "oracle.hpp"
#include "radcav/errors.hpp"
#include "radcav/singlephoton.hpp"

using namespace radcav;
using cplx = std::complex<double>;

namespace {

std::vector<double> linear_grid(double t_max, int n) {
  std::vector<double> g;
  for (int i = 0; i <= n; ++i) g.push_back(t_max * i / n);
  return g;
}

ModelParams rabi_params() {
  return make_params_for_coupling(1e-3, 1.0, 1e-3, AngularPattern::isotropic());
}

}  // namespace

TEST_CASE("initial conditions") {
  const ModelParams p = make_params_for_coupling(1e-3, 1.0, 1e-4, AngularPattern::dipole());
  SUBCASE("matched photon fills the cavity") {
    const auto s = initial_conditions(InputPhotonSpec::photon(1e-3), p);
    CHECK(std::abs(s.x - 1.0) <= 1e-12);
    CHECK(s.p == 0.0);
    CHECK(s.y == cplx(0.0));
    const auto same = initial_conditions(
        InputPhotonSpec::photon(1e-3, std::make_shared<AngularPattern>(AngularPattern::dipole())), p);
    CHECK(std::abs(same.x - 1.0) <= 1e-12);
  }
  SUBCASE("three times wider photon") {
    CHECK(std::abs(initial_conditions(InputPhotonSpec::photon(3e-3), p).x - 0.75) <= 1e-10);
  }
  SUBCASE("excited emitter") {
    const auto s = initial_conditions(InputPhotonSpec::atom(), p);
    CHECK(s.x == 0.0);
    CHECK(s.p == 1.0);
    CHECK(s.y == cplx(0.0));
  }
  SUBCASE("mismatched pattern") {
    // g = 1, g' = 1 + cos: |<g|g'>|^2/(G G') = (4 pi)^2 / (4 pi * 16 pi/3) = 3/4.
    const ModelParams iso = make_params_for_coupling(1e-3, 1.0, 1e-4, AngularPattern::isotropic());
    auto gp = std::make_shared<AngularPattern>(
        AngularPattern::custom([](double t, double) { return cplx(1.0 + std::cos(t)); }));
    const auto s = initial_conditions(InputPhotonSpec::photon(1e-3, gp), iso);
    CHECK(std::abs(s.x - 0.75) <= 1e-12);
  }
  CHECK_THROWS_AS(initial_conditions(InputPhotonSpec::photon(0.0), p), ValidationError);
  CHECK_THROWS_AS(initial_conditions(InputPhotonSpec::photon(-1e-3), p), ValidationError);
}

TEST_CASE("initial photon number never exceeds one") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> lg(-4.0, -1.5);
  const ModelParams p = make_params_for_coupling(1e-3, 1.0, 1e-4, AngularPattern::dipole());
  for (int i = 0; i < 100; ++i) {
    TabulatedGrid grid;
    for (int a = 0; a < 8; ++a) grid.theta.push_back(oracle::pi * a / 7);
    for (int b = 0; b < 9; ++b) grid.phi.push_back(2 * oracle::pi * b / 9);
    for (int k = 0; k < 72; ++k) grid.values.emplace_back(n01(rng), n01(rng));
    auto gp = std::make_shared<AngularPattern>(AngularPattern::tabulated(grid));
    const double gamma_p = std::pow(10.0, lg(rng));
    CHECK(initial_conditions(InputPhotonSpec::photon(gamma_p, gp), p).x <= 1.0 + 1e-10);
  }
}

TEST_CASE("moment equation examples") {
  SUBCASE("bare cavity decay") {
    const ModelParams p = make_params(1e-3, 1.0, 0.0, AngularPattern::isotropic());
    const auto d = moment_rhs({1.0, 0.0, 0.0, 0.0}, p, coupling_constant(p));
    CHECK(d.dx == -1e-3);
    CHECK(d.dp == 0.0);
    CHECK(d.dy == cplx(0.0));
  }
  SUBCASE("emission seeds coherence") {
    const ModelParams p = make_params_for_coupling(1e-3, 1.0, cplx(2e-4, 1e-4), AngularPattern::isotropic());
    const Coupling c = coupling_constant(p);
    const auto d = moment_rhs({0.0, 1.0, 0.0, 0.0}, p, c);
    CHECK(d.dx == 0.0);
    CHECK(d.dp == 0.0);
    CHECK(std::abs(d.dy - cplx(0.0, 1.0) * std::conj(c.kappa)) <= 1e-20);
  }
}

TEST_CASE("excitation bookkeeping identity at random states") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> lg(-4.0, -2.0);
  for (int i = 0; i < 1000; ++i) {
    const double gamma = std::pow(10.0, lg(rng));
    const cplx kappa = std::polar(std::pow(10.0, lg(rng)), 6.28 * u(rng));
    const ModelParams p = make_params_for_coupling(gamma, 1.0 + gamma * (2 * u(rng) - 1), kappa,
                                                   AngularPattern::isotropic());
    const Coupling c = coupling_constant(p);
    const SinglePhotonState s{u(rng), u(rng), cplx(2 * u(rng) - 1, 2 * u(rng) - 1), 0.0};
    const auto d = moment_rhs(s, p, c);
    const double residual = d.dx + d.dp + gamma * s.x + gamma * (c.kappa * s.y).real();
    CHECK(std::abs(residual) <= 1e-15);
  }
}

TEST_CASE("strong coupling shows Rabi oscillations and matches the oracle") {
  const ModelParams p = rabi_params();
  const Coupling c = coupling_constant(p);
  const auto s0 = initial_conditions(InputPhotonSpec::photon(1e-3), p);
  const auto grid = linear_grid(2e4, 2000);
  const auto traj = evolve(s0, p, c, grid);
  int maxima = 0;
  for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
    if (traj[i].p > traj[i - 1].p && traj[i].p >= traj[i + 1].p) ++maxima;
  }
  CHECK(maxima >= 3);
  double worst_x = 0.0;
  double worst_p = 0.0;
  for (const auto& s : traj) {
    const auto o = amplitude_oracle(s0, p, c, s.t);
    worst_x = std::max(worst_x, std::abs(s.x - o.x));
    worst_p = std::max(worst_p, std::abs(s.p - o.p));
  }
  CHECK(worst_x <= 1e-8);
  CHECK(worst_p <= 1e-8);
}

TEST_CASE("strong-coupling invariants: purity, plateaus, monotone total") {
  const ModelParams p = rabi_params();
  const Coupling c = coupling_constant(p);
  const auto traj = evolve(initial_conditions(InputPhotonSpec::photon(1e-3), p), p, c, linear_grid(2e4, 4000));
  int plateau_points = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& s = traj[i];
    CHECK(std::abs(std::norm(s.y) - s.x * s.p) <= 1e-9);
    CHECK(s.x >= -1e-12);
    CHECK(s.p <= 1.0 + 1e-9);
    if (s.x < 1e-4) {
      ++plateau_points;
      const auto d = moment_rhs(s, p, c);
      CHECK(std::abs(d.dx + d.dp) <= p.gamma * 1e-4 * (1.0 + 1e-2));
    }
    if (i > 0) CHECK(s.total() <= traj[i - 1].total() + 1e-9);
  }
  CHECK(plateau_points > 0);
}

TEST_CASE("decoupled cavity decays exponentially") {
  const ModelParams p = make_params(1e-3, 1.0, 0.0, AngularPattern::isotropic());
  const Coupling c = coupling_constant(p);
  const auto traj = evolve({1.0, 0.0, 0.0, 0.0}, p, c, linear_grid(1e4, 100));
  for (const auto& s : traj) CHECK(std::abs(s.x - std::exp(-1e-3 * s.t)) <= 1e-8 * std::exp(-1e-3 * s.t));
  // Oracle: alpha = alpha0 exp(-Gamma t/2) in the rotating frame.
  const auto o = amplitude_oracle({1.0, 0.0, 0.0, 0.0}, p, c, 3000.0);
  CHECK(std::abs(o.x - std::exp(-3.0)) <= 1e-15);
  const auto e = expm2(amplitude_matrix(p, c, true), 3000.0);
  CHECK(std::abs(e[0] - std::exp(cplx(-0.5e-3, -1.0) * 3000.0)) <= 1e-9);
}

TEST_CASE("oracle equivalence over random parameter sets") {
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double gamma = std::pow(10.0, -4.0 + 2.0 * u(rng));
    const cplx kappa = std::polar(std::pow(10.0, -6.0 + 4.0 * u(rng)), 6.28 * u(rng));
    const double omega_a = 1.0 + gamma * (2.0 * u(rng) - 1.0);
    const ModelParams p = make_params_for_coupling(gamma, omega_a, kappa, AngularPattern::isotropic());
    const Coupling c = coupling_constant(p);
    const auto s0 = i % 2 ? initial_conditions(InputPhotonSpec::atom(), p)
                          : initial_conditions(InputPhotonSpec::photon(gamma * (0.5 + u(rng))), p);
    const auto traj = evolve(s0, p, c, linear_grid(10.0 / gamma, 200));
    double worst = 0.0;
    for (const auto& s : traj) {
      const auto o = amplitude_oracle(s0, p, c, s.t);
      worst = std::max(worst, std::abs(s.x - o.x) + std::abs(s.p - o.p));
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("oracle moments satisfy the moment equations") {
  const ModelParams p = make_params_for_coupling(2e-3, 1.0 + 5e-4, cplx(1e-3, -4e-4), AngularPattern::isotropic());
  const Coupling c = coupling_constant(p);
  const SinglePhotonState s0{0.36, 0.64, std::sqrt(0.36 * 0.64) * std::polar(1.0, 0.7), 0.0};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 5000.0);
  for (int i = 0; i < 20; ++i) {
    const double t = u(rng);
    const double h = 1e-2;
    const auto lo = amplitude_oracle(s0, p, c, t - h);
    const auto hi = amplitude_oracle(s0, p, c, t + h);
    const auto d = moment_rhs(amplitude_oracle(s0, p, c, t), p, c);
    // Central difference, error O(h^2 |rate|^3).
    CHECK(std::abs((hi.x - lo.x) / (2 * h) - d.dx) < 1e-10);
    CHECK(std::abs((hi.p - lo.p) / (2 * h) - d.dp) < 1e-10);
    CHECK(std::abs((hi.y - lo.y) / (2 * h) - d.dy) < 1e-10);
  }
  CHECK_THROWS_AS(amplitude_oracle({0.5, 0.5, 0.0, 0.0}, p, c, 1.0), std::invalid_argument);
}

TEST_CASE("matrix exponential and eigenvalues") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n01;
  for (int i = 0; i < 20; ++i) {
    const double gamma = 1e-3 * (1.0 + std::abs(n01(rng)));
    const ModelParams p = make_params_for_coupling(gamma, 1.0 + 1e-4 * n01(rng), cplx(1e-3 * n01(rng), 1e-3 * n01(rng)),
                                                   AngularPattern::isotropic());
    const Coupling c = coupling_constant(p);
    const auto lab = amplitude_matrix(p, c, true);
    const auto ev = eigenvalues(lab);
    CHECK(std::abs(ev[0] + ev[1] - cplx(-0.5 * gamma, -1.0 - p.omega_a)) <= 1e-14);
    const auto rot = amplitude_matrix(p, c);
    const auto er = eigenvalues(rot);
    CHECK(std::abs(er[0] + er[1] - cplx(-0.5 * gamma, 1.0 - p.omega_a)) <= 1e-14);
    for (double t : {1.0, 300.0, 4000.0}) {
      const auto a = expm2(rot, t);
      const auto b = oracle::expm(rot, t);
      for (int k = 0; k < 4; ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-12);
    }
  }
  // Degenerate: a Jordan block.
  const std::array<cplx, 4> jordan{cplx(-1e-3, 0.0), cplx(1e-3, 0.0), 0.0, cplx(-1e-3, 0.0)};
  for (double t : {0.5, 700.0}) {
    const auto a = expm2(jordan, t);
    const auto b = oracle::expm(jordan, t);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-13);
  }
}

TEST_CASE("adiabatic elimination of a weakly coupled emitter") {
  const ModelParams p = make_params_for_coupling(1e-3, 1.0, 1e-5, AngularPattern::isotropic());
  const Coupling c = coupling_constant(p);
  CHECK(ae_atom(p, c, 0.0) == 1.0);
  CHECK(std::abs(ae_atom(p, c, 2.5e6) - std::exp(-1.0)) <= 1e-12);
  CHECK(ae_atom_regime_ok(p, c));
  CHECK_FALSE(ae_atom_regime_ok(rabi_params(), coupling_constant(rabi_params())));
  const auto traj = evolve(initial_conditions(InputPhotonSpec::atom(), p), p, c, linear_grid(5e6, 500));
  double worst = 0.0;
  for (const auto& s : traj) worst = std::max(worst, std::abs(s.p - ae_atom(p, c, s.t)) / ae_atom(p, c, s.t));
  CHECK(worst <= 1e-2);
}

TEST_CASE("coarse steps are detected") {
  const ModelParams p = rabi_params();
  const Coupling c = coupling_constant(p);
  const auto s0 = initial_conditions(InputPhotonSpec::photon(1e-3), p);
  EvolveOptions opts;
  opts.step = 500.0;
  CHECK_THROWS_AS(evolve(s0, p, c, linear_grid(2e4, 40), opts), StepSizeTooCoarse);
  opts.verify = false;
  CHECK_NOTHROW(evolve(s0, p, c, linear_grid(2e4, 40), opts));
  CHECK_THROWS_AS(evolve(s0, p, c, std::vector<double>{1.0, 2.0}), std::invalid_argument);
  CHECK(default_step(p, c) == doctest::Approx(5.0));
}
