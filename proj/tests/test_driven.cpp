#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "radcav/driven.hpp"
#include "radcav/errors.hpp"

using namespace radcav;
using cplx = std::complex<double>;

namespace {

const Direction kSide{oracle::pi / 2, 0.0};

std::vector<double> linear_grid(double t0, double t1, int n) {
  std::vector<double> g;
  for (int i = 0; i <= n; ++i) g.push_back(t0 + (t1 - t0) * i / n);
  return g;
}

ModelParams coupled(double gamma = 1e-3, double omega_a = 1.0) {
  return make_params_for_coupling(gamma, omega_a, cplx(0.5 * gamma, 0.1 * gamma), AngularPattern::isotropic());
}

}  // namespace

TEST_CASE("driven equation examples") {
  const ModelParams p0 = make_params(1e-3, 1.0, 0.0, AngularPattern::isotropic());
  const Coupling c0 = coupling_constant(p0);
  const auto d = driven_rhs({cplx(0.3, -0.1), 0.0, 0.0}, 0.0, p0, c0);
  CHECK(d.da == -0.5e-3 * cplx(0.3, -0.1));
  CHECK(d.ds == cplx(0.0));

  const ModelParams p = coupled(1e-3, 1.0 + 2e-4);
  const Coupling c = coupling_constant(p);
  const DrivenState st{cplx(0.2, 0.1), cplx(-0.05, 0.02), 0.0};
  const cplx f(1e-4, -3e-5);
  const cplx I(0.0, 1.0);
  const cplx k = c.kappa;
  const auto e = driven_rhs(st, f, p, c);
  CHECK(std::abs(e.da - (-0.5e-3 * st.a - I * k * st.s - I * f)) < 1e-20);
  const cplx ds = -I * 2e-4 * st.s - I * std::conj(k) * cplx(1.0, -0.5e-3) * st.a - I * std::conj(k) * f;
  CHECK(std::abs(e.ds - ds) < 1e-17);
  const auto n = driven_rhs(st, f, p, c, false);
  CHECK(std::abs(n.ds - (ds + I * std::conj(k) * f)) < 1e-17);
}

TEST_CASE("resonant CW drive of a bare cavity") {
  const ModelParams p = make_params(1e-3, 1.0, 0.0, AngularPattern::isotropic());
  const Coupling c = coupling_constant(p);
  const CwPump pump{cplx(0.01, 0.02), 1.0, kSide};
  const cplx C = pump_prefactor(PumpSpec(pump), p);
  const DrivenState ss = cw_steady_state(pump, p, c);
  CHECK(std::abs(ss.a - cplx(0.0, -2.0) * C / 1e-3) <= 1e-15 * std::abs(ss.a));
  CHECK(ss.s == cplx(0.0));
  const auto r = drive({}, PumpSpec(pump), p, c, linear_grid(0.0, 4e4, 400));
  for (std::size_t i = 1; i < r.states.size(); ++i) CHECK(std::abs(r.states[i].a) >= std::abs(r.states[i - 1].a));
  CHECK(std::abs(std::abs(r.states.back().a) - 2.0 * std::abs(C) / 1e-3) <= 1e-8 * std::abs(ss.a));
}

TEST_CASE("CW steady state of the coupled system") {
  const ModelParams p = coupled();
  const Coupling c = coupling_constant(p);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 10; ++i) {
    const double nu = u(rng) * p.gamma;
    const CwPump pump{cplx(1e-3, 0.0), 1.0 + nu, kSide};
    const DrivenState ss = cw_steady_state(pump, p, c);
    // Residual of the stationary equations in the pump frame.
    const cplx f = pump_prefactor(PumpSpec(pump), p);
    const auto d = driven_rhs(ss, f, p, c);
    const cplx I(0.0, 1.0);
    CHECK(std::abs(d.da + I * nu * ss.a) <= 1e-12 * std::abs(f));
    CHECK(std::abs(d.ds + I * nu * ss.s) <= 1e-12 * std::abs(f));

    const double t_end = 200.0 / p.gamma;
    const auto r = drive({}, PumpSpec(pump), p, c, linear_grid(0.0, t_end, 20));
    const cplx phase = std::polar(1.0, -nu * t_end);
    const double scale = std::abs(ss.a) + std::abs(ss.s);
    CHECK(std::abs(r.states.back().a - ss.a * phase) <= 1e-8 * scale);
    CHECK(std::abs(r.states.back().s - ss.s * phase) <= 1e-8 * scale);
  }
}

TEST_CASE("driven fields are linear in the pump amplitude") {
  const ModelParams p = coupled(1e-3, 1.0 + 3e-4);
  const Coupling c = coupling_constant(p);
  const cplx lambda(-1.7, 0.4);
  const PulsedPump base{cplx(1e-3, 2e-4), 300.0, kSide};
  PulsedPump scaled = base;
  scaled.alpha_p *= lambda;
  const auto grid = linear_grid(-1500.0, 6000.0, 100);
  const auto a = drive({0.0, 0.0, grid[0]}, PumpSpec(base), p, c, grid);
  const auto b = drive({0.0, 0.0, grid[0]}, PumpSpec(scaled), p, c, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cplx la = lambda * a.states[i].a;
    const cplx ls = lambda * a.states[i].s;
    CHECK(std::abs(b.states[i].a - la) <= 1e-12 * std::max(std::abs(la), 1e-300));
    CHECK(std::abs(b.states[i].s - ls) <= 1e-12 * std::max(std::abs(ls), 1e-300));
  }
}

TEST_CASE("no pump leaves the fields at zero") {
  const ModelParams p = coupled();
  const auto r = drive({}, PumpSpec(NoPump{}), p, coupling_constant(p), linear_grid(0.0, 1e4, 10));
  for (const auto& s : r.states) {
    CHECK(s.a == cplx(0.0));
    CHECK(s.s == cplx(0.0));
  }
  CHECK(r.warnings.empty());
}

TEST_CASE("pulsed drive rings down after the pulse") {
  const double gamma = 1e-2;
  const double delta = 100.0;
  const ModelParams p = make_params(gamma, 1.0, 0.0, AngularPattern::isotropic());
  const Coupling c = coupling_constant(p);
  const PulsedPump pump{cplx(0.05, 0.0), delta, kSide};
  const double t_end = 10.0 * delta + 10.0 / gamma;
  const auto grid = linear_grid(-5.0 * delta, t_end, 400);
  const auto r = drive({0.0, 0.0, grid[0]}, PumpSpec(pump), p, c, grid);
  double peak = 0.0;
  for (const auto& s : r.states) peak = std::max(peak, std::abs(s.a));
  CHECK(peak > 0.0);
  CHECK(std::abs(r.states.back().a) <= 1e-3 * peak);
}

TEST_CASE("rotating-frame choice does not change field magnitudes") {
  const ModelParams p = coupled(1e-3, 1.0 + 1e-3);
  const Coupling c = coupling_constant(p);
  const double nu = 2e-3;
  const CwPump pump{cplx(1e-3, 0.0), 1.0 + nu, kSide};
  const auto grid = linear_grid(0.0, 2e4, 200);
  DriveOptions lab;
  lab.step = 0.5;
  DriveOptions offset = lab;
  offset.frame_offset = nu;
  const auto a = drive({}, PumpSpec(pump), p, c, grid, lab);
  const auto b = drive({}, PumpSpec(pump), p, c, grid, offset);
  double peak = 0.0;
  for (const auto& s : a.states) peak = std::max(peak, std::abs(s.a));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(std::abs(a.states[i].a) - std::abs(b.states[i].a)) <= 1e-10 * peak);
    CHECK(std::abs(std::abs(a.states[i].s) - std::abs(b.states[i].s)) <= 1e-10 * peak);
  }
  // In the pump frame the CW steady state is stationary.
  const auto ss = cw_steady_state(pump, p, c);
  const auto longer = drive({}, PumpSpec(pump), p, c, linear_grid(0.0, 4e5, 4), offset);
  CHECK(std::abs(longer.states.back().a - ss.a) <= 1e-8 * std::abs(ss.a));
}

TEST_CASE("strong drive triggers the closure warning") {
  const ModelParams p = coupled();
  const Coupling c = coupling_constant(p);
  const auto grid = linear_grid(0.0, 2e4, 50);
  const auto weak = drive({}, PumpSpec(CwPump{cplx(1e-4, 0.0), 1.0 + 1e-4, kSide}), p, c, grid);
  CHECK(weak.max_abs_s < kClosureLimit);
  CHECK(weak.warnings.empty());
  const auto strong = drive({}, PumpSpec(CwPump{cplx(1e2, 0.0), 1.0 + 1e-4, kSide}), p, c, grid);
  CHECK(strong.max_abs_s > kClosureLimit);
  REQUIRE(strong.warnings.size() == 1);
  CHECK(strong.warnings[0].rfind("ClosureViolation", 0) == 0);
}

TEST_CASE("driven errors") {
  const ModelParams p = coupled();
  const Coupling c = coupling_constant(p);
  CHECK_THROWS_AS(drive({}, PumpSpec(CwPump{1.0, -1.0, kSide}), p, c, linear_grid(0.0, 1.0, 2)), ConfigError);
  CHECK_THROWS_AS(drive({0.0, 0.0, 1.0}, PumpSpec(NoPump{}), p, c, linear_grid(0.0, 1.0, 2)),
                  std::invalid_argument);
  DriveOptions opts;
  opts.step = 2000.0;
  CHECK_THROWS_AS(drive({}, PumpSpec(CwPump{1e-3, 1.0 + 1e-3, kSide}), p, c, linear_grid(0.0, 2e4, 10), opts),
                  StepSizeTooCoarse);
}
