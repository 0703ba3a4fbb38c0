#include "radcav/driven.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "radcav/errors.hpp"
#include "radcav/ode.hpp"
#include "radcav/values.hpp"

namespace radcav {
namespace {

using cplx = std::complex<double>;
constexpr cplx I(0.0, 1.0);

}  // namespace

DrivenDerivative driven_rhs(const DrivenState& st, cplx f, const ModelParams& params,
                            const Coupling& coupling, bool direct_pump) {
  const cplx k = coupling.kappa;
  const cplx kc = std::conj(k);
  const double shift = params.gamma / (2.0 * params.omega0);
  DrivenDerivative d;
  d.da = -0.5 * params.gamma * st.a - I * k * st.s - I * f;
  d.ds = cplx(0.0, -params.emitter_detuning()) * st.s - I * kc * cplx(1.0, -shift) * st.a;
  if (direct_pump) d.ds -= I * kc / params.omega0 * f;
  return d;
}

double drive_step(const PumpSpec& pump, const ModelParams& params, const Coupling& coupling,
                  double frame_offset) {
  double fast = std::max({std::abs(coupling.kappa), std::abs(params.emitter_detuning()),
                          std::abs(frame_offset), 1e-12});
  if (const auto* cw = std::get_if<CwPump>(&pump)) {
    fast = std::max(fast, std::abs(cw->omega_p - params.omega0 - frame_offset));
  } else if (const auto* pu = std::get_if<PulsedPump>(&pump)) {
    fast = std::max(fast, 1.0 / pu->delta);
  }
  return std::min(0.01 / params.gamma, 0.005 / fast);
}

DriveResult drive(const DrivenState& state0, const PumpSpec& pump, const ModelParams& params,
                  const Coupling& coupling, std::span<const double> t_grid,
                  const DriveOptions& options) {
  if (t_grid.empty() || t_grid[0] != state0.t) {
    throw std::invalid_argument("time grid must start at the initial state time");
  }
  const double nu = options.frame_offset;
  const double h = options.step > 0.0 ? options.step : drive_step(pump, params, coupling, nu);
  // Validates the pump once up front (ConfigError on bad parameters).
  (void)pump_prefactor(pump, params);

  auto rhs = [&](double t, std::span<const double> v, std::span<double> dv) {
    // Fields in the offset frame are the omega0-frame fields times e^{i nu t}.
    const cplx rot = nu == 0.0 ? cplx(1.0) : std::polar(1.0, nu * t);
    const DrivenState st{ode::get_complex(v, 0), ode::get_complex(v, 2), t};
    const cplx f = f0_closed_rotating(pump, params, t) * rot;
    DrivenDerivative d = driven_rhs(st, f, params, coupling, options.direct_pump);
    d.da += I * nu * st.a;
    d.ds += I * nu * st.s;
    ode::set_complex(dv, 0, d.da);
    ode::set_complex(dv, 2, d.ds);
  };
  const std::array<double, 4> y0{state0.a.real(), state0.a.imag(), state0.s.real(), state0.s.imag()};

  ode::Samples samples;
  if (options.verify) {
    auto report = ode::verify_step(rhs, y0, t_grid, h, params.gamma);
    double peak = 0.0;
    for (double v : report.fine.values) peak = std::max(peak, std::abs(v));
    const double tol = options.tolerance * std::max(peak, 1e-300);
    if (report.max_deviation > tol) throw StepSizeTooCoarse(report.max_deviation, tol, "driven fields");
    samples = std::move(report.coarse);
  } else {
    samples = ode::rk4_integrate(rhs, y0, t_grid, h);
  }

  DriveResult r;
  r.states.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto row = samples.row(i);
    DrivenState st{ode::get_complex(row, 0), ode::get_complex(row, 2), samples.times[i]};
    r.max_abs_s = std::max(r.max_abs_s, std::abs(st.s));
    r.states.push_back(st);
  }
  if (r.max_abs_s > kClosureLimit) {
    r.warnings.push_back("ClosureViolation: |<s->| reaches " + text::format_real(r.max_abs_s) +
                         " > 0.3; the s_z -> -1 closure is unreliable");
  }
  return r;
}

DrivenState cw_steady_state(const CwPump& pump, const ModelParams& params, const Coupling& coupling,
                            bool direct_pump) {
  const cplx c = pump_prefactor(PumpSpec(pump), params);
  const cplx k = coupling.kappa;
  const cplx kc = std::conj(k);
  const double nu = pump.omega_p - params.omega0;
  const double shift = params.gamma / (2.0 * params.omega0);
  // (M + i nu) v = i b C with b = (1, conj(kappa)/omega0).
  const cplx m00 = cplx(-0.5 * params.gamma, nu);
  const cplx m01 = -I * k;
  const cplx m10 = -I * kc * cplx(1.0, -shift);
  const cplx m11 = cplx(0.0, nu - params.emitter_detuning());
  const cplx b0 = I * c;
  const cplx b1 = direct_pump ? I * kc / params.omega0 * c : cplx(0.0);
  if (k == cplx(0.0)) {
    // Decoupled emitter is undriven (b1 = 0) and keeps s = 0.
    return {b0 / m00, 0.0, 0.0};
  }
  const cplx det = m00 * m11 - m01 * m10;
  if (det == cplx(0.0)) throw NumericalError("CW steady state is singular (undamped resonance)");
  return {(m11 * b0 - m01 * b1) / det, (m00 * b1 - m10 * b0) / det, 0.0};
}

}  // namespace radcav
