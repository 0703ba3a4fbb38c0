#include "radcav/singlephoton.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "radcav/errors.hpp"
#include "radcav/ode.hpp"
#include "radcav/values.hpp"

namespace radcav {
namespace {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;
constexpr cplx I(0.0, 1.0);

// State layout for the integrator: x, p, re y, im y.
void pack(const SinglePhotonState& s, std::span<double> v) {
  v[0] = s.x;
  v[1] = s.p;
  ode::set_complex(v, 2, s.y);
}

SinglePhotonState unpack(std::span<const double> v, double t) {
  return {v[0], v[1], ode::get_complex(v, 2), t};
}

}  // namespace

SinglePhotonState initial_conditions(const InputPhotonSpec& input, const ModelParams& params) {
  if (input.variant == InputPhotonSpec::Variant::Atom) return {0.0, 1.0, 0.0, 0.0};
  if (!(input.gamma_p > 0.0)) {
    throw ValidationError({{Violation::Kind::OutOfRange, "gamma_p", text::format_real(input.gamma_p),
                            "gamma_p > 0"}});
  }
  const AngularPattern& g = *params.pattern;
  const AngularPattern& gp = input.gp ? *input.gp : g;
  const double G = params.pattern_norm;
  const double Gp = input.gp ? pattern_norm(gp, params.quadrature) : G;
  if (!(Gp > 0.0)) {
    throw ValidationError({{Violation::Kind::OutOfRange, "input_pattern", "G' = 0", "G' > 0"}});
  }
  const double shape = input.gp ? std::norm(overlap(g, gp, params.quadrature)) / (G * Gp) : 1.0;
  const double gamma = params.gamma;
  const double gamma_p = input.gamma_p;
  const double spectral = gamma * gamma_p / std::pow(0.5 * (gamma + gamma_p), 2);
  return {shape * spectral, 0.0, 0.0, 0.0};
}

MomentDerivative moment_rhs(const SinglePhotonState& s, const ModelParams& params,
                            const Coupling& coupling) {
  const cplx k = coupling.kappa;
  const cplx kc = std::conj(k);
  const double gamma = params.gamma;
  const double shift = gamma / (2.0 * params.omega0);
  const cplx ky = k * s.y;
  MomentDerivative d;
  d.dx = -gamma * s.x + 2.0 * ky.imag();
  d.dp = -2.0 * (ky * cplx(1.0, shift)).imag();
  d.dy = cplx(-0.5 * gamma, -params.emitter_detuning()) * s.y + I * kc * s.p -
         I * kc * cplx(1.0, -shift) * s.x;
  return d;
}

double default_step(const ModelParams& params, const Coupling& coupling) {
  const double fast = std::max({std::abs(coupling.kappa), std::abs(params.emitter_detuning()), 1e-12});
  return std::min(0.01 / params.gamma, 0.005 / fast);
}

std::vector<SinglePhotonState> evolve(const SinglePhotonState& state0, const ModelParams& params,
                                      const Coupling& coupling, std::span<const double> t_grid,
                                      const EvolveOptions& options) {
  if (t_grid.empty() || t_grid[0] != state0.t) {
    throw std::invalid_argument("time grid must start at the initial state time");
  }
  const double h = options.step > 0.0 ? options.step : default_step(params, coupling);
  auto rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    const MomentDerivative d = moment_rhs(unpack(y, t), params, coupling);
    dy[0] = d.dx;
    dy[1] = d.dp;
    ode::set_complex(dy, 2, d.dy);
  };
  std::array<double, 4> y0{};
  pack(state0, y0);

  ode::Samples samples;
  if (options.verify) {
    auto report = ode::verify_step(rhs, y0, t_grid, h, params.gamma);
    double dev = 0.0;
    for (std::size_t i = 0; i < report.coarse.size(); ++i) {
      for (std::size_t c = 0; c < 2; ++c) {
        dev = std::max(dev, std::abs(report.coarse.row(i)[c] - report.fine.row(i)[c]));
      }
    }
    if (dev > options.tolerance) throw StepSizeTooCoarse(dev, options.tolerance, "single-photon moments");
    samples = std::move(report.coarse);
  } else {
    samples = ode::rk4_integrate(rhs, y0, t_grid, h);
  }

  std::vector<SinglePhotonState> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) out.push_back(unpack(samples.row(i), samples.times[i]));
  return out;
}

Mat2 amplitude_matrix(const ModelParams& params, const Coupling& coupling, bool lab_frame) {
  const cplx k = coupling.kappa;
  const double shift = params.gamma / (2.0 * params.omega0);
  const double w0 = lab_frame ? params.omega0 : 0.0;
  return {cplx(-0.5 * params.gamma, -w0), -I * k, -I * std::conj(k) * cplx(1.0, -shift),
          cplx(0.0, -(params.omega_a - params.omega0) - w0)};
}

std::array<cplx, 2> eigenvalues(const Mat2& m) {
  const cplx half_tr = 0.5 * (m[0] + m[3]);
  const cplx det = m[0] * m[3] - m[1] * m[2];
  const cplx s = std::sqrt(half_tr * half_tr - det);
  return {half_tr + s, half_tr - s};
}

Mat2 expm2(const Mat2& m, double t) {
  const cplx half_tr = 0.5 * (m[0] + m[3]);
  const cplx det = m[0] * m[3] - m[1] * m[2];
  const cplx s = std::sqrt(half_tr * half_tr - det);
  const Mat2 shifted{m[0] - half_tr, m[1], m[2], m[3] - half_tr};  // M - (tr/2) I
  if (std::abs(s) * std::abs(t) < 1e-3) {
    // Near-degenerate: e^{mt} [cosh(st) I + t sinh(st)/(st) (M - m I)].
    const cplx z2 = s * s * t * t;
    cplx ch = 1.0, sh = 1.0, term_c = 1.0, term_s = 1.0;
    for (int n = 1; n <= 8; ++n) {
      term_c *= z2 / static_cast<double>((2 * n - 1) * (2 * n));
      term_s *= z2 / static_cast<double>((2 * n) * (2 * n + 1));
      ch += term_c;
      sh += term_s;
    }
    const cplx e = std::exp(half_tr * t);
    return {e * (ch + t * sh * shifted[0]), e * t * sh * shifted[1], e * t * sh * shifted[2],
            e * (ch + t * sh * shifted[3])};
  }
  // [e^{l+ t}(M - l-) - e^{l- t}(M - l+)]/(l+ - l-), each exponential bounded.
  const cplx lp = half_tr + s;
  const cplx lm = half_tr - s;
  const cplx ep = std::exp(lp * t);
  const cplx em = std::exp(lm * t);
  const cplx inv = 1.0 / (2.0 * s);
  return {(ep * (m[0] - lm) - em * (m[0] - lp)) * inv, (ep - em) * m[1] * inv,
          (ep - em) * m[2] * inv, (ep * (m[3] - lm) - em * (m[3] - lp)) * inv};
}

SinglePhotonState amplitude_oracle(const SinglePhotonState& state0, const ModelParams& params,
                                   const Coupling& coupling, double t) {
  const double scale = std::max(1.0, state0.x * state0.p);
  if (std::abs(std::norm(state0.y) - state0.x * state0.p) > 1e-12 * scale || state0.x < 0.0 ||
      state0.p < 0.0) {
    throw std::invalid_argument("amplitude oracle needs pure initial data |y|^2 = x p");
  }
  // conj(alpha0) beta0 = y0 with alpha0 real.
  const cplx alpha0 = std::sqrt(state0.x);
  const cplx beta0 = state0.x > 0.0 ? state0.y / std::sqrt(state0.x) : cplx(std::sqrt(state0.p));
  const Mat2 e = expm2(amplitude_matrix(params, coupling), t - state0.t);
  const cplx alpha = e[0] * alpha0 + e[1] * beta0;
  const cplx beta = e[2] * alpha0 + e[3] * beta0;
  return {std::norm(alpha), std::norm(beta), std::conj(alpha) * beta, t};
}

double ae_atom(const ModelParams& params, const Coupling& coupling, double t) {
  return std::exp(-4.0 * std::norm(coupling.kappa) * t / params.gamma);
}

bool ae_atom_regime_ok(const ModelParams& params, const Coupling& coupling) {
  return std::abs(coupling.kappa) <= 0.1 * params.gamma;
}

}  // namespace radcav
