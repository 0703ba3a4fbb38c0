#pragma once

// Single-excitation cavity-emitter dynamics: the closed equations for
// x = <a+ a>, p = <s+ s->, y = <a+ s->, their initial data for a photon or an
// excited emitter, and two reference solutions (exact amplitudes and adiabatic
// elimination).

#include <array>
#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "radcav/angular.hpp"
#include "radcav/model.hpp"

namespace radcav {

struct InputPhotonSpec {
  enum class Variant { Photon, Atom };
  Variant variant = Variant::Photon;
  std::shared_ptr<const AngularPattern> gp;  // null: same pattern as the cavity
  double gamma_p = 0.0;                      // photon linewidth, > 0 for Photon

  static InputPhotonSpec atom() { return {Variant::Atom, nullptr, 0.0}; }
  static InputPhotonSpec photon(double gamma_p, std::shared_ptr<const AngularPattern> gp = {}) {
    return {Variant::Photon, std::move(gp), gamma_p};
  }
};

struct SinglePhotonState {
  double x = 0.0;
  double p = 0.0;
  std::complex<double> y;
  double t = 0.0;

  double total() const { return x + p; }
};

struct MomentDerivative {
  double dx = 0.0;
  double dp = 0.0;
  std::complex<double> dy;
};

/// Photon: x = |<g|g'>|^2/(G G') * Gamma Gamma'/((Gamma+Gamma')/2)^2, p = y = 0.
/// Atom: (0, 1, 0).
SinglePhotonState initial_conditions(const InputPhotonSpec& input, const ModelParams& params);

MomentDerivative moment_rhs(const SinglePhotonState& s, const ModelParams& params,
                            const Coupling& coupling);

/// h = min(0.01/Gamma, 0.005/max(|kappa|, |omega_a - omega0|)).
double default_step(const ModelParams& params, const Coupling& coupling);

struct EvolveOptions {
  double step = 0.0;  // 0: default_step
  bool verify = true;
  double tolerance = 1e-8;  // on x and p under step halving
};

/// RK4 trajectory sampled at t_grid (t_grid[0] must equal state0.t). With
/// verification on, throws StepSizeTooCoarse if halving the step moves any
/// sampled x or p by more than the tolerance.
std::vector<SinglePhotonState> evolve(const SinglePhotonState& state0, const ModelParams& params,
                                      const Coupling& coupling, std::span<const double> t_grid,
                                      const EvolveOptions& options = {});

/// Amplitude matrix M of d(alpha, beta)/dt = M (alpha, beta). In the frame
/// rotating at omega0 unless `lab_frame`.
std::array<std::complex<double>, 4> amplitude_matrix(const ModelParams& params,
                                                     const Coupling& coupling,
                                                     bool lab_frame = false);

/// Eigenvalues of a 2x2 matrix (row-major).
std::array<std::complex<double>, 2> eigenvalues(const std::array<std::complex<double>, 4>& m);

/// exp(M t) for a 2x2 matrix, stable for large t; series fallback near
/// degenerate eigenvalues.
std::array<std::complex<double>, 4> expm2(const std::array<std::complex<double>, 4>& m, double t);

/// Exact single-excitation solution. Requires pure data |y0|^2 = x0 p0.
SinglePhotonState amplitude_oracle(const SinglePhotonState& state0, const ModelParams& params,
                                   const Coupling& coupling, double t);

/// p(t) = exp(-4 |kappa|^2 t / Gamma).
double ae_atom(const ModelParams& params, const Coupling& coupling, double t);

/// |kappa| <= Gamma/10.
bool ae_atom_regime_ok(const ModelParams& params, const Coupling& coupling);

}  // namespace radcav
