#pragma once

// Physical parameters of the cavity-emitter system. All quantities are
// dimensionless: frequencies in units of the cavity resonance omega0, times in
// units of 1/omega0, and c0 = 1.

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <string>

#include "radcav/angular.hpp"

namespace radcav {

using RawConfig = std::map<std::string, std::string>;

struct ModelParams {
  double omega0 = 1.0;
  double c0 = 1.0;
  double gamma = 0.0;    // cavity linewidth
  double omega_a = 1.0;  // emitter transition frequency
  std::complex<double> eta_max;  // (E_max . d) / hbar at resonance
  std::shared_ptr<const AngularPattern> pattern;
  Quadrature quadrature;
  double pattern_norm = 0.0;  // G, cached at validation

  double emitter_detuning() const { return omega_a - omega0; }
};

struct Coupling {
  std::complex<double> kappa;
};

/// Resolves `pattern` specs other than the built-in `isotropic` and `dipole`
/// (the CLI uses this to load tabulated files).
using PatternResolver =
    std::function<AngularPattern(const std::string& kind, const RawConfig& raw)>;

/// Builds ModelParams from key/value text. Recognised keys: gamma, omega_a,
/// eta_max or kappa (complex `re,im` or real), omega0, pattern, pattern_axis,
/// n_theta, n_phi. All violations are collected into one ValidationError.
ModelParams validate(const RawConfig& raw, const PatternResolver& resolver = {});

/// Programmatic construction with the same range checks as validate().
ModelParams make_params(double gamma, double omega_a, std::complex<double> eta_max,
                        AngularPattern pattern, const Quadrature& quadrature = {});

/// Same, but choosing eta_max so that the coupling constant equals `kappa`.
ModelParams make_params_for_coupling(double gamma, double omega_a, std::complex<double> kappa,
                                     AngularPattern pattern, const Quadrature& quadrature = {});

Coupling coupling_constant(const ModelParams& params);

/// Inverse of coupling_constant for a given linewidth and pattern norm.
std::complex<double> eta_max_for_coupling(std::complex<double> kappa, double gamma, double G,
                                          double omega0 = 1.0, double c0 = 1.0);

/// Cavity-to-output-mode coupling for the output mode with detuning
/// delta = omega0 - omega_k emitted along khat.
std::complex<double> zeta(double delta, const Direction& khat, const ModelParams& params,
                          const Coupling& coupling);

/// Near-resonance |zeta|^2 = (c0^3/omega0^2) |g(-k)|^2/G |kappa|^2/(pi Gamma/2).
double zeta_sq_simplified(const Direction& khat, const ModelParams& params,
                          const Coupling& coupling);

}  // namespace radcav
