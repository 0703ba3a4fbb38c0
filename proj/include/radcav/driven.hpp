#pragma once

// Pumped cavity-emitter mean fields <a>, <s-> in the weak-excitation closure
// s_z -> -1, in a frame rotating at omega0 (optionally offset).

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "radcav/model.hpp"
#include "radcav/pump.hpp"

namespace radcav {

struct DrivenState {
  std::complex<double> a;
  std::complex<double> s;
  double t = 0.0;
};

struct DrivenDerivative {
  std::complex<double> da;
  std::complex<double> ds;
};

/// da = -(Gamma/2) a - i kappa s - i f
/// ds = -i(omega_a - omega0) s - i conj(kappa)(1 - i Gamma/(2 omega0)) a - i conj(kappa)/omega0 f
/// with f = <F_0(t)> e^{i omega0 t}. The last term is dropped when
/// `direct_pump` is false.
DrivenDerivative driven_rhs(const DrivenState& state, std::complex<double> f0_rotating,
                            const ModelParams& params, const Coupling& coupling,
                            bool direct_pump = true);

inline constexpr double kClosureLimit = 0.3;

struct DriveOptions {
  double step = 0.0;  // 0: drive_step
  bool verify = true;
  double tolerance = 1e-8;  // under step halving, relative to the peak field
  bool direct_pump = true;
  // Extra frame rotation nu: fields are reported as <a> e^{i (omega0 + nu) t}.
  double frame_offset = 0.0;
};

struct DriveResult {
  std::vector<DrivenState> states;
  double max_abs_s = 0.0;
  std::vector<std::string> warnings;  // closure violations
};

/// Step bound from Gamma, kappa, the emitter detuning, the frame offset and the
/// pump time scale.
double drive_step(const PumpSpec& pump, const ModelParams& params, const Coupling& coupling,
                  double frame_offset = 0.0);

/// RK4 trajectory with the closed-form pump term (CW: C e^{-i(omega_p - omega0) t};
/// pulsed: the exact-bracket envelope). A warning is recorded when |s| exceeds
/// 0.3 anywhere on the grid.
DriveResult drive(const DrivenState& state0, const PumpSpec& pump, const ModelParams& params,
                  const Coupling& coupling, std::span<const double> t_grid,
                  const DriveOptions& options = {});

/// Stationary (a, s) of a CW drive in the frame rotating at the pump
/// frequency; the omega0-frame fields at time t are this times
/// e^{-i(omega_p - omega0) t}.
DrivenState cw_steady_state(const CwPump& pump, const ModelParams& params, const Coupling& coupling,
                            bool direct_pump = true);

}  // namespace radcav
