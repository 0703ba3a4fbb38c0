#pragma once

// Far-field output modes: per-detuning moments o = <b+ b>, s = <b+ s->,
// a = <b+ a> driven one-way by the internal single-excitation dynamics, the
// adiabatic-elimination spectrum, and the total emitted photon number.

#include <complex>
#include <span>
#include <vector>

#include "radcav/angular.hpp"
#include "radcav/model.hpp"
#include "radcav/singlephoton.hpp"

namespace radcav {

struct OutputNode {
  double o = 0.0;
  std::complex<double> s;
  std::complex<double> a;
};

struct OutputGrid {
  std::vector<double> deltas;  // omega0 - omega_k, strictly increasing
  std::vector<OutputNode> nodes;
  Direction khat;
  double t = 0.0;

  static OutputGrid vacuum(std::vector<double> deltas, Direction khat, double t = 0.0);
  std::vector<double> spectrum() const;
};

/// Derivative of one output node at time `node_t`. `internal` must be the
/// internal state at that same time (TimeMismatch otherwise).
OutputNode output_rhs(const OutputNode& node, double node_t, double delta,
                      const SinglePhotonState& internal, const ModelParams& params,
                      const Coupling& coupling, std::complex<double> zeta_j);

/// Emission linewidth scale 2|kappa|^2/Gamma.
double emission_rate(const ModelParams& params, const Coupling& coupling);

/// Uniform core over |delta| <= 20 r with spacing r/4 (161 nodes), then
/// geometric tails out to max(2 Gamma, 100 r), with r = 2|kappa|^2/Gamma.
/// `n_nodes` must be odd and >= 161.
std::vector<double> default_detuning_grid(const ModelParams& params, const Coupling& coupling,
                                          std::size_t n_nodes = 401);

/// n uniform nodes over [-half_width, half_width].
std::vector<double> uniform_detuning_grid(double half_width, std::size_t n_nodes);

struct OutputOptions {
  double step = 0.0;  // 0: min(0.16/max|delta|, 0.08/Gamma)
  bool verify = true;
  double tolerance = 1e-6;  // on o under step halving, relative to the peak of o
  unsigned threads = 0;     // 0: RADCAV_THREADS or hardware concurrency
};

double default_output_step(std::span<const double> deltas, const ModelParams& params);

/// Worker count from RADCAV_THREADS, else hardware concurrency (>= 1).
unsigned worker_count();

/// Integrates every node independently from grid0 and samples at t_grid
/// (t_grid[0] == grid0.t). Internal moments are linearly interpolated between
/// the samples of `internal`, which must cover t_grid and be at least 4x denser
/// than the output step.
std::vector<OutputGrid> evolve_output(const OutputGrid& grid0,
                                      std::span<const SinglePhotonState> internal,
                                      const ModelParams& params, const Coupling& coupling,
                                      std::span<const double> t_grid,
                                      const OutputOptions& options = {});

/// Internal state at time t by linear interpolation (TimeMismatch outside the
/// series).
SinglePhotonState interpolate_internal(std::span<const SinglePhotonState> series, double t);

/// |zeta|^2_simplified / (delta^2 + r^2) [1 - 2 cos(delta t) e^{-r t} + e^{-2 r t}].
double ae_output_spectrum(double delta, double t, const ModelParams& params,
                          const Coupling& coupling, const Direction& khat);

/// Weak coupling |kappa| <= Gamma/10 and |delta| <= Gamma/10.
bool ae_output_regime_ok(double delta, const ModelParams& params, const Coupling& coupling);

/// Trapezoid integral of the spectrum over delta, rescaled to all directions
/// (G/|g(-k)|^2 omega0^2/c0^3). GridTooNarrow if the integrand at either grid
/// end exceeds 1e-4 of its peak.
double total_output_number(const OutputGrid& grid, const ModelParams& params);

/// Full width at half maximum by linear interpolation of the half-height
/// crossings on both sides of the peak. NaN if a crossing is off the grid.
double spectral_fwhm(std::span<const double> deltas, std::span<const double> values);

}  // namespace radcav
