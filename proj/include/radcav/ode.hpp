#pragma once

// Fixed-step classical Runge-Kutta over flat real vectors. Complex components
// are stored as adjacent (re, im) pairs by the callers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "radcav/errors.hpp"

namespace radcav::ode {

template <class F>
concept DerivativeFn =
    std::invocable<F&, double, std::span<const double>, std::span<double>>;

/// State sampled at the requested times, row-major.
struct Samples {
  std::vector<double> times;
  std::size_t dim = 0;
  std::vector<double> values;

  std::size_t size() const { return times.size(); }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }
  std::span<double> row(std::size_t i) { return {values.data() + i * dim, dim}; }
};

inline std::complex<double> get_complex(std::span<const double> y, std::size_t i) {
  return {y[i], y[i + 1]};
}
inline void set_complex(std::span<double> y, std::size_t i, std::complex<double> z) {
  y[i] = z.real();
  y[i + 1] = z.imag();
}

/// Substeps used for one grid interval: the smallest count whose step does not
/// exceed h.
inline std::size_t substeps(double span, double h) {
  const double n = std::ceil(span / h * (1.0 - 1e-12));
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

inline void check_grid(std::span<const double> t_grid, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("step size must be positive");
  if (t_grid.empty()) throw std::invalid_argument("time grid is empty");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("time grid must increase strictly");
  }
}

/// Integrates from t_grid[0] (state y0) and samples exactly at every grid node.
/// Within each interval the step is shrunk uniformly so that the last substep
/// lands on the node. Throws NonFiniteState at the first non-finite step.
template <DerivativeFn F>
Samples rk4_integrate(F&& rhs, std::span<const double> y0, std::span<const double> t_grid, double h) {
  check_grid(t_grid, h);
  const std::size_t n = y0.size();
  Samples out;
  out.times.assign(t_grid.begin(), t_grid.end());
  out.dim = n;
  out.values.resize(n * t_grid.size());

  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  std::copy(y.begin(), y.end(), out.row(0).begin());

  for (std::size_t g = 1; g < t_grid.size(); ++g) {
    const double t0 = t_grid[g - 1];
    const double span = t_grid[g] - t0;
    const std::size_t steps = substeps(span, h);
    const double hh = span / static_cast<double>(steps);
    for (std::size_t s = 0; s < steps; ++s) {
      // Times from the interval start, not accumulated, so that the node is hit
      // bit-exactly.
      const double t = t0 + static_cast<double>(s) * hh;
      const double t_end = (s + 1 == steps) ? t_grid[g] : t0 + static_cast<double>(s + 1) * hh;
      const double tm = t + 0.5 * hh;
      rhs(t, std::span<const double>(y), std::span<double>(k1));
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * hh * k1[i];
      rhs(tm, std::span<const double>(tmp), std::span<double>(k2));
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * hh * k2[i];
      rhs(tm, std::span<const double>(tmp), std::span<double>(k3));
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hh * k3[i];
      rhs(t_end, std::span<const double>(tmp), std::span<double>(k4));
      bool finite = true;
      for (std::size_t i = 0; i < n; ++i) {
        y[i] += hh / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        finite = finite && std::isfinite(y[i]);
      }
      if (!finite) throw NonFiniteState(t_end);
    }
    std::copy(y.begin(), y.end(), out.row(g).begin());
  }
  return out;
}

struct StepReport {
  double max_deviation = 0.0;  // max |y_h - y_{h/2}| over samples and components
  bool stiff = false;          // rate_bound * h > 0.5
  Samples coarse;
  Samples fine;
};

/// Runs at h and h/2 and compares the samples. `rate_bound` is the largest decay
/// or oscillation rate of the problem, used only for the stiffness flag.
template <DerivativeFn F>
StepReport verify_step(F&& rhs, std::span<const double> y0, std::span<const double> t_grid, double h,
                       double rate_bound = 0.0) {
  StepReport r;
  r.coarse = rk4_integrate(rhs, y0, t_grid, h);
  r.fine = rk4_integrate(rhs, y0, t_grid, 0.5 * h);
  for (std::size_t i = 0; i < r.coarse.values.size(); ++i) {
    r.max_deviation = std::max(r.max_deviation, std::abs(r.coarse.values[i] - r.fine.values[i]));
  }
  r.stiff = rate_bound * h > 0.5;
  return r;
}

}  // namespace radcav::ode
