#include "radcav/pump.hpp"

#include <cfloat>
#include <cmath>
#include <numbers>

#include "radcav/errors.hpp"
#include "radcav/values.hpp"

namespace radcav {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kStopRatio = 1e-15;
constexpr double kTruncationRatio = 1e-12;
constexpr int kStopRun = 3;
constexpr double kApproxLimit = 0.1;

double coupling_root(const ModelParams& p) {
  return std::pow(p.c0, 1.5) * std::sqrt(p.gamma / (2.0 * kPi * p.pattern_norm));
}

void check_truncation(std::size_t n) {
  if (n < 1) throw ConfigError("noise-moment truncation must be >= 1");
}

void check_overflow(const std::vector<wide_complex>& m) {
  const wide_real limit = static_cast<wide_real>(DBL_MAX);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!(wide_abs(m[i].re) <= limit) || !(wide_abs(m[i].im) <= limit)) throw MomentOverflow(i);
  }
}

std::complex<double> cw_prefactor(const CwPump& pump, const ModelParams& p) {
  if (!(pump.omega_p > 0.0)) {
    throw ConfigError("CW pump frequency must be > 0, got " + text::format_real(pump.omega_p));
  }
  return coupling_root(p) / pump.omega_p * (*p.pattern)(pump.khat_p) * pump.alpha_p;
}

std::complex<double> pulsed_prefactor(const PulsedPump& pump, const ModelParams& p) {
  if (!(pump.delta > 0.0)) {
    throw ConfigError("pulse width delta must be > 0, got " + text::format_real(pump.delta));
  }
  return coupling_root(p) * std::conj((*p.pattern)(pump.khat_p)) * pump.alpha_p;
}

}  // namespace

NoiseMoments::NoiseMoments(std::complex<double> prefactor, std::vector<wide_complex> moments)
    : prefactor_(prefactor), moments_(std::move(moments)) {
  if (moments_.size() < 2) throw ConfigError("noise-moment truncation must be >= 1");
}

NoiseMoments cw_moments(const CwPump& pump, const ModelParams& params, std::size_t n) {
  check_truncation(n);
  const std::complex<double> c = cw_prefactor(pump, params);
  // Detuning in wide precision so that omega_p - omega0 is exactly the double
  // difference rather than re-rounded.
  const wide_real d = static_cast<wide_real>(pump.omega_p) - static_cast<wide_real>(params.omega0);
  std::vector<wide_complex> m(n + 1);
  m[0] = wide_complex(c);
  for (std::size_t i = 1; i <= n; ++i) m[i] = m[i - 1] * d;
  check_overflow(m);
  return {c, std::move(m)};
}

NoiseMoments pulsed_moments(const PulsedPump& pump, const ModelParams& params, std::size_t n) {
  check_truncation(n);
  const std::complex<double> c = pulsed_prefactor(pump, params);
  const wide_real delta = pump.delta;
  const wide_real two_delta_sq = 2 * delta * delta;
  const wide_real root_pi = std::sqrt(kPi);
  const wide_complex cw(c);

  std::vector<wide_complex> m(n + 1);
  m[0] = cw * (static_cast<wide_real>(params.omega0) * root_pi / delta);
  m[1] = cw * (root_pi / (2 * delta * delta * delta));
  for (std::size_t k = 2; k <= n; ++k) {
    // m_{2j+2} = m_{2j} (2j+1)/(2 delta^2), m_{2j+3} = m_{2j+1} (2j+3)/(2 delta^2)
    const wide_real factor = (k % 2 == 0) ? static_cast<wide_real>(k - 1) : static_cast<wide_real>(k);
    m[k] = m[k - 2] * (factor / two_delta_sq);
  }
  check_overflow(m);
  return {c, std::move(m)};
}

NoiseMoments pump_moments(const PumpSpec& pump, const ModelParams& params, std::size_t n) {
  if (const auto* cw = std::get_if<CwPump>(&pump)) return cw_moments(*cw, params, n);
  if (const auto* pu = std::get_if<PulsedPump>(&pump)) return pulsed_moments(*pu, params, n);
  check_truncation(n);
  return {0.0, std::vector<wide_complex>(n + 1)};
}

SeriesResult f0_series_detail(const NoiseMoments& moments, double t) {
  const auto& m = moments.wide();
  const wide_complex step(0, -static_cast<wide_real>(t));
  wide_complex power(1, 0);  // (-i t)^k / k!
  wide_complex sum = m[0];
  const wide_real stop_sq = static_cast<wide_real>(kStopRatio) * kStopRatio;

  SeriesResult r;
  int small_run = 0;
  wide_real last_norm = m[0].norm();
  std::size_t k = 1;
  for (; k < m.size(); ++k) {
    power = power * (step * (1 / static_cast<wide_real>(k)));
    const wide_complex term = power * m[k];
    sum += term;
    last_norm = term.norm();
    if (last_norm <= stop_sq * sum.norm()) {
      if (++small_run == kStopRun) {
        ++k;
        r.stopped_early = true;
        break;
      }
    } else {
      small_run = 0;
    }
  }
  r.terms = k;
  const wide_real sum_norm = sum.norm();
  r.last_ratio = sum_norm > 0 ? std::sqrt(static_cast<double>(last_norm / sum_norm))
                              : (last_norm > 0 ? INFINITY : 0.0);
  if (!r.stopped_early && r.last_ratio > kTruncationRatio) {
    throw TruncationNotConverged(r.last_ratio, moments.truncation());
  }
  r.value = sum.to_double();
  return r;
}

std::complex<double> f0_series_rotating(const NoiseMoments& moments, double t) {
  return f0_series_detail(moments, t).value;
}

std::complex<double> f0_series(const NoiseMoments& moments, double t) {
  const std::complex<double> v = f0_series_rotating(moments, t);
  if (t == 0.0) return v;
  return v * std::polar(1.0, -t);  // omega0 = 1
}

std::complex<double> pump_prefactor(const PumpSpec& pump, const ModelParams& params) {
  if (const auto* cw = std::get_if<CwPump>(&pump)) return cw_prefactor(*cw, params);
  if (const auto* pu = std::get_if<PulsedPump>(&pump)) return pulsed_prefactor(*pu, params);
  return 0.0;
}

std::complex<double> f0_closed_rotating(const PumpSpec& pump, const ModelParams& params, double t,
                                        bool approximate) {
  if (const auto* cw = std::get_if<CwPump>(&pump)) {
    return cw_prefactor(*cw, params) * std::polar(1.0, -(cw->omega_p - params.omega0) * t);
  }
  if (const auto* pu = std::get_if<PulsedPump>(&pump)) {
    const std::complex<double> c = pulsed_prefactor(*pu, params);
    const double w0 = params.omega0;
    const double d = pu->delta;
    const double eps = t / (2.0 * w0 * d * d);
    const double envelope = std::exp(-t * t / (4.0 * d * d));
    const std::complex<double> head = std::sqrt(kPi) * c * w0 / d * envelope;
    if (!approximate) return head * std::complex<double>(1.0, -eps);
    if (w0 * d < 10.0) {
      throw ApproximationInvalid("pulse phase-shift form needs omega0*delta >= 10, got " +
                                 text::format_real(w0 * d));
    }
    if (std::abs(eps) > kApproxLimit) {
      throw ApproximationInvalid("pulse phase-shift form needs |t|/(2 omega0 delta^2) <= 0.1, got " +
                                 text::format_real(std::abs(eps)));
    }
    // 1 - i eps ~ exp(-i eps): the bracket becomes a blue shift of the carrier.
    return head * std::polar(1.0, -eps);
  }
  return 0.0;
}

std::complex<double> f0_closed(const PumpSpec& pump, const ModelParams& params, double t,
                               bool approximate) {
  if (const auto* cw = std::get_if<CwPump>(&pump)) {
    return cw_prefactor(*cw, params) * std::polar(1.0, -cw->omega_p * t);
  }
  return f0_closed_rotating(pump, params, t, approximate) * std::polar(1.0, -params.omega0 * t);
}

}  // namespace radcav
