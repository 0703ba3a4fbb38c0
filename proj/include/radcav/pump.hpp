#pragma once

// External illumination: the noise-moment sequence <F_n(0)> for CW and pulsed
// pumps, the chain series for <F_0(t)>, and the resummed closed forms.

#include <complex>
#include <cstddef>
#include <variant>
#include <vector>

#include "radcav/angular.hpp"
#include "radcav/model.hpp"
#include "radcav/wide.hpp"

namespace radcav {

struct NoPump {};

struct CwPump {
  std::complex<double> alpha_p;
  double omega_p = 1.0;
  Direction khat_p;
};

struct PulsedPump {
  std::complex<double> alpha_p;
  double delta = 100.0;  // temporal width parameter, envelope exp(-t^2 / (2 delta)^2)
  Direction khat_p;
};

using PumpSpec = std::variant<NoPump, CwPump, PulsedPump>;

inline constexpr std::size_t kDefaultTruncation = 200;

/// m_n = <F_n(0)> for n = 0..N, kept in quad precision.
class NoiseMoments {
 public:
  NoiseMoments(std::complex<double> prefactor, std::vector<wide_complex> moments);

  std::complex<double> prefactor() const { return prefactor_; }
  std::size_t truncation() const { return moments_.size() - 1; }
  std::complex<double> moment(std::size_t n) const { return moments_.at(n).to_double(); }
  const std::vector<wide_complex>& wide() const { return moments_; }

 private:
  std::complex<double> prefactor_;
  std::vector<wide_complex> moments_;
};

/// C = c0^(3/2)/omega_p sqrt(Gamma/(2 pi G)) g(k_p) alpha_p, m_n = C (omega_p - omega0)^n.
NoiseMoments cw_moments(const CwPump& pump, const ModelParams& params,
                        std::size_t n = kDefaultTruncation);

/// Even and odd moments of a Gaussian pulse through the double-factorial
/// recurrences. Throws MomentOverflow naming the first index beyond double range.
NoiseMoments pulsed_moments(const PulsedPump& pump, const ModelParams& params,
                            std::size_t n = kDefaultTruncation);

/// Dispatch on the pump variant; NoPump gives identically zero moments.
NoiseMoments pump_moments(const PumpSpec& pump, const ModelParams& params,
                          std::size_t n = kDefaultTruncation);

struct SeriesResult {
  std::complex<double> value;  // rotating-frame sum, no exp(-i omega0 t)
  std::size_t terms = 0;       // terms summed before the stop rule fired
  bool stopped_early = false;
  double last_ratio = 0.0;     // |last term| / |partial sum|
};

/// Sum of (-i t)^m / m! m_m. Stops once three consecutive terms fall below
/// 1e-15 of the running sum; throws TruncationNotConverged if the series runs
/// out with the final term above 1e-12 of the sum.
SeriesResult f0_series_detail(const NoiseMoments& moments, double t);

/// <F_0(t)> by the chain series, including the exp(-i omega0 t) carrier. Takes
/// nothing from the system state.
std::complex<double> f0_series(const NoiseMoments& moments, double t);

/// Chain series in the frame rotating at omega0.
std::complex<double> f0_series_rotating(const NoiseMoments& moments, double t);

/// Closed forms. CW: C exp(-i omega_p t). Pulsed: the exact-bracket form, or with
/// `approximate` the bracket folded into a phase shift (ApproximationInvalid when
/// |t|/(2 omega0 delta^2) > 0.1 or omega0 delta < 10).
std::complex<double> f0_closed(const PumpSpec& pump, const ModelParams& params, double t,
                               bool approximate = false);

/// Same, divided by the carrier exp(-i omega0 t).
std::complex<double> f0_closed_rotating(const PumpSpec& pump, const ModelParams& params, double t,
                                        bool approximate = false);

/// The prefactor C alone.
std::complex<double> pump_prefactor(const PumpSpec& pump, const ModelParams& params);

}  // namespace radcav
