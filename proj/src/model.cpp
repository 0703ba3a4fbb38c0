#include "radcav/model.hpp"

#include <cmath>
#include <numbers>
#include <optional>

#include "radcav/errors.hpp"
#include "radcav/values.hpp"

namespace radcav {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxGamma = 0.1;
constexpr double kMaxEmitterDetuning = 0.5;

using Kind = Violation::Kind;

class Collector {
 public:
  explicit Collector(const RawConfig& raw) : raw_(raw) {}

  std::optional<std::string> text(const std::string& key) const {
    auto it = raw_.find(key);
    if (it == raw_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<double> real(const std::string& key, bool required) {
    auto t = text(key);
    if (!t) {
      if (required) missing(key);
      return std::nullopt;
    }
    auto v = text::parse_real(*t);
    if (!v) violations_.push_back({Kind::TypeError, key, *t, "real number"});
    return v;
  }

  std::optional<std::complex<double>> complex(const std::string& key) {
    auto t = text(key);
    if (!t) return std::nullopt;
    auto v = text::parse_complex(*t);
    if (!v) violations_.push_back({Kind::TypeError, key, *t, "complex 're,im'"});
    return v;
  }

  std::optional<long> integer(const std::string& key) {
    auto t = text(key);
    if (!t) return std::nullopt;
    auto v = text::parse_int(*t);
    if (!v) violations_.push_back({Kind::TypeError, key, *t, "integer"});
    return v;
  }

  std::optional<Vec3> vec3(const std::string& key) {
    auto t = text(key);
    if (!t) return std::nullopt;
    auto v = text::parse_vec3(*t);
    if (!v) violations_.push_back({Kind::TypeError, key, *t, "vector 'x,y,z'"});
    return v;
  }

  void missing(const std::string& key) { violations_.push_back({Kind::MissingKey, key, "", ""}); }

  void out_of_range(const std::string& key, double value, const std::string& allowed) {
    violations_.push_back({Kind::OutOfRange, key, text::format_real(value), allowed});
  }
  void out_of_range(const std::string& key, const std::string& value, const std::string& allowed) {
    violations_.push_back({Kind::OutOfRange, key, value, allowed});
  }

  void finish() const {
    if (!violations_.empty()) throw ValidationError(violations_);
  }

 private:
  const RawConfig& raw_;
  std::vector<Violation> violations_;
};

void check_ranges(Collector& c, double gamma, double omega_a) {
  if (!(gamma > 0.0)) {
    c.out_of_range("gamma", gamma, "(0, 0.1) (sign: gamma > 0)");
  } else if (!(gamma < kMaxGamma)) {
    c.out_of_range("gamma", gamma, "(0, 0.1) (Gamma << omega0 violated)");
  }
  if (!(omega_a > 0.0) || !(std::abs(omega_a - 1.0) < kMaxEmitterDetuning)) {
    c.out_of_range("omega_a", omega_a, "(0.5, 1.5) (|omega_a - omega0| < 0.5)");
  }
}

ModelParams finish_params(Collector& c, double gamma, double omega_a,
                          std::optional<std::complex<double>> eta,
                          std::optional<std::complex<double>> kappa, AngularPattern pattern,
                          const Quadrature& quadrature) {
  check_ranges(c, gamma, omega_a);
  c.finish();
  quadrature.validate();
  ModelParams p;
  p.gamma = gamma;
  p.omega_a = omega_a;
  p.quadrature = quadrature;
  p.pattern_norm = pattern_norm(pattern, quadrature);
  p.pattern = std::make_shared<const AngularPattern>(std::move(pattern));
  if (!(p.pattern_norm > 0.0)) {
    c.out_of_range("pattern", p.pattern->label() + " (G = " + text::format_real(p.pattern_norm) + ")",
                   "G > 0");
    c.finish();
  }
  p.eta_max = kappa ? eta_max_for_coupling(*kappa, gamma, p.pattern_norm) : eta.value_or(0.0);
  return p;
}

}  // namespace

ModelParams validate(const RawConfig& raw, const PatternResolver& resolver) {
  Collector c(raw);
  const auto omega0 = c.real("omega0", false);
  auto gamma = c.real("gamma", true);
  auto omega_a = c.real("omega_a", true);
  auto eta = c.complex("eta_max");
  auto kappa = c.complex("kappa");
  if (!c.text("eta_max") && !c.text("kappa")) c.missing("eta_max");
  if (c.text("eta_max") && c.text("kappa")) {
    c.out_of_range("kappa", *c.text("kappa"), "give either eta_max or kappa, not both");
  }
  const auto n_theta = c.integer("n_theta");
  const auto n_phi = c.integer("n_phi");
  const auto axis = c.vec3("pattern_axis");

  double scale = 1.0;
  if (omega0) {
    if (!(*omega0 > 0.0)) {
      c.out_of_range("omega0", *omega0, "> 0");
    } else {
      scale = 1.0 / *omega0;
    }
  }

  Quadrature quad;
  if (n_theta) quad.n_theta = static_cast<int>(*n_theta);
  if (n_phi) quad.n_phi = static_cast<int>(*n_phi);
  if (quad.n_theta < 8) c.out_of_range("n_theta", quad.n_theta, ">= 8");
  if (quad.n_phi < 8) c.out_of_range("n_phi", quad.n_phi, ">= 8");

  std::optional<AngularPattern> pattern;
  const std::string kind = text::trim(c.text("pattern").value_or("isotropic"));
  if (kind == "isotropic") {
    pattern = AngularPattern::isotropic();
  } else if (kind == "dipole") {
    Vec3 a = axis.value_or(Vec3{0.0, 0.0, 1.0});
    if (a[0] == 0.0 && a[1] == 0.0 && a[2] == 0.0) {
      c.out_of_range("pattern_axis", "0,0,0", "non-zero vector");
    } else {
      pattern = AngularPattern::dipole(a);
    }
  } else if (resolver) {
    pattern = resolver(kind, raw);
  } else {
    c.out_of_range("pattern", kind, "one of isotropic, dipole, tabulated");
  }

  if (!gamma || !omega_a || !pattern) c.finish();
  return finish_params(c, gamma.value_or(0.0) * scale, omega_a.value_or(0.0) * scale,
                       eta ? std::optional(*eta * scale) : std::nullopt,
                       kappa ? std::optional(*kappa * scale) : std::nullopt,
                       std::move(*pattern), quad);
}

ModelParams make_params(double gamma, double omega_a, std::complex<double> eta_max,
                        AngularPattern pattern, const Quadrature& quadrature) {
  RawConfig empty;
  Collector c(empty);
  return finish_params(c, gamma, omega_a, eta_max, std::nullopt, std::move(pattern), quadrature);
}

ModelParams make_params_for_coupling(double gamma, double omega_a, std::complex<double> kappa,
                                     AngularPattern pattern, const Quadrature& quadrature) {
  RawConfig empty;
  Collector c(empty);
  return finish_params(c, gamma, omega_a, std::nullopt, kappa, std::move(pattern), quadrature);
}

Coupling coupling_constant(const ModelParams& p) {
  const double factor = std::sqrt(p.pattern_norm / (4.0 * kPi)) * kPi * p.omega0 *
                        std::sqrt(2.0 * p.gamma) / std::pow(p.c0, 1.5);
  return {factor * p.eta_max};
}

std::complex<double> eta_max_for_coupling(std::complex<double> kappa, double gamma, double G,
                                          double omega0, double c0) {
  const double factor =
      std::sqrt(G / (4.0 * kPi)) * kPi * omega0 * std::sqrt(2.0 * gamma) / std::pow(c0, 1.5);
  return kappa / factor;
}

std::complex<double> zeta(double delta, const Direction& khat, const ModelParams& p,
                          const Coupling& coupling) {
  // E0 . d / hbar from the first form of the coupling constant.
  const std::complex<double> eta0 =
      coupling.kappa * std::pow(p.c0, 1.5) / (std::sqrt(p.pattern_norm) * p.omega0);
  const std::complex<double> g_back = (*p.pattern)(khat.opposite());
  const std::complex<double> denom(-delta, 0.5 * p.gamma);
  return std::conj(eta0) * std::sqrt(p.gamma / (2.0 * kPi)) * std::conj(g_back) / denom;
}

double zeta_sq_simplified(const Direction& khat, const ModelParams& p, const Coupling& coupling) {
  const double g2 = std::norm((*p.pattern)(khat.opposite()));
  return std::pow(p.c0, 3) / (p.omega0 * p.omega0) * (g2 / p.pattern_norm) *
         (std::norm(coupling.kappa) / (kPi * 0.5 * p.gamma));
}

}  // namespace radcav
