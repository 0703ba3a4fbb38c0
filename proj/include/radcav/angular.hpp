#pragma once

// Angular emission patterns g(k) on the unit sphere and solid-angle
// quadrature for their norms and overlaps.

#include <array>
#include <complex>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace radcav {

using Vec3 = std::array<double, 3>;

/// Point on the unit sphere in polar coordinates (theta from +z, phi from +x).
struct Direction {
  double theta = 0.0;
  double phi = 0.0;

  static Direction from_vector(const Vec3& v);
  Vec3 unit() const;
  /// The antipodal direction -k.
  Direction opposite() const;
};

/// Complex samples on a rectangular (theta, phi) grid, theta-major.
struct TabulatedGrid {
  std::vector<double> theta;  // strictly increasing, first 0, last pi
  std::vector<double> phi;    // strictly increasing, first 0, last < 2 pi
  std::vector<std::complex<double>> values;

  std::complex<double> at(std::size_t i_theta, std::size_t i_phi) const {
    return values[i_theta * phi.size() + i_phi];
  }
};

class AngularPattern {
 public:
  enum class Kind { Isotropic, Dipole, Tabulated, Custom };
  using Evaluator = std::function<std::complex<double>(double theta, double phi)>;

  static AngularPattern isotropic();
  /// g = sin(angle between k and axis).
  static AngularPattern dipole(const Vec3& axis = {0.0, 0.0, 1.0});
  /// Bilinear interpolation of the grid; throws ConfigError on malformed grids.
  static AngularPattern tabulated(TabulatedGrid grid);
  static AngularPattern custom(Evaluator evaluator, std::string label = "custom");

  std::complex<double> operator()(double theta, double phi) const { return eval_(theta, phi); }
  std::complex<double> operator()(const Direction& d) const { return eval_(d.theta, d.phi); }

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }

  // Lines of non-smoothness (tabulation cell edges); empty for smooth patterns.
  std::span<const double> theta_breaks() const { return theta_breaks_; }
  std::span<const double> phi_breaks() const { return phi_breaks_; }

 private:
  AngularPattern(Kind kind, Evaluator eval, std::string label)
      : kind_(kind), eval_(std::move(eval)), label_(std::move(label)) {}

  Kind kind_;
  Evaluator eval_;
  std::string label_;
  std::vector<double> theta_breaks_;
  std::vector<double> phi_breaks_;
};

/// Reads `theta_nodes phi_nodes` followed by rows `theta phi re im`.
TabulatedGrid load_tabulated(std::istream& in);
TabulatedGrid load_tabulated_file(const std::string& path);

struct Quadrature {
  int n_theta = 32;  // Gauss-Legendre nodes in cos(theta)
  int n_phi = 64;    // trapezoid nodes in phi

  void validate() const;
  Quadrature doubled() const { return {2 * n_theta, 2 * n_phi}; }
};

/// Flattened node set of a product rule on the sphere.
struct SphereRule {
  std::vector<double> theta;
  std::vector<double> phi;
  std::vector<double> weight;  // includes the sin(theta) Jacobian

  std::size_t size() const { return weight.size(); }
};

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Product rule for the given resolution. With no breaks this is Gauss-Legendre
/// in cos(theta) times the uniform trapezoid in phi. Breaks split the sphere into
/// cells, each integrated with Gauss-Legendre in theta and phi.
SphereRule make_rule(const Quadrature& q, std::span<const double> theta_breaks = {},
                     std::span<const double> phi_breaks = {});

/// G = integral of |g|^2 over solid angle. Throws QuadratureUnderResolved if
/// doubling both node counts changes G by more than 1e-6 relative.
double pattern_norm(const AngularPattern& g, const Quadrature& q = {});

/// g * gp = integral of conj(g) gp over solid angle.
std::complex<double> overlap(const AngularPattern& g, const AngularPattern& gp,
                             const Quadrature& q = {});

}  // namespace radcav
