#include "radcav/angular.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>

#include "radcav/errors.hpp"

namespace radcav {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kResolutionTolerance = 1e-6;
constexpr int kMinCellNodes = 6;

double wrap_phi(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w;
}

// conj(a) * b, written out so that swapping the arguments gives the exact
// complex conjugate.
std::complex<double> conj_mul(std::complex<double> a, std::complex<double> b) {
  return {a.real() * b.real() + a.imag() * b.imag(), a.real() * b.imag() - a.imag() * b.real()};
}

std::vector<double> merge_breaks(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void validate_grid(const TabulatedGrid& grid) {
  const auto nt = grid.theta.size();
  const auto np = grid.phi.size();
  if (nt < 8 || np < 8) {
    throw ConfigError("tabulated pattern needs at least 8x8 nodes, got " + std::to_string(nt) +
                      "x" + std::to_string(np));
  }
  if (grid.values.size() != nt * np) throw ConfigError("tabulated pattern: value count mismatch");
  if (!std::is_sorted(grid.theta.begin(), grid.theta.end()) ||
      std::adjacent_find(grid.theta.begin(), grid.theta.end()) != grid.theta.end() ||
      !std::is_sorted(grid.phi.begin(), grid.phi.end()) ||
      std::adjacent_find(grid.phi.begin(), grid.phi.end()) != grid.phi.end()) {
    throw ConfigError("tabulated pattern: node coordinates must be strictly increasing");
  }
  if (std::abs(grid.theta.front()) > 1e-9 || std::abs(grid.theta.back() - kPi) > 1e-9) {
    throw ConfigError("tabulated pattern: theta nodes must span [0, pi]");
  }
  if (std::abs(grid.phi.front()) > 1e-9 || grid.phi.back() >= kTwoPi) {
    throw ConfigError("tabulated pattern: phi nodes must start at 0 and stay below 2 pi");
  }
  for (const auto& v : grid.values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw ConfigError("tabulated pattern: non-finite sample");
    }
  }
}

std::complex<double> bilinear(const TabulatedGrid& grid, double theta, double phi) {
  const auto& th = grid.theta;
  const auto& ph = grid.phi;
  theta = std::clamp(theta, th.front(), th.back());
  auto it = std::upper_bound(th.begin(), th.end(), theta);
  std::size_t i = it == th.end() ? th.size() - 2 : static_cast<std::size_t>(it - th.begin()) - 1;
  const double u = (theta - th[i]) / (th[i + 1] - th[i]);

  phi = wrap_phi(phi);
  std::size_t j0 = 0;
  std::size_t j1 = 0;
  double v = 0.0;
  if (phi >= ph.back()) {
    j0 = ph.size() - 1;
    j1 = 0;
    v = (phi - ph.back()) / (ph.front() + kTwoPi - ph.back());
  } else {
    auto jt = std::upper_bound(ph.begin(), ph.end(), phi);
    j0 = static_cast<std::size_t>(jt - ph.begin()) - 1;
    j1 = j0 + 1;
    v = (phi - ph[j0]) / (ph[j1] - ph[j0]);
  }
  return (1.0 - u) * (1.0 - v) * grid.at(i, j0) + (1.0 - u) * v * grid.at(i, j1) +
         u * (1.0 - v) * grid.at(i + 1, j0) + u * v * grid.at(i + 1, j1);
}

// One-dimensional nodes/weights for the theta factor, weights include sin(theta).
void theta_factor(int n, std::span<const double> breaks, std::vector<double>& nodes,
                  std::vector<double>& weights) {
  std::vector<double> x;
  std::vector<double> w;
  nodes.clear();
  weights.clear();
  if (breaks.empty()) {
    gauss_legendre(n, x, w);
    // Ascending in cos(theta) means descending in theta.
    for (int k = n - 1; k >= 0; --k) {
      nodes.push_back(std::acos(x[static_cast<std::size_t>(k)]));
      weights.push_back(w[static_cast<std::size_t>(k)]);
    }
    return;
  }
  std::vector<double> edges{0.0};
  for (double b : breaks) {
    if (b > 0.0 && b < kPi) edges.push_back(b);
  }
  edges.push_back(kPi);
  const auto cells = static_cast<int>(edges.size()) - 1;
  const int per_cell = std::max(kMinCellNodes, (n + cells - 1) / cells);
  gauss_legendre(per_cell, x, w);
  for (std::size_t c = 0; c + 1 < edges.size(); ++c) {
    const double half = 0.5 * (edges[c + 1] - edges[c]);
    const double mid = 0.5 * (edges[c + 1] + edges[c]);
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double t = mid + half * x[k];
      nodes.push_back(t);
      weights.push_back(half * w[k] * std::sin(t));
    }
  }
}

void phi_factor(int n, std::span<const double> breaks, std::vector<double>& nodes,
                std::vector<double>& weights) {
  nodes.clear();
  weights.clear();
  if (breaks.empty()) {
    const double h = kTwoPi / n;
    for (int k = 0; k < n; ++k) {
      nodes.push_back(h * k);
      weights.push_back(h);
    }
    return;
  }
  std::vector<double> edges;
  for (double b : breaks) edges.push_back(wrap_phi(b));
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges.push_back(edges.front() + kTwoPi);
  const auto cells = static_cast<int>(edges.size()) - 1;
  const int per_cell = std::max(kMinCellNodes, (n + cells - 1) / cells);
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(per_cell, x, w);
  for (std::size_t c = 0; c + 1 < edges.size(); ++c) {
    const double half = 0.5 * (edges[c + 1] - edges[c]);
    const double mid = 0.5 * (edges[c + 1] + edges[c]);
    for (std::size_t k = 0; k < x.size(); ++k) {
      nodes.push_back(mid + half * x[k]);
      weights.push_back(half * w[k]);
    }
  }
}

std::complex<double> integrate_overlap(const AngularPattern& g, const AngularPattern& gp,
                                       const SphereRule& rule) {
  std::complex<double> sum = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    sum += rule.weight[k] * conj_mul(g(rule.theta[k], rule.phi[k]), gp(rule.theta[k], rule.phi[k]));
  }
  return sum;
}

double integrate_norm(const AngularPattern& g, const SphereRule& rule) {
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) sum += rule.weight[k] * std::norm(g(rule.theta[k], rule.phi[k]));
  return sum;
}

}  // namespace

Direction Direction::from_vector(const Vec3& v) {
  const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("direction vector must be non-zero");
  const double ct = std::clamp(v[2] / r, -1.0, 1.0);
  return {std::acos(ct), wrap_phi(std::atan2(v[1], v[0]))};
}

Vec3 Direction::unit() const {
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

Direction Direction::opposite() const { return {kPi - theta, wrap_phi(phi + kPi)}; }

AngularPattern AngularPattern::isotropic() {
  return {Kind::Isotropic, [](double, double) { return std::complex<double>(1.0, 0.0); },
          "isotropic"};
}

AngularPattern AngularPattern::dipole(const Vec3& axis) {
  const Direction ad = Direction::from_vector(axis);
  const Vec3 a = ad.unit();
  std::ostringstream label;
  label.precision(17);
  label << "dipole(" << a[0] << "," << a[1] << "," << a[2] << ")";
  return {Kind::Dipole,
          [a](double theta, double phi) {
            const Vec3 k = Direction{theta, phi}.unit();
            const double cx = k[1] * a[2] - k[2] * a[1];
            const double cy = k[2] * a[0] - k[0] * a[2];
            const double cz = k[0] * a[1] - k[1] * a[0];
            return std::complex<double>(std::sqrt(cx * cx + cy * cy + cz * cz), 0.0);
          },
          label.str()};
}

AngularPattern AngularPattern::tabulated(TabulatedGrid grid) {
  validate_grid(grid);
  std::vector<double> tb(grid.theta.begin() + 1, grid.theta.end() - 1);
  std::vector<double> pb(grid.phi.begin(), grid.phi.end());
  auto shared = std::make_shared<const TabulatedGrid>(std::move(grid));
  AngularPattern p(Kind::Tabulated,
                   [shared](double theta, double phi) { return bilinear(*shared, theta, phi); },
                   "tabulated(" + std::to_string(shared->theta.size()) + "x" +
                       std::to_string(shared->phi.size()) + ")");
  p.theta_breaks_ = std::move(tb);
  p.phi_breaks_ = std::move(pb);
  return p;
}

AngularPattern AngularPattern::custom(Evaluator evaluator, std::string label) {
  return {Kind::Custom, std::move(evaluator), std::move(label)};
}

TabulatedGrid load_tabulated(std::istream& in) {
  std::string line;
  long n_theta = 0;
  long n_phi = 0;
  bool have_header = false;
  std::vector<std::array<double, 4>> rows;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    if (!have_header) {
      if (!(ls >> n_theta)) continue;
      if (!(ls >> n_phi)) throw ConfigError("tabulated pattern: header must be 'theta_nodes phi_nodes'");
      have_header = true;
      continue;
    }
    std::array<double, 4> r{};
    if (!(ls >> r[0])) continue;
    if (!(ls >> r[1] >> r[2] >> r[3])) throw ConfigError("tabulated pattern: rows must be 'theta phi re im'");
    rows.push_back(r);
  }
  if (!have_header) throw ConfigError("tabulated pattern: missing header");
  if (n_theta < 8 || n_phi < 8) throw ConfigError("tabulated pattern needs at least 8x8 nodes");
  if (rows.size() != static_cast<std::size_t>(n_theta * n_phi)) {
    throw ConfigError("tabulated pattern: expected " + std::to_string(n_theta * n_phi) +
                      " rows, found " + std::to_string(rows.size()));
  }
  TabulatedGrid grid;
  for (const auto& r : rows) {
    grid.theta.push_back(r[0]);
    grid.phi.push_back(r[1]);
  }
  for (auto* axis : {&grid.theta, &grid.phi}) {
    std::sort(axis->begin(), axis->end());
    axis->erase(std::unique(axis->begin(), axis->end()), axis->end());
  }
  if (grid.theta.size() != static_cast<std::size_t>(n_theta) ||
      grid.phi.size() != static_cast<std::size_t>(n_phi)) {
    throw ConfigError("tabulated pattern: rows do not form the declared rectangular grid");
  }
  grid.values.assign(grid.theta.size() * grid.phi.size(), {0.0, 0.0});
  std::vector<bool> seen(grid.values.size(), false);
  for (const auto& r : rows) {
    const auto i = static_cast<std::size_t>(
        std::lower_bound(grid.theta.begin(), grid.theta.end(), r[0]) - grid.theta.begin());
    const auto j = static_cast<std::size_t>(
        std::lower_bound(grid.phi.begin(), grid.phi.end(), r[1]) - grid.phi.begin());
    const auto idx = i * grid.phi.size() + j;
    if (seen[idx]) throw ConfigError("tabulated pattern: duplicate node");
    seen[idx] = true;
    grid.values[idx] = {r[2], r[3]};
  }
  validate_grid(grid);
  return grid;
}

TabulatedGrid load_tabulated_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open pattern file '" + path + "'");
  return load_tabulated(in);
}

void Quadrature::validate() const {
  if (n_theta < 8 || n_phi < 8) {
    throw ConfigError("quadrature needs n_theta >= 8 and n_phi >= 8");
  }
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    nodes[lo] = -z;
    nodes[hi] = z;
    weights[lo] = w;
    weights[hi] = w;
  }
}

SphereRule make_rule(const Quadrature& q, std::span<const double> theta_breaks,
                     std::span<const double> phi_breaks) {
  q.validate();
  std::vector<double> tn;
  std::vector<double> tw;
  std::vector<double> pn;
  std::vector<double> pw;
  theta_factor(q.n_theta, theta_breaks, tn, tw);
  phi_factor(q.n_phi, phi_breaks, pn, pw);
  SphereRule rule;
  rule.theta.reserve(tn.size() * pn.size());
  rule.phi.reserve(tn.size() * pn.size());
  rule.weight.reserve(tn.size() * pn.size());
  for (std::size_t i = 0; i < tn.size(); ++i) {
    for (std::size_t j = 0; j < pn.size(); ++j) {
      rule.theta.push_back(tn[i]);
      rule.phi.push_back(pn[j]);
      rule.weight.push_back(tw[i] * pw[j]);
    }
  }
  return rule;
}

double pattern_norm(const AngularPattern& g, const Quadrature& q) {
  const double coarse = integrate_norm(g, make_rule(q, g.theta_breaks(), g.phi_breaks()));
  const double fine = integrate_norm(g, make_rule(q.doubled(), g.theta_breaks(), g.phi_breaks()));
  if (coarse == fine) return coarse;
  const double rel = std::abs(coarse - fine) / std::max(std::abs(fine), std::abs(coarse));
  if (!(rel <= kResolutionTolerance)) throw QuadratureUnderResolved(rel);
  return coarse;
}

std::complex<double> overlap(const AngularPattern& g, const AngularPattern& gp,
                             const Quadrature& q) {
  const auto tb = merge_breaks(g.theta_breaks(), gp.theta_breaks());
  const auto pb = merge_breaks(g.phi_breaks(), gp.phi_breaks());
  const SphereRule coarse_rule = make_rule(q, tb, pb);
  const SphereRule fine_rule = make_rule(q.doubled(), tb, pb);
  const auto coarse = integrate_overlap(g, gp, coarse_rule);
  const auto fine = integrate_overlap(g, gp, fine_rule);
  const double scale = std::sqrt(integrate_norm(g, fine_rule) * integrate_norm(gp, fine_rule));
  const double change = std::abs(coarse - fine);
  if (change > 0.0) {
    const double rel = scale > 0.0 ? change / scale : change / std::abs(fine);
    if (!(rel <= kResolutionTolerance)) throw QuadratureUnderResolved(rel);
  }
  return coarse;
}

}  // namespace radcav
