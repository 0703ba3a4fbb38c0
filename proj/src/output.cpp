#include "radcav/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>

#include "radcav/errors.hpp"
#include "radcav/ode.hpp"
#include "radcav/values.hpp"

namespace radcav {
namespace {

using cplx = std::complex<double>;
constexpr cplx I(0.0, 1.0);
constexpr std::size_t kCoreNodes = 161;
constexpr double kCoreHalfWidth = 20.0;  // in units of the emission rate
constexpr double kBoundaryRatio = 1e-4;

// Linear interpolation of the internal series, walking forward with the
// integrator (RK4 stage times never decrease).
class InternalCursor {
 public:
  explicit InternalCursor(std::span<const SinglePhotonState> series) : series_(series) {}

  SinglePhotonState at(double t) {
    while (k_ + 2 < series_.size() && series_[k_ + 1].t <= t) ++k_;
    while (k_ > 0 && series_[k_].t > t) --k_;
    const SinglePhotonState& a = series_[k_];
    if (t == a.t) return a;
    const SinglePhotonState& b = series_[std::min(k_ + 1, series_.size() - 1)];
    if (t == b.t) return b;
    const double w = (t - a.t) / (b.t - a.t);
    return {a.x + w * (b.x - a.x), a.p + w * (b.p - a.p), a.y + w * (b.y - a.y), t};
  }

 private:
  std::span<const SinglePhotonState> series_;
  std::size_t k_ = 0;
};

void check_internal(std::span<const SinglePhotonState> internal, std::span<const double> t_grid,
                    double h) {
  if (internal.size() < 2) throw TimeMismatch(t_grid.front(), internal.empty() ? NAN : internal[0].t);
  if (internal.front().t > t_grid.front()) throw TimeMismatch(t_grid.front(), internal.front().t);
  if (internal.back().t < t_grid.back()) throw TimeMismatch(t_grid.back(), internal.back().t);
  double widest = 0.0;
  for (std::size_t i = 1; i < internal.size(); ++i) {
    const double gap = internal[i].t - internal[i - 1].t;
    if (!(gap > 0.0)) throw ConfigError("internal series times must increase strictly");
    widest = std::max(widest, gap);
  }
  if (widest * 4.0 > h * (1.0 + 1e-12)) {
    throw ConfigError("internal sampling (" + text::format_real(widest) +
                      ") must be at least 4x denser than the output step (" + text::format_real(h) +
                      ")");
  }
}

// A contiguous block of nodes integrated as one flat state, 5 reals per node:
// o, re s, im s, re a, im a. The internal state is interpolated once per stage
// and the per-node arithmetic is the same as integrating each node alone.
ode::Samples integrate_block(const OutputGrid& grid0, std::span<const cplx> zetas, std::size_t begin,
                             std::size_t end, std::span<const SinglePhotonState> internal,
                             const ModelParams& params, const Coupling& coupling,
                             std::span<const double> t_grid, double h) {
  InternalCursor cursor(internal);
  auto rhs = [&](double t, std::span<const double> v, std::span<double> dv) {
    const SinglePhotonState st = cursor.at(t);
    for (std::size_t j = begin, k = 0; j < end; ++j, k += 5) {
      const OutputNode node{v[k], {v[k + 1], v[k + 2]}, {v[k + 3], v[k + 4]}};
      const OutputNode d = output_rhs(node, t, grid0.deltas[j], st, params, coupling, zetas[j]);
      dv[k] = d.o;
      dv[k + 1] = d.s.real();
      dv[k + 2] = d.s.imag();
      dv[k + 3] = d.a.real();
      dv[k + 4] = d.a.imag();
    }
  };
  std::vector<double> y0;
  y0.reserve(5 * (end - begin));
  for (std::size_t j = begin; j < end; ++j) {
    const OutputNode& n = grid0.nodes[j];
    y0.insert(y0.end(), {n.o, n.s.real(), n.s.imag(), n.a.real(), n.a.imag()});
  }
  return ode::rk4_integrate(rhs, y0, t_grid, h);
}

// All nodes at step h as a [node][sample] table of OutputNode. Blocks are
// contiguous and written to fixed slots, so scheduling cannot change results.
std::vector<std::vector<OutputNode>> integrate_all(const OutputGrid& grid0, std::span<const cplx> zetas,
                                                   std::span<const SinglePhotonState> internal,
                                                   const ModelParams& params, const Coupling& coupling,
                                                   std::span<const double> t_grid, double h,
                                                   unsigned threads) {
  const std::size_t n = grid0.deltas.size();
  std::vector<std::vector<OutputNode>> results(n, std::vector<OutputNode>(t_grid.size()));
  auto work = [&](std::size_t begin, std::size_t end) {
    if (begin >= end) return;
    const ode::Samples s = integrate_block(grid0, zetas, begin, end, internal, params, coupling, t_grid, h);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto row = s.row(i);
      for (std::size_t j = begin, k = 0; j < end; ++j, k += 5) {
        results[j][i] = {row[k], {row[k + 1], row[k + 2]}, {row[k + 3], row[k + 4]}};
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  if (workers == 1) {
    work(0, n);
    return results;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(n, w * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        work(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace

OutputGrid OutputGrid::vacuum(std::vector<double> deltas, Direction khat, double t) {
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    if (!(deltas[i] > deltas[i - 1])) throw ConfigError("detuning grid must increase strictly");
  }
  OutputGrid g;
  g.nodes.resize(deltas.size());
  g.deltas = std::move(deltas);
  g.khat = khat;
  g.t = t;
  return g;
}

std::vector<double> OutputGrid::spectrum() const {
  std::vector<double> o(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) o[i] = nodes[i].o;
  return o;
}

OutputNode output_rhs(const OutputNode& node, double node_t, double delta,
                      const SinglePhotonState& internal, const ModelParams& params,
                      const Coupling& coupling, cplx zeta_j) {
  if (std::abs(internal.t - node_t) > 1e-12 * std::max(1.0, std::abs(node_t))) {
    throw TimeMismatch(node_t, internal.t);
  }
  const cplx k = coupling.kappa;
  const cplx zc = std::conj(zeta_j);
  OutputNode d;
  d.o = 2.0 * (zeta_j * node.s).imag();
  // s picks up the emitter detuning from sigma_-; it vanishes on resonance.
  d.s = cplx(0.0, -(delta + params.emitter_detuning())) * node.s + I * zc * internal.p -
        I * std::conj(k) * node.a;
  d.a = cplx(-0.5 * params.gamma, -delta) * node.a + I * zc * std::conj(internal.y) - I * k * node.s;
  return d;
}

double emission_rate(const ModelParams& params, const Coupling& coupling) {
  return 2.0 * std::norm(coupling.kappa) / params.gamma;
}

std::vector<double> uniform_detuning_grid(double half_width, std::size_t n_nodes) {
  if (n_nodes < 2 || !(half_width > 0.0)) throw ConfigError("uniform grid needs >= 2 nodes and width > 0");
  std::vector<double> d(n_nodes);
  const double denom = static_cast<double>(n_nodes - 1);
  // Written this way the grid is exactly antisymmetric.
  for (std::size_t i = 0; i < n_nodes; ++i) {
    d[i] = half_width * (2.0 * static_cast<double>(i) - denom) / denom;
  }
  return d;
}

std::vector<double> default_detuning_grid(const ModelParams& params, const Coupling& coupling,
                                          std::size_t n_nodes) {
  const double r = emission_rate(params, coupling);
  if (!(r > 0.0)) throw ConfigError("detuning grid needs kappa != 0");
  if (n_nodes < kCoreNodes || n_nodes % 2 == 0) {
    throw ConfigError("detuning grid needs an odd node count >= 161, got " + std::to_string(n_nodes));
  }
  const std::size_t half_core = (kCoreNodes - 1) / 2;
  const double core_step = kCoreHalfWidth * r / static_cast<double>(half_core);
  const std::size_t tail = (n_nodes - kCoreNodes) / 2;
  const double core_edge = kCoreHalfWidth * r;
  const double outer = std::max(2.0 * params.gamma, 100.0 * r);

  std::vector<double> positive;  // 0 < d, ascending
  for (std::size_t i = 1; i <= half_core; ++i) positive.push_back(core_step * static_cast<double>(i));
  if (tail > 0) {
    const double q = std::pow(outer / core_edge, 1.0 / static_cast<double>(tail));
    for (std::size_t i = 1; i <= tail; ++i) {
      positive.push_back(i == tail ? outer : core_edge * std::pow(q, static_cast<double>(i)));
    }
  }
  std::vector<double> d;
  d.reserve(n_nodes);
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) d.push_back(-*it);
  d.push_back(0.0);
  d.insert(d.end(), positive.begin(), positive.end());
  return d;
}

double default_output_step(std::span<const double> deltas, const ModelParams& params) {
  double widest = 0.0;
  for (double d : deltas) widest = std::max(widest, std::abs(d));
  const double by_detuning = widest > 0.0 ? 0.16 / widest : std::numeric_limits<double>::infinity();
  return std::min(by_detuning, 0.08 / params.gamma);
}

unsigned worker_count() {
  if (const char* env = std::getenv("RADCAV_THREADS")) {
    if (auto v = text::parse_int(env); v && *v >= 1) return static_cast<unsigned>(*v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<OutputGrid> evolve_output(const OutputGrid& grid0,
                                      std::span<const SinglePhotonState> internal,
                                      const ModelParams& params, const Coupling& coupling,
                                      std::span<const double> t_grid, const OutputOptions& options) {
  if (t_grid.empty() || t_grid[0] != grid0.t) {
    throw std::invalid_argument("time grid must start at the grid time");
  }
  if (grid0.nodes.size() != grid0.deltas.size()) throw std::invalid_argument("grid size mismatch");
  const double h = options.step > 0.0 ? options.step : default_output_step(grid0.deltas, params);
  double widest = 0.0;
  for (double d : grid0.deltas) widest = std::max(widest, std::abs(d));
  if (widest * h > 0.2 * (1.0 + 1e-12)) {
    throw StepSizeTooCoarse(widest * h, 0.2, "output step: max|delta| h must be <= 0.2");
  }
  check_internal(internal, t_grid, h);

  std::vector<cplx> zetas(grid0.deltas.size());
  for (std::size_t j = 0; j < zetas.size(); ++j) zetas[j] = zeta(grid0.deltas[j], grid0.khat, params, coupling);

  const unsigned threads = options.threads > 0 ? options.threads : worker_count();
  auto coarse = integrate_all(grid0, zetas, internal, params, coupling, t_grid, h, threads);
  if (options.verify) {
    auto fine = integrate_all(grid0, zetas, internal, params, coupling, t_grid, 0.5 * h, threads);
    double peak = 0.0;
    double dev = 0.0;
    for (std::size_t j = 0; j < coarse.size(); ++j) {
      for (std::size_t i = 0; i < coarse[j].size(); ++i) {
        peak = std::max(peak, std::abs(fine[j][i].o));
        dev = std::max(dev, std::abs(coarse[j][i].o - fine[j][i].o));
      }
    }
    const double tol = options.tolerance * peak;
    if (dev > tol) throw StepSizeTooCoarse(dev, tol, "output spectrum");
  }

  std::vector<OutputGrid> out;
  out.reserve(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    OutputGrid g;
    g.deltas = grid0.deltas;
    g.khat = grid0.khat;
    g.t = t_grid[i];
    g.nodes.resize(coarse.size());
    for (std::size_t j = 0; j < coarse.size(); ++j) g.nodes[j] = coarse[j][i];
    out.push_back(std::move(g));
  }
  return out;
}

SinglePhotonState interpolate_internal(std::span<const SinglePhotonState> series, double t) {
  if (series.empty() || t < series.front().t || t > series.back().t) {
    throw TimeMismatch(t, series.empty() ? NAN : (t < series.front().t ? series.front().t : series.back().t));
  }
  const auto it = std::lower_bound(series.begin(), series.end(), t,
                                   [](const SinglePhotonState& s, double v) { return s.t < v; });
  if (it->t == t) return *it;
  const SinglePhotonState& b = *it;
  const SinglePhotonState& a = *(it - 1);
  const double w = (t - a.t) / (b.t - a.t);
  return {a.x + w * (b.x - a.x), a.p + w * (b.p - a.p), a.y + w * (b.y - a.y), t};
}

double ae_output_spectrum(double delta, double t, const ModelParams& params, const Coupling& coupling,
                          const Direction& khat) {
  const double r = emission_rate(params, coupling);
  const double z2 = zeta_sq_simplified(khat, params, coupling);
  const double decay = std::exp(-r * t);
  const double bracket = 1.0 - 2.0 * std::cos(delta * t) * decay + decay * decay;
  return z2 / (delta * delta + r * r) * bracket;
}

bool ae_output_regime_ok(double delta, const ModelParams& params, const Coupling& coupling) {
  return std::abs(coupling.kappa) <= 0.1 * params.gamma && std::abs(delta) <= 0.1 * params.gamma;
}

double total_output_number(const OutputGrid& grid, const ModelParams& params) {
  const double g2 = std::norm((*params.pattern)(grid.khat.opposite()));
  if (!(g2 > 0.0)) throw ConfigError("observation direction is dark: g(-k) = 0");
  const std::size_t n = grid.deltas.size();
  if (n < 2) throw ConfigError("total output number needs >= 2 detuning nodes");
  const double scale = params.pattern_norm / g2 * params.omega0 * params.omega0 / std::pow(params.c0, 3);

  double peak = 0.0;
  for (const auto& node : grid.nodes) peak = std::max(peak, std::abs(node.o));
  if (peak == 0.0) return 0.0;
  const double edge = std::max(std::abs(grid.nodes.front().o), std::abs(grid.nodes.back().o));
  if (edge > kBoundaryRatio * peak) throw GridTooNarrow(edge / peak);

  double sum = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    sum += 0.5 * (grid.nodes[i].o + grid.nodes[i - 1].o) * (grid.deltas[i] - grid.deltas[i - 1]);
  }
  return sum * scale;
}

double spectral_fwhm(std::span<const double> deltas, std::span<const double> values) {
  if (deltas.size() != values.size() || deltas.size() < 3) return NAN;
  const std::size_t ip = static_cast<std::size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
  const double half = 0.5 * values[ip];
  if (!(half > 0.0)) return NAN;
  auto crossing = [&](std::size_t i, std::size_t j) {
    // values[i] >= half > values[j]
    const double w = (values[i] - half) / (values[i] - values[j]);
    return deltas[i] + w * (deltas[j] - deltas[i]);
  };
  double left = NAN;
  for (std::size_t i = ip; i > 0; --i) {
    if (values[i - 1] < half) {
      left = crossing(i, i - 1);
      break;
    }
  }
  double right = NAN;
  for (std::size_t i = ip; i + 1 < values.size(); ++i) {
    if (values[i + 1] < half) {
      right = crossing(i, i + 1);
      break;
    }
  }
  return right - left;
}

}  // namespace radcav
