#include "radcav/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "radcav/angular.hpp"
#include "radcav/driven.hpp"
#include "radcav/errors.hpp"
#include "radcav/model.hpp"
#include "radcav/output.hpp"
#include "radcav/pump.hpp"
#include "radcav/singlephoton.hpp"
#include "radcav/values.hpp"

#ifndef RADCAV_VERSION
#define RADCAV_VERSION "dev"
#endif

namespace radcav::cli {
namespace {

namespace fs = std::filesystem;
using cplx = std::complex<double>;
using Kind = Violation::Kind;
constexpr double kPi = std::numbers::pi;

const char* type_name(ValueType t) {
  switch (t) {
    case ValueType::Real: return "real number";
    case ValueType::Integer: return "integer";
    case ValueType::Complex: return "complex 're,im'";
    case ValueType::Bool: return "boolean";
    case ValueType::Vec3: return "vector 'x,y,z'";
    case ValueType::Text: return "text";
    case ValueType::RealList: return "comma-separated reals";
  }
  return "value";
}

bool type_ok(ValueType t, const std::string& v) {
  switch (t) {
    case ValueType::Real: return text::parse_real(v).has_value();
    case ValueType::Integer: return text::parse_int(v).has_value();
    case ValueType::Complex: return text::parse_complex(v).has_value();
    case ValueType::Bool: return text::parse_bool(v).has_value();
    case ValueType::Vec3: return text::parse_vec3(v).has_value();
    case ValueType::Text: return !v.empty();
    case ValueType::RealList: return text::parse_real_list(v).has_value();
  }
  return false;
}

const KeySpec* find_key(std::string_view name) {
  for (const auto& k : schema()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

// Reads scenario keys with defaults and collects range violations.
class Keys {
 public:
  explicit Keys(const ConfigFile& c) : c_(c) {}

  bool has(const std::string& k) const { return c_.values.count(k) > 0; }
  std::string text(const std::string& k, const std::string& def) const {
    auto it = c_.values.find(k);
    return it == c_.values.end() ? def : it->second;
  }
  double real(const std::string& k, double def) const {
    return has(k) ? *text::parse_real(c_.values.at(k)) : def;
  }
  std::optional<double> real(const std::string& k) const {
    if (!has(k)) return std::nullopt;
    return text::parse_real(c_.values.at(k));
  }
  long integer(const std::string& k, long def) const {
    return has(k) ? *text::parse_int(c_.values.at(k)) : def;
  }
  bool boolean(const std::string& k, bool def) const {
    return has(k) ? *text::parse_bool(c_.values.at(k)) : def;
  }
  cplx complex(const std::string& k, cplx def) const {
    return has(k) ? *text::parse_complex(c_.values.at(k)) : def;
  }
  std::vector<double> list(const std::string& k, std::vector<double> def) const {
    return has(k) ? *text::parse_real_list(c_.values.at(k)) : def;
  }

  void require(const std::string& k) {
    if (!has(k)) v_.push_back({Kind::MissingKey, k, "", ""});
  }
  void bad(const std::string& k, const std::string& value, const std::string& allowed) {
    v_.push_back({Kind::OutOfRange, k, value, allowed});
  }
  void bad(const std::string& k, double value, const std::string& allowed) {
    bad(k, text::format_real(value), allowed);
  }
  void finish() const {
    if (!v_.empty()) throw ValidationError(v_);
  }

 private:
  const ConfigFile& c_;
  std::vector<Violation> v_;
};

std::string resolve_path(const std::string& base, const std::string& p) {
  const fs::path path(p);
  if (path.is_absolute()) return p;
  return (fs::path(base) / path).string();
}

AngularPattern pattern_from(const std::string& kind, const std::optional<Vec3>& axis,
                            const std::string& file_key, const Keys& keys, const std::string& base,
                            const std::string& key) {
  if (kind == "isotropic") return AngularPattern::isotropic();
  if (kind == "dipole") return AngularPattern::dipole(axis.value_or(Vec3{0.0, 0.0, 1.0}));
  if (kind == "tabulated") {
    if (!keys.has(file_key)) throw ValidationError({{Kind::MissingKey, file_key, "", ""}});
    return AngularPattern::tabulated(load_tabulated_file(resolve_path(base, keys.text(file_key, ""))));
  }
  throw ValidationError({{Kind::OutOfRange, key, kind, "one of isotropic, dipole, tabulated"}});
}

struct Artifact {
  std::string name;
  std::string body;
};

struct Outcome {
  std::vector<Artifact> files;
  std::vector<std::pair<std::string, std::string>> summary;
  std::string stdout_text;
  std::vector<std::string> warnings;

  void put(const std::string& k, double v) { summary.emplace_back(k, text::format_real(v)); }
  void put(const std::string& k, const std::string& v) { summary.emplace_back(k, v); }
  void put(const std::string& k, cplx v) { summary.emplace_back(k, text::format_complex(v)); }
};

struct Context {
  const RunConfig& run;
  Keys keys;
  ModelParams params;
  Coupling coupling;
};

std::string timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Csv {
 public:
  Csv(const Context& ctx, const std::string& columns) {
    os_ << "# radcav " << RADCAV_VERSION << "\n";
    os_ << "# scenario = " << scenario_name(ctx.run.scenario) << "\n";
    for (const auto& [k, v] : ctx.run.config.values) os_ << "# param " << k << " = " << v << "\n";
    os_ << "# kappa = " << text::format_complex(ctx.coupling.kappa) << "\n";
    os_ << "# abs_kappa = " << text::format_real(std::abs(ctx.coupling.kappa)) << "\n";
    os_ << "# G = " << text::format_real(ctx.params.pattern_norm) << "\n";
    if (ctx.run.timestamp) os_ << "# timestamp = " << timestamp_now() << "\n";
    os_ << columns << "\n";
  }

  Csv& row(std::initializer_list<double> cells) {
    bool first = true;
    for (double c : cells) {
      if (!first) os_ << ',';
      os_ << text::format_real(c);
      first = false;
    }
    os_ << '\n';
    return *this;
  }

  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

std::vector<double> linspace(double a, double b, long n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    t[static_cast<std::size_t>(i)] =
        (i == n - 1) ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return t;
}

std::vector<double> time_grid(Keys& keys, double t_min_default, std::optional<double> t_max_default,
                              long n_default) {
  const double t_min = keys.real("t_min", t_min_default);
  std::optional<double> t_max = keys.real("t_max");
  if (!t_max) t_max = t_max_default;
  if (!t_max) keys.require("t_max");
  const long n = keys.integer("n_samples", n_default);
  if (n < 2) keys.bad("n_samples", std::to_string(n), ">= 2");
  if (t_max && !(*t_max > t_min)) keys.bad("t_max", *t_max, "> t_min (" + text::format_real(t_min) + ")");
  keys.finish();
  return linspace(t_min, *t_max, n);
}

PumpSpec pump_spec(Keys& keys, bool required) {
  const std::string kind = keys.text("pump", "none");
  const Direction dir{keys.real("pump_theta", kPi / 2.0), keys.real("pump_phi", 0.0)};
  const cplx alpha = keys.complex("alpha_p", 1.0);
  if (kind == "cw") {
    const double w = keys.real("omega_p", 1.0);
    if (!(w > 0.0)) keys.bad("omega_p", w, "> 0");
    return CwPump{alpha, w, dir};
  }
  if (kind == "pulsed") {
    keys.require("pulse_delta");
    const double d = keys.real("pulse_delta", 0.0);
    if (keys.has("pulse_delta") && !(d > 0.0)) keys.bad("pulse_delta", d, "> 0");
    return PulsedPump{alpha, d, dir};
  }
  if (kind != "none") keys.bad("pump", kind, "one of none, cw, pulsed");
  if (required && kind == "none") keys.bad("pump", kind, "cw or pulsed for this scenario");
  return NoPump{};
}

InputPhotonSpec input_spec(Context& ctx, const std::string& def) {
  Keys& keys = ctx.keys;
  const std::string kind = keys.text("input", def);
  if (kind == "atom") return InputPhotonSpec::atom();
  if (kind != "photon") {
    keys.bad("input", kind, "photon or atom");
    keys.finish();
  }
  const double gp = keys.real("gamma_p", ctx.params.gamma);
  if (!(gp > 0.0)) {
    keys.bad("gamma_p", gp, "> 0");
    keys.finish();
  }
  const std::string pk = keys.text("input_pattern", "same");
  if (pk == "same") return InputPhotonSpec::photon(gp);
  std::optional<Vec3> axis;
  if (keys.has("input_pattern_axis")) axis = text::parse_vec3(keys.text("input_pattern_axis", ""));
  auto pat = pattern_from(pk, axis, "input_pattern_file", keys, ctx.run.config_dir, "input_pattern");
  return InputPhotonSpec::photon(gp, std::make_shared<const AngularPattern>(std::move(pat)));
}

std::size_t local_maxima(const std::vector<SinglePhotonState>& s) {
  std::size_t n = 0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i].p > s[i - 1].p && s[i].p >= s[i + 1].p) ++n;
  }
  return n;
}

EvolveOptions evolve_options(const Keys& keys) {
  EvolveOptions o;
  o.step = keys.real("step", 0.0);
  o.verify = keys.boolean("verify", true);
  return o;
}

void scenario_coupling(Context& ctx, Outcome& out) {
  std::ostringstream s;
  s << "kappa = " << text::format_complex(ctx.coupling.kappa) << "\n";
  s << "abs_kappa = " << text::format_real(std::abs(ctx.coupling.kappa)) << "\n";
  s << "G = " << text::format_real(ctx.params.pattern_norm) << "\n";
  s << "eta_max = " << text::format_complex(ctx.params.eta_max) << "\n";
  out.stdout_text = s.str();
  out.put("eta_max", ctx.params.eta_max);
  out.put("emission_rate", emission_rate(ctx.params, ctx.coupling));
  out.put("zeta_sq_isotropic_norm",
          std::norm(ctx.coupling.kappa) / (kPi * 0.5 * ctx.params.gamma));
}

void scenario_pump(Context& ctx, Outcome& out) {
  Keys& keys = ctx.keys;
  const PumpSpec pump = pump_spec(keys, true);
  const long n_trunc = keys.integer("truncation", static_cast<long>(kDefaultTruncation));
  if (n_trunc < 1) keys.bad("truncation", std::to_string(n_trunc), ">= 1");
  const bool approximate = keys.boolean("approximate", false);
  keys.finish();

  double t_min = 0.0;
  std::optional<double> t_max;
  if (const auto* cw = std::get_if<CwPump>(&pump)) {
    const double d = std::abs(cw->omega_p - ctx.params.omega0);
    t_max = d > 0.0 ? 50.0 / d : 100.0;
  } else if (const auto* pu = std::get_if<PulsedPump>(&pump)) {
    t_min = -4.0 * pu->delta;
    t_max = 4.0 * pu->delta;
  }
  const auto t = time_grid(keys, t_min, t_max, 201);

  const NoiseMoments m = pump_moments(pump, ctx.params, static_cast<std::size_t>(n_trunc));
  Csv series(ctx, "t,re_F0,im_F0,abs_F0");
  Csv closed(ctx, "t,re_F0,im_F0,abs_F0");
  double max_dev = 0.0;
  double max_closed = 0.0;
  std::size_t max_terms = 0;
  for (double ti : t) {
    const SeriesResult r = f0_series_detail(m, ti);
    const cplx fs = r.value * std::polar(1.0, -ctx.params.omega0 * ti);
    const cplx fc = f0_closed(pump, ctx.params, ti, approximate);
    series.row({ti, fs.real(), fs.imag(), std::abs(fs)});
    closed.row({ti, fc.real(), fc.imag(), std::abs(fc)});
    max_dev = std::max(max_dev, std::abs(fs - fc));
    max_closed = std::max(max_closed, std::abs(fc));
    max_terms = std::max(max_terms, r.terms);
  }
  out.files.push_back({"pump_series.csv", series.str()});
  out.files.push_back({"pump_closed.csv", closed.str()});
  out.put("prefactor_C", m.prefactor());
  out.put("m0", m.moment(0));
  out.put("max_abs_dev", max_dev);
  out.put("max_rel_dev", max_closed > 0.0 ? max_dev / max_closed : 0.0);
  out.put("max_terms", static_cast<double>(max_terms));
}

void scenario_single_photon(Context& ctx, Outcome& out) {
  const InputPhotonSpec input = input_spec(ctx, "photon");
  const auto t = time_grid(ctx.keys, 0.0, std::nullopt, 1001);
  const SinglePhotonState s0 = initial_conditions(input, ctx.params);
  const auto traj = evolve(s0, ctx.params, ctx.coupling, t, evolve_options(ctx.keys));

  Csv num(ctx, "t,x,p,y_re,y_im,total");
  Csv orc(ctx, "t,x,p,y_re,y_im,total");
  double dev = 0.0;
  double purity = 0.0;
  for (const auto& s : traj) {
    const SinglePhotonState o = amplitude_oracle(s0, ctx.params, ctx.coupling, s.t);
    num.row({s.t, s.x, s.p, s.y.real(), s.y.imag(), s.total()});
    orc.row({o.t, o.x, o.p, o.y.real(), o.y.imag(), o.total()});
    dev = std::max({dev, std::abs(s.x - o.x), std::abs(s.p - o.p)});
    purity = std::max(purity, std::abs(std::norm(s.y) - s.x * s.p));
  }
  out.files.push_back({"single_photon.csv", num.str()});
  out.files.push_back({"single_photon_oracle.csv", orc.str()});
  out.put("x0", s0.x);
  out.put("final_x", traj.back().x);
  out.put("final_p", traj.back().p);
  out.put("final_total", traj.back().total());
  out.put("max_oracle_dev", dev);
  out.put("max_purity_dev", purity);
  out.put("p_local_maxima", static_cast<double>(local_maxima(traj)));
}

void scenario_ae_compare(Context& ctx, Outcome& out) {
  const InputPhotonSpec input = input_spec(ctx, "atom");
  const auto t = time_grid(ctx.keys, 0.0, std::nullopt, 1001);
  if (!ae_atom_regime_ok(ctx.params, ctx.coupling)) {
    out.warnings.push_back("adiabatic elimination assumes |kappa| <= Gamma/10");
  }
  const SinglePhotonState s0 = initial_conditions(input, ctx.params);
  const auto traj = evolve(s0, ctx.params, ctx.coupling, t, evolve_options(ctx.keys));
  Csv csv(ctx, "t,p,p_ae,rel_dev,max_rel_dev");
  double worst = 0.0;
  for (const auto& s : traj) {
    const double ae = ae_atom(ctx.params, ctx.coupling, s.t);
    const double rel = std::abs(s.p - ae) / ae;
    worst = std::max(worst, rel);
    csv.row({s.t, s.p, ae, rel, worst});
  }
  out.files.push_back({"ae_compare.csv", csv.str()});
  out.put("decay_rate", 4.0 * std::norm(ctx.coupling.kappa) / ctx.params.gamma);
  out.put("final_p", traj.back().p);
  out.put("max_rel_dev", worst);
  out.put("regime_ok", ae_atom_regime_ok(ctx.params, ctx.coupling) ? "true" : "false");
}

void scenario_spectrum(Context& ctx, Outcome& out) {
  Keys& keys = ctx.keys;
  const InputPhotonSpec input = input_spec(ctx, "atom");
  const ModelParams& p = ctx.params;
  const Coupling& c = ctx.coupling;
  const double r = emission_rate(p, c);
  if (!(r > 0.0)) {
    keys.bad("kappa", 0.0, "non-zero coupling for the output spectrum");
    keys.finish();
  }
  const double t1 = 1.0 / (2.0 * r);  // Gamma / (4 |kappa|^2)

  const long n_det = keys.integer("n_detuning", 401);
  const std::string grid_kind = keys.text("detuning_grid", "default");
  if (grid_kind != "default" && grid_kind != "uniform") keys.bad("detuning_grid", grid_kind, "default or uniform");
  if (grid_kind == "default" && (n_det < 161 || n_det % 2 == 0)) {
    keys.bad("n_detuning", std::to_string(n_det), "odd and >= 161 for the default grid");
  }
  if (grid_kind == "uniform" && n_det < 3) keys.bad("n_detuning", std::to_string(n_det), ">= 3");
  const double width = keys.real("detuning_width", 20.0 * r);
  if (!(width > 0.0)) keys.bad("detuning_width", width, "> 0");
  const double t_spec = keys.real("spectrum_time", t1);
  const double t_late = keys.real("late_time", 10.0 * t1);
  const auto cons_mult = keys.list("conservation_times", {1.0, 2.0, 5.0, 10.0});
  if (!(t_spec > 0.0)) keys.bad("spectrum_time", t_spec, "> 0");
  if (!(t_late > 0.0)) keys.bad("late_time", t_late, "> 0");
  for (double m : cons_mult) {
    if (!(m > 0.0)) keys.bad("conservation_times", m, "> 0 (multiples of Gamma/(4|kappa|^2))");
  }
  keys.finish();

  const Direction khat{keys.real("output_theta", kPi / 2.0), keys.real("output_phi", 0.0)};
  if (!(std::norm((*p.pattern)(khat.opposite())) > 0.0)) {
    throw ConfigError("observation direction is dark: g(-k) = 0");
  }
  const std::vector<double> deltas = grid_kind == "default"
                                         ? default_detuning_grid(p, c, static_cast<std::size_t>(n_det))
                                         : uniform_detuning_grid(width, static_cast<std::size_t>(n_det));

  OutputOptions oo;
  oo.step = keys.real("output_step", default_output_step(deltas, p));
  oo.verify = keys.boolean("verify", true);
  const double spacing = keys.real("internal_spacing", oo.step / 4.0);
  if (!(oo.step > 0.0) || !(spacing > 0.0)) throw ConfigError("output_step and internal_spacing must be > 0");

  std::set<double> times{0.0, t_spec, t_late};
  for (double m : cons_mult) times.insert(m * t1);
  const std::vector<double> t_out(times.begin(), times.end());
  const double t_end = t_out.back();

  // Internal grid at uniform spacing, closed exactly at t_end.
  std::vector<double> t_int;
  const auto n_int = static_cast<std::size_t>(std::ceil(t_end / spacing * (1.0 - 1e-12)));
  t_int.reserve(n_int + 1);
  for (std::size_t i = 0; i < n_int; ++i) t_int.push_back(spacing * static_cast<double>(i));
  t_int.push_back(t_end);

  EvolveOptions eo = evolve_options(keys);
  if (eo.step <= 0.0) eo.step = std::min(default_step(p, c), spacing);
  const SinglePhotonState s0 = initial_conditions(input, p);
  const auto internal = evolve(s0, p, c, t_int, eo);
  const auto grids = evolve_output(OutputGrid::vacuum(deltas, khat), internal, p, c, t_out, oo);

  auto grid_at = [&](double t) -> const OutputGrid& {
    for (const auto& g : grids) {
      if (g.t == t) return g;
    }
    throw NumericalError("missing output sample");
  };

  auto spectrum_csv = [&](const OutputGrid& g, double core, double& worst) {
    Csv csv(ctx, "delta,o_numeric,o_closed_form,rel_err");
    worst = 0.0;
    for (std::size_t j = 0; j < g.deltas.size(); ++j) {
      const double cf = ae_output_spectrum(g.deltas[j], g.t, p, c, khat);
      const double rel = cf > 0.0 ? std::abs(g.nodes[j].o - cf) / cf : std::abs(g.nodes[j].o);
      if (std::abs(g.deltas[j]) <= core) worst = std::max(worst, rel);
      csv.row({g.deltas[j], g.nodes[j].o, cf, rel});
    }
    return csv.str();
  };

  double worst_spec = 0.0;
  double worst_late = 0.0;
  out.files.push_back({"spectrum.csv", spectrum_csv(grid_at(t_spec), 2.0 * r, worst_spec)});
  const OutputGrid& late = grid_at(t_late);
  out.files.push_back({"spectrum_late.csv", spectrum_csv(late, 2.0 * r, worst_late)});

  Csv cons(ctx, "t,p,n_out,total");
  double worst_total = 0.0;
  for (const auto& g : grids) {
    const SinglePhotonState s = interpolate_internal(internal, g.t);
    const double n_out = total_output_number(g, p);
    const double total = n_out + s.p + s.x;
    if (g.t > 0.0) worst_total = std::max(worst_total, std::abs(total - 1.0));
    cons.row({g.t, s.p, n_out, total});
  }
  out.files.push_back({"conservation.csv", cons.str()});

  const double fwhm = spectral_fwhm(late.deltas, late.spectrum());
  if (!ae_output_regime_ok(0.0, p, c)) out.warnings.push_back("closed-form spectrum assumes |kappa| <= Gamma/10");
  out.put("emission_rate", r);
  out.put("t1", t1);
  out.put("spectrum_time", t_spec);
  out.put("late_time", t_late);
  out.put("max_rel_err_core", worst_spec);
  out.put("max_rel_err_core_late", worst_late);
  out.put("fwhm_late", fwhm);
  out.put("fwhm_expected", 2.0 * r);
  out.put("fwhm_rel_err", std::abs(fwhm - 2.0 * r) / (2.0 * r));
  out.put("n_out_late", total_output_number(late, p));
  out.put("final_p", interpolate_internal(internal, t_late).p);
  out.put("max_conservation_dev", worst_total);
}

void scenario_driven(Context& ctx, Outcome& out) {
  Keys& keys = ctx.keys;
  const PumpSpec pump = pump_spec(keys, true);
  keys.finish();
  double t_min = 0.0;
  if (const auto* pu = std::get_if<PulsedPump>(&pump)) t_min = -6.0 * pu->delta;
  const auto t = time_grid(keys, t_min, std::nullopt, 1001);

  DriveOptions o;
  o.step = keys.real("step", 0.0);
  o.verify = keys.boolean("verify", true);
  o.direct_pump = keys.boolean("direct_pump", true);
  o.frame_offset = keys.real("frame_offset", 0.0);
  const DriveResult res = drive(DrivenState{0.0, 0.0, t.front()}, pump, ctx.params, ctx.coupling, t, o);

  Csv csv(ctx, "t,a_re,a_im,s_re,s_im,abs_a,abs_s");
  double peak_a = 0.0;
  for (const auto& s : res.states) {
    csv.row({s.t, s.a.real(), s.a.imag(), s.s.real(), s.s.imag(), std::abs(s.a), std::abs(s.s)});
    peak_a = std::max(peak_a, std::abs(s.a));
  }
  out.files.push_back({"driven.csv", csv.str()});
  out.warnings.insert(out.warnings.end(), res.warnings.begin(), res.warnings.end());
  const DrivenState& last = res.states.back();
  out.put("prefactor_C", pump_prefactor(pump, ctx.params));
  out.put("final_a", last.a);
  out.put("final_s", last.s);
  out.put("peak_abs_a", peak_a);
  out.put("max_abs_s", res.max_abs_s);
  if (const auto* cw = std::get_if<CwPump>(&pump)) {
    const DrivenState ss = cw_steady_state(*cw, ctx.params, ctx.coupling, o.direct_pump);
    // Steady state lives in the pump frame; move it into the reporting frame.
    const cplx rot = std::polar(1.0, -(cw->omega_p - ctx.params.omega0 - o.frame_offset) * last.t);
    out.put("steady_a", ss.a * rot);
    out.put("steady_s", ss.s * rot);
    const double scale = std::max(std::abs(ss.a), std::abs(ss.s));
    const double dev = std::max(std::abs(last.a - ss.a * rot), std::abs(last.s - ss.s * rot));
    out.put("steady_rel_dev", scale > 0.0 ? dev / scale : dev);
  }
}

std::string summary_text(const Context& ctx, const Outcome& o) {
  std::ostringstream s;
  s << "scenario = " << scenario_name(ctx.run.scenario) << "\n";
  s << "version = " << RADCAV_VERSION << "\n";
  s << "kappa = " << text::format_complex(ctx.coupling.kappa) << "\n";
  s << "abs_kappa = " << text::format_real(std::abs(ctx.coupling.kappa)) << "\n";
  s << "G = " << text::format_real(ctx.params.pattern_norm) << "\n";
  s << "gamma = " << text::format_real(ctx.params.gamma) << "\n";
  s << "omega_a = " << text::format_real(ctx.params.omega_a) << "\n";
  for (const auto& [k, v] : o.summary) s << k << " = " << v << "\n";
  return s.str();
}

ModelParams model_from(const RunConfig& run, const Keys& keys) {
  auto resolver = [&](const std::string& kind, const RawConfig&) {
    std::optional<Vec3> axis;
    return pattern_from(kind, axis, "pattern_file", keys, run.config_dir, "pattern");
  };
  RawConfig raw(run.config.values.begin(), run.config.values.end());
  return validate(raw, resolver);
}

void write_artifacts(const RunConfig& run, const std::vector<Artifact>& files) {
  std::error_code ec;
  fs::create_directories(run.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + run.out_dir + "': " + ec.message());
  for (const auto& f : files) {
    const fs::path path = fs::path(run.out_dir) / f.name;
    std::ofstream os(path, std::ios::binary);
    os << f.body;
    if (!os) throw ConfigError("cannot write " + path.string());
  }
}

}  // namespace

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> keys = {
      {"gamma", ValueType::Real, "cavity linewidth, 0 < gamma < 0.1"},
      {"omega_a", ValueType::Real, "emitter frequency, |omega_a - 1| < 0.5"},
      {"eta_max", ValueType::Complex, "field-dipole overlap at resonance"},
      {"kappa", ValueType::Complex, "coupling constant (instead of eta_max)"},
      {"omega0", ValueType::Real, "cavity frequency; frequencies are rescaled to omega0 = 1"},
      {"pattern", ValueType::Text, "isotropic | dipole | tabulated"},
      {"pattern_axis", ValueType::Vec3, "dipole axis"},
      {"pattern_file", ValueType::Text, "tabulated pattern file"},
      {"n_theta", ValueType::Integer, "Gauss-Legendre nodes in cos(theta)"},
      {"n_phi", ValueType::Integer, "trapezoid nodes in phi"},
      {"pump", ValueType::Text, "none | cw | pulsed"},
      {"alpha_p", ValueType::Complex, "pump amplitude"},
      {"omega_p", ValueType::Real, "CW pump frequency"},
      {"pulse_delta", ValueType::Real, "pulse width parameter"},
      {"pump_theta", ValueType::Real, "pump direction polar angle"},
      {"pump_phi", ValueType::Real, "pump direction azimuth"},
      {"truncation", ValueType::Integer, "noise-moment truncation N"},
      {"approximate", ValueType::Bool, "use the phase-shift pulse form"},
      {"input", ValueType::Text, "photon | atom"},
      {"gamma_p", ValueType::Real, "input photon linewidth"},
      {"input_pattern", ValueType::Text, "same | isotropic | dipole | tabulated"},
      {"input_pattern_axis", ValueType::Vec3, "input dipole axis"},
      {"input_pattern_file", ValueType::Text, "input tabulated pattern file"},
      {"t_min", ValueType::Real, "first sample time"},
      {"t_max", ValueType::Real, "last sample time"},
      {"n_samples", ValueType::Integer, "number of samples"},
      {"step", ValueType::Real, "integrator step override"},
      {"verify", ValueType::Bool, "step-halving check"},
      {"n_detuning", ValueType::Integer, "detuning nodes"},
      {"detuning_grid", ValueType::Text, "default | uniform"},
      {"detuning_width", ValueType::Real, "half width of a uniform grid"},
      {"output_theta", ValueType::Real, "observation polar angle"},
      {"output_phi", ValueType::Real, "observation azimuth"},
      {"spectrum_time", ValueType::Real, "time of the spectrum comparison"},
      {"late_time", ValueType::Real, "time of the late spectrum"},
      {"conservation_times", ValueType::RealList, "multiples of Gamma/(4|kappa|^2)"},
      {"output_step", ValueType::Real, "output integrator step"},
      {"internal_spacing", ValueType::Real, "internal sample spacing"},
      {"direct_pump", ValueType::Bool, "keep the direct pump term on the emitter"},
      {"frame_offset", ValueType::Real, "extra frame rotation"},
  };
  return keys;
}

ConfigFile parse_config(std::string_view content) {
  ConfigFile cfg;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    const std::size_t end = std::min(content.find('\n', pos), content.size());
    std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string trimmed = text::trim(line);
    if (trimmed.empty()) {
      if (end == content.size()) break;
      continue;
    }
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key = text::trim(std::string_view(trimmed).substr(0, eq));
    const std::string value = text::trim(std::string_view(trimmed).substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "missing key");
    if (value.empty()) throw ParseError(line_no, "missing value for '" + key + "'");
    const KeySpec* spec = find_key(key);
    if (!spec) throw UnknownKey(line_no, key);
    if (cfg.values.count(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
    if (!type_ok(spec->type, value)) throw TypeError(key, type_name(spec->type), value);
    cfg.values[key] = value;
    cfg.lines[key] = line_no;
    if (end == content.size()) break;
  }
  return cfg;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"coupling", "pump", "single-photon",
                                                 "ae-compare", "spectrum", "driven"};
  return names;
}

std::optional<Scenario> parse_scenario(std::string_view name) {
  const auto& names = scenario_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<Scenario>(i);
  }
  return std::nullopt;
}

std::string scenario_name(Scenario s) { return scenario_names().at(static_cast<std::size_t>(s)); }

int run(const RunConfig& run, std::ostream& out, std::ostream& err) {
  try {
    const Keys keys(run.config);
    ModelParams params = model_from(run, keys);
    const Coupling coupling = coupling_constant(params);
    Context ctx{run, Keys(run.config), std::move(params), coupling};
    Outcome outcome;
    switch (run.scenario) {
      case Scenario::Coupling: scenario_coupling(ctx, outcome); break;
      case Scenario::Pump: scenario_pump(ctx, outcome); break;
      case Scenario::SinglePhoton: scenario_single_photon(ctx, outcome); break;
      case Scenario::AeCompare: scenario_ae_compare(ctx, outcome); break;
      case Scenario::Spectrum: scenario_spectrum(ctx, outcome); break;
      case Scenario::Driven: scenario_driven(ctx, outcome); break;
    }
    outcome.files.push_back({"summary.txt", summary_text(ctx, outcome)});
    for (const auto& w : outcome.warnings) err << "warning: " << w << "\n";
    write_artifacts(run, outcome.files);
    out << outcome.stdout_text;
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << "\n";
    return 2;
  }
}

int run_file(std::string_view scenario, const std::string& config_path, const std::string& out_dir,
             bool timestamp, std::ostream& out, std::ostream& err) {
  const auto sc = parse_scenario(scenario);
  if (!sc) {
    err << "error: unknown scenario '" << scenario << "'\n";
    return 1;
  }
  RunConfig rc;
  rc.scenario = *sc;
  rc.out_dir = out_dir;
  rc.timestamp = timestamp;
  try {
    rc.config = load_config(config_path);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  rc.config_dir = fs::path(config_path).parent_path().string();
  if (rc.config_dir.empty()) rc.config_dir = ".";
  return run(rc, out, err);
}

}  // namespace radcav::cli
