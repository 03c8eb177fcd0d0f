#include "sdlab/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "sdlab/cache.hpp"
#include "sdlab/catalog.hpp"
#include "sdlab/errors.hpp"
#include "sdlab/geometry.hpp"
#include "sdlab/lattice_sum.hpp"
#include "sdlab/modular_forms.hpp"
#include "sdlab/partition.hpp"
#include "sdlab/report.hpp"
#include "sdlab/spectral_zeta.hpp"

namespace sdlab::cli {

namespace {

using report::Json;
using report::ReportEnvelope;
namespace geo = sdlab::geometry;
namespace part = sdlab::partition;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::optional<double> to_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ',' || text[i] == ' ' || text[i] == ';')) ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ',' && text[j] != ' ' && text[j] != ';') ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<double> parse_real_list(std::string_view text, std::size_t expected, const std::string& what) {
  std::vector<double> out;
  for (auto item : split_list(text)) out.push_back(parse_real(item));
  if (expected != 0 && out.size() != expected)
    fail(ErrorKind::Parse, what + " has " + std::to_string(expected) + " entries",
         what + " expects " + std::to_string(expected) + " numbers, got " + std::to_string(out.size()));
  if (out.empty()) fail(ErrorKind::Parse, what + " non-empty", what + " expects at least one number");
  return out;
}

int parse_int(std::string_view text, const std::string& what) {
  const double v = parse_real(text);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    fail(ErrorKind::Parse, what + " is an integer", what + " expects an integer, got '" + std::string(text) + "'");
  return static_cast<int>(v);
}

// ---- JSON views of the domain types ------------------------------------------------------

Json complex_json(cplx z) {
  Json j = Json::object();
  j["re"] = z.real();
  j["im"] = z.imag();
  return j;
}

Json integrals_json(const geo::CurvatureIntegrals& c) {
  Json j = Json::object();
  j["I_R_full"] = c.I_R_full;
  j["I_R_endo"] = c.I_R_endo;
  j["I_r"] = c.I_r;
  j["I_s2"] = c.I_s2;
  j["I_gb"] = c.I_gb;
  j["I_p"] = c.I_p;
  j["error_estimate"] = c.error_estimate;
  j["resolution"] = c.resolution;
  j["cutoff"] = c.cutoff;
  j["tail_exponent"] = c.tail_exponent;
  j["evaluations"] = c.evaluations;
  return j;
}

Json truncation_json(const geo::TruncationReport& r) {
  Json j = Json::object();
  j["rho"] = r.rho;
  j["pi_sup"] = r.pi_sup;
  j["v40_integral"] = r.v40_integral;
  j["v41_integral"] = r.v41_integral;
  j["boundary_area"] = r.boundary_area;
  j["scalar_flux"] = r.scalar_flux;
  j["mean_curvature"] = r.mean_curvature;
  j["nodes"] = r.nodes;
  return j;
}

Json weights_json(const part::ModularWeights& w) {
  Json j = Json::object();
  j["alpha"] = w.alpha;
  j["beta"] = w.beta;
  j["sigma_phase"] = w.sigma_phase;
  j["convention"] = std::string(part::to_string(w.convention));
  return j;
}

Json optional_int(const std::optional<int>& v) { return v ? Json(*v) : Json("derive"); }

Json descriptor_json(const ManifoldDescriptor& d) {
  Json j = Json::object();
  j["name"] = d.name;
  j["kind"] = std::string(to_string(d.kind));
  j["b0"] = d.b0;
  j["b1"] = d.b1;
  j["bplus_l2"] = d.bplus_l2;
  j["bminus_l2"] = d.bminus_l2;
  j["torsion_order"] = d.torsion_order;
  if (d.is_alf()) {
    j["b0_D"] = optional_int(d.b0_D);
    j["b1_D"] = optional_int(d.b1_D);
    j["h1_neck_trivial"] = d.h1_neck_trivial;
  }
  j["geometry"] = d.geometry;
  if (d.backend) j["backend"] = d.backend->cache_key();
  if (d.analytic_integrals) j["analytic_integrals"] = integrals_json(*d.analytic_integrals);
  j["vol_flat_torus_factor"] = d.vol_flat_torus_factor;
  return j;
}

// ---- text rendering ------------------------------------------------------------------------

void flatten(const Json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else if (j.is_number_float()) {
    out << prefix << ": " << fmt17(j.get<double>()) << '\n';
  } else if (j.is_string()) {
    out << prefix << ": " << j.get<std::string>() << '\n';
  } else {
    out << prefix << ": " << j.dump() << '\n';
  }
}

// ---- shared command state --------------------------------------------------------------------

struct Context {
  bool json = false;
  bool csv = false;
  bool no_cache = false;
  std::string catalog_path;
  std::string cache_dir;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  std::optional<catalog::CatalogManifest> manifest;

  const catalog::CatalogManifest& catalog() {
    if (!manifest) manifest = catalog_path.empty() ? catalog::builtin_catalog() : catalog::parse_manifest(catalog_path);
    return *manifest;
  }

  std::filesystem::path cache_directory() const {
    return cache_dir.empty() ? cache::default_cache_dir() : std::filesystem::path(cache_dir);
  }

  void warn(const std::string& message) const {
    if (!message.empty()) *err << "warning: " << message << '\n';
  }

  void emit(const ReportEnvelope& env) const {
    if (json) {
      *out << report::serialize(env);
      return;
    }
    *out << "command: " << env.command << '\n';
    if (env.convention.is_string()) *out << "convention: " << env.convention.get<std::string>() << '\n';
    flatten(env.results, "", *out);
    flatten(env.error_estimates, "error", *out);
  }

  void emit_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) const {
    for (std::size_t i = 0; i < header.size(); ++i) *out << (i ? "," : "") << header[i];
    *out << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) *out << (i ? "," : "") << fmt17(row[i]);
      *out << '\n';
    }
  }

  void reject_csv(const std::string& command) const {
    if (csv) throw UsageError("--csv is only available for sweep outputs, not '" + command + "'");
  }
};

geo::GeometryBackend backend_for(Context& ctx, const std::string& name) {
  const auto& cat = ctx.catalog();
  if (cat.contains(name)) {
    const ManifoldDescriptor& d = cat.find(name);
    if (!d.backend)
      fail(ErrorKind::Descriptor, "manifold with a geometry backend",
           "manifold '" + name + "' has analytic integrals only and no chart");
    return *d.backend;
  }
  try {
    return geo::GeometryBackend::from_id(name);
  } catch (const Error&) {
    fail(ErrorKind::Descriptor, "known manifold or backend id", "unknown manifold or backend '" + name + "'");
  }
}

struct ResolvedIntegrals {
  geo::CurvatureIntegrals value;
  Json cache;
};

ResolvedIntegrals integrals_for(Context& ctx, const ManifoldDescriptor& d) {
  ResolvedIntegrals r;
  if (d.analytic_integrals) {
    r.value = *d.analytic_integrals;
    r.cache = nullptr;
    return r;
  }
  if (!d.backend) fail(ErrorKind::Descriptor, "curvature integrals available", "manifold '" + d.name + "' has no integrals");
  const auto& b = *d.backend;
  const auto cached =
      cache::cached_integrals(b, geo::default_resolution(b), geo::default_cutoff(b), !ctx.no_cache, ctx.cache_directory());
  ctx.warn(cached.warning);
  r.value = cached.value;
  r.cache = Json::object();
  r.cache["enabled"] = !ctx.no_cache;
  r.cache["hit"] = cached.hit;
  r.cache["key"] = cached.key;
  return r;
}

ReportEnvelope envelope(const std::string& command) {
  ReportEnvelope env;
  env.command = command;
  env.convention = nullptr;
  env.cache = nullptr;
  return env;
}

std::vector<modular::ComplexCoupling> sample_couplings(int count, std::uint64_t seed, double im_lo, double im_hi) {
  static const cplx fixed[] = {{0.3, 0.7}, {-0.45, 1.1}, {0.12, 0.9}, {0.8, 1.6}, {-0.2, 0.55}};
  std::vector<modular::ComplexCoupling> out;
  for (int i = 0; i < count && i < 5; ++i) out.emplace_back(fixed[i]);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-1.0, 1.0), im(im_lo, im_hi);
  while (static_cast<int>(out.size()) < count) {
    const double x = re(rng);
    out.emplace_back(cplx(x, im(rng)));
  }
  return out;
}

// ---- commands ----------------------------------------------------------------------------------

struct Options {
  std::string tau = "i", tol, manifold, point, step = "1e-3", resolution, cutoff, rho = "20,40,80", lattice, k = "0",
              s, convention = "paper", samples, bplus = "0", bminus = "0", box, name;
  std::string zeta_rho;
};

void cmd_theta(Context& ctx, const Options& o) {
  ctx.reject_csv("theta");
  const modular::ComplexCoupling tau(parse_complex(o.tau));
  const double tol = o.tol.empty() ? 1e-14 : parse_real(o.tol);
  const auto t = modular::theta(tau, tol);
  auto env = envelope("theta");
  env.inputs["tau"] = complex_json(tau.value());
  env.inputs["tol"] = tol;
  env.results["value_re"] = t.value.real();
  env.results["value_im"] = t.value.imag();
  env.results["tail_bound"] = t.tail_bound;
  env.results["terms_used"] = t.terms_used;
  env.error_estimates["tail_bound"] = t.tail_bound;
  ctx.emit(env);
}

void cmd_lattice(Context& ctx, const Options& o) {
  ctx.reject_csv("lattice");
  const modular::ComplexCoupling tau(parse_complex(o.tau));
  const int bp = parse_int(o.bplus, "--bplus"), bm = parse_int(o.bminus, "--bminus");
  const int box = o.box.empty() ? lattice::default_box_cutoff(tau, 1e-16) : parse_int(o.box, "--N");
  const cplx brute = lattice::brute_force_partition(bp, bm, box, tau);
  const cplx product = lattice::theta_product(bp, bm, tau);
  auto env = envelope("lattice");
  env.inputs["bplus"] = bp;
  env.inputs["bminus"] = bm;
  env.inputs["N"] = box;
  env.inputs["tau"] = complex_json(tau.value());
  env.results["value_re"] = brute.real();
  env.results["value_im"] = brute.imag();
  env.results["theta_product_re"] = product.real();
  env.results["theta_product_im"] = product.imag();
  env.error_estimates["difference"] = std::abs(brute - product);
  ctx.emit(env);
}

void cmd_curvature(Context& ctx, const Options& o) {
  ctx.reject_csv("curvature");
  const auto backend = backend_for(ctx, o.manifold);
  const auto p = parse_real_list(o.point, 4, "--point");
  geo::CurvatureOptions opts;
  opts.step = parse_real(o.step);
  if (!o.tol.empty()) opts.tolerance = parse_real(o.tol);
  const auto s = geo::curvature_at(backend, {p[0], p[1], p[2], p[3]}, opts);
  auto env = envelope("curvature");
  env.inputs["manifold"] = o.manifold;
  env.inputs["backend"] = backend.cache_key();
  env.inputs["point"] = Json(p);
  env.inputs["step"] = opts.step;
  env.results["scalar"] = s.scalar;
  env.results["inv_R_full"] = s.inv_R_full;
  env.results["inv_R_endo"] = s.inv_R_endo;
  env.results["inv_r"] = s.inv_r;
  env.results["inv_s2"] = s.inv_s2;
  env.results["gb_density"] = s.gb_density;
  env.results["pontryagin_density"] = s.pontryagin_density;
  env.results["r_dot_star_r"] = s.r_dot_star_r;
  env.results["ricci"] = Json(std::vector<double>(s.ricci.begin(), s.ricci.end()));
  env.results["riemann"] = Json(std::vector<double>(s.riemann.begin(), s.riemann.end()));
  env.error_estimates["richardson_estimate"] = s.richardson_estimate;
  env.error_estimates["bianchi_residual"] = s.bianchi_residual;
  ctx.emit(env);
}

void cmd_integrate(Context& ctx, const Options& o) {
  ctx.reject_csv("integrate");
  const auto backend = backend_for(ctx, o.manifold);
  const int resolution = o.resolution.empty() ? geo::default_resolution(backend) : parse_int(o.resolution, "--resolution");
  const double cutoff = o.cutoff.empty() ? geo::default_cutoff(backend) : parse_real(o.cutoff);
  const auto cached = cache::cached_integrals(backend, resolution, cutoff, !ctx.no_cache, ctx.cache_directory());
  ctx.warn(cached.warning);
  auto env = envelope("integrate");
  env.inputs["manifold"] = o.manifold;
  env.inputs["backend"] = backend.cache_key();
  env.inputs["resolution"] = resolution;
  env.inputs["cutoff"] = cutoff;
  env.results = integrals_json(cached.value);
  env.error_estimates["error_estimate"] = cached.value.error_estimate;
  env.error_estimates["panel_error"] = cached.value.panel_error;
  env.error_estimates["tail_error"] = cached.value.tail_error;
  env.cache = Json::object();
  env.cache["enabled"] = !ctx.no_cache;
  env.cache["hit"] = cached.hit;
  env.cache["key"] = cached.key;
  ctx.emit(env);
}

std::vector<geo::TruncationReport> boundary_sweep(Context& ctx, const Options& o, const geo::GeometryBackend& backend) {
  const auto radii = parse_real_list(o.rho, 0, "--rho");
  const int resolution =
      o.resolution.empty() ? geo::default_boundary_resolution(backend) : parse_int(o.resolution, "--resolution");
  std::vector<geo::TruncationReport> reports;
  for (double r : radii) reports.push_back(geo::boundary_report(backend, r, resolution));
  (void)ctx;
  return reports;
}

void emit_boundary_csv(Context& ctx, const std::vector<geo::TruncationReport>& reports) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : reports)
    rows.push_back({r.rho, r.pi_sup, r.v40_integral, r.v41_integral, r.boundary_area, r.scalar_flux});
  ctx.emit_csv({"rho", "pi_sup", "v40_integral", "v41_integral", "boundary_area", "scalar_flux"}, rows);
}

void cmd_boundary(Context& ctx, const Options& o) {
  const auto backend = backend_for(ctx, o.manifold);
  const auto reports = boundary_sweep(ctx, o, backend);
  if (ctx.csv) return emit_boundary_csv(ctx, reports);
  auto env = envelope("boundary");
  env.inputs["manifold"] = o.manifold;
  env.inputs["backend"] = backend.cache_key();
  env.inputs["rho"] = o.rho;
  Json list = Json::array();
  for (const auto& r : reports) list.push_back(truncation_json(r));
  env.results["reports"] = list;
  ctx.emit(env);
}

void cmd_zeta(Context& ctx, const Options& o) {
  ctx.reject_csv("zeta");
  const int k = parse_int(o.k, "--k");
  auto env = envelope("zeta");
  env.inputs["k"] = k;
  if (!o.lattice.empty()) {
    const auto entries = parse_real_list(o.lattice, 16, "--lattice");
    spectral::LatticeGenerators gens;
    std::copy(entries.begin(), entries.end(), gens.begin());
    const auto r = spectral::torus_zeta_zero(gens, k);
    static constexpr int multiplicity[5] = {1, 4, 6, 4, 1};
    env.inputs["lattice"] = Json(entries);
    env.results["zeta_at_zero"] = r.zeta_at_zero;
    env.results["method"] = std::string(spectral::to_string(r.method));
    env.results["det_factor"] = r.det_factor;
    // flat metric: all curvature integrals vanish, so the heat-kernel value is -dim ker
    env.results["heat_kernel_value"] = -static_cast<double>(multiplicity[std::clamp(k, 0, 4)]);
    if (!o.s.empty()) {
      const double s = parse_real(o.s);
      const auto z = spectral::epstein_zeta(spectral::dual_lattice(gens), s);
      env.inputs["s"] = s;
      env.results["spectral_zeta_at_s"] = multiplicity[std::clamp(k, 0, 4)] * std::pow(4.0 * kPi * kPi, -s) * z.value;
    }
    env.error_estimates["truncation_error"] = r.truncation_error;
    return ctx.emit(env);
  }
  if (o.manifold.empty()) throw UsageError("zeta needs --lattice or --manifold");
  const ManifoldDescriptor& d = ctx.catalog().find(o.manifold);
  const auto integrals = integrals_for(ctx, d);
  std::optional<geo::TruncationReport> boundary;
  if (!o.zeta_rho.empty()) {
    if (!d.backend) fail(ErrorKind::Descriptor, "geometry backend for a boundary", "manifold has no chart for a boundary");
    boundary = geo::boundary_report(*d.backend, parse_real(o.zeta_rho), geo::default_boundary_resolution(*d.backend));
  }
  geo::CurvatureIntegrals curv = integrals.value;
  if (boundary) curv = geo::integrate_invariants(*d.backend, geo::default_resolution(*d.backend), boundary->rho, false);
  const auto r = spectral::heat_zeta_zero(d, curv, k, boundary);
  env.inputs["manifold"] = o.manifold;
  if (boundary) env.inputs["rho"] = boundary->rho;
  env.results["zeta_at_zero"] = r.zeta_at_zero;
  env.results["method"] = std::string(spectral::to_string(r.method));
  env.results["det_factor"] = r.det_factor;
  env.error_estimates["truncation_error"] = r.truncation_error;
  env.cache = integrals.cache;
  ctx.emit(env);
}

Json convention_block(const ManifoldDescriptor& d, const geo::CurvatureIntegrals& curv, part::Convention c) {
  const auto w = part::modular_weights(d, curv, c);
  Json j = Json::object();
  j["alpha"] = w.alpha;
  j["beta"] = w.beta;
  j["exponent_E"] = part::exponent_E(d, curv, c);
  j["curvature_correction"] = part::curvature_correction(curv, c);
  return j;
}

void cmd_weights(Context& ctx, const Options& o) {
  ctx.reject_csv("weights");
  const auto convention = part::convention_from_string(o.convention);
  const ManifoldDescriptor& d = ctx.catalog().find(o.manifold);
  const auto integrals = integrals_for(ctx, d);
  const auto& curv = integrals.value;
  const auto w = part::modular_weights(d, curv, convention);
  auto env = envelope("weights");
  env.inputs["manifold"] = o.manifold;
  env.convention = std::string(part::to_string(convention));
  env.results["alpha"] = w.alpha;
  env.results["beta"] = w.beta;
  env.results["sigma_phase"] = w.sigma_phase;
  env.results["exponent_E"] = part::exponent_E(d, curv, convention);
  Json both = Json::object();
  both["gilkey-full"] = convention_block(d, curv, part::Convention::GilkeyFull);
  both["paper-endo"] = convention_block(d, curv, part::Convention::PaperEndo);
  env.results["conventions"] = both;
  env.results["heat_kernel_exponent"] = part::heat_kernel_exponent(d, curv);
  env.results["integrals"] = integrals_json(curv);
  env.error_estimates["integrals"] = curv.error_estimate;
  env.cache = integrals.cache;
  ctx.emit(env);
}

void cmd_partition(Context& ctx, const Options& o) {
  ctx.reject_csv("partition");
  const auto convention = part::convention_from_string(o.convention);
  const modular::ComplexCoupling tau(parse_complex(o.tau));
  const ManifoldDescriptor& d = ctx.catalog().find(o.manifold);
  const auto integrals = integrals_for(ctx, d);
  const auto z = part::assemble_partition(d, integrals.value, tau, convention);
  const auto& f = z.factors;
  auto env = envelope("partition");
  env.inputs["manifold"] = o.manifold;
  env.inputs["tau"] = complex_json(tau.value());
  env.convention = std::string(part::to_string(convention));
  env.results["value_re"] = z.value.real();
  env.results["value_im"] = z.value.imag();
  Json factors = Json::object();
  factors["torsion_factor"] = f.torsion_factor;
  factors["theta_plus"] = complex_json(f.theta_plus);
  factors["theta_minus"] = complex_json(f.theta_minus);
  factors["imtau_power_exponent"] = f.imtau_power_exponent;
  factors["imtau_power"] = f.imtau_power;
  factors["torus_volume"] = f.torus_volume;
  factors["det_factor"] = f.det_factor;
  env.results["factors"] = factors;
  env.error_estimates["integrals"] = integrals.value.error_estimate;
  env.cache = integrals.cache;
  ctx.emit(env);
}

void cmd_verify_modularity(Context& ctx, const Options& o) {
  const auto convention = part::convention_from_string(o.convention);
  const int count = o.samples.empty() ? 5 : parse_int(o.samples, "--samples");
  if (count < 1) fail(ErrorKind::Domain, "samples >= 1", "need at least one sample coupling");
  const ManifoldDescriptor& d = ctx.catalog().find(o.manifold);
  const auto integrals = integrals_for(ctx, d);
  const auto taus = sample_couplings(count, 7, 0.5, 2.0);
  const auto rep = part::verify_modularity(d, integrals.value, taus, convention);
  if (ctx.csv) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < taus.size(); ++i) rows.push_back({taus[i].re(), taus[i].im(), rep.residuals[i]});
    return ctx.emit_csv({"tau_re", "tau_im", "residual"}, rows);
  }
  auto env = envelope("verify modularity");
  env.inputs["manifold"] = o.manifold;
  env.inputs["samples"] = count;
  env.convention = std::string(part::to_string(convention));
  env.results["max_residual"] = rep.max_residual;
  env.results["max_level2_residual"] = rep.max_level2_residual;
  env.results["weights"] = weights_json(rep.weights);
  env.results["residuals"] = Json(rep.residuals);
  env.cache = integrals.cache;
  ctx.emit(env);
}

void cmd_verify_gauss_bonnet(Context& ctx, const Options& o) {
  ctx.reject_csv("verify gauss-bonnet");
  auto env = envelope("verify gauss-bonnet");
  env.inputs["manifold"] = o.manifold.empty() ? "all" : o.manifold;
  Json rows = Json::array();
  for (const auto& d : ctx.catalog().entries) {
    if (!o.manifold.empty() && o.manifold != "all" && d.name != o.manifold) continue;
    const auto integrals = integrals_for(ctx, d);
    double expected = 0.0;
    if (d.is_alf()) {
      const auto dn = part::dirichlet_numbers(d);
      expected = 2.0 * dn.b0_D - 2.0 * dn.b1_D + d.bplus_l2 + d.bminus_l2;
    } else {
      expected = 2.0 * d.b0 - 2.0 * d.b1 + d.bplus_l2 + d.bminus_l2;
    }
    Json row = Json::object();
    row["name"] = d.name;
    row["I_gb"] = integrals.value.I_gb;
    row["expected_chi"] = expected;
    row["deviation"] = integrals.value.I_gb - expected;
    row["I_p"] = integrals.value.I_p;
    row["sigma_betti"] = static_cast<double>(d.bplus_l2 - d.bminus_l2);
    row["error_estimate"] = integrals.value.error_estimate;
    rows.push_back(row);
  }
  if (rows.empty()) fail(ErrorKind::Descriptor, "manifold present in the catalog", "unknown manifold '" + o.manifold + "'");
  env.results["entries"] = rows;
  ctx.emit(env);
}

void cmd_verify_theta(Context& ctx, const Options& o) {
  const int count = o.samples.empty() ? 20 : parse_int(o.samples, "--samples");
  if (count < 1) fail(ErrorKind::Domain, "samples >= 1", "need at least one sample coupling");
  const double tol = o.tol.empty() ? 1e-14 : parse_real(o.tol);
  const auto taus = sample_couplings(count, 11, 0.3, 3.0);
  std::vector<std::vector<double>> rows;
  double max_l2 = 0.0, max_s = 0.0;
  for (const auto& t : taus) {
    const double l2 = modular::level2_residual(t, tol), s = modular::s_transform_residual(t);
    rows.push_back({t.re(), t.im(), l2, s});
    max_l2 = std::max(max_l2, l2);
    max_s = std::max(max_s, s);
  }
  if (ctx.csv) return ctx.emit_csv({"tau_re", "tau_im", "level2_residual", "s_residual"}, rows);
  auto env = envelope("verify theta");
  env.inputs["samples"] = count;
  env.inputs["tol"] = tol;
  env.results["max_level2_residual"] = max_l2;
  env.results["max_s_residual"] = max_s;
  ctx.emit(env);
}

void cmd_verify_decay(Context& ctx, const Options& o) {
  const std::string name = o.manifold.empty() ? "taub-nut-1" : o.manifold;
  const auto backend = backend_for(ctx, name);
  const auto reports = boundary_sweep(ctx, o, backend);
  if (ctx.csv) return emit_boundary_csv(ctx, reports);
  auto env = envelope("verify decay");
  env.inputs["manifold"] = name;
  env.inputs["rho"] = o.rho;
  Json list = Json::array(), ratios = Json::array(), orders = Json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    list.push_back(truncation_json(reports[i]));
    if (i == 0) continue;
    const auto& a = reports[i - 1];
    const auto& b = reports[i];
    const double span = std::log(b.rho / a.rho);
    ratios.push_back(b.pi_sup / a.pi_sup);
    orders.push_back(std::log(std::abs(a.v40_integral) / std::abs(b.v40_integral)) / span);
  }
  env.results["reports"] = list;
  env.results["pi_sup_ratios"] = ratios;
  env.results["v40_orders"] = orders;
  ctx.emit(env);
}

void cmd_anomaly(Context& ctx, const Options& o) {
  ctx.reject_csv("anomaly");
  const auto convention = part::convention_from_string(o.convention);
  const ManifoldDescriptor& d = ctx.catalog().find(o.manifold);
  const auto integrals = integrals_for(ctx, d);
  const auto w = part::modular_weights(d, integrals.value, convention);
  const auto a = part::anomaly_counterterms(d, w, integrals.value);
  const auto coeffs = [](const part::DensityCoefficients& c) {
    Json j = Json::object();
    j["c_R"] = c.c_R;
    j["c_r"] = c.c_r;
    j["c_s2"] = c.c_s2;
    j["c_gb"] = c.c_gb;
    j["c_p"] = c.c_p;
    return j;
  };
  auto env = envelope("anomaly");
  env.inputs["manifold"] = o.manifold;
  env.convention = std::string(part::to_string(convention));
  env.results["alpha_coefficients"] = coeffs(a.alpha);
  env.results["beta_coefficients"] = coeffs(a.beta);
  env.results["alpha_reconstructed"] = a.alpha_reconstructed;
  env.results["beta_reconstructed"] = a.beta_reconstructed;
  env.results["alpha"] = w.alpha;
  env.results["beta"] = w.beta;
  env.results["chi_used"] = a.chi_used;
  env.results["sigma_used"] = a.sigma_used;
  env.results["sigma_integral"] = a.sigma_integral;
  env.results["sigma_discrepancy"] = a.sigma_discrepancy;
  env.error_estimates["integrals"] = integrals.value.error_estimate;
  env.cache = integrals.cache;
  ctx.emit(env);
}

void cmd_pathology(Context& ctx, const Options& o) {
  ctx.reject_csv("pathology");
  const modular::ComplexCoupling tau(parse_complex(o.tau));
  const auto p = part::pathological_partition(tau);
  auto env = envelope("pathology");
  env.inputs["tau"] = complex_json(tau.value());
  env.results["gaussian_factor"] = complex_json(p.gaussian_factor);
  Json w = Json::object();
  w["holomorphic_degree"] = p.weight_report.holomorphic_degree;
  w["antiholomorphic_degree"] = p.weight_report.antiholomorphic_degree;
  w["s_ratio"] = complex_json(p.weight_report.s_ratio);
  w["s_ratio_residual"] = p.weight_report.s_ratio_residual;
  w["level2_residual"] = p.weight_report.level2_residual;
  w["fits_modular_form"] = p.weight_report.fits_modular_form;
  env.results["weight_report"] = w;
  ctx.emit(env);
}

void cmd_catalog_list(Context& ctx, const Options&) {
  ctx.reject_csv("catalog list");
  auto env = envelope("catalog list");
  Json list = Json::array();
  for (const auto& d : ctx.catalog().entries) {
    Json j = Json::object();
    j["name"] = d.name;
    j["kind"] = std::string(to_string(d.kind));
    j["geometry"] = d.geometry;
    list.push_back(j);
  }
  env.inputs["catalog"] = ctx.catalog_path.empty() ? Json(nullptr) : Json(ctx.catalog_path);
  env.results["version"] = ctx.catalog().version;
  env.results["entries"] = list;
  ctx.emit(env);
}

void cmd_catalog_show(Context& ctx, const Options& o) {
  ctx.reject_csv("catalog show");
  auto env = envelope("catalog show");
  env.inputs["name"] = o.name;
  env.results = descriptor_json(ctx.catalog().find(o.name));
  ctx.emit(env);
}

int exit_code_for(ErrorKind kind) { return kind == ErrorKind::Resource ? kExitResource : kExitDomain; }

}  // namespace

std::complex<double> parse_complex(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s += c;
  const auto bad = [&]() -> std::complex<double> {
    fail(ErrorKind::Parse, "complex literal a+bi", "cannot parse complex literal '" + std::string(text) + "'");
  };
  if (s.empty()) return bad();
  if (s.back() != 'i' && s.back() != 'j') {
    const auto v = to_double(s);
    return v ? std::complex<double>(*v, 0.0) : bad();
  }
  s.pop_back();
  // split at the last sign that is not part of an exponent
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  const std::string re_text = split == std::string::npos ? "" : s.substr(0, split);
  std::string im_text = split == std::string::npos ? s : s.substr(split);
  if (im_text.empty() || im_text == "+") im_text = "1";
  if (im_text == "-") im_text = "-1";
  double re = 0.0;
  if (!re_text.empty()) {
    const auto v = to_double(re_text);
    if (!v) return bad();
    re = *v;
  }
  const auto im = to_double(im_text);
  if (!im) return bad();
  return {re, *im};
}

double parse_real(std::string_view text) {
  const auto z = parse_complex(text);
  if (z.imag() != 0.0)
    fail(ErrorKind::Parse, "real-valued argument", "expected a real number, got '" + std::string(text) + "'");
  return z.real();
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx;
  ctx.out = &out;
  ctx.err = &err;
  Options o;

  CLI::App app{"sdlab: Abelian S-duality numerical lab", "sdlab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(report::kToolVersion));
  app.add_flag("--json", ctx.json, "Emit the JSON report envelope");
  app.add_flag("--csv", ctx.csv, "Emit CSV for sweep outputs");
  app.add_flag("--no-cache", ctx.no_cache, "Bypass the quadrature cache");
  app.add_option("--catalog", ctx.catalog_path, "Manifest file with extra catalog entries");
  app.add_option("--cache-dir", ctx.cache_dir, "Cache directory (default $SDLAB_CACHE_DIR or ~/.cache/sdlab)");

  std::function<void()> action;
  const auto on = [&](CLI::App* sub, void (*fn)(Context&, const Options&)) {
    sub->callback([&, fn] { action = [&, fn] { fn(ctx, o); }; });
  };

  auto* theta = app.add_subcommand("theta", "Jacobi theta series with certified tail");
  theta->add_option("--tau", o.tau, "Coupling a+bi")->required();
  theta->add_option("--tol", o.tol, "Tail tolerance (default 1e-14)");
  on(theta, cmd_theta);

  auto* lat = app.add_subcommand("lattice", "Brute-force lattice sum against the theta product");
  lat->add_option("--bplus", o.bplus, "Rank of the self-dual part");
  lat->add_option("--bminus", o.bminus, "Rank of the anti-self-dual part");
  lat->add_option("--N", o.box, "Box cutoff");
  lat->add_option("--tau", o.tau, "Coupling a+bi")->required();
  on(lat, cmd_lattice);

  auto* curv = app.add_subcommand("curvature", "Pointwise curvature in an orthonormal frame");
  curv->add_option("--manifold", o.manifold, "Catalog name or backend id")->required();
  curv->add_option("--point", o.point, "Chart point x1,x2,x3,x4")->required();
  curv->add_option("--step", o.step, "Relative finite-difference step");
  curv->add_option("--tol", o.tol, "Richardson tolerance");
  on(curv, cmd_curvature);

  auto* integ = app.add_subcommand("integrate", "Integrated curvature invariants");
  integ->add_option("--manifold", o.manifold, "Catalog name or backend id")->required();
  integ->add_option("--resolution", o.resolution, "Quadrature panels");
  integ->add_option("--cutoff", o.cutoff, "Chart-radius cutoff for ALF backends");
  on(integ, cmd_integrate);

  auto* bound = app.add_subcommand("boundary", "Truncation-boundary geometry");
  bound->add_option("--manifold", o.manifold, "Catalog name or backend id")->required();
  bound->add_option("--rho", o.rho, "Comma-separated radii");
  bound->add_option("--resolution", o.resolution, "Panels in the polar angle");
  on(bound, cmd_boundary);

  auto* zeta = app.add_subcommand("zeta", "Spectral zeta at zero");
  zeta->add_option("--lattice", o.lattice, "16 generator entries, row-major");
  zeta->add_option("--manifold", o.manifold, "Catalog name for the heat-kernel formula");
  zeta->add_option("--k", o.k, "Form degree");
  zeta->add_option("--s", o.s, "Also evaluate the spectral zeta at s");
  zeta->add_option("--rho", o.zeta_rho, "Truncation radius for the boundary version");
  on(zeta, cmd_zeta);

  auto* weights = app.add_subcommand("weights", "Modular weights");
  weights->add_option("--manifold", o.manifold, "Catalog name")->required();
  weights->add_option("--convention", o.convention, "paper | gilkey");
  on(weights, cmd_weights);

  auto* partition = app.add_subcommand("partition", "Assembled partition function");
  partition->add_option("--manifold", o.manifold, "Catalog name")->required();
  partition->add_option("--tau", o.tau, "Coupling a+bi")->required();
  partition->add_option("--convention", o.convention, "paper | gilkey");
  on(partition, cmd_partition);

  auto* verify = app.add_subcommand("verify", "Numerical identity checks");
  verify->require_subcommand(1);
  auto* vmod = verify->add_subcommand("modularity", "S-transformation law of Z");
  vmod->add_option("--manifold", o.manifold, "Catalog name")->required();
  vmod->add_option("--samples", o.samples, "Number of sample couplings");
  vmod->add_option("--convention", o.convention, "paper | gilkey");
  on(vmod, cmd_verify_modularity);
  auto* vgb = verify->add_subcommand("gauss-bonnet", "Euler integrals against Betti data");
  vgb->add_option("--manifold", o.manifold, "Catalog name or 'all'");
  on(vgb, cmd_verify_gauss_bonnet);
  auto* vth = verify->add_subcommand("theta", "Theta functional equations");
  vth->add_option("--samples", o.samples, "Number of sample couplings");
  vth->add_option("--tol", o.tol, "Theta tolerance");
  on(vth, cmd_verify_theta);
  auto* vdec = verify->add_subcommand("decay", "Boundary decay sweep");
  vdec->add_option("--manifold", o.manifold, "Catalog name or backend id");
  vdec->add_option("--rho", o.rho, "Comma-separated radii");
  vdec->add_option("--resolution", o.resolution, "Panels in the polar angle");
  on(vdec, cmd_verify_decay);

  auto* anomaly = app.add_subcommand("anomaly", "Counterterm density coefficients");
  anomaly->add_option("--manifold", o.manifold, "Catalog name")->required();
  anomaly->add_option("--convention", o.convention, "paper | gilkey");
  on(anomaly, cmd_anomaly);

  auto* patho = app.add_subcommand("pathology", "Gaussian factor without the holonomy condition");
  patho->add_option("--tau", o.tau, "Coupling a+bi")->required();
  on(patho, cmd_pathology);

  auto* cat = app.add_subcommand("catalog", "Manifold catalog");
  cat->require_subcommand(1);
  auto* clist = cat->add_subcommand("list", "List entries");
  on(clist, cmd_catalog_list);
  auto* cshow = cat->add_subcommand("show", "Show one entry");
  cshow->add_option("name", o.name, "Entry name")->required();
  on(cshow, cmd_catalog_show);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << report::kToolVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  try {
    if (action) action();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "] precondition '" << e.precondition() << "': " << e.what();
    if (e.estimate()) err << " (estimate " << fmt17(*e.estimate()) << ")";
    err << '\n';
    return exit_code_for(e.kind());
  }
}

}  // namespace sdlab::cli
