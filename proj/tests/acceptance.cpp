// One line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>

#include "sdlab/catalog.hpp"
#include "sdlab/errors.hpp"
#include "sdlab/lattice_sum.hpp"
#include "sdlab/partition.hpp"
#include "sdlab/spectral_zeta.hpp"

using namespace sdlab;
using modular::ComplexCoupling;
namespace geo = sdlab::geometry;
namespace part = sdlab::partition;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int n, const char* title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s  %2d  %-34s %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", n, title, o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const catalog::CatalogManifest& cat() {
  static const auto c = catalog::builtin_catalog();
  return c;
}

geo::CurvatureIntegrals integrals(const ManifoldDescriptor& d) {
  if (d.analytic_integrals) return *d.analytic_integrals;
  const auto& b = *d.backend;
  return geo::integrate_invariants(b, geo::default_resolution(b), geo::default_cutoff(b));
}

std::vector<ComplexCoupling> five_samples() {
  return {ComplexCoupling({0.3, 0.7}), ComplexCoupling({-0.45, 1.1}), ComplexCoupling({0.12, 0.9}),
          ComplexCoupling({0.8, 1.6}), ComplexCoupling({-0.2, 0.55})};
}

}  // namespace

int main() {
  std::map<std::string, geo::CurvatureIntegrals> memo;
  const auto curv = [&](const std::string& name) -> const geo::CurvatureIntegrals& {
    auto it = memo.find(name);
    if (it == memo.end()) it = memo.emplace(name, integrals(cat().find(name))).first;
    return it->second;
  };

  criterion(1, "theta modularity", [] {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> re(-1.0, 1.0), im(0.3, 3.0);
    const auto start = std::chrono::steady_clock::now();
    double l2 = 0.0, s = 0.0;
    for (int k = 0; k < 20; ++k) {
      const ComplexCoupling t({re(rng), im(rng)});
      l2 = std::max(l2, modular::level2_residual(t, 1e-15));
      s = std::max(s, modular::s_transform_residual(t));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return Outcome{l2 <= 1e-12 && s <= 1e-9 && secs < 1.0, fmt("level2 %.2e, S %.2e", l2, s)};
  });

  criterion(2, "lattice factorization", [] {
    const ComplexCoupling tau({0.3, 0.7});
    double worst = 0.0;
    for (auto [bp, bm] : {std::pair{1, 0}, {0, 1}, {2, 1}, {3, 0}})
      worst = std::max(worst, std::abs(lattice::brute_force_partition(bp, bm, 30, tau) - lattice::theta_product(bp, bm, tau)));
    return Outcome{worst <= 1e-8, fmt("max |brute - product| %.2e", worst)};
  });

  criterion(3, "Gauss-Bonnet integrals", [&] {
    const double t = curv("flat-torus").I_gb, s = curv("round-s4").I_gb, n1 = curv("taub-nut-1").I_gb,
                 n2 = curv("taub-nut-2").I_gb, w = curv("schwarzschild").I_gb;
    const bool ok = t == 0.0 && std::abs(s - 2.0) <= 1e-3 && std::abs(n1 - 1.0) <= 0.01 && std::abs(n2 - 2.0) <= 0.04 &&
                    std::abs(w - 2.0) <= 0.02;
    return Outcome{ok, fmt("T4 %.3g, S4 %.10f, TN1 %.10f, TN2 %.10f, Schw %.10f", t, s, n1, n2, w)};
  });

  criterion(4, "Ricci-flatness", [] {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> xyz(-6.0, 6.0), psi(0.0, 6.0), u(0.2, 12.0), th(0.2, 2.9), ang(0.0, 6.0);
    const auto tn = geo::GeometryBackend::multi_taub_nut(0.5, {{0.0, 0.0, 0.0}});
    const auto sw = geo::GeometryBackend::schwarzschild(1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const bool nut = k % 2 == 0;
      geo::Vec4 x = nut ? geo::Vec4{xyz(rng), xyz(rng), xyz(rng), psi(rng)} : geo::Vec4{u(rng), 0.0, th(rng), ang(rng)};
      if (!nut) x[1] = 0.5 * x[0];
      const auto s = geo::curvature_at(nut ? tn : sw, x);
      double ric = 0.0, riem = 0.0;
      for (double v : s.ricci) ric = std::max(ric, std::abs(v));
      for (double v : s.riemann) riem = std::max(riem, std::abs(v));
      worst = std::max(worst, ric / riem);
    }
    return Outcome{worst <= 1e-6, fmt("max |ricci|/|riemann| %.2e over 100 points", worst)};
  });

  criterion(5, "spectral cross-check", [] {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> off(-0.3, 0.3), diag(0.7, 1.6);
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      spectral::LatticeGenerators g{};
      for (int i = 0; i < 16; ++i) g[i] = i % 5 == 0 ? diag(rng) : off(rng);
      worst = std::max(worst, std::abs(spectral::torus_zeta_zero(g, 0).zeta_at_zero + 1.0));
    }
    // flat metric: the heat-kernel value is minus the Betti number
    const auto& t = cat().find("flat-torus");
    const double heat0 = spectral::heat_zeta_zero(t, geo::CurvatureIntegrals{}, 0).zeta_at_zero;
    spectral::LatticeGenerators unit{};
    for (int i = 0; i < 4; ++i) unit[i * 5] = 1.0;
    const double z1 = spectral::torus_zeta_zero(unit, 1).zeta_at_zero;
    const bool ok = worst <= 1e-6 && std::abs(heat0 + 1.0) <= 1e-12 && std::abs(z1 + 4.0) <= 1e-6;
    return Outcome{ok, fmt("max |zeta0 + 1| %.2e, heat %.6f, zeta1 %.10f", worst, heat0, z1)};
  });

  criterion(6, "Taub-NUT worked example", [&] {
    const auto& tn = cat().find("taub-nut-1");
    const auto& c = curv("taub-nut-1");
    const double e = part::exponent_E(tn, c, part::Convention::PaperEndo);
    const auto w = part::modular_weights(tn, c, part::Convention::PaperEndo);
    const ComplexCoupling tau({0.3, 0.7});
    const auto z = part::assemble_partition(tn, c, tau, part::Convention::PaperEndo);
    const cplx th = modular::theta(tau.reflected(), 1e-15).value;
    const cplx want = th * std::pow(tau.im() / (8.0 * kPi * kPi), 1.0 / 30.0);
    const auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
    const bool factors = z.factors.theta_plus == cplx(1.0, 0.0) && std::abs(z.factors.theta_minus - th) < 1e-14 &&
                         z.factors.det_factor == 1.0 && z.factors.torsion_factor == 1.0;
    const double zerr = std::abs(z.value - want) / std::abs(want);
    const bool ok = rel(e, 1.0 / 30.0) <= 0.02 && rel(w.alpha, -1.0 / 30.0) <= 0.02 && rel(w.beta, 7.0 / 15.0) <= 0.02 &&
                    factors && zerr <= 0.02;
    return Outcome{ok, fmt("E %.9f, weights (%.9f, %.9f), Z rel err %.1e", e, w.alpha, w.beta, zerr)};
  });

  criterion(7, "boundary decay", [] {
    const auto tn = geo::GeometryBackend::multi_taub_nut(0.5, {{0.0, 0.0, 0.0}});
    const int res = geo::default_boundary_resolution(tn);
    const auto a = geo::boundary_report(tn, 20.0, res), b = geo::boundary_report(tn, 40.0, res),
               c = geo::boundary_report(tn, 80.0, res);
    const double r1 = b.pi_sup / a.pi_sup, r2 = c.pi_sup / b.pi_sup;
    const bool ratios = r1 >= 0.45 && r1 <= 0.55 && r2 >= 0.45 && r2 <= 0.55;
    bool decreasing = true;
    double order = 1e9;
    for (auto pick : {+[](const geo::TruncationReport& r) { return r.v40_integral; },
                      +[](const geo::TruncationReport& r) { return r.v41_integral; }}) {
      const double va = std::abs(pick(a)), vb = std::abs(pick(b)), vc = std::abs(pick(c));
      decreasing = decreasing && va > vb && vb > vc;
      order = std::min(order, std::log(va / vc) / std::log(4.0));
    }
    return Outcome{ratios && decreasing && order >= 0.8,
                   fmt("pi_sup ratios %.4f %.4f, v4 fitted order %.3f", r1, r2, order)};
  });

  criterion(8, "neck condition logic", [&] {
    const auto p1 = part::perem_check(cat().find("taub-nut-1"));
    const auto p2 = part::perem_check(cat().find("taub-nut-2"));
    const auto ps = part::perem_check(cat().find("schwarzschild"));
    const bool perem = p1.condition_holds && p1.derived_b1_D == 0 && p2.condition_holds && p2.derived_b1_D == 0 &&
                       !ps.condition_holds;
    const auto& tn = cat().find("taub-nut-1");
    const auto a = part::anomaly_counterterms(tn, part::modular_weights(tn, curv("taub-nut-1"), part::Convention::PaperEndo),
                                              curv("taub-nut-1"));
    bool consistency = false;
    try {
      const auto& sw = cat().find("schwarzschild");
      part::anomaly_counterterms(sw, part::modular_weights(sw, curv("schwarzschild"), part::Convention::PaperEndo),
                                 curv("schwarzschild"));
    } catch (const Error& e) {
      consistency = e.kind() == ErrorKind::Consistency;
    }
    return Outcome{perem && consistency && std::isfinite(a.alpha_reconstructed),
                   fmt("TN1 %d, TN2 %d, Schw %d, Schw anomaly consistency error %d", p1.condition_holds,
                       p2.condition_holds, ps.condition_holds, consistency)};
  });

  criterion(9, "modular law", [&] {
    const auto res = [&](const char* name) {
      return part::verify_modularity(cat().find(name), curv(name), five_samples(), part::Convention::PaperEndo).max_residual;
    };
    const double t = res("flat-torus"), k = res("k3-analytic"), n = res("taub-nut-1");
    return Outcome{t <= 1e-8 && k <= 1e-8 && n <= 1e-6, fmt("T4 %.2e, K3 %.2e, TN1 %.2e", t, k, n)};
  });

  criterion(10, "cot-contour identity", [] {
    double worst = 0.0, spread = 0.0;
    for (cplx u : {cplx(0.0, 1.0), cplx(0.0, 2.0), cplx(0.5, 1.0)}) {
      const cplx want = modular::theta(ComplexCoupling(u), 1e-15).value;
      cplx first;
      bool have = false;
      for (double eps : {0.1, 0.15, 0.2, 0.25, 0.3}) {
        const cplx v = modular::cot_contour_theta(u, eps, 1e-10).minus_shift;
        worst = std::max(worst, std::abs(v - want));
        if (!have) first = v, have = true;
        spread = std::max(spread, std::abs(v - first));
      }
    }
    return Outcome{worst <= 1e-6 && spread <= 1e-6, fmt("max branch error %.2e, eps spread %.2e", worst, spread)};
  });

  criterion(11, "convention ledger", [&] {
    double worst = 0.0;
    bool both = true;
    for (const auto& d : cat().entries) {
      const auto& c = curv(d.name);
      const auto g = part::modular_weights(d, c, part::Convention::GilkeyFull);
      const auto p = part::modular_weights(d, c, part::Convention::PaperEndo);
      both = both && g.convention == part::Convention::GilkeyFull && p.convention == part::Convention::PaperEndo;
      if (std::abs(c.I_r) + std::abs(c.I_s2) > 1e-6 * (1.0 + c.I_R_full)) continue;  // not Ricci-flat
      const double full = part::curvature_correction(c, part::Convention::GilkeyFull);
      const double endo = part::curvature_correction(c, part::Convention::PaperEndo);
      worst = std::max(worst, std::abs(full - 4.0 * endo) / std::max(1.0, std::abs(full)));
      // the weights move by exactly half the correction change
      worst = std::max(worst, std::abs((p.alpha - g.alpha) - 0.5 * (full - endo)));
    }
    return Outcome{both && worst <= 1e-12, fmt("max factor-4 violation %.2e", worst)};
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures;
}
