#include <doctest.h>

#include <cmath>

#include "sdlab/errors.hpp"
#include "sdlab/geometry.hpp"

using namespace sdlab;
using namespace sdlab::geometry;

namespace {

double max_abs(const std::array<double, 16>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const std::array<double, 256>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Domain;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("flat torus is flat") {
  const auto s = curvature_at(GeometryBackend::flat_torus({1.0, 2.0, 0.5, 3.0}), {0.1, 0.2, 0.3, 0.4});
  CHECK(max_abs(s.riemann) == 0.0);
  CHECK(s.gb_density == 0.0);
}

TEST_CASE("round sphere has constant curvature") {
  // R_abcd = (g_ac g_bd - g_ad g_bc) / a^2
  for (double a : {1.0, 2.5}) {
    const auto s = curvature_at(GeometryBackend::round_s4(a), {0.9, 1.2, 2.0, 0.4});
    const double k = 1.0 / (a * a);
    CHECK(s.scalar == doctest::Approx(12.0 * k).epsilon(1e-7));
    CHECK(s.inv_R_full == doctest::Approx(24.0 * k * k).epsilon(1e-7));
    CHECK(s.inv_R_endo == doctest::Approx(6.0 * k * k).epsilon(1e-7));
    CHECK(s.inv_r == doctest::Approx(36.0 * k * k).epsilon(1e-7));
    CHECK(s.R(0, 1, 0, 1) == doctest::Approx(k).epsilon(1e-7));
    CHECK(std::abs(s.R(0, 1, 2, 3)) < 1e-7 * k);
    // Euler density 3 / (4 pi^2 a^4): chi = 2 over the volume 8 pi^2 a^4 / 3
    CHECK(s.gb_density == doctest::Approx(3.0 / (4.0 * kPi * kPi) * k * k).epsilon(1e-7));
    CHECK(std::abs(s.pontryagin_density) < 1e-9);
  }
}

TEST_CASE("Taub-NUT is Ricci-flat and anti-self-dual in the chart orientation") {
  const auto b = GeometryBackend::multi_taub_nut(0.5, {{0.0, 0.0, 0.0}});
  for (Vec4 x : {Vec4{1.0, 0.5, 0.3, 0.0}, Vec4{0.2, -0.1, 0.4, 1.0}, Vec4{-3.0, 2.0, 5.0, 2.0}}) {
    const auto s = curvature_at(b, x);
    CHECK(max_abs(s.ricci) <= 1e-6 * max_abs(s.riemann));
    CHECK(s.r_dot_star_r == doctest::Approx(-s.inv_R_full).epsilon(1e-6));
    CHECK(s.pontryagin_density == doctest::Approx(-2.0 / 3.0 * s.gb_density).epsilon(1e-6));
    CHECK(s.bianchi_residual < 1e-6 * max_abs(s.riemann));
  }
}

TEST_CASE("Gibbons-Hawking scaling") {
  // m -> lambda m, x -> lambda x rescales the metric by lambda^2, so |R|^2 scales by lambda^-4
  const Vec4 x{0.7, -0.4, 0.9, 0.3};
  const double lambda = 2.0;
  const auto a = curvature_at(GeometryBackend::multi_taub_nut(0.5, {{0.0, 0.0, 0.0}}), x);
  const auto b = curvature_at(GeometryBackend::multi_taub_nut(0.5 * lambda, {{0.0, 0.0, 0.0}}),
                              {lambda * x[0], lambda * x[1], lambda * x[2], lambda * x[3]});
  CHECK(b.inv_R_full * std::pow(lambda, 4) == doctest::Approx(a.inv_R_full).epsilon(1e-6));
}

TEST_CASE("Schwarzschild Kretschmann scalar") {
  // 48 m^2 / r^6 at areal radius r
  const double m = 1.0;
  const auto b = GeometryBackend::schwarzschild(m);
  for (double u : {0.5, 3.0, 10.0}) {
    const double y = 0.3;
    const double r = 2.0 * m + (u * u + y * y) / (8.0 * m);
    const auto s = curvature_at(b, {u, y, 1.1, 0.2});
    CHECK(s.inv_R_full == doctest::Approx(48.0 * m * m / std::pow(r, 6)).epsilon(1e-6));
    CHECK(max_abs(s.ricci) <= 1e-6 * max_abs(s.riemann));
    CHECK(std::abs(s.pontryagin_density) < 1e-8);
  }
}

TEST_CASE("frame projection of a known tensor") {
  std::array<double, 256> r{};
  r[((0 * 4 + 1) * 4 + 0) * 4 + 1] = 1.0;
  r[((1 * 4 + 0) * 4 + 1) * 4 + 0] = 1.0;
  r[((0 * 4 + 1) * 4 + 1) * 4 + 0] = -1.0;
  r[((1 * 4 + 0) * 4 + 0) * 4 + 1] = -1.0;
  Mat4 f = Mat4::Identity();
  f(0, 0) = 2.0;
  const auto p = project_riemann(r, f);
  CHECK(p[((0 * 4 + 1) * 4 + 0) * 4 + 1] == doctest::Approx(4.0));
}

TEST_CASE("chart exclusions") {
  CHECK(kind_of([] { curvature_at(GeometryBackend::round_s4(), {0.0, 1.0, 1.0, 0.0}); }) == ErrorKind::Chart);
  CHECK(kind_of([] {
          curvature_at(GeometryBackend::multi_taub_nut(0.5, {{0.0, 0.0, 1.0}}), {0.0, 0.0, 1.0, 0.0});
        }) == ErrorKind::Chart);
  CHECK(kind_of([] { curvature_at(GeometryBackend::round_s4(), {1.0, 1.0, 1.0, 0.0}, {.step = 0.5}); }) ==
        ErrorKind::Domain);
}

TEST_CASE("Richardson check rejects a coarse step") {
  CurvatureOptions o;
  o.step = 0.2;
  o.tolerance = 1e-12;
  CHECK(kind_of([&] { curvature_at(GeometryBackend::schwarzschild(), {0.3, 0.1, 1.0, 0.5}, o); }) ==
        ErrorKind::Accuracy);
}

TEST_CASE("backend validation") {
  CHECK_THROWS_AS(GeometryBackend::round_s4(-1.0), Error);
  CHECK_THROWS_AS(GeometryBackend::multi_taub_nut(0.5, {}), Error);
  CHECK_THROWS_AS(GeometryBackend::from_id("klein-bottle"), Error);
  CHECK(GeometryBackend::from_id("schwarzschild").kind() == BackendKind::Schwarzschild);
  const auto tn = GeometryBackend::multi_taub_nut(0.5, {{0.0, 0.0, 0.0}});
  CHECK(std::get<MultiTaubNut>(tn.params()).fiber_period == doctest::Approx(2.0 * kPi));
  CHECK(tn.cache_key() != GeometryBackend::multi_taub_nut(0.5, {{0.0, 0.0, 0.0}}, 3.0).cache_key());
}

TEST_CASE("Euler integrals") {
  const auto torus = GeometryBackend::flat_torus();
  const auto t = integrate_invariants(torus, default_resolution(torus), default_cutoff(torus));
  CHECK(t.I_gb == 0.0);
  CHECK(t.I_R_full == 0.0);

  const auto s4 = GeometryBackend::round_s4(1.3);
  const auto s = integrate_invariants(s4, default_resolution(s4), default_cutoff(s4));
  CHECK(std::abs(s.I_gb - 2.0) < 1e-6);
  CHECK(std::abs(s.I_p) < 1e-9);
  // |R|^2 dV over the sphere: 24 a^-4 times 8 pi^2 a^4 / 3
  CHECK(s.I_R_full == doctest::Approx(64.0 * kPi * kPi).epsilon(1e-6));
  CHECK(s.I_R_endo == doctest::Approx(s.I_R_full / 4.0));

  const auto tn = GeometryBackend::multi_taub_nut(0.5, {{0.0, 0.0, 0.0}});
  const auto n = integrate_invariants(tn, default_resolution(tn), default_cutoff(tn));
  CHECK(std::abs(n.I_gb - 1.0) < 1e-3);
  CHECK(n.I_p == doctest::Approx(-2.0 / 3.0).epsilon(1e-3));
  CHECK(std::abs(n.I_r) < 1e-8);
  CHECK(n.error_estimate < 1e-3);

  const auto sw = GeometryBackend::schwarzschild();
  const auto w = integrate_invariants(sw, default_resolution(sw), default_cutoff(sw));
  CHECK(std::abs(w.I_gb - 2.0) < 1e-3);
  CHECK(std::abs(w.I_p) < 1e-8);
}

TEST_CASE("two-centre Euler integral") {
  const auto b = GeometryBackend::multi_taub_nut(0.5, {{0.0, 0.0, 1.0}, {0.0, 0.0, -1.0}});
  const auto r = integrate_invariants(b, default_resolution(b), default_cutoff(b));
  CHECK(std::abs(r.I_gb - 2.0) < 0.02 * 2.0);
  CHECK(r.I_p == doctest::Approx(-4.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("the truncated integral grows toward the full one") {
  const auto tn = GeometryBackend::multi_taub_nut(0.5, {{0.0, 0.0, 0.0}});
  const auto a = integrate_invariants(tn, 48, 20.0, false);
  const auto b = integrate_invariants(tn, 48, 40.0, false);
  CHECK(a.I_gb < b.I_gb);
  CHECK(b.I_gb < 1.0);
}

TEST_CASE("integration resource limits") {
  const auto tn = GeometryBackend::multi_taub_nut(0.5, {{0.0, 0.0, 0.0}});
  CHECK(kind_of([&] { integrate_invariants(tn, 100000, 200.0); }) == ErrorKind::Resource);
  CHECK_THROWS_AS(integrate_invariants(tn, 48, 0.5), Error);
}

TEST_CASE("Taub-NUT truncation boundary") {
  const double m = 0.5;
  const auto tn = GeometryBackend::multi_taub_nut(m, {{0.0, 0.0, 0.0}});
  const double fiber = 4.0 * kPi * m;
  double prev_pi = 0.0, prev_v = 0.0;
  for (double rho : {20.0, 40.0, 80.0}) {
    const auto r = boundary_report(tn, rho, default_boundary_resolution(tn));
    // induced metric V rho^2 dOmega + V^-1 dpsi^2 gives area 4 pi rho^2 sqrt(V) times the fiber length
    const double v = 1.0 + m / rho;
    CHECK(r.boundary_area == doctest::Approx(4.0 * kPi * rho * rho * std::sqrt(v) * fiber).epsilon(1e-8));
    CHECK(r.pi_sup * rho == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::abs(r.scalar_flux) < 1e-6);
    if (prev_pi > 0.0) {
      CHECK(r.pi_sup / prev_pi == doctest::Approx(0.5).epsilon(0.05));
      CHECK(std::abs(r.v40_integral) < std::abs(prev_v));
    }
    prev_pi = r.pi_sup;
    prev_v = r.v40_integral;
  }
}

TEST_CASE("Schwarzschild truncation boundary") {
  const double m = 1.0;
  const auto sw = GeometryBackend::schwarzschild(m);
  const double rho = 40.0;
  const auto r = boundary_report(sw, rho, default_boundary_resolution(sw));
  // r^2 dOmega + (1 - 2m/r) dt^2 with t of period 8 pi m
  CHECK(r.boundary_area == doctest::Approx(4.0 * kPi * rho * rho * 8.0 * kPi * m * std::sqrt(1.0 - 2.0 * m / rho))
                               .epsilon(1e-8));
}

TEST_CASE("boundary preconditions") {
  const auto tn = GeometryBackend::multi_taub_nut(0.5, {{0.0, 0.0, 0.0}});
  CHECK_THROWS_AS(boundary_report(tn, 1.0, 8), Error);
  CHECK_THROWS_AS(boundary_report(GeometryBackend::round_s4(), 10.0, 8), Error);
  CHECK(kind_of([&] { boundary_report(tn, 20.0, 5000); }) == ErrorKind::Resource);
}

}  // TEST_SUITE
