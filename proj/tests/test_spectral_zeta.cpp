#include <doctest.h>

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <random>

#include "sdlab/catalog.hpp"
#include "sdlab/errors.hpp"
#include "sdlab/spectral_zeta.hpp"

using namespace sdlab;
using namespace sdlab::spectral;

namespace {

LatticeGenerators identity_lattice(double scale = 1.0) {
  LatticeGenerators g{};
  for (int i = 0; i < 4; ++i) g[i * 5] = scale;
  return g;
}

LatticeGenerators random_lattice(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> off(-0.3, 0.3), diag(0.7, 1.6);
  LatticeGenerators g{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g[i * 4 + j] = i == j ? diag(rng) : off(rng);
  return g;
}

// Spectral sums sum_nu P(nu) (nu^2 - c)^-s over nu = a, a+1, ... with P odd and cubic.
// zeta(0) of the shifted operator is read off from Hurwitz values at negative integers,
// zeta_H(-n, a) = -B_{n+1}(a) / (n + 1), plus the heat-trace shift corrections.
struct CubicSpectrum {
  double p3, p1;  // multiplicity p3 nu^3 + p1 nu
  double a;       // first nu
  double c;       // eigenvalue nu^2 - c
};

double zeta_zero(const CubicSpectrum& sp) {
  const double a = sp.a;
  const double b2 = a * a - a + 1.0 / 6.0;
  const double b4 = a * a * a * a - 2.0 * a * a * a + a * a - 1.0 / 30.0;
  const double d2 = sp.p3 * (-b4 / 4.0) + sp.p1 * (-b2 / 2.0);
  // residues of zeta_H(2s - 3) at s = 2 and zeta_H(2s - 1) at s = 1 are 1/2
  const double d0 = sp.p3 / 2.0;
  const double d1 = sp.p1 / 2.0;
  // e^{ct} (d0 t^-2 + d1 t^-1 + d2): constant term
  return d2 + sp.c * d1 + sp.c * sp.c * d0 / 2.0;
}

}  // namespace

TEST_SUITE("spectral_zeta") {

TEST_CASE("Z^4 at s = 3 from the sum of four squares") {
  // sum r_4(n) n^-s = 8 (1 - 4^{1-s}) zeta(s) zeta(s - 1)
  const double want = 8.0 * (1.0 - std::pow(4.0, -2.0)) * boost::math::zeta(3.0) * boost::math::zeta(2.0);
  const auto z = epstein_zeta(identity_lattice(), 3.0);
  CHECK(z.value == doctest::Approx(want).epsilon(1e-12));
  CHECK(z.truncation_error < 1e-12);
}

TEST_CASE("Epstein zeta scaling and continuity") {
  const double c = 1.7;
  for (double s : {-0.5, 0.5, 1.5, 3.0}) {
    const double a = epstein_zeta(identity_lattice(), s).value;
    const double b = epstein_zeta(identity_lattice(c), s).value;
    CHECK(b == doctest::Approx(std::pow(c, -2.0 * s) * a).epsilon(1e-11));
  }
  CHECK(std::abs(epstein_zeta(identity_lattice(), 1e-8).value + 1.0) < 1e-6);
}

TEST_CASE("Epstein zeta at zero is -1 for any lattice") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 3; ++k) {
    const auto g = random_lattice(rng);
    CHECK(std::abs(epstein_zeta(g, 0.0).value + 1.0) < 1e-12);
  }
}

TEST_CASE("Epstein zeta is invariant under a change of basis") {
  std::mt19937_64 rng(9);
  auto g = random_lattice(rng);
  auto h = g;
  for (int j = 0; j < 4; ++j) h[4 + j] += 2.0 * g[j];  // row1 += 2 row0
  CHECK(epstein_zeta(h, 2.5).value == doctest::Approx(epstein_zeta(g, 2.5).value).epsilon(1e-11));
}

TEST_CASE("dual lattice") {
  std::mt19937_64 rng(3);
  const auto g = random_lattice(rng);
  const auto d = dual_lattice(g);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 4; ++k) dot += g[i * 4 + k] * d[j * 4 + k];
      CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-13);
    }
}

TEST_CASE("torus zeta at zero counts the harmonic forms") {
  std::mt19937_64 rng(17);
  const int binom[5] = {1, 4, 6, 4, 1};
  for (int t = 0; t < 3; ++t) {
    const auto g = random_lattice(rng);
    for (int k = 0; k <= 4; ++k) {
      const auto r = torus_zeta_zero(g, k);
      CHECK(r.zeta_at_zero == doctest::Approx(-binom[k]).epsilon(1e-10));
      CHECK(r.method == ZetaMethod::EpsteinContinuation);
      CHECK(r.det_factor == 1.0);
    }
  }
}

TEST_CASE("lattice preconditions") {
  CHECK_THROWS_AS(epstein_zeta(identity_lattice(), 2.0), Error);
  LatticeGenerators flat{};
  for (int j = 0; j < 4; ++j) flat[j] = flat[4 + j] = 1.0;
  flat[10] = flat[15] = 1.0;
  CHECK_THROWS_AS(epstein_zeta(flat, 3.0), Error);
  auto thin = identity_lattice();
  thin[0] = 1e-9;
  try {
    epstein_zeta(thin, 3.0);
    FAIL("expected a numeric error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Numeric);
  }
  CHECK_THROWS_AS(torus_zeta_zero(identity_lattice(), 5), Error);
}

TEST_CASE("round sphere from its spectrum") {
  const auto cat = catalog::builtin_catalog();
  const auto& s4 = cat.find("round-s4");
  const auto curv = geometry::integrate_invariants(*s4.backend, geometry::default_resolution(*s4.backend), 0.0);

  // functions: l(l+3) = nu^2 - 9/4, nu = l + 3/2, multiplicity (nu^3 - nu/4)/3; drop the constant mode
  const double zeta0 = zeta_zero({1.0 / 3.0, -1.0 / 12.0, 1.5, 9.0 / 4.0}) - 1.0;
  // one-forms: exact part repeats the nonzero function spectrum; coexact (l+1)(l+2) = nu^2 - 1/4,
  // nu from 5/2, multiplicity nu^3 - 9 nu / 4
  const double zeta1 = zeta0 + zeta_zero({1.0, -9.0 / 4.0, 2.5, 0.25});
  CHECK(zeta0 == doctest::Approx(-61.0 / 90.0).epsilon(1e-14));
  CHECK(zeta1 == doctest::Approx(-2.0 / 45.0).epsilon(1e-14));

  CHECK(heat_zeta_zero(s4, curv, 0).zeta_at_zero == doctest::Approx(zeta0).epsilon(1e-8));
  CHECK(heat_zeta_zero(s4, curv, 1).zeta_at_zero == doctest::Approx(zeta1).epsilon(1e-8));
  CHECK(heat_zeta_zero(s4, curv, 0).method == ZetaMethod::HeatKernelFormula);
}

TEST_CASE("flat torus heat formula reduces to minus the Betti number") {
  const auto cat = catalog::builtin_catalog();
  const auto& t = cat.find("flat-torus");
  const geometry::CurvatureIntegrals zero{};
  CHECK(heat_zeta_zero(t, zero, 0).zeta_at_zero == -1.0);
  CHECK(heat_zeta_zero(t, zero, 1).zeta_at_zero == -4.0);
  CHECK_THROWS_AS(heat_zeta_zero(t, zero, 2), Error);
}

TEST_CASE("truncated Taub-NUT uses the Dirichlet numbers") {
  const auto cat = catalog::builtin_catalog();
  const auto& tn = cat.find("taub-nut-1");
  const auto& b = *tn.backend;
  const double rho = 40.0;
  const auto curv = geometry::integrate_invariants(b, geometry::default_resolution(b), rho, false);
  const auto edge = geometry::boundary_report(b, rho, geometry::default_boundary_resolution(b));
  // b0_D = b1_D = 0 here, so only curvature and boundary terms remain
  const auto z0 = heat_zeta_zero(tn, curv, 0, edge);
  const auto z1 = heat_zeta_zero(tn, curv, 1, edge);
  CHECK(std::abs(z0.zeta_at_zero) < 0.1);
  CHECK(std::abs(z1.zeta_at_zero) < 0.5);
  CHECK(std::isfinite(z0.truncation_error));
}

}  // TEST_SUITE
