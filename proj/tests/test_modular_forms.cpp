#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "sdlab/errors.hpp"
#include "sdlab/modular_forms.hpp"

using namespace sdlab;
using modular::ComplexCoupling;

namespace {

// plain symmetric sum in long double, no tail logic
std::complex<long double> naive_theta(cplx tau, int n_max = 60) {
  const std::complex<long double> t(tau.real(), tau.imag());
  const long double pi = 3.141592653589793238462643383279502884L;
  std::complex<long double> sum = 1.0L;
  for (int n = n_max; n >= 1; --n) sum += 2.0L * std::exp(std::complex<long double>(0.0L, pi) * (long double)(n * n) * t);
  return sum;
}

double gap(cplx a, std::complex<long double> b) {
  return std::abs(a - cplx(static_cast<double>(b.real()), static_cast<double>(b.imag())));
}

}  // namespace

TEST_SUITE("modular_forms") {

TEST_CASE("theta at i equals pi^(1/4) / Gamma(3/4)") {
  const double closed = std::pow(kPi, 0.25) / boost::math::tgamma(0.75);
  const auto t = modular::theta(ComplexCoupling({0.0, 1.0}), 1e-15);
  CHECK(std::abs(t.value - closed) < 1e-15);
  CHECK(t.value.imag() == 0.0);
  CHECK(t.tail_bound <= 1e-15);
}

TEST_CASE("theta agrees with a plain long double sum") {
  for (cplx tau : {cplx(0.0, 2.0), cplx(0.0, 0.5), cplx(0.3, 0.7), cplx(-0.45, 1.1), cplx(0.8, 0.25)}) {
    const auto t = modular::theta(ComplexCoupling(tau), 1e-15);
    CHECK(gap(t.value, naive_theta(tau, 200)) < 1e-13);
  }
}

TEST_CASE("reference values") {
  const auto at = [](cplx tau) { return modular::theta(ComplexCoupling(tau), 1e-15).value; };
  CHECK(std::abs(at({0.0, 2.0}) - 1.00373488548773909) < 1e-14);
  CHECK(std::abs(at({0.0, 0.5}) - 1.41949548808376612) < 1e-14);
  CHECK(std::abs(at({0.3, 0.7}) - cplx(1.13012751249934874, 0.17926421604632179)) < 1e-14);
}

TEST_CASE("tail bound majorizes the discarded terms") {
  for (double y : {0.2, 0.7, 2.0}) {
    for (int n = 1; n <= 4; ++n) {
      double tail = 0.0;
      for (int k = n + 1; k < n + 200; ++k) tail += 2.0 * std::exp(-kPi * y * k * k);
      CHECK(tail <= modular::theta_tail_bound(y, n) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("functional equations") {
  for (cplx tau : {cplx(0.3, 0.7), cplx(-0.2, 0.55), cplx(1.7, 0.3), cplx(0.0, 3.0)}) {
    const ComplexCoupling t(tau);
    CHECK(modular::level2_residual(t, 1e-15) < 1e-12);
    CHECK(modular::s_transform_residual(t) < 1e-9);
  }
  // the period is 2, not 1
  const ComplexCoupling t({0.3, 0.7});
  const auto one = modular::theta(t.shifted(1), 1e-15).value;
  CHECK(std::abs(one - modular::theta(t, 1e-15).value) > 0.1);
}

TEST_CASE("coupling domain") {
  CHECK_THROWS_AS(ComplexCoupling({0.3, 0.0}), Error);
  CHECK_THROWS_AS(ComplexCoupling({0.3, -1.0}), Error);
  const auto c = ComplexCoupling::from_angle_and_coupling(kPi, 2.0);
  CHECK(c.re() == doctest::Approx(0.5));
  CHECK(c.im() == doctest::Approx(kPi));
  CHECK(std::abs(c.s_transformed().value() + 1.0 / c.value()) < 1e-15);
  CHECK(c.reflected().re() == doctest::Approx(-0.5));
}

TEST_CASE("principal power") {
  CHECK(std::abs(modular::principal_power({0.0, 1.0}, 0.5) - std::polar(1.0, kPi / 4)) < 1e-15);
  CHECK(std::abs(modular::principal_power({4.0, 0.0}, 0.5) - 2.0) < 1e-15);
  try {
    modular::principal_power({-1.0, 0.0}, 0.5);
    FAIL("expected a branch error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Branch);
  }
}

TEST_CASE("term cap is a resource error") {
  try {
    modular::theta(ComplexCoupling({0.0, 1e-9}), 1e-15, 1000);
    FAIL("expected a resource error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Resource);
  }
}

TEST_CASE("cot contour reproduces theta on one branch") {
  for (cplx u : {cplx(0.0, 1.0), cplx(0.0, 2.0), cplx(0.5, 1.0)}) {
    const cplx want = modular::theta(ComplexCoupling(u), 1e-15).value;
    for (double eps : {0.1, 0.2, 0.3}) {
      const auto r = modular::cot_contour_theta(u, eps, 1e-10);
      CHECK(std::abs(r.minus_shift - want) < 1e-6);
      CHECK(std::abs(r.plus_shift + want) < 1e-6);
    }
  }
}

}  // TEST_SUITE
