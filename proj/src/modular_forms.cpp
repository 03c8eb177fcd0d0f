#include "sdlab/modular_forms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdlab/errors.hpp"

namespace sdlab::modular {

ComplexCoupling::ComplexCoupling(cplx tau) : tau_(tau) {
  if (!(tau.imag() > 0.0) || !std::isfinite(tau.real()) || !std::isfinite(tau.imag()))
    fail(ErrorKind::Domain, "Im(tau) > 0", "coupling must lie in the upper half-plane");
}

ComplexCoupling ComplexCoupling::from_angle_and_coupling(double theta_angle, double coupling_e) {
  if (!(coupling_e > 0.0)) fail(ErrorKind::Domain, "e > 0", "gauge coupling must be positive");
  return ComplexCoupling(cplx(theta_angle / (2.0 * kPi), 4.0 * kPi / (coupling_e * coupling_e)));
}

double theta_tail_bound(double im_tau, int terms) {
  const double n = terms;
  return 2.0 * std::exp(-kPi * im_tau * n * n) / (1.0 - std::exp(-kPi * im_tau * (2.0 * n + 1.0)));
}

namespace {

// exp(i pi n^2 tau) with the phase reduced modulo 2 before multiplying by pi
cplx theta_term(double re, double im, long n) {
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  const double phase = kPi * std::fmod(re * n2, 2.0);
  return std::exp(-kPi * im * n2) * cplx(std::cos(phase), std::sin(phase));
}

}  // namespace

ThetaValue theta(const ComplexCoupling& tau, double tol, int term_cap) {
  if (!(tol > 0.0)) fail(ErrorKind::Domain, "tol > 0", "theta tolerance must be positive");
  const double y = tau.im();
  // start from the Gaussian estimate and walk to the minimal admissible N
  const double guess = std::floor(std::sqrt(std::max(0.0, std::log(2.0 / tol)) / (kPi * y))) - 1.0;
  int n = static_cast<int>(std::clamp(guess, 1.0, static_cast<double>(term_cap)));
  while (n > 1 && theta_tail_bound(y, n - 1) <= tol) --n;
  while (theta_tail_bound(y, n) > tol) {
    if (n >= term_cap)
      fail(ErrorKind::Resource, "terms <= theta term cap",
           "theta truncation would exceed the term cap of " + std::to_string(term_cap),
           static_cast<double>(term_cap));
    ++n;
  }

  cplx sum{};
  if (tol < 1e-13) {
    CompensatedSum acc;
    for (long k = n; k >= 1; --k) acc.add(theta_term(tau.re(), y, k));
    sum = acc.result();
  } else {
    for (long k = n; k >= 1; --k) sum += theta_term(tau.re(), y, k);
  }
  return ThetaValue{1.0 + 2.0 * sum, theta_tail_bound(y, n), n};
}

cplx principal_power(cplx z, cplx w) {
  if (z == cplx(0.0, 0.0))
    fail(ErrorKind::Branch, "z != 0", "principal power undefined at zero");
  if (z.imag() == 0.0 && z.real() < 0.0)
    fail(ErrorKind::Branch, "z off the negative real axis", "principal power evaluated on the branch cut");
  if (w == cplx(0.0, 0.0)) return 1.0;
  return std::exp(w * std::log(z));
}

double s_transform_residual(const ComplexCoupling& tau) {
  constexpr double tol = 1e-13;
  const cplx lhs = theta(tau.s_transformed(), tol).value;
  const cplx factor = principal_power(tau.value() / cplx(0.0, 1.0), 0.5);
  const cplx rhs = factor * theta(tau, tol).value;
  return std::abs(lhs - rhs);
}

double level2_residual(const ComplexCoupling& tau, double tol) {
  return std::abs(theta(tau.shifted(2), tol).value - theta(tau, tol).value);
}

namespace {

struct ContourIntegrand {
  cplx u;
  double shift;  // signed imaginary offset of the contour

  cplx operator()(double c) const {
    const cplx z(c, shift);
    const cplx cot = std::cos(kPi * z) / std::sin(kPi * z);
    return std::exp(cplx(0.0, kPi) * u * z * z) * cot / cplx(0.0, 1.0);
  }
};

cplx gauss_panel(const ContourIntegrand& f, const GaussRule& rule, double lo, double hi) {
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  cplx acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * acc;
}

cplx adaptive_panel(const ContourIntegrand& f, const GaussRule& rule, double lo, double hi,
                    cplx whole, double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const cplx left = gauss_panel(f, rule, lo, mid);
  const cplx right = gauss_panel(f, rule, mid, hi);
  if (std::abs(left + right - whole) <= tol) return left + right;
  if (depth >= 30)
    fail(ErrorKind::Resource, "quadrature converges within 30 bisections",
         "cot-contour quadrature did not converge", std::abs(left + right - whole));
  return adaptive_panel(f, rule, lo, mid, left, 0.5 * tol, depth + 1) +
         adaptive_panel(f, rule, mid, hi, right, 0.5 * tol, depth + 1);
}

double contour_tail_bound(cplx u, double eps, double half_width) {
  const double a = std::abs(u.real()), b = u.imag();
  const double center = a * eps / b;
  if (half_width <= center) return INFINITY;
  const double prefactor = 2.0 / std::tanh(kPi * eps) * std::exp(kPi * b * eps * eps + kPi * a * a * eps * eps / b);
  return prefactor * std::erfc(std::sqrt(kPi * b) * (half_width - center)) / (2.0 * std::sqrt(b));
}

}  // namespace

CotContourResult cot_contour_theta(cplx u, double eps, double tol) {
  if (!(u.imag() > 0.0)) fail(ErrorKind::Domain, "Im(u) > 0", "contour parameter must lie in the upper half-plane");
  if (!(eps > 0.0) || eps >= 0.5)
    fail(ErrorKind::Domain, "0 < eps < 1/2", "contour shift must avoid the poles of cot(pi z)");
  if (!(tol > 0.0)) fail(ErrorKind::Domain, "tol > 0", "quadrature tolerance must be positive");

  double half_width = std::ceil(std::sqrt((std::log(1.0 / tol) + std::log(4.0)) / (kPi * u.imag()))) + 2.0;
  while (contour_tail_bound(u, eps, half_width) > 0.5 * tol) half_width += 1.0;

  const GaussRule rule = gauss_legendre(20);
  const int panels = static_cast<int>(std::lround(8.0 * half_width));  // width 1/4
  const double panel_tol = 0.5 * tol / panels;

  CotContourResult result;
  result.half_width = half_width;
  result.tail_bound = contour_tail_bound(u, eps, half_width);
  result.panels = panels;
  for (const double sign : {+1.0, -1.0}) {
    const ContourIntegrand f{u, sign * eps};
    PairwiseAccumulator<cplx> acc;
    for (int p = 0; p < panels; ++p) {
      const double lo = -half_width + 0.25 * p, hi = lo + 0.25;
      acc.add(adaptive_panel(f, rule, lo, hi, gauss_panel(f, rule, lo, hi), panel_tol, 0));
    }
    (sign > 0 ? result.plus_shift : result.minus_shift) = acc.result();
  }
  return result;
}

}  // namespace sdlab::modular
