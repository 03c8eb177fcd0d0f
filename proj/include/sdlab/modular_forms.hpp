#pragma once

#include <complex>

#include "sdlab/numerics.hpp"

namespace sdlab::modular {

/// Point of the upper half-plane, tau = theta/2pi + 4 pi i / e^2.
class ComplexCoupling {
 public:
  /// Throws a domain error unless Im(tau) > 0.
  explicit ComplexCoupling(cplx tau);

  static ComplexCoupling from_angle_and_coupling(double theta_angle, double coupling_e);

  cplx value() const noexcept { return tau_; }
  double re() const noexcept { return tau_.real(); }
  double im() const noexcept { return tau_.imag(); }

  /// -1/tau
  ComplexCoupling s_transformed() const { return ComplexCoupling(-1.0 / tau_); }
  /// tau + k
  ComplexCoupling shifted(int k) const { return ComplexCoupling(tau_ + static_cast<double>(k)); }
  /// -conj(tau), the reflection that stays in the upper half-plane
  ComplexCoupling reflected() const { return ComplexCoupling(-std::conj(tau_)); }

 private:
  cplx tau_;
};

struct ThetaValue {
  cplx value;
  double tail_bound = 0.0;
  int terms_used = 0;
};

inline constexpr int kThetaTermCap = 1'000'000;

/// theta(tau) = 1 + 2 sum_{n>=1} exp(i pi n^2 tau), truncated at the smallest N whose
/// geometric tail majorant 2 e^{-pi y N^2} / (1 - e^{-pi y (2N+1)}) is <= tol.
ThetaValue theta(const ComplexCoupling& tau, double tol, int term_cap = kThetaTermCap);

/// Geometric majorant of the discarded tail after N terms.
double theta_tail_bound(double im_tau, int terms);

/// exp(w Log z) with the principal logarithm; z must be off the cut (-inf, 0].
cplx principal_power(cplx z, cplx w);

/// |theta(-1/tau) - (tau/i)^{1/2} theta(tau)|, both thetas at tolerance 1e-13.
double s_transform_residual(const ComplexCoupling& tau);

/// |theta(tau + 2) - theta(tau)|
double level2_residual(const ComplexCoupling& tau, double tol);

struct CotContourResult {
  cplx plus_shift;   // contour Im c = +eps
  cplx minus_shift;  // contour Im c = -eps
  double half_width = 0.0;  // integration interval [-C, C]
  double tail_bound = 0.0;
  int panels = 0;
};

/// (1/i) int_R exp(i pi u (c + i sigma eps)^2) cot(pi (c + i sigma eps)) dc for sigma = +1, -1.
CotContourResult cot_contour_theta(cplx u, double eps, double tol);

}  // namespace sdlab::modular
