#include "sdlab/lattice_sum.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "sdlab/errors.hpp"

namespace sdlab::lattice {

namespace {

long sum_of_squares(const std::vector<long>& v) {
  return std::accumulate(v.begin(), v.end(), 0L, [](long acc, long n) { return acc + n * n; });
}

// exp(i pi tau P - i pi conj(tau) M) = exp(-pi y (P + M)) cis(pi x (P - M))
cplx weight_from_norms(const modular::ComplexCoupling& tau, long plus_norm, long minus_norm) {
  const double phase = kPi * std::fmod(tau.re() * static_cast<double>(plus_norm - minus_norm), 2.0);
  const double modulus = std::exp(-kPi * tau.im() * static_cast<double>(plus_norm + minus_norm));
  return modulus * cplx(std::cos(phase), std::sin(phase));
}

}  // namespace

cplx ActionValue::boltzmann_weight() const {
  const double phase = std::remainder(-value.imag(), 2.0 * kPi);
  return std::exp(-value.real()) * cplx(std::cos(phase), std::sin(phase));
}

ActionValue classical_action(const LatticePoint& point, const modular::ComplexCoupling& tau) {
  const double p = static_cast<double>(sum_of_squares(point.plus));
  const double m = static_cast<double>(sum_of_squares(point.minus));
  const cplx i(0.0, 1.0);
  return ActionValue{-i * kPi * tau.value() * p + i * kPi * std::conj(tau.value()) * m};
}

cplx brute_force_partition(int bplus, int bminus, int box, const modular::ComplexCoupling& tau,
                           long long term_cap) {
  if (bplus < 0 || bminus < 0) fail(ErrorKind::Domain, "b+ >= 0 and b- >= 0", "lattice ranks must be non-negative");
  if (box < 1) fail(ErrorKind::Domain, "N >= 1", "box cutoff must be positive");
  const int dim = bplus + bminus;
  const double side = 2.0 * box + 1.0;
  if (std::pow(side, dim) > static_cast<double>(term_cap))
    fail(ErrorKind::Resource, "(2N+1)^(b+ + b-) <= term cap",
         "brute-force lattice sum exceeds the term cap of " + std::to_string(term_cap), std::pow(side, dim));

  PairwiseAccumulator<cplx> acc;
  std::vector<long> coords(dim, -box);
  while (true) {
    long plus_norm = 0, minus_norm = 0;
    for (int k = 0; k < bplus; ++k) plus_norm += coords[k] * coords[k];
    for (int k = bplus; k < dim; ++k) minus_norm += coords[k] * coords[k];
    acc.add(weight_from_norms(tau, plus_norm, minus_norm));
    // lexicographic increment, last coordinate fastest
    int k = dim - 1;
    while (k >= 0 && coords[k] == box) coords[k--] = -box;
    if (k < 0) break;
    ++coords[k];
  }
  return acc.result();
}

cplx theta_product(int bplus, int bminus, const modular::ComplexCoupling& tau, double tol) {
  if (bplus < 0 || bminus < 0) fail(ErrorKind::Domain, "b+ >= 0 and b- >= 0", "lattice ranks must be non-negative");
  cplx result = 1.0;
  if (bplus > 0) {
    const cplx t = modular::theta(tau, tol).value;
    for (int k = 0; k < bplus; ++k) result *= t;
  }
  if (bminus > 0) {
    const cplx t = modular::theta(tau.reflected(), tol).value;
    for (int k = 0; k < bminus; ++k) result *= t;
  }
  return result;
}

int default_box_cutoff(const modular::ComplexCoupling& tau, double tol) {
  return modular::theta(tau, tol).terms_used;
}

}  // namespace sdlab::lattice
