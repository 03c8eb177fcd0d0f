#pragma once

#include <vector>

#include "sdlab/modular_forms.hpp"

namespace sdlab::lattice {

/// A point of Lambda^2 = Lambda^+ x Lambda^-, one integer per L^2 harmonic direction.
struct LatticePoint {
  std::vector<long> plus;
  std::vector<long> minus;
};

struct ActionValue {
  cplx value;  // Euclidean action S(nabla^0, tau)

  /// exp(-S), evaluated with the phase reduced modulo 2 pi.
  cplx boltzmann_weight() const;
};

/// S = -i pi tau sum(plus^2) + i pi conj(tau) sum(minus^2)
ActionValue classical_action(const LatticePoint& point, const modular::ComplexCoupling& tau);

inline constexpr long long kBruteForceTermCap = 50'000'000;

/// Sum of exp(-S) over the box [-N, N]^(b+ + b-), lexicographic order, pairwise reduction.
cplx brute_force_partition(int bplus, int bminus, int box, const modular::ComplexCoupling& tau,
                           long long term_cap = kBruteForceTermCap);

/// theta(tau)^{b+} theta(-conj tau)^{b-}
cplx theta_product(int bplus, int bminus, const modular::ComplexCoupling& tau, double tol = 1e-15);

/// Smallest box N for which one coordinate's discarded tail is below tol.
int default_box_cutoff(const modular::ComplexCoupling& tau, double tol);

}  // namespace sdlab::lattice
