#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "sdlab/descriptor.hpp"
#include "sdlab/geometry.hpp"

namespace sdlab::spectral {

enum class ZetaMethod { EpsteinContinuation, HeatKernelFormula };

std::string_view to_string(ZetaMethod method) noexcept;

struct SpectralZetaResult {
  double zeta_at_zero = 0.0;
  ZetaMethod method = ZetaMethod::EpsteinContinuation;
  double truncation_error = 0.0;
  /// det' factors are not computed; reported as the placeholder 1.
  double det_factor = 1.0;
};

/// Row-major 4x4 matrix whose rows generate the lattice.
using LatticeGenerators = std::array<double, 16>;

inline constexpr double kMaxConditionNumber = 1e8;
inline constexpr long long kLatticeTermCap = 50'000'000;

struct EpsteinValue {
  double value = 0.0;
  double truncation_error = 0.0;
  long long terms = 0;
};

/// Z(s) = sum' |v|^{-2s} over the lattice, continued to s != 2 by the incomplete-gamma
/// (theta-function) representation split at the self-dual point after rescaling to unit covolume.
EpsteinValue epstein_zeta(const LatticeGenerators& generators, double s);

/// Rows of B^{-T}: generators of the dual lattice.
LatticeGenerators dual_lattice(const LatticeGenerators& generators);

/// zeta(0) of the k-form Laplacian on R^4 / Lambda. The spectrum is 4 pi^2 |q|^2 over the
/// dual lattice with multiplicity C(4, k); the n = 0 modes are the harmonic forms.
SpectralZetaResult torus_zeta_zero(const LatticeGenerators& generators, int k);

/// zeta_k(0) = -b^k + (1/16 pi^2) int tr u^4_k, curvature integrals in the full contraction.
/// With a boundary report, adds the v^4 integral and the flux of grad s, and uses the
/// Dirichlet-Betti numbers.
SpectralZetaResult heat_zeta_zero(const ManifoldDescriptor& desc, const geometry::CurvatureIntegrals& curv, int k,
                                  const std::optional<geometry::TruncationReport>& boundary = std::nullopt);

}  // namespace sdlab::spectral
