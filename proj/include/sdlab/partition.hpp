#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "sdlab/descriptor.hpp"
#include "sdlab/geometry.hpp"
#include "sdlab/modular_forms.hpp"

namespace sdlab::partition {

/// Which norm of the Riemann tensor the weight formulas consume.
enum class Convention { GilkeyFull, PaperEndo };

std::string_view to_string(Convention c) noexcept;
/// Accepts "gilkey-full", "gilkey", "paper-endo", "paper".
Convention convention_from_string(std::string_view text);

/// (1/pi^2) int ((1/120)|R|^2 - (87/2880)|r|^2 + (1/128) s^2) dV with |R|^2 read per convention.
double curvature_correction(const geometry::CurvatureIntegrals& curv, Convention convention);

struct DirichletNumbers {
  int b0_D = 0;
  int b1_D = 0;
};

struct PeremCheck {
  bool condition_holds = false;
  std::optional<int> derived_b1_D;
  std::optional<int> derived_b0_D;
};

/// H^1 of the neck vanishes: then b1_D = b1 and b0_D = 0.
PeremCheck perem_check(const ManifoldDescriptor& desc);

/// Supplied numbers where present, derived ones otherwise; descriptor error when b1_D can
/// be neither read nor derived.
DirichletNumbers dirichlet_numbers(const ManifoldDescriptor& desc);

/// E = (b1 - b0 + correction) / 2, with the Dirichlet numbers for ALF descriptors.
double exponent_E(const ManifoldDescriptor& desc, const geometry::CurvatureIntegrals& curv, Convention convention);

/// (zeta_0(0) - zeta_1(0)) / 2 from the Gilkey densities, for comparison with exponent_E.
double heat_kernel_exponent(const ManifoldDescriptor& desc, const geometry::CurvatureIntegrals& curv);

struct ModularWeights {
  double alpha = 0.0;
  double beta = 0.0;
  double sigma_phase = 0.0;  // sigma/2 in (-i)^{sigma/2}, sigma = b+ - b-
  Convention convention = Convention::PaperEndo;
};

ModularWeights compact_weights(const ManifoldDescriptor& desc, const geometry::CurvatureIntegrals& curv,
                               Convention convention);
ModularWeights alf_weights(const ManifoldDescriptor& desc, const geometry::CurvatureIntegrals& curv,
                           Convention convention);
/// compact_weights or alf_weights by descriptor kind.
ModularWeights modular_weights(const ManifoldDescriptor& desc, const geometry::CurvatureIntegrals& curv,
                               Convention convention);

struct PartitionFactors {
  double torsion_factor = 1.0;
  cplx theta_plus{1.0, 0.0};   // theta(tau)^{b+}
  cplx theta_minus{1.0, 0.0};  // theta(-conj tau)^{b-}
  double imtau_power_exponent = 0.0;
  double imtau_power = 1.0;    // (Im tau / 8 pi^2)^E
  double torus_volume = 1.0;
  double det_factor = 1.0;
};

struct PartitionEvaluation {
  cplx value;
  PartitionFactors factors;
};

PartitionEvaluation assemble_partition(const ManifoldDescriptor& desc, const geometry::CurvatureIntegrals& curv,
                                       const modular::ComplexCoupling& tau, Convention convention,
                                       double tol = 1e-15);

struct ModularityReport {
  double max_residual = 0.0;         // S-transform law, relative to |Z(tau)|
  double max_level2_residual = 0.0;  // |Z(tau + 2) - Z(tau)| / |Z(tau)|
  std::vector<double> residuals;
  ModularWeights weights;
};

ModularityReport verify_modularity(const ManifoldDescriptor& desc, const geometry::CurvatureIntegrals& curv,
                                   const std::vector<modular::ComplexCoupling>& samples, Convention convention);

/// Five-density representation weight = c_gb I_gb + c_p I_p + c_R I_R + c_r I_r + c_s2 I_s2.
struct DensityCoefficients {
  double c_R = 0.0;
  double c_r = 0.0;
  double c_s2 = 0.0;
  double c_gb = 0.0;
  double c_p = 0.0;
};

struct AnomalyCounterterms {
  DensityCoefficients alpha;
  DensityCoefficients beta;
  double alpha_reconstructed = 0.0;
  double beta_reconstructed = 0.0;
  double chi_used = 0.0;    // Euler number entering the representation
  double sigma_used = 0.0;  // signature entering the representation
  double sigma_integral = 0.0;      // I_p from the curvature integrals
  double sigma_discrepancy = 0.0;   // sigma_integral - (b+ - b-)
  Convention convention = Convention::PaperEndo;
};

/// Consistency error when the Betti data cannot be represented by local densities: compact
/// entries whose (chi, sigma) disagree with (I_gb, I_p), or ALF entries failing the neck condition.
AnomalyCounterterms anomaly_counterterms(const ManifoldDescriptor& desc, const ModularWeights& weights,
                                         const geometry::CurvatureIntegrals& curv, double tolerance = 0.02);

struct PathologyWeightReport {
  double holomorphic_degree = 0.0;
  double antiholomorphic_degree = -0.5;
  cplx s_ratio;                 // G(-1/tau) / G(tau)
  double s_ratio_residual = 0.0;  // |s_ratio - i conj(tau)|
  double level2_residual = 0.0;   // |G(tau + 2) - G(tau)|
  bool fits_modular_form = false;
};

struct PathologyResult {
  cplx gaussian_factor;
  PathologyWeightReport weight_report;
};

/// Gaussian integral of exp(i pi (-conj tau) c^2) over the real line, (i / (-conj tau))^{1/2}.
PathologyResult pathological_partition(const modular::ComplexCoupling& tau);

}  // namespace sdlab::partition
