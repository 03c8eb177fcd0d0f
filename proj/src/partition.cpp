#include "sdlab/partition.hpp"

#include <cmath>
#include <string>

#include "sdlab/errors.hpp"

namespace sdlab::partition {

namespace {

constexpr double kPi2 = kPi * kPi;

double riemann_norm(const geometry::CurvatureIntegrals& curv, Convention convention) {
  return convention == Convention::PaperEndo ? curv.I_R_endo : curv.I_R_full;
}

void require_finite(const geometry::CurvatureIntegrals& curv) {
  for (double v : {curv.I_R_full, curv.I_R_endo, curv.I_r, curv.I_s2, curv.I_gb, curv.I_p})
    if (!std::isfinite(v))
      fail(ErrorKind::Descriptor, "curvature integrals available", "curvature integrals are missing or not finite");
}

cplx integer_power(cplx z, int n) {
  cplx out = 1.0;
  for (int k = 0; k < n; ++k) out *= z;
  return out;
}

}  // namespace

std::string_view to_string(Convention c) noexcept {
  return c == Convention::GilkeyFull ? "gilkey-full" : "paper-endo";
}

Convention convention_from_string(std::string_view text) {
  if (text == "gilkey-full" || text == "gilkey") return Convention::GilkeyFull;
  if (text == "paper-endo" || text == "paper") return Convention::PaperEndo;
  fail(ErrorKind::Domain, "convention in {gilkey-full, paper-endo}", "unknown convention '" + std::string(text) + "'");
}

double curvature_correction(const geometry::CurvatureIntegrals& curv, Convention convention) {
  require_finite(curv);
  return (riemann_norm(curv, convention) / 120.0 - 87.0 * curv.I_r / 2880.0 + curv.I_s2 / 128.0) / kPi2;
}

PeremCheck perem_check(const ManifoldDescriptor& desc) {
  if (!desc.is_alf())
    fail(ErrorKind::Descriptor, "kind = alf", "the neck condition is defined for ALF descriptors only");
  PeremCheck out;
  out.condition_holds = desc.h1_neck_trivial;
  if (out.condition_holds) {
    out.derived_b1_D = desc.b1;
    out.derived_b0_D = 0;  // maximum principle
  }
  return out;
}

DirichletNumbers dirichlet_numbers(const ManifoldDescriptor& desc) {
  if (!desc.is_alf())
    fail(ErrorKind::Descriptor, "kind = alf", "Dirichlet-Betti numbers are defined for ALF descriptors only");
  const PeremCheck perem = perem_check(desc);
  DirichletNumbers out;
  out.b0_D = desc.b0_D.value_or(0);
  if (desc.b1_D) {
    out.b1_D = *desc.b1_D;
  } else if (perem.derived_b1_D) {
    out.b1_D = *perem.derived_b1_D;
  } else {
    fail(ErrorKind::Descriptor, "b1_D supplied or H^1(neck) = 0",
         "manifold '" + desc.name + "': b1_D missing and the neck condition fails, so it cannot be derived");
  }
  return out;
}

double exponent_E(const ManifoldDescriptor& desc, const geometry::CurvatureIntegrals& curv, Convention convention) {
  const double correction = curvature_correction(curv, convention);
  if (desc.is_alf()) {
    const DirichletNumbers dn = dirichlet_numbers(desc);
    return 0.5 * (dn.b1_D - dn.b0_D + correction);
  }
  return 0.5 * (desc.b1 - desc.b0 + correction);
}

double heat_kernel_exponent(const ManifoldDescriptor& desc, const geometry::CurvatureIntegrals& curv) {
  require_finite(curv);
  // (u^4_0 - tr u^4_1) = (24|R|^2 - 174|r|^2 + 45 s^2) / 360, full contraction
  const double density = (24.0 * curv.I_R_full - 174.0 * curv.I_r + 45.0 * curv.I_s2) / 360.0;
  const double correction = density / (16.0 * kPi2);
  if (desc.is_alf()) {
    const DirichletNumbers dn = dirichlet_numbers(desc);
    return 0.5 * (dn.b1_D - dn.b0_D + correction);
  }
  return 0.5 * (desc.b1 - desc.b0 + correction);
}

ModularWeights compact_weights(const ManifoldDescriptor& desc, const geometry::CurvatureIntegrals& curv,
                               Convention convention) {
  if (desc.is_alf()) fail(ErrorKind::Descriptor, "kind = compact", "compact weight formula applied to an ALF entry");
  const double twice_correction = 2.0 * curvature_correction(curv, convention);
  const double base = 2.0 * desc.b0 - 2.0 * desc.b1;
  ModularWeights w;
  w.alpha = 0.25 * (base + 2.0 * desc.bplus_l2 - twice_correction);
  w.beta = 0.25 * (base + 2.0 * desc.bminus_l2 - twice_correction);
  w.sigma_phase = 0.5 * (desc.bplus_l2 - desc.bminus_l2);
  w.convention = convention;
  return w;
}

ModularWeights alf_weights(const ManifoldDescriptor& desc, const geometry::CurvatureIntegrals& curv,
                           Convention convention) {
  if (!desc.is_alf()) fail(ErrorKind::Descriptor, "kind = alf", "ALF weight formula applied to a compact entry");
  const DirichletNumbers dn = dirichlet_numbers(desc);
  const double twice_correction = 2.0 * curvature_correction(curv, convention);
  const double base = 2.0 * dn.b0_D - 2.0 * dn.b1_D;
  ModularWeights w;
  w.alpha = 0.25 * (base + 2.0 * desc.bplus_l2 - twice_correction);
  w.beta = 0.25 * (base + 2.0 * desc.bminus_l2 - twice_correction);
  w.sigma_phase = 0.5 * (desc.bplus_l2 - desc.bminus_l2);
  w.convention = convention;
  return w;
}

ModularWeights modular_weights(const ManifoldDescriptor& desc, const geometry::CurvatureIntegrals& curv,
                               Convention convention) {
  return desc.is_alf() ? alf_weights(desc, curv, convention) : compact_weights(desc, curv, convention);
}

PartitionEvaluation assemble_partition(const ManifoldDescriptor& desc, const geometry::CurvatureIntegrals& curv,
                                       const modular::ComplexCoupling& tau, Convention convention, double tol) {
  PartitionEvaluation out;
  PartitionFactors& f = out.factors;
  f.torsion_factor = static_cast<double>(desc.torsion_order);
  if (desc.bplus_l2 > 0) f.theta_plus = integer_power(modular::theta(tau, tol).value, desc.bplus_l2);
  if (desc.bminus_l2 > 0) f.theta_minus = integer_power(modular::theta(tau.reflected(), tol).value, desc.bminus_l2);
  f.imtau_power_exponent = exponent_E(desc, curv, convention);
  f.imtau_power = modular::principal_power(cplx(tau.im() / (8.0 * kPi2), 0.0), f.imtau_power_exponent).real();
  f.torus_volume = desc.vol_flat_torus_factor;
  f.det_factor = 1.0;
  out.value = f.torsion_factor * f.theta_plus * f.theta_minus * f.torus_volume * f.det_factor * f.imtau_power;
  return out;
}

ModularityReport verify_modularity(const ManifoldDescriptor& desc, const geometry::CurvatureIntegrals& curv,
                                   const std::vector<modular::ComplexCoupling>& samples, Convention convention) {
  ModularityReport report;
  report.weights = modular_weights(desc, curv, convention);
  const ModularWeights& w = report.weights;
  const cplx phase = modular::principal_power(cplx(0.0, -1.0), w.sigma_phase);
  for (const auto& tau : samples) {
    const cplx z = assemble_partition(desc, curv, tau, convention).value;
    const cplx z_s = assemble_partition(desc, curv, tau.s_transformed(), convention).value;
    const cplx z_t2 = assemble_partition(desc, curv, tau.shifted(2), convention).value;
    const cplx predicted = phase * modular::principal_power(tau.value(), w.alpha) *
                           modular::principal_power(std::conj(tau.value()), w.beta) * z;
    const double scale = std::abs(z);
    const double residual = std::abs(z_s - predicted) / scale;
    report.residuals.push_back(residual);
    report.max_residual = std::max(report.max_residual, residual);
    report.max_level2_residual = std::max(report.max_level2_residual, std::abs(z_t2 - z) / scale);
  }
  return report;
}

AnomalyCounterterms anomaly_counterterms(const ManifoldDescriptor& desc, const ModularWeights& weights,
                                         const geometry::CurvatureIntegrals& curv, double tolerance) {
  require_finite(curv);
  AnomalyCounterterms out;
  out.convention = weights.convention;
  // correction part of the weights, shared by alpha and beta
  DensityCoefficients shared;
  shared.c_R = -1.0 / (240.0 * kPi2);
  shared.c_r = 87.0 / (5760.0 * kPi2);
  shared.c_s2 = -1.0 / (256.0 * kPi2);
  shared.c_gb = 0.25;
  out.alpha = shared;
  out.beta = shared;
  out.alpha.c_p = 0.25;
  out.beta.c_p = -0.25;

  const double sigma_betti = desc.bplus_l2 - desc.bminus_l2;
  double chi_betti = 0.0;
  const auto near = [&](double a, double b) { return std::abs(a - b) <= tolerance * std::max(1.0, std::abs(b)) + curv.error_estimate; };

  if (desc.is_alf()) {
    const PeremCheck perem = perem_check(desc);
    if (!perem.condition_holds)
      fail(ErrorKind::Consistency, "H^1(neck) = 0",
           "manifold '" + desc.name + "': neck condition fails, the weights are not local curvature integrals");
    const DirichletNumbers dn = dirichlet_numbers(desc);
    chi_betti = 2.0 * dn.b0_D - 2.0 * dn.b1_D + desc.bplus_l2 + desc.bminus_l2;
    if (!near(curv.I_gb, chi_betti))
      fail(ErrorKind::Consistency, "I_gb = 2 b0_D - 2 b1_D + b+ + b-",
           "manifold '" + desc.name + "': Euler integral disagrees with the Betti data", curv.I_gb - chi_betti);
    out.chi_used = curv.I_gb;
    out.sigma_used = sigma_betti;  // the combination the theta factors produce
  } else {
    chi_betti = 2.0 * desc.b0 - 2.0 * desc.b1 + desc.bplus_l2 + desc.bminus_l2;
    if (!near(curv.I_gb, chi_betti) || !near(curv.I_p, sigma_betti))
      fail(ErrorKind::Consistency, "(I_gb, I_p) = (chi, sigma) from Betti data",
           "manifold '" + desc.name + "': characteristic integrals disagree with the Betti data",
           std::max(std::abs(curv.I_gb - chi_betti), std::abs(curv.I_p - sigma_betti)));
    out.chi_used = curv.I_gb;
    out.sigma_used = curv.I_p;
  }
  out.sigma_integral = curv.I_p;
  out.sigma_discrepancy = curv.I_p - sigma_betti;

  const double I_R = riemann_norm(curv, weights.convention);
  const auto reconstruct = [&](const DensityCoefficients& c) {
    return c.c_gb * out.chi_used + c.c_p * out.sigma_used + c.c_R * I_R + c.c_r * curv.I_r + c.c_s2 * curv.I_s2;
  };
  out.alpha_reconstructed = reconstruct(out.alpha);
  out.beta_reconstructed = reconstruct(out.beta);
  return out;
}

PathologyResult pathological_partition(const modular::ComplexCoupling& tau) {
  const auto gaussian = [](cplx t) { return modular::principal_power(cplx(0.0, 1.0) / (-std::conj(t)), 0.5); };
  PathologyResult out;
  out.gaussian_factor = gaussian(tau.value());
  PathologyWeightReport& r = out.weight_report;
  r.holomorphic_degree = 0.0;  // depends on conj(tau) only
  r.antiholomorphic_degree = std::log(std::abs(gaussian(2.0 * tau.value()) / out.gaussian_factor)) / std::log(2.0);
  r.s_ratio = gaussian(-1.0 / tau.value()) / out.gaussian_factor;
  r.s_ratio_residual = std::abs(r.s_ratio - cplx(0.0, 1.0) * std::conj(tau.value()));
  r.level2_residual = std::abs(gaussian(tau.value() + 2.0) - out.gaussian_factor);
  // a level-2 modular form of the eredmeny type must be invariant under tau -> tau + 2
  r.fits_modular_form = r.level2_residual <= 1e-8 * std::abs(out.gaussian_factor);
  return out;
}

}  // namespace sdlab::partition
