#include "sdlab/descriptor.hpp"

#include <cmath>

#include "sdlab/errors.hpp"

namespace sdlab {

std::string_view to_string(ManifoldKind kind) noexcept {
  return kind == ManifoldKind::Compact ? "compact" : "alf";
}

namespace {

[[noreturn]] void invalid(const ManifoldDescriptor& d, const std::string& field, const std::string& invariant) {
  fail(ErrorKind::Validation, invariant, "manifold '" + d.name + "': field " + field + " violates " + invariant);
}

}  // namespace

void validate(const ManifoldDescriptor& d) {
  if (d.name.empty()) fail(ErrorKind::Validation, "non-empty name", "manifold descriptor without a name");
  if (d.kind == ManifoldKind::Compact && d.b0 < 1) invalid(d, "b0", "b0 >= 1 for a compact connected manifold");
  if (d.b0 < 0) invalid(d, "b0", "b0 >= 0");
  if (d.b1 < 0) invalid(d, "b1", "b1 >= 0");
  if (d.bplus_l2 < 0) invalid(d, "bplus_l2", "bplus_l2 >= 0");
  if (d.bminus_l2 < 0) invalid(d, "bminus_l2", "bminus_l2 >= 0");
  if (d.torsion_order < 1) invalid(d, "torsion_order", "torsion_order >= 1");
  if (!(d.vol_flat_torus_factor > 0.0) || !std::isfinite(d.vol_flat_torus_factor))
    invalid(d, "vol_flat_torus_factor", "vol_flat_torus_factor > 0");

  if (d.kind == ManifoldKind::Compact) {
    if (d.b0_D || d.b1_D) invalid(d, "b0_D/b1_D", "Dirichlet-Betti numbers only on alf entries");
  } else {
    // Dirichlet harmonic forms inject into the L2 ones
    if (d.b0_D && (*d.b0_D < 0 || *d.b0_D > d.b0)) invalid(d, "b0_D", "0 <= b0_D <= b0 (Dirichlet bound)");
    if (d.b1_D && (*d.b1_D < 0 || *d.b1_D > d.b1)) invalid(d, "b1_D", "0 <= b1_D <= b1 (Dirichlet bound)");
  }

  if (d.geometry == "analytic") {
    if (!d.analytic_integrals) invalid(d, "geometry", "analytic geometry requires supplied curvature integrals");
    if (d.backend) invalid(d, "geometry", "analytic entries carry no backend");
  } else {
    if (!d.backend) invalid(d, "geometry", "a geometry backend binding");
    if (geometry::to_string(d.backend->kind()) != d.geometry) invalid(d, "geometry", "backend id matches geometry");
    if (d.backend->is_alf() != d.is_alf()) invalid(d, "kind", "kind agrees with the backend (compact vs alf)");
  }
  if (d.analytic_integrals) {
    const auto& c = *d.analytic_integrals;
    for (double v : {c.I_R_full, c.I_R_endo, c.I_r, c.I_s2, c.I_gb, c.I_p})
      if (!std::isfinite(v)) invalid(d, "analytic integrals", "finite curvature integrals");
    if (std::abs(c.I_R_endo - c.I_R_full / 4.0) > 1e-12 * std::abs(c.I_R_full))
      invalid(d, "I_R_endo", "I_R_endo = I_R_full / 4");
  }
}

}  // namespace sdlab
