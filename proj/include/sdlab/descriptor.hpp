#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "sdlab/geometry.hpp"

namespace sdlab {

enum class ManifoldKind { Compact, Alf };

std::string_view to_string(ManifoldKind kind) noexcept;

/// Topological data of a four-manifold plus the source of its curvature integrals.
struct ManifoldDescriptor {
  std::string name;
  ManifoldKind kind = ManifoldKind::Compact;
  int b0 = 1;
  int b1 = 0;
  int bplus_l2 = 0;
  int bminus_l2 = 0;
  long torsion_order = 1;
  std::optional<int> b0_D;  // empty means "derive" (ALF only)
  std::optional<int> b1_D;
  bool h1_neck_trivial = false;
  /// Backend id, or "analytic" when the integrals are supplied.
  std::string geometry = "analytic";
  std::optional<geometry::GeometryBackend> backend;
  std::optional<geometry::CurvatureIntegrals> analytic_integrals;
  double vol_flat_torus_factor = 1.0;

  bool is_alf() const noexcept { return kind == ManifoldKind::Alf; }
};

/// Throws a validation error naming the field and the violated invariant.
void validate(const ManifoldDescriptor& desc);

}  // namespace sdlab
