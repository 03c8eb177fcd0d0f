#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sdlab/descriptor.hpp"

namespace sdlab::catalog {

inline constexpr int kManifestVersion = 1;

struct CatalogManifest {
  int version = kManifestVersion;
  std::vector<ManifoldDescriptor> entries;

  bool contains(std::string_view name) const;
  /// Throws a descriptor error for unknown names.
  const ManifoldDescriptor& find(std::string_view name) const;
};

/// flat-torus, round-s4, k3-analytic, taub-nut-1, taub-nut-2, schwarzschild.
CatalogManifest builtin_catalog();

/// Manifest text format:
///
///   # comment
///   version = 1
///   [manifold my-space]
///   kind = compact | alf
///   b0 = 1
///   ...
///
/// Keys per section: kind, b0, b1, bplus_l2, bminus_l2, torsion_order, b0_D, b1_D
/// (integer or "derive"), h1_neck_trivial, geometry, vol_flat_torus_factor; backend
/// parameters radii, radius, mass, nuts ("x,y,z; x,y,z"), fiber_period; analytic
/// integrals I_R_full, I_R_endo, I_r, I_s2, I_gb, I_p.
/// The result contains the built-in entries followed by the parsed ones.
CatalogManifest parse_manifest_text(std::string_view text, std::string_view source = "<text>");
CatalogManifest parse_manifest(const std::filesystem::path& path);

}  // namespace sdlab::catalog
