#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "sdlab/geometry.hpp"

namespace sdlab::cache {

inline constexpr std::string_view kCodeVersion = "sdlab-1.0.0";

/// SDLAB_CACHE_DIR if set, else $HOME/.cache/sdlab, else ./.sdlab-cache.
std::filesystem::path default_cache_dir();

/// 16 hex digits of the FNV-1a 64-bit hash.
std::string content_hash(std::string_view text);

/// Hash of (backend id and parameters, resolution, cutoff, code version).
std::string integrals_key(const geometry::GeometryBackend& backend, int resolution, double cutoff,
                          std::string_view version = kCodeVersion);

/// Atomic write of `payload` under `key`, creating the directory when needed.
void store(const std::filesystem::path& dir, const std::string& key, const std::string& payload);

/// Payload stored under key, nullopt on a miss. A damaged file is a miss with a warning.
std::optional<std::string> load(const std::filesystem::path& dir, const std::string& key,
                                std::string* warning = nullptr);

/// Lossless text form (IEEE bit patterns) of the integrals.
std::string encode_integrals(const geometry::CurvatureIntegrals& integrals);
geometry::CurvatureIntegrals decode_integrals(std::string_view payload);

struct CachedIntegrals {
  geometry::CurvatureIntegrals value;
  bool hit = false;
  std::string key;
  std::string path;
  std::string warning;
};

/// integrate_invariants behind the content-addressed cache.
CachedIntegrals cached_integrals(const geometry::GeometryBackend& backend, int resolution, double cutoff,
                                 bool use_cache, const std::filesystem::path& dir);

}  // namespace sdlab::cache
