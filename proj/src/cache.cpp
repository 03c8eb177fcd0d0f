#include "sdlab/cache.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "sdlab/errors.hpp"

namespace sdlab::cache {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kMagic = "sdlab-cache";

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

fs::path entry_path(const fs::path& dir, const std::string& key) { return dir / (key + ".cache"); }

}  // namespace

fs::path default_cache_dir() {
  if (const char* env = std::getenv("SDLAB_CACHE_DIR"); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "sdlab";
  return ".sdlab-cache";
}

std::string content_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return hex64(h);
}

std::string integrals_key(const geometry::GeometryBackend& backend, int resolution, double cutoff,
                          std::string_view version) {
  std::string text = backend.cache_key();
  text += ";resolution=" + std::to_string(resolution);
  text += ";cutoff=" + fmt17(cutoff);
  text += ";version=";
  text += version;
  return content_hash(text);
}

void store(const fs::path& dir, const std::string& key, const std::string& payload) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Resource, "cache directory writable", "cannot create cache directory '" + dir.string() + "'");
  const fs::path target = entry_path(dir, key);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Resource, "cache directory writable", "cannot write cache file '" + tmp.string() + "'");
    out << kMagic << ' ' << key << ' ' << content_hash(payload) << ' ' << payload.size() << '\n' << payload;
    if (!out) fail(ErrorKind::Resource, "cache directory writable", "short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, target, ec);
  if (ec) fail(ErrorKind::Resource, "cache directory writable", "cannot publish cache file '" + target.string() + "'");
}

std::optional<std::string> load(const fs::path& dir, const std::string& key, std::string* warning) {
  const fs::path path = entry_path(dir, key);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  const auto damaged = [&](const std::string& why) -> std::optional<std::string> {
    if (warning) *warning = "ignoring damaged cache file " + path.string() + " (" + why + "); recomputing";
    return std::nullopt;
  };
  std::string header;
  if (!std::getline(in, header)) return damaged("missing header");
  std::istringstream hs(header);
  std::string magic, stored_key, checksum;
  std::size_t length = 0;
  if (!(hs >> magic >> stored_key >> checksum >> length) || magic != kMagic) return damaged("bad header");
  if (stored_key != key) return damaged("key mismatch");
  std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (payload.size() != length) return damaged("length mismatch");
  if (content_hash(payload) != checksum) return damaged("checksum mismatch");
  return payload;
}

std::string encode_integrals(const geometry::CurvatureIntegrals& c) {
  std::ostringstream out;
  const auto put = [&](const char* name, double v) { out << name << '=' << hex64(std::bit_cast<std::uint64_t>(v)) << '\n'; };
  put("I_R_full", c.I_R_full);
  put("I_R_endo", c.I_R_endo);
  put("I_r", c.I_r);
  put("I_s2", c.I_s2);
  put("I_gb", c.I_gb);
  put("I_p", c.I_p);
  put("error_estimate", c.error_estimate);
  put("panel_error", c.panel_error);
  put("tail_error", c.tail_error);
  put("tail_exponent", c.tail_exponent);
  put("cutoff", c.cutoff);
  out << "resolution=" << c.resolution << '\n';
  out << "evaluations=" << c.evaluations << '\n';
  return out.str();
}

geometry::CurvatureIntegrals decode_integrals(std::string_view payload) {
  std::map<std::string, std::string> fields;
  std::istringstream in{std::string(payload)};
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::Parse, "well-formed cache payload", "cache line without '='");
    fields[line.substr(0, eq)] = line.substr(eq + 1);
  }
  const auto text = [&](const char* name) -> const std::string& {
    const auto it = fields.find(name);
    if (it == fields.end()) fail(ErrorKind::Parse, "well-formed cache payload", std::string("cache payload lacks ") + name);
    return it->second;
  };
  const auto real = [&](const char* name) {
    const std::string& s = text(name);
    if (s.size() != 16) fail(ErrorKind::Parse, "well-formed cache payload", std::string("bad bit pattern for ") + name);
    return std::bit_cast<double>(static_cast<std::uint64_t>(std::stoull(s, nullptr, 16)));
  };
  geometry::CurvatureIntegrals c;
  c.I_R_full = real("I_R_full");
  c.I_R_endo = real("I_R_endo");
  c.I_r = real("I_r");
  c.I_s2 = real("I_s2");
  c.I_gb = real("I_gb");
  c.I_p = real("I_p");
  c.error_estimate = real("error_estimate");
  c.panel_error = real("panel_error");
  c.tail_error = real("tail_error");
  c.tail_exponent = real("tail_exponent");
  c.cutoff = real("cutoff");
  c.resolution = std::stoi(text("resolution"));
  c.evaluations = std::stol(text("evaluations"));
  return c;
}

CachedIntegrals cached_integrals(const geometry::GeometryBackend& backend, int resolution, double cutoff,
                                 bool use_cache, const fs::path& dir) {
  CachedIntegrals out;
  out.key = integrals_key(backend, resolution, cutoff);
  out.path = entry_path(dir, out.key).string();
  if (use_cache) {
    if (auto payload = load(dir, out.key, &out.warning)) {
      try {
        out.value = decode_integrals(*payload);
        out.hit = true;
        return out;
      } catch (const Error& e) {
        out.warning = "ignoring damaged cache file " + out.path + " (" + e.what() + "); recomputing";
      }
    }
  }
  out.value = geometry::integrate_invariants(backend, resolution, cutoff);
  if (use_cache) {
    try {
      store(dir, out.key, encode_integrals(out.value));
    } catch (const Error& e) {
      out.warning = e.what();
    }
  }
  return out;
}

}  // namespace sdlab::cache
