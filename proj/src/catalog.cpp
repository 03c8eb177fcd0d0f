#include "sdlab/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "sdlab/errors.hpp"

namespace sdlab::catalog {

namespace {

using geometry::CurvatureIntegrals;
using geometry::GeometryBackend;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

struct Located {
  std::string value;
  int line = 0;
};

class SectionParser {
 public:
  SectionParser(std::string source, std::string name, int line)
      : source_(std::move(source)), name_(std::move(name)), header_line_(line) {}

  void add(std::string key, std::string value, int line) {
    if (fields_.count(key)) parse_error(line, "duplicate key '" + key + "'");
    fields_[std::move(key)] = Located{std::move(value), line};
  }

  ManifoldDescriptor build() {
    static const char* const known[] = {"kind",      "b0",        "b1",        "bplus_l2",        "bminus_l2",
                                        "torsion_order", "b0_D",  "b1_D",      "h1_neck_trivial", "geometry",
                                        "vol_flat_torus_factor", "radii", "radius", "mass", "nuts",
                                        "fiber_period", "I_R_full", "I_R_endo", "I_r", "I_s2", "I_gb", "I_p"};
    for (const auto& [key, loc] : fields_)
      if (std::find(std::begin(known), std::end(known), key) == std::end(known))
        parse_error(loc.line, "unknown key '" + key + "'");

    ManifoldDescriptor d;
    d.name = name_;
    const std::string kind = required("kind");
    if (kind == "compact") d.kind = ManifoldKind::Compact;
    else if (kind == "alf") d.kind = ManifoldKind::Alf;
    else parse_error(fields_["kind"].line, "kind must be 'compact' or 'alf'");

    d.b0 = integer("b0").value_or(d.is_alf() ? 0 : 1);
    d.b1 = integer("b1").value_or(0);
    d.bplus_l2 = integer("bplus_l2").value_or(0);
    d.bminus_l2 = integer("bminus_l2").value_or(0);
    d.torsion_order = integer("torsion_order").value_or(1);
    d.b0_D = dirichlet("b0_D");
    d.b1_D = dirichlet("b1_D");
    d.h1_neck_trivial = boolean("h1_neck_trivial").value_or(false);
    d.vol_flat_torus_factor = real("vol_flat_torus_factor").value_or(1.0);
    d.geometry = fields_.count("geometry") ? fields_["geometry"].value : "analytic";

    const bool has_integrals = fields_.count("I_R_full") || fields_.count("I_gb");
    if (has_integrals) {
      CurvatureIntegrals c;
      c.I_R_full = real("I_R_full").value_or(0.0);
      c.I_R_endo = real("I_R_endo").value_or(c.I_R_full / 4.0);
      c.I_r = real("I_r").value_or(0.0);
      c.I_s2 = real("I_s2").value_or(0.0);
      c.I_gb = real("I_gb").value_or(0.0);
      c.I_p = real("I_p").value_or(0.0);
      d.analytic_integrals = c;
    }
    if (d.geometry != "analytic") d.backend = make_backend(d.geometry);
    return d;
  }

  int header_line() const { return header_line_; }

 private:
  [[noreturn]] void parse_error(int line, const std::string& what) const {
    fail(ErrorKind::Parse, "well-formed manifest", source_ + ":" + std::to_string(line) + ": " + what);
  }

  std::string required(const std::string& key) {
    if (!fields_.count(key))
      fail(ErrorKind::Validation, key + " present",
           source_ + ":" + std::to_string(header_line_) + ": manifold '" + name_ + "' lacks required key '" + key + "'");
    return fields_[key].value;
  }

  std::optional<double> real(const std::string& key) {
    const auto it = fields_.find(key);
    if (it == fields_.end()) return std::nullopt;
    return parse_real(it->second.value, it->second.line, key);
  }

  double parse_real(std::string_view text, int line, const std::string& key) const {
    double v = 0.0;
    const auto t = trim(text);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
      parse_error(line, "key '" + key + "' expects a real number, got '" + std::string(t) + "'");
    return v;
  }

  std::optional<long> integer(const std::string& key) {
    const auto it = fields_.find(key);
    if (it == fields_.end()) return std::nullopt;
    long v = 0;
    const auto t = trim(it->second.value);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
      parse_error(it->second.line, "key '" + key + "' expects an integer, got '" + std::string(t) + "'");
    return v;
  }

  std::optional<int> dirichlet(const std::string& key) {
    const auto it = fields_.find(key);
    if (it == fields_.end() || it->second.value == "derive") return std::nullopt;
    return static_cast<int>(*integer(key));
  }

  std::optional<bool> boolean(const std::string& key) {
    const auto it = fields_.find(key);
    if (it == fields_.end()) return std::nullopt;
    if (it->second.value == "true") return true;
    if (it->second.value == "false") return false;
    parse_error(it->second.line, "key '" + key + "' expects true or false");
  }

  std::vector<double> list(const std::string& key, char sep) {
    const auto it = fields_.find(key);
    std::vector<double> out;
    for (auto part : split(it->second.value, sep)) out.push_back(parse_real(part, it->second.line, key));
    return out;
  }

  GeometryBackend make_backend(const std::string& id) {
    const auto kind = [&] {
      try {
        return geometry::backend_kind_from_string(id);
      } catch (const Error&) {
        parse_error(fields_["geometry"].line, "unknown geometry '" + id + "'");
      }
    }();
    switch (kind) {
      case geometry::BackendKind::FlatTorus: {
        std::array<double, 4> radii{1.0, 1.0, 1.0, 1.0};
        if (fields_.count("radii")) {
          const auto r = list("radii", ',');
          if (r.size() != 4) parse_error(fields_["radii"].line, "radii expects four values");
          std::copy(r.begin(), r.end(), radii.begin());
        }
        return GeometryBackend::flat_torus(radii);
      }
      case geometry::BackendKind::RoundS4:
        return GeometryBackend::round_s4(real("radius").value_or(1.0));
      case geometry::BackendKind::MultiTaubNut: {
        std::vector<std::array<double, 3>> nuts{{0.0, 0.0, 0.0}};
        if (fields_.count("nuts")) {
          nuts.clear();
          const auto& loc = fields_["nuts"];
          for (auto triple : split(loc.value, ';')) {
            const auto comps = split(triple, ',');
            if (comps.size() != 3) parse_error(loc.line, "each NUT position needs three coordinates");
            nuts.push_back({parse_real(comps[0], loc.line, "nuts"), parse_real(comps[1], loc.line, "nuts"),
                            parse_real(comps[2], loc.line, "nuts")});
          }
        }
        return GeometryBackend::multi_taub_nut(real("mass").value_or(0.5), nuts, real("fiber_period").value_or(0.0));
      }
      case geometry::BackendKind::Schwarzschild:
        return GeometryBackend::schwarzschild(real("mass").value_or(1.0));
    }
    parse_error(header_line_, "unreachable backend");
  }

  std::string source_;
  std::string name_;
  int header_line_;
  std::map<std::string, Located> fields_;
};

ManifoldDescriptor compact(std::string name, int b0, int b1, int bp, int bm) {
  ManifoldDescriptor d;
  d.name = std::move(name);
  d.kind = ManifoldKind::Compact;
  d.b0 = b0;
  d.b1 = b1;
  d.bplus_l2 = bp;
  d.bminus_l2 = bm;
  return d;
}

ManifoldDescriptor alf(std::string name, int bp, int bm, bool neck_trivial) {
  ManifoldDescriptor d;
  d.name = std::move(name);
  d.kind = ManifoldKind::Alf;
  d.b0 = 0;
  d.b1 = 0;
  d.bplus_l2 = bp;
  d.bminus_l2 = bm;
  d.h1_neck_trivial = neck_trivial;
  return d;
}

void bind(ManifoldDescriptor& d, GeometryBackend backend) {
  d.geometry = std::string(geometry::to_string(backend.kind()));
  d.backend = std::move(backend);
}

}  // namespace

bool CatalogManifest::contains(std::string_view name) const {
  return std::any_of(entries.begin(), entries.end(), [&](const auto& e) { return e.name == name; });
}

const ManifoldDescriptor& CatalogManifest::find(std::string_view name) const {
  for (const auto& e : entries)
    if (e.name == name) return e;
  fail(ErrorKind::Descriptor, "manifold present in the catalog", "unknown manifold '" + std::string(name) + "'");
}

CatalogManifest builtin_catalog() {
  CatalogManifest m;

  auto torus = compact("flat-torus", 1, 4, 3, 3);
  bind(torus, GeometryBackend::flat_torus());
  m.entries.push_back(torus);

  auto sphere = compact("round-s4", 1, 0, 0, 0);
  bind(sphere, GeometryBackend::round_s4(1.0));
  m.entries.push_back(sphere);

  // Ricci-flat with int |R|^2_endo = 8 pi^2 chi, chi = 24, sigma = -16
  auto k3 = compact("k3-analytic", 1, 0, 3, 19);
  CurvatureIntegrals c;
  c.I_R_full = 768.0 * kPi * kPi;
  c.I_R_endo = 192.0 * kPi * kPi;
  c.I_gb = 24.0;
  c.I_p = -16.0;
  k3.analytic_integrals = c;
  m.entries.push_back(k3);

  auto tn1 = alf("taub-nut-1", 0, 1, true);
  bind(tn1, GeometryBackend::multi_taub_nut(0.5, {{0.0, 0.0, 0.0}}));
  m.entries.push_back(tn1);

  auto tn2 = alf("taub-nut-2", 0, 2, true);
  bind(tn2, GeometryBackend::multi_taub_nut(0.5, {{0.0, 0.0, 1.0}, {0.0, 0.0, -1.0}}));
  m.entries.push_back(tn2);

  // neck S^2 x S^1 has H^1 = R, so b1_D is supplied rather than derived
  auto sw = alf("schwarzschild", 1, 1, false);
  sw.b0_D = 0;
  sw.b1_D = 0;
  bind(sw, GeometryBackend::schwarzschild(1.0));
  m.entries.push_back(sw);

  for (const auto& e : m.entries) validate(e);
  return m;
}

CatalogManifest parse_manifest_text(std::string_view text, std::string_view source_view) {
  const std::string source(source_view);
  CatalogManifest manifest = builtin_catalog();
  const std::size_t builtin_count = manifest.entries.size();
  std::optional<SectionParser> current;
  bool saw_version = false;

  const auto finish = [&] {
    if (!current) return;
    ManifoldDescriptor d = current->build();
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
      if (manifest.entries[i].name != d.name) continue;
      if (i < builtin_count)
        fail(ErrorKind::Validation, "built-in entries are override-protected",
             source + ":" + std::to_string(current->header_line()) + ": manifold '" + d.name +
                 "' would override a built-in entry");
      fail(ErrorKind::Validation, "unique manifold names",
           source + ":" + std::to_string(current->header_line()) + ": duplicate manifold name '" + d.name + "'");
    }
    validate(d);
    manifest.entries.push_back(std::move(d));
    current.reset();
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto where = source + ":" + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') fail(ErrorKind::Parse, "well-formed manifest", where + "unterminated section header");
      const auto inner = trim(line.substr(1, line.size() - 2));
      if (inner.rfind("manifold", 0) != 0 || inner.size() <= 8 || (inner[8] != ' ' && inner[8] != '\t'))
        fail(ErrorKind::Parse, "well-formed manifest", where + "section header must read [manifold <name>]");
      if (!saw_version)
        fail(ErrorKind::Parse, "version tag present", where + "manifest lacks a 'version = 1' line before its sections");
      finish();
      const auto name = trim(inner.substr(8));
      if (name.empty()) fail(ErrorKind::Parse, "well-formed manifest", where + "section without a manifold name");
      current.emplace(source, std::string(name), line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(ErrorKind::Parse, "well-formed manifest", where + "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) fail(ErrorKind::Parse, "well-formed manifest", where + "empty key");
    if (!current) {
      if (key != "version") fail(ErrorKind::Parse, "well-formed manifest", where + "only 'version' may precede sections");
      if (value != std::to_string(kManifestVersion))
        fail(ErrorKind::Parse, "manifest version " + std::to_string(kManifestVersion),
             where + "unsupported manifest version '" + value + "'");
      saw_version = true;
      continue;
    }
    current->add(key, value, line_no);
  }
  finish();
  return manifest;
}

CatalogManifest parse_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Parse, "manifest file readable", "cannot open manifest '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest_text(buf.str(), path.string());
}

}  // namespace sdlab::catalog
