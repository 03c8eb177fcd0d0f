#include <cmath>
#include <cstdio>
#include <string>

#include "sdlab/errors.hpp"
#include "sdlab/geometry.hpp"

namespace sdlab::geometry {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Mat4 torus_metric() { return Mat4::Identity(); }

Mat4 sphere_metric(const RoundS4& s, const Vec4& x) {
  const double a2 = s.radius * s.radius;
  const double s1 = std::sin(x[0]), s2 = std::sin(x[1]), s3 = std::sin(x[2]);
  Mat4 g = Mat4::Zero();
  g(0, 0) = a2;
  g(1, 1) = a2 * s1 * s1;
  g(2, 2) = g(1, 1) * s2 * s2;
  g(3, 3) = g(2, 2) * s3 * s3;
  return g;
}

// omega = sum_a m (cos theta_a + s_a) dphi_a, with s_a = -1 when the anchor lies above NUT a
// (regular on its upper half-axis) and +1 otherwise.
Mat4 gibbons_hawking_metric(const MultiTaubNut& tn, const Vec4& x, const Vec4& anchor) {
  double potential = 1.0, wx = 0.0, wy = 0.0;
  for (const auto& p : tn.nuts) {
    const double dx = x[0] - p[0], dy = x[1] - p[1], dz = x[2] - p[2];
    const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
    potential += tn.mass / r;
    const bool above = anchor[2] - p[2] >= 0.0;
    // (cos theta + s) / rho^2 in cancellation-free form
    const double c = above ? -1.0 / (r * (r + dz)) : 1.0 / (r * (r - dz));
    wx += -tn.mass * c * dy;
    wy += tn.mass * c * dx;
  }
  const double inv_v = 1.0 / potential;
  const std::array<double, 3> w{wx, wy, 0.0};
  Mat4 g;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) g(i, j) = (i == j ? potential : 0.0) + w[i] * w[j] * inv_v;
    g(i, 3) = g(3, i) = w[i] * inv_v;
  }
  g(3, 3) = inv_v;
  return g;
}

Mat4 schwarzschild_metric(const Schwarzschild& s, const Vec4& x) {
  const double m = s.mass;
  const double u2 = x[0] * x[0] + x[1] * x[1];
  const double r = 2.0 * m + u2 / (8.0 * m);
  const double b = 2.0 * m / r;
  const double c = (r + 2.0 * m) / (16.0 * m * m * r);
  const double sin_theta = std::sin(x[2]);
  Mat4 g = Mat4::Zero();
  g(0, 0) = b + c * x[0] * x[0];
  g(1, 1) = b + c * x[1] * x[1];
  g(0, 1) = g(1, 0) = c * x[0] * x[1];
  g(2, 2) = r * r;
  g(3, 3) = r * r * sin_theta * sin_theta;
  return g;
}

double angle_scale(double angle) { return std::min({1.0, angle, kPi - angle}); }

}  // namespace

std::string_view to_string(BackendKind kind) noexcept {
  switch (kind) {
    case BackendKind::FlatTorus: return "flat-torus";
    case BackendKind::RoundS4: return "round-s4";
    case BackendKind::MultiTaubNut: return "multi-taub-nut";
    case BackendKind::Schwarzschild: return "schwarzschild";
  }
  return "unknown";
}

BackendKind backend_kind_from_string(std::string_view id) {
  if (id == "flat-torus") return BackendKind::FlatTorus;
  if (id == "round-s4") return BackendKind::RoundS4;
  if (id == "multi-taub-nut") return BackendKind::MultiTaubNut;
  if (id == "schwarzschild") return BackendKind::Schwarzschild;
  fail(ErrorKind::Domain, "known geometry backend", "unknown geometry backend '" + std::string(id) + "'");
}

GeometryBackend::GeometryBackend(Params params) : params_(std::move(params)) {
  std::visit(Overloaded{
                 [](const FlatTorus& t) {
                   for (double r : t.radii)
                     if (!(r > 0.0)) fail(ErrorKind::Domain, "torus radii > 0", "torus radii must be positive");
                 },
                 [](const RoundS4& s) {
                   if (!(s.radius > 0.0)) fail(ErrorKind::Domain, "sphere radius > 0", "sphere radius must be positive");
                 },
                 [](const MultiTaubNut& tn) {
                   if (!(tn.mass > 0.0)) fail(ErrorKind::Domain, "NUT mass > 0", "NUT mass must be positive");
                   if (tn.nuts.empty()) fail(ErrorKind::Domain, "at least one NUT", "multi-Taub-NUT needs a NUT");
                   if (!(tn.fiber_period > 0.0)) fail(ErrorKind::Domain, "fiber period > 0", "fiber period must be positive");
                 },
                 [](const Schwarzschild& s) {
                   if (!(s.mass > 0.0)) fail(ErrorKind::Domain, "Schwarzschild mass > 0", "mass must be positive");
                 },
             },
             params_);
}

GeometryBackend GeometryBackend::flat_torus(std::array<double, 4> radii) { return GeometryBackend(FlatTorus{radii}); }
GeometryBackend GeometryBackend::round_s4(double radius) { return GeometryBackend(RoundS4{radius}); }
GeometryBackend GeometryBackend::multi_taub_nut(double mass, std::vector<std::array<double, 3>> nuts,
                                                double fiber_period) {
  if (fiber_period <= 0.0) fiber_period = 4.0 * kPi * mass;
  return GeometryBackend(MultiTaubNut{mass, std::move(nuts), fiber_period});
}
GeometryBackend GeometryBackend::schwarzschild(double mass) { return GeometryBackend(Schwarzschild{mass}); }

GeometryBackend GeometryBackend::from_id(std::string_view id) {
  switch (backend_kind_from_string(id)) {
    case BackendKind::FlatTorus: return flat_torus();
    case BackendKind::RoundS4: return round_s4();
    case BackendKind::MultiTaubNut: return multi_taub_nut(0.5, {{0.0, 0.0, 0.0}});
    case BackendKind::Schwarzschild: return schwarzschild();
  }
  return flat_torus();
}

BackendKind GeometryBackend::kind() const noexcept {
  return static_cast<BackendKind>(params_.index());
}

bool GeometryBackend::is_alf() const noexcept {
  return kind() == BackendKind::MultiTaubNut || kind() == BackendKind::Schwarzschild;
}

double GeometryBackend::geometry_scale() const noexcept {
  return std::visit(Overloaded{
                        [](const FlatTorus& t) { return *std::min_element(t.radii.begin(), t.radii.end()); },
                        [](const RoundS4& s) { return s.radius; },
                        [](const MultiTaubNut& tn) { return tn.mass; },
                        [](const Schwarzschild& s) { return s.mass; },
                    },
                    params_);
}

double GeometryBackend::core_radius() const {
  return std::visit(Overloaded{
                        [](const MultiTaubNut& tn) {
                          double extent = 0.0;
                          for (const auto& p : tn.nuts)
                            extent = std::max(extent, std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
                          return extent + 4.0 * tn.mass;
                        },
                        [](const Schwarzschild& s) { return 4.0 * s.mass; },
                        [](const auto&) -> double {
                          fail(ErrorKind::Domain, "ALF backend", "compact backends have no truncation boundary");
                        },
                    },
                    params_);
}

std::string GeometryBackend::cache_key() const {
  std::string key(to_string(kind()));
  std::visit(Overloaded{
                 [&](const FlatTorus& t) {
                   for (double r : t.radii) key += ";r=" + fmt17(r);
                 },
                 [&](const RoundS4& s) { key += ";a=" + fmt17(s.radius); },
                 [&](const MultiTaubNut& tn) {
                   key += ";m=" + fmt17(tn.mass) + ";fiber=" + fmt17(tn.fiber_period);
                   for (const auto& p : tn.nuts) key += ";p=" + fmt17(p[0]) + "," + fmt17(p[1]) + "," + fmt17(p[2]);
                 },
                 [&](const Schwarzschild& s) { key += ";m=" + fmt17(s.mass); },
             },
             params_);
  return key;
}

void GeometryBackend::check_chart(const Vec4& x) const {
  for (double c : x)
    if (!std::isfinite(c)) fail(ErrorKind::Chart, "finite coordinates", "chart point is not finite");
  std::visit(Overloaded{
                 [](const FlatTorus&) {},
                 [&](const RoundS4&) {
                   for (int i = 0; i < 3; ++i)
                     if (!(x[i] > 0.0 && x[i] < kPi) || std::abs(std::sin(x[i])) < 1e-12)
                       fail(ErrorKind::Chart, "0 < chi_i < pi", "point lies on a coordinate pole of the S4 chart");
                 },
                 [&](const MultiTaubNut& tn) {
                   for (const auto& p : tn.nuts) {
                     const double dx = x[0] - p[0], dy = x[1] - p[1], dz = x[2] - p[2];
                     const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
                     if (r < 1e-12 * tn.mass) fail(ErrorKind::Chart, "x off the NUT points", "point coincides with a NUT");
                     if (std::sqrt(dx * dx + dy * dy) < 1e-12 * r)
                       fail(ErrorKind::Chart, "x off the Dirac-string axis",
                            "azimuthal angle undefined on the axis through a NUT");
                   }
                 },
                 [&](const Schwarzschild&) {
                   if (!(x[2] > 0.0 && x[2] < kPi) || std::abs(std::sin(x[2])) < 1e-12)
                     fail(ErrorKind::Chart, "0 < theta < pi", "point lies on the polar axis of the S2 factor");
                 },
             },
             params_);
}

Mat4 GeometryBackend::metric(const Vec4& x, const Vec4& anchor) const {
  return std::visit(Overloaded{
                        [](const FlatTorus&) { return torus_metric(); },
                        [&](const RoundS4& s) { return sphere_metric(s, x); },
                        [&](const MultiTaubNut& tn) { return gibbons_hawking_metric(tn, x, anchor); },
                        [&](const Schwarzschild& s) { return schwarzschild_metric(s, x); },
                    },
                    params_);
}

Vec4 GeometryBackend::step_scales(const Vec4& x) const {
  return std::visit(Overloaded{
                        [](const FlatTorus&) { return Vec4{1.0, 1.0, 1.0, 1.0}; },
                        [&](const RoundS4&) {
                          return Vec4{angle_scale(x[0]), angle_scale(x[1]), angle_scale(x[2]), 1.0};
                        },
                        [&](const MultiTaubNut& tn) {
                          double nearest = INFINITY;
                          for (const auto& p : tn.nuts) {
                            const double dx = x[0] - p[0], dy = x[1] - p[1], dz = x[2] - p[2];
                            nearest = std::min(nearest, std::sqrt(dx * dx + dy * dy + dz * dz));
                          }
                          return Vec4{nearest, nearest, nearest, 1.0};
                        },
                        [&](const Schwarzschild& s) {
                          const double u = std::hypot(x[0], x[1]);
                          const double planar = std::max(s.mass, u);
                          return Vec4{planar, planar, angle_scale(x[2]), 1.0};
                        },
                    },
                    params_);
}

Mat4 metric_at(const GeometryBackend& backend, const Vec4& x) {
  backend.check_chart(x);
  return backend.metric(x, x);
}

}  // namespace sdlab::geometry
