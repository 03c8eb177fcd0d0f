#include <algorithm>
#include <cmath>
#include <functional>

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

using Mat3 = Eigen::Matrix3d;
using Mat43 = Eigen::Matrix<double, 4, 3>;

// The truncation hypersurface {f = rho} is parametrized by a polar angle theta and two
// isometry directions, so every integrand depends on theta alone.
struct SurfacePoint {
  Vec4 x{};
  Mat43 jacobian;   // columns: d/dtheta, then the two symmetric directions
  Eigen::Vector4d df;
  Mat4 ddf;         // coordinate second derivatives of f
};

struct Surface {
  std::function<SurfacePoint(double)> at;
  double symmetric_measure = 0.0;  // product of the ranges of the two isometry directions
  double normal_scale = 0.0;       // length scale for normal derivatives
};

Surface gibbons_hawking_surface(const MultiTaubNut& tn, double rho) {
  constexpr double phi = 0.7;
  Surface s;
  s.symmetric_measure = 2.0 * kPi * tn.fiber_period;
  s.normal_scale = rho;
  s.at = [rho](double theta) {
    SurfacePoint p;
    const double st = std::sin(theta), ct = std::cos(theta), sp = std::sin(phi), cp = std::cos(phi);
    p.x = {rho * st * cp, rho * st * sp, rho * ct, 0.0};
    p.jacobian.setZero();
    p.jacobian.col(0) << rho * ct * cp, rho * ct * sp, -rho * st, 0.0;
    p.jacobian.col(1) << -rho * st * sp, rho * st * cp, 0.0, 0.0;
    p.jacobian(3, 2) = 1.0;
    const Eigen::Vector3d unit(st * cp, st * sp, ct);
    p.df << unit, 0.0;
    p.ddf.setZero();
    p.ddf.topLeftCorner<3, 3>() = (Mat3::Identity() - unit * unit.transpose()) / rho;
    return p;
  };
  return s;
}

Surface schwarzschild_surface(const Schwarzschild& sw, double rho) {
  constexpr double alpha = 0.7, phi = 0.3;
  const double m = sw.mass;
  const double u = std::sqrt(8.0 * m * (rho - 2.0 * m));
  Surface s;
  s.symmetric_measure = 4.0 * kPi * kPi;
  s.normal_scale = rho;
  s.at = [m, u](double theta) {
    SurfacePoint p;
    const double X = u * std::cos(alpha), Y = u * std::sin(alpha);
    p.x = {X, Y, theta, phi};
    p.jacobian.setZero();
    p.jacobian(2, 0) = 1.0;
    p.jacobian(0, 1) = -Y;
    p.jacobian(1, 1) = X;
    p.jacobian(3, 2) = 1.0;
    p.df << X / (4.0 * m), Y / (4.0 * m), 0.0, 0.0;
    p.ddf.setZero();
    p.ddf(0, 0) = p.ddf(1, 1) = 1.0 / (4.0 * m);
    return p;
  };
  return s;
}

Vec4 fd_steps(const GeometryBackend& backend, const Vec4& x) {
  const Vec4 scales = backend.step_scales(x);
  Vec4 steps;
  for (int i = 0; i < 4; ++i) steps[i] = 1e-3 * scales[i];
  return steps;
}

Vec4 to_vec4(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }

struct LocalFrame {
  ChartGeometry cg;
  Mat4 frame;          // columns e1, e2, e3 tangent, e4 inward unit normal
  Mat3 pi;             // second fundamental form in the tangent frame
  double grad_norm = 0.0;
  double sqrt_h = 0.0;      // induced volume density in (theta, sym1, sym2)
  double h_inv_theta = 0.0; // h^{theta theta}
};

LocalFrame local_frame(const GeometryBackend& backend, const SurfacePoint& p, bool with_riemann) {
  LocalFrame lf;
  lf.cg = chart_geometry(backend, p.x, fd_steps(backend, p.x), p.x, with_riemann);
  const Mat4& g = lf.cg.g;
  const Eigen::Vector4d grad = lf.cg.g_inv * p.df;
  lf.grad_norm = std::sqrt(p.df.dot(grad));
  const Eigen::Vector4d e4 = -grad / lf.grad_norm;

  // Gram-Schmidt of the parametrization vectors, starting from the normal
  std::array<Eigen::Vector4d, 4> e;
  e[3] = e4;
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector4d v = p.jacobian.col(i);
    v -= v.dot(g * e4) * e4;
    for (int j = 0; j < i; ++j) v -= v.dot(g * e[j]) * e[j];
    e[i] = v / std::sqrt(v.dot(g * v));
  }
  for (int i = 0; i < 4; ++i) lf.frame.col(i) = e[i];

  Mat4 hess = p.ddf;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) hess(a, b) -= lf.cg.gamma[c][a][b] * p.df[c];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) lf.pi(i, j) = e[i].dot(hess * e[j]) / lf.grad_norm;

  const Mat3 h = p.jacobian.transpose() * g * p.jacobian;
  lf.sqrt_h = std::sqrt(h.determinant());
  lf.h_inv_theta = h.inverse()(0, 0);
  return lf;
}

double mean_curvature(const GeometryBackend& backend, const Surface& surf, double theta) {
  const LocalFrame lf = local_frame(backend, surf.at(theta), false);
  return lf.pi.trace();
}

double scalar_curvature(const GeometryBackend& backend, const Vec4& x) {
  const ChartGeometry cg = chart_geometry(backend, x, fd_steps(backend, x), x, true);
  double s = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
          s += cg.g_inv(a, c) * cg.g_inv(b, d) * cg.riemann[((a * 4 + b) * 4 + c) * 4 + d];
  return s;
}

// Laplacian of H on the boundary: (1/sqrt h) d_theta(sqrt h h^{theta theta} d_theta H),
// valid because H and the induced metric depend on theta only.
double tangential_laplacian_h(const GeometryBackend& backend, const Surface& surf, double theta, double sqrt_h) {
  const double delta = std::min({1e-3, theta / 8.0, (kPi - theta) / 8.0});
  std::array<double, 9> H;
  for (int k = -4; k <= 4; ++k) H[k + 4] = mean_curvature(backend, surf, theta + k * delta);
  const auto dH = [&](int centre) {
    return (-H[centre + 2 + 4] + 8.0 * H[centre + 1 + 4] - 8.0 * H[centre - 1 + 4] + H[centre - 2 + 4]) /
           (12.0 * delta);
  };
  const auto flux = [&](int centre) {
    const LocalFrame lf = local_frame(backend, surf.at(theta + centre * delta), false);
    return lf.sqrt_h * lf.h_inv_theta * dH(centre);
  };
  const double derivative = (-flux(2) + 8.0 * flux(1) - 8.0 * flux(-1) + flux(-2)) / (12.0 * delta);
  return derivative / sqrt_h;
}

struct NodeValues {
  double area = 0.0, v40 = 0.0, v41 = 0.0, flux = 0.0, mean = 0.0, pi_norm = 0.0;
};

NodeValues node_values(const GeometryBackend& backend, const Surface& surf, double theta) {
  const SurfacePoint p = surf.at(theta);
  const LocalFrame lf = local_frame(backend, p, true);
  const std::array<double, 256> R = project_riemann(lf.cg.riemann, lf.frame);
  // boundary formulas use the opposite sign convention, R^G_ijji = +s
  const auto RG = [&](int a, int b, int c, int d) { return -R[((a * 4 + b) * 4 + c) * 4 + d]; };

  double scalar = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) scalar += R[((a * 4 + b) * 4 + a) * 4 + b];

  const Mat3& pi = lf.pi;
  const double H = pi.trace();
  const double pi2 = (pi * pi).trace();
  const double pi3 = (pi * pi * pi).trace();
  double r_n_n = 0.0, r_n_pi = 0.0, r_t_pi = 0.0;
  for (int i = 0; i < 3; ++i) {
    r_n_n += RG(i, 3, i, 3);
    for (int j = 0; j < 3; ++j) {
      r_n_pi += RG(i, 3, j, 3) * pi(i, j);
      for (int k = 0; k < 3; ++k) r_t_pi += RG(i, j, k, j) * pi(i, k);
    }
  }

  // normal derivative of s along the inward normal
  const Eigen::Vector4d e4 = lf.frame.col(3);
  const double h = 1e-2 * surf.normal_scale;
  const auto s_at = [&](double t) { return scalar_curvature(backend, to_vec4(Eigen::Map<const Eigen::Vector4d>(p.x.data()) + t * e4)); };
  const double ds_dn = (-s_at(2 * h) + 8.0 * s_at(h) - 8.0 * s_at(-h) + s_at(-2 * h)) / (12.0 * h);

  const double lap_h = tangential_laplacian_h(backend, surf, theta, lf.sqrt_h);

  NodeValues v;
  v.area = lf.sqrt_h;
  v.v40 = (-138.0 * ds_dn + 140.0 * scalar * H + 4.0 * r_n_n * H - 12.0 * r_n_pi + 4.0 * r_t_pi + 24.0 * lap_h +
           (40.0 / 21.0) * H * H * H - (88.0 / 7.0) * pi2 * H + (320.0 / 21.0) * pi3) /
          360.0;
  v.v41 = (-192.0 * ds_dn + 200.0 * scalar * H + 16.0 * r_n_n * H - 48.0 * r_n_pi + 16.0 * r_t_pi + 96.0 * lap_h +
           (160.0 / 21.0) * H * H * H - (352.0 / 7.0) * pi2 * H + (1280.0 / 21.0) * pi3) /
          360.0;
  v.flux = -ds_dn;  // outward normal derivative
  v.mean = H;
  v.pi_norm = Eigen::SelfAdjointEigenSolver<Mat3>(pi).eigenvalues().cwiseAbs().maxCoeff();
  return v;
}

}  // namespace

int default_boundary_resolution(const GeometryBackend&) { return 8; }

TruncationReport boundary_report(const GeometryBackend& backend, double rho, int resolution) {
  if (!backend.is_alf())
    fail(ErrorKind::Domain, "ALF backend", "truncation boundaries are defined for ALF backends only");
  if (resolution < 1 || resolution > 1024)
    fail(ErrorKind::Resource, "1 <= resolution <= 1024", "boundary resolution outside the supported range", resolution);
  if (!(rho > backend.core_radius()) || !std::isfinite(rho))
    fail(ErrorKind::Domain, "rho beyond the compact core", "truncation radius lies inside the core region", rho);

  const Surface surf = std::visit(
      Overloaded{
          [&](const MultiTaubNut& tn) {
            for (const auto& p : tn.nuts)
              if (p[0] != 0.0 || p[1] != 0.0)
                fail(ErrorKind::Domain, "NUTs on the z-axis", "boundary reduction needs the NUTs on the z-axis");
            return gibbons_hawking_surface(tn, rho);
          },
          [&](const Schwarzschild& sw) { return schwarzschild_surface(sw, rho); },
          [](const auto&) -> Surface { fail(ErrorKind::Domain, "ALF backend", "unreachable"); },
      },
      backend.params());

  static const GaussRule rule = gauss_legendre(8);
  PairwiseAccumulator<double> area, v40, v41, flux, mean;
  TruncationReport report;
  report.rho = rho;
  for (int panel = 0; panel < resolution; ++panel) {
    const double lo = kPi * panel / resolution, hi = kPi * (panel + 1) / resolution;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int k = 0; k < 8; ++k) {
      const double theta = mid + half * rule.nodes[k];
      const NodeValues v = node_values(backend, surf, theta);
      const double w = half * rule.weights[k] * surf.symmetric_measure * v.area;
      area.add(w);
      v40.add(w * v.v40);
      v41.add(w * v.v41);
      flux.add(w * v.flux);
      mean.add(w * v.mean);
      report.pi_sup = std::max(report.pi_sup, v.pi_norm);
      ++report.nodes;
    }
  }
  report.boundary_area = area.result();
  report.v40_integral = v40.result();
  report.v41_integral = v41.result();
  report.scalar_flux = flux.result();
  report.mean_curvature = mean.result() / report.boundary_area;
  return report;
}

}  // namespace sdlab::geometry
