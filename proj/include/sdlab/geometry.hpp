#pragma once

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "sdlab/numerics.hpp"

namespace sdlab::geometry {

using Vec4 = std::array<double, 4>;
using Mat4 = Eigen::Matrix4d;

enum class BackendKind { FlatTorus, RoundS4, MultiTaubNut, Schwarzschild };

std::string_view to_string(BackendKind kind) noexcept;
BackendKind backend_kind_from_string(std::string_view id);

/// R^4 / (2 pi r_i Z) with the Euclidean metric; coordinates are arc lengths.
struct FlatTorus {
  std::array<double, 4> radii{1.0, 1.0, 1.0, 1.0};
};

/// Round sphere of radius a in hyperspherical coordinates (chi1, chi2, chi3, phi).
struct RoundS4 {
  double radius = 1.0;
};

/// Gibbons-Hawking metric V dx.dx + V^{-1} (dpsi + omega)^2 with V = 1 + sum m/|x - p_a|,
/// chart coordinates (x, y, z, psi). The metric is smooth when the fiber period is 4 pi m.
struct MultiTaubNut {
  double mass = 0.5;
  std::vector<std::array<double, 3>> nuts{{0.0, 0.0, 0.0}};
  double fiber_period = 2.0 * kPi;
};

/// Riemannian Schwarzschild metric in the regular disc chart (X, Y, theta, phi):
/// r = 2m + (X^2 + Y^2)/8m, Euclidean time 4m * atan2(Y, X) with period 8 pi m.
struct Schwarzschild {
  double mass = 1.0;
};

class GeometryBackend {
 public:
  using Params = std::variant<FlatTorus, RoundS4, MultiTaubNut, Schwarzschild>;

  explicit GeometryBackend(Params params);

  static GeometryBackend flat_torus(std::array<double, 4> radii = {1.0, 1.0, 1.0, 1.0});
  static GeometryBackend round_s4(double radius = 1.0);
  /// fiber_period <= 0 selects the smooth value 4 pi m.
  static GeometryBackend multi_taub_nut(double mass, std::vector<std::array<double, 3>> nuts,
                                        double fiber_period = 0.0);
  static GeometryBackend schwarzschild(double mass = 1.0);
  /// Default parameters for an id ("flat-torus", "round-s4", "multi-taub-nut", "schwarzschild").
  static GeometryBackend from_id(std::string_view id);

  BackendKind kind() const noexcept;
  const Params& params() const noexcept { return params_; }
  bool is_alf() const noexcept;
  /// Length scale used for step sizes and cutoff checks (m, a, min radius).
  double geometry_scale() const noexcept;
  /// Radius of the compact core K; boundaries must lie outside it.
  double core_radius() const;
  /// Canonical text of the id and all parameters at full precision.
  std::string cache_key() const;

  /// Throws a chart error on NUT points, coordinate axes and other excluded sets.
  void check_chart(const Vec4& x) const;
  /// Metric components with the connection gauge fixed by `anchor`; no chart checks.
  Mat4 metric(const Vec4& x, const Vec4& anchor) const;
  /// Per-coordinate length scales for finite-difference steps.
  Vec4 step_scales(const Vec4& x) const;

 private:
  Params params_;
};

/// Checked metric evaluation in the gauge adapted to x.
Mat4 metric_at(const GeometryBackend& backend, const Vec4& x);

/// Orthonormal-frame curvature at a point.
struct CurvatureSample {
  Vec4 point{};
  std::array<double, 256> riemann{};  // R_abcd at index ((a*4+b)*4+c)*4+d
  std::array<double, 16> ricci{};
  double scalar = 0.0;
  double inv_R_full = 0.0;  // R_abcd R^abcd
  double inv_R_endo = 0.0;  // norm of R as an endomorphism of 2-forms, inv_R_full / 4
  double inv_r = 0.0;       // r_ab r^ab
  double inv_s2 = 0.0;      // s^2
  double gb_density = 0.0;          // (1/8pi^2)(|R|^2_endo - |r - s g/4|^2)
  double pontryagin_density = 0.0;  // -(1/24pi^2) tr(R ^ R) / dV
  double r_dot_star_r = 0.0;        // R_abcd (*R)_abcd, (*R)_abcd = eps_cdef R_abef / 2
  double bianchi_residual = 0.0;    // algebraic-identity violation of the discrete tensor
  double richardson_estimate = 0.0; // |R(h) - R(2h)| / 15, max over components
  double step = 0.0;                // relative finite-difference step used

  double R(int a, int b, int c, int d) const { return riemann[((a * 4 + b) * 4 + c) * 4 + d]; }
};

struct CurvatureOptions {
  /// Step as a fraction of the local coordinate scale.
  double step = 1e-3;
  /// Relative tolerance for the Richardson estimate; <= 0 disables the accuracy check.
  double tolerance = 1e-5;
  bool richardson = true;
};

/// Christoffel symbols from 4th-order central differences of the metric, Riemann from
/// 4th-order differences of the Christoffel symbols, then projected onto an orthonormal frame.
CurvatureSample curvature_at(const GeometryBackend& backend, const Vec4& x,
                             const CurvatureOptions& options = {});

/// Coordinate-frame ingredients shared by the curvature and boundary code.
struct ChartGeometry {
  Mat4 g;
  Mat4 g_inv;
  std::array<std::array<std::array<double, 4>, 4>, 4> gamma{};  // Gamma^a_bc
  std::array<double, 256> riemann{};                            // R_abcd, coordinate frame
};

ChartGeometry chart_geometry(const GeometryBackend& backend, const Vec4& x, const Vec4& steps,
                             const Vec4& anchor, bool with_riemann = true);

/// Components R_abcd in the frame whose vectors are the columns of `frame`.
std::array<double, 256> project_riemann(const std::array<double, 256>& coordinate, const Mat4& frame);

struct CurvatureIntegrals {
  double I_R_full = 0.0;
  double I_R_endo = 0.0;
  double I_r = 0.0;
  double I_s2 = 0.0;
  double I_gb = 0.0;  // Euler characteristic normalization
  double I_p = 0.0;   // signature normalization
  double error_estimate = 0.0;
  double panel_error = 0.0;
  double tail_error = 0.0;
  double tail_exponent = 0.0;  // fitted decay exponent of the radial integrand (ALF only)
  int resolution = 0;
  double cutoff = 0.0;
  long evaluations = 0;
};

int default_resolution(const GeometryBackend& backend);
double default_cutoff(const GeometryBackend& backend);

/// Symmetry-reduced Gauss-Legendre quadrature of the curvature invariants, with a
/// power-law tail beyond the cutoff for ALF backends unless add_tail is false (integrals
/// over the truncated region). cutoff is the chart radius.
CurvatureIntegrals integrate_invariants(const GeometryBackend& backend, int resolution, double cutoff,
                                        bool add_tail = true);

struct TruncationReport {
  double rho = 0.0;
  double pi_sup = 0.0;        // sup over the boundary of the spectral norm of Pi
  double v40_integral = 0.0;  // boundary integral of v^4_0
  double v41_integral = 0.0;  // boundary integral of tr v^4_1
  double boundary_area = 0.0;
  double scalar_flux = 0.0;   // outward flux of grad s through the boundary
  double mean_curvature = 0.0;  // boundary average of Pi_ii
  int nodes = 0;
};

int default_boundary_resolution(const GeometryBackend& backend);

/// Geometry of the truncation boundary {chart radius = rho}, with inward unit normal e4 and
/// Pi_ij = g(nabla_{e_i} e_j, e4).
TruncationReport boundary_report(const GeometryBackend& backend, double rho, int resolution);

}  // namespace sdlab::geometry
