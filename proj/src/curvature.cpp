#include <algorithm>
#include <cmath>

#include "sdlab/errors.hpp"
#include "sdlab/geometry.hpp"

namespace sdlab::geometry {

namespace {

using Gamma = std::array<std::array<std::array<double, 4>, 4>, 4>;

inline int idx(int a, int b, int c, int d) { return ((a * 4 + b) * 4 + c) * 4 + d; }

Vec4 offset(const Vec4& x, int dir, double t) {
  Vec4 y = x;
  y[dir] += t;
  return y;
}

// f'(x) ~ (-f(x+2h) + 8 f(x+h) - 8 f(x-h) + f(x-2h)) / 12h
template <class F>
auto five_point(F&& f, const Vec4& x, int dir, double h) {
  return (-f(offset(x, dir, 2 * h)) + 8.0 * f(offset(x, dir, h)) - 8.0 * f(offset(x, dir, -h)) +
          f(offset(x, dir, -2 * h))) /
         (12.0 * h);
}

Gamma christoffel_at(const GeometryBackend& backend, const Vec4& y, const Vec4& steps, const Vec4& anchor,
                     Mat4* g_out = nullptr, Mat4* ginv_out = nullptr) {
  const auto metric = [&](const Vec4& z) -> Mat4 { return backend.metric(z, anchor); };
  const Mat4 g = metric(y);
  const Mat4 ginv = g.inverse();
  std::array<Mat4, 4> dg;
  for (int c = 0; c < 4; ++c) dg[c] = five_point(metric, y, c, steps[c]);

  Gamma gamma{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = b; c < 4; ++c) {
        double sum = 0.0;
        for (int d = 0; d < 4; ++d) sum += ginv(a, d) * (dg[b](d, c) + dg[c](d, b) - dg[d](b, c));
        gamma[a][b][c] = gamma[a][c][b] = 0.5 * sum;
      }
  if (g_out) *g_out = g;
  if (ginv_out) *ginv_out = ginv;
  return gamma;
}

Gamma gamma_combination(const std::array<Gamma, 4>& terms) {
  // (-G(+2h) + 8 G(+h) - 8 G(-h) + G(-2h)), terms ordered +2h, +h, -h, -2h
  Gamma out{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        out[a][b][c] = -terms[0][a][b][c] + 8.0 * terms[1][a][b][c] - 8.0 * terms[2][a][b][c] + terms[3][a][b][c];
  return out;
}

int permutation_sign(int a, int b, int c, int d) {
  const std::array<int, 4> p{a, b, c, d};
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (p[i] == p[j]) return 0;
      if (p[i] > p[j]) sign = -sign;
    }
  return sign;
}

}  // namespace

// R_ijkl E^i_a E^j_b E^k_c E^l_d, one index at a time
std::array<double, 256> project_riemann(const std::array<double, 256>& coord, const Mat4& frame) {
  std::array<double, 256> in = coord, out{};
  for (int slot = 0; slot < 4; ++slot) {
    out.fill(0.0);
    for (int i = 0; i < 256; ++i) {
      if (in[i] == 0.0) continue;
      std::array<int, 4> id{i >> 6, (i >> 4) & 3, (i >> 2) & 3, i & 3};
      const int from = id[slot];
      for (int a = 0; a < 4; ++a) {
        id[slot] = a;
        out[idx(id[0], id[1], id[2], id[3])] += in[i] * frame(from, a);
      }
    }
    in = out;
  }
  return in;
}

namespace {

void fill_invariants(CurvatureSample& s) {
  double full = 0.0, ric2 = 0.0, rstar = 0.0, scalar = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double ric = 0.0;
      for (int c = 0; c < 4; ++c) ric += s.R(c, a, c, b);
      s.ricci[a * 4 + b] = ric;
    }
  for (int a = 0; a < 4; ++a) scalar += s.ricci[a * 4 + a];
  for (double r : s.ricci) ric2 += r * r;
  for (int i = 0; i < 256; ++i) full += s.riemann[i] * s.riemann[i];
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          if (c == d) continue;
          double dual = 0.0;
          for (int e = 0; e < 4; ++e)
            for (int f = 0; f < 4; ++f) {
              const int sign = permutation_sign(c, d, e, f);
              if (sign != 0) dual += sign * s.R(a, b, e, f);
            }
          rstar += s.R(a, b, c, d) * 0.5 * dual;
        }

  s.scalar = scalar;
  s.inv_R_full = full;
  s.inv_R_endo = full / 4.0;
  s.inv_r = ric2;
  s.inv_s2 = scalar * scalar;
  s.r_dot_star_r = rstar;
  s.gb_density = (s.inv_R_endo - ric2 + scalar * scalar / 4.0) / (8.0 * kPi * kPi);
  s.pontryagin_density = rstar / (48.0 * kPi * kPi);

  double residual = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          const double v = s.R(a, b, c, d);
          residual = std::max({residual, std::abs(v + s.R(a, c, d, b) + s.R(a, d, b, c)),
                               std::abs(v - s.R(c, d, a, b)), std::abs(v + s.R(b, a, c, d))});
        }
  s.bianchi_residual = residual;
}

CurvatureSample sample_with_step(const GeometryBackend& backend, const Vec4& x, double step) {
  const Vec4 scales = backend.step_scales(x);
  Vec4 steps;
  for (int i = 0; i < 4; ++i) steps[i] = step * scales[i];
  const ChartGeometry cg = chart_geometry(backend, x, steps, x, true);

  const Eigen::LLT<Mat4> llt(cg.g);
  if (llt.info() != Eigen::Success)
    fail(ErrorKind::Chart, "positive-definite metric", "metric is not positive definite at the sample point");
  const Mat4 lower = llt.matrixL();
  const Mat4 frame = lower.transpose().inverse();  // columns are an oriented orthonormal frame

  CurvatureSample s;
  s.point = x;
  s.step = step;
  s.riemann = project_riemann(cg.riemann, frame);
  fill_invariants(s);
  return s;
}

}  // namespace

ChartGeometry chart_geometry(const GeometryBackend& backend, const Vec4& x, const Vec4& steps,
                             const Vec4& anchor, bool with_riemann) {
  ChartGeometry out;
  const Gamma gamma = christoffel_at(backend, x, steps, anchor, &out.g, &out.g_inv);
  out.gamma = gamma;
  if (!with_riemann) return out;

  // dgamma[c][a][b][d] = d_c Gamma^a_bd
  std::array<Gamma, 4> dgamma;
  for (int c = 0; c < 4; ++c) {
    const double h = steps[c];
    const std::array<Gamma, 4> shifted{
        christoffel_at(backend, offset(x, c, 2 * h), steps, anchor),
        christoffel_at(backend, offset(x, c, h), steps, anchor),
        christoffel_at(backend, offset(x, c, -h), steps, anchor),
        christoffel_at(backend, offset(x, c, -2 * h), steps, anchor),
    };
    dgamma[c] = gamma_combination(shifted);
    for (auto& plane : dgamma[c])
      for (auto& row : plane)
        for (double& v : row) v /= 12.0 * h;
  }

  // R^a_bcd = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb
  std::array<double, 256> upper{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double v = dgamma[c][a][d][b] - dgamma[d][a][c][b];
          for (int e = 0; e < 4; ++e) v += gamma[a][c][e] * gamma[e][d][b] - gamma[a][d][e] * gamma[e][c][b];
          upper[idx(a, b, c, d)] = v;
        }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double v = 0.0;
          for (int e = 0; e < 4; ++e) v += out.g(a, e) * upper[idx(e, b, c, d)];
          out.riemann[idx(a, b, c, d)] = v;
        }
  return out;
}

CurvatureSample curvature_at(const GeometryBackend& backend, const Vec4& x, const CurvatureOptions& options) {
  if (!(options.step > 0.0) || options.step > 0.25)
    fail(ErrorKind::Domain, "0 < h <= 1/4", "finite-difference step must be a small positive fraction");
  backend.check_chart(x);

  CurvatureSample s = sample_with_step(backend, x, options.step);
  if (!options.richardson) return s;

  const CurvatureSample coarse = sample_with_step(backend, x, 2.0 * options.step);
  double diff = 0.0, magnitude = 0.0;
  for (int i = 0; i < 256; ++i) {
    diff = std::max(diff, std::abs(s.riemann[i] - coarse.riemann[i]));
    magnitude = std::max(magnitude, std::abs(s.riemann[i]));
  }
  s.richardson_estimate = diff / 15.0;
  if (options.tolerance > 0.0) {
    // curvature far below the inverse square of the local length scale is judged absolutely
    const Vec4 scales = backend.step_scales(x);
    const double length = *std::min_element(scales.begin(), scales.end());
    const double floor = 1e-6 / (length * length);
    if (s.richardson_estimate > options.tolerance * std::max(magnitude, floor))
      fail(ErrorKind::Accuracy, "Richardson estimate <= tol * |R|",
           "finite-difference step too large for the requested tolerance", s.richardson_estimate);
  }
  return s;
}

}  // namespace sdlab::geometry
