#include <algorithm>
#include <cmath>
#include <functional>
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

constexpr int kGaussOrder = 8;
constexpr int kMaxResolution1D = 4096;
constexpr int kMaxResolution2D = 256;
constexpr double kEight_pi2 = 8.0 * kPi * kPi;

// Integrated densities: |R|^2_full, |r|^2, s^2, Gauss-Bonnet, Pontryagin.
struct Densities {
  std::array<double, 5> v{};

  Densities& operator+=(const Densities& o) {
    for (int i = 0; i < 5; ++i) v[i] += o.v[i];
    return *this;
  }
  Densities operator+(const Densities& o) const {
    Densities r = *this;
    return r += o;
  }
  Densities operator*(double w) const {
    Densities r = *this;
    for (double& x : r.v) x *= w;
    return r;
  }
};

Densities densities_at(const GeometryBackend& backend, const Vec4& x, long& evaluations) {
  CurvatureOptions opts;
  opts.richardson = false;
  const CurvatureSample s = curvature_at(backend, x, opts);
  ++evaluations;
  return Densities{{s.inv_R_full, s.inv_r, s.inv_s2, s.gb_density, s.pontryagin_density}};
}

using Integrand = std::function<Densities(double)>;

// Composite Gauss-Legendre over consecutive panels, pairwise reduction over nodes.
Densities integrate_panels(const Integrand& f, const std::vector<double>& edges) {
  static const GaussRule rule = gauss_legendre(kGaussOrder);
  PairwiseAccumulator<Densities> acc;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double mid = 0.5 * (edges[p] + edges[p + 1]), half = 0.5 * (edges[p + 1] - edges[p]);
    for (int k = 0; k < kGaussOrder; ++k) acc.add(f(mid + half * rule.nodes[k]) * (half * rule.weights[k]));
  }
  return acc.result();
}

std::vector<double> uniform_edges(double lo, double hi, int n) {
  std::vector<double> e(n + 1);
  for (int k = 0; k <= n; ++k) e[k] = lo + (hi - lo) * k / n;
  return e;
}

// Edges lo + shift * ((hi - lo + shift) / shift)^(k/n) - shift: log-uniform in (t - lo + shift).
std::vector<double> graded_edges(double lo, double hi, double shift, int n) {
  std::vector<double> e(n + 1);
  const double ratio = (hi - lo + shift) / shift;
  for (int k = 0; k <= n; ++k) e[k] = lo + shift * std::pow(ratio, static_cast<double>(k) / n) - shift;
  e.front() = lo;
  e.back() = hi;
  return e;
}

// Edges on [-1, 1] graded geometrically toward both ends.
std::vector<double> two_sided_edges(double shift, int n) {
  const int half = std::max(1, n / 2);
  const std::vector<double> right = graded_edges(0.0, 1.0, shift, half);
  // the fine end of graded_edges sits at 0; map it onto -1 and +1
  std::vector<double> e;
  for (int k = 0; k <= half; ++k) e.push_back(-1.0 + right[k]);
  for (int k = half - 1; k >= 0; --k) e.push_back(1.0 - right[k]);
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

double norm3(const std::array<double, 3>& p) { return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]); }

// Radial problem: I = int_lo^cutoff f(t) dt plus a power-law tail fitted to f(cutoff/2), f(cutoff).
struct RadialProblem {
  Integrand f;
  double lo;
  double shift;
};

struct Assembled {
  Densities value;
  double panel_error = 0.0;
  double tail_error = 0.0;
  double tail_exponent = 0.0;
};

double dimensionless_max(const Densities& d) {
  return std::max({std::abs(d.v[0]) / kEight_pi2, std::abs(d.v[1]) / kEight_pi2, std::abs(d.v[2]) / kEight_pi2,
                   std::abs(d.v[3]), std::abs(d.v[4])});
}

Assembled integrate_radial(const RadialProblem& prob, int resolution, double cutoff, bool with_tail) {
  const Densities fine = integrate_panels(prob.f, graded_edges(prob.lo, cutoff, prob.shift, resolution));
  const Densities coarse =
      integrate_panels(prob.f, graded_edges(prob.lo, cutoff, prob.shift, std::max(1, resolution / 2)));
  Assembled out;
  out.value = fine;
  Densities diff = fine + coarse * -1.0;
  out.panel_error = dimensionless_max(diff);
  if (!with_tail) return out;

  const Densities near = prob.f(0.5 * cutoff), far = prob.f(cutoff);
  Densities tail;
  double worst_tail_error = 0.0;
  for (int i = 0; i < 5; ++i) {
    double p = 4.0;  // curvature decay O(rho^-3) squared against the rho^2 area growth
    bool fitted = false;
    if (near.v[i] != 0.0 && far.v[i] != 0.0 && (near.v[i] > 0) == (far.v[i] > 0)) {
      const double q = std::log(near.v[i] / far.v[i]) / std::log(2.0);
      if (std::isfinite(q) && q > 2.0 && q < 12.0) {
        p = q;
        fitted = true;
      }
    }
    tail.v[i] = far.v[i] * cutoff / (p - 1.0);
    // fitted tails carry half their size as error; unfitted ones (noise-level densities) all of it
    double err = std::abs(tail.v[i]) * (fitted ? 0.5 : 1.0);
    if (i < 3) err /= kEight_pi2;
    worst_tail_error = std::max(worst_tail_error, err);
    if (i == 0) out.tail_exponent = p;
  }
  out.value += tail;
  out.tail_error = worst_tail_error;
  return out;
}

void require_resolution(int resolution, int cap) {
  if (resolution < 1 || resolution > cap)
    fail(ErrorKind::Resource, "1 <= resolution <= " + std::to_string(cap),
         "quadrature resolution outside the supported range", resolution);
}

void require_cutoff(const GeometryBackend& backend, double cutoff) {
  if (!(cutoff >= 10.0 * backend.geometry_scale()) || !std::isfinite(cutoff))
    fail(ErrorKind::Domain, "cutoff >= 10 x geometry scale", "cutoff radius too small for the ALF tail fit", cutoff);
  if (cutoff <= backend.core_radius())
    fail(ErrorKind::Domain, "cutoff beyond the compact core", "cutoff radius inside the core region", cutoff);
}

Assembled integrate_taub_nut(const GeometryBackend& backend, const MultiTaubNut& tn, int resolution,
                             double cutoff, bool add_tail, long& evals) {
  const double m = tn.mass;
  if (tn.nuts.size() == 1) {
    require_resolution(resolution, kMaxResolution1D);
    const auto p = tn.nuts[0];
    const double dir = 1.0 / std::sqrt(3.0);
    RadialProblem prob;
    prob.lo = 0.0;
    prob.shift = m;
    prob.f = [&, p](double r) {
      const Vec4 x{p[0] + r * dir, p[1] + r * dir, p[2] + r * dir, 0.0};
      const double potential = 1.0 + m / r;
      return densities_at(backend, x, evals) * (tn.fiber_period * 4.0 * kPi * r * r * potential);
    };
    // the NUT sits at the origin of the radial chart; cutoff is measured from it
    const double centre = norm3(p);
    return integrate_radial(prob, resolution, cutoff - centre, add_tail);
  }
  if (tn.nuts.size() > 2)
    fail(ErrorKind::Domain, "at most two NUTs for integrate", "symmetry reduction supports one or two NUTs");
  for (const auto& p : tn.nuts)
    if (p[0] != 0.0 || p[1] != 0.0)
      fail(ErrorKind::Domain, "NUTs on the z-axis", "two-NUT reduction needs both NUTs on the z-axis");
  require_resolution(resolution, kMaxResolution2D);

  // prolate spheroidal coordinates about the two NUTs: r1 + r2 = 2 d sigma, r1 - r2 = 2 d eta
  const double zc = 0.5 * (tn.nuts[0][2] + tn.nuts[1][2]);
  const double d = 0.5 * std::abs(tn.nuts[0][2] - tn.nuts[1][2]);
  if (!(d > 0.0)) fail(ErrorKind::Domain, "distinct NUT positions", "coincident NUTs");
  const double azimuth = 0.7;
  const std::vector<double> eta_fine = two_sided_edges(std::min(0.5, m / (4.0 * d)), resolution);
  const std::vector<double> eta_coarse = two_sided_edges(std::min(0.5, m / (4.0 * d)), std::max(2, resolution / 2));

  const auto shell = [&](double sigma, const std::vector<double>& eta_edges) {
    const Integrand inner = [&, sigma](double eta) {
      const double rho_cyl = d * std::sqrt(std::max(0.0, (sigma * sigma - 1.0) * (1.0 - eta * eta)));
      const Vec4 x{rho_cyl * std::cos(azimuth), rho_cyl * std::sin(azimuth), zc + d * sigma * eta, 0.0};
      double potential = 1.0;
      for (const auto& p : tn.nuts) potential += m / norm3({x[0] - p[0], x[1] - p[1], x[2] - p[2]});
      const double measure = tn.fiber_period * 2.0 * kPi * d * d * d * (sigma * sigma - eta * eta) * potential;
      return densities_at(backend, x, evals) * measure;
    };
    return integrate_panels(inner, eta_edges);
  };

  RadialProblem prob;
  prob.lo = 1.0;
  prob.shift = std::min(1.0, m / (4.0 * d));
  prob.f = [&](double sigma) { return shell(sigma, eta_fine); };
  Assembled out = integrate_radial(prob, resolution, cutoff / d, add_tail);
  // angular refinement error, measured on a coarse radial grid
  RadialProblem coarse_eta = prob;
  coarse_eta.f = [&](double sigma) { return shell(sigma, eta_coarse); };
  const Densities a = integrate_panels(prob.f, graded_edges(1.0, cutoff / d, prob.shift, std::max(1, resolution / 2)));
  const Densities b =
      integrate_panels(coarse_eta.f, graded_edges(1.0, cutoff / d, prob.shift, std::max(1, resolution / 2)));
  out.panel_error = std::max(out.panel_error, dimensionless_max(a + b * -1.0));
  return out;
}

}  // namespace

int default_resolution(const GeometryBackend& backend) {
  return std::visit(Overloaded{
                        [](const FlatTorus&) { return 1; },
                        [](const RoundS4&) { return 16; },
                        [](const MultiTaubNut& tn) { return tn.nuts.size() == 1 ? 48 : 24; },
                        [](const Schwarzschild&) { return 48; },
                    },
                    backend.params());
}

double default_cutoff(const GeometryBackend& backend) {
  if (!backend.is_alf()) return 0.0;
  return std::max(200.0 * backend.geometry_scale(), 20.0 * backend.core_radius());
}

CurvatureIntegrals integrate_invariants(const GeometryBackend& backend, int resolution, double cutoff,
                                        bool add_tail) {
  CurvatureIntegrals out;
  out.resolution = resolution;
  out.cutoff = cutoff;
  long evals = 0;
  if (backend.is_alf()) require_cutoff(backend, cutoff);

  const Assembled result = std::visit(
      Overloaded{
          [&](const FlatTorus& t) {
            require_resolution(resolution, kMaxResolution1D);
            double volume = 1.0;
            for (double r : t.radii) volume *= 2.0 * kPi * r;
            Assembled a;
            a.value = densities_at(backend, {0.1, 0.2, 0.3, 0.4}, evals) * volume;
            return a;
          },
          [&](const RoundS4& s) {
            require_resolution(resolution, kMaxResolution1D);
            const double a4 = std::pow(s.radius, 4);
            const Integrand f = [&](double chi) {
              const double sc = std::sin(chi);
              return densities_at(backend, {chi, 0.5 * kPi, 0.5 * kPi, 0.0}, evals) * (a4 * sc * sc * sc * 2.0 * kPi * kPi);
            };
            Assembled a;
            a.value = integrate_panels(f, uniform_edges(0.0, kPi, resolution));
            const Densities coarse = integrate_panels(f, uniform_edges(0.0, kPi, std::max(1, resolution / 2)));
            a.panel_error = dimensionless_max(a.value + coarse * -1.0);
            return a;
          },
          [&](const MultiTaubNut& tn) { return integrate_taub_nut(backend, tn, resolution, cutoff, add_tail, evals); },
          [&](const Schwarzschild& sw) {
            require_resolution(resolution, kMaxResolution1D);
            const double m = sw.mass;
            RadialProblem prob;
            prob.lo = 2.0 * m;
            prob.shift = m;
            prob.f = [&, m](double r) {
              const double u = std::sqrt(std::max(0.0, 8.0 * m * (r - 2.0 * m)));
              return densities_at(backend, {u, 0.0, 0.5 * kPi, 0.0}, evals) * (8.0 * kPi * m * 4.0 * kPi * r * r);
            };
            return integrate_radial(prob, resolution, cutoff, add_tail);
          },
      },
      backend.params());

  out.I_R_full = result.value.v[0];
  out.I_R_endo = result.value.v[0] / 4.0;
  out.I_r = result.value.v[1];
  out.I_s2 = result.value.v[2];
  out.I_gb = result.value.v[3];
  out.I_p = result.value.v[4];
  out.panel_error = result.panel_error;
  out.tail_error = result.tail_error;
  out.tail_exponent = result.tail_exponent;
  out.error_estimate = result.panel_error + result.tail_error;
  out.evaluations = evals;
  if (!std::isfinite(out.I_gb) || !std::isfinite(out.I_R_full))
    fail(ErrorKind::Resource, "finite quadrature result", "curvature quadrature produced non-finite values");
  return out;
}

}  // namespace sdlab::geometry
