#include "sdlab/spectral_zeta.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "sdlab/errors.hpp"
#include "sdlab/partition.hpp"

namespace sdlab::spectral {

namespace {

using Mat4 = Eigen::Matrix4d;

Mat4 to_matrix(const LatticeGenerators& gens) {
  Mat4 b;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) b(i, j) = gens[i * 4 + j];
  return b;
}

LatticeGenerators from_matrix(const Mat4& b) {
  LatticeGenerators out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i * 4 + j] = b(i, j);
  return out;
}

void check_conditioning(const Mat4& b) {
  for (int i = 0; i < 16; ++i)
    if (!std::isfinite(b.data()[i])) fail(ErrorKind::Numeric, "finite lattice generators", "lattice entry is not finite");
  const Eigen::JacobiSVD<Mat4> svd(b);
  const auto sv = svd.singularValues();
  if (!(sv[3] > 0.0))
    fail(ErrorKind::Numeric, "invertible generator matrix", "lattice generator matrix is singular");
  const double cond = sv[0] / sv[3];
  if (!(cond <= kMaxConditionNumber))
    fail(ErrorKind::Numeric, "condition number <= 1e8", "lattice generator matrix is ill-conditioned", cond);
}

// Gamma(a, t) for any real a and t > 0; recurrence downward from a + 1 when a < 0
double upper_gamma(double a, double t) {
  if (a > 0.0) return boost::math::tgamma(a, t);
  if (a == 0.0) return boost::math::expint(1, t);
  return (upper_gamma(a + 1.0, t) - std::pow(t, a) * std::exp(-t)) / a;
}

// g_a(t) = t^{-a} Gamma(a, t)
double g_kernel(double a, double t) { return std::pow(t, -a) * upper_gamma(a, t); }

double reciprocal_gamma(double s) {
  if (s <= 0.0 && s == std::floor(s)) return 0.0;
  return 1.0 / boost::math::tgamma(s);
}

// Majorant of sum over |v| > R of g_a(pi |v|^2) for a unit-covolume lattice whose
// fundamental cell has half-diameter at most delta.
double shell_tail_bound(double a, double radius, double delta) {
  double bound = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double r = radius + k;
    const double t = kPi * r * r;
    const double c = (a <= 1.0) ? 1.0 : (t >= 2.0 * (a - 1.0) ? 2.0 : INFINITY);
    const double outer = r + 1.0 + delta;
    const double count = 0.5 * kPi * kPi * outer * outer * outer * outer;
    bound += count * c * std::exp(-t) / t;
  }
  return bound;
}

struct LatticeSum {
  double value = 0.0;
  double tail = 0.0;
  long long terms = 0;
};

// sum' over the lattice generated by the rows of `gens` (unit covolume) of g_a(pi |v|^2)
LatticeSum kernel_sum(const Mat4& gens, double a) {
  double delta = 0.0;
  for (int i = 0; i < 4; ++i) delta += 0.5 * gens.row(i).norm();
  double radius = 2.0;
  while (shell_tail_bound(a, radius, delta) > 1e-17) radius += 0.25;

  const Mat4 dual = gens.inverse().transpose();
  std::array<long, 4> box;
  double points = 1.0;
  for (int i = 0; i < 4; ++i) {
    box[i] = static_cast<long>(std::floor(radius * dual.row(i).norm())) + 1;
    points *= 2.0 * box[i] + 1.0;
  }
  if (points > static_cast<double>(kLatticeTermCap))
    fail(ErrorKind::Resource, "lattice enumeration <= term cap",
         "Epstein lattice sum exceeds the term cap of " + std::to_string(kLatticeTermCap), points);

  PairwiseAccumulator<double> acc;
  LatticeSum out;
  const double r2 = radius * radius;
  std::array<long, 4> n{-box[0], -box[1], -box[2], -box[3]};
  while (true) {
    Eigen::RowVector4d v = Eigen::RowVector4d::Zero();
    for (int i = 0; i < 4; ++i) v += static_cast<double>(n[i]) * gens.row(i);
    const double norm2 = v.squaredNorm();
    if (norm2 <= r2 && (n[0] | n[1] | n[2] | n[3]) != 0) {
      acc.add(g_kernel(a, kPi * norm2));
      ++out.terms;
    }
    int k = 3;
    while (k >= 0 && n[k] == box[k]) {
      n[k] = -box[k];
      --k;
    }
    if (k < 0) break;
    ++n[k];
  }
  out.value = acc.result();
  out.tail = shell_tail_bound(a, radius, delta);
  return out;
}

int binomial4(int k) {
  static constexpr int table[5] = {1, 4, 6, 4, 1};
  return table[k];
}

}  // namespace

std::string_view to_string(ZetaMethod method) noexcept {
  return method == ZetaMethod::EpsteinContinuation ? "epstein-continuation" : "heat-kernel-formula";
}

LatticeGenerators dual_lattice(const LatticeGenerators& generators) {
  const Mat4 b = to_matrix(generators);
  check_conditioning(b);
  return from_matrix(b.inverse().transpose());
}

EpsteinValue epstein_zeta(const LatticeGenerators& generators, double s) {
  if (!std::isfinite(s) || s == 2.0) fail(ErrorKind::Domain, "s != 2", "Epstein zeta has its pole at s = d/2 = 2");
  Mat4 b = to_matrix(generators);
  check_conditioning(b);
  const double covolume = std::abs(b.determinant());
  const double scale = std::pow(covolume, 0.25);
  b /= scale;
  const Mat4 dual = b.inverse().transpose();

  const LatticeSum direct = kernel_sum(b, s);
  const LatticeSum reciprocal = kernel_sum(dual, 2.0 - s);
  const double rg = reciprocal_gamma(s);
  const double pis = std::pow(kPi, s);
  const double unit = pis * (rg * (direct.value + reciprocal.value + 1.0 / (s - 2.0)) - 1.0 / boost::math::tgamma(1.0 + s));
  const double rescale = std::pow(covolume, -0.5 * s);

  EpsteinValue out;
  out.value = rescale * unit;
  out.truncation_error = rescale * (pis * std::abs(rg) * (direct.tail + reciprocal.tail) +
                                    4.0 * std::numeric_limits<double>::epsilon() * std::abs(unit));
  out.terms = direct.terms + reciprocal.terms;
  return out;
}

SpectralZetaResult torus_zeta_zero(const LatticeGenerators& generators, int k) {
  if (k < 0 || k > 4) fail(ErrorKind::Domain, "0 <= k <= 4", "form degree must lie in 0..4");
  const EpsteinValue z = epstein_zeta(dual_lattice(generators), 0.0);
  SpectralZetaResult out;
  out.method = ZetaMethod::EpsteinContinuation;
  out.zeta_at_zero = binomial4(k) * z.value;
  out.truncation_error = binomial4(k) * z.truncation_error;
  return out;
}

SpectralZetaResult heat_zeta_zero(const ManifoldDescriptor& desc, const geometry::CurvatureIntegrals& curv, int k,
                                  const std::optional<geometry::TruncationReport>& boundary) {
  if (k != 0 && k != 1) fail(ErrorKind::Domain, "k in {0, 1}", "heat-kernel formula implemented for k = 0, 1");
  constexpr double norm = 1.0 / (16.0 * kPi * kPi);
  // u^4_0 = (2|R|^2 - 2|r|^2 + 5 s^2)/360, tr u^4_1 = (-22|R|^2 + 172|r|^2 - 40 s^2)/360
  const double bulk = k == 0 ? (2.0 * curv.I_R_full - 2.0 * curv.I_r + 5.0 * curv.I_s2) / 360.0
                             : (-22.0 * curv.I_R_full + 172.0 * curv.I_r - 40.0 * curv.I_s2) / 360.0;
  SpectralZetaResult out;
  out.method = ZetaMethod::HeatKernelFormula;
  if (!boundary) {
    const int betti = k == 0 ? desc.b0 : desc.b1;
    out.zeta_at_zero = -betti + norm * bulk;
    out.truncation_error = norm * std::abs(curv.error_estimate) * 8.0 * kPi * kPi;
    return out;
  }
  if (!desc.is_alf())
    fail(ErrorKind::Descriptor, "alf descriptor for a boundary term", "boundary data supplied for a compact manifold");
  const partition::DirichletNumbers dn = partition::dirichlet_numbers(desc);
  const int betti = k == 0 ? dn.b0_D : dn.b1_D;
  // the Laplacian-of-s bulk term is a total divergence: 12/360 for functions, (48 - 60)/360 for 1-forms
  const double divergence = (k == 0 ? 12.0 : -12.0) / 360.0 * boundary->scalar_flux;
  const double edge = k == 0 ? boundary->v40_integral : boundary->v41_integral;
  out.zeta_at_zero = -betti + norm * (bulk + divergence + edge);
  out.truncation_error = norm * std::abs(curv.error_estimate) * 8.0 * kPi * kPi;
  return out;
}

}  // namespace sdlab::spectral
