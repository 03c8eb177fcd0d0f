#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sdlab/catalog.hpp"
#include "sdlab/cli.hpp"
#include "sdlab/errors.hpp"
#include "sdlab/lattice_sum.hpp"
#include "sdlab/partition.hpp"
#include "sdlab/spectral_zeta.hpp"

namespace py = pybind11;
using namespace sdlab;

namespace {

py::dict integrals_dict(const geometry::CurvatureIntegrals& c) {
  py::dict d;
  d["I_R_full"] = c.I_R_full;
  d["I_R_endo"] = c.I_R_endo;
  d["I_r"] = c.I_r;
  d["I_s2"] = c.I_s2;
  d["I_gb"] = c.I_gb;
  d["I_p"] = c.I_p;
  d["error_estimate"] = c.error_estimate;
  d["resolution"] = c.resolution;
  d["cutoff"] = c.cutoff;
  d["evaluations"] = c.evaluations;
  return d;
}

const ManifoldDescriptor& entry(const std::string& name) {
  static const auto cat = catalog::builtin_catalog();
  return cat.find(name);
}

geometry::CurvatureIntegrals integrals_of(const ManifoldDescriptor& d) {
  if (d.analytic_integrals) return *d.analytic_integrals;
  const auto& b = *d.backend;
  return geometry::integrate_invariants(b, geometry::default_resolution(b), geometry::default_cutoff(b));
}

}  // namespace

PYBIND11_MODULE(_sdlab, m) {
  m.doc() = "Numerical checks for Abelian S-duality on curved four-manifolds";

  static py::exception<Error> error(m, "SdlabError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  m.def(
      "theta",
      [](std::complex<double> tau, double tol) {
        const auto t = modular::theta(modular::ComplexCoupling(tau), tol);
        return py::make_tuple(t.value, t.tail_bound, t.terms_used);
      },
      py::arg("tau"), py::arg("tol") = 1e-14, "theta(tau) as (value, tail_bound, terms_used)");

  m.def(
      "lattice_sum",
      [](int bplus, int bminus, int box, std::complex<double> tau) {
        return lattice::brute_force_partition(bplus, bminus, box, modular::ComplexCoupling(tau));
      },
      py::arg("bplus"), py::arg("bminus"), py::arg("box"), py::arg("tau"));

  m.def(
      "theta_product",
      [](int bplus, int bminus, std::complex<double> tau) {
        return lattice::theta_product(bplus, bminus, modular::ComplexCoupling(tau));
      },
      py::arg("bplus"), py::arg("bminus"), py::arg("tau"));

  m.def(
      "integrate",
      [](const std::string& manifold) { return integrals_dict(integrals_of(entry(manifold))); },
      py::arg("manifold"), "Curvature integrals of a built-in catalog entry at default resolution");

  m.def(
      "epstein_zeta",
      [](const std::array<double, 16>& generators, double s) { return spectral::epstein_zeta(generators, s).value; },
      py::arg("generators"), py::arg("s"));

  m.def(
      "torus_zeta_zero",
      [](const std::array<double, 16>& generators, int k) {
        return spectral::torus_zeta_zero(generators, k).zeta_at_zero;
      },
      py::arg("generators"), py::arg("k"));

  m.def(
      "weights",
      [](const std::string& manifold, const std::string& convention) {
        const auto& d = entry(manifold);
        const auto w = partition::modular_weights(d, integrals_of(d), partition::convention_from_string(convention));
        return py::make_tuple(w.alpha, w.beta);
      },
      py::arg("manifold"), py::arg("convention") = "paper");

  m.def(
      "partition_function",
      [](const std::string& manifold, std::complex<double> tau, const std::string& convention) {
        const auto& d = entry(manifold);
        return partition::assemble_partition(d, integrals_of(d), modular::ComplexCoupling(tau),
                                             partition::convention_from_string(convention))
            .value;
      },
      py::arg("manifold"), py::arg("tau"), py::arg("convention") = "paper");

  m.def(
      "pathology",
      [](std::complex<double> tau) {
        return partition::pathological_partition(modular::ComplexCoupling(tau)).gaussian_factor;
      },
      py::arg("tau"));

  m.def("catalog_names", [] {
    std::vector<std::string> names;
    for (const auto& d : catalog::builtin_catalog().entries) names.push_back(d.name);
    return names;
  });

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run_command(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run an sdlab command; returns (exit_code, stdout, stderr)");
}
