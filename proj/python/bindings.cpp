// Low-level bindings.  Rationals cross the boundary as "num/den" strings;
// the cliff_spectra package turns them into fractions.Fraction.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cliff/fd_oracle.hpp"
#include "cliff/geometry.hpp"
#include "cliff/report.hpp"
#include "cliff/spectra.hpp"

namespace py = pybind11;
using namespace cliff;

namespace {

TorusParams params(int m, int j, const std::string& r_sq) {
  return TorusParams::make(m, j, Rational::parse(r_sq));
}

py::dict index_dict(const IndexReport& idx) {
  py::dict d;
  d["strong"] = idx.strong_index;
  d["weak"] = idx.weak_index;
  d["nullity"] = idx.nullity;
  d["degenerate"] = idx.degenerate;
  return d;
}

py::dict instant_dict(const DegeneracyInstant& inst) {
  py::dict d;
  d["kind"] = inst.kind == InstantKind::RType ? "r" : "s";
  d["level"] = inst.level;
  d["r_sq"] = inst.r_sq.str();
  d["jump"] = inst.jump;
  return d;
}

py::list instant_list(const std::vector<DegeneracyInstant>& instants) {
  py::list out;
  for (const auto& inst : instants) out.append(instant_dict(inst));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Exact Jacobi spectra of CMC Clifford tori";

  py::register_exception<fd::ConvergenceError>(mod, "ConvergenceError", PyExc_RuntimeError);

  mod.def("morse_index", [](int m, int j, const std::string& r_sq) { return index_dict(morse_index(params(m, j, r_sq))); },
          py::arg("m"), py::arg("j"), py::arg("r_sq"));

  mod.def(
      "jacobi_spectrum",
      [](int m, int j, const std::string& r_sq, const std::string& threshold) {
        const auto spectrum = jacobi_eigenvalues_below(params(m, j, r_sq), Rational::parse(threshold));
        py::list out;
        for (const auto& e : spectrum.entries) out.append(py::make_tuple(e.value.str(), e.multiplicity, e.contributors));
        return out;
      },
      py::arg("m"), py::arg("j"), py::arg("r_sq"), py::arg("threshold"));

  mod.def("potential", [](int m, int j, const std::string& r_sq) { return potential(params(m, j, r_sq)).str(); });

  mod.def(
      "classify",
      [](int m, int j, const std::string& r_sq) {
        const auto c = classify(params(m, j, r_sq));
        return py::make_tuple(c.verdict == Verdict::LocallyRigid ? "rigid" : "bifurcation", c.jump);
      },
      py::arg("m"), py::arg("j"), py::arg("r_sq"));

  mod.def("instants_to_level",
          [](int m, int j, int max_level) { return instant_list(degeneracy_instants_to_level(m, j, max_level)); },
          py::arg("m"), py::arg("j"), py::arg("max_level"));

  mod.def(
      "instants_between",
      [](int m, int j, const std::string& lo, const std::string& hi) {
        return instant_list(degeneracy_instants(m, j, Rational::parse(lo), Rational::parse(hi)));
      },
      py::arg("m"), py::arg("j"), py::arg("r_sq_min"), py::arg("r_sq_max"));

  mod.def("orbit_dimension", &orbit_dimension, py::arg("m"), py::arg("j"));

  mod.def(
      "curvature_data",
      [](int m, int j, const std::string& r_sq) {
        const auto p = params(m, j, r_sq);
        const auto c = geometry::curvature_data(p);
        py::dict d;
        d["principal_curvatures"] =
            py::make_tuple(py::make_tuple(c.first.value, c.first.count), py::make_tuple(c.second.value, c.second.count));
        d["mean_curvature"] = c.mean_curvature;
        d["second_fundamental_norm_sq"] = c.second_fundamental_norm_sq;
        d["lagrange_multiplier"] = c.lagrange_multiplier;
        d["lambda_derivative"] = geometry::lambda_derivative(p);
        return d;
      },
      py::arg("m"), py::arg("j"), py::arg("r_sq"));

  mod.def(
      "lattice_oracle",
      [](const std::string& r_sq, const std::string& threshold) {
        py::list out;
        for (const auto& l : fd::lattice_oracle(Rational::parse(r_sq), Rational::parse(threshold)))
          out.append(py::make_tuple(l.value.str(), l.multiplicity));
        return out;
      },
      py::arg("r_sq"), py::arg("threshold"));

  mod.def(
      "fd_smallest",
      [](int n, double r_sq, int k) {
        py::gil_scoped_release release;
        return fd::smallest_eigenvalues(fd::assemble({n, r_sq}), k);
      },
      py::arg("n"), py::arg("r_sq"), py::arg("k"));

  mod.def(
      "fd_compare",
      [](double r_sq, int k, int n_coarse, int n_fine) {
        fd::SpectrumComparison cmp;
        {
          py::gil_scoped_release release;
          cmp = fd::compare(r_sq, k, n_coarse, n_fine);
        }
        py::dict d;
        d["analytic"] = cmp.analytic;
        d["numerical"] = cmp.numerical;
        d["numerical_coarse"] = cmp.numerical_coarse;
        d["max_relative_error"] = cmp.max_relative_error;
        d["convergence_order"] = cmp.convergence_order;
        d["cluster_tolerance"] = cmp.cluster_tolerance;
        py::list sizes;
        for (const auto& c : fd::cluster(cmp.numerical, cmp.cluster_tolerance)) sizes.append(c.size);
        d["cluster_sizes"] = sizes;
        return d;
      },
      py::arg("r_sq"), py::arg("k"), py::arg("n_coarse"), py::arg("n_fine"));

  mod.def(
      "diagram_csv",
      [](int m, int j, const std::string& r_min, const std::string& r_max, int samples, int threads) {
        report::RunConfig config;
        config.m = m;
        config.j = j;
        config.r_min = Rational::parse(r_min);
        config.r_max = Rational::parse(r_max);
        config.samples = samples;
        config.threads = threads;
        config.validate();
        std::vector<report::DiagramRow> rows;
        {
          py::gil_scoped_release release;
          rows = report::diagram_rows(config);
        }
        return report::diagram_csv(rows);
      },
      py::arg("m"), py::arg("j"), py::arg("r_min"), py::arg("r_max"), py::arg("samples"), py::arg("threads"));
}
