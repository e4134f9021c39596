#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ptt/diagnostics.hpp"
#include "ptt/fft.hpp"
#include "ptt/lagrangian.hpp"
#include "ptt/littlewood_paley.hpp"
#include "ptt/model.hpp"
#include "ptt/operators.hpp"
#include "ptt/probes.hpp"
#include "ptt/runner.hpp"

namespace py = pybind11;
using namespace ptt;

namespace {

using ComplexArray = py::array_t<std::complex<double>, py::array::c_style>;
using RealArray = py::array_t<double, py::array::c_style>;

void check_shape(const Grid& g, py::buffer_info& info) {
  if (info.ndim != 3 || info.shape[0] != g.n || info.shape[1] != g.n ||
      info.shape[2] != g.n)
    throw std::invalid_argument("array shape must be (n, n, n)");
}

SpectralScalarField scalar_from_spectral(const Grid& g, ComplexArray arr) {
  auto info = arr.request();
  check_shape(g, info);
  SpectralScalarField f(g);
  const auto* src = static_cast<const std::complex<double>*>(info.ptr);
  std::copy(src, src + g.size(), f.coeffs().begin());
  return f;
}

ComplexArray scalar_to_spectral(const SpectralScalarField& f) {
  const Grid& g = f.grid();
  ComplexArray arr({g.n, g.n, g.n});
  auto info = arr.request();
  std::copy(f.coeffs().begin(), f.coeffs().end(),
            static_cast<std::complex<double>*>(info.ptr));
  return arr;
}

SpectralScalarField scalar_from_physical(const Grid& g, RealArray arr) {
  auto info = arr.request();
  check_shape(g, info);
  const auto* src = static_cast<const double*>(info.ptr);
  return to_spectral(g, std::span<const double>(src, g.size()));
}

RealArray scalar_to_physical_arr(const SpectralScalarField& f) {
  const Grid& g = f.grid();
  const auto vals = to_physical(f);
  RealArray arr({g.n, g.n, g.n});
  auto info = arr.request();
  std::copy(vals.begin(), vals.end(), static_cast<double*>(info.ptr));
  return arr;
}

ShellRange range_from_string(const std::string& r) {
  if (r == "low") return ShellRange::low;
  if (r == "high") return ShellRange::high;
  if (r == "all") return ShellRange::all;
  throw std::invalid_argument("range must be low, high or all");
}

py::dict probe_to_dict(const ProbeReport& rep) {
  py::dict d;
  d["estimate_id"] = rep.estimate_id;
  d["seed"] = rep.seed;
  d["sample_count"] = rep.sample_count;
  d["p"] = rep.p;
  d["grid_n"] = rep.grid_n;
  d["pass"] = rep.pass;
  py::list stats;
  for (const auto& s : rep.inequalities) {
    py::dict e;
    e["name"] = s.name;
    e["min"] = s.min;
    e["median"] = s.median;
    e["max"] = s.max;
    e["skipped"] = s.skipped;
    stats.append(e);
  }
  d["inequalities"] = stats;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "spectral viscoelastic solver core";

  py::class_<Grid>(m, "Grid")
      .def(py::init<int, double>(), py::arg("n"), py::arg("box_length") = two_pi)
      .def_readonly("n", &Grid::n)
      .def_readonly("box_length", &Grid::box_length)
      .def("spacing", &Grid::spacing);

  py::class_<SpectralScalarField>(m, "ScalarField")
      .def_static("from_physical", &scalar_from_physical)
      .def_static("from_spectral", &scalar_from_spectral)
      .def("to_physical", &scalar_to_physical_arr)
      .def("to_spectral", &scalar_to_spectral)
      .def("grid", &SpectralScalarField::grid);

  py::class_<SpectralVectorField>(m, "VectorField")
      .def(py::init<const Grid&>())
      .def("component",
           [](const SpectralVectorField& v, int i) {
             if (i < 0 || i > 2) throw std::out_of_range("component");
             return v[i];
           })
      .def("set_component",
           [](SpectralVectorField& v, int i, const SpectralScalarField& f) {
             if (i < 0 || i > 2) throw std::out_of_range("component");
             v[i] = f;
           })
      .def_readonly("solenoidal", &SpectralVectorField::solenoidal);

  py::class_<SpectralTensorField>(m, "TensorField")
      .def(py::init<const Grid&>())
      .def("component",
           [](const SpectralTensorField& t, int i, int j) {
             return t.comp[SpectralTensorField::index(i, j)];
           })
      .def("set_component",
           [](SpectralTensorField& t, int i, int j,
              const SpectralScalarField& f) {
             t.comp[SpectralTensorField::index(i, j)] = f;
           })
      .def("trace", &SpectralTensorField::trace);

  m.def("gradient", &gradient);
  m.def("divergence",
        py::overload_cast<const SpectralVectorField&>(&divergence));
  m.def("tensor_divergence",
        py::overload_cast<const SpectralTensorField&>(&divergence));
  m.def("laplacian",
        py::overload_cast<const SpectralScalarField&>(&laplacian));
  m.def("fractional_lambda",
        py::overload_cast<const SpectralScalarField&, double>(
            &fractional_lambda));
  m.def("leray_project", &leray_project);
  m.def("lambda_inv_p_div", &lambda_inv_p_div);
  m.def("sym_grad", &sym_grad);
  m.def("q_bilinear", &q_bilinear);
  m.def("special_solution", &special_solution);
  m.def("divergence_defect", &divergence_defect);

  m.def("rhs_perturbation", [](const SpectralVectorField& u,
                               const SpectralTensorField& sigma, double t,
                               double c0) {
    SimState st;
    st.u = u;
    st.sigma = sigma;
    st.t = t;
    ModelParams params;
    params.c0 = c0;
    auto rhs = rhs_perturbation(st, params);
    return py::make_tuple(rhs.du, rhs.dsigma);
  });

  py::class_<DyadicBank>(m, "DyadicBank")
      .def(py::init<const Grid&, int>(), py::arg("grid"), py::arg("cutoff"))
      .def_property_readonly("j_min", &DyadicBank::j_min)
      .def_property_readonly("j_max", &DyadicBank::j_max)
      .def_property_readonly("cutoff", &DyadicBank::cutoff)
      .def("covered_kmax", &DyadicBank::covered_kmax)
      .def("interior_kmax", &DyadicBank::interior_kmax);

  m.def("dyadic_block",
        py::overload_cast<const DyadicBank&, const SpectralScalarField&, int>(
            &dyadic_block));
  m.def("low_part",
        py::overload_cast<const DyadicBank&, const SpectralScalarField&>(
            &low_part));
  m.def("high_part",
        py::overload_cast<const DyadicBank&, const SpectralScalarField&>(
            &high_part));
  m.def("lp_norm", [](const SpectralScalarField& f, double p) {
    return lp_norm(f, std::isinf(p) ? kInf : static_cast<int>(p));
  });
  m.def("besov_norm",
        [](const DyadicBank& bank, const SpectralScalarField& f, double s,
           int p, double r, const std::string& range) {
          const BesovSpec spec{s, p, std::isinf(r) ? kInf : static_cast<int>(r)};
          return besov_norm(bank, f, spec, range_from_string(range));
        },
        py::arg("bank"), py::arg("f"), py::arg("s"), py::arg("p"),
        py::arg("r") = 1.0, py::arg("range") = "all");
  m.def("energy_e0", &energy_e0);

  m.def("riccati_exact", &riccati_exact);
  m.def("blowup_time", &blowup_time);
  m.def("bony_reconstruct", &bony_reconstruct);
  m.def("commutator_probe",
        [](const DyadicBank& bank, std::uint64_t seed, int count, int p) {
          return probe_to_dict(commutator_probe(bank, seed, count, p));
        });
  m.def("product_probe",
        [](const DyadicBank& bank, std::uint64_t seed, int count, int p) {
          return probe_to_dict(product_probe(bank, seed, count, p));
        });

  m.def("run_from_json", [](const std::string& config_json,
                            const std::string& out_dir) {
    RunConfig config = config_from_json(config_json);
    if (!out_dir.empty()) config.out_dir = out_dir;
    const RunResult result = run(config);
    py::dict d;
    d["completed"] = result.completed;
    d["final_time"] = result.final_time;
    d["e0"] = result.e0;
    d["total_energy"] = result.final_energy.total();
    if (result.blowup) {
      py::dict b;
      b["t"] = result.blowup->t;
      b["reason"] = result.blowup->reason;
      d["blowup"] = b;
    } else {
      d["blowup"] = py::none();
    }
    py::list checks;
    for (const auto& c : result.checks) {
      py::dict e;
      e["name"] = c.name;
      e["pass"] = c.pass;
      e["value"] = c.value;
      e["bound"] = c.bound;
      checks.append(e);
    }
    d["checks"] = checks;
    return d;
  });

  m.def("default_config_json", [](const std::string& scenario) {
    return config_to_json(default_config(scenario_from_string(scenario)));
  });

  m.attr("__version__") = "0.1.0";
}
