#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "openfluct/cli.hpp"
#include "openfluct/error.hpp"
#include "openfluct/scenario_io.hpp"
#include "openfluct/thermo.hpp"

namespace py = pybind11;
using namespace openfluct;

namespace {

py::dict report_dict(const FluctuationReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["beta"] = r.beta;
  d["unital"] = r.unital;
  d["delta_u"] = r.delta_u;
  d["delta_u_moment"] = r.delta_u_moment;
  d["delta_f"] = r.delta_f;
  d["gamma"] = r.gamma;
  d["x"] = r.x;
  d["kl"] = r.kl;
  d["excess_energy"] = r.excess_energy;
  d["delta_s"] = r.delta_s;
  d["delta_s_v"] = r.delta_s_v;
  d["s_r_final"] = r.s_r_final;
  d["residuals"] = r.residuals;
  d["max_residual"] = r.max_residual();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "C++ core for energetic fluctuation relations of open quantum processes";

  py::register_exception<Error>(m, "OpenfluctError", PyExc_ValueError);

  m.def("hermitian_eig",
        [](const ComplexMatrix& a) {
          auto s = hermitian_eig(a);
          return py::make_tuple(s.eigenvalues, s.eigenvectors);
        },
        py::arg("matrix"), "Ascending eigenvalues and unitary eigenvector matrix.");

  py::class_<Hamiltonian>(m, "Hamiltonian")
      .def(py::init<const ComplexMatrix&>(), py::arg("matrix"))
      .def_static("diagonal", &Hamiltonian::diagonal, py::arg("energies"))
      .def_property_readonly("matrix", &Hamiltonian::matrix)
      .def_property_readonly("energies", &Hamiltonian::energies)
      .def_property_readonly("dim", &Hamiltonian::dim);

  py::class_<ThermalState>(m, "ThermalState")
      .def_property_readonly("beta", &ThermalState::beta)
      .def_property_readonly("state", [](const ThermalState& t) { return t.state().matrix(); })
      .def_property_readonly("populations", &ThermalState::populations)
      .def_property_readonly("partition_function", &ThermalState::partition_function)
      .def_property_readonly("free_energy", &ThermalState::free_energy)
      .def_property_readonly("hamiltonian", &ThermalState::hamiltonian);

  m.def("gibbs_state", &gibbs_state, py::arg("hamiltonian"), py::arg("beta"));
  m.def("von_neumann_entropy",
        [](const ComplexMatrix& rho) { return von_neumann_entropy(DensityMatrix(rho)); },
        py::arg("rho"));
  m.def("relative_entropy",
        [](const ComplexMatrix& rho, const ComplexMatrix& sigma) {
          return relative_entropy(DensityMatrix(rho), DensityMatrix(sigma));
        },
        py::arg("rho"), py::arg("sigma"));
  m.def("nonequilibrium_entropy",
        [](const ComplexMatrix& rho, const ThermalState& ref) {
          return nonequilibrium_entropy(DensityMatrix(rho), ref);
        },
        py::arg("rho"), py::arg("reference"));

  py::class_<KrausChannel>(m, "KrausChannel")
      .def_property_readonly("kraus_ops", &KrausChannel::kraus_ops)
      .def_property_readonly("dim", &KrausChannel::dim)
      .def_property_readonly("label", &KrausChannel::label)
      .def("is_unital",
           [](const KrausChannel& c) {
             auto u = is_unital(c);
             return py::make_tuple(u.unital, u.deviation);
           })
      .def("apply",
           [](const KrausChannel& c, const ComplexMatrix& rho) {
             return apply(c, DensityMatrix(rho)).matrix();
           },
           py::arg("rho"))
      .def("__repr__", [](const KrausChannel& c) {
        std::ostringstream os;
        os << "<KrausChannel " << c.label() << ", dim " << c.dim() << ", "
           << c.kraus_ops().size() << " ops>";
        return os.str();
      });

  m.def("validate_channel",
        [](std::vector<ComplexMatrix> ops) { return validate_channel(std::move(ops)); },
        py::arg("ops"));
  m.def("preset", &preset, py::arg("name"), py::arg("params") = std::vector<double>{},
        py::arg("dim") = 2, py::arg("seed") = 0);
  m.def("dilate",
        [](const KrausChannel& c) {
          auto d = dilate(c);
          return py::make_tuple(d.unitary, d.d_anc);
        },
        py::arg("channel"), "Stinespring unitary and ancilla dimension.");

  py::class_<EnergyDistribution>(m, "EnergyDistribution")
      .def_property_readonly("atoms",
                             [](const EnergyDistribution& p) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& a : p.atoms()) out.emplace_back(a.delta_u, a.mass);
                               return out;
                             })
      .def_property_readonly("total_mass", &EnergyDistribution::total_mass)
      .def_property_readonly("bin_tolerance", &EnergyDistribution::bin_tolerance)
      .def("first_moment", &EnergyDistribution::first_moment);

  m.def("forward_distribution",
        [](const KrausChannel& c, const ThermalState& init, const Hamiltonian& h_final) {
          return forward_distribution(c, init, h_final);
        },
        py::arg("channel"), py::arg("initial"), py::arg("h_final"));
  m.def("backward_distribution",
        [](const KrausChannel& c, const ThermalState& final_eq, const Hamiltonian& h_initial) {
          return backward_distribution(backward_of(c), final_eq, h_initial);
        },
        py::arg("channel"), py::arg("final_eq"), py::arg("h_initial"),
        "Unnormalized backward distribution of the adjoint channel.");
  m.def("gamma_of", &gamma_of, py::arg("channel"), py::arg("final_eq"));
  m.def("renormalize_backward", &renormalize_backward, py::arg("distribution"));
  m.def("exp_average", &exp_average, py::arg("distribution"), py::arg("coefficient"),
        py::arg("offset"));
  m.def("crooks_residual", &crooks_residual, py::arg("pf"), py::arg("pb"), py::arg("beta"),
        py::arg("delta_f"), py::arg("x"));
  m.def("kl_divergence", &kl_divergence, py::arg("pf"), py::arg("pb"));

  py::class_<FluctuationReport>(m, "Report")
      .def_readonly("name", &FluctuationReport::name)
      .def_readonly("beta", &FluctuationReport::beta)
      .def_readonly("unital", &FluctuationReport::unital)
      .def_readonly("delta_u", &FluctuationReport::delta_u)
      .def_readonly("delta_u_moment", &FluctuationReport::delta_u_moment)
      .def_readonly("delta_f", &FluctuationReport::delta_f)
      .def_readonly("gamma", &FluctuationReport::gamma)
      .def_readonly("x", &FluctuationReport::x)
      .def_readonly("kl", &FluctuationReport::kl)
      .def_readonly("excess_energy", &FluctuationReport::excess_energy)
      .def_readonly("delta_s", &FluctuationReport::delta_s)
      .def_readonly("delta_s_v", &FluctuationReport::delta_s_v)
      .def_readonly("s_r_final", &FluctuationReport::s_r_final)
      .def_readonly("residuals", &FluctuationReport::residuals)
      .def("max_residual", &FluctuationReport::max_residual)
      .def("to_dict", &report_dict);

  m.def("report_from_json",
        [](const std::string& text) { return build_report(resolve(parse_scenario(text))); },
        py::arg("scenario_json"), "Evaluate a scenario given as a JSON document.");

  m.def("cli",
        [](std::vector<std::string> args) {
          args.insert(args.begin(), "openfluct");
          std::vector<char*> argv;
          for (auto& a : args) argv.push_back(a.data());
          std::ostringstream out;
          std::ostringstream err;
          const int code = cli::main(int(argv.size()), argv.data(), out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line interface; returns (exit_code, stdout, stderr).");
}
