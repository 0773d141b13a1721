#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dephcap/capacity.hpp"
#include "dephcap/channels.hpp"
#include "dephcap/entropy.hpp"
#include "dephcap/qubit_squash.hpp"

namespace py = pybind11;
using namespace dephcap;

namespace {

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

const char* family_name(QubitFamily f) { return f == QubitFamily::A ? "A" : "B"; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Capacity bounds for the bosonic dephasing channel in truncated Fock space";

  py::class_<OptimizerConfig>(m, "OptimizerConfig")
      .def(py::init([](int max_iters, double objective_tol, int multistarts, std::optional<double> energy_cap,
                       std::uint64_t seed) {
             OptimizerConfig c{max_iters, objective_tol, multistarts, energy_cap, seed};
             c.validate();
             return c;
           }),
           py::arg("max_iters") = 10000, py::arg("objective_tol") = 1e-9, py::arg("multistarts") = 8,
           py::arg("energy_cap") = py::none(), py::arg("seed") = 1)
      .def_readwrite("max_iters", &OptimizerConfig::max_iters)
      .def_readwrite("objective_tol", &OptimizerConfig::objective_tol)
      .def_readwrite("multistarts", &OptimizerConfig::multistarts)
      .def_readwrite("energy_cap", &OptimizerConfig::energy_cap)
      .def_readwrite("seed", &OptimizerConfig::seed);

  py::class_<OptimizerDiagnostics>(m, "OptimizerDiagnostics")
      .def_readonly("iterations", &OptimizerDiagnostics::iterations)
      .def_readonly("converged", &OptimizerDiagnostics::converged)
      .def_readonly("fw_gap_bits", &OptimizerDiagnostics::fw_gap_bits)
      .def_readonly("energy_multiplier", &OptimizerDiagnostics::energy_multiplier)
      .def_readonly("energy_slack", &OptimizerDiagnostics::energy_slack)
      .def_readonly("start_values", &OptimizerDiagnostics::start_values)
      .def_readonly("start_converged", &OptimizerDiagnostics::start_converged);

  py::class_<CapacityResult>(m, "CapacityResult")
      .def_property_readonly("p_star", [](const CapacityResult& r) { return to_vector(r.p_star.values()); })
      .def_readonly("q_bits", &CapacityResult::q_bits)
      .def_readonly("diagnostics", &CapacityResult::diagnostics);

  py::class_<BoundsRow>(m, "BoundsRow")
      .def_readonly("gamma", &BoundsRow::gamma)
      .def_readonly("dim", &BoundsRow::dim)
      .def_readonly("energy_cap", &BoundsRow::energy_cap)
      .def_readonly("lower_bits", &BoundsRow::lower_bits)
      .def_readonly("upper_bits", &BoundsRow::upper_bits)
      .def_readonly("gap_bits", &BoundsRow::gap_bits)
      .def_readonly("iterations", &BoundsRow::iterations)
      .def_readonly("converged", &BoundsRow::converged)
      .def_readonly("error", &BoundsRow::error)
      .def("__repr__", [](const BoundsRow& r) {
        return "BoundsRow(gamma=" + std::to_string(r.gamma) + ", dim=" + std::to_string(r.dim) +
               ", lower_bits=" + std::to_string(r.lower_bits) + ", upper_bits=" + std::to_string(r.upper_bits) + ")";
      });

  py::class_<QubitSquashResult>(m, "QubitSquashResult")
      .def_readonly("bound_bits", &QubitSquashResult::bound_bits)
      .def_readonly("p1", &QubitSquashResult::p1)
      .def_property_readonly("family", [](const QubitSquashResult& r) { return family_name(r.params.family); })
      .def_property_readonly("theta", [](const QubitSquashResult& r) { return r.params.theta; })
      .def_property_readonly("phi", [](const QubitSquashResult& r) { return r.params.phi; });

  m.def(
      "capacity_objective",
      [](std::vector<double> p, double gamma) { return capacity_objective(ProbabilityDistribution(std::move(p)), gamma); },
      py::arg("p"), py::arg("gamma"), "H(p) - S(environment) in bits for a diagonal input p.");
  m.def(
      "reverse_coherent_information",
      [](std::vector<double> p, double gamma) {
        return reverse_coherent_information(ProbabilityDistribution(std::move(p)), gamma);
      },
      py::arg("p"), py::arg("gamma"));
  m.def("optimize_capacity", &optimize_capacity, py::arg("gamma"), py::arg("d"),
        py::arg("cfg") = OptimizerConfig{}, py::call_guard<py::gil_scoped_release>());
  m.def("locc_bounds", &locc_bounds, py::arg("gamma"), py::arg("d"), py::arg("cfg") = OptimizerConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("beamsplitter_bound", &beamsplitter_bound_via_pipeline, py::arg("gamma"), py::arg("d"),
        py::arg("cfg") = OptimizerConfig{}, py::call_guard<py::gil_scoped_release>());
  m.def(
      "gap_sweep",
      [](const std::vector<double>& grid, std::size_t d, const OptimizerConfig& cfg, unsigned threads) {
        return gap_sweep(grid, d, cfg, threads);
      },
      py::arg("gamma_grid"), py::arg("d"), py::arg("cfg") = OptimizerConfig{}, py::arg("threads") = 1,
      py::call_guard<py::gil_scoped_release>());
  m.def("qubit_squash_bound", &qubit_squash_bound, py::arg("gamma"), py::arg("cfg") = OptimizerConfig{},
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "dephasing_apply", [](const Eigen::MatrixXcd& rho, double gamma) { return dephasing_apply(rho, gamma); },
      py::arg("rho"), py::arg("gamma"));
  m.def(
      "dephasing_kraus",
      [](double gamma, std::size_t d) { return dephasing_kraus(gamma, d).operators(); },
      py::arg("gamma"), py::arg("d"));
  m.def(
      "von_neumann_entropy", [](const Eigen::MatrixXcd& rho) { return von_neumann_entropy(DensityMatrix(rho)); },
      py::arg("rho"), "Entropy in bits.");
  m.def(
      "entropy_of_pure_mixture",
      [](std::vector<double> p, const std::vector<cplx>& amplitudes) {
        return entropy_of_pure_mixture(ProbabilityDistribution(std::move(p)), gram_matrix(amplitudes));
      },
      py::arg("p"), py::arg("amplitudes"), "Entropy of sum_n p_n |alpha_n><alpha_n| for coherent states.");
}
