#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "svl/analysis.hpp"
#include "svl/ensemble.hpp"
#include "svl/equilibrium.hpp"
#include "svl/integrator.hpp"
#include "svl/model.hpp"
#include "svl/observables.hpp"
#include "svl/results.hpp"

namespace py = pybind11;
using namespace svl;

namespace {

py::dict stats_dict(const KinkStatistics& s)
{
    py::dict hist;
    for (const auto& [n, count] : s.histogram) {
        hist[py::int_(n)] = count;
    }
    py::dict d;
    d["t_a"] = s.t_a;
    d["n_samples"] = s.n_samples;
    d["density"] = s.mean_density;
    d["density_err"] = s.density_err;
    d["kappa"] = py::make_tuple(s.kappa.k1, s.kappa.k2, s.kappa.k3);
    d["kappa_err"] = py::make_tuple(s.kappa.k1_err, s.kappa.k2_err, s.kappa.k3_err);
    d["ratio21"] = s.ratios.r21;
    d["ratio31"] = s.ratios.r31;
    d["err21"] = s.ratios.r21_err;
    d["err31"] = s.ratios.r31_err;
    d["histogram"] = hist;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "spin-vector Langevin annealing toolkit (C++ core)";

    py::enum_<Boundary>(m, "Boundary")
        .value("open", Boundary::open)
        .value("periodic", Boundary::periodic);

    py::enum_<InitStrategy>(m, "InitStrategy")
        .value("cold", InitStrategy::cold)
        .value("thermal", InitStrategy::thermal)
        .value("burn_in", InitStrategy::burn_in);

    py::class_<Schedule>(m, "Schedule")
        .def("at",
             [](const Schedule& s, double t) {
                 const auto p = s.at(t);
                 return py::make_tuple(p.a, p.b);
             })
        .def_property_readonly("duration", &Schedule::duration);

    py::class_<AnnealSchedule, Schedule>(m, "AnnealSchedule")
        .def_static("linear", &AnnealSchedule::linear, py::arg("t_a"))
        .def_static(
            "tabulated",
            [](double t_a, const std::vector<std::tuple<double, double, double>>& rows) {
                std::vector<ScheduleSample> table;
                table.reserve(rows.size());
                for (const auto& [s, a, b] : rows) {
                    table.push_back({s, a, b});
                }
                return AnnealSchedule::tabulated(t_a, std::move(table));
            },
            py::arg("t_a"), py::arg("table"));

    py::class_<FrozenSchedule, Schedule>(m, "FrozenSchedule")
        .def(py::init<double, double, double>(), py::arg("a"), py::arg("b"),
             py::arg("duration"));

    py::class_<IsingProblem>(m, "IsingProblem")
        .def(py::init([](int n, const std::vector<std::tuple<int, int, double>>& edges,
                         const std::vector<double>& fields, Boundary boundary) {
                 std::vector<Edge> e;
                 e.reserve(edges.size());
                 for (const auto& [i, j, coupling] : edges) {
                     e.push_back({i, j, coupling});
                 }
                 return IsingProblem(n, std::move(e), fields, boundary);
             }),
             py::arg("n"), py::arg("edges"), py::arg("fields"),
             py::arg("boundary") = Boundary::open)
        .def_static("uniform_chain", &IsingProblem::uniform_chain, py::arg("n"),
                    py::arg("coupling"), py::arg("boundary") = Boundary::open)
        .def_property_readonly("n", &IsingProblem::size)
        .def_property_readonly("bond_count", &IsingProblem::bond_count)
        .def_property_readonly("boundary", &IsingProblem::boundary);

    py::class_<BathParams>(m, "BathParams")
        .def(py::init<double, double, double>(), py::arg("gamma"), py::arg("temperature"),
             py::arg("mass") = 1.0)
        .def_readonly("gamma", &BathParams::gamma)
        .def_readonly("temperature", &BathParams::temperature)
        .def_readonly("mass", &BathParams::mass)
        .def_property_readonly("diffusion", &BathParams::diffusion);

    py::class_<PhaseSpaceState>(m, "PhaseSpaceState")
        .def(py::init<std::vector<double>, std::vector<double>, double>(), py::arg("theta"),
             py::arg("p"), py::arg("t") = 0.0)
        .def_readwrite("theta", &PhaseSpaceState::theta)
        .def_readwrite("p", &PhaseSpaceState::p)
        .def_readwrite("t", &PhaseSpaceState::t);

    py::class_<NoiseStream>(m, "NoiseStream")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"),
             py::arg("trajectory_index"))
        .def("gaussian", &NoiseStream::gaussian);

    m.def("energy", &energy, py::arg("state"), py::arg("problem"), py::arg("a"), py::arg("b"));
    m.def("gradient", &gradient, py::arg("state"), py::arg("problem"), py::arg("a"),
          py::arg("b"));
    m.def(
        "count_kinks",
        [](const std::vector<double>& theta, Boundary boundary) {
            return count_kinks(theta, boundary);
        },
        py::arg("theta"), py::arg("boundary") = Boundary::open);
    m.def(
        "order_parameter",
        [](const std::vector<double>& theta) { return order_parameter(theta); },
        py::arg("theta"));
    m.def(
        "cumulants",
        [](const std::vector<std::int64_t>& samples) {
            const auto c = cumulants(samples);
            return py::make_tuple(c.k1, c.k2, c.k3);
        },
        py::arg("samples"));
    m.def(
        "histogram",
        [](const std::vector<std::int64_t>& samples) { return histogram(samples); },
        py::arg("samples"));

    m.def(
        "initialize_state",
        [](const IsingProblem& problem, const BathParams& bath, InitStrategy strategy,
           NoiseStream& noise, double burn_in_time, double burn_in_dt) {
            return initialize_state(problem, bath, strategy, noise,
                                    {burn_in_time, burn_in_dt});
        },
        py::arg("problem"), py::arg("bath"), py::arg("strategy"), py::arg("noise"),
        py::arg("burn_in_time") = 50.0, py::arg("burn_in_dt") = 0.01);
    m.def(
        "simulate_trajectory",
        [](const PhaseSpaceState& init, const IsingProblem& problem, const Schedule& schedule,
           const BathParams& bath, double dt, int record_stride, NoiseStream& noise,
           const std::function<void(double, const PhaseSpaceState&)>& recorder) {
            Recorder rec;
            if (recorder) {
                rec = recorder;
            }
            return simulate_trajectory(init, problem, schedule, bath,
                                       IntegrationParams(dt, record_stride), noise, rec);
        },
        py::arg("init"), py::arg("problem"), py::arg("schedule"), py::arg("bath"), py::arg("dt"),
        py::arg("record_stride"), py::arg("noise"), py::arg("recorder") = py::none());

    m.def(
        "run_ensemble",
        [](int n, double coupling, double gamma, double temperature, double mass, double t_a,
           int n_trajectories, std::uint64_t seed, double dt, int workers,
           const std::string& init) {
            ExperimentConfig config;
            config.problem.n = n;
            config.problem.coupling = coupling;
            config.bath.gammas = {gamma};
            config.bath.temperature = temperature;
            config.bath.mass = mass;
            config.sweep.t_a = {t_a};
            config.ensemble.n_trajectories = n_trajectories;
            config.ensemble.master_seed = seed;
            config.ensemble.init = init == "cold"      ? InitStrategy::cold
                                   : init == "burn_in" ? InitStrategy::burn_in
                                                       : InitStrategy::thermal;
            config.integration.dt = dt;
            const auto cell = run_ensemble(config, gamma, t_a, workers);
            py::dict out = stats_dict(cell.stats);
            out["failures"] = cell.failures;
            out["mz_final"] = cell.mz_final_mean;
            out["cell_seed"] = cell.cell_seed;
            return out;
        },
        py::arg("n"), py::arg("coupling"), py::arg("gamma"), py::arg("temperature"),
        py::arg("mass"), py::arg("t_a"), py::arg("n_trajectories"), py::arg("seed"),
        py::arg("dt") = 0.0, py::arg("workers") = 0, py::arg("init") = "thermal");

    py::class_<EpsilonParam>(m, "EpsilonParam")
        .def(py::init<double>(), py::arg("epsilon"))
        .def_readonly("epsilon", &EpsilonParam::epsilon)
        .def_property_readonly("coupling", &EpsilonParam::coupling)
        .def_property_readonly("field", &EpsilonParam::field)
        .def_property_readonly_static("critical",
                                      [](py::object) { return EpsilonParam::critical(); });

    m.def("pair_energy", &pair_energy, py::arg("theta"), py::arg("psi"), py::arg("eps"));
    m.def("default_grid_size", &default_grid_size, py::arg("beta"));
    m.def(
        "equilibrium_point",
        [](double epsilon, double beta, int grid) {
            const EpsilonParam eps(epsilon);
            const int m_nodes = grid > 0 ? grid : default_grid_size(beta);
            const auto spectrum = leading_spectrum(build_kernel(eps, beta, m_nodes));
            py::dict d;
            d["xi"] = spectrum.xi;
            d["xi_fluctuation"] = spectrum.xi_fluctuation;
            d["mz"] = spectrum.mz;
            d["log_lambda0"] = spectrum.log_lambda0;
            d["log_lambda1"] = spectrum.log_lambda1;
            return d;
        },
        py::arg("epsilon"), py::arg("beta"), py::arg("grid") = 0);
    m.def(
        "gaussian_spectrum",
        [](double epsilon, double beta) {
            const auto g = gaussian_spectrum(EpsilonParam(epsilon), beta);
            py::dict d;
            d["xi"] = g.xi;
            d["log_lambda0"] = g.log_lambda0;
            d["theta0"] = g.theta0;
            return d;
        },
        py::arg("epsilon"), py::arg("beta"));
    m.def(
        "find_maxima",
        [](double epsilon) { return find_maxima(EpsilonParam(epsilon)); },
        py::arg("epsilon"));
    m.def(
        "fit_nu",
        [](const std::vector<std::array<double, 2>>& curve) { return fit_nu(curve); },
        py::arg("curve"));

    m.def("kzm_alpha", &kzm_alpha, py::arg("d"), py::arg("nu"), py::arg("z"));
    m.def("freeze_out_time", &freeze_out_time, py::arg("tau0"), py::arg("t_a"), py::arg("z"),
          py::arg("nu"));
    m.def(
        "fit_power_law",
        [](const std::vector<std::array<double, 2>>& points, double window_min,
           double window_max) {
            const auto fit = fit_power_law(points, window_min, window_max);
            py::dict d;
            d["alpha"] = fit.exponent;
            d["stderr"] = fit.stderr_;
            d["window"] = py::make_tuple(fit.window_min, fit.window_max);
            d["n_points"] = fit.n_points;
            d["r_squared"] = fit.r_squared;
            d["curvature_flag"] = fit.curvature_flag;
            return d;
        },
        py::arg("points"), py::arg("window_min"), py::arg("window_max"));

    m.attr("KAPPA21_REFERENCE") = kKappa21Reference;
    m.attr("KAPPA31_REFERENCE") = kKappa31Reference;
    m.attr("EPSILON_CRITICAL") = EpsilonParam::critical();
}
