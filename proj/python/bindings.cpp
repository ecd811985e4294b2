// Python bindings for the main operations: plants, features, controllers,
// rollouts, gradient sweeps and the policy-iteration learners.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gradctl/controllers.hpp"
#include "gradctl/experiments.hpp"
#include "gradctl/features.hpp"
#include "gradctl/gradient_sweep.hpp"
#include "gradctl/learners.hpp"
#include "gradctl/plants.hpp"
#include "gradctl/rng.hpp"
#include "gradctl/rollout.hpp"
#include "gradctl/version.hpp"

#include <sstream>

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace gradctl;

namespace {

ClosedLoopSystem make_system(const PlantModel& plant, const LossModel& loss, const Controller& c) {
    return ClosedLoopSystem{plant, loss, c};
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "near-optimal controller synthesis via value-gradient policy iteration";

    py::register_exception<DivergedError>(m, "DivergedError");
    py::register_exception<SweepDivergedError>(m, "SweepDivergedError");

    py::class_<PlantModel>(m, "PlantModel")
        .def_readonly("nx", &PlantModel::nx)
        .def_readonly("nu", &PlantModel::nu)
        .def("drift", [](const PlantModel& p, const StateVec& x) { return p.drift(x); })
        .def("input_matrix", [](const PlantModel& p, const StateVec& x) { return p.input_matrix(x); })
        .def("drift_jacobian",
             [](const PlantModel& p, const StateVec& x) { return p.drift_jacobian(x); });

    py::class_<LossModel>(m, "LossModel")
        .def_readonly("nu", &LossModel::nu)
        .def_readonly("command_weight", &LossModel::command_weight)
        .def("rate", [](const LossModel& l, const StateVec& x, const Command& u) { return l.rate(x, u); })
        .def("argmin_command",
             [](const LossModel& l, const RowVec& p) { return l.argmin_command(p); });

    py::class_<Controller>(m, "Controller")
        .def("__call__", [](const Controller& c, const StateVec& x) { return c.eval(x); })
        .def("jacobian", [](const Controller& c, const StateVec& x) { return c.jacobian(x); });

    py::class_<FeatureBasis>(m, "FeatureBasis")
        .def_readonly("nf", &FeatureBasis::nf)
        .def_readonly("nx", &FeatureBasis::nx)
        .def("eval", [](const FeatureBasis& b, const StateVec& x) { return b.eval(x); })
        .def("jacobian", [](const FeatureBasis& b, const StateVec& x) { return b.jacobian(x); });

    py::class_<IntegrationConfig>(m, "IntegrationConfig")
        .def(py::init<>())
        .def_readwrite("step", &IntegrationConfig::step)
        .def_readwrite("horizon", &IntegrationConfig::horizon)
        .def_readwrite("loss_floor", &IntegrationConfig::loss_floor);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("states", &Trajectory::states)
        .def_readonly("commands", &Trajectory::commands)
        .def_readonly("cumulative_cost", &Trajectory::cumulative_cost)
        .def_readonly("total_cost", &Trajectory::total_cost);

    py::class_<GradientSample>(m, "GradientSample")
        .def_readonly("state", &GradientSample::state)
        .def_readonly("grad", &GradientSample::grad)
        .def_readonly("grad_g", &GradientSample::grad_g);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("samples", &SweepResult::samples)
        .def_readonly("reached_floor", &SweepResult::reached_floor)
        .def_readonly("steps", &SweepResult::steps);

    py::enum_<SampleWarp>(m, "SampleWarp")
        .value("sine", SampleWarp::sine)
        .value("uniform", SampleWarp::uniform);

    py::enum_<Method>(m, "Method")
        .value("ghjb", Method::ghjb)
        .value("direct_grad", Method::direct_grad)
        .value("direct_grad_g", Method::direct_grad_g);

    py::class_<TrainingConfig>(m, "TrainingConfig")
        .def(py::init<>())
        .def_readwrite("method", &TrainingConfig::method)
        .def_readwrite("rounds", &TrainingConfig::rounds)
        .def_readwrite("sweeps_per_round", &TrainingConfig::sweeps_per_round)
        .def_readwrite("training_box_halfwidth", &TrainingConfig::training_box_halfwidth)
        .def_readwrite("sample_warp", &TrainingConfig::sample_warp)
        .def_readwrite("ghjb_sample_warp", &TrainingConfig::ghjb_sample_warp)
        .def_readwrite("seed", &TrainingConfig::seed)
        .def_readwrite("ridge", &TrainingConfig::ridge)
        .def_readwrite("ghjb_samples", &TrainingConfig::ghjb_samples);

    py::class_<RoundReport>(m, "RoundReport")
        .def_readonly("round", &RoundReport::round)
        .def_readonly("weights", &RoundReport::weights)
        .def_readonly("test_cost", &RoundReport::test_cost)
        .def_readonly("diverged", &RoundReport::diverged)
        .def_readonly("samples_used", &RoundReport::samples_used)
        .def("__repr__", [](const RoundReport& r) {
            std::ostringstream ss;
            ss << "RoundReport(round=" << r.round << ", test_cost=" << r.test_cost
               << ", diverged=" << (r.diverged ? "True" : "False") << ")";
            return ss.str();
        });

    py::class_<Problem>(m, "Problem")
        .def_readonly("name", &Problem::name)
        .def_readonly("plant", &Problem::plant)
        .def_readonly("loss", &Problem::loss)
        .def_readwrite("integration", &Problem::integration)
        .def_readonly("test_states", &Problem::test_states)
        .def_readonly("initial", &Problem::initial);

    m.def("make_oscillator_plant", &make_oscillator_plant);
    m.def("make_oscillator_loss", &make_oscillator_loss);
    m.def("make_integrator_plant", &make_integrator_plant);
    m.def("make_integrator_loss", &make_integrator_loss, py::arg("q"), py::arg("r"));
    m.def("make_oscillator_problem", &make_oscillator_problem);
    m.def("make_integrator_problem", &make_integrator_problem, py::arg("q") = 100.0,
          py::arg("r") = 1.0);

    m.def("monomial_basis", &monomial_basis, py::arg("max_order"));
    m.def("logcosh_basis", &logcosh_basis, py::arg("weights"));
    m.def(
        "sample_feature_matrix",
        [](int nf, int nx, double scale, std::uint64_t seed) {
            SeededRng rng(seed);
            return sample_feature_matrix(nf, nx, scale, rng);
        },
        py::arg("nf"), py::arg("nx"), py::arg("scale"), py::arg("seed"));

    m.def("saturated_linear", &saturated_linear, py::arg("gain"), py::arg("clamp") = 1.0);
    m.def("feature_tanh", &feature_tanh, py::arg("w"), py::arg("basis"), py::arg("plant"),
          py::arg("r") = 1.0);
    m.def("feature_linear", &feature_linear, py::arg("w"), py::arg("basis"), py::arg("plant"));
    m.def("improved_controller", &improved_controller, py::arg("w"), py::arg("basis"),
          py::arg("plant"), py::arg("loss"));

    m.def(
        "integrate_closed_loop",
        [](const PlantModel& plant, const LossModel& loss, const Controller& c, const StateVec& x0,
           const IntegrationConfig& cfg) { return integrate_closed_loop(make_system(plant, loss, c), x0, cfg); },
        py::arg("plant"), py::arg("loss"), py::arg("controller"), py::arg("x0"),
        py::arg("config") = IntegrationConfig{});

    m.def(
        "rollout_to_target",
        [](const PlantModel& plant, const LossModel& loss, const Controller& c, const StateVec& x0,
           const IntegrationConfig& cfg) {
            const TargetRollout r = rollout_to_target(make_system(plant, loss, c), x0, cfg);
            return py::make_tuple(r.trajectory, r.reached);
        },
        py::arg("plant"), py::arg("loss"), py::arg("controller"), py::arg("x0"),
        py::arg("config") = IntegrationConfig{});

    m.def(
        "sweep",
        [](const PlantModel& plant, const LossModel& loss, const Controller& c, const StateVec& x0,
           const IntegrationConfig& cfg) { return sweep(make_system(plant, loss, c), x0, cfg); },
        py::arg("plant"), py::arg("loss"), py::arg("controller"), py::arg("x0"),
        py::arg("config") = IntegrationConfig{});

    m.def("ghjb_project", &ghjb_project, py::arg("grad"), py::arg("xdot"), py::arg("loss_value"));

    m.def("run_policy_iteration", &run_policy_iteration, py::arg("problem"), py::arg("basis"),
          py::arg("initial"), py::arg("config"));

    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
}
