#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bsskit/analysis.hpp"
#include "bsskit/csv.hpp"
#include "bsskit/errors.hpp"
#include "bsskit/fsl.hpp"
#include "bsskit/model.hpp"
#include "bsskit/optimizer.hpp"
#include "bsskit/schedule.hpp"
#include "bsskit/simulator.hpp"

namespace py = pybind11;
using namespace bss;

PYBIND11_MODULE(_bsskit, m) {
    m.doc() = "batch-size-schedule toolkit: scaling-law predictors, schedule "
              "optimizers and a seeded SGD simulator for power-law regression";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);

    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def(py::init([](double s, double beta, double sigma, double eta, std::int64_t dim) {
                 ProblemSpec spec{s, beta, sigma, eta, dim};
                 spec.validate();
                 return spec;
             }),
             py::arg("s"), py::arg("beta"), py::arg("sigma"), py::arg("eta"),
             py::arg("dim") = 1000)
        .def_readonly("s", &ProblemSpec::s)
        .def_readonly("beta", &ProblemSpec::beta)
        .def_readonly("sigma", &ProblemSpec::sigma)
        .def_readonly("eta", &ProblemSpec::eta)
        .def_readonly("dim", &ProblemSpec::dim)
        .def("__repr__", [](const ProblemSpec& p) {
            return "ProblemSpec(s=" + fmt_g(p.s) + ", beta=" + fmt_g(p.beta) +
                   ", sigma=" + fmt_g(p.sigma) + ", eta=" + fmt_g(p.eta) +
                   ", dim=" + std::to_string(p.dim) + ")";
        });

    py::enum_<Regime>(m, "Regime")
        .value("Easy", Regime::Easy)
        .value("Hard", Regime::Hard)
        .value("Boundary", Regime::Boundary);

    py::class_<Spectrum>(m, "Spectrum")
        .def_readonly("lambdas", &Spectrum::lambdas)
        .def_readonly("theta_star", &Spectrum::theta_star)
        .def_readonly("tail_bound", &Spectrum::tail_bound);

    m.def("make_spectrum", &make_spectrum, py::arg("spec"));
    m.def("excess_risk",
          [](const Spectrum& sp, const std::vector<double>& theta) {
              return excess_risk(sp, theta);
          },
          py::arg("spectrum"), py::arg("theta"));
    m.def("regime", &regime, py::arg("spec"));
    m.def("recommended_dim", &recommended_dim, py::arg("spec"), py::arg("predicted_loss"));

    py::class_<Schedule>(m, "Schedule")
        .def_static("constant", &Schedule::constant, py::arg("batch"), py::arg("data_budget"))
        .def_static("two_stage", &Schedule::two_stage, py::arg("b1"), py::arg("b2"),
                    py::arg("data_budget"), py::arg("pre_switch_data"))
        .def("eval", &Schedule::eval, py::arg("t"))
        .def("budget", &Schedule::budget)
        .def("duration", &Schedule::duration)
        .def("text", &format_schedule_text);
    m.def("parse_schedule_text", &parse_schedule_text, py::arg("text"));

    py::class_<DiscreteSchedule>(m, "DiscreteSchedule")
        .def(py::init([](std::vector<std::int64_t> batches, double eta) {
                 return DiscreteSchedule{std::move(batches), eta};
             }),
             py::arg("batch_sizes"), py::arg("eta"))
        .def_readonly("batch_sizes", &DiscreteSchedule::batch_sizes)
        .def_readonly("eta", &DiscreteSchedule::eta)
        .def("total_samples", &DiscreteSchedule::total_samples)
        .def("time_horizon", &DiscreteSchedule::time_horizon);

    m.def("appendix_b2_easy", &appendix_b2_easy, py::arg("d0"), py::arg("alpha"), py::arg("nu"),
          py::arg("spec"));
    m.def("appendix_b2_hard", &appendix_b2_hard, py::arg("d0"), py::arg("alpha"), py::arg("nu"),
          py::arg("spec"));
    m.def("discretize", &discretize, py::arg("schedule"), py::arg("eta"));
    m.def("to_piecewise_constant", &to_piecewise_constant, py::arg("discrete"));

    py::enum_<TrajectoryKind>(m, "TrajectoryKind")
        .value("SimplifiedFsl", TrajectoryKind::SimplifiedFsl)
        .value("SpectralVolterra", TrajectoryKind::SpectralVolterra)
        .value("MomentOdeLower", TrajectoryKind::MomentOdeLower)
        .value("MomentOdeUpper", TrajectoryKind::MomentOdeUpper)
        .value("MonteCarlo", TrajectoryKind::MonteCarlo);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("losses", &Trajectory::losses)
        .def_readonly("stderrs", &Trajectory::stderrs)
        .def_readonly("kind", &Trajectory::kind)
        .def("final_loss", &Trajectory::final_loss)
        .def("interpolate", &Trajectory::interpolate, py::arg("t"))
        .def("csv", &trajectory_csv);

    m.def("kernel_simplified", &kernel_simplified, py::arg("t"), py::arg("beta"));
    m.def("kernel_spectral", &kernel_spectral, py::arg("t"), py::arg("spectrum"));
    m.def("signal_spectral", &signal_spectral, py::arg("t"), py::arg("spectrum"));
    m.def("noise_integral", &noise_integral, py::arg("schedule"), py::arg("t"), py::arg("beta"));
    m.def("fsl_loss", &fsl_loss, py::arg("spec"), py::arg("schedule"), py::arg("t"));
    m.def("volterra_solve", &volterra_solve, py::arg("spec"), py::arg("schedule"),
          py::arg("grid_step"));
    py::enum_<MomentVariant>(m, "MomentVariant")
        .value("Lower", MomentVariant::Lower)
        .value("Upper", MomentVariant::Upper);
    m.def("moment_ode", &moment_ode, py::arg("spec"), py::arg("schedule"), py::arg("variant"),
          py::arg("grid_step"));

    py::enum_<PlanMethod>(m, "PlanMethod")
        .value("ClosedForm", PlanMethod::ClosedForm)
        .value("NumericKkt", PlanMethod::NumericKkt);

    py::class_<OptimalPlan>(m, "OptimalPlan")
        .def_readonly("schedule", &OptimalPlan::schedule)
        .def_readonly("data_budget", &OptimalPlan::data_budget)
        .def_readonly("T_star", &OptimalPlan::T_star)
        .def_readonly("T1_star", &OptimalPlan::T1_star)
        .def_readonly("B_max", &OptimalPlan::B_max)
        .def_readonly("predicted_loss", &OptimalPlan::predicted_loss)
        .def_readonly("regime", &OptimalPlan::regime)
        .def_readonly("method", &OptimalPlan::method)
        .def_readonly("grid_fallback", &OptimalPlan::grid_fallback)
        .def("text", &format_plan);

    m.def("closed_form_plan", &closed_form_plan, py::arg("spec"), py::arg("data_budget"),
          py::arg("b_min") = 1.0);
    m.def("numeric_kkt_plan", &numeric_kkt_plan, py::arg("spec"), py::arg("data_budget"),
          py::arg("b_min") = 1.0, py::arg("b_max_cap") = std::nullopt);
    m.def("two_stage_loss", &two_stage_loss, py::arg("spec"), py::arg("data_budget"),
          py::arg("b1"), py::arg("b2"), py::arg("p"));

    py::class_<SwitchSolution>(m, "SwitchSolution")
        .def_readonly("P_star", &SwitchSolution::P_star)
        .def_readonly("loss_at_optimum", &SwitchSolution::loss_at_optimum)
        .def_readonly("loss_curve", &SwitchSolution::loss_curve)
        .def_readonly("stationarity_residual", &SwitchSolution::stationarity_residual)
        .def_readonly("stationarity_applicable", &SwitchSolution::stationarity_applicable)
        .def_readonly("flat_optimum", &SwitchSolution::flat_optimum);
    m.def("optimal_switch", &optimal_switch, py::arg("spec"), py::arg("data_budget"),
          py::arg("b1"), py::arg("b2"));

    py::enum_<InitMode>(m, "InitMode")
        .value("Zero", InitMode::Zero)
        .value("TargetDebug", InitMode::TargetDebug);

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init([](ProblemSpec spec, DiscreteSchedule schedule, std::uint64_t seed,
                         std::int64_t eval_every, int repeats, InitMode init) {
                 return RunConfig{std::move(spec), std::move(schedule), seed, eval_every, repeats,
                                  init};
             }),
             py::arg("spec"), py::arg("schedule"), py::arg("seed") = 42,
             py::arg("eval_every") = 1, py::arg("repeats") = 1,
             py::arg("init") = InitMode::Zero);

    m.def("run_sgd", &run_sgd, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("run_sgd_averaged", &run_sgd_averaged, py::arg("config"), py::arg("n_threads") = 0,
          py::call_guard<py::gil_scoped_release>());

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("slope", &FitResult::slope)
        .def_readonly("intercept", &FitResult::intercept)
        .def_readonly("r_squared", &FitResult::r_squared)
        .def_readonly("n_points", &FitResult::n_points);

    m.def("powerlaw_fit", &powerlaw_fit, py::arg("xs"), py::arg("ys"));
    m.def("catchup_gap", &catchup_gap, py::arg("spec"), py::arg("b1"), py::arg("b2"));
    m.def("catchup_decay_prediction", &catchup_decay_prediction, py::arg("spec"),
          py::arg("g_star"), py::arg("delta"));
    m.def("catchup_time_prediction", &catchup_time_prediction, py::arg("spec"), py::arg("t_star"));

    py::class_<CatchupReport>(m, "CatchupReport")
        .def_readonly("gap_predicted", &CatchupReport::gap_predicted)
        .def_readonly("gap_measured", &CatchupReport::gap_measured)
        .def_readonly("decay_fit", &CatchupReport::decay_fit)
        .def_readonly("delta_eps", &CatchupReport::delta_eps)
        .def_readonly("delta_eps_reached", &CatchupReport::delta_eps_reached)
        .def_readonly("epsilon", &CatchupReport::epsilon)
        .def_readonly("fit_underdetermined", &CatchupReport::fit_underdetermined);
    m.def("measure_catchup", &measure_catchup, py::arg("switched"), py::arg("baseline"),
          py::arg("t_star"), py::arg("epsilon"), py::arg("delta_min"), py::arg("delta_max"),
          py::arg("gap_predicted"));
}
