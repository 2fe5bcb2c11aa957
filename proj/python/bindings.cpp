#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fts/analysis.hpp"
#include "fts/bandwidth.hpp"
#include "fts/errors.hpp"
#include "fts/estimators.hpp"
#include "fts/io.hpp"
#include "fts/kernel.hpp"
#include "fts/parallel.hpp"
#include "fts/simulation.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

fts::FunctionalSeries make_series(const fts::RowMatrix& values,
                                  std::optional<std::vector<double>> times,
                                  const std::string& norm = "l2")
{
  const fts::Norm parsed = fts::io::parse_norm(norm);
  if (times)
    return { std::move(*times), values, {}, parsed };
  return fts::FunctionalSeries::equidistant(values, {}, parsed);
}

fts::Estimate smooth(const fts::RowMatrix& values,
                     double bandwidth,
                     const std::string& estimator,
                     std::optional<std::vector<double>> times,
                     std::optional<std::vector<double>> eval_times,
                     bool derivative)
{
  const auto series = make_series(values, std::move(times));
  const auto kind = fts::parse_estimator(estimator);
  const fts::SmoothConfig cfg{ bandwidth, fts::Kernel::quartic() };
  py::gil_scoped_release release;
  if (eval_times) {
    const std::span<const double> at(*eval_times);
    switch (kind) {
      case fts::EstimatorKind::LocalLinear:
        return fts::local_linear(series, cfg, at);
      case fts::EstimatorKind::Jackknife:
        return derivative ? fts::jackknife_derivative(series, cfg, at)
                          : fts::jackknife_mean(series, cfg, at);
      case fts::EstimatorKind::NadarayaWatson:
        return fts::nadaraya_watson(series, cfg, at);
    }
  }
  if (kind == fts::EstimatorKind::NadarayaWatson && !derivative)
    return fts::nadaraya_watson(series, cfg);
  if (kind == fts::EstimatorKind::Jackknife && !derivative)
    return fts::jackknife_mean(series, cfg);
  return fts::smooth_full(kind, series, cfg);
}

py::list results_to_python(const fts::ResultsTable& table)
{
  py::list rows;
  for (const auto& r : table.rows)
    rows.append(py::dict("estimator"_a = fts::to_string(r.estimator),
                         "target"_a = fts::to_string(r.target), "n"_a = r.n, "m"_a = r.m,
                         "reps"_a = r.reps, "mean_mse"_a = r.mean_mse, "sd_mse"_a = r.sd_mse,
                         "mean_mae"_a = r.mean_mae, "sd_mae"_a = r.sd_mae,
                         "mean_fit_ms"_a = r.mean_fit_ms, "mean_h"_a = r.mean_bandwidth,
                         "failures"_a = r.failures));
  return rows;
}

} // namespace

PYBIND11_MODULE(_fts, m)
{
  m.doc() = "Kernel smoothing of functional time series";
  m.attr("__version__") = fts::version;

  static py::exception<fts::InputError> input_error(m, "InputError", PyExc_ValueError);
  static py::exception<fts::NumericError> numeric_error(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p)
        std::rethrow_exception(p);
    } catch (const fts::InputError& e) {
      PyErr_SetString(input_error.ptr(), e.what());
    } catch (const fts::NumericError& e) {
      PyErr_SetString(numeric_error.ptr(), e.what());
    } catch (const fts::InvalidArgument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<fts::Estimate>(m, "Estimate")
    .def_readonly("times", &fts::Estimate::times)
    .def_readonly("bandwidth", &fts::Estimate::bandwidth)
    .def_readonly("mu_hat", &fts::Estimate::mu_hat)
    .def_readonly("dmu_hat", &fts::Estimate::dmu_hat)
    .def_property_readonly("interior_mask", [](const fts::Estimate& e) {
      return std::vector<bool>(e.interior_mask.begin(), e.interior_mask.end());
    })
    .def("__repr__", [](const fts::Estimate& e) {
      return "<Estimate n=" + std::to_string(e.times.size()) +
             " dim=" + std::to_string(e.mu_hat.cols()) +
             " h=" + fts::io::format_double(e.bandwidth) + ">";
    });

  m.def("smooth", &smooth, "values"_a, "bandwidth"_a, "estimator"_a = "ll",
        "times"_a = py::none(), "eval_times"_a = py::none(), "derivative"_a = true,
        "Mean (and derivative) estimate of an n x P array observed at `times` "
        "(default i/n). estimator is 'll', 'jackknife' or 'nw'. Nadaraya-Watson "
        "derivatives use finite differences and are only available on the "
        "observation grid.");

  m.def("quartic", [](double x) { return fts::Kernel::quartic().eval(x); }, "x"_a);
  m.def("quartic_star", [](double x) { return fts::Kernel::quartic().eval_star(x); }, "x"_a);
  m.def("kernel_moment", [](int ell, bool star) {
    const auto k = fts::Kernel::quartic();
    return star ? k.moment_star(ell) : k.moment(ell);
  }, "ell"_a, "star"_a = false);

  py::class_<fts::CvReport>(m, "CvReport")
    .def_readonly("grid", &fts::CvReport::grid)
    .def_readonly("scores", &fts::CvReport::scores)
    .def_readonly("best_h", &fts::CvReport::best_h);

  m.def("bandwidth_grid", &fts::bandwidth_grid, "n"_a, "grid_size"_a = 20);
  m.def(
    "cross_validate",
    [](const fts::RowMatrix& values, std::optional<std::vector<double>> times, int k,
       int grid_size, const std::string& estimator, const std::string& fold_scheme) {
      const auto series = make_series(values, std::move(times));
      fts::CvConfig cfg;
      cfg.k = k;
      cfg.grid_size = grid_size;
      cfg.estimator = fts::parse_estimator(estimator);
      cfg.fold_scheme = fts::parse_fold_scheme(fold_scheme);
      py::gil_scoped_release release;
      return fts::cross_validate(series, cfg);
    },
    "values"_a, "times"_a = py::none(), "k"_a = 5, "grid_size"_a = 20, "estimator"_a = "ll",
    "fold_scheme"_a = "interleaved");

  m.def(
    "simulate",
    [](const std::string& mean, const std::string& errors, std::size_t n, std::size_t m_points,
       std::uint64_t seed, std::size_t rep, int burn_in) {
      fts::SimSpec spec;
      spec.mean = fts::parse_mean(mean);
      spec.errors = { fts::parse_error_kind(errors), burn_in };
      spec.n = n;
      spec.m = m_points;
      spec.reps = rep + 1;
      spec.master_seed = seed;
      spec.validate();
      auto sim = fts::gen_series(spec, rep);
      return py::make_tuple(sim.series.values(), sim.truth_mu, sim.truth_dmu);
    },
    "mean"_a = "mu1", "errors"_a = "bm", "n"_a = 100, "m"_a = 100, "seed"_a = 0, "rep"_a = 0,
    "burn_in"_a = 50,
    "One simulated replication as (values, true mean, true derivative), each n x m.");

  m.def(
    "monte_carlo",
    [](const std::string& mean, const std::string& errors, std::size_t n, std::size_t m_points,
       std::size_t reps, std::uint64_t seed, const std::vector<std::string>& estimators,
       int k, int grid_size) {
      fts::SimSpec spec;
      spec.mean = fts::parse_mean(mean);
      spec.errors = { fts::parse_error_kind(errors), 50 };
      spec.n = n;
      spec.m = m_points;
      spec.reps = reps;
      spec.master_seed = seed;
      spec.validate();
      std::vector<fts::EstimatorKind> kinds;
      for (const auto& e : estimators)
        kinds.push_back(fts::parse_estimator(e));
      fts::CvConfig cv;
      cv.k = k;
      cv.grid_size = grid_size;
      fts::ResultsTable table;
      {
        py::gil_scoped_release release;
        table = fts::monte_carlo(spec, kinds, cv);
      }
      return results_to_python(table);
    },
    "mean"_a = "mu1", "errors"_a = "bm", "n"_a = 100, "m"_a = 100, "reps"_a = 100,
    "seed"_a = 0, "estimators"_a = std::vector<std::string>{ "ll", "jackknife", "nw" },
    "k"_a = 5, "grid_size"_a = 20);

  m.def(
    "residual_norms",
    [](const fts::RowMatrix& observed, const fts::RowMatrix& smoothed, const std::string& norm) {
      return fts::residual_norms(observed, smoothed, fts::io::parse_norm(norm));
    },
    "observed"_a, "smoothed"_a, "norm"_a = "l2");

  m.def(
    "cusum",
    [](const std::vector<double>& z) {
      const auto r = fts::cusum(z);
      return py::make_tuple(r.process, r.argmax_index, r.max_value);
    },
    "z"_a, "CUSUM process, 1-based argmax index and maximum absolute value.");

  m.def(
    "detect_peaks",
    [](const std::vector<double>& z, double threshold) { return fts::detect_peaks(z, threshold); },
    "z"_a, "threshold"_a = 5.0, "Inclusive 0-based (first, last) index ranges.");

  m.def(
    "sliding_embed",
    [](const fts::RowMatrix& raw, std::size_t stride, std::size_t m_points) {
      const auto s = fts::sliding_embed(raw, stride, m_points);
      return py::make_tuple(s.times(), s.values());
    },
    "raw"_a, "stride"_a, "m"_a = 50, "(times, values) of the embedded series.");

  m.def("set_max_threads", &fts::set_max_threads, "count"_a, "0 restores the default.");
  m.def("max_threads", &fts::max_threads);
}
