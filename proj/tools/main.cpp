#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"
#include "json_config.hpp"

#include "fts/errors.hpp"
#include "fts/types.hpp"

namespace {

enum ExitCode : int
{
  ok = 0,
  config_error = 2,
  input_error = 3,
  numeric_error = 4,
};

std::string join_args(int argc, char** argv)
{
  std::string line = "fts";
  for (int i = 1; i < argc; ++i) {
    line += ' ';
    line += argv[i];
  }
  return line;
}

void add_bandwidth_options(CLI::App* cmd, fts::cli::BandwidthOptions& b)
{
  auto* abs = cmd->add_option("--bandwidth,-b", b.bandwidth, "Bandwidth as a fraction of [0,1]");
  cmd->add_option("--bandwidth-frames", b.frames, "Bandwidth in observations (h = B/n)")
    ->excludes(abs);
  cmd->add_option("--k", b.k, "Cross-validation folds when no bandwidth is given")
    ->capture_default_str();
  cmd->add_option("--grid-size", b.grid_size, "Cross-validation grid size")
    ->capture_default_str();
  cmd->add_option("--fold-scheme", b.fold_scheme, "interleaved or blocks")
    ->capture_default_str();
}

} // namespace

int main(int argc, char** argv)
{
  using namespace fts::cli;

  CLI::App app{ "Kernel smoothing of functional time series" };
  app.set_version_flag("--version", std::string(fts::version));
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON configuration file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo comparison of the estimators");
  simulate->add_option("--mean", sim.mean, "mu1 or mu2")->capture_default_str();
  simulate->add_option("--errors", sim.errors,
                       "bm, bb, far-bm, far-bb, tvbm, tvfar1, tvfar2 or zero")
    ->capture_default_str();
  simulate->add_option("--n", sim.n, "Series length(s)")->capture_default_str();
  simulate->add_option("--m", sim.m, "Grid points per curve")->capture_default_str();
  simulate->add_option("--reps", sim.reps, "Replications")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("--burn-in", sim.burn_in, "Burn-in for autoregressive errors")
    ->capture_default_str();
  simulate->add_option("--estimators", sim.estimators, "ll, jackknife, nw")
    ->capture_default_str();
  simulate->add_option("--k", sim.k, "Cross-validation folds")->capture_default_str();
  simulate->add_option("--grid-size", sim.grid_size, "Cross-validation grid size")
    ->capture_default_str();
  simulate->add_option("--fold-scheme", sim.fold_scheme, "interleaved or blocks")
    ->capture_default_str();
  simulate->add_option("--out,-o", sim.out, "Results file")->capture_default_str();
  simulate->add_option("--summary", sim.summary, "Summary JSON (default <out>.summary.json)");
  simulate->add_option("--format", sim.format, "csv or json")->capture_default_str();
  simulate->add_flag("--timing", sim.timing,
                     "Record wall-clock fit times (output no longer reproducible)");

  SmoothOptions smo;
  auto* smooth = app.add_subcommand("smooth", "Estimate the mean function and derivative");
  smooth->add_option("input", smo.input, "Series CSV")->required();
  smooth->add_option("--estimator,-e", smo.estimator, "ll, jackknife or nw")
    ->capture_default_str();
  add_bandwidth_options(smooth, smo.bandwidth);
  smooth->add_flag("--derivative", smo.derivative,
                   "Also write the finite-difference derivative for nw");
  smooth->add_option("--out,-o", smo.out, "Output prefix")->capture_default_str();

  CvOptions cvo;
  auto* cv = app.add_subcommand("cv", "Select the bandwidth by k-fold cross-validation");
  cv->add_option("input", cvo.input, "Series CSV")->required();
  cv->add_option("--estimator,-e", cvo.estimator, "ll, jackknife or nw")->capture_default_str();
  cv->add_option("--k", cvo.k, "Folds")->capture_default_str();
  cv->add_option("--grid-size", cvo.grid_size, "Bandwidth grid size")->capture_default_str();
  cv->add_option("--fold-scheme", cvo.fold_scheme, "interleaved or blocks")
    ->capture_default_str();
  cv->add_option("--out,-o", cvo.out, "Scores CSV")->capture_default_str();
  cv->add_option("--summary", cvo.summary, "Summary JSON (default <out>.json)");

  AnalyzeOptions ana;
  auto* analyze = app.add_subcommand("analyze", "Residual norms, CUSUM and peak detection");
  analyze->add_option("input", ana.input, "Series CSV (raw signal with --embed-stride)")
    ->required();
  analyze->add_option("--smoothed", ana.smoothed, "Precomputed smoothed series CSV");
  analyze->add_option("--estimator,-e", ana.estimator, "ll, jackknife or nw")
    ->capture_default_str();
  add_bandwidth_options(analyze, ana.bandwidth);
  analyze->add_option("--norm", ana.norm, "l1, l2 or sup (default from sidecar or l2)");
  analyze->add_option("--peak-threshold", ana.peak_threshold, "Peak threshold in MAD units")
    ->capture_default_str();
  analyze->add_option("--embed-stride", ana.embed_stride,
                      "Build observations from a raw multichannel signal");
  analyze->add_option("--embed-m", ana.embed_m, "Samples per embedded observation")
    ->capture_default_str();
  analyze->add_option("--out,-o", ana.out, "Output prefix")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return config_error;
  }

  const Provenance prov{ join_args(argc, argv) };
  try {
    if (*simulate)
      return run_simulate(sim, prov);
    if (*smooth)
      return run_smooth(smo, prov);
    if (*cv)
      return run_cv(cvo, prov);
    return run_analyze(ana, prov);
  } catch (const fts::InvalidArgument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return config_error;
  } catch (const fts::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return input_error;
  } catch (const fts::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return numeric_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
