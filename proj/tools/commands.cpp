#include "commands.hpp"

#include <cmath>
#include <iostream>

#include "json.hpp"

#include "fts/analysis.hpp"
#include "fts/bandwidth.hpp"
#include "fts/errors.hpp"
#include "fts/estimators.hpp"
#include "fts/io.hpp"
#include "fts/simulation.hpp"

namespace fts::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> provenance_lines(const Provenance& prov,
                                          std::optional<std::uint64_t> seed = {})
{
  std::vector<std::string> lines{ std::string("fts ") + fts::version,
                                  "command: " + prov.command_line };
  if (seed)
    lines.push_back("seed: " + std::to_string(*seed));
  return lines;
}

std::string with_suffix(const std::string& prefix, const std::string& suffix)
{
  return prefix + suffix;
}

//! JSON has no infinity; failed scores become null.
ordered_json finite_or_null(double value)
{
  return std::isfinite(value) ? ordered_json(value) : ordered_json(nullptr);
}

struct ResolvedBandwidth
{
  double h;
  std::string source;
};

ResolvedBandwidth resolve_bandwidth(const FunctionalSeries& series,
                                    EstimatorKind kind,
                                    const BandwidthOptions& opts)
{
  if (opts.bandwidth && opts.frames)
    throw InvalidArgument("give either --bandwidth or --bandwidth-frames");
  if (opts.bandwidth)
    return { *opts.bandwidth, "fixed" };
  if (opts.frames) {
    if (!(*opts.frames > 0.0))
      throw InvalidArgument("--bandwidth-frames must be positive");
    return { *opts.frames / static_cast<double>(series.size()), "frames" };
  }
  CvConfig cv;
  cv.k = opts.k;
  cv.grid_size = opts.grid_size;
  cv.estimator = kind;
  cv.fold_scheme = parse_fold_scheme(opts.fold_scheme);
  return { cross_validate(series, cv).best_h, "cross-validation" };
}

Estimate smooth_for_cli(EstimatorKind kind,
                        const FunctionalSeries& series,
                        double h,
                        bool nw_derivative_requested)
{
  const SmoothConfig cfg{ h, Kernel::quartic() };
  if (kind == EstimatorKind::NadarayaWatson) {
    Estimate est = nadaraya_watson(series, cfg);
    if (nw_derivative_requested)
      est = nw_derivative(std::move(est), series.size());
    return est;
  }
  return smooth_full(kind, series, cfg);
}

} // namespace

int run_simulate(const SimulateOptions& opts, const Provenance& prov)
{
  if (opts.format != "csv" && opts.format != "json")
    throw InvalidArgument("--format must be csv or json");
  if (opts.n.empty())
    throw InvalidArgument("--n needs at least one value");

  std::vector<EstimatorKind> estimators;
  for (const auto& name : opts.estimators)
    estimators.push_back(parse_estimator(name));

  CvConfig cv;
  cv.k = opts.k;
  cv.grid_size = opts.grid_size;
  cv.fold_scheme = parse_fold_scheme(opts.fold_scheme);

  SimSpec spec;
  spec.mean = parse_mean(opts.mean);
  spec.errors = { parse_error_kind(opts.errors), opts.burn_in };
  spec.m = opts.m;
  spec.reps = opts.reps;
  spec.master_seed = opts.seed;
  for (std::size_t n : opts.n) {
    spec.n = n;
    spec.validate();
    if (cv.k < 2 || static_cast<std::size_t>(cv.k) * 4 > n || cv.grid_size < 2)
      throw InvalidArgument("cross-validation needs 2 <= k <= n/4 and grid size >= 2");
  }

  ResultsTable combined;
  ordered_json configurations = ordered_json::array();
  for (std::size_t n : opts.n) {
    spec.n = n;
    const ResultsTable table = monte_carlo(spec, estimators, cv);
    ordered_json failures;
    for (const auto& row : table.rows)
      if (row.target == Target::Mean)
        failures[to_string(row.estimator)] = row.failures;
    configurations.push_back({ { "n", n }, { "failures", failures } });
    combined.rows.insert(combined.rows.end(), table.rows.begin(), table.rows.end());
    combined.failure_messages.insert(combined.failure_messages.end(),
                                     table.failure_messages.begin(),
                                     table.failure_messages.end());
  }

  const auto lines = provenance_lines(prov, opts.seed);
  const std::string body =
    opts.format == "csv" ? io::provenance(lines) + io::results_csv(combined, opts.timing)
                         : io::results_json(combined, opts.timing, lines);
  io::write_atomic(opts.out, body);

  ordered_json summary;
  summary["command"] = "simulate";
  summary["version"] = fts::version;
  summary["command_line"] = prov.command_line;
  summary["seed"] = opts.seed;
  summary["mean"] = opts.mean;
  summary["errors"] = opts.errors;
  summary["m"] = opts.m;
  summary["reps"] = opts.reps;
  summary["configurations"] = configurations;
  summary["failed_replications"] = combined.failure_messages.size();
  summary["failure_messages"] = combined.failure_messages;
  summary["results"] = opts.out;
  const std::string summary_path =
    opts.summary.empty() ? opts.out + ".summary.json" : opts.summary;
  io::write_atomic(summary_path, summary.dump(2) + "\n");

  std::cout << "wrote " << opts.out << " and " << summary_path << "\n";
  if (!combined.failure_messages.empty())
    std::cerr << combined.failure_messages.size()
              << " replication fits failed; see " << summary_path << "\n";
  return 0;
}

int run_smooth(const SmoothOptions& opts, const Provenance& prov)
{
  const FunctionalSeries series = io::read_series(opts.input);
  const EstimatorKind kind = parse_estimator(opts.estimator);
  const ResolvedBandwidth h = resolve_bandwidth(series, kind, opts.bandwidth);
  const Estimate est = smooth_for_cli(kind, series, h.h, opts.derivative);

  const auto header = io::provenance(provenance_lines(prov));
  const std::string mu_path = with_suffix(opts.out, "_mu.csv");
  io::write_atomic(mu_path, header + io::estimate_csv(est, false));
  ordered_json outputs{ { "mu", mu_path } };
  if (est.dmu_hat) {
    const std::string dmu_path = with_suffix(opts.out, "_dmu.csv");
    io::write_atomic(dmu_path, header + io::estimate_csv(est, true));
    outputs["dmu"] = dmu_path;
  }

  std::size_t interior = 0;
  for (auto flag : est.interior_mask)
    interior += flag;
  ordered_json summary;
  summary["command"] = "smooth";
  summary["version"] = fts::version;
  summary["command_line"] = prov.command_line;
  summary["estimator"] = to_string(kind);
  summary["bandwidth"] = h.h;
  summary["bandwidth_source"] = h.source;
  summary["n"] = series.size();
  summary["dim"] = series.dim();
  summary["interior_points"] = interior;
  summary["outputs"] = outputs;
  const std::string summary_path = with_suffix(opts.out, "_summary.json");
  io::write_atomic(summary_path, summary.dump(2) + "\n");
  std::cout << "bandwidth " << io::format_double(h.h) << " (" << h.source
            << "), wrote " << mu_path << "\n";
  return 0;
}

int run_cv(const CvOptions& opts, const Provenance& prov)
{
  const FunctionalSeries series = io::read_series(opts.input);
  CvConfig cfg;
  cfg.k = opts.k;
  cfg.grid_size = opts.grid_size;
  cfg.estimator = parse_estimator(opts.estimator);
  cfg.fold_scheme = parse_fold_scheme(opts.fold_scheme);
  const CvReport report = cross_validate(series, cfg);

  io::write_atomic(opts.out,
                   io::provenance(provenance_lines(prov)) + io::cv_csv(report));
  ordered_json scores = ordered_json::array();
  for (double s : report.scores)
    scores.push_back(finite_or_null(s));
  ordered_json summary;
  summary["command"] = "cv";
  summary["version"] = fts::version;
  summary["command_line"] = prov.command_line;
  summary["estimator"] = to_string(cfg.estimator);
  summary["k"] = cfg.k;
  summary["grid_size"] = cfg.grid_size;
  summary["fold_scheme"] = opts.fold_scheme;
  summary["n"] = series.size();
  summary["grid"] = report.grid;
  summary["scores"] = scores;
  summary["best_h"] = report.best_h;
  const std::string summary_path =
    opts.summary.empty() ? opts.out + ".json" : opts.summary;
  io::write_atomic(summary_path, summary.dump(2) + "\n");
  std::cout << "best bandwidth " << io::format_double(report.best_h) << "\n";
  return 0;
}

int run_analyze(const AnalyzeOptions& opts, const Provenance& prov)
{
  FunctionalSeries series = [&] {
    if (!opts.embed_stride)
      return io::read_series(opts.input);
    return sliding_embed(io::read_matrix(opts.input), *opts.embed_stride, opts.embed_m);
  }();
  const Norm norm = opts.norm ? io::parse_norm(*opts.norm) : series.norm();

  RowMatrix smoothed;
  std::string smoothing;
  if (!opts.smoothed.empty()) {
    smoothed = io::read_series(opts.smoothed).values();
    smoothing = "file " + opts.smoothed;
  } else {
    const EstimatorKind kind = parse_estimator(opts.estimator);
    const ResolvedBandwidth h = resolve_bandwidth(series, kind, opts.bandwidth);
    smoothed = smooth_mean(kind, series, { h.h, Kernel::quartic() },
                           std::span<const double>(series.times()))
                 .mu_hat;
    smoothing = std::string(to_string(kind)) + " h=" + io::format_double(h.h) +
                " (" + h.source + ")";
  }

  const std::vector<double> z = residual_norms(series.values(), smoothed, norm);
  const CusumResult cs = cusum(z);
  const auto peaks = detect_peaks(z, opts.peak_threshold);

  const auto lines = provenance_lines(prov);
  const std::string norms_path = with_suffix(opts.out, "_norms.csv");
  io::write_atomic(norms_path, io::provenance(lines) +
                                 io::vector_csv("residual_norm", z));

  std::string cusum_body = io::provenance(lines);
  cusum_body += "# argmax_index: " + std::to_string(cs.argmax_index) + "\n";
  cusum_body += "index,cusum,argmax\n";
  for (std::size_t k = 1; k <= cs.process.size(); ++k)
    cusum_body += std::to_string(k) + "," + io::format_double(cs.process[k - 1]) +
                  (k == cs.argmax_index ? ",1\n" : ",0\n");
  const std::string cusum_path = with_suffix(opts.out, "_cusum.csv");
  io::write_atomic(cusum_path, cusum_body);

  ordered_json ranges = ordered_json::array();
  for (const auto& [first, last] : peaks)
    ranges.push_back({ { "first", first + 1 }, { "last", last + 1 } });
  ordered_json report;
  report["command"] = "analyze";
  report["version"] = fts::version;
  report["command_line"] = prov.command_line;
  report["n"] = series.size();
  report["norm"] = io::to_string(norm);
  report["smoothing"] = smoothing;
  report["cusum_argmax_index"] = cs.argmax_index;
  report["cusum_max"] = cs.max_value;
  report["threshold_multiplier"] = opts.peak_threshold;
  report["peak_index_base"] = 1;
  report["peaks"] = ranges;
  const std::string peaks_path = with_suffix(opts.out, "_peaks.json");
  io::write_atomic(peaks_path, report.dump(2) + "\n");

  std::cout << "CUSUM argmax at index " << cs.argmax_index << ", " << peaks.size()
            << " peak range(s)\n";
  return 0;
}

} // namespace fts::cli
