#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fts::cli {

//! Free-form provenance: the command line as typed, minus the program path.
struct Provenance
{
  std::string command_line;
};

struct SimulateOptions
{
  std::string mean{ "mu1" };
  std::string errors{ "bm" };
  std::vector<std::size_t> n{ 100 };
  std::size_t m{ 100 };
  std::size_t reps{ 100 };
  std::uint64_t seed{ 0 };
  int burn_in{ 50 };
  std::vector<std::string> estimators{ "ll", "jackknife", "nw" };
  int k{ 5 };
  int grid_size{ 20 };
  std::string fold_scheme{ "interleaved" };
  std::string out{ "results.csv" };
  std::string summary;
  std::string format{ "csv" };
  bool timing{ false };
};

//! Bandwidth given directly, in frames (h = frames / n), or chosen by
//! cross-validation when neither is set.
struct BandwidthOptions
{
  std::optional<double> bandwidth;
  std::optional<double> frames;
  int k{ 5 };
  int grid_size{ 20 };
  std::string fold_scheme{ "interleaved" };
};

struct SmoothOptions
{
  std::string input;
  std::string estimator{ "ll" };
  BandwidthOptions bandwidth;
  bool derivative{ false };
  std::string out{ "smoothed" };
};

struct CvOptions
{
  std::string input;
  std::string estimator{ "ll" };
  int k{ 5 };
  int grid_size{ 20 };
  std::string fold_scheme{ "interleaved" };
  std::string out{ "cv.csv" };
  std::string summary;
};

struct AnalyzeOptions
{
  std::string input;
  std::string smoothed;
  std::string estimator{ "ll" };
  BandwidthOptions bandwidth;
  std::optional<std::string> norm;
  double peak_threshold{ 5.0 };
  std::optional<std::size_t> embed_stride;
  std::size_t embed_m{ 50 };
  std::string out{ "analysis" };
};

int run_simulate(const SimulateOptions& opts, const Provenance& prov);
int run_smooth(const SmoothOptions& opts, const Provenance& prov);
int run_cv(const CvOptions& opts, const Provenance& prov);
int run_analyze(const AnalyzeOptions& opts, const Provenance& prov);

} // namespace fts::cli
