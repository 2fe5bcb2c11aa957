#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fts/analysis.hpp"
#include "fts/bandwidth.hpp"
#include "fts/estimators.hpp"
#include "fts/series.hpp"
#include "fts/simulation.hpp"
#include "fts/types.hpp"

namespace fts::io {

//! Numeric CSV table. Lines starting with '#' are comments. A first line
//! holding any non-numeric cell is a header.
struct CsvTable
{
  std::vector<std::string> header;
  RowMatrix data;
};

CsvTable read_csv(const std::filesystem::path& path);

//! Series file: rows are time points. With a header, a column named `t`
//! holds the time stamps and a column named `interior` is ignored; without
//! one every column is a value and the times are i/n. A sidecar
//! `<path>.json` may set {"d", "m", "norm"}. Throws InputError.
FunctionalSeries read_series(const std::filesystem::path& path);

//! Signal matrix without time column (rows = samples, columns = channels).
RowMatrix read_matrix(const std::filesystem::path& path);

//! Formats with 17 significant digits, so doubles round-trip exactly.
std::string format_double(double value);

//! Writes to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

//! `# ` prefixed provenance lines.
std::string provenance(const std::vector<std::string>& lines);

std::string series_csv(const FunctionalSeries& series);

//! Columns t, interior, x0, x1, ...; `derivative` selects dmu_hat.
std::string estimate_csv(const Estimate& est, bool derivative);

std::string results_csv(const ResultsTable& table, bool with_timing);
//! {"provenance": [...], "rows": [...]}
std::string results_json(const ResultsTable& table,
                         bool with_timing,
                         const std::vector<std::string>& provenance_lines);

std::string cv_csv(const CvReport& report);

std::string vector_csv(const std::string& name, const std::vector<double>& values);

Norm parse_norm(const std::string& name);
const char* to_string(Norm norm);

} // namespace fts::io
