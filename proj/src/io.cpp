#include "fts/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"

#include "fts/errors.hpp"

namespace fts::io {

namespace {

std::string trim(const std::string& s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line)
{
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ','))
    cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',')
    cells.emplace_back();
  return cells;
}

std::optional<double> parse_number(const std::string& cell)
{
  if (cell.empty())
    return std::nullopt;
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  if (*begin == '+')
    ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    return std::nullopt;
  return value;
}

std::string describe(const std::filesystem::path& path, std::size_t line)
{
  return path.string() + ":" + std::to_string(line);
}

} // namespace

CsvTable read_csv(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open " + path.string());

  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty() || content.front() == '#')
      continue;
    const auto cells = split(content);
    std::vector<double> row;
    row.reserve(cells.size());
    bool numeric = true;
    for (const auto& cell : cells) {
      const auto value = parse_number(cell);
      if (!value) {
        numeric = false;
        break;
      }
      row.push_back(*value);
    }
    if (!numeric) {
      if (rows.empty() && table.header.empty()) {
        table.header = cells;
        continue;
      }
      throw InputError("non-numeric cell at " + describe(path, line_no));
    }
    for (double v : row)
      if (!std::isfinite(v))
        throw InputError("non-finite value at " + describe(path, line_no));
    const std::size_t width =
      !rows.empty() ? rows.front().size() : table.header.size();
    if (width != 0 && row.size() != width)
      throw InputError("expected " + std::to_string(width) + " columns at " +
                       describe(path, line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw InputError(path.string() + " holds no data rows");

  table.data = RowMatrix(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      table.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
        rows[i][j];
  return table;
}

FunctionalSeries read_series(const std::filesystem::path& path)
{
  CsvTable table = read_csv(path);
  if (table.data.rows() < 2)
    throw InputError(path.string() + " needs at least two rows");

  std::vector<Eigen::Index> value_cols;
  std::optional<Eigen::Index> time_col;
  for (Eigen::Index j = 0; j < table.data.cols(); ++j) {
    const std::string name =
      table.header.empty() ? std::string{} : table.header[j];
    if (name == "t")
      time_col = j;
    else if (name != "interior")
      value_cols.push_back(j);
  }
  if (value_cols.empty())
    throw InputError(path.string() + " has no value columns");

  RowMatrix values(table.data.rows(),
                   static_cast<Eigen::Index>(value_cols.size()));
  for (std::size_t k = 0; k < value_cols.size(); ++k)
    values.col(static_cast<Eigen::Index>(k)) = table.data.col(value_cols[k]);

  ValueGrid grid;
  Norm norm = Norm::L2;
  std::filesystem::path sidecar = path;
  sidecar += ".json";
  if (std::filesystem::exists(sidecar)) {
    std::ifstream in(sidecar);
    nlohmann::json meta;
    try {
      meta = nlohmann::json::parse(in);
      for (const auto& [key, value] : meta.items())
        if (key != "d" && key != "m" && key != "norm")
          throw InputError("unknown key '" + key + "' in " + sidecar.string());
      grid.curves = meta.value("d", std::size_t{ 1 });
      grid.points = meta.value(
        "m", static_cast<std::size_t>(values.cols()) / std::max<std::size_t>(grid.curves, 1));
      if (meta.contains("norm"))
        norm = parse_norm(meta.at("norm").get<std::string>());
    } catch (const nlohmann::json::exception& err) {
      throw InputError("malformed " + sidecar.string() + ": " + err.what());
    } catch (const InvalidArgument& err) {
      throw InputError(err.what());
    }
  }

  try {
    if (time_col) {
      std::vector<double> times(static_cast<std::size_t>(table.data.rows()));
      for (Eigen::Index i = 0; i < table.data.rows(); ++i)
        times[static_cast<std::size_t>(i)] = table.data(i, *time_col);
      return { std::move(times), std::move(values), grid, norm };
    }
    return FunctionalSeries::equidistant(std::move(values), grid, norm);
  } catch (const InvalidArgument& err) {
    throw InputError(path.string() + ": " + err.what());
  }
}

RowMatrix read_matrix(const std::filesystem::path& path)
{
  return read_csv(path).data;
}

std::string format_double(double value)
{
  char buffer[32];
  const int len = std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return std::string(buffer, static_cast<std::size_t>(len));
}

void write_atomic(const std::filesystem::path& path, const std::string& content)
{
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw InputError("cannot write " + tmp.string());
    out << content;
    if (!out)
      throw InputError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw InputError("cannot move " + tmp.string() + " to " + path.string() +
                     ": " + ec.message());
}

std::string provenance(const std::vector<std::string>& lines)
{
  std::string out;
  for (const auto& line : lines)
    out += "# " + line + "\n";
  return out;
}

namespace {

void append_row(std::string& out, const double* data, Eigen::Index cols)
{
  for (Eigen::Index j = 0; j < cols; ++j) {
    out += ',';
    out += format_double(data[j]);
  }
  out += '\n';
}

std::string value_header(Eigen::Index cols)
{
  std::string header;
  for (Eigen::Index j = 0; j < cols; ++j)
    header += ",x" + std::to_string(j);
  return header;
}

} // namespace

std::string series_csv(const FunctionalSeries& series)
{
  const RowMatrix& values = series.values();
  std::string out = "t" + value_header(values.cols()) + "\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    out += format_double(series.times()[static_cast<std::size_t>(i)]);
    append_row(out, values.row(i).data(), values.cols());
  }
  return out;
}

std::string estimate_csv(const Estimate& est, bool derivative)
{
  if (derivative && !est.dmu_hat)
    throw InvalidArgument("estimate carries no derivative");
  const RowMatrix& values = derivative ? *est.dmu_hat : est.mu_hat;
  std::string out = "t,interior" + value_header(values.cols()) + "\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    out += format_double(est.times[k]);
    out += est.interior_mask[k] ? ",1" : ",0";
    append_row(out, values.row(i).data(), values.cols());
  }
  return out;
}

std::string results_csv(const ResultsTable& table, bool with_timing)
{
  std::string out = "estimator,target,n,m,reps,mean_mse,sd_mse,mean_mae,"
                    "sd_mae,mean_fit_ms,mean_h,failures\n";
  for (const auto& row : table.rows) {
    out += std::string(to_string(row.estimator)) + "," + to_string(row.target) +
           "," + std::to_string(row.n) + "," + std::to_string(row.m) + "," +
           std::to_string(row.reps) + "," + format_double(row.mean_mse) + "," +
           format_double(row.sd_mse) + "," + format_double(row.mean_mae) + "," +
           format_double(row.sd_mae) + "," +
           (with_timing ? format_double(row.mean_fit_ms) : std::string("NA")) +
           "," + format_double(row.mean_bandwidth) + "," +
           std::to_string(row.failures) + "\n";
  }
  return out;
}

std::string results_json(const ResultsTable& table,
                         bool with_timing,
                         const std::vector<std::string>& provenance_lines)
{
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r;
    r["estimator"] = to_string(row.estimator);
    r["target"] = to_string(row.target);
    r["n"] = row.n;
    r["m"] = row.m;
    r["reps"] = row.reps;
    r["mean_mse"] = row.mean_mse;
    r["sd_mse"] = row.sd_mse;
    r["mean_mae"] = row.mean_mae;
    r["sd_mae"] = row.sd_mae;
    if (with_timing)
      r["mean_fit_ms"] = row.mean_fit_ms;
    else
      r["mean_fit_ms"] = nullptr;
    r["mean_h"] = row.mean_bandwidth;
    r["failures"] = row.failures;
    rows.push_back(std::move(r));
  }
  nlohmann::ordered_json doc;
  doc["provenance"] = provenance_lines;
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string cv_csv(const CvReport& report)
{
  std::string out = "h,score,best\n";
  for (std::size_t g = 0; g < report.grid.size(); ++g) {
    out += format_double(report.grid[g]) + "," +
           (std::isfinite(report.scores[g]) ? format_double(report.scores[g])
                                            : std::string("inf")) +
           (report.grid[g] == report.best_h ? ",1\n" : ",0\n");
  }
  return out;
}

std::string vector_csv(const std::string& name, const std::vector<double>& values)
{
  std::string out = "index," + name + "\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    out += std::to_string(i + 1) + "," + format_double(values[i]) + "\n";
  return out;
}

Norm parse_norm(const std::string& name)
{
  if (name == "l1" || name == "L1")
    return Norm::L1;
  if (name == "l2" || name == "L2")
    return Norm::L2;
  if (name == "sup" || name == "Sup")
    return Norm::Sup;
  throw InvalidArgument("unknown norm '" + name + "' (expected l1, l2, sup)");
}

const char* to_string(Norm norm)
{
  switch (norm) {
    case Norm::L1: return "l1";
    case Norm::L2: return "l2";
    case Norm::Sup: return "sup";
  }
  return "?";
}

} // namespace fts::io
