#include "fts/series.hpp"

#include <cmath>
#include <utility>

#include "fts/errors.hpp"

namespace fts {

std::vector<double> equidistant_times(std::size_t n)
{
  std::vector<double> times(n);
  for (std::size_t i = 0; i < n; ++i)
    times[i] = static_cast<double>(i + 1) / static_cast<double>(n);
  return times;
}

FunctionalSeries::FunctionalSeries(std::vector<double> times,
                                   RowMatrix values,
                                   ValueGrid grid,
                                   Norm norm)
  : times_(std::move(times))
  , values_(std::move(values))
  , grid_(grid)
  , norm_(norm)
{
  if (times_.size() != static_cast<std::size_t>(values_.rows()))
    throw InvalidArgument("series needs one time stamp per row");
  if (values_.cols() == 0)
    throw InvalidArgument("series values have no columns");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    const double t = times_[i];
    if (!(t >= 0.0 && t <= 1.0))
      throw InvalidArgument("time stamps must lie in [0, 1]");
    if (i > 0 && !(t > times_[i - 1]))
      throw InvalidArgument("time stamps must be strictly increasing");
  }
  if (!values_.allFinite())
    throw InvalidArgument("series values must be finite");
  if (grid_ == ValueGrid{})
    grid_.points = static_cast<std::size_t>(values_.cols());
  if (grid_.dim() != dim())
    throw InvalidArgument("value grid does not match the number of columns");
}

FunctionalSeries FunctionalSeries::equidistant(RowMatrix values,
                                               ValueGrid grid,
                                               Norm norm)
{
  auto times = equidistant_times(static_cast<std::size_t>(values.rows()));
  return { std::move(times), std::move(values), grid, norm };
}

FunctionalSeries FunctionalSeries::subset(std::span<const std::size_t> rows) const
{
  std::vector<double> times;
  times.reserve(rows.size());
  RowMatrix values(static_cast<Eigen::Index>(rows.size()), values_.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= size())
      throw InvalidArgument("row index out of range");
    times.push_back(times_[rows[k]]);
    values.row(static_cast<Eigen::Index>(k)) =
      values_.row(static_cast<Eigen::Index>(rows[k]));
  }
  return { std::move(times), std::move(values), grid_, norm_ };
}

} // namespace fts
