#pragma once

#include <Eigen/Core>

namespace fts {

//! Row-major dense matrix; one row per time point, one column per value coordinate.
using RowMatrix =
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr const char* version = "0.3.0";

} // namespace fts
