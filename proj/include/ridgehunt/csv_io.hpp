#pragma once

#include <string>
#include <vector>

#include "ridgehunt/point_cloud.hpp"

namespace ridgehunt {

/// Parsed CSV cloud. Rows are points; '#' lines are comments; a first row
/// with no numeric cell is treated as a header; a non-numeric trailing
/// column is read as per-point labels.
struct CloudReadResult {
  PointCloud cloud;
  std::vector<std::string> labels;  // empty when the file had no label column
  std::vector<std::string> header;  // empty when the file had no header
};

CloudReadResult read_cloud(const std::string& path);

void write_cloud(const std::string& path, const PointCloud& cloud,
                 const std::vector<std::string>* labels = nullptr,
                 const std::vector<std::string>* header = nullptr);

/// Apply a named transform ("identity", "neg-log-neg" for z -> -log(-z),
/// or "log") to one column; domain violations are reported with row numbers.
PointCloud transform_column(const PointCloud& cloud, int column, const std::string& transform);

/// Shortest decimal rendering that round-trips a double exactly.
std::string format_double(double v);

}  // namespace ridgehunt
