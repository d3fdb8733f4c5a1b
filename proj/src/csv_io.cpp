#include "ridgehunt/csv_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ridgehunt/errors.hpp"

namespace ridgehunt {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool parse_number(const std::string& s, double* out) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) return false;
  *out = v;
  return true;
}

std::string join_lines(const std::vector<int>& lines) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(lines.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i) out += ", ";
    out += std::to_string(lines[i]);
  }
  if (lines.size() > shown) out += ", ...";
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  // round-trip precision: 17 significant digits always re-parses exactly
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CloudReadResult read_cloud(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("read cloud: cannot open " + path);

  struct Row {
    int line = 0;
    std::vector<std::string> cells;
  };
  std::vector<Row> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    rows.push_back({line_no, split_csv_line(t)});
  }
  if (rows.empty()) throw io_error("read cloud: no data rows in " + path);

  CloudReadResult out;
  std::size_t first = 0;
  {
    // header: first row whose cells are all non-numeric
    bool any_numeric = false;
    double tmp;
    for (const auto& c : rows[0].cells) {
      if (parse_number(c, &tmp)) any_numeric = true;
    }
    if (!any_numeric) {
      out.header = rows[0].cells;
      first = 1;
      if (rows.size() == 1) throw io_error("read cloud: header but no data rows in " + path);
    }
  }

  const std::size_t width = rows[first].cells.size();
  if (width == 0) throw io_error("read cloud: empty first data row");
  std::vector<int> ragged;
  for (std::size_t r = first; r < rows.size(); ++r) {
    if (rows[r].cells.size() != width) ragged.push_back(rows[r].line);
  }
  if (!ragged.empty()) {
    throw io_error("read cloud: ragged rows (expected " + std::to_string(width) +
                   " columns) at line(s) " + join_lines(ragged));
  }

  double tmp;
  const bool has_labels = width > 1 && !parse_number(rows[first].cells[width - 1], &tmp);
  const std::size_t dims = has_labels ? width - 1 : width;
  if (dims == 0) throw io_error("read cloud: no numeric columns");

  Eigen::MatrixXd pts(rows.size() - first, dims);
  std::vector<int> bad;
  for (std::size_t r = first; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < dims; ++c) {
      double v;
      if (!parse_number(rows[r].cells[c], &v)) {
        bad.push_back(rows[r].line);
        v = 0.0;
      }
      pts(Eigen::Index(r - first), Eigen::Index(c)) = v;
    }
    if (has_labels) out.labels.push_back(rows[r].cells[width - 1]);
  }
  if (!bad.empty()) {
    throw io_error("read cloud: non-numeric cell at line(s) " + join_lines(bad));
  }
  out.cloud = PointCloud(std::move(pts));
  return out;
}

void write_cloud(const std::string& path, const PointCloud& cloud,
                 const std::vector<std::string>* labels,
                 const std::vector<std::string>* header) {
  if (labels && static_cast<Eigen::Index>(labels->size()) != cloud.size()) {
    throw config_error("write cloud: label count mismatch");
  }
  std::ofstream out(path);
  if (!out) throw io_error("write cloud: cannot write " + path);
  if (header) {
    for (std::size_t i = 0; i < header->size(); ++i) {
      if (i) out << ",";
      out << (*header)[i];
    }
    out << "\n";
  }
  const auto& m = cloud.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ",";
      out << format_double(m(r, c));
    }
    if (labels) out << "," << (*labels)[r];
    out << "\n";
  }
  if (!out) throw io_error("write cloud: write failure on " + path);
}

PointCloud transform_column(const PointCloud& cloud, int column, const std::string& transform) {
  if (column < 0 || column >= cloud.dim()) {
    throw config_error("transform column: column out of range");
  }
  Eigen::MatrixXd m = cloud.matrix();
  std::vector<int> bad;
  auto apply = [&](auto&& fn, auto&& valid) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const double z = m(r, column);
      if (!valid(z)) {
        bad.push_back(static_cast<int>(r));
        continue;
      }
      m(r, column) = fn(z);
    }
  };
  if (transform == "identity") {
    return cloud;
  } else if (transform == "neg-log-neg") {
    apply([](double z) { return -std::log(-z); }, [](double z) { return z < 0.0; });
  } else if (transform == "log") {
    apply([](double z) { return std::log(z); }, [](double z) { return z > 0.0; });
  } else {
    throw config_error("transform column: unknown transform '" + transform + "'");
  }
  if (!bad.empty()) {
    throw numeric_error("transform column: '" + transform + "' undefined at row(s) " +
                        join_lines(bad));
  }
  return PointCloud(std::move(m));
}

}  // namespace ridgehunt
