#include "softblock/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace softblock {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  return *end == '\0' && std::isfinite(out);
}

std::vector<std::vector<double>> load_table(const std::string& path,
                                            bool has_header) {
  std::ifstream in(path);
  if (!in) throw MissingFile(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  bool skipped_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      ++lineno;
      continue;
    }
    if (has_header && !skipped_header) {
      skipped_header = true;
      ++lineno;
      continue;
    }
    const auto fields = split_fields(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v;
      if (!parse_double(fields[c], v)) {
        throw NonNumericField("row " + std::to_string(lineno) + ", col " +
                              std::to_string(c) + ": '" + fields[c] + "'");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw RaggedRows("row " + std::to_string(lineno) + " has " +
                       std::to_string(row.size()) + " fields, expected " +
                       std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
    ++lineno;
  }
  return rows;
}

bool line_is_numeric(const std::string& line) {
  for (const auto& f : split_fields(line)) {
    double v;
    if (!parse_double(f, v)) return false;
  }
  return true;
}

bool file_has_header(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile(path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    return !line_is_numeric(line);
  }
  return false;
}

void format_value(char* buf, std::size_t len, double v) {
  std::snprintf(buf, len, "%.17g", v);
}

}  // namespace

CovariateMatrix load_covariates(const std::string& path, bool has_header) {
  const auto rows = load_table(path, has_header);
  if (rows.empty()) throw InvalidData("empty covariate file: " + path);
  MatrixXd m(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = rows[r][c];
    }
  }
  return CovariateMatrix::make(std::move(m));
}

void write_covariates(const CovariateMatrix& X, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MissingFile("cannot open for writing: " + path);
  char buf[40];
  for (Eigen::Index r = 0; r < X.n(); ++r) {
    for (Eigen::Index c = 0; c < X.dim(); ++c) {
      format_value(buf, sizeof buf, X.values(r, c));
      out << buf;
      if (c + 1 < X.dim()) out << ',';
    }
    out << '\n';
  }
}

OutcomeVector load_outcomes(const std::string& path) {
  const auto rows = load_table(path, file_has_header(path));
  VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != 1) {
      throw InvalidData("outcomes file must have one column: " + path);
    }
    y[static_cast<Eigen::Index>(r)] = rows[r][0];
  }
  return OutcomeVector::make(std::move(y));
}

Assignment load_assignment(const std::string& path) {
  const auto rows = load_table(path, file_has_header(path));
  VectorXi a(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    // single column: arm; multiple columns: (unit_index, arm, ...)
    const double v = rows[r].size() == 1 ? rows[r][0] : rows[r][1];
    a[static_cast<Eigen::Index>(r)] = static_cast<int>(v);
  }
  return Assignment::make(std::move(a));
}

StandardizeResult standardize(const CovariateMatrix& X) {
  StandardizeResult res;
  MatrixXd out = X.values;
  const double n = static_cast<double>(X.n());
  for (Eigen::Index c = 0; c < X.dim(); ++c) {
    const double mean = out.col(c).mean();
    const double var =
        (out.col(c).array() - mean).square().sum() / (n - 1.0);
    if (var > 0.0) {
      out.col(c) = (out.col(c).array() - mean) / std::sqrt(var);
    } else {
      res.constant_columns.push_back(static_cast<int>(c));
    }
  }
  res.X = CovariateMatrix{std::move(out)};
  return res;
}

}  // namespace softblock
