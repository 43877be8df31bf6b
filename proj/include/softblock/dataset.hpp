#pragma once

#include <string>
#include <vector>

#include "softblock/types.hpp"

namespace softblock {

// Comma-separated, UTF-8, decimal point '.', optional single header row.
CovariateMatrix load_covariates(const std::string& path, bool has_header);
void write_covariates(const CovariateMatrix& X, const std::string& path);

OutcomeVector load_outcomes(const std::string& path);

// Accepts either a single "arm" column or the (unit_index, arm, ...) layout
// written by the design command. A non-numeric first line is treated as a
// header and skipped.
Assignment load_assignment(const std::string& path);

struct StandardizeResult {
  CovariateMatrix X;
  std::vector<int> constant_columns;  // passed through unchanged
};

// Each varying column mapped to sample mean 0, sample sd 1 (n-1 denominator).
StandardizeResult standardize(const CovariateMatrix& X);

}  // namespace softblock
