#pragma once

#include <Eigen/Dense>

#include "softblock/error.hpp"

namespace softblock {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::VectorXi;

// n x D matrix of pre-treatment covariates, one row per unit.
struct CovariateMatrix {
  MatrixXd values;

  Eigen::Index n() const { return values.rows(); }
  Eigen::Index dim() const { return values.cols(); }

  // Validating constructor: finite entries, n >= 2, D >= 1.
  static CovariateMatrix make(MatrixXd m);
};

struct OutcomeVector {
  VectorXd y;

  Eigen::Index n() const { return y.size(); }

  static OutcomeVector make(VectorXd v);
};

// Binary treatment assignment; a_i in {0,1}, u = 2a - 1 in {-1,1}.
struct Assignment {
  VectorXi a;

  Eigen::Index n() const { return a.size(); }
  VectorXd u() const {
    return (2.0 * a.cast<double>().array() - 1.0).matrix();
  }
  int treated() const { return a.sum(); }
  int control() const { return static_cast<int>(a.size()) - a.sum(); }

  static Assignment make(VectorXi v);
};

}  // namespace softblock
