#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "softblock/dataset.hpp"
#include "softblock/rng.hpp"

using namespace softblock;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = "dataset_test_" + std::to_string(counter++) + ".csv";
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("load_covariates parses a plain 3x2 file") {
  TempFile f("1,2\n3,4\n5,6\n");
  const auto X = load_covariates(f.path, false);
  REQUIRE(X.n() == 3);
  REQUIRE(X.dim() == 2);
  CHECK(X.values(0, 0) == 1);
  CHECK(X.values(1, 1) == 4);
  CHECK(X.values(2, 0) == 5);
}

TEST_CASE("load_covariates skips a header row") {
  TempFile f("x1,x2\n1,2\n3,4\n");
  const auto X = load_covariates(f.path, true);
  CHECK(X.n() == 2);
  CHECK(X.values(0, 1) == 2);
}

TEST_CASE("load_covariates rejects non-numeric fields") {
  TempFile f("1,2\n3,4\n5,abc\n");
  CHECK_THROWS_AS(load_covariates(f.path, false), NonNumericField);
}

TEST_CASE("load_covariates rejects ragged rows") {
  TempFile f("1,2\n3,4,5\n");
  CHECK_THROWS_AS(load_covariates(f.path, false), RaggedRows);
}

TEST_CASE("load_covariates reports missing files") {
  CHECK_THROWS_AS(load_covariates("does_not_exist.csv", false), MissingFile);
}

TEST_CASE("standardize maps a varying column to mean 0, sd 1") {
  MatrixXd m(3, 1);
  m << 1, 2, 3;
  const auto res = standardize(CovariateMatrix::make(m));
  CHECK(res.X.values.col(0).mean() == doctest::Approx(0.0).epsilon(1e-12));
  const double var = res.X.values.col(0).squaredNorm() / 2.0;
  CHECK(var == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.constant_columns.empty());
}

TEST_CASE("standardize passes constant columns through with a warning") {
  MatrixXd m(3, 2);
  m << 5, 1, 5, 2, 5, 3;
  const auto res = standardize(CovariateMatrix::make(m));
  CHECK(res.X.values.col(0) == m.col(0));
  REQUIRE(res.constant_columns.size() == 1);
  CHECK(res.constant_columns[0] == 0);
}

TEST_CASE("standardize handles each column independently") {
  Rng rng(11);
  MatrixXd m(20, 2);
  for (int i = 0; i < 20; ++i) {
    m(i, 0) = 3.0 + 2.0 * rng.normal();
    m(i, 1) = -1.0 + 0.5 * rng.normal();
  }
  const auto res = standardize(CovariateMatrix::make(m));
  for (int c = 0; c < 2; ++c) {
    const double mean = m.col(c).mean();
    const double sd = std::sqrt((m.col(c).array() - mean).square().sum() / 19.0);
    for (int i = 0; i < 20; ++i) {
      CHECK(res.X.values(i, c) ==
            doctest::Approx((m(i, c) - mean) / sd).epsilon(1e-12));
    }
  }
}

TEST_CASE("standardize is idempotent") {
  Rng rng(7);
  MatrixXd m(30, 3);
  for (int i = 0; i < 30; ++i) {
    for (int c = 0; c < 3; ++c) m(i, c) = rng.normal() * (c + 1);
  }
  const auto once = standardize(CovariateMatrix::make(m));
  const auto twice = standardize(once.X);
  CHECK((twice.X.values - once.X.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("write/load round-trips finite matrices") {
  Rng rng(3);
  MatrixXd m(8, 3);
  for (int i = 0; i < 8; ++i) {
    for (int c = 0; c < 3; ++c) m(i, c) = rng.normal() * 1e3;
  }
  const CovariateMatrix X{m};
  TempFile f("");
  write_covariates(X, f.path);
  const auto back = load_covariates(f.path, false);
  CHECK(back.values == X.values);
}

TEST_CASE("invalid covariate matrices are rejected") {
  MatrixXd one_row(1, 2);
  one_row << 1, 2;
  CHECK_THROWS_AS(CovariateMatrix::make(one_row), InvalidData);

  MatrixXd with_nan(2, 1);
  with_nan << 1, std::nan("");
  CHECK_THROWS_AS(CovariateMatrix::make(with_nan), InvalidData);
}

TEST_CASE("load_assignment accepts both layouts") {
  TempFile bare("1\n0\n1\n");
  const auto a1 = load_assignment(bare.path);
  CHECK(a1.treated() == 2);

  TempFile full("unit_index,arm,component_id\n0,1,0\n1,0,0\n2,1,1\n");
  const auto a2 = load_assignment(full.path);
  CHECK(a2.a == a1.a);
}
