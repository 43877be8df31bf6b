#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "softblock/designs.hpp"
#include "softblock/estimators.hpp"
#include "softblock/types.hpp"

namespace softblock {

enum class Dgp { Linear, QuickBlock, Sinusoidal, TwoCircles };

std::string dgp_name(Dgp d);
Dgp dgp_from_name(const std::string& name);

enum class Estimator { DiffInMeans, Lin, DesignBased, Knn, Pairs };

std::string estimator_name(Estimator e);
Estimator estimator_from_name(const std::string& name);

struct SimData {
  CovariateMatrix X;
  VectorXd y0, y1;  // both potential outcomes
  VectorXd tau;     // true ITE from the noiseless mean functions
  Dgp dgp = Dgp::Linear;
  std::uint64_t seed = 0;
};

SimData generate(Dgp dgp, int n, std::uint64_t seed);

struct RunOptions {
  bool standardize = true;
  double bandwidth = 0.0;  // <= 0: median heuristic
  double accept_frac = 0.01;
  int pilot = 500;
  int k = 5;
};

struct ReplicationResult {
  Method method = Method::Bernoulli;
  Estimator estimator = Estimator::DiffInMeans;
  int n = 0;
  double ate_error = 0.0;
  VectorXd ite_sq_errors;
  double design_ms = 0.0;
  double estimate_ms = 0.0;
};

ReplicationResult run_replication(Dgp dgp, int n, Method method,
                                  Estimator estimator, std::uint64_t seed,
                                  const RunOptions& opts = {});

struct BenchmarkConfig {
  std::vector<Dgp> dgps;
  std::vector<Method> methods;
  std::vector<Estimator> estimators;
  std::vector<int> n_grid;
  int reps = 1;
  std::uint64_t seed = 0;
  RunOptions run;
  double norm_exponent = 0.0;  // mse/mise multiplied by n^exponent
  bool record_timings = true;  // false pins the timing column to 0
  bool serial = false;         // serialize replications (timing studies)
};

struct BenchmarkRow {
  Dgp dgp = Dgp::Linear;
  Method method = Method::Bernoulli;
  Estimator estimator = Estimator::DiffInMeans;
  int n = 0;
  int reps = 0;
  double mse_ate = 0.0;
  double mise_ite = 0.0;
  double mean_design_ms = 0.0;
  std::string error;  // empty on success
};

struct BenchmarkTable {
  std::vector<BenchmarkRow> rows;
  double norm_exponent = 0.0;
};

BenchmarkTable run_benchmark(const BenchmarkConfig& config,
                             std::ostream* progress = nullptr);

void write_benchmark_csv(const BenchmarkTable& table, std::ostream& out);

struct RuntimePoint {
  int n = 0;
  double mean_ms = 0.0;
};

struct RuntimeScaling {
  std::vector<RuntimePoint> points;
  double loglog_slope = 0.0;  // least-squares fit of log(ms) on log(n)
};

RuntimeScaling runtime_scaling(Method method, const std::vector<int>& n_grid,
                               int reps, std::uint64_t seed,
                               Dgp dgp = Dgp::TwoCircles);

}  // namespace softblock
