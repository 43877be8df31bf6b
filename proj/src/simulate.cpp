#include "softblock/simulate.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <thread>
#include <ostream>
#include <string>
#include <vector>

#include "softblock/dataset.hpp"

namespace softblock {

std::string dgp_name(Dgp d) {
  switch (d) {
    case Dgp::Linear: return "linear";
    case Dgp::QuickBlock: return "quickblock";
    case Dgp::Sinusoidal: return "sinusoidal";
    case Dgp::TwoCircles: return "twocircles";
  }
  return "?";
}

Dgp dgp_from_name(const std::string& name) {
  if (name == "linear") return Dgp::Linear;
  if (name == "quickblock") return Dgp::QuickBlock;
  if (name == "sinusoidal") return Dgp::Sinusoidal;
  if (name == "twocircles") return Dgp::TwoCircles;
  throw UnknownDgp(name);
}

std::string estimator_name(Estimator e) {
  switch (e) {
    case Estimator::DiffInMeans: return "dim";
    case Estimator::Lin: return "lin";
    case Estimator::DesignBased: return "design";
    case Estimator::Knn: return "knn";
    case Estimator::Pairs: return "pairs";
  }
  return "?";
}

Estimator estimator_from_name(const std::string& name) {
  if (name == "dim") return Estimator::DiffInMeans;
  if (name == "lin") return Estimator::Lin;
  if (name == "design") return Estimator::DesignBased;
  if (name == "knn") return Estimator::Knn;
  if (name == "pairs") return Estimator::Pairs;
  throw InvalidData("unknown estimator: " + name);
}

SimData generate(Dgp dgp, int n, std::uint64_t seed) {
  if (n < 2) throw InvalidData("n must be >= 2");
  Rng rng(seed);
  SimData data;
  data.dgp = dgp;
  data.seed = seed;
  switch (dgp) {
    case Dgp::Linear:
    case Dgp::Sinusoidal: {
      const int d = 4;
      MatrixXd X(n, d);
      for (int i = 0; i < n; ++i) {
        for (int c = 0; c < d; ++c) X(i, c) = rng.normal();
      }
      VectorXd beta(d);
      for (int c = 0; c < d; ++c) beta[c] = rng.uniform();
      VectorXd mean = X * beta;
      if (dgp == Dgp::Sinusoidal) mean = mean.array().sin();
      data.y0.resize(n);
      data.y1.resize(n);
      for (int i = 0; i < n; ++i) {
        data.y0[i] = mean[i] + rng.normal() / 10.0;
        data.y1[i] = 1.0 + mean[i] + rng.normal() / 10.0;
      }
      data.tau = VectorXd::Ones(n);
      data.X = CovariateMatrix{std::move(X)};
      break;
    }
    case Dgp::QuickBlock: {
      const int d = 2;
      MatrixXd X(n, d);
      for (int i = 0; i < n; ++i) {
        for (int c = 0; c < d; ++c) X(i, c) = rng.uniform(0.0, 10.0);
      }
      data.y0.resize(n);
      data.y1.resize(n);
      for (int i = 0; i < n; ++i) {
        data.y0[i] = X(i, 0) * X(i, 1) + rng.normal();
        data.y1[i] = 1.0 + data.y0[i];  // additive unit effect, shared noise
      }
      data.tau = VectorXd::Ones(n);
      data.X = CovariateMatrix{std::move(X)};
      break;
    }
    case Dgp::TwoCircles: {
      MatrixXd X(n, 2);
      VectorXd r(n), s(n);
      for (int i = 0; i < n; ++i) {
        r[i] = 1.0 + (i % 2) + std::sqrt(0.1) * rng.normal();
        s[i] = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
        X(i, 0) = r[i] * std::cos(s[i]);
        X(i, 1) = r[i] * std::sin(s[i]);
      }
      const double b1 = rng.uniform(), b2 = rng.uniform();
      data.y0.resize(n);
      data.y1.resize(n);
      for (int i = 0; i < n; ++i) {
        const double mean = b1 * s[i] + b2 * r[i];
        data.y0[i] = mean + rng.normal();
        data.y1[i] = mean + rng.normal();
      }
      data.tau = VectorXd::Zero(n);  // identical mean surfaces
      data.X = CovariateMatrix{std::move(X)};
      break;
    }
  }
  return data;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0)
      .count();
}

Design design_for(Method method, const CovariateMatrix& X,
                  std::uint64_t seed, const RunOptions& opts) {
  switch (method) {
    case Method::SoftBlock:
      return softblock(X, opts.bandwidth, seed);
    case Method::GreedyNeighbors:
      return greedy_neighbors(X, seed, opts.bandwidth);
    case Method::MatchedPairs:
      return matched_pairs(X, seed, opts.bandwidth);
    case Method::Bernoulli: {
      Design d;
      d.assignment = bernoulli(static_cast<int>(X.n()), seed);
      d.method = method;
      d.seed = seed;
      return d;
    }
    case Method::CompleteRandomization: {
      Design d;
      d.assignment = complete_randomization(static_cast<int>(X.n()), seed);
      d.method = method;
      d.seed = seed;
      return d;
    }
    case Method::Rerandomize: {
      Design d;
      d.assignment = rerandomize(X, opts.accept_frac, opts.pilot, seed);
      d.method = method;
      d.seed = seed;
      return d;
    }
  }
  throw InvalidData("unknown method enum");
}

}  // namespace

ReplicationResult run_replication(Dgp dgp, int n, Method method,
                                  Estimator estimator, std::uint64_t seed,
                                  const RunOptions& opts) {
  SimData data = generate(dgp, n, derive_seed(seed, 1));
  CovariateMatrix X =
      opts.standardize ? standardize(data.X).X : data.X;

  const auto t_design = Clock::now();
  Design design = design_for(method, X, derive_seed(seed, 2), opts);
  const double design_ms = ms_since(t_design);

  // reveal: the fundamental problem masks one potential outcome per unit
  const VectorXi& a = design.assignment.a;
  VectorXd y(n);
  for (int i = 0; i < n; ++i) y[i] = a[i] == 1 ? data.y1[i] : data.y0[i];
  const OutcomeVector outcome{y};

  const auto t_est = Clock::now();
  double ate = 0.0;
  VectorXd ite;
  switch (estimator) {
    case Estimator::DiffInMeans:
      ate = diff_in_means(outcome, design.assignment);
      ite = VectorXd::Constant(n, ate);
      break;
    case Estimator::Lin:
      ate = lin_adjusted_ate(outcome, design.assignment, X).estimate;
      ite = VectorXd::Constant(n, ate);
      break;
    case Estimator::DesignBased:
      ite = design_ite(design, outcome);
      ate = ite.mean();
      break;
    case Estimator::Knn:
      ite = knn_t_learner(X, outcome, design.assignment, opts.k);
      ate = ite.mean();
      break;
    case Estimator::Pairs:
      ate = matched_pair_ate(design, outcome);
      ite = VectorXd::Constant(n, ate);
      break;
  }
  const double estimate_ms = ms_since(t_est);

  ReplicationResult res;
  res.method = method;
  res.estimator = estimator;
  res.n = n;
  res.ate_error = ate - data.tau.mean();  // sample ATE is the target
  res.ite_sq_errors = (ite - data.tau).array().square();
  res.design_ms = design_ms;
  res.estimate_ms = estimate_ms;
  return res;
}

BenchmarkTable run_benchmark(const BenchmarkConfig& config,
                             std::ostream* progress) {
  BenchmarkTable table;
  table.norm_exponent = config.norm_exponent;
  std::uint64_t cell_index = 0;
  for (Dgp dgp : config.dgps) {
    for (Method method : config.methods) {
      for (Estimator estimator : config.estimators) {
        for (int n : config.n_grid) {
          BenchmarkRow row;
          row.dgp = dgp;
          row.method = method;
          row.estimator = estimator;
          row.n = n;
          row.reps = config.reps;
          try {
            std::vector<ReplicationResult> results(config.reps);
            auto run_rep = [&](int rep) {
              results[rep] = run_replication(
                  dgp, n, method, estimator,
                  derive_seed(config.seed, cell_index, rep), config.run);
            };
            if (config.serial) {
              for (int rep = 0; rep < config.reps; ++rep) run_rep(rep);
            } else {
              const int workers = std::min<int>(
                  config.reps,
                  std::max(1u, std::thread::hardware_concurrency()));
              std::vector<std::future<void>> futures;
              futures.reserve(workers);
              std::atomic<int> next{0};
              for (int w = 0; w < workers; ++w) {
                futures.push_back(std::async(std::launch::async, [&] {
                  for (int rep = next++; rep < config.reps; rep = next++) {
                    run_rep(rep);
                  }
                }));
              }
              for (auto& f : futures) f.get();
            }
            const double norm =
                std::pow(static_cast<double>(n), config.norm_exponent);
            double mse = 0.0, mise = 0.0, design_ms = 0.0;
            for (const auto& r : results) {
              mse += r.ate_error * r.ate_error;
              mise += r.ite_sq_errors.mean();
              design_ms += r.design_ms;
            }
            row.mse_ate = norm * mse / config.reps;
            row.mise_ite = norm * mise / config.reps;
            row.mean_design_ms =
                config.record_timings ? design_ms / config.reps : 0.0;
          } catch (const std::exception& ex) {
            row.error = ex.what();
          }
          if (progress) {
            *progress << dgp_name(dgp) << ' ' << method_name(method) << ' '
                      << estimator_name(estimator) << " n=" << n
                      << (row.error.empty() ? " done"
                                            : " FAILED: " + row.error)
                      << std::endl;
          }
          table.rows.push_back(std::move(row));
          ++cell_index;
        }
      }
    }
  }
  return table;
}

void write_benchmark_csv(const BenchmarkTable& table, std::ostream& out) {
  out << "dgp,method,estimator,n,reps,mse_ate,mise_ite,mean_design_ms,"
         "norm_exponent,error\n";
  char buf[40];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& row : table.rows) {
    out << dgp_name(row.dgp) << ',' << method_name(row.method) << ','
        << estimator_name(row.estimator) << ',' << row.n << ','
        << row.reps << ',' << num(row.mse_ate) << ',' << num(row.mise_ite)
        << ',' << num(row.mean_design_ms) << ','
        << num(table.norm_exponent) << ',' << row.error << '\n';
  }
}

RuntimeScaling runtime_scaling(Method method, const std::vector<int>& n_grid,
                               int reps, std::uint64_t seed, Dgp dgp) {
  RuntimeScaling out;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const int n = n_grid[g];
    double total_ms = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      SimData data = generate(dgp, n, derive_seed(seed, g, rep));
      const CovariateMatrix X = standardize(data.X).X;
      const auto t0 = Clock::now();
      Design d = design_for(method, X, derive_seed(seed, g + 1000, rep),
                            RunOptions{});
      total_ms += ms_since(t0);
      (void)d;
    }
    out.points.push_back({n, total_ms / reps});
  }
  // least-squares slope of log(ms) on log(n)
  const std::size_t m = out.points.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : out.points) {
    const double x = std::log(static_cast<double>(p.n));
    const double y = std::log(std::max(p.mean_ms, 1e-6));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.loglog_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

}  // namespace softblock
