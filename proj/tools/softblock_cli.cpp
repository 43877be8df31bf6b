#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "softblock/balance.hpp"
#include "softblock/dataset.hpp"
#include "softblock/designs.hpp"
#include "softblock/dpp.hpp"
#include "softblock/estimators.hpp"
#include "softblock/simulate.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace softblock;

constexpr std::uint64_t kDefaultSeed = 42;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t parse_seed(const std::string& s) {
  if (s == "random") return std::random_device{}();
  return std::stoull(s);
}

double parse_bandwidth(const std::string& s) {
  if (s == "auto") return 0.0;
  const double h = std::stod(s);
  if (!(h > 0.0)) throw NonPositiveBandwidth(s);
  return h;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw MissingFile("cannot open for writing: " + path);
  out << text;
}

struct CommonOpts {
  std::string input;
  std::string output;
  std::string seed_str = std::to_string(kDefaultSeed);
  std::string bandwidth_str = "auto";
  bool no_standardize = false;
};

CovariateMatrix load_input(const CommonOpts& opts, bool* standardized) {
  CovariateMatrix raw = [&] {
    std::ifstream probe(opts.input);
    if (!probe) throw MissingFile(opts.input);
    std::string first;
    std::getline(probe, first);
    // treat a non-numeric first row as a header
    bool header = false;
    try {
      (void)load_covariates(opts.input, false);
    } catch (const NonNumericField&) {
      header = true;
    }
    return load_covariates(opts.input, header);
  }();
  if (standardized) *standardized = !opts.no_standardize;
  if (opts.no_standardize) return raw;
  return standardize(raw).X;
}

std::vector<TreeEdge> load_graph_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile(path);
  std::vector<TreeEdge> edges;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int i, j;
    double w;
    if (std::sscanf(line.c_str(), "%d,%d,%lf", &i, &j, &w) == 3) {
      edges.push_back({i, j, w});
    }
  }
  return edges;
}

void write_assignment_csv(const std::string& path, const Design& d) {
  std::ofstream out(path);
  if (!out) throw MissingFile("cannot open for writing: " + path);
  out << "unit_index,arm,component_id\n";
  for (Eigen::Index i = 0; i < d.assignment.n(); ++i) {
    const int comp =
        d.component.empty() ? 0 : d.component[static_cast<std::size_t>(i)];
    out << i << ',' << d.assignment.a[i] << ',' << comp << '\n';
  }
}

void write_graph_csv(const std::string& path,
                     const std::vector<TreeEdge>& edges) {
  std::ofstream out(path);
  if (!out) throw MissingFile("cannot open for writing: " + path);
  out << "i,j,weight\n";
  for (const auto& e : edges) {
    out << e.i << ',' << e.j << ',' << fmt(e.weight) << '\n';
  }
}

int cmd_design(const CommonOpts& opts, const std::string& method_str,
               double accept_frac, bool emit_logprob) {
  const std::uint64_t seed = parse_seed(opts.seed_str);
  const double bandwidth = parse_bandwidth(opts.bandwidth_str);
  bool standardized = false;
  const CovariateMatrix X = load_input(opts, &standardized);
  const Method method = method_from_name(method_str);
  const int n = static_cast<int>(X.n());

  Design d;
  switch (method) {
    case Method::SoftBlock:
      d = softblock::softblock(X, bandwidth, seed);
      break;
    case Method::GreedyNeighbors:
      d = greedy_neighbors(X, seed, bandwidth);
      break;
    case Method::MatchedPairs: d = matched_pairs(X, seed, bandwidth); break;
    case Method::Bernoulli:
      d.assignment = bernoulli(n, seed);
      d.method = method;
      d.seed = seed;
      break;
    case Method::CompleteRandomization:
      d.assignment = complete_randomization(n, seed);
      d.method = method;
      d.seed = seed;
      break;
    case Method::Rerandomize:
      d.assignment = rerandomize(X, accept_frac, 500, seed);
      d.method = method;
      d.seed = seed;
      break;
  }

  const std::string prefix = opts.output.empty() ? "design" : opts.output;
  write_assignment_csv(prefix + "_assignment.csv", d);
  write_graph_csv(prefix + "_graph.csv", d.support);

  double total_weight = 0.0;
  for (const auto& e : d.support) total_weight += e.weight;
  json out = {
      {"method", method_name(d.method)},
      {"seed", d.seed},
      {"bandwidth", d.bandwidth},
      {"standardized", standardized},
      {"n", n},
      {"group_sizes", {d.assignment.treated(), d.assignment.control()}},
      {"support_edges", d.support.size()},
      {"total_support_weight", total_weight},
  };
  if (emit_logprob && method == Method::SoftBlock) {
    const SimilarityGraph sim =
        gaussian_similarity(pairwise_distances(X), d.bandwidth);
    SpanningTree tree;
    tree.n = n;
    tree.edges = d.support;
    out["tree_log_probability"] = tree_log_probability(tree, sim);
  }
  write_text(prefix + "_design.json", out.dump(2) + "\n");
  return 0;
}

int cmd_balance(const CommonOpts& opts, const std::string& assignment_path) {
  bool standardized = false;
  const CovariateMatrix X = load_input(opts, &standardized);
  const Assignment a = load_assignment(assignment_path);
  const double bandwidth = parse_bandwidth(opts.bandwidth_str);
  const BalanceReport report = balance_report(X, a, bandwidth);
  json out = {
      {"friedman_rafsky", report.friedman_rafsky},
      {"mahalanobis", report.mahalanobis},
      {"smd", std::vector<double>(report.smd.begin(), report.smd.end())},
      {"kernel_imbalance", report.kernel_imbalance},
      {"group_sizes", {report.n1, report.n0}},
      {"standardized", standardized},
  };
  if (opts.output.empty()) {
    std::cout << out.dump(2) << "\n";
  } else {
    write_text(opts.output, out.dump(2) + "\n");
  }
  return 0;
}

int cmd_estimate(const CommonOpts& opts, const std::string& assignment_path,
                 const std::string& outcomes_path,
                 const std::string& graph_path,
                 const std::string& estimator_str, int k) {
  bool standardized = false;
  const CovariateMatrix X = load_input(opts, &standardized);
  const Assignment a = load_assignment(assignment_path);
  const OutcomeVector y = load_outcomes(outcomes_path);
  const Estimator estimator = estimator_from_name(estimator_str);

  double ate = 0.0;
  double se = std::numeric_limits<double>::quiet_NaN();
  VectorXd ite;
  const int n = static_cast<int>(X.n());

  if (estimator == Estimator::DesignBased || estimator == Estimator::Pairs) {
    if (graph_path.empty()) {
      throw MissingFile("--graph is required for this estimator");
    }
    Design d;
    d.assignment = a;
    d.support = load_graph_csv(graph_path);
    d.method = estimator == Estimator::Pairs ? Method::MatchedPairs
                                             : Method::SoftBlock;
    if (estimator == Estimator::Pairs) {
      ate = matched_pair_ate(d, y);
      ite = VectorXd::Constant(n, ate);
    } else {
      ite = design_ite(d, y);
      ate = ite.mean();
    }
  } else if (estimator == Estimator::DiffInMeans) {
    ate = diff_in_means(y, a);
    ite = VectorXd::Constant(n, ate);
  } else if (estimator == Estimator::Lin) {
    const AteEstimate est = lin_adjusted_ate(y, a, X);
    ate = est.estimate;
    se = est.se;
    ite = VectorXd::Constant(n, ate);
  } else {  // knn
    ite = knn_t_learner(X, y, a, k);
    ate = ite.mean();
  }

  const std::string prefix = opts.output.empty() ? "estimate" : opts.output;
  json out = {{"estimator", estimator_str}, {"ate", ate}};
  if (std::isfinite(se)) out["se"] = se;
  write_text(prefix + "_ate.json", out.dump(2) + "\n");

  std::ofstream ite_out(prefix + "_ite.csv");
  ite_out << "unit_index,tau_hat\n";
  for (int i = 0; i < n; ++i) {
    ite_out << i << ',' << fmt(ite[i]) << '\n';
  }
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& output,
                 bool serial_timing) {
  std::ifstream in(config_path);
  if (!in) throw MissingFile(config_path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& ex) {
    std::cerr << "malformed config: " << ex.what() << "\n";
    return 2;
  }

  BenchmarkConfig config;
  try {
    for (const auto& s : cfg.at("dgps")) {
      config.dgps.push_back(dgp_from_name(s.get<std::string>()));
    }
    for (const auto& s : cfg.at("methods")) {
      config.methods.push_back(method_from_name(s.get<std::string>()));
    }
    for (const auto& s : cfg.at("estimators")) {
      config.estimators.push_back(
          estimator_from_name(s.get<std::string>()));
    }
    config.n_grid = cfg.at("n_grid").get<std::vector<int>>();
    config.reps = cfg.at("reps").get<int>();
    config.seed = cfg.value("seed", kDefaultSeed);
    config.run.standardize = cfg.value("standardize", true);
    if (cfg.contains("bandwidth") && cfg["bandwidth"].is_number()) {
      config.run.bandwidth = cfg["bandwidth"].get<double>();
    }
    config.run.accept_frac = cfg.value("accept_frac", 0.01);
    config.run.k = cfg.value("k", 5);
    config.norm_exponent = cfg.value("norm_exponent", 0.0);
    config.record_timings = cfg.value("record_timings", true);
  } catch (const json::exception& ex) {
    std::cerr << "malformed config: " << ex.what() << "\n";
    return 2;
  }
  config.serial = serial_timing;

  const BenchmarkTable table = run_benchmark(config, &std::cerr);
  std::ofstream out(output);
  if (!out) throw MissingFile("cannot open for writing: " + output);
  write_benchmark_csv(table, out);

  bool any_ok = false;
  for (const auto& row : table.rows) any_ok |= row.error.empty();
  return any_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spanning-tree Maxcut experimental designs"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string method_str = "softblock";
  std::string estimator_str = "dim";
  std::string assignment_path, outcomes_path, graph_path;
  double accept_frac = 0.01;
  int k = 5;
  bool emit_logprob = false, serial_timing = false;

  auto add_common = [&](CLI::App* cmd, bool input_required = true) {
    cmd->add_option("--input", opts.input, "covariates CSV (or config JSON)")
        ->required(input_required);
    cmd->add_option("--output", opts.output, "output path or prefix");
    cmd->add_option("--seed", opts.seed_str, "integer seed or 'random'");
    cmd->add_option("--bandwidth", opts.bandwidth_str,
                    "'auto' or a positive value");
    cmd->add_flag("--no-standardize", opts.no_standardize,
                  "skip covariate standardization");
  };

  auto* design = app.add_subcommand("design", "generate an assignment");
  add_common(design);
  design->add_option("--method", method_str,
                     "softblock|greedy|bernoulli|complete|rerandomize|"
                     "matchedpairs")
      ->check(CLI::IsMember({"softblock", "greedy", "bernoulli", "complete",
                             "rerandomize", "matchedpairs"}));
  design->add_option("--accept-frac", accept_frac,
                     "rerandomization acceptance fraction");
  design->add_flag("--emit-logprob", emit_logprob,
                   "append the tree log-probability to the design JSON");

  auto* balance = app.add_subcommand("balance", "report covariate balance");
  add_common(balance);
  balance->add_option("--assignment", assignment_path, "assignment CSV")
      ->required();

  auto* estimate = app.add_subcommand("estimate", "estimate ATE/ITE");
  add_common(estimate);
  estimate->add_option("--assignment", assignment_path, "assignment CSV")
      ->required();
  estimate->add_option("--outcomes", outcomes_path, "outcomes CSV")
      ->required();
  estimate->add_option("--graph", graph_path, "support-graph CSV");
  estimate
      ->add_option("--estimator", estimator_str, "dim|lin|design|knn|pairs")
      ->check(CLI::IsMember({"dim", "lin", "design", "knn", "pairs"}));
  estimate->add_option("--k", k, "neighbors for the knn estimator");

  auto* simulate = app.add_subcommand("simulate", "run a benchmark config");
  simulate->add_option("--input", opts.input, "benchmark config JSON")
      ->required();
  simulate->add_option("--output", opts.output, "results CSV path");
  simulate->add_flag("--serial-timing", serial_timing,
                     "serialize replications for clean timings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (design->parsed()) {
      return cmd_design(opts, method_str, accept_frac, emit_logprob);
    }
    if (balance->parsed()) return cmd_balance(opts, assignment_path);
    if (estimate->parsed()) {
      return cmd_estimate(opts, assignment_path, outcomes_path, graph_path,
                          estimator_str, k);
    }
    if (simulate->parsed()) {
      return cmd_simulate(
          opts.input, opts.output.empty() ? "results.csv" : opts.output,
          serial_timing);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 2;
}
