#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "giantflux/graph_oracle.hpp"
#include "giantflux/theory.hpp"
#include "giantflux/walk.hpp"
#include "giantflux/weights.hpp"

namespace giantflux {

enum class ExperimentKind { fclt, oracle_compare, convergence_study, endpoint_check };

std::string to_string(ExperimentKind kind);

struct ExperimentConfig {
  WeightModel model = WeightModel::constant(1.0);
  std::vector<std::size_t> n_values{100000};
  std::vector<double> lambdas{2.0};
  std::size_t replicates = 200;
  std::uint64_t seed = 0;
  ExperimentKind kind = ExperimentKind::fclt;
  double multiplier = 3.0;
  SampleMode weight_mode = SampleMode::quantile;
  double margin = kDefaultSupercriticalMargin;
  unsigned threads = 0;  // 0: resolve_threads()
  /// Lambda pairs whose cross-lambda covariances are checked in fclt runs.
  std::vector<std::pair<double, double>> cross_pairs;
  std::size_t graph_cap = kDefaultGraphCap;
  /// Heuristic bound on the 95th percentile of sqrt(n) g_n.
  double g_quantile_threshold = 0.5;
};

/// Throws std::invalid_argument on R < 2, empty grids or subcritical lambdas.
void validate(const ExperimentConfig& config);

struct StatRecord {
  std::size_t n;
  double lambda;
  std::string stat;
  double empirical;
  double target;
  double se;
  double z;
  bool checked;  // false: reported only
  bool pass;
};

struct ExperimentReport {
  ExperimentKind kind;
  std::string model;
  std::size_t replicates;
  std::uint64_t seed;
  double multiplier;
  std::vector<StatRecord> records;
  double runtime_seconds = 0.0;  // not serialized; output files stay reproducible

  bool all_pass() const;
  const StatRecord* find(double lambda, const std::string& stat, std::size_t n = 0) const;
};

/// Walk replicates at one n that share a single weight vector.
struct WalkEnsemble {
  std::size_t n;
  WeightVector weights;
  SupercriticalCurves empirical;  // centring curves theta_n, rho_n
  SupercriticalCurves limit;      // curves of the configured model, for targets
  std::vector<GiantPath> paths;   // indexed by replicate
};

/// Weight vector used for an experiment at size n.
WeightVector experiment_weights(const ExperimentConfig& config, std::size_t n);

WalkEnsemble simulate_walk_ensemble(const ExperimentConfig& config, std::size_t n);

ExperimentReport fclt_report(const ExperimentConfig& config, const WalkEnsemble& ensemble);
ExperimentReport endpoint_report(const ExperimentConfig& config, const WalkEnsemble& ensemble);

ExperimentReport run_fclt(const ExperimentConfig& config);
ExperimentReport run_endpoint_check(const ExperimentConfig& config);
ExperimentReport run_oracle_compare(const ExperimentConfig& config);
ExperimentReport run_convergence_study(const ExperimentConfig& config);

/// Dispatches on config.kind.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Per-record CSV with header `lambda,stat,empirical,target,se,z,pass`.
void write_report_csv(const ExperimentReport& report, std::ostream& out);
/// Full-precision JSON document.
void write_report_json(const ExperimentReport& report, std::ostream& out);

}  // namespace giantflux
