#include "giantflux/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "giantflux/limit_sampler.hpp"
#include "giantflux/numeric.hpp"
#include "giantflux/parallel.hpp"
#include "giantflux/random.hpp"
#include "json.hpp"

namespace giantflux::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kTagWalk = 2;
constexpr std::uint64_t kTagGraph = 3;
constexpr std::uint64_t kTagLimit = 4;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ConfigError("config field '" + field + "': " + message);
}

double positive_real(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) fail(field, "expected a finite positive number");
  return v;
}

std::size_t positive_count(const json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 1) fail(field, "expected an integer >= 1");
  return j.get<std::size_t>();
}

WeightModel parse_weight_model(const json& j) {
  if (!j.is_object()) fail("model", "expected an object");
  if (!j.contains("type") || !j["type"].is_string()) fail("model.type", "missing or not a string");
  const auto type = j["type"].get<std::string>();
  try {
    if (type == "constant") {
      if (!j.contains("c")) fail("model.c", "missing");
      return WeightModel::constant(positive_real(j["c"], "model.c"));
    }
    if (type == "discrete") {
      if (!j.contains("atoms") || !j["atoms"].is_array()) fail("model.atoms", "expected an array");
      std::vector<Atom> atoms;
      for (std::size_t i = 0; i < j["atoms"].size(); ++i) {
        const auto& a = j["atoms"][i];
        const std::string field = "model.atoms[" + std::to_string(i) + "]";
        if (!a.is_array() || a.size() != 2) fail(field, "expected [weight, probability]");
        atoms.push_back({positive_real(a[0], field + "[0]"), positive_real(a[1], field + "[1]")});
      }
      return WeightModel::discrete(std::move(atoms));
    }
    if (type == "empirical") {
      if (!j.contains("weights") || !j["weights"].is_array()) fail("model.weights", "expected an array");
      std::vector<double> weights;
      for (std::size_t i = 0; i < j["weights"].size(); ++i) {
        weights.push_back(positive_real(j["weights"][i], "model.weights[" + std::to_string(i) + "]"));
      }
      return WeightModel::empirical(std::move(weights));
    }
  } catch (const std::invalid_argument& e) {
    fail("model", e.what());
  }
  fail("model.type", "unknown weight model '" + type + "'");
}

std::vector<double> parse_grid(const json& j) {
  std::vector<double> grid;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      grid.push_back(positive_real(j[i], "lambda[" + std::to_string(i) + "]"));
    }
  } else if (j.is_object()) {
    for (const char* key : {"min", "max", "points"}) {
      if (!j.contains(key)) fail(std::string("lambda.") + key, "missing");
    }
    const double lo = positive_real(j["min"], "lambda.min");
    const double hi = positive_real(j["max"], "lambda.max");
    const std::size_t points = positive_count(j["points"], "lambda.points");
    if (hi < lo) fail("lambda.max", "must be >= lambda.min");
    if (points == 1) {
      grid.push_back(lo);
    } else {
      for (std::size_t k = 0; k < points; ++k) {
        grid.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1));
      }
      grid.back() = hi;
    }
  } else {
    fail("lambda", "expected a list or {min, max, points}");
  }
  if (grid.empty()) fail("lambda", "grid is empty");
  return grid;
}

ExperimentKind parse_kind(const std::string& s) {
  if (s == "fclt") return ExperimentKind::fclt;
  if (s == "oracle-compare") return ExperimentKind::oracle_compare;
  if (s == "convergence-study") return ExperimentKind::convergence_study;
  if (s == "endpoint-check") return ExperimentKind::endpoint_check;
  fail("kind", "unknown experiment kind '" + s + "'");
}

struct Options {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<double> margin;
};

RunConfig load(const Options& opt) {
  std::ifstream in(opt.config_path);
  if (!in) throw ConfigError("cannot open config file '" + opt.config_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig cfg = parse_config(buf.str());
  if (opt.seed) cfg.experiment.seed = *opt.seed;
  if (opt.threads) cfg.experiment.threads = *opt.threads;
  if (opt.margin) {
    if (!(*opt.margin >= 0.0)) throw ConfigError("--margin must be >= 0");
    cfg.experiment.margin = *opt.margin;
  }
  return cfg;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

// --out names the JSON report; the CSV report sits beside it.
std::pair<std::string, std::string> report_paths(const std::string& out) {
  const auto dot = out.find_last_of('.');
  const auto slash = out.find_last_of('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  const std::string stem = has_ext ? out.substr(0, dot) : out;
  const std::string ext = has_ext ? out.substr(dot) : "";
  if (ext == ".csv") return {stem + ".json", out};
  return {out, stem + ".csv"};
}

int run_theory(const RunConfig& cfg, const std::string& out) {
  const auto& e = cfg.experiment;
  require_supercritical(e.model, e.lambdas, e.margin);
  const auto curves = tabulate_curves(e.model, e.lambdas);
  std::ostringstream csv;
  csv << "lambda,theta,rho,beta,var_L,var_V,cov_LV\n";
  for (std::size_t i = 0; i < curves.points.size(); ++i) {
    const auto& p = curves.points[i];
    const Eigen::Matrix2d b = x_cov_block(curves, i, i);
    csv << format_real(p.lambda) << ',' << format_real(p.theta) << ',' << format_real(p.rho) << ','
        << format_real(p.beta) << ',' << format_real(b(0, 0)) << ',' << format_real(b(1, 1)) << ','
        << format_real(b(0, 1)) << '\n';
  }
  write_file(out, csv.str());
  std::cerr << "theory: " << curves.points.size() << " grid points, lambda_crit="
            << format_real(curves.lambda_crit) << '\n';
  return 0;
}

int run_walk(const RunConfig& cfg, const std::string& out) {
  const auto& e = cfg.experiment;
  validate(e);
  const std::size_t n = e.n_values.front();
  const auto weights = experiment_weights(e, n);
  const auto curves = empirical_curves(weights, e.lambdas, e.margin);
  std::vector<GiantPath> paths(e.replicates);
  parallel_for(e.replicates, resolve_threads(e.threads), [&](std::size_t r) {
    paths[r] = sweep(sample_clocks(weights, derive_seed(e.seed, {kTagWalk, n, r})), e.lambdas, curves);
  });
  std::ostringstream csv;
  csv << "replicate,lambda,g,d,volume,count,flucL,flucV\n";
  for (std::size_t r = 0; r < paths.size(); ++r) {
    for (const auto& p : paths[r].points) {
      csv << r << ',' << format_real(p.lambda) << ',' << format_real(p.giant.g) << ','
          << format_real(p.giant.d) << ',' << format_real(p.giant.total_volume) << ','
          << p.giant.vertex_count << ',' << format_real(p.fluc_size) << ','
          << format_real(p.fluc_volume) << '\n';
    }
  }
  write_file(out, csv.str());
  std::cerr << "walk: n=" << n << ", " << e.replicates << " replicates\n";
  return 0;
}

int run_graph(const RunConfig& cfg, const std::string& out) {
  const auto& e = cfg.experiment;
  if (e.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  const std::size_t n = e.n_values.front();
  if (n > e.graph_cap) {
    throw std::invalid_argument("n=" + std::to_string(n) + " exceeds graph_cap=" + std::to_string(e.graph_cap));
  }
  std::vector<double> grid = e.lambdas;
  std::sort(grid.begin(), grid.end());
  const auto weights = experiment_weights(e, n);
  std::vector<std::vector<GiantSnapshot>> snaps(e.replicates);
  parallel_for(e.replicates, resolve_threads(e.threads), [&](std::size_t r) {
    snaps[r] = giant_path(simulate_dynamic_graph(weights, derive_seed(e.seed, {kTagGraph, n, r}), e.graph_cap), grid);
  });
  std::ostringstream csv;
  csv << "replicate,lambda,L,V\n";
  for (std::size_t r = 0; r < snaps.size(); ++r) {
    for (const auto& s : snaps[r]) {
      csv << r << ',' << format_real(s.lambda) << ',' << s.size << ',' << format_real(s.volume) << '\n';
    }
  }
  write_file(out, csv.str());
  std::cerr << "graph: n=" << n << ", " << e.replicates << " replicates\n";
  return 0;
}

int run_limit(const RunConfig& cfg, const std::string& out) {
  const auto& e = cfg.experiment;
  require_supercritical(e.model, e.lambdas, e.margin);
  const auto curves = tabulate_curves(e.model, e.lambdas);
  const std::size_t draws = cfg.draws > 0 ? cfg.draws : e.replicates;
  const auto samples =
      sample_x_path(curves, draws, derive_seed(e.seed, {kTagLimit}), resolve_threads(e.threads));
  std::ostringstream csv;
  csv << "draw,lambda,x0,x1\n";
  for (std::size_t r = 0; r < samples.size(); ++r) {
    for (std::size_t i = 0; i < samples[r].lambdas.size(); ++i) {
      csv << r << ',' << format_real(samples[r].lambdas[i]) << ',' << format_real(samples[r].x0[i])
          << ',' << format_real(samples[r].x1[i]) << '\n';
    }
  }
  write_file(out, csv.str());
  std::cerr << "limit: " << draws << " draws\n";
  return 0;
}

int run_report(RunConfig cfg, ExperimentKind kind, const std::string& out) {
  cfg.experiment.kind = kind;
  std::cerr << to_string(kind) << ": " << cfg.experiment.model.describe() << ", R="
            << cfg.experiment.replicates << '\n';
  const auto report = run_experiment(cfg.experiment);
  const auto [json_path, csv_path] = report_paths(out);
  std::ostringstream js;
  write_report_json(report, js);
  std::ostringstream csv;
  write_report_csv(report, csv);
  write_file(json_path, js.str());
  write_file(csv_path, csv.str());
  std::size_t failed = 0;
  for (const auto& r : report.records) {
    if (!r.pass) {
      ++failed;
      std::cerr << "  FAIL lambda=" << format_real(r.lambda) << ' ' << r.stat
                << " empirical=" << format_real(r.empirical) << " target=" << format_real(r.target)
                << " z=" << format_real(r.z) << '\n';
    }
  }
  std::cerr << to_string(kind) << ": " << report.records.size() << " records, " << failed
            << " failed, " << report.runtime_seconds << " s\n";
  return report.all_pass() ? 0 : 1;
}

}  // namespace

RunConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  RunConfig cfg;
  auto& e = cfg.experiment;
  if (!j.contains("model")) fail("model", "missing");
  e.model = parse_weight_model(j["model"]);
  if (!j.contains("lambda")) fail("lambda", "missing");
  e.lambdas = parse_grid(j["lambda"]);

  if (j.contains("n")) {
    e.n_values.clear();
    if (j["n"].is_array()) {
      for (std::size_t i = 0; i < j["n"].size(); ++i) {
        e.n_values.push_back(positive_count(j["n"][i], "n[" + std::to_string(i) + "]"));
      }
      if (e.n_values.empty()) fail("n", "list is empty");
    } else {
      e.n_values.push_back(positive_count(j["n"], "n"));
    }
  }
  if (j.contains("replicates")) e.replicates = positive_count(j["replicates"], "replicates");
  if (j.contains("draws")) cfg.draws = positive_count(j["draws"], "draws");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("seed", "expected an unsigned 64-bit integer");
    e.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) fail("kind", "expected a string");
    e.kind = parse_kind(j["kind"].get<std::string>());
  }
  if (j.contains("weight_mode")) {
    const auto mode = j["weight_mode"].is_string() ? j["weight_mode"].get<std::string>() : "";
    if (mode == "iid") {
      e.weight_mode = SampleMode::iid;
    } else if (mode == "quantile") {
      e.weight_mode = SampleMode::quantile;
    } else {
      fail("weight_mode", "expected \"iid\" or \"quantile\"");
    }
  }
  if (j.contains("margin")) {
    if (!j["margin"].is_number() || !(j["margin"].get<double>() >= 0.0)) fail("margin", "expected a number >= 0");
    e.margin = j["margin"].get<double>();
  }
  if (j.contains("multiplier")) e.multiplier = positive_real(j["multiplier"], "multiplier");
  if (j.contains("graph_cap")) e.graph_cap = positive_count(j["graph_cap"], "graph_cap");
  if (j.contains("g_quantile_threshold")) {
    e.g_quantile_threshold = positive_real(j["g_quantile_threshold"], "g_quantile_threshold");
  }
  if (j.contains("cross_pairs")) {
    const auto& pairs = j["cross_pairs"];
    if (!pairs.is_array()) fail("cross_pairs", "expected a list of [lambda_a, lambda_b]");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const std::string field = "cross_pairs[" + std::to_string(i) + "]";
      if (!pairs[i].is_array() || pairs[i].size() != 2) fail(field, "expected [lambda_a, lambda_b]");
      const double a = positive_real(pairs[i][0], field + "[0]");
      const double b = positive_real(pairs[i][1], field + "[1]");
      if (std::find(e.lambdas.begin(), e.lambdas.end(), a) == e.lambdas.end() ||
          std::find(e.lambdas.begin(), e.lambdas.end(), b) == e.lambdas.end()) {
        fail(field, "both lambdas must be grid points");
      }
      e.cross_pairs.emplace_back(a, b);
    }
  }
  return cfg;
}

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"giantflux: giant-component fluctuations of dynamic rank-one random graphs"};
  app.require_subcommand(1);
  Options opt;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"theory", "tabulate theta, rho, beta and limit variances on the lambda grid"},
      {"walk", "simulate the breadth-first walk and record the giant per replicate"},
      {"graph", "simulate the dynamic graph directly (small n)"},
      {"limit", "sample the limit Gaussian process X(lambda)"},
      {"fclt", "Monte Carlo check of the fluctuation limit"},
      {"compare", "walk versus graph two-sample comparison"},
      {"endpoints", "check the excursion endpoint limits"},
      {"converge", "variance error across a list of n"},
  };
  std::uint64_t seed = 0;
  unsigned threads = 0;
  double margin = 0.0;
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_path, "JSON run configuration")->required();
    sub->add_option("--out", opt.out_path, "output file")->required();
    sub->add_option("--seed", seed, "override the base seed");
    sub->add_option("--threads", threads, "worker threads (default: GIANTFLUX_THREADS or all cores)");
    sub->add_option("--margin", margin, "supercritical margin above lambda_crit");
    subs.push_back(sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* chosen = nullptr;
  for (auto* s : subs) {
    if (s->parsed()) chosen = s;
  }
  if (chosen->count("--seed") > 0) opt.seed = seed;
  if (chosen->count("--threads") > 0) opt.threads = threads;
  if (chosen->count("--margin") > 0) opt.margin = margin;

  try {
    RunConfig cfg = load(opt);
    const std::string name = chosen->get_name();
    if (name == "theory") return run_theory(cfg, opt.out_path);
    if (name == "walk") return run_walk(cfg, opt.out_path);
    if (name == "graph") return run_graph(cfg, opt.out_path);
    if (name == "limit") return run_limit(cfg, opt.out_path);
    if (name == "fclt") return run_report(std::move(cfg), ExperimentKind::fclt, opt.out_path);
    if (name == "compare") return run_report(std::move(cfg), ExperimentKind::oracle_compare, opt.out_path);
    if (name == "endpoints") return run_report(std::move(cfg), ExperimentKind::endpoint_check, opt.out_path);
    return run_report(std::move(cfg), ExperimentKind::convergence_study, opt.out_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

int dispatch(int argc, char** argv) {
  return dispatch(std::vector<std::string>(argv, argv + argc));
}

}  // namespace giantflux::cli
