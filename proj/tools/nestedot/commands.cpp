#include "nestedot/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <thread>

#include "nestedot/discrete_ot.hpp"
#include "nestedot/error.hpp"
#include "nestedot/experiment.hpp"
#include "nestedot/json_io.hpp"
#include "nestedot/nested_dp.hpp"
#include "nestedot/path_set.hpp"
#include "nestedot/prefix_tree.hpp"
#include "nestedot/process_lab.hpp"
#include "nestedot/quantizer.hpp"

namespace nestedot::cli {
namespace {

using json = nlohmann::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::ModeMismatch:
      return kExitShape;
    case ErrorCode::NotPSD:
    case ErrorCode::MissingFactor:
    case ErrorCode::NoConvergence:
    case ErrorCode::InfeasibleWeights:
      return kExitMath;
    default:
      return kExitInput;
  }
}

std::size_t default_threads() {
  if (const char* env = std::getenv("NESTEDOT_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

// Field count shared by every non-blank line of a CSV file, if there is one.
std::optional<std::size_t> uniform_width(const std::string& file) {
  std::ifstream in(file);
  std::optional<std::size_t> width;
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::size_t w = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
    if (width && *width != w) return std::nullopt;
    width = w;
  }
  return width;
}

PathSet load_paths(const std::string& file, std::size_t steps, std::size_t dim) {
  try {
    return load_csv_file(file, steps, dim);
  } catch (const Error& e) {
    // A well-formed file of the wrong width is a shape problem, not a parse problem.
    if (e.code() == ErrorCode::MalformedRow) {
      auto width = uniform_width(file);
      if (width && *width != steps * dim)
        throw Error(ErrorCode::ShapeMismatch, file + ": rows have " + std::to_string(*width) + " fields, expected " +
                                                  std::to_string(steps * dim) + " (steps " + std::to_string(steps) +
                                                  " x dim " + std::to_string(dim) + ")");
    }
    throw Error(e.code(), file + ": " + e.detail());
  }
}

json load_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + file);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, file + ": invalid JSON: " + e.what());
  }
}

struct ComputeArgs {
  std::string mu, nu;
  std::size_t steps = 0, dim = 1;
  bool markov = false, w2 = false, stats = false;
  std::optional<double> delta, delta_mu, delta_nu;
  std::size_t threads = 0;
};

int cmd_compute(const ComputeArgs& a, std::ostream& out) {
  if (a.delta && (a.delta_mu || a.delta_nu))
    throw Error(ErrorCode::InvalidArgument, "--delta cannot be combined with --delta-mu/--delta-nu");
  PathSet mu = load_paths(a.mu, a.steps, a.dim);
  PathSet nu = load_paths(a.nu, a.steps, a.dim);

  auto start = std::chrono::steady_clock::now();
  const TreeMode mode = a.markov ? TreeMode::Markov : TreeMode::FullHistory;
  const double dmu = a.delta ? *a.delta : a.delta_mu.value_or(default_delta(mu.n_samples(), a.dim, a.steps, a.markov));
  const double dnu = a.delta ? *a.delta : a.delta_nu.value_or(default_delta(nu.n_samples(), a.dim, a.steps, a.markov));
  QuantizedPathSet qmu = quantize(mu, GridSpec{dmu, 0.0});
  QuantizedPathSet qnu = quantize(nu, GridSpec{dnu, 0.0});
  PrefixTree tmu(qmu, mode), tnu(qnu, mode);
  AwResult result = aw2_squared(tmu, tnu, DpOptions{a.threads, true});

  json j = to_json(result);
  if (a.w2) j["w2_squared"] = w2_squared_quantized(qmu, qnu);
  if (a.stats) j["tree_stats"] = {{"mu", to_json(tmu.stats())}, {"nu", to_json(tnu.stats())}};
  j["runtime_ms"] = elapsed_ms(start);
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct GaussianArgs {
  std::string mu, nu;
  std::string which = "both";
};

int cmd_gaussian(const GaussianArgs& a, std::ostream& out) {
  GaussianSpec mu = gaussian_spec_from_json(load_json_file(a.mu));
  GaussianSpec nu = gaussian_spec_from_json(load_json_file(a.nu));
  if (mu.dim != nu.dim || mu.steps != nu.steps)
    throw Error(ErrorCode::DimensionMismatch, "Gaussian specs differ in d or T");
  json j;
  if (a.which == "aw2" || a.which == "both") {
    AdaptedGaussianValue aw = aw2_squared_gaussian_detailed(mu, nu);
    j["aw2_squared"] = aw.aw2_squared;
    j["degenerate_mu"] = aw.degenerate_mu;
    j["degenerate_nu"] = aw.degenerate_nu;
  }
  if (a.which == "w2" || a.which == "both") j["w2_squared"] = w2_squared_gaussian(mu, nu);
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct ExperimentArgs {
  ExperimentConfig config;
  std::string out_file;
};

int cmd_experiment(const ExperimentArgs& a, std::ostream& out) {
  ExperimentReport report = run_experiment(a.config);
  std::ofstream file(a.out_file);
  if (!file) throw Error(ErrorCode::IoFailure, "cannot open " + a.out_file + " for writing");
  write_report_csv(report, file);
  file.close();
  if (!file) throw Error(ErrorCode::IoFailure, "write failure on " + a.out_file);
  json summary = json::array();
  for (const auto& s : report.summary())
    summary.push_back({{"experiment", s.experiment},
                       {"n_samples", s.n_samples},
                       {"reps", s.reps},
                       {"mean_estimate", s.mean_estimate},
                       {"oracle", s.oracle},
                       {"mean_abs_error", s.mean_abs_error},
                       {"mean_wall_ms", s.mean_wall_ms}});
  out << json{{"report", a.out_file}, {"rows", report.rows.size()}, {"summary", summary}}.dump(2) << '\n';
  return kExitOk;
}

constexpr int kBenchRepeats = 3;

struct BenchArgs {
  std::size_t n = 2000, steps = 3;
  std::vector<std::size_t> threads{1, 2, 4, 8};
  std::uint64_t seed = 0;
};

std::vector<double> bench_times(std::size_t steps) {
  if (steps == 1) return {1.0};
  if (steps == 3) return {0.1, 0.5, 1.0};
  std::vector<double> times(steps);
  for (std::size_t k = 0; k < steps; ++k)
    times[k] = 0.1 + 0.9 * static_cast<double>(k) / static_cast<double>(steps - 1);
  return times;
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  if (a.threads.empty()) throw Error(ErrorCode::InvalidArgument, "--threads-list is empty");
  const auto times = bench_times(a.steps);
  PathSet mu = sample(ProcessSpec{FakeBrownianMotion{0.1}, times}, a.n, mu_seed(a.seed));
  PathSet nu = sample(bm_spec(times), a.n, nu_seed(a.seed));

  for (std::size_t threads : a.threads)
    if (threads == 0) throw Error(ErrorCode::InvalidArgument, "thread counts must be positive");
  auto config_for = [](std::size_t threads) { return AwConfig{{}, {}, 0.0, TreeMode::FullHistory, threads}; };
  compute_aw2(mu, nu, config_for(a.threads.front()));  // untimed warm-up

  json rows = json::array();
  double base_ms = 0.0, first_value = 0.0, max_gap = 0.0;
  for (std::size_t k = 0; k < a.threads.size(); ++k) {
    // best of a few runs per thread count
    AwResult r;
    double ms = std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < kBenchRepeats; ++rep) {
      auto start = std::chrono::steady_clock::now();
      r = compute_aw2(mu, nu, config_for(a.threads[k]));
      ms = std::min(ms, elapsed_ms(start));
    }
    if (k == 0) {
      base_ms = ms;
      first_value = r.aw2_squared;
    }
    max_gap = std::max(max_gap, std::abs(r.aw2_squared - first_value));
    rows.push_back({{"threads", a.threads[k]}, {"runtime_ms", ms}, {"speedup", base_ms / ms}, {"aw2_squared", r.aw2_squared}});
  }
  out << json{{"n", a.n},
              {"steps", a.steps},
              {"hardware_threads", std::thread::hardware_concurrency()},
              {"max_abs_difference", max_gap},
              {"deterministic", max_gap <= 1e-12},
              {"repeats", kBenchRepeats},
              {"rows", rows}}
             .dump(2)
      << '\n';
  return kExitOk;
}

struct SampleArgs {
  std::string process;
  double sigma = 1.0, delta = 0.1, t = 0.5;
  std::size_t steps = 5, n = 1000;
  std::vector<double> times;
  std::uint64_t seed = 0;
  std::string out_file = "-";
  std::string spec_out;
};

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  ProcessSpec spec;
  if (a.process == "ou") {
    spec = a.times.empty() ? ou_spec(a.sigma, a.steps) : ProcessSpec{OrnsteinUhlenbeck{a.sigma}, a.times};
  } else if (a.process == "fakebm") {
    spec = a.times.empty() ? fake_bm_spec(a.delta, a.t) : ProcessSpec{FakeBrownianMotion{a.delta}, a.times};
  } else if (a.process == "bm") {
    spec = bm_spec(a.times.empty() ? std::vector<double>{0.1, 0.5, 1.0} : a.times);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown process '" + a.process + "' (expected ou, bm or fakebm)");
  }
  PathSet paths = sample(spec, a.n, a.seed);
  if (a.out_file == "-") {
    save_csv(paths, out);
  } else {
    save_csv_file(paths, a.out_file);
  }
  if (!a.spec_out.empty()) {
    std::ofstream f(a.spec_out);
    if (!f) throw Error(ErrorCode::IoFailure, "cannot open " + a.spec_out + " for writing");
    f << to_json(exact_gaussian_spec(spec)).dump(2) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adapted (nested) Wasserstein distances between sampled path laws"};
  app.require_subcommand(1);

  ComputeArgs compute;
  compute.threads = default_threads();
  auto* c = app.add_subcommand("compute", "AW2^2 between two CSV path samples");
  c->add_option("--mu", compute.mu, "CSV samples of the first law")->required();
  c->add_option("--nu", compute.nu, "CSV samples of the second law")->required();
  c->add_option("--steps", compute.steps, "time steps T")->required()->check(CLI::PositiveNumber);
  c->add_option("--dim", compute.dim, "state dimension d")->check(CLI::PositiveNumber);
  c->add_flag("--markov", compute.markov, "condition on the current state only");
  c->add_option("--delta", compute.delta, "grid width for both sides")->check(CLI::PositiveNumber);
  c->add_option("--delta-mu", compute.delta_mu, "grid width for mu")->check(CLI::PositiveNumber);
  c->add_option("--delta-nu", compute.delta_nu, "grid width for nu")->check(CLI::PositiveNumber);
  c->add_option("--threads", compute.threads, "worker threads (default $NESTEDOT_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  c->add_flag("--w2", compute.w2, "also report W2^2 between the quantized measures");
  c->add_flag("--stats", compute.stats, "include tree statistics");

  GaussianArgs gaussian;
  auto* g = app.add_subcommand("gaussian", "closed-form W2^2 / AW2^2 between Gaussian path laws");
  g->add_option("--mu", gaussian.mu, "JSON spec of the first law")->required();
  g->add_option("--nu", gaussian.nu, "JSON spec of the second law")->required();
  g->add_option("--which", gaussian.which, "aw2, w2 or both")->check(CLI::IsMember({"aw2", "w2", "both"}));

  ExperimentArgs experiment;
  experiment.config.threads = default_threads();
  auto* e = app.add_subcommand("experiment", "convergence study against Gaussian oracles");
  e->add_option("kind", experiment.config.kind, "ou or fakebm")->required()->check(CLI::IsMember({"ou", "fakebm"}));
  e->add_option("--sizes", experiment.config.sizes, "comma-separated sample sizes")->delimiter(',');
  e->add_option("--reps", experiment.config.reps, "replications per size")->check(CLI::PositiveNumber);
  e->add_option("--seed", experiment.config.seed, "base seed");
  e->add_option("--out", experiment.out_file, "report CSV path")->required();
  e->add_option("--threads", experiment.config.threads, "worker threads")->check(CLI::PositiveNumber);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "thread scaling of the backward recursion");
  b->add_option("--n", bench.n, "samples per side")->check(CLI::PositiveNumber);
  b->add_option("--steps", bench.steps, "time steps")->check(CLI::PositiveNumber);
  b->add_option("--threads-list", bench.threads, "comma-separated thread counts")->delimiter(',');
  b->add_option("--seed", bench.seed, "seed");

  SampleArgs sampling;
  auto* s = app.add_subcommand("sample", "draw benchmark process paths as CSV");
  s->add_option("--process", sampling.process, "ou, bm or fakebm")->required();
  s->add_option("--sigma", sampling.sigma, "OU volatility");
  s->add_option("--steps", sampling.steps, "OU steps on the grid k/steps")->check(CLI::PositiveNumber);
  s->add_option("--delta", sampling.delta, "fake BM delta");
  s->add_option("--t", sampling.t, "fake BM middle observation time");
  s->add_option("--times", sampling.times, "explicit observation times")->delimiter(',');
  s->add_option("--n", sampling.n, "number of paths")->check(CLI::PositiveNumber);
  s->add_option("--seed", sampling.seed, "seed");
  s->add_option("--out", sampling.out_file, "CSV path or - for stdout");
  s->add_option("--spec-out", sampling.spec_out, "write the exact Gaussian spec as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (c->parsed()) return cmd_compute(compute, out);
    if (g->parsed()) return cmd_gaussian(gaussian, out);
    if (e->parsed()) return cmd_experiment(experiment, out);
    if (b->parsed()) return cmd_bench(bench, out);
    if (s->parsed()) return cmd_sample(sampling, out);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return exit_code_for(ex.code());
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace nestedot::cli
