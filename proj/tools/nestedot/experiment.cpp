#include "nestedot/experiment.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <utility>

#include "nestedot/discrete_ot.hpp"
#include "nestedot/error.hpp"
#include "nestedot/format.hpp"
#include "nestedot/gaussian_oracle.hpp"
#include "nestedot/nested_dp.hpp"
#include "nestedot/process_lab.hpp"

namespace nestedot::cli {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

ExperimentRow make_row(std::string id, std::size_t n, std::size_t rep, std::uint64_t seed, double estimate,
                       double oracle, double wall_ms, std::string mode, double delta) {
  return {std::move(id), n, rep, seed, estimate, oracle, std::abs(estimate - oracle), wall_ms, std::move(mode), delta};
}

}  // namespace

std::uint64_t row_seed(std::uint64_t base, std::size_t n_samples, std::size_t rep) {
  return splitmix64(splitmix64(base ^ (static_cast<std::uint64_t>(n_samples) << 20)) + rep);
}
std::uint64_t mu_seed(std::uint64_t row) { return splitmix64(row ^ 0x6D75ull); }
std::uint64_t nu_seed(std::uint64_t row) { return splitmix64(row ^ 0x6E75ull); }

ExperimentReport run_experiment(const ExperimentConfig& config) {
  if (config.kind != "ou" && config.kind != "fakebm")
    throw Error(ErrorCode::InvalidArgument, "unknown experiment '" + config.kind + "' (expected ou or fakebm)");
  if (config.sizes.empty() || config.reps == 0)
    throw Error(ErrorCode::InvalidArgument, "experiment needs at least one size and one replication");

  const bool ou = config.kind == "ou";
  const ProcessSpec mu_spec = ou ? ou_spec(1.0, 5) : fake_bm_spec(0.1, 0.5);
  const ProcessSpec nu_spec = ou ? ou_spec(3.0, 5) : bm_spec({0.1, 0.5, 1.0});
  const GaussianSpec mu_law = exact_gaussian_spec(mu_spec);
  const GaussianSpec nu_law = exact_gaussian_spec(nu_spec);
  const double aw_oracle = aw2_squared_gaussian(mu_law, nu_law);
  const double w_oracle = ou ? 0.0 : w2_squared_gaussian(mu_law, nu_law);
  const TreeMode mode = ou ? TreeMode::Markov : TreeMode::FullHistory;

  ExperimentReport report;
  for (std::size_t n : config.sizes) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample sizes must be positive");
    for (std::size_t rep = 0; rep < config.reps; ++rep) {
      const std::uint64_t seed = row_seed(config.seed, n, rep);
      PathSet mu = sample(mu_spec, n, mu_seed(seed));
      PathSet nu = sample(nu_spec, n, nu_seed(seed));

      auto start = std::chrono::steady_clock::now();
      AwResult aw = compute_aw2(mu, nu, AwConfig{{}, {}, 0.0, mode, config.threads});
      double ms = elapsed_ms(start);
      report.rows.push_back(make_row(config.kind + "_aw2", n, rep, seed, aw.aw2_squared, aw_oracle, ms,
                                     std::string(to_string(mode)), aw.delta_mu));

      if (!ou) {
        start = std::chrono::steady_clock::now();
        double w2 = w2_squared_empirical(mu, nu);
        report.rows.push_back(make_row("fakebm_w2", n, rep, seed, w2, w_oracle, elapsed_ms(start), "raw", 0.0));
      }
    }
  }
  return report;
}

std::vector<SummaryRow> ExperimentReport::summary() const {
  std::vector<SummaryRow> out;
  std::map<std::pair<std::string, std::size_t>, std::size_t> index;
  for (const auto& r : rows) {
    auto key = std::make_pair(r.experiment, r.n_samples);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      out.push_back({r.experiment, r.n_samples, 0, 0.0, r.oracle, 0.0, 0.0});
    }
    SummaryRow& s = out[it->second];
    ++s.reps;
    s.mean_estimate += r.estimate;
    s.mean_abs_error += r.abs_error;
    s.mean_wall_ms += r.wall_ms;
  }
  for (auto& s : out) {
    const double k = static_cast<double>(s.reps);
    s.mean_estimate /= k;
    s.mean_abs_error /= k;
    s.mean_wall_ms /= k;
  }
  return out;
}

void write_report_csv(const ExperimentReport& report, std::ostream& out) {
  out << "experiment,n_samples,rep,seed,estimate,oracle,abs_error,wall_ms,mode,delta\n";
  for (const auto& r : report.rows) {
    out << r.experiment << ',' << r.n_samples << ',' << r.rep << ',' << r.seed << ',' << format_double(r.estimate)
        << ',' << format_double(r.oracle) << ',' << format_double(r.abs_error) << ',' << format_double(r.wall_ms)
        << ',' << r.mode << ',' << format_double(r.delta) << '\n';
  }
  out << '\n';
  out << "experiment,n_samples,reps,mean_estimate,oracle,mean_abs_error,mean_wall_ms\n";
  for (const auto& s : report.summary()) {
    out << s.experiment << ',' << s.n_samples << ',' << s.reps << ',' << format_double(s.mean_estimate) << ','
        << format_double(s.oracle) << ',' << format_double(s.mean_abs_error) << ',' << format_double(s.mean_wall_ms)
        << '\n';
  }
}

}  // namespace nestedot::cli
