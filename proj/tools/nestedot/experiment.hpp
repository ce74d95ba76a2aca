#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nestedot::cli {

// Convergence studies against closed-form Gaussian values:
//   "ou"     - OU sigma=1 vs sigma=3 on k/5, k=1..5, Markov estimator
//   "fakebm" - fake BM vs BM at (0.1, 0.5, 1), full-history estimator, plus
//              exact W2 on the raw samples
struct ExperimentConfig {
  std::string kind;
  std::vector<std::size_t> sizes{250, 500, 1000, 2000, 4000};
  std::size_t reps = 10;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct ExperimentRow {
  std::string experiment;  // ou_aw2, fakebm_aw2, fakebm_w2
  std::size_t n_samples = 0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  double estimate = 0.0;
  double oracle = 0.0;
  double abs_error = 0.0;
  double wall_ms = 0.0;
  std::string mode;  // markov, full_history, raw
  double delta = 0.0;
};

struct SummaryRow {
  std::string experiment;
  std::size_t n_samples = 0;
  std::size_t reps = 0;
  double mean_estimate = 0.0;
  double oracle = 0.0;
  double mean_abs_error = 0.0;
  double mean_wall_ms = 0.0;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  std::vector<SummaryRow> summary() const;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

// Two CSV sections separated by a blank line: the per-run rows, then the
// per-size summary.
void write_report_csv(const ExperimentReport& report, std::ostream& out);

// Seeds of the two samples behind one report row.
std::uint64_t row_seed(std::uint64_t base, std::size_t n_samples, std::size_t rep);
std::uint64_t mu_seed(std::uint64_t row);
std::uint64_t nu_seed(std::uint64_t row);

}  // namespace nestedot::cli
