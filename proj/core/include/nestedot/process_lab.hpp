#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "nestedot/gaussian_oracle.hpp"
#include "nestedot/path_set.hpp"

namespace nestedot {

struct BrownianMotion {};

// dX = -X dt + sigma dW, X_0 = 0.
struct OrnsteinUhlenbeck {
  double sigma = 1.0;
};

// Brownian-looking process with X_delta = sqrt(delta) * X_1.
struct FakeBrownianMotion {
  double delta = 0.1;
};

using ProcessKind = std::variant<BrownianMotion, OrnsteinUhlenbeck, FakeBrownianMotion>;

struct ProcessSpec {
  ProcessKind kind;
  std::vector<double> times;  // strictly increasing, positive; scalar paths

  void validate() const;
  // True for fake BM observed exactly at (delta, t, 1).
  bool is_fake_bm_triple() const;
};

ProcessSpec bm_spec(std::vector<double> times);
// Observation grid k / steps, k = 1..steps.
ProcessSpec ou_spec(double sigma, std::size_t steps);
ProcessSpec fake_bm_spec(double delta, double t);

// Fully specified normal generator: mt19937_64 bits mapped to
// (0, 1) uniforms and paired through Box-Muller, so a seed reproduces the
// same paths on every platform.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
  double next();

 private:
  double uniform();
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

PathSet sample(const ProcessSpec& spec, std::size_t n, std::uint64_t seed);

// Exact law of the sampled vector. Fake BM at (delta, t, 1) returns the
// factor L_{delta,t} itself (it is singular, and this factor is the one that
// carries the process's filtration); BM returns its increment factor; the
// other cases return a covariance.
GaussianSpec exact_gaussian_spec(const ProcessSpec& spec);

// 3x3 lower-triangular factor mapping (Z, W_t/sqrt(t), (W_1-W_t)/sqrt(1-t))
// to (X_delta, X_t, X_1).
Matrix fake_bm_factor(double delta, double t);

}  // namespace nestedot
