#include "nestedot/process_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nestedot/error.hpp"
#include "nestedot/linalg.hpp"

namespace nestedot {

void ProcessSpec::validate() const {
  if (times.empty()) throw Error(ErrorCode::InvalidTimes, "no observation times");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k]) || times[k] <= 0.0)
      throw Error(ErrorCode::InvalidTimes, "observation times must be positive");
    if (k && times[k] <= times[k - 1]) throw Error(ErrorCode::InvalidTimes, "observation times must increase");
  }
  if (auto* ou = std::get_if<OrnsteinUhlenbeck>(&kind)) {
    if (!(ou->sigma >= 0.0) || !std::isfinite(ou->sigma))
      throw Error(ErrorCode::InvalidArgument, "OU sigma must be nonnegative");
  }
  if (auto* fake = std::get_if<FakeBrownianMotion>(&kind)) {
    if (!(fake->delta > 0.0 && fake->delta < 1.0))
      throw Error(ErrorCode::InvalidArgument, "fake BM delta must lie in (0, 1)");
    if (times.back() > 1.0) throw Error(ErrorCode::InvalidTimes, "fake BM lives on [0, 1]");
    if (times.front() < fake->delta)
      throw Error(ErrorCode::InvalidTimes, "fake BM observations start at delta or later");
  }
}

bool ProcessSpec::is_fake_bm_triple() const {
  auto* fake = std::get_if<FakeBrownianMotion>(&kind);
  return fake && times.size() == 3 && times[0] == fake->delta && times[1] > fake->delta && times[1] < 1.0 &&
         times[2] == 1.0;
}

ProcessSpec bm_spec(std::vector<double> times) { return {BrownianMotion{}, std::move(times)}; }

ProcessSpec ou_spec(double sigma, std::size_t steps) {
  if (steps == 0) throw Error(ErrorCode::InvalidTimes, "OU needs at least one step");
  std::vector<double> times(steps);
  for (std::size_t k = 0; k < steps; ++k) times[k] = static_cast<double>(k + 1) / static_cast<double>(steps);
  return {OrnsteinUhlenbeck{sigma}, std::move(times)};
}

ProcessSpec fake_bm_spec(double delta, double t) { return {FakeBrownianMotion{delta}, {delta, t, 1.0}}; }

double NormalStream::uniform() {
  // 53 random bits, offset by half a step so the value is never 0 or 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform(), u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Matrix fake_bm_factor(double delta, double t) {
  if (!(delta > 0.0 && delta < t && t < 1.0))
    throw Error(ErrorCode::InvalidTimes, "fake BM factor needs 0 < delta < t < 1");
  const double sd = std::sqrt(delta);
  Matrix l(3, 3);
  l(0, 0) = sd;
  l(1, 0) = (t - delta + (1.0 - t) * sd) / (1.0 - delta);
  l(1, 1) = (1.0 - t) * (t - delta) / (std::sqrt(t) * (1.0 - delta));
  l(2, 0) = 1.0;
  return l;
}

namespace {

// Fake BM at time s as a linear function of Z and W at the grid `w_times`
// (which contains delta and 1).
void fake_bm_coefficients(double delta, double s, const std::vector<double>& w_times, std::vector<double>& coef) {
  auto slot = [&](double time) {
    return 1 + static_cast<std::size_t>(std::lower_bound(w_times.begin(), w_times.end(), time) - w_times.begin());
  };
  std::fill(coef.begin(), coef.end(), 0.0);
  if (s <= delta) {
    coef[0] = s / std::sqrt(delta);
    return;
  }
  const double a = (s - delta) / (1.0 - delta);
  const double b = (1.0 - s) / (1.0 - delta);
  coef[0] = a + b * std::sqrt(delta);
  coef[slot(s)] += 1.0;
  coef[slot(1.0)] -= a;
  coef[slot(delta)] -= b;
}

std::vector<double> fake_bm_w_grid(double delta, const std::vector<double>& times) {
  std::vector<double> grid = times;
  grid.push_back(delta);
  grid.push_back(1.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace

PathSet sample(const ProcessSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
  const std::size_t steps = spec.times.size();
  std::vector<double> values(n * steps);
  NormalStream normal(seed);

  if (std::holds_alternative<BrownianMotion>(spec.kind)) {
    for (std::size_t i = 0; i < n; ++i) {
      double w = 0.0, prev = 0.0;
      for (std::size_t k = 0; k < steps; ++k) {
        w += std::sqrt(spec.times[k] - prev) * normal.next();
        prev = spec.times[k];
        values[i * steps + k] = w;
      }
    }
  } else if (auto* ou = std::get_if<OrnsteinUhlenbeck>(&spec.kind)) {
    // Exact transition: X_{t+h} = e^{-h} X_t + sigma sqrt((1 - e^{-2h}) / 2) xi.
    for (std::size_t i = 0; i < n; ++i) {
      double x = 0.0, prev = 0.0;
      for (std::size_t k = 0; k < steps; ++k) {
        double h = spec.times[k] - prev;
        x = std::exp(-h) * x + ou->sigma * std::sqrt(-std::expm1(-2.0 * h) / 2.0) * normal.next();
        prev = spec.times[k];
        values[i * steps + k] = x;
      }
    }
  } else {
    const auto& fake = std::get<FakeBrownianMotion>(spec.kind);
    if (spec.is_fake_bm_triple()) {
      Matrix l = fake_bm_factor(fake.delta, spec.times[1]);
      for (std::size_t i = 0; i < n; ++i) {
        double g[3] = {normal.next(), normal.next(), normal.next()};
        for (std::size_t r = 0; r < 3; ++r) {
          double x = 0.0;
          for (std::size_t c = 0; c <= r; ++c) x += l(r, c) * g[c];
          values[i * 3 + r] = x;
        }
      }
    } else {
      std::vector<double> grid = fake_bm_w_grid(fake.delta, spec.times);
      std::vector<double> basis(grid.size() + 1), coef(grid.size() + 1);
      for (std::size_t i = 0; i < n; ++i) {
        basis[0] = normal.next();
        double w = 0.0, prev = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
          w += std::sqrt(grid[k] - prev) * normal.next();
          prev = grid[k];
          basis[k + 1] = w;
        }
        for (std::size_t k = 0; k < steps; ++k) {
          fake_bm_coefficients(fake.delta, spec.times[k], grid, coef);
          double x = 0.0;
          for (std::size_t c = 0; c < coef.size(); ++c) x += coef[c] * basis[c];
          values[i * steps + k] = x;
        }
      }
    }
  }
  return PathSet(n, steps, 1, std::move(values));
}

GaussianSpec exact_gaussian_spec(const ProcessSpec& spec) {
  spec.validate();
  const std::size_t steps = spec.times.size();
  const auto& times = spec.times;
  GaussianSpec out;
  out.mean.assign(steps, 0.0);
  out.dim = 1;
  out.steps = steps;

  if (std::holds_alternative<BrownianMotion>(spec.kind)) {
    // W_{t_k} = sum_{j<=k} sqrt(t_j - t_{j-1}) xi_j
    Matrix l(steps, steps);
    for (std::size_t k = 0; k < steps; ++k)
      for (std::size_t j = 0; j <= k; ++j) l(k, j) = std::sqrt(times[j] - (j ? times[j - 1] : 0.0));
    out.factor = std::move(l);
    return out;
  }
  if (auto* ou = std::get_if<OrnsteinUhlenbeck>(&spec.kind)) {
    Matrix c(steps, steps);
    const double half_var = ou->sigma * ou->sigma / 2.0;
    for (std::size_t i = 0; i < steps; ++i)
      for (std::size_t j = 0; j < steps; ++j)
        c(i, j) = half_var * (std::exp(-std::abs(times[i] - times[j])) - std::exp(-(times[i] + times[j])));
    out.covariance = std::move(c);
    return out;
  }
  const auto& fake = std::get<FakeBrownianMotion>(spec.kind);
  if (spec.is_fake_bm_triple()) {
    out.factor = fake_bm_factor(fake.delta, times[1]);
    return out;
  }
  // General grid: X = K (Z, W_grid), Cov = K diag(1, min(s, s')) K^T.
  std::vector<double> grid = fake_bm_w_grid(fake.delta, times);
  const std::size_t b = grid.size() + 1;
  Matrix basis_cov(b, b);
  basis_cov(0, 0) = 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < grid.size(); ++j) basis_cov(i + 1, j + 1) = std::min(grid[i], grid[j]);
  Matrix k(steps, b);
  std::vector<double> coef(b);
  for (std::size_t r = 0; r < steps; ++r) {
    fake_bm_coefficients(fake.delta, times[r], grid, coef);
    for (std::size_t c = 0; c < b; ++c) k(r, c) = coef[c];
  }
  Matrix c = k * basis_cov * k.transpose();
  out.covariance = 0.5 * (c + c.transpose());
  return out;
}

}  // namespace nestedot
