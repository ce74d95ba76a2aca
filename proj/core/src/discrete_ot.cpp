#include "nestedot/discrete_ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <type_traits>

#include "nestedot/error.hpp"

namespace nestedot {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), costs_(rows * cols, 0.0) {}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> costs)
    : rows_(rows), cols_(cols), costs_(std::move(costs)) {
  if (costs_.size() != rows_ * cols_)
    throw Error(ErrorCode::DimensionMismatch, "cost array size does not match rows*cols");
}

void CostMatrix::resize(std::size_t rows, std::size_t cols) {
  rows_ = rows;
  cols_ = cols;
  costs_.resize(rows * cols);
}

void CostMatrix::validate() const {
  for (double c : costs_)
    if (!std::isfinite(c) || c < 0.0)
      throw Error(ErrorCode::InvalidArgument, "costs must be finite and nonnegative");
}

namespace {

// Primal network simplex on the complete bipartite graph sources -> sinks
// plus an artificial root. Entering arcs by block search, leaving arcs by
// the strongly-feasible-tree rule (last blocking arc from the apex), which
// rules out cycling on degenerate pivots.
template <class F>
class NetworkSimplex {
 public:
  double run(std::span<const F> supply, std::span<const F> demand, const CostMatrix& costs, F total,
             TransportPlan* plan) {
    m_ = static_cast<int>(supply.size());
    n_ = static_cast<int>(demand.size());
    mn_ = static_cast<std::size_t>(m_) * static_cast<std::size_t>(n_);
    root_ = m_ + n_;
    const int nodes = m_ + n_ + 1;
    cost_ = costs.data().data();

    double max_cost = 0.0;
    for (double c : costs.data()) max_cost = std::max(max_cost, c);
    const double scale = max_cost > 0.0 ? max_cost : 1.0;
    big_m_ = scale * static_cast<double>(nodes);
    eps_ = 1e-14 * big_m_;

    flow_.assign(mn_ + static_cast<std::size_t>(m_ + n_), F{0});
    parent_.assign(nodes, -1);
    pred_.assign(nodes, -1);
    depth_.assign(nodes, 0);
    pot_.assign(nodes, 0.0);
    if (adj_.size() < static_cast<std::size_t>(nodes)) adj_.resize(nodes);
    for (int v = 0; v < nodes; ++v) adj_[v].clear();

    for (int k = 0; k < m_ + n_; ++k) {
      std::size_t e = mn_ + static_cast<std::size_t>(k);
      flow_[e] = k < m_ ? supply[k] : demand[k - m_];
      parent_[k] = root_;
      pred_[k] = static_cast<long>(e);
      depth_[k] = 1;
      pot_[k] = k < m_ ? -big_m_ : big_m_;
      adj_[k].push_back(static_cast<long>(e));
      adj_[root_].push_back(static_cast<long>(e));
    }

    block_ = std::max<std::size_t>(10, static_cast<std::size_t>(std::sqrt(static_cast<double>(mn_))));
    block_ = std::min(block_, mn_);
    next_arc_ = 0;
    pivots_ = 0;
    const std::size_t pivot_cap = 50 * (mn_ + static_cast<std::size_t>(nodes)) + 100000;

    while (true) {
      long entering = find_entering();
      if (entering < 0) break;
      pivot(static_cast<std::size_t>(entering));
      if (++pivots_ > pivot_cap) throw Error(ErrorCode::NoConvergence, "network simplex pivot cap reached");
    }

    certify(max_cost);

    // Nonzero flows live on tree arcs only.
    double objective = 0.0;
    if (plan) plan->flows.clear();
    const double denom = static_cast<double>(total);
    for (int v = 0; v < root_; ++v) {
      std::size_t e = static_cast<std::size_t>(pred_[v]);
      if (e >= mn_ || flow_[e] <= F{0}) continue;
      double mass = static_cast<double>(flow_[e]) / denom;
      objective += static_cast<double>(flow_[e]) * cost_[e];
      if (plan) plan->flows.push_back({e / static_cast<std::size_t>(n_), e % static_cast<std::size_t>(n_), mass});
    }
    objective /= denom;
    if (plan) {
      std::sort(plan->flows.begin(), plan->flows.end(),
                [](const Flow& a, const Flow& b) { return a.source != b.source ? a.source < b.source : a.target < b.target; });
      plan->objective = objective;
    }
    return objective;
  }

  std::size_t pivots() const noexcept { return pivots_; }

 private:
  int source(std::size_t e) const noexcept {
    if (e < mn_) return static_cast<int>(e / static_cast<std::size_t>(n_));
    int k = static_cast<int>(e - mn_);
    return k < m_ ? k : root_;
  }
  int target(std::size_t e) const noexcept {
    if (e < mn_) return m_ + static_cast<int>(e % static_cast<std::size_t>(n_));
    int k = static_cast<int>(e - mn_);
    return k < m_ ? root_ : k;
  }
  double cost(std::size_t e) const noexcept { return e < mn_ ? cost_[e] : big_m_; }

  long find_entering() {
    double best = -eps_;
    long best_arc = -1;
    std::size_t e = next_arc_;
    std::size_t i = e / static_cast<std::size_t>(n_);
    std::size_t j = e % static_cast<std::size_t>(n_);
    std::size_t in_block = 0;
    for (std::size_t scanned = 0; scanned < mn_; ++scanned) {
      double rc = cost_[e] + pot_[i] - pot_[static_cast<std::size_t>(m_) + j];
      if (rc < best) {
        best = rc;
        best_arc = static_cast<long>(e);
      }
      ++e;
      if (++j == static_cast<std::size_t>(n_)) {
        j = 0;
        if (++i == static_cast<std::size_t>(m_)) {
          i = 0;
          e = 0;
        }
      }
      if (++in_block == block_) {
        if (best_arc >= 0) break;
        in_block = 0;
      }
    }
    next_arc_ = e;
    return best_arc;
  }

  void pivot(std::size_t e_in) {
    const int first = source(e_in);
    const int second = target(e_in);

    int a = first, b = second;
    while (a != b) {
      if (depth_[a] > depth_[b]) {
        a = parent_[a];
      } else if (depth_[b] > depth_[a]) {
        b = parent_[b];
      } else {
        a = parent_[a];
        b = parent_[b];
      }
    }
    const int join = a;

    // The cycle runs first -> second along e_in, second up to join, join
    // down to first. Blocking arcs are the ones traversed against their
    // orientation.
    bool have = false;
    F delta{};
    int leave = -1;
    bool leave_first_side = true;
    for (int x = first; x != join; x = parent_[x]) {
      std::size_t e = static_cast<std::size_t>(pred_[x]);
      if (source(e) != x) continue;  // parent -> x is traversed forward
      if (!have || flow_[e] < delta) {
        have = true;
        delta = flow_[e];
        leave = x;
        leave_first_side = true;
      }
    }
    for (int x = second; x != join; x = parent_[x]) {
      std::size_t e = static_cast<std::size_t>(pred_[x]);
      if (source(e) == x) continue;  // x -> parent is traversed forward
      if (!have || flow_[e] <= delta) {
        have = true;
        delta = flow_[e];
        leave = x;
        leave_first_side = false;
      }
    }
    if (!have) throw Error(ErrorCode::NoConvergence, "unbounded pivot in transportation problem");

    if (delta > F{0}) {
      flow_[e_in] += delta;
      for (int x = first; x != join; x = parent_[x]) {
        std::size_t e = static_cast<std::size_t>(pred_[x]);
        if (source(e) == x) flow_[e] -= delta; else flow_[e] += delta;
      }
      for (int x = second; x != join; x = parent_[x]) {
        std::size_t e = static_cast<std::size_t>(pred_[x]);
        if (source(e) == x) flow_[e] += delta; else flow_[e] -= delta;
      }
    }

    const long e_out = pred_[leave];
    remove_adjacent(leave, e_out);
    remove_adjacent(parent_[leave], e_out);
    adj_[first].push_back(static_cast<long>(e_in));
    adj_[second].push_back(static_cast<long>(e_in));

    const int sub_root = leave_first_side ? first : second;
    const int new_parent = leave_first_side ? second : first;
    attach(sub_root, new_parent, static_cast<long>(e_in));

    stack_.clear();
    stack_.push_back(sub_root);
    while (!stack_.empty()) {
      int x = stack_.back();
      stack_.pop_back();
      for (long e : adj_[x]) {
        if (e == pred_[x]) continue;
        std::size_t ue = static_cast<std::size_t>(e);
        int y = source(ue) == x ? target(ue) : source(ue);
        attach(y, x, e);
        stack_.push_back(y);
      }
    }
  }

  void attach(int child, int par, long e) {
    parent_[child] = par;
    pred_[child] = e;
    depth_[child] = depth_[par] + 1;
    std::size_t ue = static_cast<std::size_t>(e);
    pot_[child] = source(ue) == par ? pot_[par] + cost(ue) : pot_[par] - cost(ue);
  }

  void remove_adjacent(int v, long e) {
    auto& list = adj_[v];
    auto it = std::find(list.begin(), list.end(), e);
    *it = list.back();
    list.pop_back();
  }

  void certify(double max_cost) {
    // Artificial arcs must be empty and reduced costs nonnegative.
    for (int k = 0; k < m_ + n_; ++k) {
      F f = flow_[mn_ + static_cast<std::size_t>(k)];
      if constexpr (std::is_integral_v<F>) {
        if (f != 0) throw Error(ErrorCode::InfeasibleWeights, "supplies and demands do not balance");
      } else {
        if (f > 1e-9) throw Error(ErrorCode::InfeasibleWeights, "supplies and demands do not balance");
      }
    }
    double worst = 0.0;
    for (std::size_t e = 0; e < mn_; ++e) {
      double rc = cost_[e] + pot_[e / static_cast<std::size_t>(n_)] -
                  pot_[static_cast<std::size_t>(m_) + e % static_cast<std::size_t>(n_)];
      if (rc < 0.0) worst = std::max(worst, -rc);
      if (flow_[e] > F{0}) worst = std::max(worst, std::abs(rc));
    }
    if (worst > 1e-9 * std::max(max_cost, std::numeric_limits<double>::min()) && worst > 1e-300)
      throw Error(ErrorCode::NoConvergence,
                  "optimality certificate failed (residual " + std::to_string(worst) + ")");
  }

  int m_ = 0, n_ = 0, root_ = 0;
  std::size_t mn_ = 0;
  const double* cost_ = nullptr;
  double big_m_ = 0.0, eps_ = 0.0;
  std::vector<F> flow_;
  std::vector<int> parent_;
  std::vector<long> pred_;
  std::vector<int> depth_;
  std::vector<double> pot_;
  std::vector<std::vector<long>> adj_;
  std::vector<int> stack_;
  std::size_t block_ = 0, next_arc_ = 0, pivots_ = 0;
};

template <class F>
double trivial_solve(std::span<const F> supply, std::span<const F> demand, const CostMatrix& costs, F total,
                     TransportPlan* plan) {
  // One side is a single atom: the only coupling is the product.
  double objective = 0.0;
  if (plan) plan->flows.clear();
  const double denom = static_cast<double>(total);
  if (supply.size() == 1) {
    for (std::size_t j = 0; j < demand.size(); ++j) {
      objective += static_cast<double>(demand[j]) * costs(0, j);
      if (plan) plan->flows.push_back({0, j, static_cast<double>(demand[j]) / denom});
    }
  } else {
    for (std::size_t i = 0; i < supply.size(); ++i) {
      objective += static_cast<double>(supply[i]) * costs(i, 0);
      if (plan) plan->flows.push_back({i, 0, static_cast<double>(supply[i]) / denom});
    }
  }
  objective /= denom;
  if (plan) plan->objective = objective;
  return objective;
}

void check_shape(std::size_t m, std::size_t n, const CostMatrix& costs) {
  if (m == 0 || n == 0) throw Error(ErrorCode::DimensionMismatch, "empty weight vector");
  if (costs.rows() != m || costs.cols() != n)
    throw Error(ErrorCode::DimensionMismatch,
                "cost matrix is " + std::to_string(costs.rows()) + "x" + std::to_string(costs.cols()) +
                    ", weights are " + std::to_string(m) + " and " + std::to_string(n));
}

}  // namespace

struct ExactSolver::Impl {
  NetworkSimplex<std::int64_t> integral;
  NetworkSimplex<double> real;
  std::size_t last_pivots = 0;
};

ExactSolver::ExactSolver() : impl_(std::make_unique<Impl>()) {}
ExactSolver::~ExactSolver() = default;
ExactSolver::ExactSolver(ExactSolver&&) noexcept = default;
ExactSolver& ExactSolver::operator=(ExactSolver&&) noexcept = default;

std::size_t ExactSolver::last_pivots() const noexcept { return impl_->last_pivots; }

double ExactSolver::solve(std::span<const std::int64_t> supply, std::span<const std::int64_t> demand,
                          const CostMatrix& costs, TransportPlan* plan) {
  check_shape(supply.size(), demand.size(), costs);
  std::int64_t total_s = 0, total_d = 0;
  for (auto s : supply) {
    if (s <= 0) throw Error(ErrorCode::InfeasibleWeights, "masses must be positive");
    total_s += s;
  }
  for (auto d : demand) {
    if (d <= 0) throw Error(ErrorCode::InfeasibleWeights, "masses must be positive");
    total_d += d;
  }
  if (total_s != total_d)
    throw Error(ErrorCode::InfeasibleWeights,
                "total supply " + std::to_string(total_s) + " != total demand " + std::to_string(total_d));
  impl_->last_pivots = 0;
  if (supply.size() == 1 || demand.size() == 1) return trivial_solve(supply, demand, costs, total_s, plan);
  double v = impl_->integral.run(supply, demand, costs, total_s, plan);
  impl_->last_pivots = impl_->integral.pivots();
  return v;
}

double ExactSolver::solve(std::span<const double> source_weights, std::span<const double> target_weights,
                          const CostMatrix& costs, TransportPlan* plan) {
  check_shape(source_weights.size(), target_weights.size(), costs);
  double total_s = 0.0, total_d = 0.0;
  for (double w : source_weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorCode::InfeasibleWeights, "weights must be positive");
    total_s += w;
  }
  for (double w : target_weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorCode::InfeasibleWeights, "weights must be positive");
    total_d += w;
  }
  if (std::abs(total_s - 1.0) > 1e-9 || std::abs(total_d - 1.0) > 1e-9)
    throw Error(ErrorCode::InfeasibleWeights, "weights must sum to 1");
  impl_->last_pivots = 0;
  if (source_weights.size() == 1 || target_weights.size() == 1)
    return trivial_solve(source_weights, target_weights, costs, 1.0, plan);
  double v = impl_->real.run(source_weights, target_weights, costs, 1.0, plan);
  impl_->last_pivots = impl_->real.pivots();
  return v;
}

TransportPlan solve_exact(std::span<const double> source_weights, std::span<const double> target_weights,
                          const CostMatrix& costs) {
  costs.validate();
  ExactSolver solver;
  TransportPlan plan;
  solver.solve(source_weights, target_weights, costs, &plan);
  return plan;
}

TransportPlan solve_exact(std::span<const std::int64_t> supply, std::span<const std::int64_t> demand,
                          const CostMatrix& costs) {
  costs.validate();
  ExactSolver solver;
  TransportPlan plan;
  solver.solve(supply, demand, costs, &plan);
  return plan;
}

TransportPlan solve_sorted_1d(std::span<const WeightedPoint> source, std::span<const WeightedPoint> target) {
  if (source.empty() || target.empty()) throw Error(ErrorCode::DimensionMismatch, "empty support");
  double total_s = 0.0, total_d = 0.0;
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (!(source[i].weight > 0.0)) throw Error(ErrorCode::InfeasibleWeights, "weights must be positive");
    if (i && source[i].x < source[i - 1].x) throw Error(ErrorCode::InvalidArgument, "source not sorted");
    total_s += source[i].weight;
  }
  for (std::size_t j = 0; j < target.size(); ++j) {
    if (!(target[j].weight > 0.0)) throw Error(ErrorCode::InfeasibleWeights, "weights must be positive");
    if (j && target[j].x < target[j - 1].x) throw Error(ErrorCode::InvalidArgument, "target not sorted");
    total_d += target[j].weight;
  }
  if (std::abs(total_s - 1.0) > 1e-9 || std::abs(total_d - 1.0) > 1e-9)
    throw Error(ErrorCode::InfeasibleWeights, "weights must sum to 1");

  // North-west corner on sorted supports. Each step exhausts at least one
  // side exactly; float residue left when one side runs out is absorbed by
  // the other side's last atom.
  TransportPlan plan;
  std::size_t i = 0, j = 0;
  double rs = source[0].weight, rt = target[0].weight;
  while (true) {
    double f = std::min(rs, rt);
    if (f > 0.0) {
      double dx = source[i].x - target[j].x;
      plan.flows.push_back({i, j, f});
      plan.objective += f * dx * dx;
    }
    rs -= f;
    rt -= f;
    const bool end_i = i + 1 == source.size(), end_j = j + 1 == target.size();
    if (end_i && end_j) break;
    if (rs == 0.0 && !end_i) {
      rs = source[++i].weight;
    } else if (rt == 0.0 && !end_j) {
      rt = target[++j].weight;
    } else if (end_i) {
      rs = rt;
    } else {
      rt = rs;
    }
  }
  return plan;
}

double sorted_1d_value(std::span<const double> source_x, std::span<const std::int64_t> source_mass,
                       std::span<const double> target_x, std::span<const std::int64_t> target_mass) {
  std::int64_t total = 0;
  for (auto m : source_mass) total += m;
  double objective = 0.0;
  std::size_t i = 0, j = 0;
  std::int64_t rs = source_mass[0], rt = target_mass[0];
  while (true) {
    std::int64_t f = std::min(rs, rt);
    double dx = source_x[i] - target_x[j];
    objective += static_cast<double>(f) * dx * dx;
    rs -= f;
    rt -= f;
    if (rs == 0) {
      if (++i == source_x.size()) break;
      rs = source_mass[i];
    }
    if (rt == 0) {
      if (++j == target_x.size()) break;
      rt = target_mass[j];
    }
  }
  return objective / static_cast<double>(total);
}

namespace {

CostMatrix path_costs(std::span<const double> a, std::size_t na, std::span<const double> b, std::size_t nb,
                      std::size_t width) {
  CostMatrix c(na, nb);
  for (std::size_t i = 0; i < na; ++i) {
    const double* x = a.data() + i * width;
    for (std::size_t j = 0; j < nb; ++j) {
      const double* y = b.data() + j * width;
      double s = 0.0;
      for (std::size_t k = 0; k < width; ++k) {
        double d = x[k] - y[k];
        s += d * d;
      }
      c(i, j) = s;
    }
  }
  return c;
}

}  // namespace

double w2_squared_empirical(const PathSet& mu, const PathSet& nu, std::size_t size_cap) {
  if (mu.t_steps() != nu.t_steps() || mu.dim() != nu.dim())
    throw Error(ErrorCode::DimensionMismatch, "path sets differ in shape");
  if (mu.n_samples() > size_cap || nu.n_samples() > size_cap)
    throw Error(ErrorCode::SizeCapExceeded,
                "W2 size cap " + std::to_string(size_cap) + " exceeded (" + std::to_string(mu.n_samples()) +
                    " x " + std::to_string(nu.n_samples()) + ")");
  CostMatrix c = path_costs(mu.values(), mu.n_samples(), nu.values(), nu.n_samples(), mu.row_size());
  // Uniform weights 1/n_mu and 1/n_nu scaled to the common total n_mu*n_nu.
  const auto nm = static_cast<std::int64_t>(mu.n_samples());
  const auto nn = static_cast<std::int64_t>(nu.n_samples());
  std::vector<std::int64_t> supply(mu.n_samples(), nn), demand(nu.n_samples(), nm);
  ExactSolver solver;
  return solver.solve(supply, demand, c);
}

double w2_squared_quantized(const QuantizedPathSet& mu, const QuantizedPathSet& nu, std::size_t size_cap) {
  if (mu.t_steps() != nu.t_steps() || mu.dim() != nu.dim())
    throw Error(ErrorCode::DimensionMismatch, "quantized sets differ in shape");
  if (mu.support_size() > size_cap || nu.support_size() > size_cap)
    throw Error(ErrorCode::SizeCapExceeded, "W2 size cap " + std::to_string(size_cap) + " exceeded");
  PathSet a = mu.support_paths(), b = nu.support_paths();
  CostMatrix c = path_costs(a.values(), a.n_samples(), b.values(), b.n_samples(), a.row_size());
  std::vector<std::int64_t> supply(mu.support_size()), demand(nu.support_size());
  for (std::size_t i = 0; i < supply.size(); ++i) supply[i] = mu.multiplicity(i) * nu.total();
  for (std::size_t j = 0; j < demand.size(); ++j) demand[j] = nu.multiplicity(j) * mu.total();
  ExactSolver solver;
  return solver.solve(supply, demand, c);
}

}  // namespace nestedot
