#include "nestedot/nested_dp.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <string>

#include "nestedot/discrete_ot.hpp"
#include "nestedot/error.hpp"
#include "nestedot/parallel.hpp"

namespace nestedot {
namespace {

struct Workspace {
  ExactSolver solver;
  CostMatrix cost;
  std::vector<std::int64_t> supply;
  std::vector<std::int64_t> demand;
  std::vector<double> xs;
  std::vector<double> ys;
};

struct Stage {
  std::span<const TreeNode> mu_next;
  std::span<const TreeNode> nu_next;
  const ValueTable* continuation;  // nullptr means V_{t+1} = 0
  std::size_t dim;
  bool sorted_fast_path;
};

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

double solve_pair(const TreeNode& u, const TreeNode& v, const Stage& stage, Workspace& ws) {
  const auto& ca = u.children;
  const auto& cb = v.children;
  // Conditional weights count/mass brought to the common denominator
  // mass_u * mass_v.
  ws.supply.resize(ca.size());
  ws.demand.resize(cb.size());
  for (std::size_t a = 0; a < ca.size(); ++a) ws.supply[a] = ca[a].count * v.mass;
  for (std::size_t b = 0; b < cb.size(); ++b) ws.demand[b] = cb[b].count * u.mass;

  if (stage.sorted_fast_path) {
    ws.xs.resize(ca.size());
    ws.ys.resize(cb.size());
    for (std::size_t a = 0; a < ca.size(); ++a) ws.xs[a] = stage.mu_next[ca[a].node].point[0];
    for (std::size_t b = 0; b < cb.size(); ++b) ws.ys[b] = stage.nu_next[cb[b].node].point[0];
    return sorted_1d_value(ws.xs, ws.supply, ws.ys, ws.demand);
  }

  ws.cost.resize(ca.size(), cb.size());
  for (std::size_t a = 0; a < ca.size(); ++a) {
    std::span<const double> p = stage.mu_next[ca[a].node].point;
    for (std::size_t b = 0; b < cb.size(); ++b) {
      double c = squared_distance(p, stage.nu_next[cb[b].node].point);
      if (stage.continuation) c += (*stage.continuation)(ca[a].node, cb[b].node);
      ws.cost(a, b) = c;
    }
  }
  return ws.solver.solve(std::span<const std::int64_t>(ws.supply), std::span<const std::int64_t>(ws.demand),
                         ws.cost);
}

// Pair indices u * cols + v ordered by decreasing children(u) * children(v),
// ties in index order. Counting sort over the distinct child counts keeps
// this linear in the number of pairs.
std::vector<std::size_t> largest_first(std::span<const TreeNode> rows, std::span<const TreeNode> cols) {
  std::size_t max_row = 0, max_col = 0;
  for (const auto& n : rows) max_row = std::max(max_row, n.children.size());
  for (const auto& n : cols) max_col = std::max(max_col, n.children.size());
  const std::size_t pairs = rows.size() * cols.size();
  std::vector<std::size_t> order(pairs);
  const std::size_t max_work = max_row * max_col;
  if (max_work > 4 * pairs + 1024) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto work = [&](std::size_t idx) {
      return rows[idx / cols.size()].children.size() * cols[idx % cols.size()].children.size();
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return work(a) > work(b); });
    return order;
  }
  // bucket b holds work max_work - b, so ascending buckets give descending work
  std::vector<std::size_t> start(max_work + 2, 0);
  for (const auto& r : rows)
    for (const auto& c : cols) ++start[max_work - r.children.size() * c.children.size() + 1];
  for (std::size_t b = 1; b < start.size(); ++b) start[b] += start[b - 1];
  std::size_t idx = 0;
  for (const auto& r : rows)
    for (const auto& c : cols) order[start[max_work - r.children.size() * c.children.size()]++] = idx++;
  return order;
}

}  // namespace

AwResult aw2_squared(const PrefixTree& mu_tree, const PrefixTree& nu_tree, const DpOptions& options) {
  if (mu_tree.mode() != nu_tree.mode())
    throw Error(ErrorCode::ModeMismatch, "trees were built in different modes");
  if (mu_tree.t_steps() != nu_tree.t_steps() || mu_tree.dim() != nu_tree.dim())
    throw Error(ErrorCode::ShapeMismatch,
                "tree shapes differ: T=" + std::to_string(mu_tree.t_steps()) + ",d=" +
                    std::to_string(mu_tree.dim()) + " vs T=" + std::to_string(nu_tree.t_steps()) +
                    ",d=" + std::to_string(nu_tree.dim()));

  const std::size_t T = mu_tree.t_steps();
  const std::size_t threads = std::max<std::size_t>(1, options.threads);
  std::vector<Workspace> workspaces(threads);

  AwResult result;
  result.n_mu = mu_tree.n_samples();
  result.n_nu = nu_tree.n_samples();
  result.delta_mu = mu_tree.grid().delta;
  result.delta_nu = nu_tree.grid().delta;
  result.mode = mu_tree.mode();

  ValueTable next;
  bool have_next = false;
  for (std::size_t t = T; t-- > 0;) {
    auto start = std::chrono::steady_clock::now();
    auto mu_nodes = mu_tree.nodes_at_depth(t);
    auto nu_nodes = nu_tree.nodes_at_depth(t);

    Stage stage{mu_tree.nodes_at_depth(t + 1), nu_tree.nodes_at_depth(t + 1), have_next ? &next : nullptr,
                mu_tree.dim(), options.sorted_last_stage && !have_next && mu_tree.dim() == 1};

    ValueTable current(t, mu_nodes.size(), nu_nodes.size());
    const std::size_t pairs = current.size();
    const std::size_t cols = nu_nodes.size();

    // Largest subproblems first for load balance; every entry is computed
    // independently, so the order never affects the values.
    std::vector<std::size_t> order;
    if (threads > 1 && pairs > 1) order = largest_first(mu_nodes, nu_nodes);

    const std::size_t chunk = std::max<std::size_t>(1, pairs / (threads * 64));
    parallel_for(pairs, threads, chunk, [&](std::size_t task, std::size_t worker) {
      std::size_t idx = order.empty() ? task : order[task];
      std::size_t u = idx / cols, v = idx % cols;
      current(u, v) = solve_pair(mu_nodes[u], nu_nodes[v], stage, workspaces[worker]);
    });

    auto stop = std::chrono::steady_clock::now();
    result.stage_stats.push_back(
        {t, pairs, std::chrono::duration<double, std::milli>(stop - start).count()});
    next = std::move(current);
    have_next = true;
  }
  result.aw2_squared = next(0, 0);
  return result;
}

AwResult compute_aw2(const PathSet& mu, const PathSet& nu, const AwConfig& config) {
  if (mu.t_steps() != nu.t_steps() || mu.dim() != nu.dim())
    throw Error(ErrorCode::ShapeMismatch,
                "path sets differ in shape: T=" + std::to_string(mu.t_steps()) + ",d=" + std::to_string(mu.dim()) +
                    " vs T=" + std::to_string(nu.t_steps()) + ",d=" + std::to_string(nu.dim()));
  const bool markov = config.mode == TreeMode::Markov;
  GridSpec grid_mu{config.delta_mu.value_or(default_delta(mu.n_samples(), mu.dim(), mu.t_steps(), markov)),
                   config.origin};
  GridSpec grid_nu{config.delta_nu.value_or(default_delta(nu.n_samples(), nu.dim(), nu.t_steps(), markov)),
                   config.origin};
  PrefixTree mu_tree(quantize(mu, grid_mu), config.mode);
  PrefixTree nu_tree(quantize(nu, grid_nu), config.mode);
  return aw2_squared(mu_tree, nu_tree, DpOptions{config.threads, true});
}

}  // namespace nestedot
