#include "nestedot/prefix_tree.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "nestedot/error.hpp"

namespace nestedot {

std::string_view to_string(TreeMode mode) noexcept {
  return mode == TreeMode::Markov ? "markov" : "full_history";
}

namespace {

struct Transition {
  std::size_t from;   // node index at depth t (full-history) or sample's state node
  std::size_t path;   // support path
};

TreeNode make_node(const QuantizedPathSet& q, std::size_t depth, std::size_t path, std::size_t parent) {
  TreeNode node;
  node.depth = depth;
  auto cells = q.cells(path).subspan((depth - 1) * q.dim(), q.dim());
  node.cell.assign(cells.begin(), cells.end());
  node.point.resize(q.dim());
  for (std::size_t j = 0; j < q.dim(); ++j) node.point[j] = q.grid().center(node.cell[j]);
  node.parent = parent;
  return node;
}

}  // namespace

PrefixTree::PrefixTree(const QuantizedPathSet& q, TreeMode mode)
    : mode_(mode), t_steps_(q.t_steps()), dim_(q.dim()), n_samples_(q.total()), grid_(q.grid()) {
  const std::size_t n_paths = q.support_size();
  const std::size_t d = dim_;
  levels_.resize(t_steps_ + 1);

  TreeNode root;
  root.mass = n_samples_;
  levels_[0].push_back(std::move(root));

  auto state = [&](std::size_t path, std::size_t t) { return q.cells(path).subspan((t - 1) * d, d); };
  auto less_state = [](std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  };

  // node_of[p] = node of support path p at the current depth
  std::vector<std::size_t> node_of(n_paths, 0);
  std::vector<std::size_t> order(n_paths);

  for (std::size_t t = 1; t <= t_steps_; ++t) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto& level = levels_[t];
    std::vector<std::size_t> next_node(n_paths);

    if (mode_ == TreeMode::FullHistory) {
      // Parents are already in lexicographic prefix order, so sorting by
      // (parent, q_t) yields lexicographic order of q_{1:t}.
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (node_of[a] != node_of[b]) return node_of[a] < node_of[b];
        return less_state(state(a, t), state(b, t));
      });
      for (std::size_t pos = 0; pos < n_paths; ++pos) {
        std::size_t p = order[pos];
        bool fresh = pos == 0 || node_of[order[pos - 1]] != node_of[p] ||
                     !std::ranges::equal(state(order[pos - 1], t), state(p, t));
        if (fresh) level.push_back(make_node(q, t, p, node_of[p]));
        level.back().mass += q.multiplicity(p);
        next_node[p] = level.size() - 1;
      }
    } else {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return less_state(state(a, t), state(b, t)); });
      for (std::size_t pos = 0; pos < n_paths; ++pos) {
        std::size_t p = order[pos];
        bool fresh = pos == 0 || !std::ranges::equal(state(order[pos - 1], t), state(p, t));
        if (fresh) level.push_back(make_node(q, t, p, 0));
        level.back().mass += q.multiplicity(p);
        next_node[p] = level.size() - 1;
      }
    }

    // Transitions from depth t-1 into depth t, aggregated per (from, to).
    std::vector<std::pair<std::size_t, std::size_t>> edges(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) edges[p] = {node_of[p], next_node[p]};
    std::vector<std::size_t> eorder(n_paths);
    std::iota(eorder.begin(), eorder.end(), std::size_t{0});
    std::sort(eorder.begin(), eorder.end(), [&](std::size_t a, std::size_t b) {
      return edges[a] < edges[b];
    });
    auto& parents = levels_[t - 1];
    for (std::size_t pos = 0; pos < n_paths; ++pos) {
      std::size_t p = eorder[pos];
      auto& children = parents[edges[p].first].children;
      if (!children.empty() && children.back().node == edges[p].second && pos > 0 &&
          edges[eorder[pos - 1]] == edges[p]) {
        children.back().count += q.multiplicity(p);
      } else {
        children.push_back({edges[p].second, q.multiplicity(p)});
      }
    }
    node_of = std::move(next_node);
  }
}

std::span<const TreeNode> PrefixTree::nodes_at_depth(std::size_t t) const {
  if (t > t_steps_)
    throw Error(ErrorCode::InvalidArgument,
                "depth " + std::to_string(t) + " exceeds T = " + std::to_string(t_steps_));
  return levels_[t];
}

ConditionalDist PrefixTree::conditional(std::size_t t, std::size_t index) const {
  if (t >= t_steps_) throw Error(ErrorCode::LeafNode, "no conditional law at depth T");
  const TreeNode& n = node(t, index);
  ConditionalDist dist;
  dist.denominator = 0;
  dist.atoms.reserve(n.children.size());
  for (const auto& c : n.children) {
    dist.atoms.push_back({levels_[t + 1][c.node].point, c.count});
    dist.denominator += c.count;
  }
  return dist;
}

TreeStats PrefixTree::stats() const {
  TreeStats s;
  for (std::size_t t = 0; t <= t_steps_; ++t) {
    s.nodes_per_depth.push_back(levels_[t].size());
    if (t < t_steps_)
      for (const auto& n : levels_[t]) ++s.branching_histogram[n.children.size()];
  }
  return s;
}

}  // namespace nestedot
