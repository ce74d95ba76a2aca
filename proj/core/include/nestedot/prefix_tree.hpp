#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "nestedot/quantizer.hpp"

namespace nestedot {

enum class TreeMode { FullHistory, Markov };

std::string_view to_string(TreeMode mode) noexcept;

struct ChildLink {
  std::size_t node;     // index into the next depth's node list
  std::int64_t count;   // samples making this transition
};

// One node of the scenario tree. In full-history mode a depth-t node stands
// for a distinct prefix q_{1:t}; in Markov mode for a distinct state q_t at
// time t. Depth 0 is the single root.
struct TreeNode {
  std::size_t depth = 0;
  std::vector<std::int64_t> cell;   // lattice index of q_t (empty at the root)
  std::vector<double> point;        // cube center of q_t (empty at the root)
  std::int64_t mass = 0;
  std::size_t parent = 0;           // full-history only; 0 for the root
  std::vector<ChildLink> children;  // sorted by child cell
};

// One-step conditional law. Weights are count / denominator; counts sum to
// the denominator exactly.
struct ConditionalDist {
  struct Atom {
    std::span<const double> point;
    std::int64_t count;
  };
  std::vector<Atom> atoms;
  std::int64_t denominator = 0;

  double weight(std::size_t i) const noexcept {
    return static_cast<double>(atoms[i].count) / static_cast<double>(denominator);
  }
};

struct TreeStats {
  std::vector<std::size_t> nodes_per_depth;
  // branching factor -> number of non-leaf nodes with that many children
  std::map<std::size_t, std::size_t> branching_histogram;
};

class PrefixTree {
 public:
  PrefixTree(const QuantizedPathSet& q, TreeMode mode);

  TreeMode mode() const noexcept { return mode_; }
  std::size_t t_steps() const noexcept { return t_steps_; }
  std::size_t dim() const noexcept { return dim_; }
  std::int64_t n_samples() const noexcept { return n_samples_; }
  const GridSpec& grid() const noexcept { return grid_; }

  const TreeNode& root() const noexcept { return levels_[0][0]; }
  // Nodes at depth t in lexicographic key order.
  std::span<const TreeNode> nodes_at_depth(std::size_t t) const;
  const TreeNode& node(std::size_t t, std::size_t index) const { return nodes_at_depth(t)[index]; }

  // Conditional law of the next state given node (t, index). LeafNode at t = T.
  ConditionalDist conditional(std::size_t t, std::size_t index) const;

  TreeStats stats() const;

 private:
  TreeMode mode_;
  std::size_t t_steps_;
  std::size_t dim_;
  std::int64_t n_samples_;
  GridSpec grid_;
  std::vector<std::vector<TreeNode>> levels_;
};

inline PrefixTree build_tree(const QuantizedPathSet& q, TreeMode mode) { return PrefixTree(q, mode); }

}  // namespace nestedot
