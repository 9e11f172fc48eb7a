/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evtree/meta_graph.hpp"

namespace evtree {

struct TreeEdge {
  InteractionId src = 0;
  InteractionId dst = 0;
  EdgeKind kind = EdgeKind::Broadcast;
  double weight = 0.0;
};

// A rooted directed subtree of a meta-graph: every non-root node has exactly
// one in-edge and all nodes are reachable from the root. The unit of
// detection output.
struct EventTree {
  InteractionId root = 0;
  std::vector<InteractionId> nodes;  // ascending
  std::vector<TreeEdge> edges;       // sorted by (src, dst)
  double cost = 0.0;                 // sum of edge weights
  bool shortfall = false;            // requested quota exceeded what is reachable

  std::size_t size() const { return nodes.size(); }
  bool contains(InteractionId id) const;
};

enum class Algorithm { Greedy, Random, Dp, DpDij, BinarySearch };

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);
std::vector<std::string> algorithm_names();

struct SolveParams {
  double budget = 0.0;                     // dissimilarity budget B
  std::optional<std::int64_t> window;      // time budget I, seconds
  Algorithm algorithm = Algorithm::Greedy;
  int dp_decimals = 2;                     // weight discretization for DP variants
  std::uint64_t rng_seed = 0;              // for Algorithm::Random

  void validate() const;
};

// Grows a tree from the root, always taking the cheapest cutset edge that
// keeps the total cost within budget. Ties break by (weight, dst id, src id).
EventTree greedy_grow(const MetaGraph& g, InteractionId root, double budget);

// Like greedy_grow, but each step picks uniformly at random among the cutset
// edges that still fit the budget. Deterministic for a fixed seed.
EventTree random_grow(const MetaGraph& g, InteractionId root, double budget,
                      std::uint64_t seed);

// Exact DP for tree-shaped inputs. Weights are scaled by 10^decimals and
// rounded half-up; the result is optimal for the discretized instance.
// Throws validation_error when g is not an out-tree rooted at root.
EventTree dp_tree_exact(const MetaGraph& g, InteractionId root, double budget,
                        int decimals);

// DP over a general DAG. When a node's children are merged, each child
// offers one candidate subtree and candidates are folded in by increasing
// cost/size density, skipping any candidate that overlaps nodes already
// merged or no longer fits. Valid and within budget, not optimal.
EventTree dp_dag_heuristic(const MetaGraph& g, InteractionId root, double budget,
                           int decimals);

// Runs dp_tree_exact on the shortest-path predecessor tree from the root
// (distance ties keep the smaller predecessor id).
EventTree dp_dijkstra(const MetaGraph& g, InteractionId root, double budget,
                      int decimals);

// Level-1 directed Steiner tree: takes the quota nearest terminals by
// shortest-path distance (ties by id, the root first) and returns the union
// of their predecessor paths. Shared edges are counted once. If fewer than
// quota terminals are reachable the maximal reachable tree is returned with
// the shortfall flag set.
EventTree dst_level1(const MetaGraph& g, InteractionId root,
                     const std::vector<InteractionId>& terminals, int quota);
EventTree dst_level1(const MetaGraph& g, InteractionId root, int quota);

// Binary search over the quota for the largest dst_level1 tree whose cost
// stays within budget.
EventTree binary_search_dst(const MetaGraph& g, InteractionId root, double budget);

// Exact optimum by exhaustive enumeration of rooted subtrees. Maximizes
// size, breaking ties by minimum cost and then lexicographic node set.
// Refuses instances with more than max_nodes reachable vertices.
EventTree brute_force_opt(const MetaGraph& g, InteractionId root, double budget,
                          int max_nodes = 20);

// Dispatches on params.algorithm, ignoring the time window.
EventTree solve_maxtree(const MetaGraph& g, InteractionId root, const SolveParams& params);

// Restricts g to [t_root, t_root + window] and solves there, which satisfies
// both the cost and the time-span constraint.
EventTree tmaxtree(const MetaGraph& g, InteractionId root, const SolveParams& params);

// Writes an event tree in the same DOT dialect as write_dot.
void write_tree_dot(const EventTree& tree, const MetaGraph& g, std::ostream& out);

}  // namespace evtree
