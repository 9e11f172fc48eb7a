/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "evtree/maxtree.hpp"

namespace evtree {

// How candidate roots are ordered before trees are solved.
enum class Sampling { UpperBound, Random };

const char* to_string(Sampling s);
Sampling sampling_from_string(const std::string& s);

struct RootScore {
  InteractionId root = 0;
  int upper_bound = 0;
};
// Non-increasing in upper_bound, ids unique.
using RootRanking = std::vector<RootScore>;

// Up to k vertex-disjoint event trees and the ids they cover.
struct EventSet {
  std::vector<EventTree> trees;
  std::vector<InteractionId> covered;  // sorted union of tree node sets
  bool shortfall = false;              // fewer than k usable candidates
};

// Cheapest edge entering u, ties by smaller source id; nullopt when u has
// in-degree 0.
std::optional<MetaEdge> min_in_edge(const MetaGraph& g, InteractionId u);

// Size of the cheapest budget-feasible forest that contains the root,
// restricted to [t_root, t_root + window]: every other vertex is purchasable
// at its minimum in-edge price, so the forest takes vertices in ascending
// price order until the budget stops it. A true upper bound on the size of
// any budget-feasible tree rooted at root.
int size_upper_bound(const MetaGraph& g, InteractionId root, double budget,
                     std::optional<std::int64_t> window);

// Upper bound for every vertex, best first (ties by id), truncated to limit.
RootRanking rank_roots(const MetaGraph& g, double budget,
                       std::optional<std::int64_t> window, int limit);

// Plain greedy maximum coverage over a family of id sets: picks k sets, each
// time the one covering the most uncovered ids (ties by lower index), and
// stops early when nothing new is covered. Returns the picked indexes.
std::vector<int> greedy_max_cover(const std::vector<std::vector<InteractionId>>& sets,
                                  int k);

struct TopKOptions {
  int k = 1;
  int root_limit = 100;   // candidates solved, not roots inspected
  int threads = 1;        // candidate trees solved concurrently per wave
  // When set, receives the k-cover objective after each solved candidate.
  std::vector<std::size_t>* coverage_trace = nullptr;
};

// Solves a candidate tree per sampled root (lazily along the given order:
// roots whose interaction is already inside a solved candidate are skipped),
// then greedily selects k candidates by marginal coverage. After each
// selection every remaining candidate is pruned of covered nodes together
// with the subtrees hanging off them; candidates pruned below 2 nodes are
// dropped. The selected trees are pairwise vertex-disjoint.
EventSet top_k_events(const MetaGraph& g, const SolveParams& params,
                      const std::vector<InteractionId>& root_order,
                      const TopKOptions& opt);

// Convenience entry point: orders roots by the chosen sampling scheme first.
EventSet top_k_events(const MetaGraph& g, const SolveParams& params,
                      Sampling sampling, std::uint64_t seed, const TopKOptions& opt);

}  // namespace evtree
