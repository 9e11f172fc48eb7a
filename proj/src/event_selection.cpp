/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#include "evtree/event_selection.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "evtree/errors.hpp"
#include "evtree/rng.hpp"

namespace evtree {

const char* to_string(Sampling s) {
  return s == Sampling::UpperBound ? "upperbound" : "random";
}

Sampling sampling_from_string(const std::string& s) {
  if (s == "upperbound") return Sampling::UpperBound;
  if (s == "random") return Sampling::Random;
  throw validation_error("unknown sampling scheme: " + s + " (expected upperbound|random)");
}

std::optional<MetaEdge> min_in_edge(const MetaGraph& g, InteractionId u) {
  std::optional<MetaEdge> best;
  for (int e : g.in_edges(u)) {
    const auto& ed = g.edges()[e];
    if (!best || ed.weight < best->weight ||
        (ed.weight == best->weight && ed.src < best->src))
      best = ed;
  }
  return best;
}

int size_upper_bound(const MetaGraph& g, InteractionId root, double budget,
                     std::optional<std::int64_t> window) {
  if (budget < 0.0) throw validation_error("budget must be >= 0");
  const Timestamp t0 = g.vertex(root).timestamp;
  const Timestamp lo = window ? t0 : std::numeric_limits<Timestamp>::min();
  const Timestamp hi = window ? t0 + *window : std::numeric_limits<Timestamp>::max();
  auto in_window = [&](InteractionId id) {
    const Timestamp t = g.vertex(id).timestamp;
    return t >= lo && t <= hi;
  };

  // Price of each vertex = its cheapest in-window in-edge. Vertices without
  // one (other than the root) cannot join any tree or forest.
  std::vector<std::pair<double, InteractionId>> prices;
  for (const auto& v : g.vertices()) {
    if (v.id == root || !in_window(v.id)) continue;
    double best = std::numeric_limits<double>::infinity();
    for (int e : g.in_edges(v.id)) {
      const auto& ed = g.edges()[e];
      if (in_window(ed.src) && ed.weight < best) best = ed.weight;
    }
    if (best != std::numeric_limits<double>::infinity()) prices.push_back({best, v.id});
  }
  std::sort(prices.begin(), prices.end());

  int count = 1;  // the root itself
  double cost = 0.0;
  for (const auto& [w, id] : prices) {
    if (cost + w > budget) break;
    cost += w;
    ++count;
  }
  return count;
}

RootRanking rank_roots(const MetaGraph& g, double budget,
                       std::optional<std::int64_t> window, int limit) {
  if (limit < 1) throw validation_error("root limit must be >= 1");
  RootRanking ranking;
  ranking.reserve(g.vertex_count());
  for (const auto& v : g.vertices())
    ranking.push_back({v.id, size_upper_bound(g, v.id, budget, window)});
  std::sort(ranking.begin(), ranking.end(), [](const RootScore& a, const RootScore& b) {
    return a.upper_bound != b.upper_bound ? a.upper_bound > b.upper_bound
                                          : a.root < b.root;
  });
  if (ranking.size() > static_cast<std::size_t>(limit)) ranking.resize(limit);
  return ranking;
}

std::vector<int> greedy_max_cover(const std::vector<std::vector<InteractionId>>& sets,
                                  int k) {
  if (k < 1) throw validation_error("k must be >= 1");
  std::vector<int> picked;
  std::unordered_set<InteractionId> covered;
  std::vector<char> used(sets.size(), 0);
  for (int round = 0; round < k; ++round) {
    int best = -1;
    std::size_t best_gain = 0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (used[i]) continue;
      std::size_t gain = 0;
      for (const auto& id : sets[i]) gain += covered.count(id) == 0;
      if (gain > best_gain) {
        best_gain = gain;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) break;
    used[best] = 1;
    picked.push_back(best);
    for (const auto& id : sets[best]) covered.insert(id);
  }
  return picked;
}

namespace {

// Removes `drop` nodes (and everything hanging under them) from a tree.
// Returns false when the root itself is dropped.
bool prune_covered(EventTree& t, const std::unordered_set<InteractionId>& covered) {
  bool any = false;
  for (const auto& id : t.nodes)
    if (covered.count(id)) {
      any = true;
      break;
    }
  if (!any) return true;
  if (covered.count(t.root)) return false;

  std::unordered_map<InteractionId, std::vector<const TreeEdge*>> children;
  for (const auto& e : t.edges) children[e.src].push_back(&e);

  std::vector<InteractionId> keep{t.root};
  std::vector<TreeEdge> kept_edges;
  std::vector<InteractionId> stack{t.root};
  while (!stack.empty()) {
    const InteractionId v = stack.back();
    stack.pop_back();
    auto it = children.find(v);
    if (it == children.end()) continue;
    for (const TreeEdge* e : it->second) {
      if (covered.count(e->dst)) continue;  // cut here: subtree goes with it
      keep.push_back(e->dst);
      kept_edges.push_back(*e);
      stack.push_back(e->dst);
    }
  }
  std::sort(keep.begin(), keep.end());
  std::sort(kept_edges.begin(), kept_edges.end(), [](const TreeEdge& a, const TreeEdge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  t.nodes = std::move(keep);
  t.edges = std::move(kept_edges);
  t.cost = 0.0;
  for (const auto& e : t.edges) t.cost += e.weight;
  return true;
}

// Greedy selection with disjointness pruning over an already-solved pool.
EventSet select_k(std::vector<EventTree> pool, int k) {
  EventSet out;
  std::unordered_set<InteractionId> covered;
  std::vector<char> alive(pool.size(), 1);
  const std::vector<std::size_t> original_size = [&] {
    std::vector<std::size_t> s;
    for (const auto& t : pool) s.push_back(t.size());
    return s;
  }();

  for (int round = 0; round < k; ++round) {
    int best = -1;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!alive[i]) continue;
      // Pool trees are pruned after every pick, so marginal gain = size.
      if (pool[i].nodes.empty()) continue;
      if (best < 0 || pool[i].size() > pool[best].size() ||
          (pool[i].size() == pool[best].size() && pool[i].root < pool[best].root))
        best = static_cast<int>(i);
    }
    if (best < 0 || pool[best].size() == 0) break;
    alive[best] = 0;
    for (const auto& id : pool[best].nodes) covered.insert(id);
    out.trees.push_back(std::move(pool[best]));

    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!alive[i]) continue;
      if (!prune_covered(pool[i], covered)) {
        alive[i] = 0;
        continue;
      }
      if (pool[i].size() < original_size[i] && pool[i].size() < 2) alive[i] = 0;
    }
  }

  out.covered.assign(covered.begin(), covered.end());
  std::sort(out.covered.begin(), out.covered.end());
  return out;
}

}  // namespace

EventSet top_k_events(const MetaGraph& g, const SolveParams& params,
                      const std::vector<InteractionId>& root_order,
                      const TopKOptions& opt) {
  params.validate();
  if (opt.k < 1) throw validation_error("k must be >= 1");
  if (opt.root_limit < 1) throw validation_error("root limit must be >= 1");
  if (!params.window) throw validation_error("top_k_events requires a time window");
  for (const auto& r : root_order) g.vertex(r);  // validate up front

  const int wave_size = std::max(1, opt.threads);
  std::vector<EventTree> solved;
  std::unordered_set<InteractionId> covered_by_solved;
  std::size_t next = 0;

  auto solve_one = [&](InteractionId root) {
    SolveParams p = params;
    p.rng_seed = mix_seed(params.rng_seed, static_cast<std::uint64_t>(root));
    return tmaxtree(g, root, p);
  };

  while (solved.size() < static_cast<std::size_t>(opt.root_limit) &&
         next < root_order.size()) {
    std::vector<InteractionId> wave;
    while (next < root_order.size() &&
           wave.size() < static_cast<std::size_t>(wave_size) &&
           solved.size() + wave.size() < static_cast<std::size_t>(opt.root_limit)) {
      const InteractionId r = root_order[next++];
      if (covered_by_solved.count(r)) continue;  // already inside a candidate
      wave.push_back(r);
    }
    if (wave.empty()) break;

    std::vector<EventTree> results(wave.size());
    if (wave.size() == 1) {
      results[0] = solve_one(wave[0]);
    } else {
      std::vector<std::exception_ptr> errors(wave.size());
      std::vector<std::thread> workers;
      workers.reserve(wave.size());
      for (std::size_t i = 0; i < wave.size(); ++i)
        workers.emplace_back([&, i] {
          try {
            results[i] = solve_one(wave[i]);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        });
      for (auto& w : workers) w.join();
      for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
    }

    for (auto& t : results) {
      for (const auto& id : t.nodes) covered_by_solved.insert(id);
      solved.push_back(std::move(t));
      if (opt.coverage_trace)
        opt.coverage_trace->push_back(select_k(solved, opt.k).covered.size());
    }
  }

  EventSet out = select_k(std::move(solved), opt.k);
  out.shortfall = out.trees.size() < static_cast<std::size_t>(opt.k);
  return out;
}

EventSet top_k_events(const MetaGraph& g, const SolveParams& params,
                      Sampling sampling, std::uint64_t seed, const TopKOptions& opt) {
  std::vector<InteractionId> order;
  if (sampling == Sampling::UpperBound) {
    // Rank every vertex; the candidate limit is enforced while solving.
    for (const auto& rs :
         rank_roots(g, params.budget, params.window,
                    static_cast<int>(std::max<std::size_t>(g.vertex_count(), 1))))
      order.push_back(rs.root);
  } else {
    for (const auto& v : g.vertices()) order.push_back(v.id);
    Rng rng(seed);
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.below(i)]);
  }
  return top_k_events(g, params, order, opt);
}

}  // namespace evtree
