/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#include "evtree/maxtree.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <queue>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "evtree/errors.hpp"
#include "evtree/rng.hpp"

namespace evtree {

bool EventTree::contains(InteractionId id) const {
  return std::binary_search(nodes.begin(), nodes.end(), id);
}

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Greedy: return "greedy";
    case Algorithm::Random: return "random";
    case Algorithm::Dp: return "dp";
    case Algorithm::DpDij: return "dp_dij";
    case Algorithm::BinarySearch: return "binary_search";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "greedy") return Algorithm::Greedy;
  if (s == "random") return Algorithm::Random;
  if (s == "dp") return Algorithm::Dp;
  if (s == "dp_dij") return Algorithm::DpDij;
  if (s == "binary_search") return Algorithm::BinarySearch;
  throw validation_error("unknown algorithm: " + s +
                         " (expected greedy|random|dp|dp_dij|binary_search)");
}

std::vector<std::string> algorithm_names() {
  return {"greedy", "random", "dp", "dp_dij", "binary_search"};
}

void SolveParams::validate() const {
  if (budget < 0.0) throw validation_error("budget must be >= 0");
  if (dp_decimals < 0 || dp_decimals > 6)
    throw validation_error("dp_decimals must lie in [0, 6]");
  if (window && *window < 0) throw validation_error("time window must be >= 0");
}

namespace {

// Reachable vertex ids from root, in (timestamp, id) order. That order is a
// topological order of the DAG.
std::vector<InteractionId> reachable_topo(const MetaGraph& g, InteractionId root) {
  g.vertex(root);  // throws not_found_error if absent
  std::unordered_set<InteractionId> seen{root};
  std::vector<InteractionId> stack{root};
  while (!stack.empty()) {
    const InteractionId v = stack.back();
    stack.pop_back();
    for (int e : g.out_edges(v)) {
      const InteractionId d = g.edges()[e].dst;
      if (seen.insert(d).second) stack.push_back(d);
    }
  }
  std::vector<InteractionId> order;
  order.reserve(seen.size());
  for (const auto& v : g.vertices())
    if (seen.count(v.id)) order.push_back(v.id);
  return order;
}

EventTree make_tree(const MetaGraph& g, InteractionId root, std::vector<int> edge_idxs,
                    bool shortfall = false) {
  EventTree t;
  t.root = root;
  t.shortfall = shortfall;
  std::unordered_set<InteractionId> nodes{root};
  for (int e : edge_idxs) {
    nodes.insert(g.edges()[e].src);
    nodes.insert(g.edges()[e].dst);
  }
  t.nodes.assign(nodes.begin(), nodes.end());
  std::sort(t.nodes.begin(), t.nodes.end());
  std::sort(edge_idxs.begin(), edge_idxs.end(), [&g](int a, int b) {
    const auto& ea = g.edges()[a];
    const auto& eb = g.edges()[b];
    return ea.src != eb.src ? ea.src < eb.src : ea.dst < eb.dst;
  });
  t.cost = 0.0;
  for (int e : edge_idxs) {
    const auto& ed = g.edges()[e];
    t.edges.push_back({ed.src, ed.dst, ed.kind, ed.weight});
    t.cost += ed.weight;
  }
  return t;
}

struct Spt {
  std::unordered_map<InteractionId, double> dist;
  std::unordered_map<InteractionId, int> pred_edge;  // g edge index; root absent
};

// Dijkstra from root. When two predecessors yield the same distance the one
// with the smaller id wins, so the predecessor tree is unique.
Spt dijkstra(const MetaGraph& g, InteractionId root) {
  Spt spt;
  spt.dist[root] = 0.0;
  using Item = std::pair<double, InteractionId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0.0, root});
  std::unordered_set<InteractionId> done;
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (!done.insert(u).second) continue;
    for (int e : g.out_edges(u)) {
      const auto& ed = g.edges()[e];
      const double nd = d + ed.weight;
      auto it = spt.dist.find(ed.dst);
      if (it == spt.dist.end() || nd < it->second) {
        spt.dist[ed.dst] = nd;
        spt.pred_edge[ed.dst] = e;
        pq.push({nd, ed.dst});
      } else if (nd == it->second) {
        const auto& cur = g.edges()[spt.pred_edge[ed.dst]];
        if (ed.src < cur.src) spt.pred_edge[ed.dst] = e;
      }
    }
  }
  return spt;
}

long long pow10ll(int d) {
  long long p = 1;
  for (int i = 0; i < d; ++i) p *= 10;
  return p;
}

long long discretize_weight(double w, int decimals) {
  return std::llround(w * static_cast<double>(pow10ll(decimals)));
}

long long discretize_budget(double b, int decimals) {
  return static_cast<long long>(
      std::floor(b * static_cast<double>(pow10ll(decimals)) + 1e-9));
}

constexpr long long kMaxDpCells = 200'000'000;

// Integer budget for the DP tables: the discretized budget, capped by the
// total discretized weight of the edges in play (beyond that the tables
// saturate).
int dp_budget(const MetaGraph& g, const std::vector<InteractionId>& span,
              double budget, int decimals) {
  std::unordered_set<InteractionId> in_span(span.begin(), span.end());
  long long total = 0;
  for (const auto& id : span)
    for (int e : g.out_edges(id))
      if (in_span.count(g.edges()[e].dst))
        total += discretize_weight(g.edges()[e].weight, decimals);
  const long long b = std::min(discretize_budget(budget, decimals), total);
  if ((b + 1) * static_cast<long long>(span.size() + 1) > kMaxDpCells)
    throw validation_error("discretized budget too large for DP (reduce dp_decimals)");
  return static_cast<int>(b);
}

}  // namespace

EventTree greedy_grow(const MetaGraph& g, InteractionId root, double budget) {
  g.vertex(root);
  struct Cand {
    double w;
    InteractionId dst, src;
    int edge;
  };
  auto later = [](const Cand& a, const Cand& b) {
    return std::tie(a.w, a.dst, a.src) > std::tie(b.w, b.dst, b.src);
  };
  std::priority_queue<Cand, std::vector<Cand>, decltype(later)> pq(later);
  std::unordered_set<InteractionId> in_tree{root};
  std::vector<int> chosen;
  double cost = 0.0;
  auto push_out = [&](InteractionId v) {
    for (int e : g.out_edges(v)) {
      const auto& ed = g.edges()[e];
      if (!in_tree.count(ed.dst)) pq.push({ed.weight, ed.dst, ed.src, e});
    }
  };
  push_out(root);
  while (!pq.empty()) {
    const Cand c = pq.top();
    if (c.w > budget - cost) break;  // every remaining cutset edge is heavier
    pq.pop();
    if (in_tree.count(c.dst)) continue;
    in_tree.insert(c.dst);
    chosen.push_back(c.edge);
    cost += c.w;
    push_out(c.dst);
  }
  return make_tree(g, root, std::move(chosen));
}

EventTree random_grow(const MetaGraph& g, InteractionId root, double budget,
                      std::uint64_t seed) {
  g.vertex(root);
  Rng rng(seed);
  std::unordered_set<InteractionId> in_tree{root};
  std::vector<int> frontier;
  std::vector<int> chosen;
  double cost = 0.0;
  auto push_out = [&](InteractionId v) {
    for (int e : g.out_edges(v)) frontier.push_back(e);
  };
  push_out(root);
  while (true) {
    std::vector<int> admissible;
    for (int e : frontier) {
      const auto& ed = g.edges()[e];
      if (in_tree.count(ed.dst)) continue;
      if (ed.weight > budget - cost) continue;  // can never become affordable
      admissible.push_back(e);
    }
    frontier = admissible;
    if (admissible.empty()) break;
    const int e = admissible[rng.below(admissible.size())];
    const auto& ed = g.edges()[e];
    in_tree.insert(ed.dst);
    chosen.push_back(e);
    cost += ed.weight;
    push_out(ed.dst);
  }
  return make_tree(g, root, std::move(chosen));
}

EventTree dp_tree_exact(const MetaGraph& g, InteractionId root, double budget,
                        int decimals) {
  if (budget < 0.0) throw validation_error("budget must be >= 0");
  if (decimals < 0 || decimals > 6) throw validation_error("dp_decimals must lie in [0, 6]");
  const auto order = reachable_topo(g, root);
  if (order.size() != g.vertex_count())
    throw validation_error("dp_tree_exact: input graph is not a tree rooted at " +
                           std::to_string(root) + " (unreachable vertices)");
  for (const auto& v : g.vertices()) {
    const std::size_t indeg = g.in_edges(v.id).size();
    if (v.id == root ? indeg != 0 : indeg != 1)
      throw validation_error("dp_tree_exact: input graph is not a tree rooted at " +
                             std::to_string(root));
  }

  const int cap = dp_budget(g, order, budget, decimals);
  std::unordered_map<InteractionId, int> local;
  for (std::size_t i = 0; i < order.size(); ++i) local[order[i]] = static_cast<int>(i);

  struct NodeDp {
    std::vector<int> child_edges;            // g edge indexes
    std::vector<long long> child_w;          // discretized
    std::vector<std::vector<int>> pk;        // pk[k][b] after folding k children
  };
  std::vector<NodeDp> dp(order.size());
  std::vector<std::vector<int>> best(order.size());  // best[v][b]

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = local[*it];
    NodeDp& node = dp[v];
    for (int e : g.out_edges(*it)) {
      node.child_edges.push_back(e);
      node.child_w.push_back(discretize_weight(g.edges()[e].weight, decimals));
    }
    node.pk.assign(node.child_edges.size() + 1, std::vector<int>(cap + 1, 1));
    for (std::size_t k = 1; k <= node.child_edges.size(); ++k) {
      const long long w = node.child_w[k - 1];
      const auto& child_best = best[local[g.edges()[node.child_edges[k - 1]].dst]];
      node.pk[k] = node.pk[k - 1];
      if (w > cap) continue;
      for (int b = static_cast<int>(w); b <= cap; ++b) {
        const int give = b - static_cast<int>(w);
        int& cell = node.pk[k][b];
        for (int s = 0; s <= give; ++s) {
          const int val = node.pk[k - 1][give - s] + child_best[s];
          if (val > cell) cell = val;
        }
      }
    }
    best[v] = node.pk.back();
  }

  // Reconstruct the chosen subtree from the fold tables.
  std::vector<int> chosen;
  std::vector<std::pair<InteractionId, int>> stack{{root, cap}};
  while (!stack.empty()) {
    auto [id, b] = stack.back();
    stack.pop_back();
    const NodeDp& node = dp[local[id]];
    for (std::size_t k = node.child_edges.size(); k >= 1; --k) {
      if (node.pk[k][b] == node.pk[k - 1][b]) continue;  // child k skipped
      const long long w = node.child_w[k - 1];
      const InteractionId child = g.edges()[node.child_edges[k - 1]].dst;
      const auto& child_best = best[local[child]];
      const int give = b - static_cast<int>(w);
      for (int s = 0; s <= give; ++s) {
        if (node.pk[k - 1][give - s] + child_best[s] == node.pk[k][b]) {
          chosen.push_back(node.child_edges[k - 1]);
          stack.push_back({child, s});
          b = give - s;
          break;
        }
      }
    }
  }
  return make_tree(g, root, std::move(chosen));
}

EventTree dp_dag_heuristic(const MetaGraph& g, InteractionId root, double budget,
                           int decimals) {
  if (budget < 0.0) throw validation_error("budget must be >= 0");
  if (decimals < 0 || decimals > 6) throw validation_error("dp_decimals must lie in [0, 6]");
  const auto order = reachable_topo(g, root);
  const int cap = dp_budget(g, order, budget, decimals);

  std::unordered_map<InteractionId, int> local;
  for (std::size_t i = 0; i < order.size(); ++i) local[order[i]] = static_cast<int>(i);

  // One entry per (vertex, budget): the heuristic subtree, its node set (as
  // local indexes, sorted) for overlap tests, and the picks to rebuild it.
  struct Entry {
    std::vector<int> nodes;
    long long cost = 0;
    std::vector<std::pair<int, int>> picks;  // (g edge index, child budget)
  };
  std::vector<std::vector<Entry>> table(order.size());

  auto overlaps = [](const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] < b[j]) ++i;
      else if (b[j] < a[i]) ++j;
      else return true;
    }
    return false;
  };

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = local[*it];
    table[v].assign(cap + 1, Entry{});
    struct Cand {
      double density;
      int size;
      InteractionId child;
      int edge;
      long long cost;
      int sub;
    };
    for (int b = 0; b <= cap; ++b) {
      Entry& entry = table[v][b];
      entry.nodes = {v};
      std::vector<Cand> cands;
      for (int e : g.out_edges(*it)) {
        const auto& ed = g.edges()[e];
        const long long w = discretize_weight(ed.weight, decimals);
        if (w > b) continue;
        const int sub = b - static_cast<int>(w);
        const Entry& ce = table[local[ed.dst]][sub];
        const long long cost = w + ce.cost;
        const int size = static_cast<int>(ce.nodes.size());
        cands.push_back({static_cast<double>(cost) / size, size, ed.dst, e, cost, sub});
      }
      std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.density != b.density) return a.density < b.density;
        if (a.size != b.size) return a.size > b.size;
        return a.child < b.child;
      });
      for (const auto& c : cands) {
        if (c.cost > b - entry.cost) continue;
        const Entry& ce = table[local[c.child]][c.sub];
        if (overlaps(entry.nodes, ce.nodes)) continue;
        std::vector<int> merged;
        merged.reserve(entry.nodes.size() + ce.nodes.size());
        std::merge(entry.nodes.begin(), entry.nodes.end(), ce.nodes.begin(),
                   ce.nodes.end(), std::back_inserter(merged));
        entry.nodes = std::move(merged);
        entry.cost += c.cost;
        entry.picks.emplace_back(c.edge, c.sub);
      }
    }
  }

  std::vector<int> chosen;
  std::vector<std::pair<int, int>> stack{{local[root], cap}};
  while (!stack.empty()) {
    auto [v, b] = stack.back();
    stack.pop_back();
    for (const auto& [e, sub] : table[v][b].picks) {
      chosen.push_back(e);
      stack.push_back({local[g.edges()[e].dst], sub});
    }
  }
  return make_tree(g, root, std::move(chosen));
}

namespace {

// The shortest-path predecessor tree, as a graph of its own.
MetaGraph predecessor_tree(const MetaGraph& g, const Spt& spt) {
  std::vector<MetaVertex> vertices;
  std::vector<MetaEdge> edges;
  for (const auto& v : g.vertices()) {
    if (!spt.dist.count(v.id)) continue;
    vertices.push_back(v);
    auto it = spt.pred_edge.find(v.id);
    if (it != spt.pred_edge.end()) edges.push_back(g.edges()[it->second]);
  }
  return MetaGraph(std::move(vertices), std::move(edges));
}

}  // namespace

EventTree dp_dijkstra(const MetaGraph& g, InteractionId root, double budget,
                      int decimals) {
  g.vertex(root);
  const Spt spt = dijkstra(g, root);
  return dp_tree_exact(predecessor_tree(g, spt), root, budget, decimals);
}

namespace {

// Shared core of dst_level1/binary_search_dst once the SPT is in hand.
EventTree spt_quota_tree(const MetaGraph& g, InteractionId root, const Spt& spt,
                         const std::vector<InteractionId>& terminals, int quota) {
  if (quota < 1) throw validation_error("quota must be >= 1");
  // Terminals ordered by (distance, id); the root is always first.
  std::vector<std::pair<double, InteractionId>> ranked;
  for (const auto& t : terminals) {
    if (t == root) continue;
    auto it = spt.dist.find(t);
    if (it != spt.dist.end()) ranked.push_back({it->second, t});
  }
  std::sort(ranked.begin(), ranked.end());
  ranked.erase(std::unique(ranked.begin(), ranked.end()), ranked.end());

  const std::size_t want = static_cast<std::size_t>(quota);
  const bool shortfall = ranked.size() + 1 < want;
  const std::size_t take = std::min(want - 1, ranked.size());

  std::unordered_set<InteractionId> marked{root};
  std::vector<int> chosen;
  for (std::size_t i = 0; i < take; ++i) {
    InteractionId v = ranked[i].second;
    while (!marked.count(v)) {
      marked.insert(v);
      const int e = spt.pred_edge.at(v);
      chosen.push_back(e);
      v = g.edges()[e].src;
    }
  }
  return make_tree(g, root, std::move(chosen), shortfall);
}

}  // namespace

EventTree dst_level1(const MetaGraph& g, InteractionId root,
                     const std::vector<InteractionId>& terminals, int quota) {
  g.vertex(root);
  for (const auto& t : terminals) g.vertex(t);  // validate ids
  const Spt spt = dijkstra(g, root);
  return spt_quota_tree(g, root, spt, terminals, quota);
}

EventTree dst_level1(const MetaGraph& g, InteractionId root, int quota) {
  g.vertex(root);
  const Spt spt = dijkstra(g, root);
  std::vector<InteractionId> all;
  for (const auto& v : g.vertices()) all.push_back(v.id);
  return spt_quota_tree(g, root, spt, all, quota);
}

EventTree binary_search_dst(const MetaGraph& g, InteractionId root, double budget) {
  if (budget < 0.0) throw validation_error("budget must be >= 0");
  g.vertex(root);
  const Spt spt = dijkstra(g, root);
  std::vector<InteractionId> all;
  for (const auto& v : g.vertices()) all.push_back(v.id);

  const int reachable = static_cast<int>(spt.dist.size());
  auto tree_for = [&](int quota) { return spt_quota_tree(g, root, spt, all, quota); };

  // Largest feasible quota; quota 1 ({root}, cost 0) is always feasible and
  // the quota tree's cost grows monotonically.
  int lo = 1, hi = reachable;
  while (lo < hi) {
    const int mid = lo + (hi - lo + 1) / 2;
    if (tree_for(mid).cost <= budget)
      lo = mid;
    else
      hi = mid - 1;
  }
  EventTree t = tree_for(lo);
  t.shortfall = false;
  return t;
}

EventTree brute_force_opt(const MetaGraph& g, InteractionId root, double budget,
                          int max_nodes) {
  if (budget < 0.0) throw validation_error("budget must be >= 0");
  const auto order = reachable_topo(g, root);
  const int n = static_cast<int>(order.size());
  if (n > max_nodes || n > 25)  // 25 caps the 32-bit subset masks
    throw validation_error("brute_force_opt refuses instances with more than " +
                           std::to_string(std::min(max_nodes, 25)) +
                           " reachable vertices (got " + std::to_string(n) + ")");

  std::unordered_map<InteractionId, int> bit;
  for (int i = 0; i < n; ++i) bit[order[i]] = i;
  const int rbit = bit[root];

  // Per vertex: in-edges from reachable sources, cheapest first.
  struct InEdge {
    double w;
    InteractionId src;
    int srcbit;
    int edge;
  };
  std::vector<std::vector<InEdge>> ins(n);
  for (int i = 0; i < n; ++i) {
    for (int e : g.in_edges(order[i])) {
      const auto& ed = g.edges()[e];
      auto it = bit.find(ed.src);
      if (it == bit.end()) continue;
      ins[i].push_back({ed.weight, ed.src, it->second, e});
    }
    std::sort(ins[i].begin(), ins[i].end(), [](const InEdge& a, const InEdge& b) {
      return a.w != b.w ? a.w < b.w : a.src < b.src;
    });
  }

  // Every rooted subtree's node set S admits a cheapest spanning arborescence
  // in which each non-root node takes its lightest in-edge from S (the union
  // is acyclic and all chains end at the one in-degree-0 node, the root).
  // Enumerate all S containing the root and keep the best feasible one.
  int best_size = -1;
  double best_cost = 0.0;
  std::uint32_t best_mask = 0;
  std::vector<InteractionId> best_ids;

  const std::uint32_t root_mask = 1u << rbit;
  const int free_bits = n - 1;
  for (std::uint32_t rest = 0; rest < (1u << free_bits); ++rest) {
    // Spread `rest` over the non-root bit positions.
    std::uint32_t mask = root_mask;
    {
      std::uint32_t m = rest;
      for (int i = 0; i < n && m; ++i) {
        if (i == rbit) continue;
        if (m & 1u) mask |= 1u << i;
        m >>= 1;
      }
    }
    double cost = 0.0;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      if (i == rbit || !(mask & (1u << i))) continue;
      bool found = false;
      for (const auto& ie : ins[i]) {
        if (mask & (1u << ie.srcbit)) {
          cost += ie.w;
          found = true;
          break;
        }
      }
      ok = found && cost <= budget;
    }
    if (!ok) continue;
    const int size = __builtin_popcount(mask);
    bool better = size > best_size || (size == best_size && cost < best_cost);
    if (!better && size == best_size && cost == best_cost) {
      std::vector<InteractionId> ids;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) ids.push_back(order[i]);
      std::sort(ids.begin(), ids.end());
      better = ids < best_ids;
    }
    if (better) {
      best_size = size;
      best_cost = cost;
      best_mask = mask;
      best_ids.clear();
      for (int i = 0; i < n; ++i)
        if (best_mask & (1u << i)) best_ids.push_back(order[i]);
      std::sort(best_ids.begin(), best_ids.end());
    }
  }

  std::vector<int> chosen;
  for (int i = 0; i < n; ++i) {
    if (i == rbit || !(best_mask & (1u << i))) continue;
    for (const auto& ie : ins[i]) {
      if (best_mask & (1u << ie.srcbit)) {
        chosen.push_back(ie.edge);
        break;
      }
    }
  }
  return make_tree(g, root, std::move(chosen));
}

EventTree solve_maxtree(const MetaGraph& g, InteractionId root, const SolveParams& params) {
  params.validate();
  switch (params.algorithm) {
    case Algorithm::Greedy: return greedy_grow(g, root, params.budget);
    case Algorithm::Random: return random_grow(g, root, params.budget, params.rng_seed);
    case Algorithm::Dp: return dp_dag_heuristic(g, root, params.budget, params.dp_decimals);
    case Algorithm::DpDij: return dp_dijkstra(g, root, params.budget, params.dp_decimals);
    case Algorithm::BinarySearch: return binary_search_dst(g, root, params.budget);
  }
  throw validation_error("unhandled algorithm");
}

EventTree tmaxtree(const MetaGraph& g, InteractionId root, const SolveParams& params) {
  params.validate();
  if (!params.window)
    throw validation_error("tmaxtree requires a time window");
  const Timestamp t0 = g.vertex(root).timestamp;
  const MetaGraph windowed = time_induced(g, t0, t0 + *params.window);
  return solve_maxtree(windowed, root, params);
}

void write_tree_dot(const EventTree& tree, const MetaGraph& g, std::ostream& out) {
  out << "digraph event {\n";
  for (const auto& id : tree.nodes) {
    const auto& v = g.vertex(id);
    out << "  n" << v.id << " [label=\"" << v.id << '|' << v.sender << '|'
        << v.timestamp << "\"];\n";
  }
  for (const auto& e : tree.edges) {
    out << "  n" << e.src << " -> n" << e.dst << " [kind=\"" << to_string(e.kind)
        << "\", weight=\"" << std::fixed << std::setprecision(6) << e.weight << "\"";
    out.unsetf(std::ios::fixed);
    if (e.weight >= 0.8) out << ", style=dashed";
    out << "];\n";
  }
  out << "}\n";
}

}  // namespace evtree
