/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "evtree/errors.hpp"
#include "evtree/event_selection.hpp"
#include "test_util.hpp"

using namespace evtree;

namespace {

MetaGraph toy_graph() { return build_meta_graph(test::toy_email()); }

// Exhaustive best k-subset coverage, for the (1 - 1/e) bound.
std::size_t best_coverage(const std::vector<std::vector<InteractionId>>& sets, int k) {
  const int n = static_cast<int>(sets.size());
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    std::set<InteractionId> u;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) u.insert(sets[i].begin(), sets[i].end());
    best = std::max(best, u.size());
  }
  return best;
}

std::size_t covered_by(const std::vector<std::vector<InteractionId>>& sets,
                       const std::vector<int>& picked) {
  std::set<InteractionId> u;
  for (int i : picked) u.insert(sets[i].begin(), sets[i].end());
  return u.size();
}

}  // namespace

TEST_CASE("min_in_edge picks the lightest with id tie-break") {
  const MetaGraph g = toy_graph();
  const auto e4 = min_in_edge(g, 4);
  REQUIRE(e4.has_value());
  CHECK(e4->src == 1);  // 1->4, 2->4, 3->4 all weigh 0; smallest source wins
  CHECK(e4->weight == 0.0);

  CHECK_FALSE(min_in_edge(g, 1).has_value());  // in-degree 0

  const auto e3 = min_in_edge(g, 3);
  REQUIRE(e3.has_value());
  CHECK(e3->src == 2);
}

TEST_CASE("size_upper_bound on the toy graph") {
  const MetaGraph g = toy_graph();
  // With budget 0 the cheapest forest from root 1 packs {1,2,3,4,6}: the
  // zero-weight in-edges 1->2, 2->3, 1->4 and 5->6 (the forest need not be
  // connected), then stops at the weight-1 vertices.
  CHECK(size_upper_bound(g, 1, 0.0, 7 * 86400) == 5);
  CHECK(size_upper_bound(g, 1, 1e9, 7 * 86400) == 7);
  CHECK(size_upper_bound(g, 7, 0.0, 86400) == 1);  // nothing enters after Friday

  std::vector<MetaVertex> vs{{0, 10, "a"}, {1, 20, "b"}};
  const MetaGraph isolated(std::move(vs), {});
  CHECK(size_upper_bound(isolated, 0, 5.0, std::nullopt) == 1);
}

TEST_CASE("size_upper_bound dominates the exact optimum") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const MetaGraph g = test::random_dag(11, 0.3, seed + 40);
    for (double b : {0.0, 0.6, 1.4, 4.0}) {
      for (const auto& v : g.vertices()) {
        const int u = size_upper_bound(g, v.id, b, std::nullopt);
        const EventTree opt = brute_force_opt(g, v.id, b);
        CHECK(static_cast<std::size_t>(u) >= opt.size());
      }
    }
  }
}

TEST_CASE("rank_roots orders by upper bound") {
  const MetaGraph g = toy_graph();
  const RootRanking ranking = rank_roots(g, 0.0, 7 * 86400, 100);
  REQUIRE(ranking.size() == 7);
  CHECK(ranking[0].root == 1);
  CHECK(ranking[0].upper_bound == 5);
  for (std::size_t i = 1; i < ranking.size(); ++i)
    CHECK(ranking[i - 1].upper_bound >= ranking[i].upper_bound);
  std::set<InteractionId> unique_roots;
  for (const auto& r : ranking) unique_roots.insert(r.root);
  CHECK(unique_roots.size() == ranking.size());

  CHECK(rank_roots(g, 0.0, 7 * 86400, 3).size() == 3);
  CHECK(rank_roots(MetaGraph(), 0.0, 86400, 10).empty());
  CHECK_THROWS_AS(rank_roots(g, 0.0, 86400, 0), validation_error);
}

TEST_CASE("greedy_max_cover achieves the (1 - 1/e) bound") {
  {
    std::vector<std::vector<InteractionId>> sets{{1, 2, 3}, {3, 4}, {5}};
    const auto picked = greedy_max_cover(sets, 2);
    REQUIRE(picked.size() == 2);
    CHECK(picked[0] == 0);
    CHECK(picked[1] == 1);  // gain 1 each for {3,4} and {5}; lower index wins
    CHECK(covered_by(sets, picked) == 4);
  }
  Rng rng(99);
  for (int round = 0; round < 60; ++round) {
    std::vector<std::vector<InteractionId>> sets;
    const int n = 3 + static_cast<int>(rng.below(9));
    for (int i = 0; i < n; ++i) {
      std::set<InteractionId> s;
      const int len = 1 + static_cast<int>(rng.below(6));
      for (int j = 0; j < len; ++j) s.insert(static_cast<InteractionId>(rng.below(20)));
      sets.emplace_back(s.begin(), s.end());
    }
    for (int k : {2, 3}) {
      const auto picked = greedy_max_cover(sets, k);
      const double greedy = static_cast<double>(covered_by(sets, picked));
      const double opt = static_cast<double>(best_coverage(sets, std::min<int>(k, n)));
      CHECK(greedy >= (1.0 - 1.0 / 2.718281828459045) * opt - 1e-9);
      // Monotone in k.
      const auto fewer = greedy_max_cover(sets, std::max(1, k - 1));
      CHECK(covered_by(sets, picked) >= covered_by(sets, fewer));
    }
  }
}

TEST_CASE("top_k_events on the toy graph finds the two events") {
  const MetaGraph g = toy_graph();
  SolveParams p;
  p.budget = 0.0;
  p.window = 7 * 86400;
  TopKOptions opt;
  opt.k = 2;

  const EventSet set = top_k_events(g, p, Sampling::UpperBound, 0, opt);
  REQUIRE(set.trees.size() == 2);
  CHECK(set.trees[0].nodes == std::vector<InteractionId>{1, 2, 3, 4});
  CHECK(set.trees[1].nodes == std::vector<InteractionId>{5, 6});
  CHECK(set.covered == std::vector<InteractionId>{1, 2, 3, 4, 5, 6});
  CHECK_FALSE(set.shortfall);  // interaction 7 stays uncovered

  SUBCASE("k = 1 returns the single largest candidate") {
    opt.k = 1;
    const EventSet one = top_k_events(g, p, Sampling::UpperBound, 0, opt);
    REQUIRE(one.trees.size() == 1);
    CHECK(one.trees[0].nodes == std::vector<InteractionId>{1, 2, 3, 4});
  }
  SUBCASE("k larger than the candidate pool flags a shortfall") {
    opt.k = 10;
    const EventSet many = top_k_events(g, p, Sampling::UpperBound, 0, opt);
    CHECK(many.shortfall);
    CHECK(many.trees.size() < 10);
  }
}

TEST_CASE("top_k_events trees are vertex-disjoint valid trees") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const MetaGraph g = test::random_dag(14, 0.3, seed + 300);
    SolveParams p;
    p.budget = 1.2;
    p.window = 200;
    TopKOptions opt;
    opt.k = 3;
    const EventSet set = top_k_events(g, p, Sampling::UpperBound, seed, opt);
    std::set<InteractionId> seen;
    std::size_t total = 0;
    for (const auto& t : set.trees) {
      std::string why;
      CHECK_MESSAGE(test::valid_event_tree(g, t, p.budget, &why), why);
      for (const auto& id : t.nodes) CHECK(seen.insert(id).second);
      total += t.size();
    }
    CHECK(total == set.covered.size());

    // Coverage is monotone in k.
    std::size_t prev = 0;
    for (int k = 1; k <= 4; ++k) {
      TopKOptions o2;
      o2.k = k;
      const EventSet s2 = top_k_events(g, p, Sampling::UpperBound, seed, o2);
      CHECK(s2.covered.size() >= prev);
      prev = s2.covered.size();
    }
  }
}

TEST_CASE("top_k_events is deterministic and thread-count stable shapes") {
  const MetaGraph g = test::random_dag(14, 0.35, 1234);
  SolveParams p;
  p.budget = 1.5;
  p.window = 300;
  p.algorithm = Algorithm::Random;
  p.rng_seed = 9;
  TopKOptions opt;
  opt.k = 3;

  const EventSet a = top_k_events(g, p, Sampling::Random, 9, opt);
  const EventSet b = top_k_events(g, p, Sampling::Random, 9, opt);
  REQUIRE(a.trees.size() == b.trees.size());
  CHECK(a.covered == b.covered);

  // A parallel run is still a valid, disjoint event set.
  opt.threads = 3;
  const EventSet c = top_k_events(g, p, Sampling::Random, 9, opt);
  std::set<InteractionId> seen;
  for (const auto& t : c.trees) {
    std::string why;
    CHECK_MESSAGE(test::valid_event_tree(g, t, p.budget, &why), why);
    for (const auto& id : t.nodes) CHECK(seen.insert(id).second);
  }
  const EventSet d = top_k_events(g, p, Sampling::Random, 9, opt);
  CHECK(c.covered == d.covered);
}

TEST_CASE("coverage trace grows along the root order") {
  const MetaGraph g = toy_graph();
  SolveParams p;
  p.budget = 0.0;
  p.window = 7 * 86400;
  TopKOptions opt;
  opt.k = 2;
  std::vector<std::size_t> trace;
  opt.coverage_trace = &trace;
  top_k_events(g, p, Sampling::UpperBound, 0, opt);
  REQUIRE(!trace.empty());
  for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] >= trace[i - 1]);
  CHECK(trace.back() == 6);
}
