/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "evtree/types.hpp"

namespace evtree {

// How information may have flowed from an earlier message i to a later one j:
//   Broadcast: same sender.
//   Relay:     a recipient of i sends j, not back at i's sender.
//   Reply:     a recipient of i sends j back to i's sender.
enum class EdgeKind { Broadcast, Relay, Reply };

const char* to_string(EdgeKind k);
EdgeKind edge_kind_from_string(const std::string& s);

struct MetaVertex {
  InteractionId id = 0;
  Timestamp timestamp = 0;
  std::string sender;
};

struct MetaEdge {
  InteractionId src = 0;
  InteractionId dst = 0;
  EdgeKind kind = EdgeKind::Broadcast;
  double weight = 0.0;
};

// Weighted DAG over interactions. Vertices are kept sorted by
// (timestamp, id) and edges by (src, dst); both orders are part of the
// type's determinism contract. Immutable after construction.
class MetaGraph {
 public:
  MetaGraph() = default;
  MetaGraph(std::vector<MetaVertex> vertices, std::vector<MetaEdge> edges);

  const std::vector<MetaVertex>& vertices() const { return vertices_; }
  const std::vector<MetaEdge>& edges() const { return edges_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool contains(InteractionId id) const { return index_.count(id) > 0; }
  const MetaVertex& vertex(InteractionId id) const;

  // Edge indexes into edges(), per endpoint.
  const std::vector<int>& out_edges(InteractionId id) const;
  const std::vector<int>& in_edges(InteractionId id) const;

  Timestamp min_timestamp() const;
  Timestamp max_timestamp() const;

 private:
  std::vector<MetaVertex> vertices_;
  std::vector<MetaEdge> edges_;
  std::unordered_map<InteractionId, int> index_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;

  int pos(InteractionId id) const;
};

// Classifies the ordered pair (i, j), where i precedes j in (timestamp, id)
// order. Precedence when several rules hold: Reply > Relay > Broadcast.
// Returns nullopt when no rule fires.
std::optional<EdgeKind> classify_pair(const Interaction& i, const Interaction& j);

// Builds the interaction meta-graph: one vertex per message and, for every
// pair with strictly increasing timestamps that classify_pair accepts, an
// edge weighted by the content dissimilarity of the two messages. Messages
// at equal timestamps are never linked, so the graph is acyclic even on
// day-granular data.
MetaGraph build_meta_graph(const std::vector<Interaction>& msgs);

// Restriction of g to vertices with s <= t <= f and the edges among them.
MetaGraph time_induced(const MetaGraph& g, Timestamp s, Timestamp f);

// Removes vertices with neither in- nor out-edges.
MetaGraph strip_singletons(const MetaGraph& g);

// Graphviz export. Vertices are labeled "id|sender|timestamp"; edges carry
// kind and weight (6 decimals) and are dashed when weight >= 0.8.
void write_dot(const MetaGraph& g, std::ostream& out);

// JSON export mirroring the in-memory fields, and its inverse.
void write_graph_json(const MetaGraph& g, std::ostream& out);
void write_graph_json_file(const MetaGraph& g, const std::string& path);
MetaGraph read_graph_json(std::istream& in);
MetaGraph read_graph_json_file(const std::string& path);

}  // namespace evtree
