/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#include "evtree/meta_graph.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <unordered_map>
#include <utility>

#include <json.hpp>

#include "evtree/errors.hpp"
#include "evtree/text.hpp"

namespace evtree {

using nlohmann::json;

const char* to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Broadcast: return "broadcast";
    case EdgeKind::Relay: return "relay";
    case EdgeKind::Reply: return "reply";
  }
  return "?";
}

EdgeKind edge_kind_from_string(const std::string& s) {
  if (s == "broadcast") return EdgeKind::Broadcast;
  if (s == "relay") return EdgeKind::Relay;
  if (s == "reply") return EdgeKind::Reply;
  throw validation_error("unknown edge kind: " + s);
}

MetaGraph::MetaGraph(std::vector<MetaVertex> vertices, std::vector<MetaEdge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  std::sort(vertices_.begin(), vertices_.end(), [](const MetaVertex& a, const MetaVertex& b) {
    return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.id < b.id;
  });
  std::sort(edges_.begin(), edges_.end(), [](const MetaEdge& a, const MetaEdge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  index_.reserve(vertices_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!index_.emplace(vertices_[i].id, static_cast<int>(i)).second)
      throw validation_error("duplicate vertex id " + std::to_string(vertices_[i].id));
  }
  out_.resize(vertices_.size());
  in_.resize(vertices_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& edge = edges_[e];
    const int s = pos(edge.src);
    const int d = pos(edge.dst);
    const auto& vs = vertices_[s];
    const auto& vd = vertices_[d];
    if (vs.timestamp > vd.timestamp ||
        (vs.timestamp == vd.timestamp && vs.id >= vd.id))
      throw validation_error("edge " + std::to_string(edge.src) + "->" +
                             std::to_string(edge.dst) + " violates time order");
    if (edge.weight < 0.0)
      throw validation_error("negative edge weight on " + std::to_string(edge.src) +
                             "->" + std::to_string(edge.dst));
    out_[s].push_back(static_cast<int>(e));
    in_[d].push_back(static_cast<int>(e));
  }
}

int MetaGraph::pos(InteractionId id) const {
  auto it = index_.find(id);
  if (it == index_.end())
    throw not_found_error("no vertex with id " + std::to_string(id));
  return it->second;
}

const MetaVertex& MetaGraph::vertex(InteractionId id) const { return vertices_[pos(id)]; }

const std::vector<int>& MetaGraph::out_edges(InteractionId id) const { return out_[pos(id)]; }

const std::vector<int>& MetaGraph::in_edges(InteractionId id) const { return in_[pos(id)]; }

Timestamp MetaGraph::min_timestamp() const {
  return vertices_.empty() ? 0 : vertices_.front().timestamp;
}

Timestamp MetaGraph::max_timestamp() const {
  return vertices_.empty() ? 0 : vertices_.back().timestamp;
}

std::optional<EdgeKind> classify_pair(const Interaction& i, const Interaction& j) {
  if (!(i.timestamp < j.timestamp || (i.timestamp == j.timestamp && i.id < j.id)))
    return std::nullopt;
  const bool j_answers_i = i.has_recipient(j.sender);
  if (j_answers_i && j.has_recipient(i.sender)) return EdgeKind::Reply;
  if (j_answers_i) return EdgeKind::Relay;
  if (i.sender == j.sender) return EdgeKind::Broadcast;
  return std::nullopt;
}

MetaGraph build_meta_graph(const std::vector<Interaction>& msgs) {
  std::vector<MetaVertex> vertices;
  vertices.reserve(msgs.size());
  for (const auto& m : msgs) vertices.push_back({m.id, m.timestamp, m.sender});

  // Only pairs sharing a participant can be linked: group message indexes by
  // sender and by recipient, then test sender-sender and recipient-sender
  // clusters instead of all n^2 pairs.
  std::unordered_map<std::string, std::vector<int>> by_sender;
  std::unordered_map<std::string, std::vector<int>> by_recipient;
  for (std::size_t i = 0; i < msgs.size(); ++i) {
    by_sender[msgs[i].sender].push_back(static_cast<int>(i));
    for (const auto& r : msgs[i].recipients)
      by_recipient[r].push_back(static_cast<int>(i));
  }

  std::vector<std::pair<int, int>> candidates;
  auto add_pair = [&](int a, int b) {
    const auto& ma = msgs[a];
    const auto& mb = msgs[b];
    if (ma.timestamp < mb.timestamp)
      candidates.emplace_back(a, b);
    else if (mb.timestamp < ma.timestamp)
      candidates.emplace_back(b, a);
    // equal timestamps: never linked
  };
  for (const auto& [s, group] : by_sender) {
    for (std::size_t a = 0; a < group.size(); ++a)
      for (std::size_t b = a + 1; b < group.size(); ++b) add_pair(group[a], group[b]);
    auto it = by_recipient.find(s);
    if (it == by_recipient.end()) continue;
    for (int recv : it->second)
      for (int send : group)
        if (recv != send) add_pair(recv, send);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<MetaEdge> edges;
  for (const auto& [a, b] : candidates) {
    const auto kind = classify_pair(msgs[a], msgs[b]);
    if (!kind) continue;
    edges.push_back({msgs[a].id, msgs[b].id, *kind,
                     dissimilarity(msgs[a].content, msgs[b].content)});
  }
  return MetaGraph(std::move(vertices), std::move(edges));
}

MetaGraph time_induced(const MetaGraph& g, Timestamp s, Timestamp f) {
  if (s > f) throw validation_error("time window start exceeds end");
  std::vector<MetaVertex> vertices;
  for (const auto& v : g.vertices())
    if (v.timestamp >= s && v.timestamp <= f) vertices.push_back(v);
  std::unordered_map<InteractionId, bool> keep;
  for (const auto& v : vertices) keep[v.id] = true;
  std::vector<MetaEdge> edges;
  for (const auto& e : g.edges())
    if (keep.count(e.src) && keep.count(e.dst)) edges.push_back(e);
  return MetaGraph(std::move(vertices), std::move(edges));
}

MetaGraph strip_singletons(const MetaGraph& g) {
  std::vector<MetaVertex> vertices;
  for (const auto& v : g.vertices())
    if (!g.out_edges(v.id).empty() || !g.in_edges(v.id).empty()) vertices.push_back(v);
  std::vector<MetaEdge> edges = g.edges();
  return MetaGraph(std::move(vertices), std::move(edges));
}

void write_dot(const MetaGraph& g, std::ostream& out) {
  out << "digraph meta {\n";
  for (const auto& v : g.vertices())
    out << "  n" << v.id << " [label=\"" << v.id << '|' << v.sender << '|'
        << v.timestamp << "\"];\n";
  for (const auto& e : g.edges()) {
    out << "  n" << e.src << " -> n" << e.dst << " [kind=\"" << to_string(e.kind)
        << "\", weight=\"" << std::fixed << std::setprecision(6) << e.weight << "\"";
    out.unsetf(std::ios::fixed);
    if (e.weight >= 0.8) out << ", style=dashed";
    out << "];\n";
  }
  out << "}\n";
}

void write_graph_json(const MetaGraph& g, std::ostream& out) {
  json j;
  j["vertices"] = json::array();
  for (const auto& v : g.vertices())
    j["vertices"].push_back({{"id", v.id}, {"timestamp", v.timestamp}, {"sender", v.sender}});
  j["edges"] = json::array();
  for (const auto& e : g.edges())
    j["edges"].push_back({{"src", e.src},
                          {"dst", e.dst},
                          {"kind", to_string(e.kind)},
                          {"weight", e.weight}});
  out << j.dump(2) << '\n';
}

void write_graph_json_file(const MetaGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write graph file: " + path);
  write_graph_json(g, out);
}

MetaGraph read_graph_json(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw parse_error(std::string("graph file: ") + e.what());
  }
  std::vector<MetaVertex> vertices;
  std::vector<MetaEdge> edges;
  try {
    for (const auto& v : j.at("vertices"))
      vertices.push_back({v.at("id").get<InteractionId>(),
                          v.at("timestamp").get<Timestamp>(),
                          v.at("sender").get<std::string>()});
    for (const auto& e : j.at("edges"))
      edges.push_back({e.at("src").get<InteractionId>(), e.at("dst").get<InteractionId>(),
                       edge_kind_from_string(e.at("kind").get<std::string>()),
                       e.at("weight").get<double>()});
  } catch (const json::exception& e) {
    throw parse_error(std::string("graph file: ") + e.what());
  }
  return MetaGraph(std::move(vertices), std::move(edges));
}

MetaGraph read_graph_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open graph file: " + path);
  return read_graph_json(in);
}

}  // namespace evtree
