/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#include "evtree/config.hpp"

#include <cctype>
#include <ostream>

#include <json.hpp>

#include "evtree/errors.hpp"

namespace evtree {

void DetectionConfig::validate() const {
  if (budget < 0.0) throw validation_error("budget must be >= 0");
  if (window < 0) throw validation_error("window must be >= 0");
  if (k < 1) throw validation_error("k must be >= 1");
  if (root_limit < 1) throw validation_error("root limit must be >= 1");
  if (dp_decimals < 0 || dp_decimals > 6)
    throw validation_error("dp_decimals must lie in [0, 6]");
  if (threads < 1) throw validation_error("threads must be >= 1");
  merge.validate();
}

SolveParams DetectionConfig::solve_params() const {
  SolveParams p;
  p.budget = budget;
  p.window = window;
  p.algorithm = algorithm;
  p.dp_decimals = dp_decimals;
  p.rng_seed = seed;
  return p;
}

TopKOptions DetectionConfig::top_k_options() const {
  TopKOptions opt;
  opt.k = k;
  opt.root_limit = root_limit;
  opt.threads = threads;
  return opt;
}

std::int64_t parse_duration(const std::string& text) {
  if (text.empty()) throw validation_error("empty duration");
  std::size_t pos = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &pos);
  } catch (const std::exception&) {
    throw validation_error("bad duration: " + text);
  }
  if (value < 0) throw validation_error("durations must be >= 0: " + text);
  if (pos == text.size()) return value;
  if (pos + 1 != text.size())
    throw validation_error("bad duration suffix: " + text);
  switch (std::tolower(static_cast<unsigned char>(text[pos]))) {
    case 's': return value;
    case 'm': return value * 60;
    case 'h': return value * 3600;
    case 'd': return value * 86400;
    case 'w': return value * 604800;
    default: throw validation_error("bad duration suffix: " + text + " (use s/m/h/d/w)");
  }
}

void write_event_set_json(const EventSet& set, const MetaGraph& g,
                          const DetectionConfig& cfg, std::ostream& out) {
  nlohmann::json j;
  j["trees"] = nlohmann::json::array();
  for (const auto& t : set.trees) {
    nlohmann::json jt;
    jt["root"] = t.root;
    jt["cost"] = t.cost;
    jt["nodes"] = nlohmann::json::array();
    for (const auto& id : t.nodes) {
      const auto& v = g.vertex(id);
      jt["nodes"].push_back(
          {{"id", v.id}, {"timestamp", v.timestamp}, {"sender", v.sender}});
    }
    jt["edges"] = nlohmann::json::array();
    for (const auto& e : t.edges)
      jt["edges"].push_back({{"src", e.src},
                             {"dst", e.dst},
                             {"kind", to_string(e.kind)},
                             {"weight", e.weight}});
    j["trees"].push_back(std::move(jt));
  }
  j["covered"] = set.covered;
  j["shortfall"] = set.shortfall;
  j["params"] = {{"budget", cfg.budget},
                 {"window", cfg.window},
                 {"k", cfg.k},
                 {"algorithm", to_string(cfg.algorithm)},
                 {"sampling", to_string(cfg.sampling)},
                 {"root_limit", cfg.root_limit},
                 {"dp_decimals", cfg.dp_decimals},
                 {"seed", cfg.seed}};
  out << j.dump(2) << '\n';
}

}  // namespace evtree
