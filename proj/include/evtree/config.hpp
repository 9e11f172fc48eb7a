/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "evtree/event_selection.hpp"
#include "evtree/types.hpp"

namespace evtree {

// Everything one detection run needs.
struct DetectionConfig {
  double budget = 0.0;
  std::int64_t window = 86400;
  int k = 1;
  Algorithm algorithm = Algorithm::Greedy;
  Sampling sampling = Sampling::UpperBound;
  int root_limit = 100;
  int dp_decimals = 2;
  std::uint64_t seed = 0;
  int threads = 1;
  MergePolicy merge;

  void validate() const;
  SolveParams solve_params() const;
  TopKOptions top_k_options() const;
};

// Duration literals: plain seconds or a number with an s/m/h/d/w suffix
// ("3600s", "90m", "1d", "4w").
std::int64_t parse_duration(const std::string& text);

// EventSet JSON: the trees (root, nodes with timestamps and senders, edges
// with kind and weight, cost), the covered ids and the parameters used.
void write_event_set_json(const EventSet& set, const MetaGraph& g,
                          const DetectionConfig& cfg, std::ostream& out);

}  // namespace evtree
