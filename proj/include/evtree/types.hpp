/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace evtree {

using InteractionId = std::int64_t;
using Timestamp = std::int64_t;  // seconds since epoch

// Content attached to one message. Any subset of the representations may be
// present; at least one of {topic, tfidf, hashtags} is required for messages
// that take part in detection.
struct ContentVector {
  std::optional<std::vector<double>> topic;  // dense topic-model vector
  std::map<int, double> tfidf;               // sparse term -> weight, empty = absent
  std::set<std::string> hashtags;
  std::optional<std::string> raw_text;
};

// One directed, time-stamped message from a sender to a recipient set.
struct Interaction {
  InteractionId id = 0;
  std::string sender;
  std::vector<std::string> recipients;  // sorted, deduplicated, never empty
  Timestamp timestamp = 0;
  ContentVector content;

  bool has_recipient(const std::string& node) const;
};

// Controls near-duplicate message merging.
struct MergePolicy {
  double edit_ratio_max = 0.10;   // merge when Levenshtein ratio is below this
  std::int64_t max_time_gap = 86400;  // seconds from the group's earliest message

  void validate() const;
};

// (timestamp, id) is the canonical total order on interactions.
inline bool time_id_less(const Interaction& a, const Interaction& b) {
  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
  return a.id < b.id;
}

}  // namespace evtree
