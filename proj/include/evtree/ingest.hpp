/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "evtree/types.hpp"

namespace evtree {

// Optional dataset-level sidecar: declares the topic length and/or a fixed
// tf-idf vocabulary for the interaction log it accompanies.
struct DatasetMeta {
  std::optional<int> topic_dim;
  std::vector<std::string> vocabulary;
};

DatasetMeta load_dataset_meta(const std::string& path);

// Parses a JSON-lines interaction log. One object per line:
//   {"id": 3, "sender": "TM2", "recipients": ["PM"], "timestamp": 1430092800,
//    "text": "...", "topic": [0.1, ...], "hashtags": ["beefban"]}
// text/topic/hashtags are optional. Ids are either given on every record or
// on none, in which case 0..n-1 are assigned in input order. The result is
// sorted by (timestamp, id).
//
// Malformed lines raise parse_error naming the line number; duplicate ids,
// empty recipient sets and inconsistent topic lengths raise validation_error.
std::vector<Interaction> ingest(std::istream& in,
                                const DatasetMeta& meta = {});
std::vector<Interaction> ingest_file(const std::string& path,
                                     const DatasetMeta& meta = {});

// Inverse of ingest: writes the same JSON-lines schema. ingest(serialize(x))
// reproduces x exactly.
void serialize(const std::vector<Interaction>& msgs, std::ostream& out);
void serialize_file(const std::vector<Interaction>& msgs, const std::string& path);

// Collapses near-duplicate messages. Scanning in (timestamp, id) order, a
// message joins the earliest open group with the same sender whose
// representative (the group's earliest message) satisfies
//   edit_distance_ratio(text, repr text) < policy.edit_ratio_max
// and whose time gap to the representative is <= policy.max_time_gap.
// The merged interaction keeps the representative's id, text, content and
// timestamp; recipients are the union over the group. Messages without raw
// text never merge. Output is sorted by (timestamp, id).
std::vector<Interaction> merge_similar(const std::vector<Interaction>& msgs,
                                       const MergePolicy& policy = {});

}  // namespace evtree
