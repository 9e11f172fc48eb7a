/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#include "evtree/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "evtree/errors.hpp"
#include "evtree/text.hpp"

namespace evtree {

using nlohmann::json;

bool Interaction::has_recipient(const std::string& node) const {
  return std::binary_search(recipients.begin(), recipients.end(), node);
}

void MergePolicy::validate() const {
  if (edit_ratio_max < 0.0 || edit_ratio_max > 1.0)
    throw validation_error("merge edit_ratio_max must lie in [0,1]");
  if (max_time_gap < 0) throw validation_error("merge max_time_gap must be >= 0");
}

DatasetMeta load_dataset_meta(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open sidecar file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw parse_error(path + ": " + e.what());
  }
  DatasetMeta meta;
  if (j.contains("topic_dim")) meta.topic_dim = j.at("topic_dim").get<int>();
  if (j.contains("vocabulary"))
    meta.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
  return meta;
}

namespace {

Interaction parse_record(const json& j, std::size_t line_no) {
  auto fail = [line_no](const std::string& what) -> parse_error {
    return parse_error("line " + std::to_string(line_no) + ": " + what);
  };
  if (!j.is_object()) throw fail("record is not a JSON object");

  Interaction m;
  try {
    if (j.contains("id")) m.id = j.at("id").get<InteractionId>();
    m.sender = j.at("sender").get<std::string>();
    if (!j.contains("recipients")) throw fail("missing recipients");
    m.recipients = j.at("recipients").get<std::vector<std::string>>();
    m.timestamp = j.at("timestamp").get<Timestamp>();
    if (j.contains("text")) m.content.raw_text = j.at("text").get<std::string>();
    if (j.contains("topic"))
      m.content.topic = j.at("topic").get<std::vector<double>>();
    if (j.contains("hashtags"))
      for (auto& h : j.at("hashtags").get<std::vector<std::string>>())
        m.content.hashtags.insert(std::move(h));
  } catch (const json::exception& e) {
    throw fail(e.what());
  }
  std::sort(m.recipients.begin(), m.recipients.end());
  m.recipients.erase(std::unique(m.recipients.begin(), m.recipients.end()),
                     m.recipients.end());
  if (m.recipients.empty()) throw validation_error(
      "line " + std::to_string(line_no) + ": recipient set must not be empty");
  return m;
}

}  // namespace

std::vector<Interaction> ingest(std::istream& in, const DatasetMeta& meta) {
  std::vector<Interaction> msgs;
  std::size_t n_with_id = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw parse_error("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (j.is_object() && j.contains("id")) ++n_with_id;
    msgs.push_back(parse_record(j, line_no));
  }

  if (n_with_id != 0 && n_with_id != msgs.size())
    throw validation_error("ids must be present on all records or on none");
  if (n_with_id == 0)
    for (std::size_t i = 0; i < msgs.size(); ++i)
      msgs[i].id = static_cast<InteractionId>(i);

  std::unordered_set<InteractionId> seen;
  std::optional<std::size_t> topic_dim;
  if (meta.topic_dim) topic_dim = static_cast<std::size_t>(*meta.topic_dim);
  for (const auto& m : msgs) {
    if (m.id < 0) throw validation_error("negative interaction id " + std::to_string(m.id));
    if (!seen.insert(m.id).second)
      throw validation_error("duplicate interaction id " + std::to_string(m.id));
    if (m.content.topic) {
      if (!topic_dim) topic_dim = m.content.topic->size();
      if (m.content.topic->size() != *topic_dim)
        throw validation_error("interaction " + std::to_string(m.id) +
                               ": topic length " + std::to_string(m.content.topic->size()) +
                               " != dataset length " + std::to_string(*topic_dim));
    }
  }

  std::sort(msgs.begin(), msgs.end(), time_id_less);
  return msgs;
}

std::vector<Interaction> ingest_file(const std::string& path, const DatasetMeta& meta) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open interaction log: " + path);
  return ingest(in, meta);
}

void serialize(const std::vector<Interaction>& msgs, std::ostream& out) {
  for (const auto& m : msgs) {
    json j;
    j["id"] = m.id;
    j["sender"] = m.sender;
    j["recipients"] = m.recipients;
    j["timestamp"] = m.timestamp;
    if (m.content.raw_text) j["text"] = *m.content.raw_text;
    if (m.content.topic) j["topic"] = *m.content.topic;
    if (!m.content.hashtags.empty())
      j["hashtags"] = std::vector<std::string>(m.content.hashtags.begin(),
                                               m.content.hashtags.end());
    out << j.dump() << '\n';
  }
}

void serialize_file(const std::vector<Interaction>& msgs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write interaction log: " + path);
  serialize(msgs, out);
}

std::vector<Interaction> merge_similar(const std::vector<Interaction>& msgs,
                                       const MergePolicy& policy) {
  policy.validate();

  struct Group {
    Interaction repr;            // earliest message, holds merged recipients
    std::set<std::string> recipients;
  };
  std::vector<Group> groups;  // in (timestamp, id) order of their representative

  for (const auto& m : msgs) {
    Group* target = nullptr;
    if (m.content.raw_text) {
      for (auto& g : groups) {
        if (g.repr.sender != m.sender) continue;
        if (!g.repr.content.raw_text) continue;
        if (m.timestamp - g.repr.timestamp > policy.max_time_gap) continue;
        if (edit_distance_ratio(*m.content.raw_text, *g.repr.content.raw_text) >=
            policy.edit_ratio_max)
          continue;
        target = &g;  // groups scanned in creation order = earliest first
        break;
      }
    }
    if (target) {
      target->recipients.insert(m.recipients.begin(), m.recipients.end());
    } else {
      Group g;
      g.repr = m;
      g.recipients.insert(m.recipients.begin(), m.recipients.end());
      groups.push_back(std::move(g));
    }
  }

  std::vector<Interaction> out;
  out.reserve(groups.size());
  for (auto& g : groups) {
    g.repr.recipients.assign(g.recipients.begin(), g.recipients.end());
    out.push_back(std::move(g.repr));
  }
  std::sort(out.begin(), out.end(), time_id_less);
  return out;
}

}  // namespace evtree
