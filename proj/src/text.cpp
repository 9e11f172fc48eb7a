/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#include "evtree/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "evtree/errors.hpp"

namespace evtree {

double edit_distance_ratio(const std::string& a, const std::string& b) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0 && m == 0) return 0.0;
  if (n == 0 || m == 0) return 1.0;

  // Two-row Levenshtein.
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[m]) / static_cast<double>(std::max(n, m));
}

double cosine_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw validation_error("topic vectors of mismatched length: " +
                           std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 1.0;
  // Clamp: rounding can push the ratio a hair past 1 for near-parallel inputs.
  return std::max(0.0, 1.0 - dot / (std::sqrt(na) * std::sqrt(nb)));
}

double cosine_distance(const std::map<int, double>& a, const std::map<int, double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [k, v] : a) na += v * v;
  for (const auto& [k, v] : b) nb += v * v;
  if (na == 0.0 || nb == 0.0) return 1.0;
  auto it = a.begin();
  auto jt = b.begin();
  while (it != a.end() && jt != b.end()) {
    if (it->first < jt->first) {
      ++it;
    } else if (jt->first < it->first) {
      ++jt;
    } else {
      dot += it->second * jt->second;
      ++it;
      ++jt;
    }
  }
  return std::max(0.0, 1.0 - dot / (std::sqrt(na) * std::sqrt(nb)));
}

double jaccard_distance(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  const std::size_t uni = a.size() + b.size() - inter;
  if (uni == 0) return 0.0;
  return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
}

double dissimilarity(const ContentVector& a, const ContentVector& b) {
  double d = 0.0;
  if (a.topic && b.topic) d += cosine_distance(*a.topic, *b.topic);
  if (!a.tfidf.empty() && !b.tfidf.empty()) d += cosine_distance(a.tfidf, b.tfidf);
  if (!a.hashtags.empty() && !b.hashtags.empty()) d += jaccard_distance(a.hashtags, b.hashtags);
  return d;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string tok;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '#' || c == '@') {
      tok.push_back(static_cast<char>(std::tolower(c)));
    } else if (!tok.empty()) {
      out.push_back(std::move(tok));
      tok.clear();
    }
  }
  if (!tok.empty()) out.push_back(std::move(tok));
  return out;
}

void TfidfModel::build(const std::vector<std::string>& docs) {
  std::map<std::string, int> df;
  for (const auto& doc : docs) {
    std::set<std::string> seen;
    for (auto& t : tokenize(doc)) seen.insert(t);
    for (const auto& t : seen)
      if (fixed_vocab_ ? index_.count(t) > 0 : true) ++df[t];
  }
  if (!fixed_vocab_) {
    for (const auto& [t, n] : df) {
      index_[t] = static_cast<int>(vocab_.size());
      vocab_.push_back(t);
    }
  }
  idf_.assign(vocab_.size(), 0.0);
  const double n_docs = static_cast<double>(std::max<std::size_t>(docs.size(), 1));
  for (const auto& [t, n] : df) {
    auto it = index_.find(t);
    if (it != index_.end()) idf_[it->second] = std::log(n_docs / static_cast<double>(n));
  }
}

TfidfModel TfidfModel::fit(const std::vector<std::string>& docs) {
  TfidfModel m;
  m.build(docs);
  return m;
}

TfidfModel TfidfModel::fit(const std::vector<std::string>& docs,
                           const std::vector<std::string>& vocabulary) {
  TfidfModel m;
  m.fixed_vocab_ = true;
  m.vocab_ = vocabulary;
  for (std::size_t i = 0; i < vocabulary.size(); ++i)
    m.index_[vocabulary[i]] = static_cast<int>(i);
  m.build(docs);
  return m;
}

std::map<int, double> TfidfModel::transform(const std::string& text) const {
  std::map<int, double> out;
  for (const auto& t : tokenize(text)) {
    auto it = index_.find(t);
    if (it != index_.end()) out[it->second] += 1.0;
  }
  for (auto& [k, v] : out) v *= idf_[k];
  // Drop zero weights (terms present in every document) so emptiness keeps
  // meaning "component absent".
  for (auto it = out.begin(); it != out.end();)
    it = (it->second == 0.0) ? out.erase(it) : std::next(it);
  return out;
}

static TfidfModel apply_tfidf(std::vector<Interaction>& msgs, TfidfModel model) {
  for (auto& m : msgs)
    if (m.content.raw_text) m.content.tfidf = model.transform(*m.content.raw_text);
  return model;
}

TfidfModel compute_tfidf(std::vector<Interaction>& msgs) {
  std::vector<std::string> docs;
  for (const auto& m : msgs)
    if (m.content.raw_text) docs.push_back(*m.content.raw_text);
  return apply_tfidf(msgs, TfidfModel::fit(docs));
}

TfidfModel compute_tfidf(std::vector<Interaction>& msgs,
                         const std::vector<std::string>& vocabulary) {
  std::vector<std::string> docs;
  for (const auto& m : msgs)
    if (m.content.raw_text) docs.push_back(*m.content.raw_text);
  return apply_tfidf(msgs, TfidfModel::fit(docs, vocabulary));
}

}  // namespace evtree
