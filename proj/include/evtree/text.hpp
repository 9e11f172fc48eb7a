/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <map>
#include <string>
#include <vector>

#include "evtree/types.hpp"

namespace evtree {

// Levenshtein(a, b) / max(|a|, |b|); 0 when both strings are empty.
double edit_distance_ratio(const std::string& a, const std::string& b);

// 1 - dot(a,b)/(|a||b|). Defined as 1 when either norm is 0. Inputs are
// expected non-negative, so the result lies in [0, 1].
double cosine_distance(const std::vector<double>& a, const std::vector<double>& b);
double cosine_distance(const std::map<int, double>& a, const std::map<int, double>& b);

// 1 - |A int B| / |A un B|; callers guarantee at least one set non-empty.
double jaccard_distance(const std::set<std::string>& a, const std::set<std::string>& b);

// Topic dissimilarity between two messages: the sum of the component
// distances (topic cosine + tf-idf cosine + hashtag Jaccard). A component
// contributes only when present on both sides, so topic-only corpora and
// ensemble corpora share one code path. Range [0, 3].
double dissimilarity(const ContentVector& a, const ContentVector& b);

// Lowercases and splits on anything that is not alphanumeric or '#'/'@'.
std::vector<std::string> tokenize(const std::string& text);

// Bag-of-words tf-idf over a corpus. Vocabulary is built from the corpus
// unless fixed up front. idf = ln(N / df); terms in every document get 0.
class TfidfModel {
 public:
  // Fits vocabulary + idf on the given texts (one per document).
  static TfidfModel fit(const std::vector<std::string>& docs);
  // Same, but restricted to a fixed vocabulary (terms outside it are dropped).
  static TfidfModel fit(const std::vector<std::string>& docs,
                        const std::vector<std::string>& vocabulary);

  std::map<int, double> transform(const std::string& text) const;
  const std::vector<std::string>& vocabulary() const { return vocab_; }
  const std::string& term(int index) const { return vocab_.at(index); }

 private:
  std::vector<std::string> vocab_;
  std::map<std::string, int> index_;
  std::vector<double> idf_;
  bool fixed_vocab_ = false;

  void build(const std::vector<std::string>& docs);
};

// Fills content.tfidf for every interaction that carries raw text, fitting
// the model on the whole dataset. Returns the fitted model for reporting.
TfidfModel compute_tfidf(std::vector<Interaction>& msgs);
TfidfModel compute_tfidf(std::vector<Interaction>& msgs,
                         const std::vector<std::string>& vocabulary);

}  // namespace evtree
