/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "evtree/errors.hpp"
#include "evtree/ingest.hpp"
#include "evtree/rng.hpp"
#include "evtree/text.hpp"
#include "test_util.hpp"

using namespace evtree;

namespace {

// Reference Levenshtein, quadratic and obviously correct.
std::size_t lev_oracle(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1,
                                          std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u)});
  return d[a.size()][b.size()];
}

std::string random_word(Rng& rng, int max_len) {
  std::string s;
  const int len = static_cast<int>(rng.below(max_len + 1));
  for (int i = 0; i < len; ++i) s.push_back('a' + static_cast<char>(rng.below(4)));
  return s;
}

Interaction simple_msg(InteractionId id, const std::string& sender, Timestamp t,
                       const std::string& text) {
  Interaction m;
  m.id = id;
  m.sender = sender;
  m.recipients = {"r1"};
  m.timestamp = t;
  m.content.raw_text = text;
  return m;
}

}  // namespace

TEST_CASE("edit distance ratio on known pairs") {
  CHECK(edit_distance_ratio("abc", "abc") == 0.0);
  CHECK(edit_distance_ratio("abcd", "abce") == doctest::Approx(0.25));
  CHECK(edit_distance_ratio("", "x") == 1.0);
  CHECK(edit_distance_ratio("", "") == 0.0);
  CHECK(edit_distance_ratio("kitten", "sitting") == doctest::Approx(3.0 / 7.0));
}

TEST_CASE("edit distance ratio matches the reference implementation") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const std::string a = random_word(rng, 12);
    const std::string b = random_word(rng, 12);
    const double want =
        (a.empty() && b.empty())
            ? 0.0
            : static_cast<double>(lev_oracle(a, b)) / std::max(a.size(), b.size());
    CHECK(edit_distance_ratio(a, b) == doctest::Approx(want));
  }
}

TEST_CASE("dissimilarity components") {
  ContentVector a, b;
  a.topic = std::vector<double>{1.0, 0.0};
  b.topic = std::vector<double>{0.0, 1.0};
  CHECK(dissimilarity(a, b) == doctest::Approx(1.0));  // orthogonal topics
  CHECK(dissimilarity(a, a) == 0.0);

  ContentVector h1, h2;
  h1.hashtags = {"x", "y"};
  h2.hashtags = {"y", "z"};
  CHECK(dissimilarity(h1, h2) == doctest::Approx(1.0 - 1.0 / 3.0));

  // Absent components contribute nothing.
  ContentVector t1 = a, mixed = b;
  mixed.hashtags = {"q"};
  CHECK(dissimilarity(t1, mixed) == doctest::Approx(1.0));

  ContentVector z1, z2;
  z1.topic = std::vector<double>{0.0, 0.0};
  z2.topic = std::vector<double>{1.0, 0.0};
  CHECK(dissimilarity(z1, z2) == 1.0);  // zero norm counts as maximally far

  ContentVector bad;
  bad.topic = std::vector<double>{1.0, 0.0, 0.0};
  CHECK_THROWS_AS(dissimilarity(a, bad), validation_error);
}

TEST_CASE("dissimilarity is symmetric and bounded") {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    auto gen = [&] {
      ContentVector c;
      if (rng.below(2)) {
        std::vector<double> v(4);
        for (auto& x : v) x = rng.real();
        c.topic = v;
      }
      if (rng.below(2))
        for (int k = 0; k < 3; ++k) c.tfidf[static_cast<int>(rng.below(6))] = rng.real();
      if (rng.below(2))
        for (int k = 0; k < 2; ++k) c.hashtags.insert(std::string(1, 'a' + rng.below(5)));
      return c;
    };
    const ContentVector a = gen(), b = gen();
    const double dab = dissimilarity(a, b);
    CHECK(dab == dissimilarity(b, a));
    CHECK(dab >= 0.0);
    CHECK(dab <= 3.0 + 1e-12);
  }
}

TEST_CASE("tfidf distance separates different texts") {
  std::vector<Interaction> msgs{
      simple_msg(0, "a", 0, "the cat sat on the mat"),
      simple_msg(1, "b", 1, "the cat sat on the mat"),
      simple_msg(2, "c", 2, "quarterly earnings review tomorrow"),
  };
  compute_tfidf(msgs);
  CHECK(dissimilarity(msgs[0].content, msgs[1].content) == doctest::Approx(0.0));
  CHECK(dissimilarity(msgs[0].content, msgs[2].content) > 0.5);
}

TEST_CASE("ingest parses the toy fixture") {
  std::ifstream in(std::string(EVTREE_DATA_DIR) + "/toy_email.jsonl");
  REQUIRE(in.good());
  const auto msgs = ingest(in);
  REQUIRE(msgs.size() == 7);
  // Sorted by (timestamp, id): Mon 1, Tue 2, Wed 3, Wed 5, Thu 4, Thu 6, Fri 7.
  std::vector<InteractionId> order;
  for (const auto& m : msgs) order.push_back(m.id);
  CHECK(order == std::vector<InteractionId>{1, 2, 3, 5, 4, 6, 7});
  CHECK(msgs[0].sender == "CEO");
  CHECK(msgs[1].recipients == std::vector<std::string>{"TM1", "TM2"});
  CHECK(msgs[6].timestamp - msgs[0].timestamp == 4 * 86400);
}

TEST_CASE("ingest edge cases") {
  std::istringstream empty("");
  CHECK(ingest(empty).empty());

  std::istringstream missing(R"({"sender": "a", "timestamp": 1})");
  CHECK_THROWS_WITH_AS(ingest(missing), doctest::Contains("line 1"), parse_error);

  std::istringstream malformed("{\"id\": 0, \"sender\": \"a\"\nnot json");
  CHECK_THROWS_AS(ingest(malformed), parse_error);

  std::istringstream dup(
      "{\"id\": 3, \"sender\": \"a\", \"recipients\": [\"b\"], \"timestamp\": 1}\n"
      "{\"id\": 3, \"sender\": \"c\", \"recipients\": [\"d\"], \"timestamp\": 2}\n");
  CHECK_THROWS_AS(ingest(dup), validation_error);

  std::istringstream empty_rcpt(
      R"({"id": 0, "sender": "a", "recipients": [], "timestamp": 1})");
  CHECK_THROWS_AS(ingest(empty_rcpt), validation_error);

  std::istringstream auto_ids(
      "{\"sender\": \"a\", \"recipients\": [\"b\"], \"timestamp\": 5}\n"
      "{\"sender\": \"c\", \"recipients\": [\"d\"], \"timestamp\": 1}\n");
  const auto msgs = ingest(auto_ids);
  REQUIRE(msgs.size() == 2);
  CHECK(msgs[0].id == 1);  // earlier timestamp, assigned id 1 in input order
  CHECK(msgs[1].id == 0);

  std::istringstream mixed(
      "{\"id\": 1, \"sender\": \"a\", \"recipients\": [\"b\"], \"timestamp\": 1}\n"
      "{\"sender\": \"c\", \"recipients\": [\"d\"], \"timestamp\": 2}\n");
  CHECK_THROWS_AS(ingest(mixed), validation_error);

  std::istringstream badtopic(
      "{\"id\": 0, \"sender\": \"a\", \"recipients\": [\"b\"], \"timestamp\": 1, "
      "\"topic\": [1.0]}\n"
      "{\"id\": 1, \"sender\": \"a\", \"recipients\": [\"b\"], \"timestamp\": 2, "
      "\"topic\": [1.0, 0.0]}\n");
  CHECK_THROWS_AS(ingest(badtopic), validation_error);
}

TEST_CASE("sidecar metadata constrains the dataset") {
  DatasetMeta meta;
  meta.topic_dim = 2;
  std::istringstream ok(
      R"({"id": 0, "sender": "a", "recipients": ["b"], "timestamp": 1, "topic": [0.5, 0.5]})");
  CHECK(ingest(ok, meta).size() == 1);

  std::istringstream bad(
      R"({"id": 0, "sender": "a", "recipients": ["b"], "timestamp": 1, "topic": [0.5]})");
  CHECK_THROWS_AS(ingest(bad, meta), validation_error);

  // A fixed vocabulary drops out-of-vocabulary terms.
  std::vector<Interaction> msgs{
      simple_msg(0, "a", 0, "alpha beta gamma"),
      simple_msg(1, "b", 1, "alpha delta"),
  };
  const TfidfModel model = compute_tfidf(msgs, {"alpha", "beta"});
  CHECK(model.vocabulary().size() == 2);
  for (const auto& m : msgs)
    for (const auto& [term, w] : m.content.tfidf) CHECK(term < 2);
}

TEST_CASE("serialize then ingest round-trips") {
  auto sorted = test::toy_email();
  std::sort(sorted.begin(), sorted.end(), time_id_less);
  std::ostringstream out;
  serialize(sorted, out);
  std::istringstream in(out.str());
  const auto back = ingest(in);
  REQUIRE(back.size() == sorted.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].id == sorted[i].id);
    CHECK(back[i].sender == sorted[i].sender);
    CHECK(back[i].recipients == sorted[i].recipients);
    CHECK(back[i].timestamp == sorted[i].timestamp);
    CHECK(*back[i].content.topic == *sorted[i].content.topic);
  }
  // And a second pass is byte-identical.
  std::ostringstream out2;
  serialize(back, out2);
  CHECK(out.str() == out2.str());
}

TEST_CASE("merge_similar merges near-duplicates from the same sender") {
  MergePolicy policy;  // 10% ratio, 1 day
  std::vector<Interaction> msgs{
      simple_msg(0, "alice", 1000, "breaking news about the event"),
      simple_msg(1, "alice", 1000 + 3600, "breaking news about the event"),
  };
  msgs[0].recipients = {"bob"};
  msgs[1].recipients = {"carol"};
  const auto merged = merge_similar(msgs, policy);
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].id == 0);
  CHECK(merged[0].timestamp == 1000);
  CHECK(merged[0].recipients == std::vector<std::string>{"bob", "carol"});

  SUBCASE("different senders never merge") {
    auto other = msgs;
    other[1].sender = "mallory";
    CHECK(merge_similar(other, policy).size() == 2);
  }
  SUBCASE("a large time gap blocks the merge") {
    auto other = msgs;
    other[1].timestamp = 1000 + 10 * 86400;
    CHECK(merge_similar(other, policy).size() == 2);
  }
  SUBCASE("messages without text never merge") {
    auto other = msgs;
    other[0].content.raw_text.reset();
    other[1].content.raw_text.reset();
    CHECK(merge_similar(other, policy).size() == 2);
  }
}

TEST_CASE("merge_similar groups against the earliest open representative") {
  MergePolicy policy;
  policy.max_time_gap = 100;
  std::vector<Interaction> msgs{
      simple_msg(0, "a", 0, "hello world"),
      simple_msg(1, "a", 90, "hello world"),
      simple_msg(2, "a", 150, "hello world"),  // too far from msg 0, joins nothing open
  };
  const auto merged = merge_similar(msgs, policy);
  // msg 1 joins group(0); msg 2 is 150s from msg 0 -> opens its own group.
  REQUIRE(merged.size() == 2);
  CHECK(merged[0].id == 0);
  CHECK(merged[1].id == 2);
}

TEST_CASE("merge_similar is idempotent and conservative") {
  Rng rng(23);
  const std::vector<std::string> texts{"aaaa", "aaab", "zzzz", "qqqq"};
  for (int round = 0; round < 30; ++round) {
    std::vector<Interaction> msgs;
    const int n = 2 + static_cast<int>(rng.below(12));
    for (int i = 0; i < n; ++i) {
      auto m = simple_msg(i, "s" + std::to_string(rng.below(3)),
                          static_cast<Timestamp>(rng.below(200000)),
                          texts[rng.below(texts.size())]);
      msgs.push_back(m);
    }
    std::sort(msgs.begin(), msgs.end(), time_id_less);
    const auto once = merge_similar(msgs);
    const auto twice = merge_similar(once);
    REQUIRE(once.size() == twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) {
      CHECK(once[i].id == twice[i].id);
      CHECK(once[i].recipients == twice[i].recipients);
    }
    CHECK(once.size() <= msgs.size());
    auto senders_of = [](const std::vector<Interaction>& v) {
      std::set<std::string> s;
      for (const auto& m : v) s.insert(m.sender);
      return s;
    };
    CHECK(senders_of(once) == senders_of(msgs));
  }
}
