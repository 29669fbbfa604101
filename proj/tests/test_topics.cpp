#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "litstyle/error.hpp"
#include "litstyle/topics.hpp"
#include "oracles.hpp"
#include "synth.hpp"

using namespace litstyle;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return Errc::invalid_argument;
}

Token tok(const std::string& lemma, Pos pos) { return Token{lemma, lemma, pos, 0}; }

TokenStream repeated(std::vector<std::pair<Token, std::size_t>> items) {
  TokenStream s;
  s.doc_id = "d";
  for (const auto& [t, n] : items) {
    for (std::size_t i = 0; i < n; ++i) s.tokens.push_back(t);
  }
  return s;
}

Vocabulary vocab_of(std::vector<std::string> words) {
  std::vector<std::size_t> ones(words.size(), 1);
  return Vocabulary(std::move(words), ones, ones, VocabOptions{});
}

// A model with a hand-written topic-word count matrix, via the JSON loader.
TopicModel hand_model(const std::vector<std::string>& words,
                      const std::vector<std::vector<std::uint32_t>>& topic_word) {
  std::string tw = "[";
  for (std::size_t k = 0; k < topic_word.size(); ++k) {
    tw += k ? ",[" : "[";
    for (std::size_t w = 0; w < topic_word[k].size(); ++w) {
      tw += (w ? "," : "") + std::to_string(topic_word[k][w]);
    }
    tw += "]";
  }
  tw += "]";
  std::string ws = "[", ones = "[";
  for (std::size_t i = 0; i < words.size(); ++i) {
    ws += (i ? ",\"" : "\"") + words[i] + "\"";
    ones += i ? ",1" : "1";
  }
  ws += "]";
  ones += "]";
  const std::string json = R"({"format":"litstyle-lda","version":1,"topics":)" +
                           std::to_string(topic_word.size()) +
                           R"(,"alpha":0.5,"beta":0.01,"seed":1,"iterations":0,"vocabulary":{"min_freq":1,"pos":["NOUN","VERB"],"exclude_propn":true,"words":)" +
                           ws + R"(,"frequencies":)" + ones + R"(,"doc_frequencies":)" + ones +
                           R"(},"topic_word":)" + tw + R"(,"doc_topic":[]})";
  return topic_model_from_json(json);
}

std::vector<std::vector<std::string>> fitted_top(const TopicModel& m, std::size_t n) {
  std::vector<std::vector<std::string>> out;
  for (std::size_t k = 0; k < m.num_topics(); ++k) {
    std::vector<std::string> words;
    for (const auto& rw : top_words(m, k, n)) words.push_back(rw.word);
    out.push_back(std::move(words));
  }
  return out;
}

}  // namespace

TEST(Vocab, FrequencyBoundary) {
  const std::vector<TokenStream> docs{repeated({{tok("kept", Pos::noun), 100}, {tok("cut", Pos::noun), 99}})};
  const auto v = build_vocab(std::span<const TokenStream>(docs));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.word(0), "kept");
  EXPECT_EQ(v.frequency(0), 100u);
  EXPECT_FALSE(v.id("cut"));
}

TEST(Vocab, PosFilterAndProperNames) {
  const std::vector<TokenStream> docs{repeated({{tok("run", Pos::verb), 3},
                                                {tok("red", Pos::adj), 5},
                                                {tok("london", Pos::propn), 9},
                                                {tok("tree", Pos::noun), 2}})};
  VocabOptions o;
  o.min_freq = 1;
  const auto v = build_vocab(std::span<const TokenStream>(docs), o);
  EXPECT_EQ(v.words(), (std::vector<std::string>{"run", "tree"}));
}

TEST(Vocab, TiesAreLexicographic) {
  const std::vector<TokenStream> docs{
      repeated({{tok("zebra", Pos::noun), 100}, {tok("apple", Pos::noun), 100}, {tok("most", Pos::noun), 150}})};
  const auto v = build_vocab(std::span<const TokenStream>(docs));
  EXPECT_EQ(v.words(), (std::vector<std::string>{"most", "apple", "zebra"}));
}

TEST(Vocab, DocumentFrequencyAndBow) {
  const std::vector<TokenStream> docs{repeated({{tok("a", Pos::noun), 2}, {tok("b", Pos::noun), 1}}),
                                      repeated({{tok("a", Pos::noun), 1}, {tok("x", Pos::adj), 4}})};
  VocabOptions o;
  o.min_freq = 1;
  const auto v = build_vocab(std::span<const TokenStream>(docs), o);
  EXPECT_EQ(v.doc_frequency(*v.id("a")), 2u);
  EXPECT_EQ(v.doc_frequency(*v.id("b")), 1u);
  EXPECT_EQ(to_bow(docs[1].tokens, v), (DocBow{*v.id("a")}));
}

TEST(Vocab, EmptyIsError) {
  const std::vector<TokenStream> docs{repeated({{tok("a", Pos::noun), 3}})};
  EXPECT_EQ(code_of([&] { build_vocab(std::span<const TokenStream>(docs)); }), Errc::empty_vocabulary);
}

TEST(Lda, DegenerateOneWord) {
  const auto vocab = vocab_of({"only", "other", "third"});
  const std::vector<DocBow> docs{DocBow(5, 0)};
  LdaConfig c;
  c.topics = 1;
  c.iterations = 20;
  const auto m = fit_lda(docs, vocab, c);
  const auto phi = m.topic_word_distribution(0);
  const double beta = c.beta, v = 3.0, count = 5.0;
  EXPECT_GE(phi[0], 1.0 - beta * (v - 1.0) / (count + beta * v) - 1e-12);
  EXPECT_EQ(top_words(m, 0, 1)[0].word, "only");
  EXPECT_EQ(top_words(m, 0, 10).size(), 3u);
}

TEST(Lda, TooManyTopicsIsError) {
  const auto vocab = vocab_of({"a", "b"});
  const std::vector<DocBow> docs{DocBow{0, 1}};
  LdaConfig c;
  c.topics = 3;
  EXPECT_EQ(code_of([&] { fit_lda(docs, vocab, c); }), Errc::invalid_argument);
}

TEST(Lda, SameSeedIsBitwiseIdentical) {
  synth::TopicCorpusSpec spec;
  spec.docs = 60;
  const auto corpus = synth::disjoint_topic_corpus(spec);
  LdaConfig c;
  c.topics = 3;
  c.iterations = 50;
  c.seed = 7;
  const auto a = fit_lda(corpus.docs, corpus.vocab, c);
  const auto b = fit_lda(corpus.docs, corpus.vocab, c);
  EXPECT_EQ(topic_model_to_json(a), topic_model_to_json(b));
  c.seed = 8;
  EXPECT_NE(topic_model_to_json(a), topic_model_to_json(fit_lda(corpus.docs, corpus.vocab, c)));
}

TEST(Lda, CountsConservedEverySweep) {
  synth::TopicCorpusSpec spec;
  spec.docs = 40;
  const auto corpus = synth::disjoint_topic_corpus(spec);
  std::uint64_t tokens = 0;
  for (const auto& d : corpus.docs) tokens += d.size();
  LdaConfig c;
  c.topics = 4;
  c.iterations = 30;
  std::size_t sweeps = 0;
  fit_lda(corpus.docs, corpus.vocab, c, [&](std::size_t sweep, const TopicModel& m) {
    ++sweeps;
    EXPECT_EQ(sweep, sweeps);
    EXPECT_EQ(m.total_topic_word(), tokens);
    EXPECT_EQ(m.total_doc_topic(), tokens);
    std::uint64_t totals = 0;
    for (std::size_t k = 0; k < m.num_topics(); ++k) totals += m.topic_total(k);
    EXPECT_EQ(totals, tokens);
    for (std::size_t d = 0; d < m.num_docs(); ++d) EXPECT_EQ(m.doc_length(d), corpus.docs[d].size());
  });
  EXPECT_EQ(sweeps, 30u);
}

TEST(Lda, DistributionsNormalized) {
  synth::TopicCorpusSpec spec;
  spec.docs = 30;
  const auto corpus = synth::disjoint_topic_corpus(spec);
  LdaConfig c;
  c.topics = 5;
  c.iterations = 20;
  const auto m = fit_lda(corpus.docs, corpus.vocab, c);
  for (std::size_t k = 0; k < m.num_topics(); ++k) {
    const auto phi = m.topic_word_distribution(k);
    EXPECT_NEAR(std::accumulate(phi.begin(), phi.end(), 0.0), 1.0, 1e-9);
    for (double p : phi) EXPECT_GT(p, 0.0);
  }
  for (std::size_t d = 0; d < m.num_docs(); ++d) {
    const auto theta = m.doc_topic_distribution(d).probabilities;
    EXPECT_NEAR(std::accumulate(theta.begin(), theta.end(), 0.0), 1.0, 1e-9);
  }
}

TEST(Lda, RecoversDisjointTopics) {
  const auto corpus = synth::disjoint_topic_corpus({});
  for (std::uint64_t seed : {1, 2}) {
    LdaConfig c;
    c.topics = 3;
    c.iterations = 200;
    c.seed = seed;
    const auto m = fit_lda(corpus.docs, corpus.vocab, c);
    const auto match = oracle::match_topics(fitted_top(m, 10), corpus.topic_words);
    EXPECT_GE(match.purity, 0.8) << "seed " << seed;
  }
}

TEST(TopWords, HandRankedCounts) {
  const auto m = hand_model({"d", "c", "b", "a"}, {{3, 7, 3, 0}, {1, 1, 1, 1}});
  const auto top = top_words(m, 0, 4);
  ASSERT_EQ(top.size(), 4u);
  EXPECT_EQ(top[0].word, "c");
  EXPECT_EQ(top[1].word, "b");  // tie with "d", lexicographic
  EXPECT_EQ(top[2].word, "d");
  EXPECT_EQ(top[3].word, "a");
  EXPECT_NEAR(top[0].probability, (7 + 0.01) / (13 + 0.04), 1e-12);
  const auto flat = top_words(m, 1, 2);
  EXPECT_EQ(flat[0].word, "a");
  EXPECT_EQ(flat[1].word, "b");
  EXPECT_EQ(code_of([&] { top_words(m, 2); }), Errc::invalid_argument);
}

TEST(Infer, SingleTopicDocument) {
  const auto corpus = synth::disjoint_topic_corpus({});
  LdaConfig c;
  c.topics = 3;
  c.iterations = 200;
  const auto m = fit_lda(corpus.docs, corpus.vocab, c);
  const auto match = oracle::match_topics(fitted_top(m, 10), corpus.topic_words);

  // With the default alpha = 50/K the posterior share of an n-token
  // single-topic doc is capped near (n + alpha) / (n + K alpha), so the probe
  // docs are long enough for that cap to clear 0.9.
  synth::TopicCorpusSpec pure;
  pure.docs = 3;
  pure.doc_length = 400;
  pure.dominant_share = 1.0;
  pure.seed = 99;
  const auto probe = synth::disjoint_topic_corpus(pure);
  for (std::size_t d = 0; d < probe.streams.size(); ++d) {
    const auto bow = to_bow(probe.streams[d].tokens, m.vocabulary());
    const auto dist = infer_topics(m, bow, 100, 3);
    const std::size_t k = match.fitted_of_true[probe.dominant_topic[d]];
    EXPECT_GE(dist.probabilities[k], 0.9);
    EXPECT_NEAR(std::accumulate(dist.probabilities.begin(), dist.probabilities.end(), 0.0), 1.0, 1e-9);
    EXPECT_EQ(infer_topics(m, bow, 100, 3).probabilities, dist.probabilities);
  }
  EXPECT_EQ(code_of([&] { infer_topics(m, DocBow{}, 10, 1); }), Errc::all_oov);
}

TEST(Infer, ThresholdFlagsWithoutZeroing) {
  TopicDistribution d;
  d.probabilities = {0.9995, 0.0005};
  EXPECT_EQ(d.reported_topics(), (std::vector<std::size_t>{0}));
  EXPECT_GT(d.probabilities[1], 0.0);
}

TEST(Coherence, HandOracle) {
  // Topic 0 ranks a > b > c. Docs: {a, b}, {a}, {c}.
  const auto m = hand_model({"a", "b", "c"}, {{5, 3, 1}});
  const std::vector<DocBow> docs{{0, 1}, {0}, {2}};
  // pairs (b|a): log(2/2), (c|a): log(1/2), (c|b): log(1/1)
  EXPECT_NEAR(coherence_umass(m, docs, 3), std::log(0.5), 1e-12);
}

TEST(Coherence, CooccurrenceOrdering) {
  const auto m = hand_model({"a", "b", "c"}, {{5, 3, 1}});
  const std::vector<DocBow> together{{0, 1, 2}, {0, 1, 2}, {2, 1, 0}, {0, 1, 2}};
  const std::vector<DocBow> apart{{0}, {1}, {2}, {0}};
  const double high = coherence_umass(m, together, 3);
  EXPECT_NEAR(high, 3.0 * std::log(5.0 / 4.0), 1e-12);
  EXPECT_LT(coherence_umass(m, apart, 3), high);
  EXPECT_LT(coherence_umass(m, apart, 3), -1.0);
}

TEST(Serialization, JsonRoundTrip) {
  synth::TopicCorpusSpec spec;
  spec.docs = 20;
  const auto corpus = synth::disjoint_topic_corpus(spec);
  LdaConfig c;
  c.topics = 3;
  c.iterations = 10;
  const auto m = fit_lda(corpus.docs, corpus.vocab, c);
  const auto text = topic_model_to_json(m);
  const auto back = topic_model_from_json(text);
  EXPECT_EQ(topic_model_to_json(back), text);
  EXPECT_EQ(back.vocabulary().words(), m.vocabulary().words());
  EXPECT_EQ(code_of([] { topic_model_from_json("{\"format\":\"other\"}"); }), Errc::parse);
  EXPECT_EQ(code_of([] { topic_model_from_json("not json"); }), Errc::parse);
}
