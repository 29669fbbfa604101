#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "litstyle/error.hpp"
#include "litstyle/random.hpp"
#include "litstyle/sentiment.hpp"
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

// good = e1, bad = e2, neutral words along e3.
EmbeddingTable axis_table() {
  EmbeddingTable t(3);
  t.add("good", std::vector<double>{1, 0, 0});
  t.add("bad", std::vector<double>{0, 1, 0});
  t.add("fine", std::vector<double>{2, 0, 0});
  t.add("plain", std::vector<double>{0, 0, 1});
  t.add("grim", std::vector<double>{0, 3, 0});
  t.add("zero", std::vector<double>{0, 0, 0});
  return t;
}

LabelSet set(std::string name, std::vector<std::string> words) { return {std::move(name), std::move(words)}; }

SentimentScorer axis_scorer(const EmbeddingTable& t) {
  return SentimentScorer(t, set("positive", {"good"}), set("negative", {"bad"}), {}, false);
}

Token tok(const std::string& lemma, Pos pos, std::size_t sentence) { return Token{lemma, lemma, pos, sentence}; }

TokenStream stream(std::vector<Token> tokens) { return TokenStream{"doc", std::move(tokens)}; }

ResolvedLabels resolved(std::string name, const std::vector<Vector>& vs) {
  ResolvedLabels r{std::move(name), {}, {}};
  for (const auto& v : vs) r.vectors.emplace_back(v);
  return r;
}

std::vector<std::size_t> argsort(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  return idx;
}

}  // namespace

TEST(LabelSets, ParseAndBuiltins) {
  std::istringstream in("# comment\nJoy\n\n  smile  # trailing\njoy\n");
  const auto s = parse_label_set("happiness", in);
  EXPECT_EQ(s.labels, (std::vector<std::string>{"joy", "smile"}));
  std::istringstream empty("# nothing\n");
  EXPECT_EQ(code_of([&] { parse_label_set("x", empty); }), Errc::empty_input);
  for (const char* name : {"positive", "negative", "happiness", "fear"}) {
    EXPECT_FALSE(builtin_label_set(name).labels.empty()) << name;
  }
  EXPECT_EQ(code_of([] { builtin_label_set("anger"); }), Errc::invalid_argument);
}

TEST(LabelSets, UnresolvableDropped) {
  const auto t = axis_table();
  const auto r = resolve_labels(set("positive", {"good", "missing", "zero"}), t);
  EXPECT_EQ(r.vectors.size(), 1u);
  EXPECT_EQ(r.dropped, (std::vector<std::string>{"missing", "zero"}));
  EXPECT_EQ(code_of([&] { resolve_labels(set("p", {"missing"}), t); }), Errc::all_oov);
}

TEST(Aap, Examples) {
  const auto t = axis_table();
  const auto s = axis_scorer(t);
  EXPECT_DOUBLE_EQ(*s.aap("good"), 1.0);
  EXPECT_DOUBLE_EQ(*s.aap("plain"), 0.0);
  EXPECT_DOUBLE_EQ(*s.aap("bad"), -1.0);
  EXPECT_DOUBLE_EQ(*s.aap("fine"), 1.0);
  EXPECT_FALSE(s.aap("unknown"));
  EXPECT_FALSE(s.aap("zero"));
}

TEST(Aap, AntisymmetricUnderSwap) {
  const auto pos = synth::random_vectors(15, 20, 1);
  const auto neg = synth::random_vectors(15, 20, 2);
  const auto p = resolved("positive", pos), n = resolved("negative", neg);
  for (const auto& w : synth::random_vectors(1000, 20, 4)) {
    EXPECT_EQ(aap(w, p, n), -aap(w, n, p));
  }
}

TEST(Aap, InvariantUnderPositiveRescaling) {
  Rng rng(8);
  const auto pos = synth::random_vectors(5, 10, 11);
  const auto neg = synth::random_vectors(5, 10, 12);
  const auto p = resolved("positive", pos), n = resolved("negative", neg);
  for (auto w : synth::random_vectors(200, 10, 13)) {
    const double before = aap(w, p, n);
    const double k = 0.001 + 100.0 * rng.uniform();
    for (double& x : w) x *= k;
    EXPECT_NEAR(aap(w, p, n), before, 1e-12);
  }
}

TEST(Aap, ArgsortInvariantUnderAffineMaps) {
  Rng rng(17);
  const auto pos = synth::random_vectors(15, 20, 21);
  const auto neg = synth::random_vectors(15, 20, 22);
  const auto p = resolved("positive", pos), n = resolved("negative", neg);
  std::vector<double> scores;
  for (const auto& w : synth::random_vectors(1000, 20, 23)) scores.push_back(aap(w, p, n));
  const auto order = argsort(scores);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = 0.01 + 10.0 * rng.uniform();
    const double b = -5.0 + 10.0 * rng.uniform();
    std::vector<double> mapped;
    for (double s : scores) mapped.push_back(a * s + b);
    EXPECT_EQ(argsort(mapped), order);
  }
}

TEST(Emotion, RawAndStandardized) {
  const auto t = axis_table();
  const auto r = resolve_labels(set("happiness", {"good"}), t);
  EXPECT_DOUBLE_EQ(emotion_score(*t.find("good"), r, std::nullopt), 1.0);
  EXPECT_DOUBLE_EQ(emotion_score(*t.find("plain"), r, std::nullopt), 0.0);

  const auto table = load_embeddings(std::string(LITSTYLE_TEST_DATA) + "/embeddings50.txt");
  for (const char* name : {"happiness", "fear"}) {
    const auto labels = resolve_labels(builtin_label_set(name), table);
    const auto norm = emotion_norm(table, labels);
    std::vector<double> z;
    for (std::size_t i = 0; i < table.size(); ++i) z.push_back(emotion_score(table.row(i), labels, norm));
    const double n = static_cast<double>(z.size());
    const double mean = std::accumulate(z.begin(), z.end(), 0.0) / n;
    double var = 0.0;
    for (double v : z) var += (v - mean) * (v - mean);
    EXPECT_NEAR(mean, 0.0, 1e-9) << name;
    EXPECT_NEAR(std::sqrt(var / n), 1.0, 1e-9) << name;
  }
}

TEST(TextSentiment, SentenceMeans) {
  const auto t = axis_table();
  const auto s = axis_scorer(t);
  const auto one = text_sentiment(stream({tok("good", Pos::noun, 0)}), s);
  EXPECT_DOUBLE_EQ(one.aap_mean, 1.0);
  EXPECT_EQ(one.n_items, 1u);

  // sentence AAPs {1} and {0}; the ADJ and the OOV noun are ignored
  const auto two = text_sentiment(stream({tok("good", Pos::noun, 0), tok("bad", Pos::adj, 0),
                                          tok("plain", Pos::verb, 1), tok("missing", Pos::noun, 1)}),
                                  s);
  EXPECT_DOUBLE_EQ(two.aap_mean, 0.5);
  EXPECT_EQ(two.n_items, 2u);

  // per-sentence mean first: {1, 1, -1} -> 1/3, then {0} -> mean 1/6
  const auto weighted = text_sentiment(stream({tok("good", Pos::noun, 0), tok("fine", Pos::noun, 0),
                                               tok("bad", Pos::noun, 0), tok("plain", Pos::noun, 1)}),
                                       s);
  EXPECT_NEAR(weighted.aap_mean, 1.0 / 6.0, 1e-15);

  // OOV-only sentences are skipped
  const auto skip = text_sentiment(stream({tok("missing", Pos::noun, 0), tok("grim", Pos::noun, 1)}), s);
  EXPECT_DOUBLE_EQ(skip.aap_mean, -1.0);
  EXPECT_EQ(skip.n_items, 1u);

  EXPECT_EQ(code_of([&] { text_sentiment(stream({tok("missing", Pos::noun, 0)}), s); }), Errc::all_oov);
  EXPECT_EQ(code_of([&] { text_sentiment(stream({tok("good", Pos::adj, 0)}), s); }), Errc::empty_input);
}

TEST(TextSentiment, EmotionsReported) {
  const auto t = axis_table();
  const SentimentScorer s(t, set("positive", {"good"}), set("negative", {"bad"}),
                          {set("happiness", {"good"}), set("fear", {"bad", "absent"})}, false);
  EXPECT_EQ(s.emotion_names(), (std::vector<std::string>{"happiness", "fear"}));
  EXPECT_EQ(s.dropped_labels(), (std::vector<std::string>{"fear:absent"}));
  const auto p = text_sentiment(stream({tok("grim", Pos::noun, 0)}), s);
  EXPECT_DOUBLE_EQ(p.emotions.at("happiness"), 0.0);
  EXPECT_DOUBLE_EQ(p.emotions.at("fear"), 1.0);
}

TEST(TopicHappiness, LabelTopicAndMonteCarlo) {
  const auto table = load_embeddings(std::string(LITSTYLE_TEST_DATA) + "/embeddings50.txt");
  const auto positive = builtin_label_set("positive");
  const auto negative = builtin_label_set("negative");
  const SentimentScorer scorer(table, positive, negative, {}, false);

  // A one-topic model over the positive labels: its top words are exactly
  // those labels.
  auto one_topic = [](const std::vector<std::string>& words) {
    std::vector<DocBow> docs;
    for (std::size_t i = 0; i < words.size(); ++i) docs.push_back(DocBow(3, static_cast<std::uint32_t>(i)));
    std::vector<std::size_t> f(words.size(), 1);
    LdaConfig c;
    c.topics = 1;
    c.iterations = 5;
    return fit_lda(docs, Vocabulary(words, f, f, VocabOptions{}), c);
  };
  std::vector<std::string> words;
  for (const auto& w : positive.labels) {
    if (table.contains(w)) words.push_back(w);
  }
  ASSERT_GE(words.size(), 2u);
  const auto labels_model = one_topic(words);

  // Oracle: mean over the labels of (mean cos to positives - mean cos to negatives).
  const auto p = resolve_labels(positive, table), n = resolve_labels(negative, table);
  double expected = 0.0;
  for (const auto& w : words) expected += aap(*table.find(w), p, n);
  expected /= static_cast<double>(words.size());
  EXPECT_NEAR(topic_happiness(labels_model, 0, scorer), expected, 1e-12);
  EXPECT_GT(expected, 0.0);

  const auto river = one_topic({"river"});
  EXPECT_NEAR(topic_happiness(river, 0, scorer), *scorer.aap("river"), 1e-12);
  const auto none = one_topic({"qqq"});
  EXPECT_EQ(code_of([&] { topic_happiness(none, 0, scorer); }), Errc::all_oov);

  // Random labels and words: AAP averages to ~0.
  const auto pos = synth::random_vectors(15, 50, 31);
  const auto neg = synth::random_vectors(15, 50, 32);
  const auto rp = resolved("positive", pos), rn = resolved("negative", neg);
  double total = 0.0;
  const auto ws = synth::random_vectors(2000, 50, 33);
  for (const auto& w : ws) total += aap(w, rp, rn);
  // sd of one AAP here is about sqrt(2 / (15 * 50)) ~ 0.05; 5 sd of the mean
  EXPECT_NEAR(total / static_cast<double>(ws.size()), 0.0, 5.0 * 0.052 / std::sqrt(2000.0));
}

TEST(Aggregate, MeansAndRanking) {
  auto prof = [](std::string subject, double aap, double fear) {
    SentimentProfile p;
    p.subject = std::move(subject);
    p.aap_mean = aap;
    p.emotions["fear"] = fear;
    p.n_items = 1;
    return p;
  };
  const std::vector<GroupedProfile> in{
      {prof("d1", 0.2, 1.0), "austen", Category::novels},
      {prof("d2", 0.4, 3.0), "austen", Category::novels},
      {prof("d3", -0.1, 0.0), "poe", Category::stories},
      {prof("d4", 0.5, 0.0), "carroll", Category::children},
  };
  const auto by_author = aggregate_profiles(in, GroupKey::author);
  ASSERT_EQ(by_author.size(), 3u);
  EXPECT_EQ(by_author[0].subject, "carroll");
  EXPECT_EQ(by_author[1].subject, "austen");
  EXPECT_NEAR(by_author[1].aap_mean, 0.3, 1e-15);
  EXPECT_DOUBLE_EQ(by_author[1].emotions.at("fear"), 2.0);
  EXPECT_EQ(by_author[1].n_items, 2u);
  EXPECT_EQ(by_author[2].subject, "poe");
  EXPECT_DOUBLE_EQ(by_author[2].aap_mean, -0.1);

  const auto by_cat = aggregate_profiles(in, GroupKey::category);
  EXPECT_EQ(by_cat.size(), 3u);

  // Identical members give back the member.
  const std::vector<GroupedProfile> same{{prof("a", 0.25, 0.5), "x", Category::poems},
                                         {prof("b", 0.25, 0.5), "x", Category::poems}};
  const auto one = aggregate_profiles(same, GroupKey::author);
  EXPECT_DOUBLE_EQ(one[0].aap_mean, 0.25);
  EXPECT_DOUBLE_EQ(one[0].emotions.at("fear"), 0.5);
}

TEST(Aggregate, AffineMapKeepsAuthorOrder) {
  Rng rng(41);
  std::vector<GroupedProfile> in;
  for (int i = 0; i < 60; ++i) {
    SentimentProfile p;
    p.subject = "d" + std::to_string(i);
    p.aap_mean = rng.normal();
    p.n_items = 1;
    in.push_back({p, "author" + std::to_string(i % 12), Category::novels});
  }
  auto names = [](const std::vector<SentimentProfile>& v) {
    std::vector<std::string> out;
    for (const auto& p : v) out.push_back(p.subject);
    return out;
  };
  const auto base = names(aggregate_profiles(in, GroupKey::author));
  for (auto& g : in) g.profile.aap_mean = 3.5 * g.profile.aap_mean + 0.75;
  EXPECT_EQ(names(aggregate_profiles(in, GroupKey::author)), base);
}

TEST(Profiles, CsvLayout) {
  SentimentProfile p;
  p.subject = "novels";
  p.aap_mean = 0.5;
  p.emotions["happiness"] = 1.25;
  p.n_items = 3;
  std::ostringstream out;
  write_profiles_csv(out, std::vector<SentimentProfile>{p});
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "subject,aap,happiness,fear,n");
  EXPECT_NE(out.str().find("novels,0.5,1.25,"), std::string::npos) << out.str();
}
