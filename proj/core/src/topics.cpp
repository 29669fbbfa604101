#include "litstyle/topics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "litstyle/error.hpp"
#include "litstyle/random.hpp"

namespace litstyle {

bool VocabOptions::admits(Pos pos) const {
  if (pos == Pos::propn && exclude_propn) return false;
  return std::find(pos_set.begin(), pos_set.end(), pos) != pos_set.end();
}

Vocabulary::Vocabulary(std::vector<std::string> words, std::vector<std::size_t> frequencies,
                       std::vector<std::size_t> doc_frequencies, VocabOptions options)
    : words_(std::move(words)),
      frequencies_(std::move(frequencies)),
      doc_frequencies_(std::move(doc_frequencies)),
      options_(std::move(options)) {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    index_.emplace(words_[i], static_cast<std::uint32_t>(i));
  }
}

std::optional<std::uint32_t> Vocabulary::id(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocab(std::span<const std::span<const Token>> documents,
                       const VocabOptions& options) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;  // freq, df
  for (const auto& doc : documents) {
    std::map<std::string_view, bool> seen;
    for (const auto& t : doc) {
      if (!options.admits(t.pos)) continue;
      auto& c = counts[t.lemma];
      ++c.first;
      if (!seen[t.lemma]) {
        seen[t.lemma] = true;
        ++c.second;
      }
    }
  }
  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> kept;
  for (auto& [word, c] : counts) {
    if (c.first >= options.min_freq) kept.emplace_back(word, c);
  }
  if (kept.empty()) {
    throw Error(Errc::empty_vocabulary, "no word reaches the minimum frequency " +
                                            std::to_string(options.min_freq));
  }
  // `counts` is ordered lexicographically, so a stable sort keeps ties in
  // lexicographic order.
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second.first > b.second.first; });
  std::vector<std::string> words;
  std::vector<std::size_t> freq;
  std::vector<std::size_t> df;
  for (auto& [word, c] : kept) {
    words.push_back(word);
    freq.push_back(c.first);
    df.push_back(c.second);
  }
  return Vocabulary(std::move(words), std::move(freq), std::move(df), options);
}

Vocabulary build_vocab(std::span<const TokenStream> documents, const VocabOptions& options) {
  std::vector<std::span<const Token>> views;
  views.reserve(documents.size());
  for (const auto& d : documents) views.emplace_back(d.tokens);
  return build_vocab(std::span<const std::span<const Token>>(views), options);
}

DocBow to_bow(std::span<const Token> tokens, const Vocabulary& vocab) {
  DocBow bow;
  for (const auto& t : tokens) {
    if (!vocab.options().admits(t.pos)) continue;
    if (auto id = vocab.id(t.lemma)) bow.push_back(*id);
  }
  return bow;
}

std::vector<std::size_t> TopicDistribution::reported_topics() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (probabilities[k] >= report_threshold) out.push_back(k);
  }
  return out;
}

// ---------------------------------------------------------------------------

TopicModel::TopicModel(Vocabulary vocab, std::size_t topics, std::size_t docs, double alpha,
                       double beta, std::uint64_t seed, std::size_t iterations)
    : vocab_(std::move(vocab)),
      topics_(topics),
      docs_(docs),
      alpha_(alpha),
      beta_(beta),
      seed_(seed),
      iterations_(iterations),
      topic_word_(topics * vocab_.size(), 0),
      topic_total_(topics, 0),
      doc_topic_(docs * topics, 0),
      doc_length_(docs, 0) {}

std::vector<double> TopicModel::topic_word_distribution(std::size_t k) const {
  const std::size_t v = vocab_size();
  std::vector<double> phi(v);
  const double denom = topic_total_[k] + beta_ * static_cast<double>(v);
  for (std::size_t w = 0; w < v; ++w) phi[w] = (topic_word(k, w) + beta_) / denom;
  return phi;
}

TopicDistribution TopicModel::doc_topic_distribution(std::size_t d) const {
  TopicDistribution out;
  out.probabilities.resize(topics_);
  const double denom = doc_length_[d] + alpha_ * static_cast<double>(topics_);
  for (std::size_t k = 0; k < topics_; ++k) out.probabilities[k] = (doc_topic(d, k) + alpha_) / denom;
  return out;
}

std::uint64_t TopicModel::total_topic_word() const {
  return std::accumulate(topic_word_.begin(), topic_word_.end(), std::uint64_t{0});
}

std::uint64_t TopicModel::total_doc_topic() const {
  return std::accumulate(doc_topic_.begin(), doc_topic_.end(), std::uint64_t{0});
}

class LdaSampler {
 public:
  LdaSampler(std::span<const DocBow> docs, const Vocabulary& vocab, const LdaConfig& config)
      : docs_(docs),
        model_(vocab, config.topics, docs.size(), config.alpha_value(), config.beta,
               config.seed, config.iterations),
        rng_(config.seed),
        weights_(config.topics) {
    const std::size_t k_count = config.topics;
    assignments_.resize(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
      assignments_[d].resize(docs[d].size());
      model_.doc_length_[d] = static_cast<std::uint32_t>(docs[d].size());
      for (std::size_t i = 0; i < docs[d].size(); ++i) {
        const auto k = static_cast<std::uint32_t>(rng_.below(k_count));
        assignments_[d][i] = k;
        add(d, docs[d][i], k, +1);
      }
    }
  }

  void sweep() {
    const std::size_t k_count = model_.topics_;
    const double alpha = model_.alpha_;
    const double beta = model_.beta_;
    const double vbeta = beta * static_cast<double>(model_.vocab_size());
    for (std::size_t d = 0; d < docs_.size(); ++d) {
      const DocBow& doc = docs_[d];
      for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::uint32_t w = doc[i];
        add(d, w, assignments_[d][i], -1);
        double total = 0.0;
        for (std::size_t k = 0; k < k_count; ++k) {
          total += (model_.doc_topic(d, k) + alpha) * (model_.topic_word(k, w) + beta) /
                   (model_.topic_total_[k] + vbeta);
          weights_[k] = total;
        }
        const double u = rng_.uniform() * total;
        std::size_t k = 0;
        while (k + 1 < k_count && weights_[k] <= u) ++k;
        assignments_[d][i] = static_cast<std::uint32_t>(k);
        add(d, w, static_cast<std::uint32_t>(k), +1);
      }
    }
  }

  const TopicModel& model() const { return model_; }
  TopicModel take() { return std::move(model_); }

 private:
  void add(std::size_t d, std::uint32_t w, std::uint32_t k, int delta) {
    const std::size_t v = model_.vocab_size();
    model_.topic_word_[k * v + w] += delta;
    model_.topic_total_[k] += delta;
    model_.doc_topic_[d * model_.topics_ + k] += delta;
  }

  std::span<const DocBow> docs_;
  TopicModel model_;
  Rng rng_;
  std::vector<double> weights_;
  std::vector<std::vector<std::uint32_t>> assignments_;
};

TopicModel fit_lda(std::span<const DocBow> docs, const Vocabulary& vocab, const LdaConfig& config,
                   const SweepObserver& observer) {
  if (config.topics == 0) throw Error(Errc::invalid_argument, "LDA needs at least one topic");
  if (!(config.beta > 0.0) || !(config.alpha_value() > 0.0)) {
    throw Error(Errc::invalid_argument, "LDA smoothing parameters must be positive");
  }
  if (vocab.empty()) throw Error(Errc::empty_vocabulary, "LDA over an empty vocabulary");
  if (config.topics > vocab.size()) {
    throw Error(Errc::invalid_argument, "topic count " + std::to_string(config.topics) +
                                            " exceeds vocabulary size " +
                                            std::to_string(vocab.size()));
  }
  std::size_t tokens = 0;
  for (const auto& d : docs) {
    for (auto w : d) {
      if (w >= vocab.size()) throw Error(Errc::invalid_argument, "word id outside the vocabulary");
    }
    tokens += d.size();
  }
  if (tokens == 0) throw Error(Errc::empty_input, "LDA over an empty corpus");

  LdaSampler sampler(docs, vocab, config);
  for (std::size_t it = 1; it <= config.iterations; ++it) {
    sampler.sweep();
    if (observer) observer(it, sampler.model());
  }
  return sampler.take();
}

std::vector<RankedWord> top_words(const TopicModel& model, std::size_t topic, std::size_t n) {
  if (topic >= model.num_topics()) throw Error(Errc::invalid_argument, "topic index out of range");
  const auto phi = model.topic_word_distribution(topic);
  std::vector<std::size_t> ids(model.vocab_size());
  std::iota(ids.begin(), ids.end(), 0);
  const auto& vocab = model.vocabulary();
  auto better = [&](std::size_t a, std::size_t b) {
    const auto ca = model.topic_word(topic, a);
    const auto cb = model.topic_word(topic, b);
    if (ca != cb) return ca > cb;
    return vocab.word(a) < vocab.word(b);
  };
  const std::size_t take = std::min(n, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(take), ids.end(), better);
  std::vector<RankedWord> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back({vocab.word(ids[i]), phi[ids[i]]});
  return out;
}

TopicDistribution infer_topics(const TopicModel& model, const DocBow& doc, std::size_t iterations,
                               std::uint64_t seed) {
  if (doc.empty()) throw Error(Errc::all_oov, "document has no word of the topic model's vocabulary");
  if (iterations == 0) throw Error(Errc::invalid_argument, "inference needs at least one sweep");
  const std::size_t k_count = model.num_topics();
  const double alpha = model.alpha();
  const double beta = model.beta();
  const double vbeta = beta * static_cast<double>(model.vocab_size());
  Rng rng(seed);
  std::vector<std::uint32_t> z(doc.size());
  std::vector<std::uint32_t> counts(k_count, 0);
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (doc[i] >= model.vocab_size()) throw Error(Errc::invalid_argument, "word id outside the vocabulary");
    z[i] = static_cast<std::uint32_t>(rng.below(k_count));
    ++counts[z[i]];
  }
  // phi is fixed during fold-in; keep the rows of the document's word types.
  std::map<std::uint32_t, std::size_t> local;
  for (std::uint32_t w : doc) local.emplace(w, local.size());
  std::vector<std::size_t> slot(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) slot[i] = local[doc[i]];
  std::vector<double> phi(local.size() * k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const double denom = model.topic_total(k) + vbeta;
    for (const auto& [w, s] : local) phi[s * k_count + k] = (model.topic_word(k, w) + beta) / denom;
  }
  std::vector<double> weights(k_count);
  std::vector<double> accum(k_count, 0.0);
  std::size_t samples = 0;
  const std::size_t burn_in = iterations / 2;
  const double denom = static_cast<double>(doc.size()) + alpha * static_cast<double>(k_count);
  for (std::size_t it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      --counts[z[i]];
      double total = 0.0;
      const double* row = &phi[slot[i] * k_count];
      for (std::size_t k = 0; k < k_count; ++k) {
        total += (counts[k] + alpha) * row[k];
        weights[k] = total;
      }
      const double u = rng.uniform() * total;
      std::size_t k = 0;
      while (k + 1 < k_count && weights[k] <= u) ++k;
      z[i] = static_cast<std::uint32_t>(k);
      ++counts[k];
    }
    if (it >= burn_in) {
      for (std::size_t k = 0; k < k_count; ++k) accum[k] += (counts[k] + alpha) / denom;
      ++samples;
    }
  }
  TopicDistribution out;
  out.probabilities.resize(k_count);
  double sum = 0.0;
  for (std::size_t k = 0; k < k_count; ++k) {
    out.probabilities[k] = accum[k] / static_cast<double>(samples);
    sum += out.probabilities[k];
  }
  for (double& p : out.probabilities) p /= sum;
  return out;
}

std::vector<double> coherence_umass_per_topic(const TopicModel& model,
                                              std::span<const DocBow> docs, std::size_t top_n) {
  std::vector<double> out;
  const auto& vocab = model.vocabulary();
  for (std::size_t k = 0; k < model.num_topics(); ++k) {
    const auto top = top_words(model, k, top_n);
    std::vector<std::uint32_t> ids;
    for (const auto& rw : top) ids.push_back(*vocab.id(rw.word));
    // docs containing each top word
    std::vector<std::vector<bool>> present(ids.size(), std::vector<bool>(docs.size(), false));
    for (std::size_t d = 0; d < docs.size(); ++d) {
      for (std::uint32_t w : docs[d]) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
          if (ids[i] == w) present[i][d] = true;
        }
      }
    }
    double score = 0.0;
    for (std::size_t i = 1; i < ids.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        std::size_t dj = 0;
        std::size_t dij = 0;
        for (std::size_t d = 0; d < docs.size(); ++d) {
          dj += present[j][d] ? 1 : 0;
          dij += (present[i][d] && present[j][d]) ? 1 : 0;
        }
        if (dj == 0) continue;
        score += std::log((static_cast<double>(dij) + 1.0) / static_cast<double>(dj));
      }
    }
    out.push_back(score);
  }
  return out;
}

double coherence_umass(const TopicModel& model, std::span<const DocBow> docs, std::size_t top_n) {
  const auto per_topic = coherence_umass_per_topic(model, docs, top_n);
  return std::accumulate(per_topic.begin(), per_topic.end(), 0.0) /
         static_cast<double>(per_topic.size());
}

// ---------------------------------------------------------------------------

std::string topic_model_to_json(const TopicModel& model) {
  using nlohmann::json;
  const auto& vocab = model.vocabulary();
  json j;
  j["format"] = "litstyle-lda";
  j["version"] = 1;
  j["topics"] = model.num_topics();
  j["alpha"] = model.alpha();
  j["beta"] = model.beta();
  j["seed"] = model.seed();
  j["iterations"] = model.iterations();
  json pos = json::array();
  for (Pos p : vocab.options().pos_set) pos.push_back(std::string(to_string(p)));
  j["vocabulary"] = {{"min_freq", vocab.options().min_freq},
                     {"pos", pos},
                     {"exclude_propn", vocab.options().exclude_propn},
                     {"words", vocab.words()}};
  std::vector<std::size_t> freq, df;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    freq.push_back(vocab.frequency(i));
    df.push_back(vocab.doc_frequency(i));
  }
  j["vocabulary"]["frequencies"] = freq;
  j["vocabulary"]["doc_frequencies"] = df;
  json tw = json::array();
  for (std::size_t k = 0; k < model.num_topics(); ++k) {
    std::vector<std::uint32_t> row(model.vocab_size());
    for (std::size_t w = 0; w < row.size(); ++w) row[w] = model.topic_word(k, w);
    tw.push_back(row);
  }
  j["topic_word"] = tw;
  json dt = json::array();
  for (std::size_t d = 0; d < model.num_docs(); ++d) {
    std::vector<std::uint32_t> row(model.num_topics());
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = model.doc_topic(d, k);
    dt.push_back(row);
  }
  j["doc_topic"] = dt;
  return j.dump(1) + "\n";
}

TopicModel topic_model_from_json(std::string_view text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::parse, std::string("topic model JSON: ") + e.what());
  }
  try {
    if (j.at("format") != "litstyle-lda" || j.at("version") != 1) {
      throw Error(Errc::parse, "unsupported topic model format or version");
    }
    const auto& jv = j.at("vocabulary");
    VocabOptions options;
    options.min_freq = jv.at("min_freq").get<std::size_t>();
    options.exclude_propn = jv.at("exclude_propn").get<bool>();
    options.pos_set.clear();
    for (const auto& p : jv.at("pos")) options.pos_set.push_back(parse_pos(p.get<std::string>()));
    Vocabulary vocab(jv.at("words").get<std::vector<std::string>>(),
                     jv.at("frequencies").get<std::vector<std::size_t>>(),
                     jv.at("doc_frequencies").get<std::vector<std::size_t>>(), options);
    const auto tw = j.at("topic_word").get<std::vector<std::vector<std::uint32_t>>>();
    const auto dt = j.at("doc_topic").get<std::vector<std::vector<std::uint32_t>>>();
    const std::size_t k_count = j.at("topics").get<std::size_t>();
    TopicModel model(std::move(vocab), k_count, dt.size(), j.at("alpha").get<double>(),
                     j.at("beta").get<double>(), j.at("seed").get<std::uint64_t>(),
                     j.at("iterations").get<std::size_t>());
    if (tw.size() != k_count) throw Error(Errc::parse, "topic_word has the wrong number of rows");
    const std::size_t v = model.vocab_size();
    for (std::size_t k = 0; k < k_count; ++k) {
      if (tw[k].size() != v) throw Error(Errc::parse, "topic_word row has the wrong length");
      for (std::size_t w = 0; w < v; ++w) {
        model.topic_word_[k * v + w] = tw[k][w];
        model.topic_total_[k] += tw[k][w];
      }
    }
    for (std::size_t d = 0; d < dt.size(); ++d) {
      if (dt[d].size() != k_count) throw Error(Errc::parse, "doc_topic row has the wrong length");
      for (std::size_t k = 0; k < k_count; ++k) {
        model.doc_topic_[d * k_count + k] = dt[d][k];
        model.doc_length_[d] += dt[d][k];
      }
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(Errc::parse, std::string("topic model JSON: ") + e.what());
  }
}

}  // namespace litstyle
