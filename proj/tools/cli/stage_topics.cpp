#include <algorithm>
#include <map>
#include <ostream>

#include "litstyle/error.hpp"
#include "litstyle/parallel.hpp"
#include "litstyle/random.hpp"
#include "litstyle/topics.hpp"
#include "stages.hpp"

namespace litstyle::cli::detail {

namespace {

struct Scope {
  std::string name;
  std::vector<std::size_t> docs;  // indices into the loaded corpus
};

struct ScopeResult {
  bool fitted = false;
  std::string skipped_reason;
  TopicModel model;
  std::vector<DocBow> bows;
  std::vector<double> coherence;
  // Per scope document: inferred distributions of the whole text and of each
  // chapter (empty when the chapter has no model word).
  std::vector<std::vector<double>> book;
  std::vector<std::vector<std::vector<double>>> chapters;
};

}  // namespace

void run_topics(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const fs::path dir = stage_dir(ctx, Stage::topics);
  const LoadedCorpus corpus = load_corpus(ctx.out);

  VocabOptions vocab_options;
  vocab_options.min_freq = c.get_size("min_freq");
  vocab_options.pos_set.clear();
  for (const auto& tag : c.get_list("topic_pos")) {
    const Pos p = parse_pos(tag);
    if (p == Pos::other) throw Error(Errc::config, "topic_pos: unknown tag '" + tag + "'");
    vocab_options.pos_set.push_back(p);
  }
  LdaConfig lda;
  lda.topics = c.get_size("topics");
  lda.iterations = c.get_size("iterations");
  lda.alpha = c.get_optional_double("lda_alpha");
  lda.beta = c.get_double("lda_beta");
  lda.seed = c.seed();
  const std::size_t inference_iterations = c.get_size("inference_iterations");
  const std::size_t top_n = c.get_size("top_words");
  const std::size_t coherence_n = c.get_size("coherence_top_n");

  std::vector<Scope> scopes;
  const std::string scope_mode = c.get("topic_scope");
  if (scope_mode == "global") {
    Scope all{"all", {}};
    for (std::size_t i = 0; i < corpus.docs.size(); ++i) all.docs.push_back(i);
    scopes.push_back(std::move(all));
  } else if (scope_mode == "category") {
    for (Category cat : kAllCategories) {
      Scope s{std::string(to_string(cat)), {}};
      for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
        if (corpus.docs[i].category == cat) s.docs.push_back(i);
      }
      if (!s.docs.empty()) scopes.push_back(std::move(s));
    }
  } else {
    throw Error(Errc::config, "topic_scope must be 'global' or 'category', got '" + scope_mode + "'");
  }

  std::vector<ScopeResult> results(scopes.size());
  parallel_for(scopes.size(), ctx.jobs, [&](std::size_t s) {
    const Scope& scope = scopes[s];
    ScopeResult& r = results[s];
    std::vector<std::span<const Token>> streams;
    for (auto d : scope.docs) streams.emplace_back(corpus.tokenized[d].stream.tokens);
    Vocabulary vocab;
    try {
      vocab = build_vocab(std::span<const std::span<const Token>>(streams), vocab_options);
    } catch (const Error& e) {
      if (e.code() != Errc::empty_vocabulary) throw;
      r.skipped_reason = "empty vocabulary";
      return;
    }
    if (vocab.size() < lda.topics) {
      r.skipped_reason = "vocabulary of " + std::to_string(vocab.size()) + " words is smaller than " +
                         std::to_string(lda.topics) + " topics";
      return;
    }
    for (const auto& st : streams) r.bows.push_back(to_bow(st, vocab));
    r.model = fit_lda(r.bows, vocab, lda);
    r.coherence = coherence_umass_per_topic(r.model, r.bows, coherence_n);
    r.fitted = true;
    for (std::size_t j = 0; j < scope.docs.size(); ++j) {
      const std::size_t d = scope.docs[j];
      const TokenizedDocument& td = corpus.tokenized[d];
      const std::uint64_t doc_seed = Rng::derive(lda.seed, d).next();
      auto infer = [&](std::span<const Token> tokens, std::uint64_t part) -> std::vector<double> {
        const DocBow bow = to_bow(tokens, r.model.vocabulary());
        if (bow.empty()) return {};
        return infer_topics(r.model, bow, inference_iterations, Rng::derive(doc_seed, part).next())
            .probabilities;
      };
      r.book.push_back(infer(td.stream.tokens, 0));
      std::vector<std::vector<double>> chs;
      for (std::size_t k = 0; k < td.chapters.size(); ++k) chs.push_back(infer(td.chapter_tokens(k), k + 1));
      r.chapters.push_back(std::move(chs));
    }
  });

  write_file(dir / "scopes.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row({"scope", "docs", "vocabulary", "tokens", "topics", "alpha", "beta", "coherence", "status"});
    for (std::size_t s = 0; s < scopes.size(); ++s) {
      const ScopeResult& r = results[s];
      csv.field(scopes[s].name).field(scopes[s].docs.size());
      if (r.fitted) {
        std::size_t tokens = 0;
        for (const auto& b : r.bows) tokens += b.size();
        double coherence = 0.0;
        for (double v : r.coherence) coherence += v;
        coherence /= static_cast<double>(r.coherence.size());
        csv.field(r.model.vocab_size()).field(tokens).field(r.model.num_topics()).field(r.model.alpha())
            .field(r.model.beta()).field(coherence).field("fitted");
      } else {
        csv.field("").field("").field("").field("").field("").field("").field("skipped: " + r.skipped_reason);
      }
      csv.end_row();
    }
  });
  write_file(dir / "coherence.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row({"scope", "topic", "umass"});
    for (std::size_t s = 0; s < scopes.size(); ++s) {
      for (std::size_t k = 0; k < results[s].coherence.size(); ++k) {
        csv.field(scopes[s].name).field(k).field(results[s].coherence[k]);
        csv.end_row();
      }
    }
  });
  write_file(dir / "doc_topics.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row({"doc_id", "scope", "topic", "probability", "reported"});
    for (std::size_t s = 0; s < scopes.size(); ++s) {
      if (!results[s].fitted) continue;
      for (std::size_t j = 0; j < scopes[s].docs.size(); ++j) {
        const TopicDistribution dist = results[s].model.doc_topic_distribution(j);
        const auto reported = dist.reported_topics();
        for (std::size_t k = 0; k < dist.probabilities.size(); ++k) {
          const bool shown = std::find(reported.begin(), reported.end(), k) != reported.end();
          csv.field(corpus.docs[scopes[s].docs[j]].id).field(scopes[s].name).field(k)
              .field(dist.probabilities[k]).field(shown ? "1" : "0");
          csv.end_row();
        }
      }
    }
  });
  write_file(dir / "inferred_topics.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    std::vector<std::string> header{"doc_id", "scope", "part"};
    for (std::size_t k = 0; k < lda.topics; ++k) header.push_back("t" + std::to_string(k));
    csv.row(header);
    for (std::size_t s = 0; s < scopes.size(); ++s) {
      const ScopeResult& r = results[s];
      if (!r.fitted) continue;
      for (std::size_t j = 0; j < scopes[s].docs.size(); ++j) {
        auto emit = [&](const std::string& part, const std::vector<double>& p) {
          if (p.empty()) return;
          csv.field(corpus.docs[scopes[s].docs[j]].id).field(scopes[s].name).field(part);
          for (double v : p) csv.field(v);
          csv.end_row();
        };
        emit("book", r.book[j]);
        for (std::size_t k = 0; k < r.chapters[j].size(); ++k) emit(std::to_string(k + 1), r.chapters[j][k]);
      }
    }
  });
  for (std::size_t s = 0; s < scopes.size(); ++s) {
    const ScopeResult& r = results[s];
    if (!r.fitted) {
      note(ctx, "[topics] scope " + scopes[s].name + " skipped: " + r.skipped_reason);
      continue;
    }
    write_file(dir / "models" / (scopes[s].name + ".json"),
               [&](std::ostream& o) { o << topic_model_to_json(r.model); });
    write_file(dir / ("top_words_" + scopes[s].name + ".csv"), [&](std::ostream& o) {
      CsvWriter csv(o);
      csv.row({"topic", "rank", "word", "probability"});
      for (std::size_t k = 0; k < r.model.num_topics(); ++k) {
        const auto words = top_words(r.model, k, top_n);
        for (std::size_t i = 0; i < words.size(); ++i) {
          csv.field(k).field(i + 1).field(words[i].word).field(words[i].probability);
          csv.end_row();
        }
      }
    });
  }
}

}  // namespace litstyle::cli::detail
