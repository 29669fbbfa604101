#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>

#include "litstyle/error.hpp"
#include "litstyle/parallel.hpp"
#include "litstyle/sentiment.hpp"
#include "litstyle/topics.hpp"
#include "stages.hpp"

namespace litstyle::cli::detail {

void run_sentiment(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const fs::path dir = stage_dir(ctx, Stage::sentiment);
  const LoadedCorpus corpus = load_corpus(ctx.out);
  const EmbeddingTable table = load_table(c);
  const SentimentScorer scorer = make_scorer(c, table);
  for (const auto& dropped : scorer.dropped_labels()) {
    note(ctx, "[sentiment] label without a vector, dropped: " + dropped);
  }

  std::vector<std::optional<SentimentProfile>> profiles(corpus.docs.size());
  std::vector<std::string> reasons(corpus.docs.size());
  parallel_for(corpus.docs.size(), ctx.jobs, [&](std::size_t i) {
    try {
      profiles[i] = text_sentiment(corpus.tokenized[i].stream, scorer);
    } catch (const Error& e) {
      if (e.code() != Errc::empty_input && e.code() != Errc::all_oov) throw;
      reasons[i] = std::string(to_string(e.code()));
    }
  });

  std::vector<SentimentProfile> doc_profiles;
  std::vector<GroupedProfile> grouped;
  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    if (!profiles[i]) continue;
    doc_profiles.push_back(*profiles[i]);
    grouped.push_back({*profiles[i], corpus.docs[i].author, corpus.docs[i].category});
  }
  write_file(dir / "documents.csv", [&](std::ostream& o) { write_profiles_csv(o, doc_profiles); });
  write_file(dir / "authors.csv",
             [&](std::ostream& o) { write_profiles_csv(o, aggregate_profiles(grouped, GroupKey::author)); });
  write_file(dir / "categories.csv",
             [&](std::ostream& o) { write_profiles_csv(o, aggregate_profiles(grouped, GroupKey::category)); });
  // Authors within each category (the per-category author scatter).
  write_file(dir / "author_categories.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row({"category", "author", "aap", "happiness", "fear", "n"});
    for (Category cat : kAllCategories) {
      std::vector<GroupedProfile> members;
      for (const auto& g : grouped) {
        if (g.category == cat) members.push_back(g);
      }
      if (members.empty()) continue;
      for (const auto& p : aggregate_profiles(members, GroupKey::author)) {
        auto emotion = [&](const char* name) -> std::optional<double> {
          const auto it = p.emotions.find(name);
          if (it == p.emotions.end()) return std::nullopt;
          return it->second;
        };
        csv.field(to_string(cat)).field(p.subject).field(p.aap_mean).field(emotion("happiness"))
            .field(emotion("fear")).field(p.n_items);
        csv.end_row();
      }
    }
  });
  write_file(dir / "skipped.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row({"doc_id", "reason"});
    for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
      if (profiles[i]) continue;
      csv.field(corpus.docs[i].id).field(reasons[i]);
      csv.end_row();
    }
  });

  // Topic happiness for every fitted model.
  const std::size_t top_n = c.get_size("happiness_top_n");
  const CsvTable scopes = read_table(stage_dir(ctx, Stage::topics) / "scopes.csv");
  write_file(dir / "topics.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row({"scope", "topic", "happiness", "top_words"});
    const auto c_scope = scopes.column("scope");
    const auto c_status = scopes.column("status");
    for (const auto& row : scopes.rows) {
      if (row[c_status] != "fitted") continue;
      std::ifstream in(stage_dir(ctx, Stage::topics) / "models" / (row[c_scope] + ".json"), std::ios::binary);
      const std::string json((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      const TopicModel model = topic_model_from_json(json);
      for (std::size_t k = 0; k < model.num_topics(); ++k) {
        std::optional<double> happiness;
        try {
          happiness = topic_happiness(model, k, scorer, top_n);
        } catch (const Error& e) {
          if (e.code() != Errc::all_oov) throw;
        }
        std::string words;
        for (const auto& w : top_words(model, k, 10)) words += (words.empty() ? "" : " ") + w.word;
        csv.field(row[c_scope]).field(k).field(happiness).field(words);
        csv.end_row();
      }
    }
  });
  note(ctx, "[sentiment] " + std::to_string(doc_profiles.size()) + " documents scored");
}

}  // namespace litstyle::cli::detail
