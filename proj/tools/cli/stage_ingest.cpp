#include <ostream>

#include "litstyle/error.hpp"
#include "litstyle/parallel.hpp"
#include "stages.hpp"

namespace litstyle::cli::detail {

void run_ingest(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const fs::path dir = stage_dir(ctx, Stage::ingest);
  const long long min_count = c.get_int("min_per_author_category");
  if (min_count < 0) throw Error(Errc::config, "min_per_author_category must not be negative");

  const Manifest manifest = read_manifest_file(c.get_path("manifest"));
  Corpus corpus;
  try {
    corpus = ingest_corpus(c.get_path("corpus_dir"), manifest, static_cast<int>(min_count));
  } catch (const Error& e) {
    if (e.code() != Errc::empty_corpus) throw;
    throw Error(Errc::empty_corpus, std::string(e.what()) + " (see min_per_author_category)");
  }
  const TaggerConfig tagger = tagger_from(c);
  ChapterPatterns patterns = ChapterPatterns::defaults();
  if (c.has_value("chapter_pattern")) patterns = ChapterPatterns::from_strings({c.get("chapter_pattern")});

  std::vector<TokenizedDocument> docs(corpus.documents.size());
  parallel_for(docs.size(), ctx.jobs, [&](std::size_t i) {
    docs[i] = tokenize_document(corpus.documents[i], tagger, patterns);
  });

  write_file(dir / "documents.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row({"doc_id", "author", "title", "category", "file", "tokens", "sentences", "chapters"});
    for (std::size_t i = 0; i < docs.size(); ++i) {
      const Document& d = corpus.documents[i];
      const auto& tokens = docs[i].stream.tokens;
      const std::size_t sentences =
          tokens.empty() ? 0 : tokens.back().sentence_index - tokens.front().sentence_index + 1;
      csv.field(d.id).field(d.author).field(d.title).field(to_string(d.category)).field(d.file_path)
          .field(tokens.size()).field(sentences).field(docs[i].chapters.size());
      csv.end_row();
    }
  });
  write_file(dir / "tokens.tsv", [&](std::ostream& o) {
    o << "doc_id\tsentence\tsurface\tlemma\tpos\n";
    for (const auto& d : docs) {
      for (const auto& t : d.stream.tokens) {
        o << d.stream.doc_id << '\t' << t.sentence_index << '\t' << t.surface << '\t' << t.lemma
          << '\t' << to_string(t.pos) << '\n';
      }
    }
  });
  write_file(dir / "chapters.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row({"doc_id", "chapter", "heading", "begin", "end"});
    for (const auto& d : docs) {
      for (const auto& ch : d.chapters) {
        csv.field(d.stream.doc_id).field(ch.index).field(ch.heading).field(ch.begin).field(ch.end);
        csv.end_row();
      }
    }
  });
  write_file(dir / "errors.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row({"row", "file", "message"});
    for (const auto& e : corpus.errors) {
      csv.field(e.row).field(e.file_path).field(e.message);
      csv.end_row();
    }
  });
  note(ctx, "[ingest] " + std::to_string(docs.size()) + " documents, " +
                std::to_string(corpus.errors.size()) + " manifest rows rejected");
}

}  // namespace litstyle::cli::detail
