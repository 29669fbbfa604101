#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace litstyle {

enum class Category { children, essays, novels, plays, poems, stories };

inline constexpr std::array<Category, 6> kAllCategories = {
    Category::children, Category::essays, Category::novels,
    Category::plays,    Category::poems,  Category::stories};

std::string_view to_string(Category category);
Category parse_category(std::string_view name);

enum class Pos { noun, verb, adj, adv, propn, other };

std::string_view to_string(Pos pos);
// Accepts UD names (NOUN, VERB, ADJ, ADV, PROPN) and Penn Treebank tags
// (NN*, VB*, JJ*, RB*, NNP*); anything else maps to Pos::other.
Pos parse_pos(std::string_view tag);

bool is_content(Pos pos);

// ---------------------------------------------------------------------------
// Manifest and ingestion

struct ManifestRow {
  std::string file_path;
  std::string author;
  std::string title;
  Category category = Category::novels;
};

using Manifest = std::vector<ManifestRow>;

// CSV with header `file,author,title,category`.
Manifest read_manifest(std::istream& in);
Manifest read_manifest_file(const std::filesystem::path& path);

struct Document {
  std::string id;
  std::string author;
  std::string title;
  Category category = Category::novels;
  std::string raw_text;
  std::string file_path;
  // `.tsv` inputs carry `surface<TAB>lemma<TAB>pos` rows instead of prose.
  bool pretagged = false;
};

struct RowError {
  std::size_t row = 0;  // 1-based manifest data row
  std::string file_path;
  std::string message;
};

struct Corpus {
  std::vector<Document> documents;
  std::vector<RowError> errors;
};

// Keeps documents whose (author, category) pair has at least
// `min_per_author_category` readable texts, ordered by (category, author,
// title). Unreadable rows are reported in Corpus::errors; throws
// Errc::empty_corpus if nothing survives.
Corpus ingest_corpus(const std::filesystem::path& dir, const Manifest& manifest,
                     int min_per_author_category);

// ---------------------------------------------------------------------------
// Tokenization

struct Token {
  std::string surface;
  std::string lemma;
  Pos pos = Pos::other;
  std::size_t sentence_index = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

struct TokenStream {
  std::string doc_id;
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

struct LexiconEntry {
  std::string lemma;
  Pos pos = Pos::other;
};

class Lexicon {
 public:
  static Lexicon parse(std::istream& in);
  static Lexicon load(const std::filesystem::path& path);
  static Lexicon builtin();

  const LexiconEntry* find(std::string_view lowercase_word) const;
  bool has_lemma(std::string_view lemma) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, LexiconEntry> entries_;
  std::unordered_set<std::string> lemmas_;
};

using WordSet = std::unordered_set<std::string>;

// One word per line, `#` starts a comment, words are lowercased.
WordSet parse_word_list(std::istream& in);
WordSet load_word_list(const std::filesystem::path& path);

struct TaggerConfig {
  std::shared_ptr<const Lexicon> lexicon;
  std::shared_ptr<const WordSet> stopwords;
  bool drop_propn = false;

  // Bundled lexicon and stopword list.
  static TaggerConfig builtin();
};

// Heuristic path: sentence split, lexicon lookup, suffix rules, stopword and
// POS filtering. `first_sentence` offsets the sentence indices.
TokenStream tokenize_text(std::string doc_id, std::string_view text,
                          const TaggerConfig& config,
                          std::size_t first_sentence = 0);

// Pre-tagged path: `surface<TAB>lemma<TAB>pos` per line, blank line between
// sentences, `#` lines are comments.
TokenStream tokenize_tsv(std::string doc_id, std::string_view tsv,
                         const TaggerConfig& config,
                         std::size_t first_sentence = 0);

TokenStream tokenize(const Document& doc, const TaggerConfig& config);

// ---------------------------------------------------------------------------
// Segments, chunks, chapters

// A contiguous run of a TokenStream. Views into the stream, which must outlive
// the piece.
struct Piece {
  std::size_t index = 0;
  std::span<const Token> tokens;
};

using Segment = Piece;
using Chunk = Piece;

// n pieces whose sizes differ by at most one; the remainder goes to the front.
// Throws Errc::short_text when the stream has fewer than n tokens.
std::vector<Segment> segment_equal(const TokenStream& stream, std::size_t n);

// Pieces of `chunk_size` tokens; a trailing piece of at most chunk_size / 2
// tokens is merged into its predecessor.
std::vector<Chunk> chunk_fixed(const TokenStream& stream, std::size_t chunk_size);

struct ChapterPatterns {
  std::vector<std::regex> headings;
  std::size_t max_heading_length = 80;

  // Lines like "CHAPTER IV", "Chapter 12. The Ball", case-insensitive.
  static ChapterPatterns defaults();
  static ChapterPatterns from_strings(const std::vector<std::string>& patterns);
};

struct ChapterSpan {
  std::size_t index = 0;
  std::string heading;
  std::size_t body_begin = 0;  // byte offsets into Document::raw_text
  std::size_t body_end = 0;
};

struct ChapterSplit {
  // Fewer than two headings found; `chapters` is then empty.
  bool chapterless = true;
  std::vector<ChapterSpan> chapters;
  std::size_t prologue_end = 0;
};

// For pre-tagged documents headings are read from `#` comment lines.
ChapterSplit split_chapters(const Document& doc,
                            const ChapterPatterns& patterns = ChapterPatterns::defaults());

// Tokens of a whole document plus the token range of every chapter. The
// stream is the concatenation of prologue and chapter bodies; heading lines
// contribute no tokens.
struct TokenizedDocument {
  TokenStream stream;
  bool chapterless = true;
  struct Chapter {
    std::size_t index = 0;
    std::string heading;
    std::size_t begin = 0;  // token offsets into stream
    std::size_t end = 0;
  };
  std::vector<Chapter> chapters;

  std::span<const Token> chapter_tokens(std::size_t i) const;
};

TokenizedDocument tokenize_document(
    const Document& doc, const TaggerConfig& config,
    const ChapterPatterns& patterns = ChapterPatterns::defaults());

// ---------------------------------------------------------------------------
// Lexical diversity

// |unique lemmas| / |tokens|; throws Errc::empty_input on an empty stream.
double ttr(std::span<const Token> tokens);
// |ADJ| / |VERB|; throws Errc::undefined_ratio without verbs.
double avq(std::span<const Token> tokens);

}  // namespace litstyle
