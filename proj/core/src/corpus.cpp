#include "litstyle/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <tuple>

#include "litstyle/assets.hpp"
#include "litstyle/csv.hpp"
#include "litstyle/error.hpp"

namespace litstyle {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra;
    if (c < 0x80) {
      extra = 0;
    } else if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
      extra = 1;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
    } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
      extra = 3;
    } else {
      return false;
    }
    if (i + extra >= s.size() && extra > 0) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
    }
    i += extra + 1;
  }
  return true;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string_view to_string(Category category) {
  switch (category) {
    case Category::children: return "children";
    case Category::essays: return "essays";
    case Category::novels: return "novels";
    case Category::plays: return "plays";
    case Category::poems: return "poems";
    case Category::stories: return "stories";
  }
  return "unknown";
}

Category parse_category(std::string_view name) {
  const std::string lower = lowercase(trim(name));
  for (Category c : kAllCategories) {
    if (to_string(c) == lower) return c;
  }
  throw Error(Errc::parse, "unknown category '" + std::string(name) + "'");
}

std::string_view to_string(Pos pos) {
  switch (pos) {
    case Pos::noun: return "NOUN";
    case Pos::verb: return "VERB";
    case Pos::adj: return "ADJ";
    case Pos::adv: return "ADV";
    case Pos::propn: return "PROPN";
    case Pos::other: return "OTHER";
  }
  return "OTHER";
}

Pos parse_pos(std::string_view tag) {
  const std::string t(trim(tag));
  if (t == "NOUN") return Pos::noun;
  if (t == "VERB") return Pos::verb;
  if (t == "ADJ") return Pos::adj;
  if (t == "ADV") return Pos::adv;
  if (t == "PROPN") return Pos::propn;
  if (t.starts_with("NNP")) return Pos::propn;
  if (t.starts_with("NN")) return Pos::noun;
  if (t.starts_with("VB")) return Pos::verb;
  if (t.starts_with("JJ")) return Pos::adj;
  if (t.starts_with("RB")) return Pos::adv;
  return Pos::other;
}

bool is_content(Pos pos) { return pos != Pos::other; }

// ---------------------------------------------------------------------------

Manifest read_manifest(std::istream& in) {
  const CsvTable table = read_csv(in);
  const std::size_t file = table.column("file");
  const std::size_t author = table.column("author");
  const std::size_t title = table.column("title");
  const std::size_t category = table.column("category");
  Manifest manifest;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    ManifestRow entry;
    entry.file_path = std::string(trim(row[file]));
    entry.author = std::string(trim(row[author]));
    entry.title = std::string(trim(row[title]));
    try {
      entry.category = parse_category(row[category]);
    } catch (const Error& e) {
      throw Error(Errc::parse, "manifest row " + std::to_string(i + 1) + ": " +
                                   e.what());
    }
    if (entry.file_path.empty()) {
      throw Error(Errc::parse,
                  "manifest row " + std::to_string(i + 1) + ": empty file");
    }
    manifest.push_back(std::move(entry));
  }
  return manifest;
}

Manifest read_manifest_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open manifest " + path.string());
  return read_manifest(in);
}

Corpus ingest_corpus(const std::filesystem::path& dir, const Manifest& manifest,
                     int min_per_author_category) {
  if (min_per_author_category < 0) {
    throw Error(Errc::invalid_argument, "min_per_author_category must be >= 0");
  }
  Corpus corpus;
  std::vector<Document> loaded;
  std::map<std::string, std::size_t> ids;
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    const ManifestRow& row = manifest[i];
    const std::filesystem::path rel(row.file_path);
    const std::filesystem::path path = rel.is_absolute() ? rel : dir / rel;
    auto fail = [&](const std::string& message) {
      corpus.errors.push_back({i + 1, row.file_path, message});
    };
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
      fail("file not found");
      continue;
    }
    std::string text;
    try {
      text = read_file(path);
    } catch (const Error& e) {
      fail(e.what());
      continue;
    }
    if (trim(text).empty()) {
      fail("file is empty");
      continue;
    }
    if (!valid_utf8(text)) {
      fail("file is not valid UTF-8");
      continue;
    }
    std::string id = rel.lexically_normal().replace_extension().generic_string();
    if (ids.contains(id)) {
      if (manifest[ids[id]].file_path == row.file_path) {
        fail("duplicate manifest entry");
        continue;
      }
      id = rel.lexically_normal().generic_string();
    }
    ids[id] = i;
    Document doc;
    doc.id = std::move(id);
    doc.author = row.author;
    doc.title = row.title;
    doc.category = row.category;
    doc.raw_text = std::move(text);
    doc.file_path = row.file_path;
    doc.pretagged = lowercase(rel.extension().string()) == ".tsv";
    loaded.push_back(std::move(doc));
  }

  std::map<std::pair<std::string, Category>, int> counts;
  for (const auto& doc : loaded) ++counts[{doc.author, doc.category}];
  for (auto& doc : loaded) {
    if (counts[{doc.author, doc.category}] >= min_per_author_category) {
      corpus.documents.push_back(std::move(doc));
    }
  }
  std::stable_sort(corpus.documents.begin(), corpus.documents.end(),
                   [](const Document& a, const Document& b) {
                     return std::tie(a.category, a.author, a.title) <
                            std::tie(b.category, b.author, b.title);
                   });
  if (corpus.documents.empty()) {
    throw Error(Errc::empty_corpus,
                "no documents survive ingestion (" +
                    std::to_string(corpus.errors.size()) + " row errors)");
  }
  return corpus;
}

// ---------------------------------------------------------------------------

Lexicon Lexicon::parse(std::istream& in) {
  Lexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    std::vector<std::string_view> fields;
    std::string_view rest = content;
    while (true) {
      const auto tab = rest.find('\t');
      fields.push_back(trim(rest.substr(0, tab)));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() < 3 || fields[0].empty() || fields[1].empty()) {
      throw Error(Errc::parse,
                  "lexicon line " + std::to_string(line_no) +
                      ": expected word<TAB>lemma<TAB>pos");
    }
    LexiconEntry entry{lowercase(fields[1]), parse_pos(fields[2])};
    lex.lemmas_.insert(entry.lemma);
    lex.entries_.try_emplace(lowercase(fields[0]), std::move(entry));
  }
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open lexicon " + path.string());
  return parse(in);
}

Lexicon Lexicon::builtin() {
  std::istringstream in{std::string(assets::lexicon())};
  return parse(in);
}

const LexiconEntry* Lexicon::find(std::string_view lowercase_word) const {
  const auto it = entries_.find(std::string(lowercase_word));
  return it == entries_.end() ? nullptr : &it->second;
}

bool Lexicon::has_lemma(std::string_view lemma) const {
  return lemmas_.contains(std::string(lemma));
}

WordSet parse_word_list(std::istream& in) {
  WordSet words;
  std::string line;
  while (std::getline(in, line)) {
    auto content = line.substr(0, line.find('#'));
    const auto word = trim(content);
    if (!word.empty()) words.insert(lowercase(word));
  }
  return words;
}

WordSet load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open word list " + path.string());
  return parse_word_list(in);
}

TaggerConfig TaggerConfig::builtin() {
  TaggerConfig config;
  config.lexicon = std::make_shared<const Lexicon>(Lexicon::builtin());
  std::istringstream in{std::string(assets::stopwords())};
  config.stopwords = std::make_shared<const WordSet>(parse_word_list(in));
  return config;
}

// ---------------------------------------------------------------------------

namespace {

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool ends_with_doubled_consonant(std::string_view s) {
  if (s.size() < 3) return false;
  const char a = s[s.size() - 1];
  const char b = s[s.size() - 2];
  return a == b && !is_vowel(a) && a != 'l' && a != 's' && a != 'z' && a != 'f';
}

// Lemma for a verb form whose inflectional suffix has been removed.
std::string verb_stem(std::string stem, const Lexicon& lexicon) {
  if (lexicon.has_lemma(stem)) return stem;
  if (ends_with_doubled_consonant(stem)) {
    std::string undoubled = stem.substr(0, stem.size() - 1);
    if (lexicon.has_lemma(undoubled)) return undoubled;
    return undoubled;
  }
  if (lexicon.has_lemma(stem + "e")) return stem + "e";
  return stem;
}

LexiconEntry guess(const std::string& w, const Lexicon& lexicon) {
  auto ends = [&](std::string_view suffix) { return w.ends_with(suffix); };
  auto drop = [&](std::size_t n) { return w.substr(0, w.size() - n); };
  const std::size_t n = w.size();
  if (n >= 5 && ends("ly")) return {w, Pos::adv};
  if (n >= 5 && ends("ing")) return {verb_stem(drop(3), lexicon), Pos::verb};
  if (n >= 5 && ends("ied")) return {drop(3) + "y", Pos::verb};
  if (n >= 4 && ends("ed")) return {verb_stem(drop(2), lexicon), Pos::verb};
  if (n >= 6) {
    for (std::string_view suffix :
         {"ous", "ful", "less", "able", "ible", "ive", "ical", "ish"}) {
      if (ends(suffix)) return {w, Pos::adj};
    }
  }
  if (n >= 5 && ends("ies")) return {drop(3) + "y", Pos::noun};
  if (n >= 5 && (ends("ches") || ends("shes") || ends("xes") || ends("sses")))
    return {drop(2), Pos::noun};
  if (n >= 4 && ends("s") && !ends("ss") && !ends("us") && !ends("is"))
    return {drop(1), Pos::noun};
  return {w, Pos::noun};
}

bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }

// Bytes that can be part of a word: ASCII letters and non-punctuation UTF-8.
// Returns the length of the code unit sequence at `i` if it is a letter, 0
// otherwise; `apostrophe` is set for ' and U+2019.
std::size_t letter_at(std::string_view text, std::size_t i, bool& apostrophe) {
  apostrophe = false;
  const auto c = static_cast<unsigned char>(text[i]);
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return 1;
  if (c == '\'') {
    apostrophe = true;
    return 1;
  }
  if (c < 0x80) return 0;
  std::size_t len = c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : c >= 0xC0 ? 2 : 1;
  len = std::min(len, text.size() - i);
  if (c == 0xE2 && len == 3) {
    const auto c1 = static_cast<unsigned char>(text[i + 1]);
    const auto c2 = static_cast<unsigned char>(text[i + 2]);
    if (c1 == 0x80 && c2 == 0x99) {
      apostrophe = true;
      return len;
    }
    if (c1 == 0x80 || c1 == 0x81) return 0;  // general punctuation block
  }
  if (c == 0xC2) return 0;  // Latin-1 punctuation and NBSP
  return len;
}

struct TextCursor {
  std::size_t sentence;
  bool sentence_has_words = false;
  void end_sentence() {
    if (sentence_has_words) {
      ++sentence;
      sentence_has_words = false;
    }
  }
};

void emit(TokenStream& out, std::string surface, const TaggerConfig& config,
          TextCursor& cursor) {
  const bool initial = !cursor.sentence_has_words;
  cursor.sentence_has_words = true;
  // Strip possessive 's and trailing apostrophes.
  if (surface.ends_with("'s") || surface.ends_with("'S")) surface.resize(surface.size() - 2);
  while (!surface.empty() && surface.back() == '\'') surface.pop_back();
  while (!surface.empty() && surface.front() == '\'') surface.erase(0, 1);
  if (surface.empty()) return;
  const std::string lower = lowercase(surface);
  if (config.stopwords && config.stopwords->contains(lower)) return;

  LexiconEntry entry;
  if (const LexiconEntry* known =
          config.lexicon ? config.lexicon->find(lower) : nullptr) {
    entry = *known;
  } else if (is_ascii_upper(surface.front()) && !initial) {
    entry = {lower, Pos::propn};
  } else {
    static const Lexicon kEmpty;
    entry = guess(lower, config.lexicon ? *config.lexicon : kEmpty);
  }
  if (!is_content(entry.pos)) return;
  if (entry.pos == Pos::propn && config.drop_propn) return;
  if (entry.lemma.empty()) return;
  out.tokens.push_back(
      {std::move(surface), std::move(entry.lemma), entry.pos, cursor.sentence});
}

std::size_t tokenize_text_into(TokenStream& out, std::string_view text,
                               const TaggerConfig& config,
                               std::size_t first_sentence) {
  TextCursor cursor{first_sentence};
  std::string word;
  std::size_t newlines = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    bool apostrophe = false;
    const std::size_t len = letter_at(text, i, apostrophe);
    if (len > 0 && !(apostrophe && word.empty())) {
      if (apostrophe) {
        word.push_back('\'');
      } else {
        word.append(text.substr(i, len));
      }
      newlines = 0;
      i += len;
      continue;
    }
    if (!word.empty()) {
      emit(out, std::move(word), config, cursor);
      word.clear();
    }
    const char c = text[i];
    if (c == '.' || c == '!' || c == '?') {
      cursor.end_sentence();
    } else if (c == '\n') {
      if (++newlines >= 2) cursor.end_sentence();
    } else if (c != ' ' && c != '\t' && c != '\r') {
      newlines = 0;
    }
    i += len > 0 ? len : 1;
  }
  if (!word.empty()) emit(out, std::move(word), config, cursor);
  cursor.end_sentence();
  return cursor.sentence;
}

std::size_t tokenize_tsv_into(TokenStream& out, std::string_view tsv,
                              const TaggerConfig& config,
                              std::size_t first_sentence) {
  TextCursor cursor{first_sentence};
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= tsv.size()) {
    const auto nl = tsv.find('\n', pos);
    const auto line = tsv.substr(pos, nl == std::string_view::npos ? tsv.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? tsv.size() + 1 : nl + 1;
    ++line_no;
    const auto content = trim(line);
    if (content.empty()) {
      cursor.end_sentence();
      continue;
    }
    if (content.front() == '#') continue;
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    while (true) {
      const auto tab = rest.find('\t');
      fields.push_back(trim(rest.substr(0, tab)));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() < 3 || fields[0].empty()) {
      throw Error(Errc::parse, "tagged input line " + std::to_string(line_no) +
                                   ": expected surface<TAB>lemma<TAB>pos");
    }
    cursor.sentence_has_words = true;
    const Pos p = parse_pos(fields[2]);
    if (!is_content(p) || (p == Pos::propn && config.drop_propn)) continue;
    std::string lemma = lowercase(fields[1].empty() ? fields[0] : fields[1]);
    if (config.stopwords && config.stopwords->contains(lemma)) continue;
    out.tokens.push_back({std::string(fields[0]), std::move(lemma), p, cursor.sentence});
  }
  cursor.end_sentence();
  return cursor.sentence;
}

}  // namespace

TokenStream tokenize_text(std::string doc_id, std::string_view text,
                          const TaggerConfig& config,
                          std::size_t first_sentence) {
  TokenStream out{std::move(doc_id), {}};
  tokenize_text_into(out, text, config, first_sentence);
  return out;
}

TokenStream tokenize_tsv(std::string doc_id, std::string_view tsv,
                         const TaggerConfig& config,
                         std::size_t first_sentence) {
  TokenStream out{std::move(doc_id), {}};
  tokenize_tsv_into(out, tsv, config, first_sentence);
  return out;
}

TokenStream tokenize(const Document& doc, const TaggerConfig& config) {
  return doc.pretagged ? tokenize_tsv(doc.id, doc.raw_text, config)
                       : tokenize_text(doc.id, doc.raw_text, config);
}

// ---------------------------------------------------------------------------

std::vector<Segment> segment_equal(const TokenStream& stream, std::size_t n) {
  if (n == 0) throw Error(Errc::invalid_argument, "segment count must be >= 1");
  if (stream.size() < n) {
    throw Error(Errc::short_text, stream.doc_id + ": " +
                                      std::to_string(stream.size()) +
                                      " tokens, need at least " +
                                      std::to_string(n) + " for segmentation");
  }
  const std::size_t base = stream.size() / n;
  const std::size_t extra = stream.size() % n;
  std::vector<Segment> segments;
  segments.reserve(n);
  std::span<const Token> all(stream.tokens);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    segments.push_back({i, all.subspan(offset, len)});
    offset += len;
  }
  return segments;
}

std::vector<Chunk> chunk_fixed(const TokenStream& stream, std::size_t chunk_size) {
  if (chunk_size == 0) throw Error(Errc::invalid_argument, "chunk size must be >= 1");
  std::vector<Chunk> chunks;
  std::span<const Token> all(stream.tokens);
  for (std::size_t offset = 0; offset < all.size(); offset += chunk_size) {
    const std::size_t len = std::min(chunk_size, all.size() - offset);
    chunks.push_back({chunks.size(), all.subspan(offset, len)});
  }
  if (chunks.size() >= 2 && 2 * chunks.back().tokens.size() <= chunk_size) {
    const std::size_t tail = chunks.back().tokens.size();
    chunks.pop_back();
    auto& prev = chunks.back();
    prev.tokens = std::span<const Token>(prev.tokens.data(), prev.tokens.size() + tail);
  }
  return chunks;
}

ChapterPatterns ChapterPatterns::defaults() {
  return from_strings({R"((chapter|chap\.)\s+([ivxlcdm]+|[0-9]+)\b.*)"});
}

ChapterPatterns ChapterPatterns::from_strings(const std::vector<std::string>& patterns) {
  ChapterPatterns out;
  for (const auto& p : patterns) {
    try {
      out.headings.emplace_back(p, std::regex::ECMAScript | std::regex::icase);
    } catch (const std::regex_error& e) {
      throw Error(Errc::config, "bad chapter pattern '" + p + "': " + e.what());
    }
  }
  return out;
}

ChapterSplit split_chapters(const Document& doc, const ChapterPatterns& patterns) {
  struct Heading {
    std::size_t line_begin, body_begin;
    std::string text;
  };
  std::vector<Heading> headings;
  const std::string_view text = doc.raw_text;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const std::size_t line_end = nl == std::string_view::npos ? text.size() : nl;
    const std::size_t next = nl == std::string_view::npos ? text.size() : nl + 1;
    std::string_view line = trim(text.substr(pos, line_end - pos));
    bool candidate = !line.empty();
    if (doc.pretagged) {
      candidate = candidate && line.front() == '#';
      if (candidate) line = trim(line.substr(1));
    }
    if (candidate && !line.empty() && line.size() <= patterns.max_heading_length) {
      const std::string s(line);
      for (const auto& re : patterns.headings) {
        if (std::regex_match(s, re)) {
          headings.push_back({pos, next, s});
          break;
        }
      }
    }
    pos = next;
  }
  ChapterSplit split;
  split.prologue_end = text.size();
  if (headings.size() < 2) return split;
  split.chapterless = false;
  split.prologue_end = headings.front().line_begin;
  for (std::size_t i = 0; i < headings.size(); ++i) {
    const std::size_t end =
        i + 1 < headings.size() ? headings[i + 1].line_begin : text.size();
    split.chapters.push_back({i, headings[i].text, headings[i].body_begin, end});
  }
  return split;
}

std::span<const Token> TokenizedDocument::chapter_tokens(std::size_t i) const {
  const auto& ch = chapters.at(i);
  return std::span<const Token>(stream.tokens).subspan(ch.begin, ch.end - ch.begin);
}

TokenizedDocument tokenize_document(const Document& doc, const TaggerConfig& config,
                                    const ChapterPatterns& patterns) {
  TokenizedDocument out;
  const ChapterSplit split = split_chapters(doc, patterns);
  out.stream.doc_id = doc.id;
  out.chapterless = split.chapterless;
  auto run = [&](std::string_view text, std::size_t first_sentence) {
    return doc.pretagged
               ? tokenize_tsv_into(out.stream, text, config, first_sentence)
               : tokenize_text_into(out.stream, text, config, first_sentence);
  };
  const std::string_view raw = doc.raw_text;
  std::size_t sentence = run(raw.substr(0, split.prologue_end), 0);
  for (const auto& ch : split.chapters) {
    const std::size_t begin = out.stream.size();
    sentence = run(raw.substr(ch.body_begin, ch.body_end - ch.body_begin), sentence);
    out.chapters.push_back({ch.index, ch.heading, begin, out.stream.size()});
  }
  return out;
}

// ---------------------------------------------------------------------------

double ttr(std::span<const Token> tokens) {
  if (tokens.empty()) throw Error(Errc::empty_input, "type-token ratio of an empty stream");
  std::unordered_set<std::string_view> types;
  for (const auto& t : tokens) types.insert(t.lemma);
  return static_cast<double>(types.size()) / static_cast<double>(tokens.size());
}

double avq(std::span<const Token> tokens) {
  std::size_t adjectives = 0;
  std::size_t verbs = 0;
  for (const auto& t : tokens) {
    if (t.pos == Pos::adj) ++adjectives;
    if (t.pos == Pos::verb) ++verbs;
  }
  if (verbs == 0) throw Error(Errc::undefined_ratio, "adjective-verb quotient without verbs");
  return static_cast<double>(adjectives) / static_cast<double>(verbs);
}

}  // namespace litstyle
