#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "litstyle/assets.hpp"
#include "litstyle/error.hpp"
#include "litstyle/random.hpp"
#include "litstyle/sentiment.hpp"

namespace litstyle::synth {

namespace {

std::string padded(std::size_t value, int width) {
  std::string s = std::to_string(value);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

// Index drawn from unnormalized weights.
std::size_t draw(Rng& rng, const std::vector<double>& cumulative) {
  const double u = rng.uniform() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

std::vector<double> zipf_cumulative(std::size_t n) {
  std::vector<double> c(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += 1.0 / static_cast<double>(i + 1);
    c[i] = total;
  }
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------

FeatureTable gaussian_blobs(const BlobSpec& spec) {
  FeatureTable t;
  for (std::size_t j = 0; j < spec.features; ++j) t.feature_names.push_back("f" + std::to_string(j + 1));
  for (std::size_t j = 0; j < spec.noise_features; ++j) {
    t.feature_names.push_back("noise" + std::to_string(j + 1));
  }
  for (std::size_t c = 0; c < spec.classes; ++c) t.class_names.push_back("class" + std::to_string(c + 1));
  Rng rng(spec.seed);
  const double offset = spec.separation / std::sqrt(2.0);
  for (std::size_t c = 0; c < spec.classes; ++c) {
    for (std::size_t i = 0; i < spec.per_class; ++i) {
      FeatureRow row{"c" + std::to_string(c + 1) + "_" + padded(i, 4), {}, c};
      for (std::size_t j = 0; j < spec.features; ++j) {
        row.values.push_back(rng.normal() + (j == c % spec.features ? offset : 0.0));
      }
      for (std::size_t j = 0; j < spec.noise_features; ++j) row.values.push_back(rng.normal());
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

FeatureTable one_signal_table(std::size_t per_class, std::size_t noise_features, double separation,
                              std::uint64_t seed) {
  FeatureTable t;
  t.feature_names.push_back("signal");
  for (std::size_t j = 0; j < noise_features; ++j) t.feature_names.push_back("noise" + std::to_string(j + 1));
  t.class_names = {"low", "high"};
  Rng rng(seed);
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      FeatureRow row{t.class_names[c] + "_" + padded(i, 4), {}, c};
      row.values.push_back(rng.normal() + (c == 1 ? separation : 0.0));
      for (std::size_t j = 0; j < noise_features; ++j) row.values.push_back(rng.normal());
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

FeatureTable shuffle_labels(FeatureTable table, std::uint64_t seed) {
  std::vector<std::size_t> labels;
  for (const auto& r : table.rows) labels.push_back(r.label);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(labels));
  for (std::size_t i = 0; i < labels.size(); ++i) table.rows[i].label = labels[i];
  return table;
}

// ---------------------------------------------------------------------------

TokenStream stream_from_lemmas(std::string doc_id, const std::vector<std::string>& lemmas,
                               std::size_t sentence_length) {
  TokenStream s{std::move(doc_id), {}};
  s.tokens.reserve(lemmas.size());
  for (std::size_t i = 0; i < lemmas.size(); ++i) {
    s.tokens.push_back({lemmas[i], lemmas[i], Pos::noun, i / std::max<std::size_t>(1, sentence_length)});
  }
  return s;
}

TopicCorpus disjoint_topic_corpus(const TopicCorpusSpec& spec) {
  TopicCorpus out;
  for (std::size_t k = 0; k < spec.topics; ++k) {
    std::vector<std::string> words;
    for (std::size_t j = 0; j < spec.words_per_topic; ++j) {
      words.push_back("t" + std::to_string(k) + "w" + padded(j, 3));
    }
    out.topic_words.push_back(std::move(words));
  }
  const auto zipf = zipf_cumulative(spec.words_per_topic);
  Rng rng(spec.seed);
  for (std::size_t d = 0; d < spec.docs; ++d) {
    const std::size_t dominant = d % spec.topics;
    std::vector<std::string> lemmas;
    lemmas.reserve(spec.doc_length);
    for (std::size_t i = 0; i < spec.doc_length; ++i) {
      std::size_t topic = dominant;
      if (spec.topics > 1 && rng.uniform() >= spec.dominant_share) {
        topic = static_cast<std::size_t>(rng.below(spec.topics - 1));
        if (topic >= dominant) ++topic;
      }
      lemmas.push_back(out.topic_words[topic][draw(rng, zipf)]);
    }
    out.streams.push_back(stream_from_lemmas("doc" + padded(d, 4), lemmas));
    out.dominant_topic.push_back(dominant);
  }
  VocabOptions options;
  options.min_freq = 1;
  out.vocab = build_vocab(std::span<const TokenStream>(out.streams), options);
  for (const auto& s : out.streams) out.docs.push_back(to_bow(s.tokens, out.vocab));
  return out;
}

TokenStream decay_text(std::string doc_id, bool contracting, const DecaySpec& spec,
                       std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> lemmas;
  lemmas.reserve(spec.tokens);
  const std::size_t per_segment = spec.tokens / spec.segments;
  for (std::size_t s = 0; s < spec.segments; ++s) {
    std::size_t pool = spec.pool;
    if (contracting && spec.segments > 1) {
      const double f = static_cast<double>(s) / static_cast<double>(spec.segments - 1);
      pool = static_cast<std::size_t>(std::lround(static_cast<double>(spec.pool) * (1.0 - f) +
                                                  static_cast<double>(spec.final_pool) * f));
    }
    const std::size_t count = s + 1 == spec.segments ? spec.tokens - lemmas.size() : per_segment;
    for (std::size_t i = 0; i < count; ++i) lemmas.push_back("w" + padded(rng.below(pool), 4));
  }
  return stream_from_lemmas(std::move(doc_id), lemmas);
}

std::vector<TokenStream> diversity_gradient_corpus(std::size_t docs, std::size_t segments,
                                                   std::size_t segment_tokens, std::size_t min_pool,
                                                   std::size_t max_pool, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<TokenStream> out;
  for (std::size_t d = 0; d < docs; ++d) {
    std::vector<std::string> lemmas;
    for (std::size_t s = 0; s < segments; ++s) {
      const double f = rng.uniform();
      const auto pool = static_cast<std::size_t>(
          std::lround(static_cast<double>(min_pool) + f * static_cast<double>(max_pool - min_pool)));
      for (std::size_t i = 0; i < segment_tokens; ++i) lemmas.push_back("w" + padded(rng.below(pool), 4));
    }
    out.push_back(stream_from_lemmas("doc" + padded(d, 3), lemmas));
  }
  return out;
}

std::vector<Vector> random_vectors(std::size_t count, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vector> out(count, Vector(dim));
  for (auto& v : out) {
    for (auto& x : v) x = rng.normal();
  }
  return out;
}

std::vector<double> random_distribution(std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> p(k);
  double total = 0.0;
  for (auto& x : p) {
    x = -std::log(1.0 - rng.uniform());  // Exp(1): uniform on the simplex after normalizing
    total += x;
  }
  for (auto& x : p) x /= total;
  return p;
}

// ---------------------------------------------------------------------------
// Fixture corpus

namespace {

// Everyday nouns; each is checked against the tagger before use.
constexpr const char* kNouns[] = {
    "apple", "arm", "army", "autumn", "baby", "bag", "ball", "bank", "basket", "beach", "bear",
    "bed", "bell", "bench", "bird", "blanket", "boat", "bone", "book", "bottle", "bread", "bridge",
    "brother", "bucket", "cabin", "cake", "candle", "captain", "car", "carpet", "castle", "cat",
    "cave", "chair", "cheese", "child", "church", "city", "cliff", "clock", "cloud", "coat",
    "coffee", "coin", "corner", "cottage", "country", "cow", "crown", "cup", "daughter", "desk",
    "dinner", "doctor", "dog", "door", "dragon", "dream", "dress", "drum", "duck", "eagle", "earth",
    "egg", "engine", "evening", "eye", "face", "farm", "farmer", "father", "feather", "fence",
    "field", "finger", "fire", "fish", "flag", "flower", "forest", "fox", "garden", "gate", "ghost",
    "giant", "girl", "glove", "goat", "gold", "grandmother", "grass", "guitar", "hall", "hammer",
    "hand", "harbor", "hat", "heart", "hill", "horse", "hospital", "hotel", "house", "island",
    "jacket", "jar", "jewel", "judge", "kettle", "key", "king", "kitchen", "kite", "knife", "ladder",
    "lake", "lamp", "lantern", "leaf", "letter", "library", "lion", "lock", "machine", "map",
    "market", "meadow", "merchant", "milk", "mirror", "monkey", "moon", "morning", "mother",
    "mountain", "mouse", "mouth", "music", "nest", "night", "ocean", "office", "orange", "owl",
    "palace", "paper", "parrot", "pen", "pencil", "piano", "picture", "pillow", "pirate", "planet",
    "plate", "pocket", "poet", "pond", "potato", "prince", "princess", "queen", "rabbit", "rain",
    "river", "road", "rock", "roof", "room", "rope", "sailor", "salt", "school", "sea", "shadow",
    "sheep", "ship", "shirt", "shoe", "shop", "silver", "singer", "sister", "sky", "snow", "soldier",
    "song", "spoon", "star", "stone", "storm", "street", "sugar", "summer", "sun", "sword", "table",
    "teacher", "tent", "thunder", "tiger", "tower", "town", "toy", "train", "treasure", "tree",
    "tunnel", "uncle", "valley", "village", "violin", "wagon", "wall", "water", "wave", "wheel",
    "window", "wind", "wing", "winter", "wizard", "wolf", "woman", "wood", "world", "writer",
    "yard", "year"};

constexpr const char* kCategoryAuthors[6][2] = {
    {"Ashdown", "Bellamy"}, {"Carrow", "Dunmore"}, {"Ellery", "Fairfax"},
    {"Garland", "Hollis"},  {"Ingram", "Jessop"},  {"Kestrel", "Lindqvist"}};

constexpr std::size_t kThemes = 8;

const char* roman(std::size_t n) {
  static constexpr const char* r[] = {"I",  "II",  "III",  "IV", "V",   "VI",  "VII",
                                      "VIII", "IX", "X",   "XI", "XII", "XIII", "XIV"};
  return r[std::min<std::size_t>(n, std::size(r) - 1)];
}

struct WordPools {
  // Per theme: (surface, lemma) pairs.
  std::vector<std::vector<std::string>> nouns{kThemes};
  std::vector<std::vector<std::pair<std::string, std::string>>> verbs{kThemes};
  std::vector<std::string> adjectives;
  std::vector<std::string> adverbs;
  std::vector<std::string> positive;
  std::vector<std::string> negative;
  std::vector<std::string> lemmas;  // every lemma the generator can produce
};

bool tags_as(const TaggerConfig& tagger, const std::string& surface, const std::string& lemma, Pos pos) {
  const TokenStream s = tokenize_text("probe", "The " + surface + ".", tagger);
  return s.tokens.size() == 1 && s.tokens[0].lemma == lemma && s.tokens[0].pos == pos;
}

WordPools build_pools() {
  const TaggerConfig tagger = TaggerConfig::builtin();
  WordPools pools;
  std::map<std::string, bool> seen;
  auto note = [&](const std::string& lemma) {
    if (!seen[lemma]) {
      seen[lemma] = true;
      pools.lemmas.push_back(lemma);
    }
  };
  std::size_t i = 0;
  for (const char* n : kNouns) {
    if (!tags_as(tagger, n, n, Pos::noun)) continue;
    pools.nouns[i++ % kThemes].push_back(n);
    note(n);
  }
  std::map<std::string, std::vector<std::string>> verb_forms;
  std::istringstream lex{std::string(assets::lexicon())};
  std::string line;
  while (std::getline(lex, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string word, lemma, pos;
    std::getline(fields, word, '\t');
    std::getline(fields, lemma, '\t');
    std::getline(fields, pos, '\t');
    if (pos == "VERB" && tags_as(tagger, word, lemma, Pos::verb)) {
      verb_forms[lemma].push_back(word);
    } else if (pos == "ADJ" && word == lemma && tags_as(tagger, word, lemma, Pos::adj)) {
      pools.adjectives.push_back(word);
      note(word);
    } else if (pos == "ADV" && word == lemma && tags_as(tagger, word, lemma, Pos::adv)) {
      pools.adverbs.push_back(word);
      note(word);
    }
  }
  i = 0;
  for (const auto& [lemma, forms] : verb_forms) {
    // A past-tense-looking form if there is one; the lexicon resolves it.
    std::string surface = forms.front();
    for (const auto& f : forms) {
      if (f != lemma && f.size() > 1 && f.substr(f.size() - 1) != "s" &&
          (f.size() < 3 || f.substr(f.size() - 3) != "ing")) {
        surface = f;
        break;
      }
    }
    pools.verbs[i++ % kThemes].emplace_back(surface, lemma);
    note(lemma);
  }
  for (const auto* name : {"positive", "negative"}) {
    for (const auto& w : builtin_label_set(name).labels) {
      if (!tags_as(tagger, w, w, Pos::noun) && !tags_as(tagger, w, w, Pos::verb)) continue;
      (std::string(name) == "positive" ? pools.positive : pools.negative).push_back(w);
    }
  }
  for (const auto* name : {"positive", "negative", "happiness", "fear"}) {
    for (const auto& w : builtin_label_set(name).labels) note(w);
  }
  std::sort(pools.lemmas.begin(), pools.lemmas.end());
  return pools;
}

Vector unit_normal(Rng& rng, std::size_t dim) {
  Vector v(dim);
  double n = 0.0;
  for (auto& x : v) {
    x = rng.normal();
    n += x * x;
  }
  n = std::sqrt(n);
  for (auto& x : v) x /= n;
  return v;
}

EmbeddingTable fixture_embeddings(const WordPools& pools, std::size_t dim, std::uint64_t seed) {
  Rng rng = Rng::derive(seed, 77);
  std::vector<Vector> themes;
  for (std::size_t t = 0; t < kThemes; ++t) themes.push_back(unit_normal(rng, dim));
  const Vector valence = unit_normal(rng, dim);
  const Vector joy = unit_normal(rng, dim);
  const Vector dread = unit_normal(rng, dim);
  std::map<std::string, std::size_t> theme_of;
  for (std::size_t t = 0; t < kThemes; ++t) {
    for (const auto& n : pools.nouns[t]) theme_of[n] = t;
    for (const auto& v : pools.verbs[t]) theme_of[v.second] = t;
  }
  auto member = [](const char* set, const std::string& w) {
    const auto labels = builtin_label_set(set).labels;
    return std::find(labels.begin(), labels.end(), w) != labels.end();
  };
  EmbeddingTable table(dim);
  for (std::size_t i = 0; i < pools.lemmas.size(); ++i) {
    const std::string& w = pools.lemmas[i];
    const auto it = theme_of.find(w);
    const std::size_t theme = it == theme_of.end() ? i % kThemes : it->second;
    Vector v = unit_normal(rng, dim);
    for (std::size_t d = 0; d < dim; ++d) v[d] = 0.7 * v[d] + 0.8 * themes[theme][d];
    const double pos = member("positive", w) ? 1.0 : 0.0;
    const double neg = member("negative", w) ? 1.0 : 0.0;
    const double hap = member("happiness", w) ? 1.0 : 0.0;
    const double fea = member("fear", w) ? 1.0 : 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      v[d] += (pos - neg + 0.5 * hap - 0.5 * fea) * valence[d] + 0.8 * hap * joy[d] +
              0.8 * fea * dread[d];
    }
    table.add(w, v);
  }
  return table;
}

struct DocPlan {
  std::size_t category = 0;
  std::size_t author = 0;
  std::size_t number = 0;
  bool chaptered = false;
  bool contracting = false;
};

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string write_document(const WordPools& pools, const FixtureSpec& spec, const DocPlan& plan,
                           std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t total_sentences = spec.chapters * spec.sentences_per_chapter;
  const std::size_t author_theme = 6 + plan.author;
  const double positive_bias = plan.author == 0 ? 0.75 : 0.3;
  std::string text;
  std::size_t sentence = 0;

  auto pick_theme = [&](std::size_t chapter) {
    const double u = rng.uniform();
    if (u < 0.45) return plan.category;
    if (u < 0.7) return author_theme;
    return (plan.category + 2 * chapter + plan.number) % kThemes;
  };
  // Contracting texts draw from a shrinking prefix of every pool.
  auto reach = [&](std::size_t size) {
    if (!plan.contracting) return size;
    const double f = static_cast<double>(sentence) / static_cast<double>(total_sentences);
    const double keep = 1.0 - 0.8 * f;
    return std::max<std::size_t>(2, static_cast<std::size_t>(static_cast<double>(size) * keep));
  };
  auto noun = [&](std::size_t theme) -> std::string {
    if (rng.uniform() < 0.08) {
      const auto& pool = rng.uniform() < positive_bias ? pools.positive : pools.negative;
      return pool[rng.below(reach(pool.size()))];
    }
    const auto& pool = pools.nouns[theme];
    return pool[rng.below(reach(pool.size()))];
  };
  auto verb = [&](std::size_t theme) {
    const auto& pool = pools.verbs[theme];
    return pool[rng.below(reach(pool.size()))].first;
  };
  auto adj = [&]() { return pools.adjectives[rng.below(reach(pools.adjectives.size()))]; };
  auto adv = [&]() { return pools.adverbs[rng.below(reach(pools.adverbs.size()))]; };

  auto make_sentence = [&](std::size_t chapter) {
    const std::size_t t = pick_theme(chapter);
    const std::size_t t2 = pick_theme(chapter);
    std::string s;
    switch (rng.below(4)) {
      case 0:
        s = "The " + adj() + " " + noun(t) + " " + verb(t) + " the " + noun(t2) + ".";
        break;
      case 1:
        s = "Then the " + noun(t) + " " + verb(t2) + " " + adv() + ".";
        break;
      case 2:
        s = "A " + noun(t) + " " + verb(t) + " the " + adj() + " " + noun(t2) + " and the " +
            noun(t) + ".";
        break;
      default:
        s = "It " + verb(t) + " " + adv() + ", and the " + noun(t2) + " " + verb(t2) + " the " +
            noun(t) + ".";
        break;
    }
    ++sentence;
    return s;
  };

  const bool poem = plan.category == static_cast<std::size_t>(Category::poems);
  for (std::size_t c = 0; c < spec.chapters; ++c) {
    if (plan.chaptered) {
      text += "CHAPTER ";
      text += roman(c);
      text += "\n\n";
    }
    for (std::size_t s = 0; s < spec.sentences_per_chapter; ++s) {
      text += make_sentence(c);
      if (poem) {
        text += (s % 4 == 3) ? "\n\n" : "\n";
      } else {
        text += (s % 6 == 5) ? "\n\n" : " ";
      }
    }
    if (text.back() != '\n') text += "\n";
    text += "\n";
  }
  return text;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out << content;
}

}  // namespace

FixtureFiles write_fixture_corpus(const std::filesystem::path& dir, const FixtureSpec& spec) {
  const WordPools pools = build_pools();
  FixtureFiles files;
  files.manifest = dir / "manifest.csv";
  files.embeddings = dir / "embeddings.txt";
  files.config = dir / "litstyle.conf";

  std::ostringstream manifest;
  manifest << "file,author,title,category\n";
  std::size_t doc_index = 0;
  for (std::size_t ci = 0; ci < kAllCategories.size(); ++ci) {
    const Category category = kAllCategories[ci];
    const std::string cname(to_string(category));
    const bool chaptered = category != Category::plays && category != Category::poems;
    const bool contracting = category == Category::children || category == Category::novels;
    for (std::size_t a = 0; a < spec.authors_per_category; ++a) {
      const std::string author = kCategoryAuthors[ci][a % 2] +
                                 (a < 2 ? std::string() : " " + std::to_string(a / 2 + 1));
      for (std::size_t n = 0; n < spec.docs_per_author; ++n) {
        const DocPlan plan{ci, a % 2, n, chaptered, contracting};
        std::string file_author = author;
        std::replace(file_author.begin(), file_author.end(), ' ', '_');
        const std::string rel = "texts/" + cname + "/" + file_author + "_" + std::to_string(n + 1) + ".txt";
        write_file(dir / rel, write_document(pools, spec, plan, Rng::derive(spec.seed, doc_index).next()));
        manifest << rel << "," << author << "," << capitalize(cname) << " by " << author << " "
                 << (n + 1) << "," << cname << "\n";
        ++doc_index;
      }
    }
  }
  write_file(files.manifest, manifest.str());
  files.documents = doc_index;

  std::ostringstream emb;
  write_embeddings(emb, fixture_embeddings(pools, spec.dim, spec.seed));
  write_file(files.embeddings, emb.str());

  for (const auto* name : {"positive", "negative", "happiness", "fear"}) {
    std::string body = "# " + std::string(name) + " labels\n";
    for (const auto& w : builtin_label_set(name).labels) body += w + "\n";
    write_file(dir / "labels" / (std::string(name) + ".txt"), body);
  }

  write_file(files.config,
             "# Scaled-down settings for the synthetic fixture corpus.\n"
             "corpus_dir = .\n"
             "manifest = manifest.csv\n"
             "embeddings = embeddings.txt\n"
             "positive_labels = labels/positive.txt\n"
             "negative_labels = labels/negative.txt\n"
             "emotion_labels = happiness:labels/happiness.txt,fear:labels/fear.txt\n"
             "output_dir = out\n"
             "seed = " + std::to_string(spec.seed) + "\n"
             "min_per_author_category = 5\n"
             "segments = 100\n"
             "chunk_size = 200\n"
             "topics = 8\n"
             "iterations = 200\n"
             "min_freq = 20\n"
             "inference_iterations = 100\n"
             "k_folds = 5\n"
             "tours = 2\n"
             "max_epochs = 300\n"
             "importance_repeats = 5\n");
  return files;
}

}  // namespace litstyle::synth
