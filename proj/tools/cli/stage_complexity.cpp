#include <algorithm>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "litstyle/complexity.hpp"
#include "litstyle/error.hpp"
#include "litstyle/parallel.hpp"
#include "litstyle/stats.hpp"
#include "stages.hpp"

namespace litstyle::cli::detail {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct DocMeasures {
  std::vector<double> h;        // per segment, empty for short texts
  std::vector<double> seg_ttr;  // per segment
  std::optional<DecayFit> decay;
  double h_mean = kNaN, h_first = kNaN, h_last = kNaN;
  double itv = kNaN, swd = kNaN, ff = kNaN, harm = kNaN, vari = kNaN;
  double oov_rate = kNaN;
  std::vector<Vector> chunks;
  std::vector<std::pair<std::string, std::string>> skipped;  // (measure, reason)
};

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Book and chapter distributions from the topics stage, keyed by doc id.
struct TopicParts {
  std::vector<double> book;
  std::map<std::size_t, std::vector<double>> chapters;
};

std::map<std::string, TopicParts> load_parts(const fs::path& topics_dir) {
  std::map<std::string, TopicParts> out;
  const CsvTable t = read_table(topics_dir / "inferred_topics.csv");
  const auto c_doc = t.column("doc_id");
  const auto c_part = t.column("part");
  const std::size_t first = c_part + 1;
  for (const auto& row : t.rows) {
    std::vector<double> p;
    for (std::size_t i = first; i < row.size(); ++i) p.push_back(parse_double(row[i]));
    auto& parts = out[row[c_doc]];
    if (row[c_part] == "book") {
      parts.book = std::move(p);
    } else {
      parts.chapters[static_cast<std::size_t>(parse_double(row[c_part]))] = std::move(p);
    }
  }
  return out;
}

const char* kMeasures[] = {"H_mean", "ITV", "SWD", "FF", "HARM", "VARI"};

double measure(const DocMeasures& m, std::string_view name) {
  if (name == "H_mean") return m.h_mean;
  if (name == "ITV") return m.itv;
  if (name == "SWD") return m.swd;
  if (name == "FF") return m.ff;
  if (name == "HARM") return m.harm;
  return m.vari;
}

}  // namespace

void run_complexity(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const fs::path dir = stage_dir(ctx, Stage::complexity);
  const LoadedCorpus corpus = load_corpus(ctx.out);
  const EmbeddingTable table = load_table(c);
  const auto parts = load_parts(stage_dir(ctx, Stage::topics));
  const std::size_t n_segments = c.get_size("segments");
  const std::size_t window = c.get_size("smoothing_window");
  const std::size_t buckets = c.get_size("decay_buckets");
  const double alpha = c.get_double("decay_alpha");
  const std::size_t chunk_size = c.get_size("chunk_size");
  const double max_oov = c.get_double("max_oov_rate");
  if (n_segments == 0 || buckets == 0 || n_segments % buckets != 0) {
    throw Error(Errc::config, "segments must be a positive multiple of decay_buckets");
  }
  if (window == 0 || window > n_segments) throw Error(Errc::config, "smoothing_window must be in [1, segments]");
  if (chunk_size == 0) throw Error(Errc::config, "chunk_size must be positive");

  const std::size_t n_docs = corpus.docs.size();
  std::vector<DocMeasures> m(n_docs);
  parallel_for(n_docs, ctx.jobs, [&](std::size_t i) {
    const TokenStream& stream = corpus.tokenized[i].stream;
    DocMeasures& d = m[i];
    auto skip = [&d](const char* what, const Error& e) { d.skipped.emplace_back(what, e.what()); };

    // Vocabulary decay and segment TTR.
    try {
      // Trim to a multiple of the segment count so all segments are the same
      // length: front-first remainders make early segments one token longer,
      // which on short texts is enough to fake a decay.
      TokenStream even{stream.doc_id, {}};
      even.tokens.assign(stream.tokens.begin(),
                         stream.tokens.begin() + static_cast<std::ptrdiff_t>(stream.size() - stream.size() % n_segments));
      const auto segs = segment_equal(even.empty() ? stream : even, n_segments);
      d.h = segment_entropy(stream.doc_id, segs).h;
      for (const auto& s : segs) d.seg_ttr.push_back(ttr(s.tokens));
      d.h_mean = mean_of(d.h);
      const std::size_t edge = std::min<std::size_t>(10, d.h.size());
      d.h_first = mean_of(std::span<const double>(d.h).first(edge));
      d.h_last = mean_of(std::span<const double>(d.h).last(edge));
      d.decay = decay_fit(d.h, buckets, alpha);
    } catch (const Error& e) {
      if (e.code() != Errc::short_text) throw;
      skip("H", e);
    }

    // Chunk dispersion and forward flow.
    std::size_t oov = 0;
    for (const auto& t : stream.tokens) oov += table.contains(t.lemma) ? 0 : 1;
    if (!stream.empty()) d.oov_rate = static_cast<double>(oov) / static_cast<double>(stream.size());
    if (stream.empty() || d.oov_rate > max_oov) {
      d.skipped.emplace_back("ITV,SWD,FF", stream.empty() ? "empty text" : "oov_rate above max_oov_rate");
    } else {
      for (const auto& ch : chunk_fixed(stream, chunk_size)) {
        try {
          d.chunks.push_back(chunk_vector(ch.tokens, table).vector);
        } catch (const Error& e) {
          if (e.code() != Errc::all_oov) throw;
        }
      }
      if (!d.chunks.empty()) d.itv = intra_textual_variance(d.chunks);
      if (d.chunks.size() >= 2) {
        d.swd = stepwise_distance(d.chunks);
      } else {
        d.skipped.emplace_back("SWD", "fewer than 2 chunks");
      }
      try {
        d.ff = doc_forward_flow(stream, table);
      } catch (const Error& e) {
        if (e.code() != Errc::empty_input) throw;
        skip("FF", e);
      }
    }

    // Harmony and variety from the topic distributions.
    const auto it = parts.find(stream.doc_id);
    if (!corpus.tokenized[i].chapterless && it != parts.end() && !it->second.book.empty()) {
      std::vector<std::vector<double>> chapters;
      for (const auto& [index, p] : it->second.chapters) chapters.push_back(p);
      if (chapters.size() >= 2) {
        const auto b = assess_beauty(stream.doc_id, it->second.book, chapters);
        d.harm = b.harmony;
        d.vari = b.variety;
      } else {
        d.skipped.emplace_back("HARM,VARI", "fewer than 2 chapters with model words");
      }
    } else if (corpus.tokenized[i].chapterless) {
      d.skipped.emplace_back("HARM,VARI", "chapterless");
    } else {
      d.skipped.emplace_back("HARM,VARI", "no topic distribution");
    }
  });

  const auto& docs = corpus.docs;
  write_file(dir / "features.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row({"doc_id", "author", "category", "H_mean", "H_first10", "H_last10", "ITV", "SWD", "FF",
             "HARM", "VARI", "oov_rate"});
    for (std::size_t i = 0; i < n_docs; ++i) {
      const auto& d = m[i];
      csv.field(docs[i].id).field(docs[i].author).field(to_string(docs[i].category))
          .field(opt(d.h_mean)).field(opt(d.h_first)).field(opt(d.h_last)).field(opt(d.itv))
          .field(opt(d.swd)).field(opt(d.ff)).field(opt(d.harm)).field(opt(d.vari)).field(opt(d.oov_rate));
      csv.end_row();
    }
  });
  write_file(dir / "entropy_profiles.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row({"doc_id", "segment", "h", "ttr", "smoothed", "z"});
    for (std::size_t i = 0; i < n_docs; ++i) {
      const auto& d = m[i];
      if (d.h.empty()) continue;
      const auto smooth = smooth_rolling(d.h, window);
      std::vector<double> z;
      try {
        z = standardize(smooth);
      } catch (const Error&) {
        z.assign(smooth.size(), kNaN);
      }
      for (std::size_t s = 0; s < d.h.size(); ++s) {
        csv.field(docs[i].id).field(s + 1).field(d.h[s]).field(d.seg_ttr[s]).field(smooth[s]).field(opt(z[s]));
        csv.end_row();
      }
    }
  });
  write_file(dir / "decay_fits.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row({"doc_id", "author", "category", "c0", "c1", "c2", "c3", "r2", "r2_adj", "f_ratio",
             "p_value", "decaying"});
    for (std::size_t i = 0; i < n_docs; ++i) {
      if (!m[i].decay) continue;
      const auto& f = m[i].decay->fit;
      csv.field(docs[i].id).field(docs[i].author).field(to_string(docs[i].category));
      for (double coef : f.coefficients) csv.field(coef);
      csv.field(f.r2).field(f.r2_adj).field(f.f_ratio).field(f.p_value).field(m[i].decay->decaying ? "1" : "0");
      csv.end_row();
    }
  });

  // Category-level decay: mean of the standardized raw profiles, bucketed and
  // fitted like a single text. The smoothed profiles are autocorrelated, which
  // would inflate the F test, so they only feed entropy_profiles.csv.
  struct CategoryDecay {
    Category category;
    std::size_t docs = 0;
    std::size_t decaying_docs = 0;
    DecayFit fit;
  };
  std::vector<CategoryDecay> category_decay;
  for (Category cat : kAllCategories) {
    std::vector<double> sum(n_segments, 0.0);
    CategoryDecay d{cat, 0, 0, {}};
    for (std::size_t i = 0; i < n_docs; ++i) {
      if (docs[i].category != cat || m[i].h.empty()) continue;
      std::vector<double> z;
      try {
        z = standardize(m[i].h);
      } catch (const Error&) {
        continue;
      }
      for (std::size_t s = 0; s < n_segments; ++s) sum[s] += z[s];
      ++d.docs;
      if (m[i].decay && m[i].decay->decaying) ++d.decaying_docs;
    }
    if (d.docs == 0) continue;
    for (auto& v : sum) v /= static_cast<double>(d.docs);
    d.fit = decay_fit(sum, buckets, alpha);
    category_decay.push_back(std::move(d));
  }
  write_file(dir / "decay_summary.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row({"category", "docs", "decaying_docs", "r2", "r2_adj", "f_ratio", "p_value", "decaying"});
    for (const auto& d : category_decay) {
      const auto& f = d.fit.fit;
      csv.field(to_string(d.category)).field(d.docs).field(d.decaying_docs).field(f.r2).field(f.r2_adj)
          .field(f.f_ratio).field(f.p_value).field(d.fit.decaying ? "1" : "0");
      csv.end_row();
    }
  });
  write_file(dir / "decay_curves.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row({"category", "bucket", "mean", "fitted"});
    for (const auto& d : category_decay) {
      for (std::size_t b = 0; b < d.fit.buckets.size(); ++b) {
        const double x = static_cast<double>(b + 1);
        csv.field(to_string(d.category)).field(b + 1).field(d.fit.buckets[b]).field(d.fit.fit(x));
        csv.end_row();
      }
    }
  });

  // Beauty, ranked within each category.
  write_file(dir / "beauty.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row({"doc_id", "author", "category", "harmony", "variety", "beautiful", "rank_in_category"});
    for (Category cat : kAllCategories) {
      std::vector<BeautyAssessment> books;
      std::vector<std::size_t> index;
      for (std::size_t i = 0; i < n_docs; ++i) {
        if (docs[i].category != cat || std::isnan(m[i].harm)) continue;
        books.push_back({docs[i].id, m[i].harm, m[i].vari, beauty_predicate(m[i].harm, m[i].vari)});
        index.push_back(i);
      }
      const auto order = rank_beauty(books);
      for (std::size_t r = 0; r < order.size(); ++r) {
        const auto& b = books[order[r]];
        const auto& doc = docs[index[order[r]]];
        csv.field(b.doc_id).field(doc.author).field(to_string(cat)).field(b.harmony).field(b.variety)
            .field(b.beautiful ? "1" : "0").field(r + 1);
        csv.end_row();
      }
    }
  });

  // Category differences per measure: one-way ANOVA and pairwise Welch t.
  std::ostringstream pairwise_body;
  write_file(dir / "anova.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    CsvWriter pw(pairwise_body);
    csv.row({"measure", "groups", "f_ratio", "p_value", "r2", "df_between", "df_within"});
    pw.row({"measure", "category_a", "category_b", "t", "df", "p_value"});
    for (const char* name : kMeasures) {
      std::vector<std::vector<double>> groups;
      std::vector<Category> labels;
      for (Category cat : kAllCategories) {
        std::vector<double> values;
        for (std::size_t i = 0; i < n_docs; ++i) {
          const double v = measure(m[i], name);
          if (docs[i].category == cat && !std::isnan(v)) values.push_back(v);
        }
        if (values.size() >= 2) {
          groups.push_back(std::move(values));
          labels.push_back(cat);
        }
      }
      if (groups.size() < 2) continue;
      try {
        const AnovaResult a = anova_oneway(groups);
        csv.field(name).field(groups.size()).field(a.f_ratio).field(a.p_value).field(a.r2)
            .field(a.df_between).field(a.df_within);
        csv.end_row();
      } catch (const Error& e) {
        note(ctx, std::string("[complexity] ANOVA skipped for ") + name + ": " + e.what());
        continue;
      }
      for (std::size_t a = 0; a < groups.size(); ++a) {
        for (std::size_t b = a + 1; b < groups.size(); ++b) {
          try {
            const WelchResult w = welch_t(groups[a], groups[b]);
            pw.field(name).field(to_string(labels[a])).field(to_string(labels[b])).field(w.t).field(w.df)
                .field(w.p_value);
            pw.end_row();
          } catch (const Error&) {
          }
        }
      }
    }
  });
  write_file(dir / "pairwise.csv", [&](std::ostream& o) { o << pairwise_body.str(); });

  // Segment-level H vs TTR per category.
  write_file(dir / "h_ttr.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row({"category", "segments", "pearson_r"});
    for (Category cat : kAllCategories) {
      std::vector<double> h, t;
      for (std::size_t i = 0; i < n_docs; ++i) {
        if (docs[i].category != cat) continue;
        h.insert(h.end(), m[i].h.begin(), m[i].h.end());
        t.insert(t.end(), m[i].seg_ttr.begin(), m[i].seg_ttr.end());
      }
      if (h.size() < 3) continue;
      std::optional<double> r;
      try {
        r = pearson(h, t);
      } catch (const Error&) {
      }
      csv.field(to_string(cat)).field(h.size()).field(r);
      csv.end_row();
    }
  });

  // Chunk trajectories in the plane of the two leading components.
  std::vector<std::vector<double>> all_chunks;
  std::vector<std::pair<std::size_t, std::size_t>> owner;
  for (std::size_t i = 0; i < n_docs; ++i) {
    for (std::size_t k = 0; k < m[i].chunks.size(); ++k) {
      all_chunks.push_back(m[i].chunks[k]);
      owner.emplace_back(i, k);
    }
  }
  if (all_chunks.size() >= 3 && table.dim() >= 2) {
    const Pca2d pca = pca_2d(all_chunks, c.seed());
    write_file(dir / "pca.csv", [&](std::ostream& o) {
      CsvWriter csv(o);
      csv.row({"doc_id", "category", "chunk", "pc1", "pc2"});
      for (std::size_t j = 0; j < pca.points.size(); ++j) {
        const auto& doc = docs[owner[j].first];
        csv.field(doc.id).field(to_string(doc.category)).field(owner[j].second + 1)
            .field(pca.points[j][0]).field(pca.points[j][1]);
        csv.end_row();
      }
    });
    write_file(dir / "pca_summary.csv", [&](std::ostream& o) {
      CsvWriter csv(o);
      csv.row({"component", "explained_variance", "share", "rank_deficient"});
      for (int k = 0; k < 2; ++k) {
        csv.field(k + 1).field(pca.explained_variance[k])
            .field(pca.total_variance > 0.0 ? pca.explained_variance[k] / pca.total_variance : 0.0)
            .field(pca.rank_deficient ? "1" : "0");
        csv.end_row();
      }
    });
  }

  // Authors ranked by mean forward flow.
  write_file(dir / "ff_ranking.csv", [&](std::ostream& o) {
    struct Entry {
      std::string author;
      std::string category;
      double ff = 0.0;
      std::size_t docs = 0;
    };
    std::map<std::pair<std::string, std::string>, Entry> by_author;
    for (std::size_t i = 0; i < n_docs; ++i) {
      if (std::isnan(m[i].ff)) continue;
      auto& e = by_author[{docs[i].author, std::string(to_string(docs[i].category))}];
      e.author = docs[i].author;
      e.category = to_string(docs[i].category);
      e.ff += m[i].ff;
      ++e.docs;
    }
    std::vector<Entry> entries;
    for (auto& [key, e] : by_author) {
      e.ff /= static_cast<double>(e.docs);
      entries.push_back(e);
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.ff > b.ff; });
    CsvWriter csv(o);
    csv.row({"rank", "author", "category", "ff", "docs"});
    for (std::size_t r = 0; r < entries.size(); ++r) {
      csv.field(r + 1).field(entries[r].author).field(entries[r].category).field(entries[r].ff)
          .field(entries[r].docs);
      csv.end_row();
    }
  });
  write_file(dir / "skipped.csv", [&](std::ostream& o) {
    CsvWriter csv(o);
    csv.row({"doc_id", "measure", "reason"});
    for (std::size_t i = 0; i < n_docs; ++i) {
      for (const auto& [what, why] : m[i].skipped) {
        csv.field(docs[i].id).field(what).field(why);
        csv.end_row();
      }
    }
  });
}

}  // namespace litstyle::cli::detail
