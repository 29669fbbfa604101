#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "litstyle/error.hpp"
#include "synth.hpp"

int main(int argc, char** argv) {
  CLI::App app{"litstyle-synth: write the synthetic fixture corpus"};
  std::string dir;
  litstyle::synth::FixtureSpec spec;
  app.add_option("dir", dir, "target directory")->required();
  app.add_option("--seed", spec.seed, "generator seed");
  app.add_option("--authors", spec.authors_per_category, "authors per category");
  app.add_option("--docs", spec.docs_per_author, "documents per author");
  app.add_option("--chapters", spec.chapters, "chapters per document");
  app.add_option("--sentences", spec.sentences_per_chapter, "sentences per chapter");
  app.add_option("--dim", spec.dim, "embedding dimension");
  CLI11_PARSE(app, argc, argv);
  try {
    const auto files = litstyle::synth::write_fixture_corpus(dir, spec);
    std::cout << files.documents << " documents; config: " << files.config.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "litstyle-synth: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
