#pragma once

#include <string_view>

// Text assets compiled into the library. Each can be overridden by a file.
namespace litstyle::assets {

std::string_view stopwords();
std::string_view lexicon();  // word<TAB>lemma<TAB>pos
std::string_view positive();
std::string_view negative();
std::string_view happiness();
std::string_view fear();

}  // namespace litstyle::assets
