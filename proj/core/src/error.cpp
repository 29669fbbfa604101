#include "litstyle/error.hpp"

namespace litstyle {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::io: return "io";
    case Errc::parse: return "parse";
    case Errc::empty_corpus: return "empty_corpus";
    case Errc::short_text: return "short_text";
    case Errc::all_oov: return "all_oov";
    case Errc::zero_vector: return "zero_vector";
    case Errc::empty_input: return "empty_input";
    case Errc::undefined_ratio: return "undefined_ratio";
    case Errc::chapterless: return "chapterless";
    case Errc::unnormalized: return "unnormalized";
    case Errc::empty_vocabulary: return "empty_vocabulary";
    case Errc::singular: return "singular";
    case Errc::divergence: return "divergence";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::stale_cache: return "stale_cache";
    case Errc::config: return "config";
  }
  return "unknown";
}

}  // namespace litstyle
