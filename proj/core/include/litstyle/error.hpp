#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace litstyle {

enum class Errc {
  invalid_argument,
  io,
  parse,
  empty_corpus,
  short_text,
  all_oov,
  zero_vector,
  empty_input,
  undefined_ratio,
  chapterless,
  unnormalized,
  empty_vocabulary,
  singular,
  divergence,
  dimension_mismatch,
  stale_cache,
  config,
};

std::string_view to_string(Errc code);

// Every failure raised by the library carries one of the codes above so that
// callers (and tests) can branch on the kind of failure, not the message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace litstyle
