#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"

namespace litstyle::cli {

enum class Stage { ingest, topics, sentiment, complexity, classify, report };

std::string_view stage_name(Stage stage);

// Config keys whose values a stage's outputs depend on, upstream included.
std::vector<std::string> stage_keys(Stage stage);

struct Context {
  RunConfig config;
  std::filesystem::path out;
  bool force = false;
  std::size_t jobs = 1;
  std::ostream* progress = nullptr;  // human-readable notes; may be null
};

// Checks that every input file the stages need exists, before any work.
// Throws Errc::io naming the first missing path.
void preflight(const Context& ctx, std::span<const Stage> stages);

// Runs one stage: verifies upstream outputs exist and match the current
// configuration (Errc::stale_cache otherwise, unless ctx.force), refuses to
// overwrite outputs produced under a different configuration (same rule),
// writes the stage directory and appends a line to <out>/run.log.
void run_stage(const Context& ctx, Stage stage);

}  // namespace litstyle::cli
