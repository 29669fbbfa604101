#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "litstyle/error.hpp"
#include "pipeline.hpp"

namespace {

using litstyle::Errc;
using litstyle::cli::Stage;

int exit_code(Errc code) {
  switch (code) {
    case Errc::config: return 3;
    case Errc::io:
    case Errc::parse: return 4;
    case Errc::stale_cache: return 5;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"litstyle: stylometric analysis of a literary corpus"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  long long seed = -1;
  std::size_t jobs = 0;
  bool force = false;
  bool quiet = false;
  std::vector<std::string> overrides;
  app.add_option("-c,--config", config_path, "key = value configuration file");
  app.add_option("--seed", seed, "random seed (default 1)");
  app.add_option("--out", out, "output directory");
  app.add_option("-j,--jobs", jobs, "worker threads");
  app.add_flag("--force", force, "replace outputs cached under a different configuration");
  app.add_flag("-q,--quiet", quiet, "no progress notes on stderr");
  app.add_option("--set", overrides, "override one config key: --set key=value")->type_name("KEY=VALUE");

  struct Command {
    const char* name;
    const char* help;
    std::vector<Stage> stages;
  };
  const std::vector<Command> commands = {
      {"ingest", "read the manifest, tokenize and segment the texts", {Stage::ingest}},
      {"topics", "fit topic models and infer book and chapter distributions", {Stage::topics}},
      {"sentiment", "score affective polarity and emotions", {Stage::sentiment}},
      {"complexity", "entropy decay, dispersion, forward flow, harmony and variety", {Stage::complexity}},
      {"classify", "cross-validated category and author classification", {Stage::classify}},
      {"report", "render figures and tables from the cached stage outputs", {Stage::report}},
      {"all", "run every stage in order",
       {Stage::ingest, Stage::topics, Stage::sentiment, Stage::complexity, Stage::classify, Stage::report}},
  };
  for (const auto& cmd : commands) app.add_subcommand(cmd.name, cmd.help);

  CLI11_PARSE(app, argc, argv);

  const Command* chosen = nullptr;
  for (const auto& cmd : commands) {
    if (app.got_subcommand(cmd.name)) chosen = &cmd;
  }

  try {
    litstyle::cli::Context ctx;
    if (!config_path.empty()) ctx.config.load_file(config_path);
    for (const auto& o : overrides) ctx.config.set_from_assignment(o);
    if (seed >= 0) ctx.config.set("seed", std::to_string(seed));
    if (!out.empty()) ctx.config.set("output_dir", std::filesystem::absolute(out).string());
    if (jobs > 0) ctx.config.set("jobs", std::to_string(jobs));
    ctx.out = ctx.config.get_path("output_dir");
    ctx.jobs = std::max<std::size_t>(1, ctx.config.get_size("jobs"));
    ctx.force = force;
    ctx.progress = quiet ? nullptr : &std::cerr;

    litstyle::cli::preflight(ctx, chosen->stages);
    std::filesystem::create_directories(ctx.out);
    for (Stage s : chosen->stages) litstyle::cli::run_stage(ctx, s);
  } catch (const litstyle::Error& e) {
    std::cerr << "litstyle: " << litstyle::to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "litstyle: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
