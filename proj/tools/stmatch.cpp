#include "stmatch/cli.hpp"
#include "stmatch/errors.hpp"
#include "stmatch/scoring.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string variant = "st";
  std::string output_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t workers = 0;
  bool geojson = false;
};

stmatch::RunConfig effective_config(const GlobalArgs &args) {
  stmatch::RunConfig config = stmatch::load_run_config(args.config_path);
  if (!args.output_dir.empty())
    config.output_dir = args.output_dir;
  if (args.seed_set)
    config.seed = args.seed;
  if (args.workers > 0)
    config.workers = args.workers;
  return config;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Map matching for GPS trajectories on a road network"};
  app.require_subcommand(1);

  GlobalArgs args;
  app.add_option("--config", args.config_path, "JSON run configuration")
      ->required();
  app.add_option("--output-dir", args.output_dir,
                 "override the configured output directory");
  app.add_option("--seed", args.seed, "override the sampling seed")
      ->each([&](const std::string &) { args.seed_set = true; });
  app.add_option("--workers", args.workers, "override the worker count");

  CLI::App *preprocess =
      app.add_subcommand("preprocess", "filter raw trajectories");
  CLI::App *downsample =
      app.add_subcommand("downsample", "thin trajectories to a low frequency");
  CLI::App *train =
      app.add_subcommand("train-scores", "accumulate historical edge usage");
  CLI::App *match = app.add_subcommand("match", "match trajectories to the network");
  match->add_option("--variant", args.variant, "st, modified or stb")
      ->check(CLI::IsMember({"st", "modified", "stb"}));
  match->add_flag("--geojson", args.geojson, "also write matched routes as GeoJSON");

  CLI::App *compare =
      app.add_subcommand("compare", "compare two match result directories");
  std::string dir_a, dir_b, dir_ref;
  bool paired = false;
  compare->add_option("dir_a", dir_a, "first match output directory")->required();
  compare->add_option("dir_b", dir_b, "second match output directory")->required();
  compare->add_option("reference", dir_ref,
                      "reference match directory for the overlap table");
  compare->add_flag("--paired", paired, "use the paired t-test");

  CLI::App *stats = app.add_subcommand("network-stats", "describe the network");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    stmatch::RunConfig config = effective_config(args);
    if (preprocess->parsed())
      return stmatch::cmd_preprocess(config);
    if (downsample->parsed())
      return stmatch::cmd_downsample(config);
    if (train->parsed())
      return stmatch::cmd_train_scores(config);
    if (match->parsed())
      return stmatch::cmd_match(config, stmatch::variant_from_string(args.variant),
                                args.geojson);
    if (compare->parsed())
      return stmatch::cmd_compare(config, dir_a, dir_b, dir_ref, paired);
    if (stats->parsed())
      return stmatch::cmd_network_stats(config);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
