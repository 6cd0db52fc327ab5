#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "riskvec/errors.hpp"
#include "riskvec/pipeline.hpp"
#include "riskvec/synth.hpp"

namespace {

using riskvec::pipeline::PipelineConfig;
using riskvec::pipeline::Written;

int run_command(const std::string& name, const PipelineConfig& cfg) {
  using namespace riskvec::pipeline;
  Written written;
  if (name == "run")
    written = run_pipeline(cfg);
  else if (name == "ingest")
    written = run_ingest_stage(cfg);
  else if (name == "vectors")
    written = run_vectors_stage(cfg);
  else if (name == "risk")
    written = run_risk_stage(cfg);
  else if (name == "classify")
    written = run_classify_stage(cfg);
  else if (name == "features")
    written = run_features_stage(cfg);
  else if (name == "regress")
    written = run_regress_stage(cfg);
  for (const auto& path : written)
    std::cout << "wrote " << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"movement risk pipeline over geo-tagged posts"};
  app.set_version_flag(
      "--version", std::string("riskvec ") + RISKVEC_VERSION +
                       " (config schema " +
                       std::to_string(riskvec::pipeline::kSchemaVersion) + ")");
  app.require_subcommand(1);

  std::string config_arg;
  std::optional<std::uint64_t> seed_arg;
  std::string out_arg;

  auto add_pipeline_cmd = [&](const char* name, const char* desc) {
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_arg, "pipeline config file")
        ->required();
    sub->add_option("--seed", seed_arg, "override the config seed");
    sub->add_option("--out", out_arg, "override the config out_dir");
    return sub;
  };
  add_pipeline_cmd("run", "full pipeline, one atomic output bundle");
  add_pipeline_cmd("ingest", "parse posts, screen users, build the peer graph");
  add_pipeline_cmd("vectors", "mean movement vectors for the screened users");
  add_pipeline_cmd("risk", "risk levels and RBQ per user");
  add_pipeline_cmd("classify", "label every post in the corpus");
  add_pipeline_cmd("features", "join RBQ, labels and peers into users.csv");
  add_pipeline_cmd("regress", "OLS of RBQ on content features");

  riskvec::synth::ScenarioSpec spec;
  auto* synth =
      app.add_subcommand("synth", "generate a synthetic scenario with ground truth");
  synth->add_option("--out", out_arg, "target directory")->required();
  synth->add_option("--seed", seed_arg, "scenario seed")->required();
  synth->add_option("--flee", spec.n_flee, "users fleeing the high-risk core");
  synth->add_option("--seek", spec.n_seek, "users moving into the core");
  synth->add_option("--stationary", spec.n_stationary, "users who never move");
  synth->add_option("--walk", spec.n_random_walk, "users on a random walk");
  synth->add_option("--rings", spec.n_zone_rings, "evacuation zone rings (0-3)");
  bool no_flood = false;
  synth->add_flag("--no-flood", no_flood, "drop the flood overlay");
  synth->add_option("--p-mention", spec.p_mention,
                    "per-post probability of mentioning another user");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (synth->parsed()) {
      spec.flood = !no_flood;
      auto scenario = riskvec::synth::synthesize_scenario(spec, *seed_arg);
      riskvec::synth::write_scenario(scenario, out_arg);
      for (const char* name :
           {"posts.jsonl", "evac.geojson", "flood.geojson",
            "official_corpus.txt", "ground_truth.json", "pipeline.cfg"})
        std::cout << "wrote " << (std::filesystem::path(out_arg) / name).string()
                  << "\n";
      return 0;
    }
    auto cfg = riskvec::pipeline::load_config(config_arg);
    if (seed_arg) cfg.seed = *seed_arg;
    if (!out_arg.empty()) cfg.out_dir = out_arg;
    return run_command(app.get_subcommands().front()->get_name(), cfg);
  } catch (const riskvec::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == riskvec::Error::Kind::validation ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
