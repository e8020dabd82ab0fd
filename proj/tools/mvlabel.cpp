#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mvlabel/errors.hpp"
#include "mvlabel/pipeline.hpp"
#include "mvlabel/synth_data.hpp"

namespace {

struct StageFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string llm_mode;
};

void add_stage_flags(CLI::App& cmd, StageFlags& flags) {
  cmd.add_option("--config", flags.config, "Run configuration (JSON)")->required();
  cmd.add_option("--out", flags.out, "Override the output directory");
  cmd.add_option("--seed", flags.seed, "Override the random seed");
  cmd.add_option("--llm-mode", flags.llm_mode, "Override the LLM mode")
      ->check(CLI::IsMember({"live", "fixture", "off"}));
}

mvlabel::RunConfig effective_config(const StageFlags& flags) {
  auto config = mvlabel::load_config(flags.config);
  if (!flags.out.empty()) config.output_dir = flags.out;
  if (flags.seed) config.seed = *flags.seed;
  if (!flags.llm_mode.empty()) config.llm.mode = mvlabel::parse_llm_mode(flags.llm_mode);
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiview clustering of sensor days with language-model cluster labels"};
  app.require_subcommand(1);
  app.fallthrough();
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log stage progress to stderr");

  StageFlags flags;
  auto* run = app.add_subcommand("run", "Run every stage end to end");
  auto* ingest = app.add_subcommand("ingest", "Load and check the dataset");
  auto* cluster = app.add_subcommand("cluster", "Fit per-view K-means models");
  auto* label = app.add_subcommand("label", "Name clusters through the LLM client");
  auto* validate = app.add_subcommand("validate", "Test clusters against clinical scores");
  auto* report = app.add_subcommand("report", "Render report.md and charts");
  for (auto* cmd : {run, ingest, cluster, label, validate, report}) add_stage_flags(*cmd, flags);

  std::string spec_path;
  std::string synth_out;
  std::uint64_t synth_seed = 42;
  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset with planted clusters");
  synth->add_option("--spec", spec_path, "Synthetic spec (JSON); built-in default when omitted");
  synth->add_option("--out", synth_out, "Output CSV path")->required();
  synth->add_option("--seed", synth_seed, "Seed for the built-in spec");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(mvlabel::ExitCode::Config);
  }

  mvlabel::PipelineHooks hooks;
  if (verbose) hooks.log = [](const std::string& m) { std::cerr << "mvlabel: " << m << "\n"; };

  try {
    if (synth->parsed()) {
      const auto spec =
          spec_path.empty() ? mvlabel::default_synth_spec(synth_seed) : mvlabel::load_synth_spec(spec_path);
      const auto out = mvlabel::write_synth(spec, synth_out);
      std::cout << "wrote " << out.csv.string() << ", " << out.registry.string() << ", "
                << out.planted.string() << "\n";
      return 0;
    }
    const auto config = effective_config(flags);
    if (run->parsed()) {
      const auto result = mvlabel::run_all(config, hooks);
      for (const auto& w : result.warnings) std::cerr << "mvlabel: warning: " << w << "\n";
    } else if (ingest->parsed()) {
      mvlabel::stage_ingest(config);
    } else if (cluster->parsed()) {
      mvlabel::stage_cluster(config);
    } else if (label->parsed()) {
      mvlabel::stage_label(config, hooks);
    } else if (validate->parsed()) {
      mvlabel::stage_validate(config);
    } else if (report->parsed()) {
      mvlabel::stage_report(config);
    }
    std::cout << "output: " << config.output_dir.string() << "\n";
    return 0;
  } catch (const mvlabel::Error& e) {
    std::cerr << "mvlabel: error: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "mvlabel: error: " << e.what() << "\n";
    return static_cast<int>(mvlabel::ExitCode::Compute);
  }
}
