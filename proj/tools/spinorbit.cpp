// Command line front-end: simulate, chsh, fringes, render, reproduce-paper.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "spinorbit/commands.hpp"
#include "spinorbit/errors.hpp"

namespace fs = std::filesystem;
using namespace spinorbit;

int main(int argc, char** argv) {
  CLI::App app{"Spin-orbit hybrid entanglement simulator and CHSH analysis"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  auto add_common = [&](CLI::App* cmd, bool with_config) {
    if (with_config) cmd->add_option("--config", config_path, "YAML run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--seed", seed, "Random seed (overrides the config)");
    cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  };

  auto* simulate = app.add_subcommand("simulate", "Simulate coincidence counts over a (theta, chi) grid");
  add_common(simulate, true);

  std::string counts_path;
  auto* chsh = app.add_subcommand("chsh", "CHSH S(chi) scan from a counts CSV");
  add_common(chsh, true);
  chsh->add_option("counts", counts_path, "Counts CSV")->required()->check(CLI::ExistingFile);

  bool free_frequency = false;
  auto* fringes = app.add_subcommand("fringes", "Fit fringes C(chi) per polarization angle");
  add_common(fringes, false);
  fringes->add_option("counts", counts_path, "Counts CSV")->required()->check(CLI::ExistingFile);
  fringes->add_flag("--free-frequency", free_frequency, "Diagnostic fit with the fringe frequency left free");

  std::optional<std::string> state_path;
  auto* render = app.add_subcommand("render", "Render intensity and Stokes maps of a spin-orbit mode");
  add_common(render, true);
  render->add_option("--state", state_path, "State file in canonical text form (spin oam re im per line)")
      ->check(CLI::ExistingFile);

  auto* reproduce = app.add_subcommand("reproduce-paper", "Regenerate all fringe, CHSH and field-map data");
  add_common(reproduce, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ErrorClass::config);
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    CommandOptions opts;
    opts.out = out_dir;
    opts.format = format == "json" ? ReportFormat::Json : ReportFormat::Csv;
    opts.seed = seed;

    RunConfig cfg = config_path.empty() ? default_run_config() : load_config(config_path);
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
    if (seed) cfg.experiment.seed = *seed;

    RunManifest manifest;
    manifest.config_yaml = serialize_config(cfg);
    manifest.seed = cfg.experiment.seed;
    auto* cmd = app.get_subcommands().front();
    manifest.command = cmd->get_name();
    if (cmd == simulate) {
      manifest.outputs = cmd_simulate(cfg, opts, std::cerr);
    } else if (cmd == chsh) {
      manifest.outputs = cmd_chsh(counts_path, cfg.chsh, opts, std::cout);
    } else if (cmd == fringes) {
      manifest.outputs = cmd_fringes(counts_path, free_frequency, opts, std::cout);
    } else if (cmd == render) {
      std::optional<fs::path> state_file;
      if (state_path) state_file = *state_path;
      manifest.outputs = cmd_render(cfg, state_file, opts, std::cerr);
    } else if (cmd == reproduce) {
      const RunConfig used = reproduction_config(seed.value_or(20110101));
      manifest.config_yaml = serialize_config(used);
      manifest.seed = used.experiment.seed;
      opts.seed = used.experiment.seed;
      manifest.outputs = cmd_reproduce_paper(opts, std::cerr);
    }
    manifest.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(manifest, opts.out);
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.error_class());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorClass::numerical);
  }
}
