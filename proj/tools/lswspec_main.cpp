#include <CLI11.hpp>

#include <iostream>

#include "lswspec/pipeline.hpp"

namespace {

void add_common_options(CLI::App* cmd, lswspec::RunManifest& m,
                        std::string& manifest_path)
{
  cmd->add_option("--from-manifest", manifest_path,
                  "load all parameters from a manifest file");
  cmd->add_option("--spec", m.spec_path, "spectrum definition file");
  cmd->add_option("--t", m.t, "sample size");
  cmd->add_option("--seed", m.seed, "random seed");
  cmd->add_option("--reps", m.replications, "Monte Carlo replications");
  cmd->add_option("--out", m.output_dir, "output directory");
  cmd->add_option("--scale", m.scales, "estimation scales (negative)");
  cmd->add_option("--points", m.points, "number of estimation points");
  cmd->add_option("--eta", m.eta_scale, "threshold multiplier");
  cmd->add_option("--kt", m.k_t, "threshold growth factor (default log2 T)");
  cmd->add_option("--delta", m.delta_points, "minimum interval length");
  cmd->add_option("--ratio", m.grid_ratio, "candidate grid growth factor");
  cmd->add_option("--c2", m.c2, "regularization constant (default: estimated)");
  cmd->add_option("--mt", m.m_t, "plug-in covariance truncation lag");
  cmd->add_option("--window", m.window_len, "plug-in covariance window");
  cmd->add_option("--variance", m.variance_mode, "variance source: exact|plugin");
  cmd->add_option("--threads", m.threads, "worker threads for replications");
  cmd->add_option("--maxdepth", m.max_depth, "deepest scale for identity checks");
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"simulation and pointwise adaptive estimation of evolutionary "
               "wavelet spectra"};
  app.require_subcommand(1);

  lswspec::RunManifest m;
  std::string manifest_path;

  auto* sim = app.add_subcommand("simulate", "draw one sample path");
  auto* est = app.add_subcommand("estimate", "estimate a spectrum from a series");
  auto* mc = app.add_subcommand("montecarlo", "replicate simulate+estimate");
  auto* ident = app.add_subcommand("identities", "run the self-checks");

  for (auto* cmd : {sim, est, mc, ident})
    add_common_options(cmd, m, manifest_path);
  est->add_option("--in", m.input_path, "input series CSV (column 'x')");
  est->add_flag("--dump-periodogram", m.dump_periodogram,
                "also write the raw/corrected periodogram");
  ident->add_option("--inject-fault", m.inject_fault,
                    "corrupt a table to exercise the failure path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : lswspec::kExitInputError;
  }

  std::string command;
  if (sim->parsed())
    command = "simulate";
  else if (est->parsed())
    command = "estimate";
  else if (mc->parsed())
    command = "montecarlo";
  else
    command = "identities";

  if (!manifest_path.empty()) {
    try {
      lswspec::RunManifest loaded = lswspec::RunManifest::read(manifest_path);
      if (loaded.command != command) {
        std::cerr << "error: manifest is for command '" << loaded.command
                  << "', not '" << command << "'\n";
        return lswspec::kExitInputError;
      }
      // explicit flags win over manifest values
      const lswspec::RunManifest cli = m;
      m = loaded;
      const auto* active =
        sim->parsed() ? sim : est->parsed() ? est : mc->parsed() ? mc : ident;
      if (active->count("--out"))
        m.output_dir = cli.output_dir;
      if (active->count("--threads"))
        m.threads = cli.threads;
      if (active->count("--seed"))
        m.seed = cli.seed;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return lswspec::kExitInputError;
    }
  }
  m.command = command;
  if (m.output_dir.empty()) {
    std::cerr << "error: --out is required\n";
    return lswspec::kExitInputError;
  }
  return lswspec::run_command(m, std::cout);
}
