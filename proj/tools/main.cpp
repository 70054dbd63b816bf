// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <cstdint>
#include <string>

#include "ccmsynth/problem.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ccmsynth — contact-aided compliant mechanism synthesis"};
  app.require_subcommand(1);

  std::string spec_file, design_file;
  std::uint64_t seed = 0;
  int max_evals = 0;
  ccm::RunOverrides ov;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Override the search seed");
    cmd->add_option("--max-evals", max_evals, "Override the evaluation budget");
    cmd->add_option("--mesh-scale", ov.mesh_scale, "Mesh refinement multiplier")
        ->check(CLI::PositiveNumber);
    cmd->add_option_function<int>(
        "--gauss-points", [&](int v) { ov.gauss_points = v; },
        "Gauss points per triangle (1, 3, 7, 25)");
    cmd->add_option_function<int>("--beta", [&](int v) { ov.beta = v; },
                                  "Boundary smoothing steps");
    cmd->add_flag("--dry-run", ov.dry_run, "Validate the spec and emit the initial topology only");
    cmd->add_flag("--dump-displacements", ov.dump_displacements,
                  "Write per-load-step displacement CSVs");
    cmd->add_option("--out-dir", ov.out_dir, "Artifact directory");
  };

  CLI::App* synth = app.add_subcommand("synth", "Run topology synthesis from a problem spec");
  synth->add_option("spec", spec_file, "Problem spec file")->required();
  add_common(synth);

  CLI::App* analyze = app.add_subcommand("analyze", "Analyze a single design vector");
  analyze->add_option("spec", spec_file, "Problem spec file")->required();
  analyze->add_option("design", design_file, "Design vector file")->required();
  add_common(analyze);

  CLI11_PARSE(app, argc, argv);

  if (synth->count("--seed") || analyze->count("--seed")) ov.seed = seed;
  if (synth->count("--max-evals") || analyze->count("--max-evals")) ov.max_evals = max_evals;

  if (app.got_subcommand(synth)) return ccm::run_synthesis(spec_file, ov);
  return ccm::analyze_candidate(spec_file, design_file, ov);
}
