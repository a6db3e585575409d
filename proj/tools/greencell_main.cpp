// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "greencell/config.hpp"
#include "greencell/errors.hpp"
#include "greencell/harness.hpp"
#include "greencell/kernels.hpp"

namespace {

// exit codes: 0 ok, 1 check failure, 2 infeasible, 3 solver failure,
// 4 configuration / input error
constexpr int kExitInfeasible = 2;
constexpr int kExitSolverFailure = 3;
constexpr int kExitConfigError = 4;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> realizations;
  std::vector<double> lambda_list;
};

greencell::RunConfig effective_config(const CommonFlags& flags) {
  greencell::RunConfig cfg;
  if (!flags.config_path.empty()) cfg = greencell::load_config(flags.config_path);
  // flags win over file values
  if (flags.seed) cfg.scenario.seed = *flags.seed;
  if (flags.out_dir) cfg.out_dir = *flags.out_dir;
  if (flags.realizations) cfg.realizations = *flags.realizations;
  if (!flags.lambda_list.empty()) cfg.scenario.lambda_list = flags.lambda_list;
  cfg.validate();
  return cfg;
}

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "run configuration file (JSON)");
  cmd->add_option("--seed", flags.seed, "override scenario.seed");
  cmd->add_option("--out", flags.out_dir, "override output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"base-station sleep scheduling via reweighted assignment LPs"};
  app.require_subcommand(1);

  CommonFlags flags;
  bool enable_bruteforce = false;
  bool strict = false;
  bool inject_gradient_error = false;

  auto* solve = app.add_subcommand("solve", "solve one snapshot, write trace and assignment");
  add_common_flags(solve, flags);

  auto* sweep = app.add_subcommand("sweep", "sweep load levels with multiple realizations");
  add_common_flags(sweep, flags);
  sweep->add_option("--lambda-list", flags.lambda_list,
                    "mean user counts to sweep (comma separated)")
      ->delimiter(',');
  sweep->add_option("--realizations", flags.realizations,
                    "realizations per load level");
  sweep->add_flag("--enable-bruteforce", enable_bruteforce,
                  "also run the exhaustive oracle (desk-scale instances only)");

  auto* validate = app.add_subcommand("validate", "run the invariant suite");
  add_common_flags(validate, flags);
  validate->add_flag("--strict", strict, "tighten numeric tolerances tenfold");
  validate
      ->add_flag("--inject-gradient-error", inject_gradient_error,
                 "negative control: corrupt the gradient so its check fails")
      ->group("");  // hidden from --help

  auto* generate = app.add_subcommand("generate", "emit topology and user files");
  add_common_flags(generate, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    const greencell::RunConfig cfg = effective_config(flags);
    if (solve->parsed()) return greencell::cmd_solve(cfg);
    if (sweep->parsed()) {
      greencell::SweepOptions options;
      options.enable_bruteforce = enable_bruteforce;
      return greencell::cmd_sweep(cfg, options);
    }
    if (validate->parsed()) {
      greencell::ValidateArgs args;
      args.strict = strict;
      args.inject_gradient_error = inject_gradient_error;
      std::cout << "kernel backend: "
                << greencell::kernels::backend_name(
                       greencell::kernels::active_backend())
                << '\n';
      return greencell::cmd_validate(cfg, args);
    }
    if (generate->parsed()) return greencell::cmd_generate(cfg);
  } catch (const greencell::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const greencell::InvalidInputError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const greencell::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const greencell::SizeLimitError& e) {
    std::cerr << "size limit: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const greencell::SolverFailureError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolverFailure;
  }
  return 0;
}
