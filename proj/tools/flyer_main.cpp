// Copyright 2026 The Flyer MRAC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "flyer/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Adaptive hover-control simulator for a flapping-wing flyer"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int workers = 1;
  std::uint64_t seed_base = 0;
  std::string controller = "adaptive";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON run configuration")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", out_dir, "output directory (default: config output_dir)");
  };
  auto add_batch = [&](CLI::App* cmd) {
    cmd->add_option("--parallel", workers, "worker threads for the trial batch")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed-base", seed_base, "first trial seed");
  };

  CLI::App* certify = app.add_subcommand("certify", "certify gains and solve for P");
  add_common(certify);
  CLI::App* simulate = app.add_subcommand("simulate", "run one controller arm");
  add_common(simulate);
  add_batch(simulate);
  simulate->add_option("--controller", controller, "adaptive | baseline")
      ->check(CLI::IsMember({"adaptive", "baseline"}));
  CLI::App* compare = app.add_subcommand("compare", "paired adaptive vs baseline batches");
  add_common(compare);
  add_batch(compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : flyer::kExitValidation;
  }

  try {
    flyer::RunConfig config = config_path.empty() ? flyer::DefaultConfig()
                                                  : flyer::LoadConfig(config_path);
    if (seed_base != 0) config.seed_base = seed_base;
    flyer::CommandOptions opts;
    opts.out_dir = out_dir.empty() ? config.output_dir : out_dir;
    opts.workers = workers;

    if (certify->parsed()) return flyer::CmdCertify(config, opts, std::cout);
    if (simulate->parsed()) {
      const auto kind = controller == "baseline" ? flyer::ControllerKind::kBaseline
                                                 : flyer::ControllerKind::kAdaptive;
      return flyer::CmdSimulate(config, kind, opts, std::cout);
    }
    return flyer::CmdCompare(config, opts, std::cout);
  } catch (const flyer::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return flyer::kExitValidation;
  } catch (const flyer::ShapeError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return flyer::kExitValidation;
  } catch (const flyer::CertificationError& e) {
    std::cerr << "certification failed: " << e.what() << '\n';
    return flyer::kExitCertification;
  } catch (const flyer::DivergenceError& e) {
    std::cerr << "diverged: " << e.what() << '\n';
    return flyer::kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return flyer::kExitValidation;
  }
}
