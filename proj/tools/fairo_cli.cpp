// Copyright 2026 The fairo Authors.
//
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

// fairo run | compare | sweep

#include <iostream>

#include "CLI11.hpp"
#include "fairo/harness.hpp"

namespace {

void print_error(const std::string& code, const std::string& message) {
  nlohmann::json e{{"error", code}, {"message", message}};
  std::cerr << e.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fairness-aware shared-decision controller: experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one (config, seed) experiment");
  std::string run_config;
  std::optional<std::uint64_t> run_seed;
  std::string run_out;
  std::size_t smoothing = 0;
  run->add_option("--config", run_config, "JSON config file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", run_seed, "Override the config seed");
  run->add_option("--out", run_out, "Output directory (default: $FAIRO_OUT_ROOT or runs/, per run)");
  run->add_option("--smooth", smoothing, "Also write smoothed.csv with this moving-average width");

  auto* cmp = app.add_subcommand("compare", "Compare finished runs");
  std::vector<std::string> runs;
  std::size_t window = 3000;
  std::string cmp_out;
  cmp->add_option("--runs", runs, "Run directories")->required()->check(CLI::ExistingDirectory);
  cmp->add_option("--window", window, "Evaluation window (must match the runs' window)");
  cmp->add_option("--out", cmp_out, "Also write the report CSV here");

  auto* swp = app.add_subcommand("sweep", "Run every configured method over a list of seeds");
  std::string swp_config;
  std::string seeds = "1";
  std::string swp_out;
  swp->add_option("--config", swp_config, "JSON config file")->required()->check(CLI::ExistingFile);
  swp->add_option("--seeds", seeds, "Seeds, e.g. 1..10 or 1,4,9");
  swp->add_option("--out", swp_out, "Output directory (default: $FAIRO_OUT_ROOT/sweep)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (*run) {
      fairo::ExperimentConfig c = fairo::load_config(run_config);
      if (run_seed) c.seed = *run_seed;
      const std::filesystem::path dir = run_out.empty()
                                            ? fairo::output_root() / fairo::default_run_name(c)
                                            : std::filesystem::path(run_out);
      const auto res = fairo::write_run(c, dir, smoothing);
      fairo::write_metrics_text(res.metrics, std::cout);
      std::cout << "wrote " << dir.string() << '\n';
    } else if (*cmp) {
      std::vector<fairo::RunSummary> summaries;
      for (const auto& d : runs) {
        summaries.push_back(fairo::load_run(d));
        const double w = fairo::metric_value(summaries.back().metrics, "window");
        fairo::require(static_cast<std::size_t>(w) <= window, "domain",
                       d + " was evaluated over " + std::to_string(static_cast<std::size_t>(w)) +
                           " ticks, more than --window");
      }
      const auto report = fairo::compare(std::move(summaries));
      fairo::write_metrics_text(report, std::cout);
      if (!cmp_out.empty()) {
        std::ofstream os(cmp_out, std::ios::binary);
        fairo::require(static_cast<bool>(os), "io", "cannot write " + cmp_out);
        fairo::write_metrics_csv(report, os);
      }
    } else if (*swp) {
      const fairo::ExperimentConfig c = fairo::load_config(swp_config);
      const std::filesystem::path root =
          swp_out.empty() ? fairo::output_root() / "sweep" : std::filesystem::path(swp_out);
      const auto agg = fairo::sweep(c, fairo::parse_seeds(seeds), root);
      fairo::write_aggregate_csv(agg, std::cout);
      std::cout << "wrote " << root.string() << '\n';
    }
  } catch (const fairo::Error& e) {
    print_error(e.code(), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
