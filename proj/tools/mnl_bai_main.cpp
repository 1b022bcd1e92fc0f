// Command-line front end; talks to the library exclusively through the C API.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mnlbai.h"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int fail(mnlbai_status status) {
  std::cerr << "error (" << mnlbai_status_name(status) << "): " << mnlbai_last_error()
            << std::endl;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best-arm identification under linear MNL preference feedback"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_dir = "out";
  bool full_scale = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 0;
  auto* run = app.add_subcommand("run", "Run an experiment spec");
  run->add_option("--spec", spec_path, "Experiment spec JSON file")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--full-scale", full_scale, "Paper-scale instance angle and step budget");
  run->add_option("--seed", seed, "Override the spec's base seed")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--jobs", jobs, "Worker threads (default: hardware concurrency)");

  std::string instance_path;
  double epsilon = 0.1;
  auto* lower = app.add_subcommand("lower-bound", "Evaluate the identification lower bound");
  lower->add_option("--instance", instance_path, "Instance JSON file")->required();
  lower->add_option("--epsilon", epsilon, "Perturbation slack (> 0)");

  auto* verify = app.add_subcommand("verify", "Run the fast property-check subset");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    const std::string spec = read_file(spec_path);
    char* summary = nullptr;
    const mnlbai_status status =
        mnlbai_run_experiment(spec.c_str(), out_dir.c_str(), jobs, full_scale ? 1 : 0,
                              seed_set ? 1 : 0, seed, &summary);
    if (status != MNLBAI_OK) return fail(status);
    std::cout << summary << std::endl;
    mnlbai_string_free(summary);
    return 0;
  }

  if (lower->parsed()) {
    const std::string instance = read_file(instance_path);
    char* report = nullptr;
    const mnlbai_status status =
        mnlbai_lower_bound_json(instance.c_str(), epsilon, &report);
    if (status != MNLBAI_OK) return fail(status);
    std::cout << report << std::endl;
    mnlbai_string_free(report);
    return 0;
  }

  if (verify->parsed()) {
    int32_t failed = 0;
    char* report = nullptr;
    const mnlbai_status status = mnlbai_verify(&failed, &report);
    if (status != MNLBAI_OK) return fail(status);
    std::cout << report;
    std::cout << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed")
              << std::endl;
    mnlbai_string_free(report);
    return failed == 0 ? 0 : 1;
  }

  return 0;
}
