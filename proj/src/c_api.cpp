#include "mnlbai.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "mnl/bench.hpp"
#include "mnl/errors.hpp"
#include "mnl/model.hpp"
#include "mnl/runner.hpp"
#include "mnl/theory.hpp"
#include "mnl/verify.hpp"
#include "nlohmann/json.hpp"

struct mnlbai_instance {
  mnl::Instance impl;
};

struct mnlbai_result {
  mnl::RunResult impl;
  int num_arms;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
mnlbai_status wrap(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return MNLBAI_OK;
  } catch (const mnl::InvalidInput& e) {
    g_last_error = e.what();
    return MNLBAI_ERR_INVALID_ARGUMENT;
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return MNLBAI_ERR_PARSE;
  } catch (const mnl::IoError& e) {
    g_last_error = e.what();
    return MNLBAI_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MNLBAI_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return MNLBAI_ERR_INTERNAL;
  }
}

mnl::RunConfig to_run_config(const mnlbai_run_config& cfg) {
  mnl::RunConfig out;
  out.explore_steps = cfg.explore_steps;
  out.lambda = cfg.lambda;
  out.ridge = cfg.ridge;
  out.kappa_alpha = cfg.kappa_alpha;
  out.batch_alpha = cfg.batch_alpha;
  out.max_steps = cfg.max_steps;
  switch (cfg.selection_rule) {
    case MNLBAI_SELECTION_GAP_GREEDY: out.selection_rule = mnl::SelectionRule::GapGreedy; break;
    case MNLBAI_SELECTION_ARM_GREEDY: out.selection_rule = mnl::SelectionRule::ArmGreedy; break;
    case MNLBAI_SELECTION_RANDOM: out.selection_rule = mnl::SelectionRule::Random; break;
    default: throw mnl::InvalidInput("unknown selection rule code");
  }
  switch (cfg.feedback) {
    case MNLBAI_FEEDBACK_MNL: out.feedback = mnl::FeedbackModel::Mnl; break;
    case MNLBAI_FEEDBACK_GAUSSIAN_RUM: out.feedback = mnl::FeedbackModel::GaussianRum; break;
    default: throw mnl::InvalidInput("unknown feedback code");
  }
  out.rum_sigma = cfg.rum_sigma;
  out.record_trajectory = cfg.record_trajectory != 0;
  return out;
}

}  // namespace

extern "C" {

const char* mnlbai_status_name(mnlbai_status status) {
  switch (status) {
    case MNLBAI_OK: return "ok";
    case MNLBAI_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case MNLBAI_ERR_PARSE: return "parse-error";
    case MNLBAI_ERR_IO: return "io-error";
    case MNLBAI_ERR_INTERNAL: return "internal-error";
    default: return "unknown-status";
  }
}

const char* mnlbai_last_error(void) { return g_last_error.c_str(); }

void mnlbai_string_free(char* s) { std::free(s); }

mnlbai_status mnlbai_instance_parse_json(const char* json, mnlbai_instance** out) {
  return wrap([&] {
    if (json == nullptr || out == nullptr) throw mnl::InvalidInput("null argument");
    auto handle = std::make_unique<mnlbai_instance>();
    handle->impl = mnl::Instance::from_json(json);
    *out = handle.release();
  });
}

mnlbai_status mnlbai_instance_standard(int32_t d, double omega, int32_t k, double delta,
                                       mnlbai_instance** out) {
  return wrap([&] {
    if (out == nullptr) throw mnl::InvalidInput("null argument");
    auto handle = std::make_unique<mnlbai_instance>();
    handle->impl = mnl::standard_instance(d, omega, k, delta);
    *out = handle.release();
  });
}

mnlbai_status mnlbai_instance_to_json(const mnlbai_instance* instance, char** out_json) {
  return wrap([&] {
    if (instance == nullptr || out_json == nullptr) throw mnl::InvalidInput("null argument");
    *out_json = dup_string(instance->impl.to_json());
  });
}

int32_t mnlbai_instance_arm_count(const mnlbai_instance* instance) {
  return instance != nullptr ? instance->impl.num_arms() : -1;
}

int32_t mnlbai_instance_dim(const mnlbai_instance* instance) {
  return instance != nullptr ? instance->impl.dim() : -1;
}

int32_t mnlbai_instance_best_arm(const mnlbai_instance* instance) {
  if (instance == nullptr) return -1;
  try {
    return mnl::best_arm(instance->impl);
  } catch (...) {
    return -1;
  }
}

void mnlbai_instance_free(mnlbai_instance* instance) { delete instance; }

void mnlbai_run_config_init(mnlbai_run_config* cfg) {
  if (cfg == nullptr) return;
  const mnl::RunConfig defaults;
  cfg->explore_steps = defaults.explore_steps;
  cfg->lambda = defaults.lambda;
  cfg->ridge = defaults.ridge;
  cfg->kappa_alpha = defaults.kappa_alpha;
  cfg->batch_alpha = defaults.batch_alpha;
  cfg->max_steps = defaults.max_steps;
  cfg->selection_rule = MNLBAI_SELECTION_GAP_GREEDY;
  cfg->feedback = MNLBAI_FEEDBACK_MNL;
  cfg->rum_sigma = defaults.rum_sigma;
  cfg->record_trajectory = 0;
}

mnlbai_status mnlbai_run(const mnlbai_instance* instance, const mnlbai_run_config* cfg,
                         int32_t strategy, uint64_t seed, mnlbai_result** out) {
  return wrap([&] {
    if (instance == nullptr || cfg == nullptr || out == nullptr)
      throw mnl::InvalidInput("null argument");
    const mnl::RunConfig run_config = to_run_config(*cfg);
    mnl::Rng rng(seed);
    auto handle = std::make_unique<mnlbai_result>();
    switch (strategy) {
      case MNLBAI_STRATEGY_STATIC:
        handle->impl = mnl::run_static(instance->impl, run_config, rng);
        break;
      case MNLBAI_STRATEGY_ADAPTIVE:
        handle->impl = mnl::run_adaptive(instance->impl, run_config, rng);
        break;
      case MNLBAI_STRATEGY_RANDOM:
        handle->impl = mnl::run_random(instance->impl, run_config, rng);
        break;
      default:
        throw mnl::InvalidInput("unknown strategy code");
    }
    handle->num_arms = instance->impl.num_arms();
    *out = handle.release();
  });
}

int32_t mnlbai_result_returned_arm(const mnlbai_result* result) {
  return result != nullptr ? result->impl.returned_arm : -1;
}

uint64_t mnlbai_result_tau(const mnlbai_result* result) {
  return result != nullptr ? result->impl.tau : 0;
}

int32_t mnlbai_result_correct(const mnlbai_result* result) {
  return result != nullptr && result->impl.correct ? 1 : 0;
}

int32_t mnlbai_result_truncated(const mnlbai_result* result) {
  return result != nullptr && result->impl.truncated ? 1 : 0;
}

mnlbai_status mnlbai_result_to_json(const mnlbai_result* result, int32_t include_trajectory,
                                    char** out_json) {
  return wrap([&] {
    if (result == nullptr || out_json == nullptr) throw mnl::InvalidInput("null argument");
    nlohmann::json j;
    j["returned_arm"] = result->impl.returned_arm;
    j["tau"] = result->impl.tau;
    j["correct"] = result->impl.correct;
    j["truncated"] = result->impl.truncated;
    j["pull_counts"] = result->impl.pull_counts;
    if (!result->impl.batches.empty()) {
      auto batches = nlohmann::json::array();
      for (const auto& b : result->impl.batches) {
        nlohmann::json bj;
        bj["j"] = b.index;
        bj["n_j"] = b.length;
        bj["rho_j"] = b.rho_final;
        bj["survivors"] = b.survivors;
        batches.push_back(std::move(bj));
      }
      j["batches"] = std::move(batches);
    }
    if (include_trajectory != 0 && !result->impl.trajectory.empty())
      j["trajectory"] = result->impl.trajectory;
    *out_json = dup_string(j.dump());
  });
}

void mnlbai_result_free(mnlbai_result* result) { delete result; }

mnlbai_status mnlbai_lower_bound_json(const char* instance_json, double epsilon,
                                      char** out_report_json) {
  return wrap([&] {
    if (instance_json == nullptr || out_report_json == nullptr)
      throw mnl::InvalidInput("null argument");
    const mnl::Instance instance = mnl::Instance::from_json(instance_json);
    const auto report = mnl::lower_bound_value(instance, epsilon, instance.delta);
    *out_report_json = dup_string(report.to_json());
  });
}

mnlbai_status mnlbai_run_experiment(const char* spec_json, const char* out_dir, int32_t jobs,
                                    int32_t full_scale, int32_t has_seed_override,
                                    uint64_t seed_override, char** out_summary_json) {
  return wrap([&] {
    if (spec_json == nullptr || out_dir == nullptr || out_summary_json == nullptr)
      throw mnl::InvalidInput("null argument");
    mnl::ExperimentSpec spec = mnl::ExperimentSpec::from_json(spec_json);
    if (full_scale != 0) spec = mnl::full_scale_variant(std::move(spec));
    if (has_seed_override != 0) spec.base_seed = seed_override;
    const mnl::ExperimentOutput output = mnl::run_experiment(spec, out_dir, jobs);

    nlohmann::json summary;
    summary["csv_path"] = output.csv_path;
    summary["raw_path"] = output.raw_path;
    if (!output.svg_path.empty()) summary["svg_path"] = output.svg_path;
    if (!output.curves_path.empty()) summary["curves_path"] = output.curves_path;
    auto rows = nlohmann::json::array();
    for (const auto& row : output.rows) {
      nlohmann::json rj;
      rj["strategy"] = row.strategy;
      rj["grid_axis"] = row.grid_axis;
      rj["grid_value"] = row.grid_value;
      rj["n_seeds"] = row.n_seeds;
      rj["mean_tau"] = row.mean_tau;
      rj["stderr_tau"] = row.stderr_tau;
      rj["frac_correct"] = row.frac_correct;
      rj["pull_fracs"] = row.pull_fracs;
      rows.push_back(std::move(rj));
    }
    summary["rows"] = std::move(rows);
    *out_summary_json = dup_string(summary.dump());
  });
}

mnlbai_status mnlbai_verify(int32_t* out_failed, char** out_report) {
  return wrap([&] {
    if (out_failed == nullptr || out_report == nullptr)
      throw mnl::InvalidInput("null argument");
    const auto checks = mnl::run_self_checks();
    int failed = 0;
    std::string report;
    for (const auto& check : checks) {
      report += check.passed ? "[PASS] " : "[FAIL] ";
      report += check.name;
      if (!check.detail.empty()) {
        report += " (";
        report += check.detail;
        report += ")";
      }
      report += '\n';
      if (!check.passed) ++failed;
    }
    *out_failed = failed;
    *out_report = dup_string(report);
  });
}

}  // extern "C"
