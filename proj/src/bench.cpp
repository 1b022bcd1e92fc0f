#include "mnl/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <thread>

#include "mnl/errors.hpp"
#include "nlohmann/json.hpp"

namespace mnl {

namespace fs = std::filesystem;

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Single: return "single";
    case ExperimentKind::SweepD: return "sweep-d";
    case ExperimentKind::SweepK: return "sweep-K";
    case ExperimentKind::Profile: return "profile";
    case ExperimentKind::Robustness: return "robustness";
    case ExperimentKind::Trajectory: return "trajectory";
  }
  throw InternalError("unknown experiment kind");
}

std::string to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::Random: return "random";
    case Strategy::Static: return "static";
    case Strategy::Adaptive: return "adaptive";
  }
  throw InternalError("unknown strategy");
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  if (name == "single") return ExperimentKind::Single;
  if (name == "sweep-d") return ExperimentKind::SweepD;
  if (name == "sweep-K" || name == "sweep-k") return ExperimentKind::SweepK;
  if (name == "profile") return ExperimentKind::Profile;
  if (name == "robustness") return ExperimentKind::Robustness;
  if (name == "trajectory") return ExperimentKind::Trajectory;
  throw InvalidInput("unknown experiment kind: " + name);
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "random") return Strategy::Random;
  if (name == "static") return Strategy::Static;
  if (name == "adaptive") return Strategy::Adaptive;
  throw InvalidInput("unknown strategy: " + name);
}

Instance standard_instance(int d, double omega, int subset_size, double delta) {
  if (d < 2) throw InvalidInput("standard instance requires d >= 2");
  Instance out;
  out.arms = Eigen::MatrixXd::Zero(d + 1, d);
  for (int i = 0; i < d; ++i) out.arms(i, i) = 1.0;
  out.arms(d, 0) = std::cos(omega);
  out.arms(d, 1) = std::sin(omega);
  out.theta_star = Eigen::VectorXd::Zero(d);
  out.theta_star[0] = 2.0;
  out.subset_size = subset_size;
  out.delta = delta;
  out.validate();
  return out;
}

void ExperimentSpec::validate() const {
  if (d_list.empty() || k_list.empty()) throw InvalidInput("empty experiment grid");
  if (n_seeds < 1) throw InvalidInput("need at least one seed");
  if (strategies.empty()) throw InvalidInput("no strategies selected");
  if (!(sigma > 0.0)) throw InvalidInput("sigma must be positive");
  for (int d : d_list)
    if (d < 2) throw InvalidInput("grid dimensions must be >= 2");
  for (int k : k_list)
    if (k < 2) throw InvalidInput("grid subset sizes must be >= 2");
  run_config.validate();
}

ExperimentSpec ExperimentSpec::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExperimentSpec spec;
  spec.kind = experiment_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("d_list")) spec.d_list = j.at("d_list").get<std::vector<int>>();
  if (j.contains("k_list")) spec.k_list = j.at("k_list").get<std::vector<int>>();
  if (j.contains("omega")) spec.omega = j.at("omega").get<double>();
  if (j.contains("sigma")) spec.sigma = j.at("sigma").get<double>();
  if (j.contains("delta")) spec.delta = j.at("delta").get<double>();
  if (j.contains("n_seeds")) spec.n_seeds = j.at("n_seeds").get<int>();
  if (j.contains("base_seed")) spec.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("strategies")) {
    spec.strategies.clear();
    for (const auto& s : j.at("strategies"))
      spec.strategies.push_back(strategy_from_string(s.get<std::string>()));
  }
  if (j.contains("include_trajectory_in_raw"))
    spec.include_trajectory_in_raw = j.at("include_trajectory_in_raw").get<bool>();
  if (j.contains("out_csv")) spec.out_csv = j.at("out_csv").get<std::string>();
  if (j.contains("out_raw")) spec.out_raw = j.at("out_raw").get<std::string>();
  if (j.contains("out_svg")) spec.out_svg = j.at("out_svg").get<std::string>();
  if (j.contains("out_curves")) spec.out_curves = j.at("out_curves").get<std::string>();
  if (j.contains("run_config")) {
    const auto& rc = j.at("run_config");
    auto& cfg = spec.run_config;
    if (rc.contains("explore_steps")) cfg.explore_steps = rc.at("explore_steps").get<int>();
    if (rc.contains("lambda")) cfg.lambda = rc.at("lambda").get<double>();
    if (rc.contains("ridge")) cfg.ridge = rc.at("ridge").get<double>();
    if (rc.contains("kappa_alpha")) cfg.kappa_alpha = rc.at("kappa_alpha").get<double>();
    if (rc.contains("batch_alpha")) cfg.batch_alpha = rc.at("batch_alpha").get<double>();
    if (rc.contains("max_steps")) cfg.max_steps = rc.at("max_steps").get<std::uint64_t>();
    if (rc.contains("selection_rule")) {
      const std::string rule = rc.at("selection_rule").get<std::string>();
      if (rule == "gap-greedy") cfg.selection_rule = SelectionRule::GapGreedy;
      else if (rule == "arm-greedy") cfg.selection_rule = SelectionRule::ArmGreedy;
      else if (rule == "random") cfg.selection_rule = SelectionRule::Random;
      else throw InvalidInput("unknown selection rule: " + rule);
    }
    if (rc.contains("record_trajectory"))
      cfg.record_trajectory = rc.at("record_trajectory").get<bool>();
    if (rc.contains("mle_tol")) cfg.mle_tol = rc.at("mle_tol").get<double>();
    if (rc.contains("mle_max_iter")) cfg.mle_max_iter = rc.at("mle_max_iter").get<int>();
  }
  spec.validate();
  return spec;
}

std::string ExperimentSpec::to_json() const {
  nlohmann::json j;
  j["kind"] = to_string(kind);
  j["d_list"] = d_list;
  j["k_list"] = k_list;
  j["omega"] = omega;
  j["sigma"] = sigma;
  j["delta"] = delta;
  j["n_seeds"] = n_seeds;
  j["base_seed"] = base_seed;
  std::vector<std::string> names;
  for (Strategy s : strategies) names.push_back(to_string(s));
  j["strategies"] = names;
  j["include_trajectory_in_raw"] = include_trajectory_in_raw;
  j["out_csv"] = out_csv;
  j["out_raw"] = out_raw;
  j["out_svg"] = out_svg;
  j["out_curves"] = out_curves;
  nlohmann::json rc;
  rc["explore_steps"] = run_config.explore_steps;
  rc["lambda"] = run_config.lambda;
  rc["ridge"] = run_config.ridge;
  rc["kappa_alpha"] = run_config.kappa_alpha;
  rc["batch_alpha"] = run_config.batch_alpha;
  rc["max_steps"] = run_config.max_steps;
  switch (run_config.selection_rule) {
    case SelectionRule::GapGreedy: rc["selection_rule"] = "gap-greedy"; break;
    case SelectionRule::ArmGreedy: rc["selection_rule"] = "arm-greedy"; break;
    case SelectionRule::Random: rc["selection_rule"] = "random"; break;
  }
  rc["record_trajectory"] = run_config.record_trajectory;
  rc["mle_tol"] = run_config.mle_tol;
  rc["mle_max_iter"] = run_config.mle_max_iter;
  j["run_config"] = rc;
  return j.dump();
}

ExperimentSpec full_scale_variant(ExperimentSpec spec) {
  spec.omega = 0.01;
  spec.run_config.max_steps = 1'000'000'000ULL;
  return spec;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

struct GridPoint {
  int d;
  int k;
  double value;  // coordinate along the sweep axis
};

std::string axis_for(ExperimentKind kind) {
  return kind == ExperimentKind::SweepK ? "K" : "d";
}

std::vector<GridPoint> build_grid(const ExperimentSpec& spec) {
  std::vector<GridPoint> grid;
  switch (spec.kind) {
    case ExperimentKind::SweepD:
      for (int d : spec.d_list)
        grid.push_back(GridPoint{d, spec.k_list.front(), static_cast<double>(d)});
      break;
    case ExperimentKind::SweepK:
      for (int k : spec.k_list)
        grid.push_back(GridPoint{spec.d_list.front(), k, static_cast<double>(k)});
      break;
    default:
      grid.push_back(GridPoint{spec.d_list.front(), spec.k_list.front(),
                               static_cast<double>(spec.d_list.front())});
      break;
  }
  return grid;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs)
                              : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= count) break;
          fn(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open file for writing", path);
  out << content;
  if (!out) throw IoError("write failed", path);
}

nlohmann::json record_to_json(const RunRecord& record, bool include_trajectory) {
  nlohmann::json j;
  j["strategy"] = to_string(record.strategy);
  j["grid_axis"] = record.grid_axis;
  j["grid_value"] = record.grid_value;
  j["d"] = record.d;
  j["K"] = record.k;
  j["seed_ordinal"] = record.seed_ordinal;
  j["stream"] = record.stream;
  j["returned_arm"] = record.result.returned_arm;
  j["tau"] = record.result.tau;
  j["correct"] = record.result.correct;
  j["truncated"] = record.result.truncated;
  j["pull_counts"] = record.result.pull_counts;
  if (!record.result.batches.empty()) {
    auto batches = nlohmann::json::array();
    for (const auto& b : record.result.batches) {
      nlohmann::json bj;
      bj["j"] = b.index;
      bj["n_j"] = b.length;
      bj["rho_j"] = b.rho_final;
      bj["survivors"] = b.survivors;
      batches.push_back(std::move(bj));
    }
    j["batches"] = std::move(batches);
  }
  if (include_trajectory && !record.result.trajectory.empty())
    j["trajectory"] = record.result.trajectory;
  return j;
}

std::string render_csv(const std::vector<AggregateRow>& rows) {
  std::string csv = "strategy,grid_axis,grid_value,n_seeds,mean_tau,stderr_tau,frac_correct,pull_fracs\n";
  for (const auto& row : rows) {
    csv += row.strategy;
    csv += ',';
    csv += row.grid_axis;
    csv += ',';
    csv += format_double(row.grid_value);
    csv += ',';
    csv += std::to_string(row.n_seeds);
    csv += ',';
    csv += format_double(row.mean_tau);
    csv += ',';
    csv += format_double(row.stderr_tau);
    csv += ',';
    csv += format_double(row.frac_correct);
    csv += ',';
    for (std::size_t i = 0; i < row.pull_fracs.size(); ++i) {
      if (i > 0) csv += ';';
      csv += format_double(row.pull_fracs[i]);
    }
    csv += '\n';
  }
  return csv;
}

std::string render_curves_csv(const std::vector<RunRecord>& raw, int best,
                              const std::vector<Strategy>& strategies) {
  // Fraction of seeds whose per-step incumbent equals the best arm; runs that
  // already stopped contribute their returned arm.
  std::string csv = "strategy,step,frac_correct\n";
  for (Strategy strategy : strategies) {
    std::vector<const RunRecord*> runs;
    std::size_t max_len = 0;
    for (const auto& record : raw) {
      if (record.strategy != strategy) continue;
      runs.push_back(&record);
      max_len = std::max(max_len, record.result.trajectory.size());
    }
    if (runs.empty() || max_len == 0) continue;
    const std::size_t stride = std::max<std::size_t>(1, max_len / 2000);
    for (std::size_t step = 0; step < max_len; step += stride) {
      int correct = 0;
      for (const auto* record : runs) {
        const auto& traj = record->result.trajectory;
        const int incumbent =
            step < traj.size() ? traj[step] : record->result.returned_arm;
        if (incumbent == best) ++correct;
      }
      csv += to_string(strategy);
      csv += ',';
      csv += std::to_string(step + 1);
      csv += ',';
      csv += format_double(static_cast<double>(correct) / static_cast<double>(runs.size()));
      csv += '\n';
    }
  }
  return csv;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentSpec& spec, const std::string& out_dir,
                                int jobs) {
  spec.validate();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory", out_dir);

  const std::vector<GridPoint> grid = build_grid(spec);
  const std::string axis = axis_for(spec.kind);

  struct Task {
    std::size_t grid_index;
    Strategy strategy;
    int seed_ordinal;
  };
  std::vector<Task> tasks;
  for (std::size_t g = 0; g < grid.size(); ++g)
    for (Strategy strategy : spec.strategies)
      for (int s = 0; s < spec.n_seeds; ++s) tasks.push_back(Task{g, strategy, s});

  std::vector<RunRecord> records(tasks.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t ti) {
    const Task& task = tasks[ti];
    const GridPoint& point = grid[task.grid_index];
    Instance instance = standard_instance(point.d, spec.omega, point.k, spec.delta);

    RunConfig cfg = spec.run_config;
    if (spec.kind == ExperimentKind::Robustness) {
      cfg.feedback = FeedbackModel::GaussianRum;
      cfg.rum_sigma = spec.sigma;
    }
    if (spec.kind == ExperimentKind::Trajectory) cfg.record_trajectory = true;

    // Paired replications: the stream depends on (grid point, seed ordinal)
    // only, so strategies face the same environment randomness per seed.
    const std::uint64_t stream =
        static_cast<std::uint64_t>(task.grid_index) * static_cast<std::uint64_t>(spec.n_seeds) +
        static_cast<std::uint64_t>(task.seed_ordinal);
    Rng rng = Rng::child(spec.base_seed, stream);

    RunResult result;
    switch (task.strategy) {
      case Strategy::Static: result = run_static(instance, cfg, rng); break;
      case Strategy::Adaptive: result = run_adaptive(instance, cfg, rng); break;
      case Strategy::Random: result = run_random(instance, cfg, rng); break;
    }
    records[ti] = RunRecord{task.strategy, axis,      point.value,
                            point.d,       point.k,   task.seed_ordinal,
                            stream,        std::move(result)};
  });

  ExperimentOutput out;
  out.raw = std::move(records);

  // Aggregate per (grid point, strategy) in enumeration order.
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (Strategy strategy : spec.strategies) {
      std::vector<const RunRecord*> runs;
      for (const auto& record : out.raw) {
        if (record.strategy == strategy &&
            record.grid_value == grid[g].value &&
            record.d == grid[g].d && record.k == grid[g].k)
          runs.push_back(&record);
      }
      if (runs.empty()) continue;
      AggregateRow row;
      row.strategy = to_string(strategy);
      row.grid_axis = axis;
      row.grid_value = grid[g].value;
      row.n_seeds = static_cast<int>(runs.size());
      double sum = 0.0;
      for (const auto* r : runs) sum += static_cast<double>(r->result.tau);
      row.mean_tau = sum / static_cast<double>(runs.size());
      double ss = 0.0;
      for (const auto* r : runs) {
        const double dtau = static_cast<double>(r->result.tau) - row.mean_tau;
        ss += dtau * dtau;
      }
      row.stderr_tau = runs.size() > 1
                           ? std::sqrt(ss / static_cast<double>(runs.size() - 1)) /
                                 std::sqrt(static_cast<double>(runs.size()))
                           : 0.0;
      int correct = 0;
      for (const auto* r : runs) correct += r->result.correct ? 1 : 0;
      row.frac_correct = static_cast<double>(correct) / static_cast<double>(runs.size());
      const std::size_t n_arms = runs.front()->result.pull_counts.size();
      row.pull_fracs.assign(n_arms, 0.0);
      for (const auto* r : runs) {
        const double total = static_cast<double>(r->result.tau) * r->k;
        for (std::size_t a = 0; a < n_arms; ++a)
          row.pull_fracs[a] += static_cast<double>(r->result.pull_counts[a]) / total;
      }
      for (auto& frac : row.pull_fracs) frac /= static_cast<double>(runs.size());
      out.rows.push_back(std::move(row));
    }
  }

  out.csv_path = (fs::path(out_dir) / spec.out_csv).string();
  write_file(out.csv_path, render_csv(out.rows));

  std::string raw_text;
  for (const auto& record : out.raw) {
    raw_text += record_to_json(record, spec.include_trajectory_in_raw).dump();
    raw_text += '\n';
  }
  out.raw_path = (fs::path(out_dir) / spec.out_raw).string();
  write_file(out.raw_path, raw_text);

  if (!spec.out_svg.empty() &&
      (spec.kind == ExperimentKind::SweepD || spec.kind == ExperimentKind::SweepK)) {
    out.svg_path = (fs::path(out_dir) / spec.out_svg).string();
    emit_svg(out.rows, axis, out.svg_path);
  }
  if (spec.kind == ExperimentKind::Trajectory && !spec.out_curves.empty()) {
    const Instance instance =
        standard_instance(grid.front().d, spec.omega, grid.front().k, spec.delta);
    out.curves_path = (fs::path(out_dir) / spec.out_curves).string();
    write_file(out.curves_path,
               render_curves_csv(out.raw, best_arm(instance), spec.strategies));
  }
  return out;
}

double fit_scaling_exponent(const std::vector<AggregateRow>& rows, const std::string& axis) {
  std::vector<double> xs, ys;
  for (const auto& row : rows) {
    if (row.grid_axis != axis) continue;
    if (!(row.grid_value > 0.0) || !(row.mean_tau > 0.0))
      throw InvalidInput("scaling fit needs positive grid values and means");
    xs.push_back(std::log(row.grid_value));
    ys.push_back(std::log(row.mean_tau));
  }
  std::vector<double> distinct = xs;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) throw InvalidInput("scaling fit needs >= 3 distinct grid points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    cov += (xs[i] - mx) * (ys[i] - my);
    var += (xs[i] - mx) * (xs[i] - mx);
  }
  if (var <= 0.0) throw InvalidInput("degenerate grid");
  return cov / var;
}

void emit_svg(const std::vector<AggregateRow>& rows, const std::string& axis,
              const std::string& path) {
  if (rows.empty()) throw InvalidInput("no rows to plot");

  const double width = 640.0, height = 480.0;
  const double ml = 70.0, mr = 20.0, mt = 20.0, mb = 50.0;

  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  bool first = true;
  std::vector<std::string> strategies;
  for (const auto& row : rows) {
    if (row.grid_axis != axis) continue;
    if (!(row.grid_value > 0.0) || !(row.mean_tau > 0.0))
      throw InvalidInput("SVG emitter needs positive values for log scales");
    const double lx = std::log10(row.grid_value);
    const double hi = std::log10(row.mean_tau + row.stderr_tau);
    const double lo = std::log10(std::max(row.mean_tau - row.stderr_tau, row.mean_tau * 1e-3));
    if (first) {
      min_x = max_x = lx;
      min_y = lo;
      max_y = hi;
      first = false;
    } else {
      min_x = std::min(min_x, lx);
      max_x = std::max(max_x, lx);
      min_y = std::min(min_y, lo);
      max_y = std::max(max_y, hi);
    }
    if (std::find(strategies.begin(), strategies.end(), row.strategy) == strategies.end())
      strategies.push_back(row.strategy);
  }
  if (first) throw InvalidInput("no rows on the requested axis");
  if (max_x - min_x < 1e-12) { min_x -= 0.5; max_x += 0.5; }
  if (max_y - min_y < 1e-12) { min_y -= 0.5; max_y += 0.5; }

  auto sx = [&](double lx) { return ml + (lx - min_x) / (max_x - min_x) * (width - ml - mr); };
  auto sy = [&](double ly) { return height - mb - (ly - min_y) / (max_y - min_y) * (height - mt - mb); };

  const std::vector<std::string> palette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
  svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  svg += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(height - mb) +
         "\" x2=\"" + format_double(width - mr) + "\" y2=\"" + format_double(height - mb) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(mt) + "\" x2=\"" +
         format_double(ml) + "\" y2=\"" + format_double(height - mb) +
         "\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + format_double((ml + width - mr) / 2) + "\" y=\"" +
         format_double(height - 12.0) + "\" text-anchor=\"middle\" font-size=\"14\">" + axis +
         " (log)</text>\n";
  svg += "<text x=\"16\" y=\"" + format_double((mt + height - mb) / 2) +
         "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 16 " +
         format_double((mt + height - mb) / 2) + ")\">mean stopping time (log)</text>\n";

  // Decade ticks.
  for (int e = static_cast<int>(std::floor(min_y)); e <= static_cast<int>(std::ceil(max_y)); ++e) {
    if (e < min_y - 1e-9 || e > max_y + 1e-9) continue;
    const double y = sy(static_cast<double>(e));
    svg += "<line x1=\"" + format_double(ml - 4) + "\" y1=\"" + format_double(y) + "\" x2=\"" +
           format_double(ml) + "\" y2=\"" + format_double(y) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + format_double(ml - 8) + "\" y=\"" + format_double(y + 4) +
           "\" text-anchor=\"end\" font-size=\"12\">1e" + std::to_string(e) + "</text>\n";
  }

  int color_index = 0;
  for (const auto& strategy : strategies) {
    const std::string& color = palette[static_cast<std::size_t>(color_index) % palette.size()];
    ++color_index;
    std::string points;
    for (const auto& row : rows) {
      if (row.strategy != strategy || row.grid_axis != axis) continue;
      const double x = sx(std::log10(row.grid_value));
      const double y = sy(std::log10(row.mean_tau));
      points += format_double(x) + "," + format_double(y) + " ";
      if (row.stderr_tau > 0.0) {
        const double y_hi = sy(std::log10(row.mean_tau + row.stderr_tau));
        const double y_lo =
            sy(std::log10(std::max(row.mean_tau - row.stderr_tau, row.mean_tau * 1e-3)));
        svg += "<line x1=\"" + format_double(x) + "\" y1=\"" + format_double(y_lo) +
               "\" x2=\"" + format_double(x) + "\" y2=\"" + format_double(y_hi) +
               "\" stroke=\"" + color + "\"/>\n";
      }
      svg += "<circle cx=\"" + format_double(x) + "\" cy=\"" + format_double(y) +
             "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
    if (!points.empty()) points.pop_back();
    svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" +
           points + "\"/>\n";
    svg += "<text x=\"" + format_double(width - mr - 120.0) + "\" y=\"" +
           format_double(mt + 16.0 * color_index) + "\" font-size=\"13\" fill=\"" + color +
           "\">" + strategy + "</text>\n";
  }
  svg += "</svg>\n";
  write_file(path, svg);
}

}  // namespace mnl
