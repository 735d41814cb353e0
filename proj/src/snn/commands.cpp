/*
 Copyright 2026 The snn-smp Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "snn/commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "snn/errors.hpp"
#include "snn/evaluation.hpp"
#include "snn/parallel.hpp"

namespace snn {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::uint64_t kInitStream = 0x1417;
constexpr std::uint64_t kBandStream = 0xBA4D;
constexpr std::uint64_t kClassifyStream = 0xC1A5;
constexpr std::uint64_t kSurfaceStream = 0x5F0;
constexpr std::uint64_t kParamEvalStream = 0xE57;
constexpr std::uint64_t kCheckDataStream = 0x6C4;
constexpr std::uint64_t kCheckNoiseStream = 0x6C5;
constexpr std::uint64_t kCheckMcStream = 0x6C6;

const char* kLogHeader = "iteration,sample_index,loss,grad_norm,learning_rate\n";

std::string log_line(const TrainingRecord& r) {
  return std::to_string(r.iteration) + "," + std::to_string(r.sample_index) + "," + format_real(r.loss) + "," +
         format_real(r.grad_norm) + "," + format_real(r.learning_rate) + "\n";
}

// Standard normal quantile by bisection on erfc; only used for reference bands.
double normal_quantile(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void check_model_matches(const RunConfig& cfg, const Checkpoint& ckpt) {
  if (ckpt.task != task_name(cfg.task.kind)) {
    throw ConfigError("checkpoint was trained on task '" + ckpt.task + "' but the config names '" +
                      task_name(cfg.task.kind) + "'");
  }
  if (ckpt.net.width != cfg.net.width || ckpt.net.depth != cfg.net.depth || ckpt.net.step != cfg.net.step ||
      ckpt.net.input_dim != cfg.net.input_dim || ckpt.net.label_dim != cfg.net.label_dim) {
    throw ConfigError("checkpoint network shape does not match the config");
  }
}

std::string csv_row(std::initializer_list<double> values) {
  std::string s;
  bool first = true;
  for (double v : values) {
    if (!first) s += ',';
    s += format_real(v);
    first = false;
  }
  return s + "\n";
}

void write_json(const fs::path& path, const json& doc) { write_text_file(path, doc.dump(2) + "\n"); }

json evaluate_regression(const RunConfig& cfg, const Model& model, const fs::path& out) {
  const auto& e = cfg.eval;
  const auto grid = uniform_grid(0.0, 1.0, e.grid_points);
  const auto b = predictive_band(model, grid, e.samples, e.band_level, RandomStream(e.seed, kBandStream), cfg.workers);
  const double z = normal_quantile(0.5 * (1.0 + e.band_level));
  std::vector<double> tmean(grid.size()), tlo(grid.size()), thi(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (cfg.task.kind == TaskKind::CubicRegression) {
      tmean[i] = cubic_mean(grid[i]);
      tlo[i] = tmean[i] - z * cfg.task.noise_std;
      thi[i] = tmean[i] + z * cfg.task.noise_std;
    } else {
      tmean[i] = tan_mean(grid[i]);
      tlo[i] = tmean[i] * (1.0 - z * cfg.task.tan_sigma);
      thi[i] = tmean[i] * (1.0 + z * cfg.task.tan_sigma);
    }
  }
  const auto m = curve_metrics(b, tmean, tlo, thi);

  std::string csv = "x,mean,lower,upper,true_mean,true_lower,true_upper\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv += csv_row({grid[i], b.mean[i], b.lower[i], b.upper[i], tmean[i], tlo[i], thi[i]});
  }
  write_text_file(out / "band.csv", csv);

  // Half-width at the grid points nearest x = 0.1 and x = 0.9.
  auto nearest = [&](double x) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (std::abs(grid[i] - x) < std::abs(grid[best] - x)) best = i;
    }
    return best;
  };
  const auto i1 = nearest(0.1), i9 = nearest(0.9);
  return {{"rmse", m.rmse},
          {"coverage", m.coverage},
          {"alignment", m.alignment},
          {"mean_half_width", m.mean_half_width},
          {"true_mean_half_width", m.true_mean_half_width},
          {"half_width_x0.1", b.half_width(i1)},
          {"half_width_x0.9", b.half_width(i9)},
          {"grid_points", grid.size()},
          {"samples_per_point", e.samples},
          {"band_level", e.band_level},
          {"band_file", "band.csv"}};
}

json evaluate_classification(const RunConfig& cfg, const Model& model, const fs::path& out) {
  const auto& e = cfg.eval;
  const auto test = gen_circle(e.test_count, cfg.task.radius, cfg.task.noise_frac, e.seed);
  const double band_half = 2.0 * cfg.task.noise_frac * cfg.task.radius;
  const auto m = classification_metrics(model, test, e.votes, 0.5, cfg.task.radius, band_half,
                                        RandomStream(e.seed, kClassifyStream), cfg.workers);
  const auto s = weight_surface(model, e.surface_resolution, e.surface_samples, RandomStream(e.seed, kSurfaceStream),
                                cfg.workers);
  std::string csv = "x,y,mean,min,max\n";
  for (std::size_t iy = 0; iy < s.resolution; ++iy) {
    for (std::size_t ix = 0; ix < s.resolution; ++ix) {
      const auto k = iy * s.resolution + ix;
      csv += csv_row({s.centers[ix], s.centers[iy], s.values[k], s.lo[k], s.hi[k]});
    }
  }
  write_text_file(out / "surface.csv", csv);
  json j{{"test_count", m.count},
         {"accuracy", m.accuracy},
         {"noise_band_half_width", band_half},
         {"outside_band_count", m.outside_band_count},
         {"accuracy_outside_band", m.accuracy_outside_band},
         {"misclassified", m.misclassified},
         {"misclassified_in_band_fraction", m.misclassified_in_band_fraction},
         {"votes", e.votes},
         {"surface_resolution", s.resolution},
         {"surface_samples", e.surface_samples},
         {"surface_file", "surface.csv"}};
  if (m.majority_accuracy) j["majority_accuracy"] = *m.majority_accuracy;
  return j;
}

json evaluate_param(const RunConfig& cfg, const Model& model, const fs::path& out) {
  const auto& e = cfg.eval;
  const auto& t = cfg.task;
  json estimates = json::array();
  std::string csv = "alpha_true,sample\n";
  const RandomStream base(e.seed, kParamEvalStream);
  for (std::size_t i = 0; i < e.alphas.size(); ++i) {
    const double alpha = e.alphas[i];
    const auto obs = param_observations(alpha, e.observations, t.model_noise_std, t.x_center, t.x_std,
                                        splitmix64(e.seed + i));
    const auto est = param_estimate(model, obs, e.samples_per_observation, base.substream(i), cfg.workers);
    estimates.push_back({{"alpha_true", alpha},
                         {"estimate", est.estimate},
                         {"standard_error", est.standard_error},
                         {"lower", est.lower},
                         {"upper", est.upper},
                         {"abs_error", std::abs(est.estimate - alpha)},
                         {"true_in_central_95", est.lower <= alpha && alpha <= est.upper},
                         {"pooled_samples", est.samples.size()}});
    for (double v : est.samples) csv += csv_row({alpha, v});
  }
  write_text_file(out / "param_samples.csv", csv);
  return {{"observations", e.observations},
          {"samples_per_observation", e.samples_per_observation},
          {"estimates", estimates},
          {"samples_file", "param_samples.csv"}};
}

// ------------------------------------------------------------ gradient check

struct CheckInstance {
  NetConfig net;
  Dataset data;
  ControlPath controls;
};

CheckInstance check_instance(const RunConfig& cfg) {
  const auto& g = cfg.gradient_check;
  CheckInstance inst;
  inst.net.width = g.width;
  inst.net.depth = g.depth;
  inst.net.step = g.step;
  inst.net.input_dim = std::min(2, g.width);
  inst.net.label_dim = 1;
  inst.net.validate();

  RandomStream rng(cfg.train.seed, kCheckDataStream);
  inst.data.task = "gradient-check";
  inst.data.seed = cfg.train.seed;
  inst.data.input_dim = inst.net.input_dim;
  inst.data.label_dim = 1;
  for (std::size_t q = 0; q < g.data_count; ++q) {
    Sample s;
    s.input = Vector(inst.net.input_dim);
    for (auto& v : s.input) v = rng.uniform(-1.0, 1.0);
    s.label = Vector::Constant(1, rng.uniform(0.0, 2.0));
    inst.data.samples.push_back(std::move(s));
  }
  inst.controls = init_controls(inst.net, rng);
  // Spread biases and noise levels so no block sits at a special point.
  for (auto& l : inst.controls.layers) {
    for (auto& v : l.bias) v += rng.uniform(-0.5, 0.5);
    for (auto& v : l.sigma) v = g.zero_sigma ? 0.0 : rng.uniform(0.1, 0.5);
  }
  return inst;
}

enum class Block { W, B, Sigma };
constexpr Block kBlocks[] = {Block::W, Block::B, Block::Sigma};
const char* block_name(Block b) { return b == Block::W ? "gradW" : b == Block::B ? "gradB" : "gradSigma"; }

// Every scalar control of one block, in a fixed order.
std::vector<double*> block_params(ControlPath& c, Block b) {
  std::vector<double*> out;
  for (auto& l : c.layers) {
    if (b == Block::W) {
      for (Eigen::Index k = 0; k < l.weights.size(); ++k) out.push_back(l.weights.data() + k);
    } else if (b == Block::B) {
      for (Eigen::Index k = 0; k < l.bias.size(); ++k) out.push_back(l.bias.data() + k);
    } else {
      for (Eigen::Index k = 0; k < l.sigma.size(); ++k) out.push_back(l.sigma.data() + k);
    }
  }
  return out;
}

std::vector<double> block_values(const ControlGradient& g, Block b) {
  std::vector<double> out;
  for (const auto& l : g.layers) {
    const double* p = b == Block::W ? l.weights.data() : b == Block::B ? l.bias.data() : l.sigma.data();
    const auto n = b == Block::W ? l.weights.size() : b == Block::B ? l.bias.size() : l.sigma.size();
    out.insert(out.end(), p, p + n);
  }
  return out;
}

void apply_fault(const RunConfig& cfg, ControlGradient& g) {
  if (cfg.gradient_check.inject_fault == "gradW-sign") {
    for (auto& l : g.layers) l.weights = -l.weights;
  }
}

// Central difference of f over every scalar of one block.
std::vector<double> finite_difference(const ControlPath& at, Block b, double step,
                                      const std::function<double(const ControlPath&)>& f) {
  ControlPath work = at;
  auto params = block_params(work, b);
  std::vector<double> out;
  out.reserve(params.size());
  for (double* p : params) {
    const double saved = *p;
    *p = saved + step;
    const double up = f(work);
    *p = saved - step;
    const double down = f(work);
    *p = saved;
    out.push_back((up - down) / (2.0 * step));
  }
  return out;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Dataset cmd_generate_data(const RunConfig& cfg) { return generate(cfg.task); }

Checkpoint initial_checkpoint(const RunConfig& cfg, const Dataset& data) {
  if (data.task != task_name(cfg.task.kind)) {
    throw ConfigError("dataset task '" + data.task + "' does not match config task '" + task_name(cfg.task.kind) +
                      "'");
  }
  if (data.input_dim != cfg.net.input_dim || data.label_dim != cfg.net.label_dim) {
    throw ConfigError("dataset dimensions do not match the network");
  }
  Checkpoint c;
  c.task = task_name(cfg.task.kind);
  c.net = cfg.net;
  c.normalizer = cfg.normalization == NormalizationMode::Standardize
                     ? Normalizer::standardize(data, 0.5 * cfg.net.horizon())
                     : Normalizer::identity(cfg.net.input_dim, cfg.net.label_dim);
  RandomStream rng(cfg.train.seed, kInitStream);
  c.controls = init_controls(cfg.net, rng);
  for (auto& l : c.controls.layers) l.sigma.setConstant(cfg.init_sigma);
  c.iteration = 0;
  c.rng_seed = cfg.train.seed;
  c.config_hash = config_hash(cfg);
  return c;
}

TrainOutcome cmd_train(const RunConfig& cfg, const Dataset& data, const std::optional<Checkpoint>& resume,
                       const ProgressFn& progress) {
  Checkpoint start = initial_checkpoint(cfg, data);
  if (resume) {
    if (resume->config_hash != start.config_hash) {
      throw ConfigError("resume checkpoint was produced by a different config (hash " + resume->config_hash +
                        ", expected " + start.config_hash + ")");
    }
    if (resume->iteration > cfg.train.iterations) throw ConfigError("resume checkpoint is past the iteration budget");
    start = *resume;
  }
  const Dataset netdata = start.normalizer.apply(data);

  TrainOutcome outcome;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw DataError("cannot create output directory " + cfg.out_dir.string() + ": " + ec.message());
  outcome.log_path = cfg.out_dir / "train_log.csv";
  std::ofstream log(outcome.log_path, std::ios::binary | std::ios::trunc);
  if (!log) throw DataError("cannot write " + outcome.log_path.string());
  log << kLogHeader;

  Trainer trainer(cfg.net, cfg.train, netdata, start.controls, start.iteration + 1);
  Checkpoint current = start;
  auto snapshot_of = [&](std::int64_t k) {
    current.controls = trainer.controls();
    current.iteration = k;
    return current;
  };
  while (!trainer.done()) {
    TrainingRecord rec;
    try {
      rec = trainer.step();
    } catch (const PropagationError&) {
      log.flush();
      throw;
    }
    const bool last = trainer.done();
    if (rec.iteration % cfg.train.log_every == 0 || last) {
      log << log_line(rec);
      log.flush();
      if (!log) throw DataError("write failed: " + outcome.log_path.string());
      if (progress) progress(rec);
    }
    if (cfg.train.snapshot_every > 0 && rec.iteration % cfg.train.snapshot_every == 0 && !last) {
      const auto path = cfg.out_dir / "snapshots" / ("checkpoint_" + std::to_string(rec.iteration) + ".json");
      save_checkpoint(snapshot_of(rec.iteration), path);
      outcome.snapshots.push_back(path);
    }
  }
  outcome.checkpoint = snapshot_of(trainer.next_iteration() - 1);
  outcome.checkpoint_path = cfg.checkpoint_path.value_or(cfg.out_dir / "checkpoint.json");
  save_checkpoint(outcome.checkpoint, outcome.checkpoint_path);
  return outcome;
}

json cmd_evaluate(const RunConfig& cfg, const Checkpoint& ckpt, const fs::path& out_dir) {
  check_model_matches(cfg, ckpt);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw DataError("cannot create output directory " + out_dir.string() + ": " + ec.message());
  const Model model = ckpt.model();
  json metrics{{"task", ckpt.task},
               {"iteration", ckpt.iteration},
               {"config_hash", ckpt.config_hash},
               {"eval_seed", cfg.eval.seed}};
  switch (cfg.task.kind) {
    case TaskKind::CubicRegression:
    case TaskKind::TanRegression:
      metrics["regression"] = evaluate_regression(cfg, model, out_dir);
      break;
    case TaskKind::CircleClassification:
      metrics["classification"] = evaluate_classification(cfg, model, out_dir);
      break;
    case TaskKind::ParamEstimation:
      metrics["param_estimation"] = evaluate_param(cfg, model, out_dir);
      break;
  }
  write_json(out_dir / "metrics.json", metrics);
  return metrics;
}

bool GradientCheckReport::ok() const {
  return std::all_of(blocks.begin(), blocks.end(), [](const BlockCheck& b) { return b.ok(); });
}

std::vector<std::string> GradientCheckReport::failing_blocks() const {
  std::vector<std::string> out;
  for (const auto& b : blocks) {
    if (!b.ok()) out.push_back(b.block);
  }
  return out;
}

std::string GradientCheckReport::to_text(const RunConfig& cfg) const {
  const auto& g = cfg.gradient_check;
  std::ostringstream os;
  os << "gradient-check D=" << g.width << " N=" << g.depth << " h=" << format_real(g.step)
     << " scheme=" << scheme_name(g.scheme) << " Q=" << g.data_count << " M=" << g.mc_samples << "\n";
  for (const auto& b : blocks) {
    os << "pathwise " << b.block << " max_rel_err=" << format_real(b.pathwise_max_rel)
       << " tol=" << format_real(g.pathwise_rel_tol) << " entries=" << b.pathwise_entries << " "
       << (b.pathwise_ok ? "PASS" : "FAIL") << "\n";
  }
  for (const auto& b : blocks) {
    os << "mc " << b.block << " max_rel_err=" << format_real(b.mc_max_rel) << " tol=" << format_real(g.mc_rel_tol)
       << " entries=" << b.mc_entries << " " << (b.mc_ok ? "PASS" : "FAIL") << "\n";
  }
  os << "seconds=" << format_real(std::round(seconds * 1000.0) / 1000.0) << "\n";
  return os.str();
}

GradientCheckReport cmd_gradient_check(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& g = cfg.gradient_check;
  const auto inst = check_instance(cfg);
  const auto& net = inst.net;
  const LossSpec loss{net.label_dim};
  const Scheme scheme = g.scheme;
  auto mask = [&](ControlGradient& grad) {
    if (g.zero_sigma) {
      for (auto& l : grad.layers) l.sigma.setZero();
    }
  };

  // Pathwise: one datum, one frozen noise realization.
  const auto& sample = inst.data.samples.front();
  RandomStream noise_rng(cfg.train.seed, kCheckNoiseStream);
  const auto path = simulate_path(net, sample.input, inst.controls, noise_rng);
  TrajectoryBundle bundle{sample.label, path,
                          solve_adjoint(net, path, inst.controls, sample.label, loss, scheme)};
  auto pathwise = pathwise_gradient(net, bundle, inst.controls, scheme);
  mask(pathwise);
  apply_fault(cfg, pathwise);
  auto pathwise_loss = [&](const ControlPath& c) {
    return loss.loss(replay_path(net, sample.input, c, path.noises).states.back(), sample.label);
  };

  // Monte Carlo: every datum, M common noise realizations.
  const RandomStream mc_base(cfg.train.seed, kCheckMcStream);
  auto mc = mc_gradient(net, inst.controls, inst.data, g.mc_samples, mc_base, scheme, cfg.workers);
  mask(mc);
  apply_fault(cfg, mc);
  auto cost = [&](const ControlPath& c) {
    return evaluate_cost(net, c, inst.data, g.mc_samples, mc_base, cfg.workers);
  };

  GradientCheckReport report;
  for (Block b : kBlocks) {
    BlockCheck bc;
    bc.block = block_name(b);
    const auto pw = block_values(pathwise, b);
    const auto mcv = block_values(mc, b);
    bc.pathwise_entries = pw.size();
    if (b == Block::Sigma && g.zero_sigma) {
      // Masked block: both sides are zero by construction.
      bc.mc_entries = 0;
      report.blocks.push_back(bc);
      continue;
    }
    const auto fd = finite_difference(inst.controls, b, g.pathwise_fd_step, pathwise_loss);
    const double floor = g.pathwise_abs_tol / g.pathwise_rel_tol;
    for (std::size_t i = 0; i < pw.size(); ++i) {
      const double err = std::abs(pw[i] - fd[i]) / std::max(std::abs(fd[i]), floor);
      bc.pathwise_max_rel = std::max(bc.pathwise_max_rel, err);
      if (!(err <= g.pathwise_rel_tol)) bc.pathwise_ok = false;
    }
    const auto fdc = finite_difference(inst.controls, b, g.mc_fd_step, cost);
    for (std::size_t i = 0; i < mcv.size(); ++i) {
      if (!(std::abs(mcv[i]) > g.mc_min_magnitude) && !(std::abs(fdc[i]) > g.mc_min_magnitude)) continue;
      ++bc.mc_entries;
      const double err = std::abs(mcv[i] - fdc[i]) / std::max(std::abs(mcv[i]), g.mc_min_magnitude);
      bc.mc_max_rel = std::max(bc.mc_max_rel, err);
      if (!(err <= g.mc_rel_tol)) bc.mc_ok = false;
    }
    report.blocks.push_back(bc);
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace snn
