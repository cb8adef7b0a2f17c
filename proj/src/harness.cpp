#include "planar_pnp/harness.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <limits>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "planar_pnp/errors.hpp"

namespace planar_pnp {

namespace {

constexpr int kMaxRotationDraws = 100000;
constexpr int kTimingGroups = 5;

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Mat3 RandomRotation(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Quaterniond q;
  do {
    q.coeffs() << normal(rng), normal(rng), normal(rng), normal(rng);
  } while (q.norm() < 1e-12);
  q.normalize();
  return q.toRotationMatrix();
}

void AppendNumber(std::string& out, double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, res.ptr);
}

}  // namespace

void ValidateConfig(const ScenarioConfig& cfg) {
  if (cfg.n_points < 2) throw InvalidInput("n_points must be >= 2");
  if (!(cfg.noise_sigma_px >= 0.0)) throw InvalidInput("noise must be >= 0");
  if (!(cfg.focal_px > 0.0)) throw InvalidInput("focal length must be > 0");
  if (cfg.trials < 1) throw InvalidInput("trials must be >= 1");
  if (!(cfg.z_min > 0.0) || !(cfg.z_max >= cfg.z_min) ||
      !(cfg.x_max >= cfg.x_min) || !(cfg.y_max >= cfg.y_min)) {
    throw InvalidInput("sampling box must be non-empty with z_min > 0");
  }
  if (!(cfg.beta_min_deg > 0.0) || !(cfg.beta_max_deg < 180.0) ||
      !(cfg.beta_min_deg <= cfg.beta_max_deg)) {
    throw InvalidInput("pitch range must lie inside (0, 180) degrees");
  }
}

std::uint64_t TrialSeed(std::uint64_t master_seed, double sweep_value,
                        int trial_index) {
  std::uint64_t h = SplitMix64(master_seed);
  h = SplitMix64(h ^ std::bit_cast<std::uint64_t>(sweep_value));
  h = SplitMix64(h ^ static_cast<std::uint64_t>(trial_index));
  return h;
}

Scene GenerateScene(const ScenarioConfig& cfg, std::uint64_t trial_seed) {
  ValidateConfig(cfg);
  std::mt19937_64 rng(trial_seed);

  const double beta_lo = cfg.beta_min_deg * std::numbers::pi / 180.0;
  const double beta_hi = cfg.beta_max_deg * std::numbers::pi / 180.0;
  Mat3 rotation;
  int draws = 0;
  while (true) {
    if (++draws > kMaxRotationDraws) {
      throw InvalidInput("no rotation with pitch in range after " +
                         std::to_string(kMaxRotationDraws) + " draws");
    }
    rotation = RandomRotation(rng);
    const double beta = std::acos(std::clamp(rotation(2, 2), -1.0, 1.0));
    if (beta >= beta_lo && beta <= beta_hi) break;
  }

  Scene scene;
  scene.truth = {0.0, 0.0, 0.0};
  SolveRequest& req = scene.request;
  req.camera_offset = CameraOffset(rotation);
  req.intrinsics = {cfg.focal_px, cfg.focal_px, 0.0, 0.0};
  const Mat3& c = req.camera_offset.rotation();

  std::uniform_real_distribution<double> ux(cfg.x_min, cfg.x_max);
  std::uniform_real_distribution<double> uy(cfg.y_min, cfg.y_max);
  std::uniform_real_distribution<double> uz(cfg.z_min, cfg.z_max);
  scene.camera_points.reserve(cfg.n_points);
  req.world_points.reserve(cfg.n_points);
  req.pixels.reserve(cfg.n_points);
  for (int i = 0; i < cfg.n_points; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    const double z = uz(rng);
    scene.camera_points.emplace_back(x, y, z);
    // The camera frame of R = P * blockdiag(C, 1) sees visible points at
    // negative z, so the forward-looking sample maps through its negation.
    const Vec3 world = c * Vec3(-x, -y, -z);
    req.world_points.push_back({world.x(), world.y(), world.z()});

    // Homogeneous chain back into the camera: v = C^T P^-1 p, q = v_xy / v_z.
    const Vec3 v = c.transpose() * world;
    req.pixels.push_back(Denormalize(req.intrinsics, {v.x() / v.z(), v.y() / v.z()}));
  }
  if (cfg.noise_sigma_px > 0.0) {
    std::normal_distribution<double> noise(0.0, cfg.noise_sigma_px);
    for (PixelPoint& px : req.pixels) {
      px.u += noise(rng);
      px.v += noise(rng);
    }
  }
  return scene;
}

std::pair<double, double> PoseErrors(const Pose2D& estimate,
                                     const Pose2D& truth) {
  return {std::hypot(estimate.x - truth.x, estimate.y - truth.y),
          std::abs(WrapAngle(estimate.theta - truth.theta))};
}

namespace {

TrialRecord RunTrial(const ScenarioConfig& cfg, double sweep_value, int t,
                     bool measure_time) {
  TrialRecord rec;
  rec.trial_index = t;
  const Scene scene = GenerateScene(cfg, TrialSeed(cfg.master_seed, sweep_value, t));
  try {
    const auto start = std::chrono::steady_clock::now();
    const Solution sol = Solve(scene.request);
    const auto stop = std::chrono::steady_clock::now();
    if (measure_time) {
      rec.solve_time = std::chrono::duration<double>(stop - start).count();
    }
    std::tie(rec.translational_error, rec.rotational_error) =
        PoseErrors(sol.pose, scene.truth);
    rec.converged = sol.refine_result.converged;
    // Same rule as the command-line solver: no convergence, no answer.
    rec.failed = !rec.converged;
  } catch (const PnpError&) {
    rec.failed = true;
  }
  return rec;
}

ScenarioConfig RowConfig(SweepKind kind, const ScenarioConfig& base, double value) {
  ScenarioConfig cfg = base;
  if (kind == SweepKind::kNoise) {
    cfg.n_points = 50;
    cfg.noise_sigma_px = value;
  } else {
    cfg.n_points = static_cast<int>(value);
    cfg.noise_sigma_px = 2.0;
  }
  return cfg;
}

}  // namespace

std::vector<TrialRecord> RunTrials(const ScenarioConfig& cfg,
                                   double sweep_value, bool measure_time) {
  ValidateConfig(cfg);
  std::vector<TrialRecord> records;
  records.reserve(cfg.trials);
  for (int t = 0; t < cfg.trials; ++t) {
    records.push_back(RunTrial(cfg, sweep_value, t, measure_time));
  }
  return records;
}

SweepRow Summarize(double swept_value, const std::vector<TrialRecord>& records) {
  SweepRow row;
  row.swept_value = swept_value;
  row.trials = static_cast<int>(records.size());
  int ok = 0;
  for (const TrialRecord& r : records) {
    if (r.failed) {
      ++row.failure_count;
      continue;
    }
    ++ok;
    row.mean_translational_error += r.translational_error;
    row.mean_rotational_error += r.rotational_error;
  }
  if (ok > 0) {
    row.mean_translational_error /= ok;
    row.mean_rotational_error /= ok;
  } else {
    row.mean_translational_error = std::numeric_limits<double>::quiet_NaN();
    row.mean_rotational_error = std::numeric_limits<double>::quiet_NaN();
  }

  std::vector<double> times;
  for (const TrialRecord& r : records) {
    if (!r.failed) times.push_back(r.solve_time);
  }
  if (!times.empty()) {
    const int groups =
        std::min<int>(kTimingGroups, static_cast<int>(times.size()));
    std::vector<double> means;
    for (int g = 0; g < groups; ++g) {
      const std::size_t begin = times.size() * g / groups;
      const std::size_t end = times.size() * (g + 1) / groups;
      double sum = 0.0;
      for (std::size_t i = begin; i < end; ++i) sum += times[i];
      means.push_back(sum / static_cast<double>(end - begin));
    }
    std::sort(means.begin(), means.end());
    const std::size_t mid = means.size() / 2;
    row.mean_time = means.size() % 2 == 1 ? means[mid]
                                          : 0.5 * (means[mid - 1] + means[mid]);
  }
  return row;
}

std::vector<double> SweepValues(SweepKind kind) {
  std::vector<double> values;
  switch (kind) {
    case SweepKind::kPoints:
      for (int n = 10; n <= 200; n += 10) values.push_back(n);
      break;
    case SweepKind::kNoise:
      for (int s = 1; s <= 10; ++s) values.push_back(s);
      break;
    case SweepKind::kTiming:
      for (int n = 50; n <= 1000; n += 50) values.push_back(n);
      break;
  }
  return values;
}

std::vector<SweepRow> RunSweep(SweepKind kind, const ScenarioConfig& base,
                               std::vector<std::vector<TrialRecord>>* raw) {
  const std::vector<double> values = SweepValues(kind);
  std::vector<ScenarioConfig> cfgs;
  for (double value : values) {
    cfgs.push_back(RowConfig(kind, base, value));
    ValidateConfig(cfgs.back());
  }
  std::vector<std::vector<TrialRecord>> records(values.size());
  if (kind == SweepKind::kTiming) {
    // Round-robin over rows so slow stretches of the machine spread evenly
    // across all point counts instead of inflating a few adjacent rows.
    for (int t = 0; t < base.trials; ++t) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        records[i].push_back(RunTrial(cfgs[i], values[i], t, true));
      }
    }
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) {
      records[i] = RunTrials(cfgs[i], values[i], false);
    }
  }
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < values.size(); ++i) {
    rows.push_back(Summarize(values[i], records[i]));
  }
  if (raw != nullptr) *raw = std::move(records);
  return rows;
}

void WriteSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows) {
  std::string text =
      "sweep_value,mean_trans_err,mean_rot_err_rad,mean_time_s,failures,trials\n";
  for (const SweepRow& r : rows) {
    AppendNumber(text, r.swept_value);
    text += ',';
    AppendNumber(text, r.mean_translational_error);
    text += ',';
    AppendNumber(text, r.mean_rotational_error);
    text += ',';
    AppendNumber(text, r.mean_time);
    text += ',' + std::to_string(r.failure_count) + ',' +
            std::to_string(r.trials) + '\n';
  }
  out << text;
}

void WriteTrialCsv(std::ostream& out, const std::vector<double>& values,
                   const std::vector<std::vector<TrialRecord>>& records) {
  std::string text =
      "sweep_value,trial,trans_err,rot_err_rad,time_s,converged,failed\n";
  for (std::size_t v = 0; v < records.size() && v < values.size(); ++v) {
    for (const TrialRecord& r : records[v]) {
      AppendNumber(text, values[v]);
      text += ',' + std::to_string(r.trial_index) + ',';
      AppendNumber(text, r.translational_error);
      text += ',';
      AppendNumber(text, r.rotational_error);
      text += ',';
      AppendNumber(text, r.solve_time);
      text += ',' + std::to_string(r.converged ? 1 : 0) + ',' +
              std::to_string(r.failed ? 1 : 0) + '\n';
    }
  }
  out << text;
}

}  // namespace planar_pnp
