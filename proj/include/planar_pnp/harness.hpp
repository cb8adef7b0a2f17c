#pragma once

// Synthetic experiments: random scenes in front of a camera at the origin,
// Gaussian pixel noise, accuracy and timing sweeps.

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "planar_pnp/geometry.hpp"
#include "planar_pnp/solver.hpp"

namespace planar_pnp {

struct ScenarioConfig {
  int n_points{50};
  double noise_sigma_px{2.0};
  double focal_px{800.0};
  // Sampling box in camera space (x right, y down, z forward).
  double x_min{-2.0}, x_max{2.0};
  double y_min{-2.0}, y_max{2.0};
  double z_min{4.0}, z_max{8.0};
  double beta_min_deg{10.0};
  double beta_max_deg{170.0};
  int trials{250};
  std::uint64_t master_seed{0};
};

/// Throws InvalidInput when the config breaks its invariants.
void ValidateConfig(const ScenarioConfig& cfg);

struct Scene {
  SolveRequest request;
  Pose2D truth;
  /// Sampled points in camera space, before mapping to the world.
  std::vector<Vec3> camera_points;
};

struct TrialRecord {
  int trial_index{0};
  double translational_error{0.0};
  double rotational_error{0.0};
  double solve_time{0.0};  // seconds; 0 unless timing was requested
  bool converged{false};
  bool failed{false};
};

struct SweepRow {
  double swept_value{0.0};
  double mean_translational_error{0.0};
  double mean_rotational_error{0.0};
  double mean_time{0.0};
  int failure_count{0};
  int trials{0};
};

enum class SweepKind { kPoints, kNoise, kTiming };

/// Seed of one trial, mixed from the master seed, the swept value and the
/// trial index.
std::uint64_t TrialSeed(std::uint64_t master_seed, double sweep_value,
                        int trial_index);

/// Uniform random mounting rotation (rejected until its ZYZ pitch lies in
/// the configured range), points uniform in the camera-space box, ground
/// truth pose (0, 0, 0), intrinsics (f, f, 0, 0).
Scene GenerateScene(const ScenarioConfig& cfg, std::uint64_t trial_seed);

/// Planar distance and wrapped absolute heading difference.
std::pair<double, double> PoseErrors(const Pose2D& estimate, const Pose2D& truth);

/// `cfg.trials` independent trials with seeds TrialSeed(master, value, i).
std::vector<TrialRecord> RunTrials(const ScenarioConfig& cfg,
                                   double sweep_value, bool measure_time);

/// Aggregates trial records; failed trials (solver error or no convergence)
/// are counted and excluded from the means.
/// Timing is the median over up to five contiguous groups of per-group means.
SweepRow Summarize(double swept_value, const std::vector<TrialRecord>& records);

/// Swept values for each kind: points 10..200 step 10, noise 1..10 px,
/// timing 50..1000 step 50.
std::vector<double> SweepValues(SweepKind kind);

/// Runs a full sweep. Points and noise sweeps report accuracy only
/// (mean_time = 0) so their output is reproducible bit for bit; the timing
/// sweep measures wall-clock time of Solve() alone, running trials
/// round-robin across point counts.
std::vector<SweepRow> RunSweep(SweepKind kind, const ScenarioConfig& base,
                               std::vector<std::vector<TrialRecord>>* raw = nullptr);

void WriteSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows);
void WriteTrialCsv(std::ostream& out, const std::vector<double>& values,
                   const std::vector<std::vector<TrialRecord>>& records);

}  // namespace planar_pnp
