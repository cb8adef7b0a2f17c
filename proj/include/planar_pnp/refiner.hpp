#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "planar_pnp/geometry.hpp"

namespace planar_pnp {

struct RefineOptions {
  int max_iterations{100};
  double gradient_tolerance{1e-12};
  double step_tolerance{1e-10};
  double initial_damping{1e-3};
  double damping_up_factor{10.0};
  double damping_down_factor{10.0};
};

enum class TerminationReason { kGradient, kStep, kMaxIterations, kNumericalFailure };

std::string_view ToString(TerminationReason reason);

struct RefineResult {
  Pose2D pose;
  double initial_error{0.0};
  double final_error{0.0};
  int iterations{0};
  bool converged{false};
  TerminationReason termination_reason{TerminationReason::kMaxIterations};
  /// Error at the start and after every accepted step.
  std::vector<double> error_history;
};

/// Levenberg-Marquardt on the reprojection error over (x, y, theta) with
/// Marquardt (diagonal) damping. Steps are accepted only if they lower the
/// error, so final_error <= initial_error. When the damped system stays
/// singular up to a damping of 1e12 the best pose so far is returned with
/// reason kNumericalFailure.
RefineResult Refine(const Pose2D& pose0, double beta,
                    std::span<const Correspondence> corrs,
                    const RefineOptions& opts = {});

}  // namespace planar_pnp
