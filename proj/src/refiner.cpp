#include "planar_pnp/refiner.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "planar_pnp/errors.hpp"
#include "planar_pnp/reprojection.hpp"

namespace planar_pnp {

namespace {

constexpr double kMaxDamping = 1e12;

// Gaussian elimination with partial pivoting; false when a pivot vanishes.
bool Solve3(Eigen::Matrix3d a, Eigen::Vector3d b, Eigen::Vector3d* x) {
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (!(std::abs(a(pivot, col)) > 0.0)) return false;
    if (pivot != col) {
      a.row(col).swap(a.row(pivot));
      std::swap(b(col), b(pivot));
    }
    for (int r = col + 1; r < 3; ++r) {
      const double f = a(r, col) / a(col, col);
      a.row(r) -= f * a.row(col);
      b(r) -= f * b(col);
    }
  }
  for (int r = 2; r >= 0; --r) {
    double acc = b(r);
    for (int c = r + 1; c < 3; ++c) acc -= a(r, c) * (*x)(c);
    (*x)(r) = acc / a(r, r);
  }
  return x->allFinite();
}

}  // namespace

std::string_view ToString(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::kGradient: return "gradient";
    case TerminationReason::kStep: return "step";
    case TerminationReason::kMaxIterations: return "max_iter";
    case TerminationReason::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

RefineResult Refine(const Pose2D& pose0, double beta,
                    std::span<const Correspondence> corrs,
                    const RefineOptions& opts) {
  RefineResult result;
  result.pose = pose0;
  result.pose.theta = WrapAngle(pose0.theta);

  ResidualVector r;
  JacobianMatrix j;
  Linearize(result.pose, beta, corrs, &r, &j);
  double error = r.squaredNorm();
  result.initial_error = error;
  result.error_history.push_back(error);
  double lambda = opts.initial_damping;

  while (true) {
    const Eigen::Matrix3d jtj = j.transpose() * j;
    const Eigen::Vector3d gradient = j.transpose() * r;
    if (gradient.lpNorm<Eigen::Infinity>() < opts.gradient_tolerance) {
      result.converged = true;
      result.termination_reason = TerminationReason::kGradient;
      break;
    }
    if (result.iterations >= opts.max_iterations) {
      result.termination_reason = TerminationReason::kMaxIterations;
      break;
    }
    ++result.iterations;

    Eigen::Matrix3d damped = jtj;
    damped.diagonal() += lambda * jtj.diagonal();
    Eigen::Vector3d delta;
    if (!Solve3(damped, -gradient, &delta)) {
      if (lambda >= kMaxDamping) {
        result.termination_reason = TerminationReason::kNumericalFailure;
        break;
      }
      lambda *= opts.damping_up_factor;
      continue;
    }

    const Pose2D trial{result.pose.x + delta(0), result.pose.y + delta(1),
                       WrapAngle(result.pose.theta + delta(2))};
    double trial_error = std::numeric_limits<double>::infinity();
    ResidualVector trial_r;
    try {
      trial_r = Residuals(trial, beta, corrs);
      trial_error = trial_r.squaredNorm();
    } catch (const ProjectionSingular&) {
    }

    const double pose_norm =
        std::sqrt(result.pose.x * result.pose.x + result.pose.y * result.pose.y +
                  result.pose.theta * result.pose.theta);
    const bool small_step = delta.norm() < opts.step_tolerance * (1.0 + pose_norm);

    if (trial_error < error) {
      result.pose = trial;
      error = trial_error;
      result.error_history.push_back(error);
      Linearize(result.pose, beta, corrs, &r, &j);
      lambda = std::max(lambda / opts.damping_down_factor, 1e-20);
    } else {
      lambda *= opts.damping_up_factor;
    }
    if (small_step) {
      result.converged = true;
      result.termination_reason = TerminationReason::kStep;
      break;
    }
  }
  result.final_error = error;
  return result;
}

}  // namespace planar_pnp
