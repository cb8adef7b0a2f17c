#pragma once

// JSON solve-input documents and key=value solution output.
//
//   {
//     "intrinsics": {"fx": 800, "fy": 800, "cx": 0, "cy": 0},
//     "camera_offset": {"rotation": [r00, r01, r02, r10, ..., r22]},
//        or           {"quaternion": {"w": 1, "x": 0, "y": 0, "z": 0}},
//     "correspondences": [{"px": .., "py": .., "pz": .., "u": .., "v": ..}],
//     "heading_prior_deg": 12.5          (optional)
//   }

#include <stdexcept>
#include <string>
#include <string_view>

#include "planar_pnp/harness.hpp"
#include "planar_pnp/solver.hpp"

namespace planar_pnp {

/// Malformed document; the message names the offending line or field.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SolveRequest ParseSolveInput(std::string_view text);

/// Document describing a generated scene, with its ground truth attached.
std::string SceneToJson(const Scene& scene);

/// x, y, theta_rad, theta_deg, reprojection_error, iterations,
/// candidates_considered; one key=value per line.
std::string FormatSolution(const Solution& sol);

/// Shortest round-trip decimal form, independent of the C locale.
std::string FormatDouble(double value);

}  // namespace planar_pnp
