#include "planar_pnp/cli_io.hpp"

#include <Eigen/Geometry>

#include <charconv>
#include <cmath>
#include <numbers>

#include "json.hpp"
#include "planar_pnp/errors.hpp"

namespace planar_pnp {

namespace {

using nlohmann::json;

constexpr double kUnitTolerance = 1e-6;

const json& Field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw InputError(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw InputError(path + "." + key + ": missing required field");
  }
  return *it;
}

double Number(const json& value, const std::string& path) {
  if (!value.is_number()) throw InputError(path + ": expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw InputError(path + ": must be finite");
  return v;
}

double NumberField(const json& obj, const char* key, const std::string& path) {
  return Number(Field(obj, key, path), path + "." + key);
}

CameraOffset ParseOffset(const json& node) {
  const std::string path = "camera_offset";
  if (!node.is_object()) throw InputError(path + ": expected an object");
  Mat3 rotation;
  if (node.contains("rotation")) {
    const json& r = node["rotation"];
    if (!r.is_array() || r.size() != 9) {
      throw InputError(path + ".rotation: expected 9 numbers (row-major 3x3)");
    }
    for (int i = 0; i < 9; ++i) {
      rotation(i / 3, i % 3) =
          Number(r[i], path + ".rotation[" + std::to_string(i) + "]");
    }
    const double err =
        (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (err > kUnitTolerance) {
      throw InputError(path + ".rotation: not orthonormal to 1e-6");
    }
  } else if (node.contains("quaternion")) {
    const json& q = node["quaternion"];
    const std::string qpath = path + ".quaternion";
    Eigen::Quaterniond quat(NumberField(q, "w", qpath), NumberField(q, "x", qpath),
                            NumberField(q, "y", qpath), NumberField(q, "z", qpath));
    if (std::abs(quat.norm() - 1.0) > kUnitTolerance) {
      throw InputError(qpath + ": not a unit quaternion to 1e-6");
    }
    rotation = quat.normalized().toRotationMatrix();
  } else {
    throw InputError(path + ": expected a \"rotation\" or \"quaternion\" field");
  }
  try {
    return CameraOffset(rotation);
  } catch (const InvalidInput& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

SolveRequest ParseSolveInput(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(e.what());
  }
  if (!doc.is_object()) throw InputError("document: expected a JSON object");

  SolveRequest req;
  const json& intr = Field(doc, "intrinsics", "document");
  req.intrinsics = {NumberField(intr, "fx", "intrinsics"),
                    NumberField(intr, "fy", "intrinsics"),
                    NumberField(intr, "cx", "intrinsics"),
                    NumberField(intr, "cy", "intrinsics")};
  if (!(req.intrinsics.fx > 0.0) || !(req.intrinsics.fy > 0.0)) {
    throw InputError("intrinsics: fx and fy must be positive");
  }

  req.camera_offset = ParseOffset(Field(doc, "camera_offset", "document"));

  const json& corrs = Field(doc, "correspondences", "document");
  if (!corrs.is_array()) throw InputError("correspondences: expected an array");
  if (corrs.size() < 2) {
    throw InputError("correspondences: at least 2 correspondences are "
                     "required, got " + std::to_string(corrs.size()));
  }
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const std::string path = "correspondences[" + std::to_string(i) + "]";
    const json& c = corrs[i];
    req.world_points.push_back({NumberField(c, "px", path),
                                NumberField(c, "py", path),
                                NumberField(c, "pz", path)});
    req.pixels.push_back({NumberField(c, "u", path), NumberField(c, "v", path)});
  }

  if (doc.contains("heading_prior_deg") && !doc["heading_prior_deg"].is_null()) {
    req.heading_prior = Number(doc["heading_prior_deg"], "heading_prior_deg") *
                        std::numbers::pi / 180.0;
  }
  return req;
}

std::string SceneToJson(const Scene& scene) {
  const SolveRequest& req = scene.request;
  json doc;
  doc["intrinsics"] = {{"fx", req.intrinsics.fx},
                       {"fy", req.intrinsics.fy},
                       {"cx", req.intrinsics.cx},
                       {"cy", req.intrinsics.cy}};
  json rotation = json::array();
  for (int i = 0; i < 9; ++i) {
    rotation.push_back(req.camera_offset.rotation()(i / 3, i % 3));
  }
  doc["camera_offset"] = {{"rotation", rotation}};
  json corrs = json::array();
  for (std::size_t i = 0; i < req.world_points.size(); ++i) {
    corrs.push_back({{"px", req.world_points[i].x},
                     {"py", req.world_points[i].y},
                     {"pz", req.world_points[i].z},
                     {"u", req.pixels[i].u},
                     {"v", req.pixels[i].v}});
  }
  doc["correspondences"] = corrs;
  doc["ground_truth"] = {{"x", scene.truth.x},
                         {"y", scene.truth.y},
                         {"theta_rad", scene.truth.theta}};
  return doc.dump(2) + "\n";
}

std::string FormatSolution(const Solution& sol) {
  const std::size_t candidates =
      sol.init_diagnostics ? sol.init_diagnostics->n_pose_candidates : 0;
  std::string out;
  out += "x=" + FormatDouble(sol.pose.x) + "\n";
  out += "y=" + FormatDouble(sol.pose.y) + "\n";
  out += "theta_rad=" + FormatDouble(sol.pose.theta) + "\n";
  out += "theta_deg=" + FormatDouble(sol.pose.theta * 180.0 / std::numbers::pi) + "\n";
  out += "reprojection_error=" + FormatDouble(sol.reprojection_error) + "\n";
  out += "iterations=" + std::to_string(sol.refine_result.iterations) + "\n";
  out += "candidates_considered=" + std::to_string(candidates) + "\n";
  return out;
}

}  // namespace planar_pnp
