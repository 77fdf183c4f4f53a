#include "silcal/geom/config_io.hpp"

#include <cmath>

#include <Eigen/LU>

#include "silcal/common/json_util.hpp"

namespace silcal::geom {
namespace {

PsmDimensions dimensions_from_json(const Json& root,
                                   const std::string& context) {
  check_schema_version(root, 1, context);
  check_allowed_keys(root, {"schema_version", "kind", "dimensions"}, context);
  require_key(root, "kind", context);
  const std::string kind = root.at("kind").get<std::string>();
  if (kind != "psm_procedural")
    throw ConfigError(context + ": unsupported model kind \"" + kind + "\"");
  PsmDimensions dims;
  if (root.contains("dimensions")) {
    const Json& d = root.at("dimensions");
    check_allowed_keys(d,
                       {"shaft_radius", "shaft_length", "shaft_sides",
                        "wrist_width", "wrist_depth", "wrist_length",
                        "wrist_offset", "jaw_offset", "jaw_length",
                        "jaw_base_width", "jaw_base_thickness"},
                       context + ".dimensions");
    auto get = [&d](const char* key, double fallback) {
      return d.contains(key) ? d.at(key).get<double>() : fallback;
    };
    dims.shaft_radius = get("shaft_radius", dims.shaft_radius);
    dims.shaft_length = get("shaft_length", dims.shaft_length);
    if (d.contains("shaft_sides"))
      dims.shaft_sides = d.at("shaft_sides").get<int>();
    dims.wrist_width = get("wrist_width", dims.wrist_width);
    dims.wrist_depth = get("wrist_depth", dims.wrist_depth);
    dims.wrist_length = get("wrist_length", dims.wrist_length);
    dims.wrist_offset = get("wrist_offset", dims.wrist_offset);
    dims.jaw_offset = get("jaw_offset", dims.jaw_offset);
    dims.jaw_length = get("jaw_length", dims.jaw_length);
    dims.jaw_base_width = get("jaw_base_width", dims.jaw_base_width);
    dims.jaw_base_thickness =
        get("jaw_base_thickness", dims.jaw_base_thickness);
  }
  dims.validate();
  return dims;
}

}  // namespace

RobotModel load_robot_model(const std::string& path) {
  const Json root = load_json_file(path, "robot model");
  return build_psm_model(dimensions_from_json(root, "robot model"));
}

PsmDimensions parse_psm_dimensions(const std::string& json_text,
                                   const std::string& context) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(context + ": invalid JSON (" + e.what() + ")");
  }
  return dimensions_from_json(root, context);
}

void save_robot_model(const std::string& path, const PsmDimensions& dims) {
  Json root;
  root["schema_version"] = 1;
  root["kind"] = "psm_procedural";
  Json& d = root["dimensions"];
  d["shaft_radius"] = dims.shaft_radius;
  d["shaft_length"] = dims.shaft_length;
  d["shaft_sides"] = dims.shaft_sides;
  d["wrist_width"] = dims.wrist_width;
  d["wrist_depth"] = dims.wrist_depth;
  d["wrist_length"] = dims.wrist_length;
  d["wrist_offset"] = dims.wrist_offset;
  d["jaw_offset"] = dims.jaw_offset;
  d["jaw_length"] = dims.jaw_length;
  d["jaw_base_width"] = dims.jaw_base_width;
  d["jaw_base_thickness"] = dims.jaw_base_thickness;
  save_json_file(path, root);
}

CameraIntrinsics intrinsics_from_json(const Json& obj,
                                      const std::string& context) {
  check_allowed_keys(obj, {"fx", "fy", "cu", "cv", "width", "height"},
                     context);
  CameraIntrinsics cam;
  for (const char* key : {"fx", "fy", "cu", "cv", "width", "height"})
    require_key(obj, key, context);
  cam.fx = obj.at("fx").get<double>();
  cam.fy = obj.at("fy").get<double>();
  cam.cu = obj.at("cu").get<double>();
  cam.cv = obj.at("cv").get<double>();
  cam.width = obj.at("width").get<int>();
  cam.height = obj.at("height").get<int>();
  cam.validate();
  return cam;
}

Json intrinsics_to_json(const CameraIntrinsics& cam) {
  return Json{{"fx", cam.fx},       {"fy", cam.fy},
              {"cu", cam.cu},       {"cv", cam.cv},
              {"width", cam.width}, {"height", cam.height}};
}

Json transform_to_json(const RigidTransform& t) {
  return Json(t.matrix_row_major());
}

RigidTransform transform_from_json(const Json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 16)
    throw ConfigError(context + ": transform must be a 16-element array");
  std::array<double, 16> m{};
  for (int i = 0; i < 16; ++i) m[i] = j.at(i).get<double>();
  for (int c = 0; c < 4; ++c) {
    const double want = c == 3 ? 1.0 : 0.0;
    if (std::abs(m[12 + c] - want) > 1e-12)
      throw ConfigError(context + ": transform bottom row must be 0 0 0 1");
  }
  RigidTransform t;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) t.rotation(r, c) = m[4 * r + c];
    t.translation[r] = m[4 * r + 3];
  }
  if (std::abs(t.rotation.determinant() - 1.0) > 1e-6)
    throw ConfigError(context + ": transform rotation block is not a rotation");
  return t;
}

CameraIntrinsics load_intrinsics(const std::string& path) {
  Json root = load_json_file(path, "intrinsics");
  check_schema_version(root, 1, "intrinsics");
  root.erase("schema_version");
  return intrinsics_from_json(root, "intrinsics");
}

void save_intrinsics(const std::string& path, const CameraIntrinsics& cam) {
  Json root = intrinsics_to_json(cam);
  root["schema_version"] = 1;
  save_json_file(path, root);
}

}  // namespace silcal::geom
