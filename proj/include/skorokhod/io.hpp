#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "skorokhod/esm.hpp"
#include "skorokhod/geometry.hpp"
#include "skorokhod/rbm.hpp"

namespace skorokhod {

using Json = nlohmann::json;

/// {"normals": [[...], ...], "offsets": [...], "directions": [[...], ...],
///  "family": "orthant"}; normals and directions are lists of vectors, one per
/// face. {"fixture": "<name>"} loads a built-in example instead.
SPData sp_from_json(const Json& j);
Json sp_to_json(const SPData& sp);

/// {"vertices": [[...], ...], "delta": 0.1}
BPolytope bpolytope_from_json(const Json& j);

/// {"x": [..], "b": [..], "sigma": [[row], [row]], "directions": [[d1], [d2]]}
RbmParams rbm_params_from_json(const Json& j);
/// {"y": [..], "c": [..], "theta": [[row], [row]], "v": [[v1], [v2]]}
Perturbation perturbation_from_json(const Json& j);

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j);

/// CSV "t,faces" with 1-based face sets joined by '|'.
void write_face_trace(std::ostream& os, const std::vector<double>& grid, const std::vector<FaceSet>& faces,
                      const std::vector<bool>& pushed = {});
std::vector<FaceSet> read_face_trace(std::istream& is, std::vector<double>* grid = nullptr,
                                     std::vector<bool>* pushed = nullptr);

Json read_json_file(const std::string& path);

}  // namespace skorokhod
