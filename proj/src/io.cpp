#include "skorokhod/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "skorokhod/errors.hpp"
#include "skorokhod/fixtures.hpp"

namespace skorokhod {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::argument, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::argument, std::string("bad field '") + key + "': " + e.what());
  }
}

Mat columns_from_json(const Json& j, const char* key) {
  const auto cols = field<std::vector<std::vector<double>>>(j, key);
  if (cols.empty()) throw Error(ErrorKind::argument, std::string("field '") + key + "' is empty");
  const auto dim = cols.front().size();
  Mat m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != dim) throw Error(ErrorKind::argument, std::string("ragged field '") + key + "'");
    for (std::size_t r = 0; r < dim; ++r) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cols[c][r];
  }
  return m;
}

Mat rows_from_json(const Json& j, const char* key) { return columns_from_json(j, key).transpose(); }

Json columns_to_json(const Mat& m) {
  Json out = Json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(vec_to_json(m.col(c)));
  return out;
}

}  // namespace

Json vec_to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vec vec_from_json(const Json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

SPData sp_from_json(const Json& j) {
  if (j.contains("fixture")) {
    const auto name = field<std::string>(j, "fixture");
    if (name == "d2_w_point") return d2_sp();
    if (name == "d1_v_point") return build_d1_esp().sp;
    if (name == "ghr_oblique") return build_ghr_oblique().sp;
    if (name == "quadrant_normal") return build_quadrant_normal().sp;
    throw Error(ErrorKind::argument, "unknown fixture '" + name + "'");
  }
  const PiFamily family = parse_pi_family(field<std::string>(j, "family"));
  if (family == PiFamily::custom_pi) {
    throw Error(ErrorKind::unsupported_configuration, "custom_pi data can only be loaded via \"fixture\"");
  }
  const Mat n = columns_from_json(j, "normals");
  const Mat d = columns_from_json(j, "directions");
  const Vec c = vec_from_json(j.at("offsets"));
  return SPData(n, c, d, family);
}

Json sp_to_json(const SPData& sp) {
  Json out;
  out["normals"] = columns_to_json(sp.normals());
  out["offsets"] = vec_to_json(sp.offsets());
  out["directions"] = columns_to_json(sp.directions());
  out["family"] = to_string(sp.family());
  return out;
}

BPolytope bpolytope_from_json(const Json& j) {
  const Mat v = columns_from_json(j, "vertices");
  std::vector<Vec> verts;
  for (Eigen::Index c = 0; c < v.cols(); ++c) verts.push_back(v.col(c));
  return BPolytope(std::move(verts));
}

RbmParams rbm_params_from_json(const Json& j) {
  RbmParams p;
  p.x = vec_from_json(j.at("x"));
  if (j.contains("b")) p.b = vec_from_json(j.at("b"));
  if (j.contains("sigma")) p.sigma = rows_from_json(j, "sigma");
  if (j.contains("directions")) p.r = columns_from_json(j, "directions");
  p.validate();
  return p;
}

Perturbation perturbation_from_json(const Json& j) {
  Perturbation p;
  if (j.contains("y")) p.y = vec_from_json(j.at("y"));
  if (j.contains("c")) p.c = vec_from_json(j.at("c"));
  if (j.contains("theta")) p.theta = rows_from_json(j, "theta");
  if (j.contains("v")) p.v = columns_from_json(j, "v");
  return p;
}

void write_face_trace(std::ostream& os, const std::vector<double>& grid, const std::vector<FaceSet>& faces,
                      const std::vector<bool>& pushed) {
  const auto old = os.precision(17);
  os << (pushed.empty() ? "t,faces\n" : "t,faces,pushed\n");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    os << grid[k] << ',' << faces[k].to_string();
    if (!pushed.empty()) os << ',' << (pushed[k] ? 1 : 0);
    os << '\n';
  }
  os.precision(old);
}

std::vector<FaceSet> read_face_trace(std::istream& is, std::vector<double>* grid, std::vector<bool>* pushed) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::io, "empty face trace");
  const bool has_pushed = line.find("pushed") != std::string::npos;
  std::vector<FaceSet> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorKind::io, "face trace row needs t,faces");
    const auto second = has_pushed ? line.find(',', comma + 1) : std::string::npos;
    if (has_pushed && second == std::string::npos) throw Error(ErrorKind::io, "face trace row needs t,faces,pushed");
    try {
      if (grid) grid->push_back(std::stod(line.substr(0, comma)));
      if (has_pushed && pushed) pushed->push_back(std::stoi(line.substr(second + 1)) != 0);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::io, "bad face trace row '" + line + "'");
    }
    const auto len = second == std::string::npos ? std::string::npos : second - comma - 1;
    out.push_back(FaceSet::parse(line.substr(comma + 1, len)));
  }
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::io, "cannot parse '" + path + "': " + e.what());
  }
}

}  // namespace skorokhod
