#include "cli_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "simplexcert/errors.hpp"

namespace simplexcert::cli {

namespace {

Eigen::VectorXd json_to_vector(const Json& j, int dimension,
                               const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != dimension) {
    throw InvalidInputError(what + ": expected an array of " +
                            std::to_string(dimension) + " numbers");
  }
  Eigen::VectorXd v(dimension);
  for (int i = 0; i < dimension; ++i) {
    if (!j[i].is_number()) {
      throw InvalidInputError(what + ": coordinates must be numbers");
    }
    v(i) = j[i].get<double>();
  }
  if (!v.allFinite()) {
    throw InvalidInputError(what + ": coordinates must be finite");
  }
  return v;
}

}  // namespace

VertexFile load_vertex_file(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) {
    throw InvalidInputError("cannot open input file: " + path);
  }
  Json j;
  try {
    j = Json::parse(stream);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw InvalidInputError("input file must hold a JSON object");
  }
  if (!j.contains("dimension") || !j["dimension"].is_number_integer() ||
      j["dimension"].get<int>() < 1) {
    throw InvalidInputError("input file needs a positive integer dimension");
  }

  VertexFile file;
  file.dimension = j["dimension"].get<int>();
  if (!j.contains("vertices") || !j["vertices"].is_array() ||
      j["vertices"].empty()) {
    throw InvalidInputError("input file needs a non-empty vertices array");
  }
  const auto& rows = j["vertices"];
  const int count = static_cast<int>(rows.size());
  if (count > file.dimension + 1) {
    throw InvalidInputError(
        "vertex count may not exceed dimension + 1 (a simplex has n + 1 "
        "vertices with n <= dimension)");
  }
  file.vertices.resize(file.dimension, count);
  for (int k = 0; k < count; ++k) {
    file.vertices.col(k) =
        json_to_vector(rows[k], file.dimension, "vertex " + std::to_string(k));
  }

  if (j.contains("points")) {
    if (!j["points"].is_object()) {
      throw InvalidInputError("points must be an object of named arrays");
    }
    for (const auto& [name, coords] : j["points"].items()) {
      file.points[name] =
          json_to_vector(coords, file.dimension, "point " + name);
    }
  }
  if (j.contains("tolerance")) {
    if (!j["tolerance"].is_number() || !(j["tolerance"].get<double>() > 0.0)) {
      throw InvalidInputError("tolerance must be a positive number");
    }
    file.tolerance = j["tolerance"].get<double>();
  }
  return file;
}

Eigen::VectorXd parse_coordinates(const std::string& spec) {
  std::vector<double> values;
  std::stringstream stream(spec);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      const double value = std::stod(item, &used);
      while (used < item.size() &&
             std::isspace(static_cast<unsigned char>(item[used]))) {
        ++used;
      }
      if (used != item.size()) throw std::invalid_argument(item);
      values.push_back(value);
    } catch (const std::exception&) {
      throw InvalidInputError("cannot parse coordinate list: " + spec);
    }
  }
  if (values.empty()) {
    throw InvalidInputError("empty coordinate list");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = values[i];
  }
  if (!v.allFinite()) {
    throw InvalidInputError("coordinates must be finite");
  }
  return v;
}

Eigen::VectorXd resolve_point(const VertexFile& file,
                              const std::string& spec) {
  const auto named = file.points.find(spec);
  const Eigen::VectorXd v =
      named != file.points.end() ? named->second : parse_coordinates(spec);
  if (v.size() != file.dimension) {
    throw InvalidInputError("point '" + spec + "' has " +
                            std::to_string(v.size()) +
                            " coordinates, expected " +
                            std::to_string(file.dimension));
  }
  return v;
}

Json vector_to_json(const Eigen::Ref<const Eigen::VectorXd>& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json columns_to_json(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  Json out = Json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    out.push_back(vector_to_json(m.col(c)));
  }
  return out;
}

namespace {

std::string format_double(double value) {
  if (std::isnan(value)) return "\"nan\"";
  if (std::isinf(value)) return value > 0 ? "\"inf\"" : "\"-inf\"";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

bool all_primitive(const Json& j) {
  for (const auto& item : j) {
    if (item.is_structured()) return false;
  }
  return true;
}

void emit(std::ostream& os, const Json& j, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth), ' ');
  const std::string inner(2 * static_cast<std::size_t>(depth + 1), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) os << ",\n";
      first = false;
      os << inner << Json(key).dump() << ": ";
      emit(os, value, depth + 1);
    }
    os << "\n" << pad << "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      os << "[]";
      return;
    }
    const bool inline_array = all_primitive(j);
    os << "[";
    bool first = true;
    for (const auto& item : j) {
      if (!first) os << (inline_array ? ", " : ",");
      if (!inline_array) os << "\n" << inner;
      first = false;
      emit(os, item, depth + 1);
    }
    if (!inline_array) os << "\n" << pad;
    os << "]";
  } else if (j.is_number_float()) {
    os << format_double(j.get<double>());
  } else {
    os << j.dump();
  }
}

}  // namespace

void write_report(std::ostream& os, const Json& report) {
  emit(os, report, 0);
  os << "\n";
}

}  // namespace simplexcert::cli
