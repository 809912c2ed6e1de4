#pragma once

#include <Eigen/Dense>
#include <json.hpp>
#include <map>
#include <optional>
#include <ostream>
#include <string>

namespace simplexcert::cli {

using Json = nlohmann::ordered_json;

// Parsed input file: {"dimension": d, "vertices": [[...], ...],
// "points": {"name": [...]}, "tolerance": t}. The last two are optional.
struct VertexFile {
  int dimension = 0;
  Eigen::MatrixXd vertices;  // d x (n+1)
  std::map<std::string, Eigen::VectorXd> points;
  std::optional<double> tolerance;
};

VertexFile load_vertex_file(const std::string& path);

// A point argument is either a name from the file's points map or a
// comma-separated coordinate list.
Eigen::VectorXd resolve_point(const VertexFile& file, const std::string& spec);

// Comma-separated doubles.
Eigen::VectorXd parse_coordinates(const std::string& spec);

Json vector_to_json(const Eigen::Ref<const Eigen::VectorXd>& v);
Json columns_to_json(const Eigen::Ref<const Eigen::MatrixXd>& m);

// Report writer. Doubles are rendered with 17 significant digits so every
// value round-trips exactly; non-finite values become quoted strings.
void write_report(std::ostream& os, const Json& report);

}  // namespace simplexcert::cli
