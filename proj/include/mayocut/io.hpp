#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mayocut/discrete_solver.hpp"
#include "mayocut/measure_solver.hpp"
#include "mayocut/oracle.hpp"

// File formats and report serialization. Instance files carry exact scalars
// (integers, "p/q" fraction strings, or decimal strings converted digit by
// digit), so parse -> serialize -> parse round-trips bit-exactly. Shape
// files are double precision. See docs/formats.md for the grammar.

namespace mayocut {

using json = nlohmann::json;

// Reads the file, or standard input when path is "-".
std::string read_input(const std::string& path);

// JSON parse with 1-based line/column reporting via parse_error.
json parse_json_text(const std::string& text, const std::string& filename);

enum class FileKind { Instance, Shapes };

// An instance file has "sets", a shape file has "shapes".
FileKind sniff_kind(const json& doc, const std::string& filename);

Instance instance_from_json(const json& doc, const std::string& filename);
json instance_to_json(const Instance& inst);

struct ShapeFile {
  std::size_t dimension = 0;
  std::vector<ShapeSpec> shapes;
};

ShapeFile shapes_from_json(const json& doc, const std::string& filename);

// "u=c1,c2,...;c=v" with exact scalars; canonicalized on parse.
HyperplaneQ parse_plane(const std::string& text, std::size_t dimension);

HyperplaneD plane_to_double(const HyperplaneQ& plane);

json hyperplane_to_json(const HyperplaneQ& h);
json hyperplane_to_json(const HyperplaneD& h);
json solution_to_json(const Solution& sol);
json verify_report_to_json(const VerifyReport& report);
json grid_verify_report_to_json(const GridVerifyReport& report);
json measure_solution_to_json(const MeasureSolution& sol);

}  // namespace mayocut
