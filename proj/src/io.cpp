#include "mayocut/io.hpp"

#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>

namespace mayocut {

namespace {

[[noreturn]] void fail(const std::string& filename, const std::string& what) {
  throw parse_error(filename, 0, 0, what);
}

// Exact scalar: JSON integer, "p/q" string, or decimal string. Non-integer
// JSON numbers are converted through their shortest decimal representation.
Rat scalar_from_json(const json& j, const std::string& filename, const std::string& where) {
  if (j.is_number_integer()) return Rat(Int(j.get<std::int64_t>()));
  if (j.is_number()) {
    if (auto r = parse_rat(j.dump())) return *r;
    fail(filename, where + ": cannot read number exactly");
  }
  if (j.is_string()) {
    if (auto r = parse_rat(j.get<std::string>())) return *r;
    fail(filename, where + ": malformed scalar '" + j.get<std::string>() + "'");
  }
  fail(filename, where + ": expected a number or a fraction string");
}

double double_from_json(const json& j, const std::string& filename, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    if (auto r = parse_rat(j.get<std::string>())) return rat_to_double(*r);
  }
  fail(filename, where + ": expected a number");
}

PointD point_d_from_json(const json& j, std::size_t dim, const std::string& filename,
                         const std::string& where) {
  if (!j.is_array() || j.size() != dim)
    fail(filename, where + ": expected an array of " + std::to_string(dim) + " coordinates");
  PointD p;
  p.coords.reserve(dim);
  for (const auto& c : j) p.coords.push_back(double_from_json(c, filename, where));
  return p;
}

json rat_json(const Rat& q) { return json(rat_to_string(q)); }

}  // namespace

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error(path, 0, 0, "cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json parse_json_text(const std::string& text, const std::string& filename) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // convert the byte offset into line/column
    std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    byte = std::min(byte, text.size());
    int line = 1, column = 1;
    for (std::size_t i = 0; i < byte; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (auto pos = what.find("] "); pos != std::string::npos) what = what.substr(pos + 2);
    throw parse_error(filename, line, column, what);
  }
}

FileKind sniff_kind(const json& doc, const std::string& filename) {
  if (!doc.is_object()) fail(filename, "top level must be an object");
  if (doc.contains("sets")) return FileKind::Instance;
  if (doc.contains("shapes")) return FileKind::Shapes;
  fail(filename, "expected an instance file (\"sets\") or a shape file (\"shapes\")");
}

Instance instance_from_json(const json& doc, const std::string& filename) {
  if (!doc.is_object() || !doc.contains("dimension") || !doc.contains("sets"))
    fail(filename, "instance file needs \"dimension\" and \"sets\"");
  if (!doc["dimension"].is_number_unsigned() || doc["dimension"].get<std::size_t>() == 0)
    fail(filename, "\"dimension\" must be a positive integer");
  const auto dim = doc["dimension"].get<std::size_t>();
  if (!doc["sets"].is_array() || doc["sets"].empty()) fail(filename, "\"sets\" must be a nonempty array");

  std::vector<AtomicMeasureQ> measures;
  for (const auto& set : doc["sets"]) {
    if (!set.is_object() || !set.contains("atoms")) fail(filename, "each set needs \"atoms\"");
    const std::string name = set.value("name", "");
    std::vector<Atom<Rat>> atoms;
    for (const auto& atom : set["atoms"]) {
      if (!atom.is_object() || !atom.contains("point"))
        fail(filename, "each atom needs a \"point\"");
      const auto& pt = atom["point"];
      if (!pt.is_array() || pt.size() != dim)
        fail(filename, "set '" + name + "': point must have " + std::to_string(dim) +
                           " coordinates");
      PointQ p;
      p.coords.reserve(dim);
      for (const auto& c : pt)
        p.coords.push_back(scalar_from_json(c, filename, "set '" + name + "' point"));
      Rat mass{1};
      if (atom.contains("mass"))
        mass = scalar_from_json(atom["mass"], filename, "set '" + name + "' mass");
      if (!(mass > 0)) fail(filename, "set '" + name + "': mass must be positive");
      atoms.push_back(Atom<Rat>{std::move(p), std::move(mass)});
    }
    try {
      measures.emplace_back(std::move(atoms), name);
    } catch (const invalid_input& e) {
      fail(filename, std::string(e.what()));
    }
  }
  try {
    return Instance(std::move(measures));
  } catch (const invalid_input& e) {
    fail(filename, std::string(e.what()));
  }
}

json instance_to_json(const Instance& inst) {
  json sets = json::array();
  for (const auto& mu : inst.measures()) {
    json atoms = json::array();
    for (const auto& a : mu.atoms()) {
      json point = json::array();
      for (const Rat& c : a.point.coords) point.push_back(rat_json(c));
      atoms.push_back({{"point", point}, {"mass", rat_json(a.mass)}});
    }
    sets.push_back({{"name", mu.name()}, {"atoms", atoms}});
  }
  return {{"dimension", inst.dimension()}, {"sets", sets}};
}

ShapeFile shapes_from_json(const json& doc, const std::string& filename) {
  if (!doc.is_object() || !doc.contains("dimension") || !doc.contains("shapes"))
    fail(filename, "shape file needs \"dimension\" and \"shapes\"");
  if (!doc["dimension"].is_number_unsigned() || doc["dimension"].get<std::size_t>() == 0)
    fail(filename, "\"dimension\" must be a positive integer");
  ShapeFile out;
  out.dimension = doc["dimension"].get<std::size_t>();
  if (!doc["shapes"].is_array() || doc["shapes"].empty())
    fail(filename, "\"shapes\" must be a nonempty array");

  for (const auto& shape : doc["shapes"]) {
    if (!shape.is_object() || !shape.contains("components"))
      fail(filename, "each shape needs \"components\"");
    ShapeSpec spec;
    spec.name = shape.value("name", "");
    for (const auto& comp : shape["components"]) {
      if (!comp.is_object() || !comp.contains("type") || !comp["type"].is_string())
        fail(filename, "shape '" + spec.name + "': component needs a \"type\" string");
      const std::string type = comp["type"].get<std::string>();
      const std::string where = "shape '" + spec.name + "' " + type;
      if (type == "disk" || type == "ball") {
        BallShape ball;
        if (!comp.contains("center") || !comp.contains("radius"))
          fail(filename, where + ": needs \"center\" and \"radius\"");
        ball.center = point_d_from_json(comp["center"], out.dimension, filename, where);
        ball.radius = double_from_json(comp["radius"], filename, where);
        ball.density = comp.contains("density")
                           ? double_from_json(comp["density"], filename, where)
                           : 1.0;
        spec.parts.emplace_back(ball);
      } else if (type == "box") {
        BoxShape box;
        if (!comp.contains("min") || !comp.contains("max"))
          fail(filename, where + ": needs \"min\" and \"max\"");
        box.lo = point_d_from_json(comp["min"], out.dimension, filename, where);
        box.hi = point_d_from_json(comp["max"], out.dimension, filename, where);
        box.density = comp.contains("density")
                          ? double_from_json(comp["density"], filename, where)
                          : 1.0;
        spec.parts.emplace_back(box);
      } else {
        fail(filename, where + ": unknown component type");
      }
    }
    try {
      spec.validate();
    } catch (const invalid_input& e) {
      fail(filename, std::string(e.what()));
    }
    out.shapes.push_back(std::move(spec));
  }
  return out;
}

HyperplaneQ parse_plane(const std::string& text, std::size_t dimension) {
  const std::string filename = "--plane";
  std::string compact;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
  const auto semi = compact.find(';');
  if (semi == std::string::npos) fail(filename, "expected \"u=c1,c2,...;c=v\"");
  const std::string upart = compact.substr(0, semi);
  const std::string cpart = compact.substr(semi + 1);
  if (upart.rfind("u=", 0) != 0 || cpart.rfind("c=", 0) != 0)
    fail(filename, "expected \"u=c1,c2,...;c=v\"");

  HyperplaneQ h;
  std::stringstream components(upart.substr(2));
  std::string piece;
  while (std::getline(components, piece, ',')) {
    auto r = parse_rat(piece);
    if (!r) fail(filename, "malformed normal component '" + piece + "'");
    h.normal.push_back(std::move(*r));
  }
  if (h.normal.size() != dimension)
    fail(filename, "normal needs " + std::to_string(dimension) + " components");
  auto c = parse_rat(cpart.substr(2));
  if (!c) fail(filename, "malformed offset '" + cpart.substr(2) + "'");
  h.offset = std::move(*c);
  try {
    return canonicalize(h);
  } catch (const invalid_input& e) {
    fail(filename, std::string(e.what()));
  }
}

HyperplaneD plane_to_double(const HyperplaneQ& plane) {
  HyperplaneD h;
  h.normal.reserve(plane.normal.size());
  for (const Rat& v : plane.normal) h.normal.push_back(rat_to_double(v));
  h.offset = rat_to_double(plane.offset);
  return canonicalize(h);
}

json hyperplane_to_json(const HyperplaneQ& h) {
  json u = json::array();
  for (const Rat& v : h.normal) u.push_back(rat_json(v));
  return {{"u", u}, {"c", rat_json(h.offset)}};
}

json hyperplane_to_json(const HyperplaneD& h) {
  json u = json::array();
  for (double v : h.normal) u.push_back(v);
  return {{"u", u}, {"c", h.offset}};
}

namespace {

json cut_report_to_json(const CutReport<Rat>& report) {
  json measures = json::array();
  for (const auto& m : report.measures) {
    json entry = {
        {"name", m.name},
        {"mass_minus", rat_json(m.mass_minus)},
        {"mass_on", rat_json(m.mass_on)},
        {"mass_plus", rat_json(m.mass_plus)},
        {"total_mass", rat_json(m.total_mass)},
        {"support_distance", m.support_distance},
    };
    if (m.touch_witness) {
      json w = json::array();
      for (const Rat& c : m.touch_witness->coords) w.push_back(rat_json(c));
      entry["touch_witness"] = w;
    } else {
      entry["touch_witness"] = nullptr;
    }
    measures.push_back(std::move(entry));
  }
  return {{"hyperplane", hyperplane_to_json(report.hyperplane)},
          {"measures", measures},
          {"all_bisected", report.all_bisected},
          {"all_touched", report.all_touched}};
}

json cut_report_to_json(const CutReport<double>& report) {
  json measures = json::array();
  for (const auto& m : report.measures) {
    json entry = {
        {"name", m.name},
        {"mass_minus", m.mass_minus},
        {"mass_on", m.mass_on},
        {"mass_plus", m.mass_plus},
        {"total_mass", m.total_mass},
        {"support_distance", m.support_distance},
    };
    if (m.touch_witness) {
      json w = json::array();
      for (double c : m.touch_witness->coords) w.push_back(c);
      entry["touch_witness"] = w;
    } else {
      entry["touch_witness"] = nullptr;
    }
    measures.push_back(std::move(entry));
  }
  return {{"hyperplane", hyperplane_to_json(report.hyperplane)},
          {"measures", measures},
          {"all_bisected", report.all_bisected},
          {"all_touched", report.all_touched}};
}

}  // namespace

json solution_to_json(const Solution& sol) {
  return {{"hyperplane", hyperplane_to_json(sol.hyperplane)},
          {"plane_flag",
           [&] {
             std::string s = "u=";
             for (std::size_t i = 0; i < sol.hyperplane.normal.size(); ++i)
               s += (i ? "," : "") + rat_to_string(sol.hyperplane.normal[i]);
             s += ";c=" + rat_to_string(sol.hyperplane.offset);
             return s;
           }()},
          {"witness_tuple", sol.witness_tuple},
          {"report", cut_report_to_json(sol.report)},
          {"diagnostics",
           {{"candidates_examined", sol.diagnostics.candidates_examined},
            {"degeneracy_completions", sol.diagnostics.completions_used},
            {"perturb_retries", sol.diagnostics.perturb_retries}}}};
}

json verify_report_to_json(const VerifyReport& report) {
  json measures = json::array();
  for (const auto& m : report.measures) {
    json entry = {
        {"name", m.name},
        {"mass_minus", rat_json(m.mass_minus)},
        {"mass_on", rat_json(m.mass_on)},
        {"mass_plus", rat_json(m.mass_plus)},
        {"total_mass", rat_json(m.total_mass)},
        {"bisected", m.bisected},
        {"touched", m.touched},
        {"nearest_atom_distance", m.nearest_atom_distance},
    };
    if (m.witness) {
      json w = json::array();
      for (const Rat& c : m.witness->coords) w.push_back(rat_json(c));
      entry["witness"] = w;
    } else {
      entry["witness"] = nullptr;
    }
    measures.push_back(std::move(entry));
  }
  return {{"measures", measures}, {"verdict", report.verdict}};
}

json grid_verify_report_to_json(const GridVerifyReport& report) {
  json measures = json::array();
  for (const auto& m : report.measures) {
    measures.push_back({
        {"name", m.name},
        {"mass_minus", m.mass_minus},
        {"mass_on", m.mass_on},
        {"mass_plus", m.mass_plus},
        {"total_mass", m.total_mass},
        {"bisected", m.bisected},
        {"support_distance", m.support_distance},
        {"touched", m.touched},
    });
  }
  return {{"measures", measures}, {"verdict", report.verdict}};
}

json measure_solution_to_json(const MeasureSolution& sol) {
  json levels = json::array();
  for (const auto& level : sol.trace.levels) {
    json measures = json::array();
    for (const auto& st : level.measures) {
      measures.push_back({
          {"name", st.name},
          {"total_mass", st.total_mass},
          {"mass_minus", st.mass_minus},
          {"mass_on", st.mass_on},
          {"mass_plus", st.mass_plus},
          {"cells_meeting_plus", st.cells_meeting_plus},
          {"cells_meeting_minus", st.cells_meeting_minus},
          {"slab_mass", st.slab_mass},
          {"support_distance", st.support_distance},
          {"atom_distance", st.atom_distance},
      });
    }
    levels.push_back({
        {"epsilon", level.epsilon},
        {"cell_size", level.cell_size},
        {"hyperplane", hyperplane_to_json(level.hyperplane)},
        {"atom_on_plane", level.atom_on_plane},
        {"measures", measures},
    });
  }
  return {{"hyperplane", hyperplane_to_json(sol.hyperplane)},
          {"report", cut_report_to_json(sol.report)},
          {"trace",
           {{"levels", levels},
            {"converged", sol.trace.converged},
            {"direction_residual", sol.trace.direction_residual},
            {"offset_residual", sol.trace.offset_residual}}}};
}

}  // namespace mayocut
