#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mayocut/io.hpp"
#include "mayocut/oracle.hpp"
#include "mayocut/svg.hpp"

// Exit codes: 0 success (verify: verdict true), 1 verify verdict false,
// 2 solver internal limit, 3 parse/input error, 4 plot on a non-2d input.

namespace {

using namespace mayocut;

constexpr int kExitVerifyFalse = 1;
constexpr int kExitLimit = 2;
constexpr int kExitParse = 3;
constexpr int kExitPlotDim = 4;

void emit(const json& doc, const std::string& out_path) {
  const std::string text = doc.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw parse_error(out_path, 0, 0, "cannot open output file");
    out << text;
  }
}

std::vector<double> parse_schedule(const std::string& text) {
  std::vector<double> schedule;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    auto r = parse_rat(piece);
    if (!r) throw parse_error("--schedule", 0, 0, "malformed value '" + piece + "'");
    schedule.push_back(rat_to_double(*r));
  }
  if (schedule.empty()) throw parse_error("--schedule", 0, 0, "expected epsilon values");
  return schedule;
}

GenBox parse_bbox(const std::string& text) {
  std::vector<Rat> vals;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    auto r = parse_rat(piece);
    if (!r) throw parse_error("--bbox", 0, 0, "malformed value '" + piece + "'");
    vals.push_back(std::move(*r));
  }
  if (vals.size() % 2 != 0 || vals.empty())
    throw parse_error("--bbox", 0, 0, "expected x0,y0,...,x1,y1,...");
  const std::size_t n = vals.size() / 2;
  GenBox box;
  box.lo.coords.assign(vals.begin(), vals.begin() + n);
  box.hi.coords.assign(vals.begin() + n, vals.end());
  for (std::size_t k = 0; k < n; ++k)
    if (!(box.lo[k] < box.hi[k])) throw parse_error("--bbox", 0, 0, "degenerate box");
  return box;
}

int cmd_solve_discrete(const std::string& file, bool all, const std::string& out) {
  const json doc = parse_json_text(read_input(file), file);
  const Instance inst = instance_from_json(doc, file);
  if (all) {
    const std::vector<Solution> cuts = enumerate_all_cuts(inst);
    json list = json::array();
    for (const auto& sol : cuts) list.push_back(solution_to_json(sol));
    emit({{"command", "solve-discrete-all"}, {"count", cuts.size()}, {"solutions", list}}, out);
  } else {
    const Solution sol = solve_touching_cut(inst);
    emit({{"command", "solve-discrete"}, {"solution", solution_to_json(sol)}}, out);
  }
  return 0;
}

int cmd_solve_measure(const std::string& file, const std::string& schedule_text,
                      const std::string& strategy_name, const std::string& out) {
  const json doc = parse_json_text(read_input(file), file);
  const ShapeFile shape_file = shapes_from_json(doc, file);
  const std::vector<double> schedule = parse_schedule(schedule_text);

  MeasureSolveOptions options;
  if (strategy_name == "sweep")
    options.strategy = Strategy::Sweep;
  else if (strategy_name == "enumerate")
    options.strategy = Strategy::Enumerate;
  else
    throw parse_error("--strategy", 0, 0, "expected 'sweep' or 'enumerate'");

  std::vector<MeasureInput> inputs(shape_file.shapes.begin(), shape_file.shapes.end());
  const MeasureSolution sol = solve_measure_cut(inputs, schedule, options);
  emit({{"command", "solve-measure"}, {"solution", measure_solution_to_json(sol)}}, out);
  return 0;
}

int cmd_verify(const std::string& file, const std::string& plane_text, const std::string& eps_text,
               const std::string& out) {
  const json doc = parse_json_text(read_input(file), file);
  if (sniff_kind(doc, file) == FileKind::Instance) {
    const Instance inst = instance_from_json(doc, file);
    const HyperplaneQ plane = parse_plane(plane_text, inst.dimension());
    const VerifyReport report = verify(inst, plane);
    emit({{"command", "verify"}, {"report", verify_report_to_json(report)}}, out);
    return report.verdict ? 0 : kExitVerifyFalse;
  }
  // shape file: rasterize at the requested resolution, then check in measure mode
  const ShapeFile shape_file = shapes_from_json(doc, file);
  auto eps_rat = parse_rat(eps_text);
  if (!eps_rat || !(rat_to_double(*eps_rat) > 0))
    throw parse_error("--epsilon", 0, 0, "expected a positive value");
  const double eps = rat_to_double(*eps_rat);
  const double h = 0.999 * eps / std::sqrt(static_cast<double>(shape_file.dimension));
  std::vector<GridMeasure> grids;
  for (const auto& shape : shape_file.shapes) grids.push_back(rasterize(shape, h));
  const HyperplaneQ plane = parse_plane(plane_text, shape_file.dimension);
  const GridVerifyReport report = verify(grids, plane_to_double(plane), eps);
  emit({{"command", "verify"},
        {"epsilon", eps},
        {"report", grid_verify_report_to_json(report)}},
       out);
  return report.verdict ? 0 : kExitVerifyFalse;
}

int cmd_gen_saltpepper(std::uint64_t seed, std::size_t salt, std::size_t pepper,
                       const std::string& bbox_text) {
  const GenBox box = parse_bbox(bbox_text);
  const Instance inst = gen_saltpepper(seed, salt, pepper, box);
  std::cout << instance_to_json(inst).dump(2) << "\n";
  return 0;
}

int cmd_plot(const std::string& file, const std::string& plane_text, const std::string& out) {
  const json doc = parse_json_text(read_input(file), file);
  std::string svg;
  if (sniff_kind(doc, file) == FileKind::Instance) {
    const Instance inst = instance_from_json(doc, file);
    if (inst.dimension() != 2) return kExitPlotDim;
    std::optional<HyperplaneD> plane;
    if (!plane_text.empty()) plane = plane_to_double(parse_plane(plane_text, 2));
    svg = render_svg(inst, plane);
  } else {
    const ShapeFile shape_file = shapes_from_json(doc, file);
    if (shape_file.dimension != 2) return kExitPlotDim;
    std::optional<HyperplaneD> plane;
    if (!plane_text.empty()) plane = plane_to_double(parse_plane(plane_text, 2));
    svg = render_svg(shape_file.shapes, plane);
  }
  std::ofstream os(out, std::ios::binary);
  if (!os) throw parse_error(out, 0, 0, "cannot open output file");
  os << svg;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"touching cuts: one hyperplane that bisects every weighted set and meets each"};
  app.require_subcommand(1);

  int rc = 0;
  const auto run = [&rc](auto&& fn) {
    return [&rc, fn = std::forward<decltype(fn)>(fn)]() {
      try {
        rc = fn();
      } catch (const mayocut::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = kExitParse;
      } catch (const mayocut::invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = kExitParse;
      } catch (const mayocut::limit_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = kExitLimit;
      } catch (const std::exception& e) {
        // anything else that escapes a malformed input
        std::cerr << "error: " << e.what() << "\n";
        rc = kExitParse;
      }
    };
  };

  // solve
  auto* solve = app.add_subcommand("solve", "find a touching cut");
  solve->require_subcommand(1);

  std::string sd_file, sd_out;
  bool sd_all = false;
  auto* sd = solve->add_subcommand("discrete", "exact cut for an instance file");
  sd->add_option("file", sd_file, "instance file (JSON), or - for stdin")->required();
  sd->add_flag("--all", sd_all, "enumerate every touching cut instead of the first");
  sd->add_option("--out", sd_out, "write the report here instead of stdout");
  sd->callback(run([&] { return cmd_solve_discrete(sd_file, sd_all, sd_out); }));

  std::string sm_file, sm_schedule, sm_out, sm_strategy = "sweep";
  auto* sm = solve->add_subcommand("measure", "refined cut for a shape file");
  sm->add_option("file", sm_file, "shape file (JSON), or - for stdin")->required();
  sm->add_option("--schedule", sm_schedule, "decreasing epsilons, e.g. 0.25,0.125,0.0625")
      ->required();
  sm->add_option("--strategy", sm_strategy, "sweep (default) or enumerate");
  sm->add_option("--out", sm_out, "write the report here instead of stdout");
  sm->callback(run([&] { return cmd_solve_measure(sm_file, sm_schedule, sm_strategy, sm_out); }));

  // verify
  std::string v_file, v_plane, v_out, v_eps = "1/16";
  auto* v = app.add_subcommand("verify", "check a plane against an instance or shape file");
  v->add_option("file", v_file, "instance or shape file, or - for stdin")->required();
  v->add_option("--plane", v_plane, "plane as \"u=c1,c2,...;c=v\"")->required();
  v->add_option("--epsilon", v_eps, "rasterization epsilon for shape files (default 1/16)");
  v->add_option("--out", v_out, "write the report here instead of stdout");
  v->callback(run([&] { return cmd_verify(v_file, v_plane, v_eps, v_out); }));

  // gen
  auto* gen = app.add_subcommand("gen", "generate instances");
  gen->require_subcommand(1);
  std::uint64_t g_seed = 1;
  std::size_t g_salt = 10, g_pepper = 10;
  std::string g_bbox = "0,0,10,10";
  auto* gs = gen->add_subcommand("saltpepper", "two seeded unit-mass point sets");
  gs->add_option("--seed", g_seed, "RNG seed");
  gs->add_option("--salt", g_salt, "number of salt grains")->required();
  gs->add_option("--pepper", g_pepper, "number of pepper grains")->required();
  gs->add_option("--bbox", g_bbox, "x0,y0,x1,y1 (default 0,0,10,10)");
  gs->callback(run([&] { return cmd_gen_saltpepper(g_seed, g_salt, g_pepper, g_bbox); }));

  // plot
  std::string p_file, p_plane, p_out;
  auto* plot = app.add_subcommand("plot", "render a 2-d instance or shape file as SVG");
  plot->add_option("file", p_file, "instance or shape file, or - for stdin")->required();
  plot->add_option("--plane", p_plane, "optional plane to draw");
  plot->add_option("--out", p_out, "output SVG path")->required();
  plot->callback(run([&] { return cmd_plot(p_file, p_plane, p_out); }));

  CLI11_PARSE(app, argc, argv);
  return rc;
}
