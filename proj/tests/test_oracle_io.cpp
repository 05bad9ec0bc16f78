#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "mayocut/io.hpp"
#include "mayocut/oracle.hpp"
#include "mayocut/svg.hpp"

using namespace mayocut;
using namespace mayocut::testing;

namespace {

Instance example9_atoms() {
  return Instance({unit_measure({qp({0, 0})}, "A"),
                   unit_measure({qp({-3, 0}), qp({3, 0})}, "B")});
}

}  // namespace

TEST_CASE("verify recomputes the verdict from scratch") {
  Instance singletons({unit_measure({qp({0, 0})}, "A"), unit_measure({qp({1, 0})}, "B")});
  CHECK(verify(singletons, plane({0, 1}, 0)).verdict);

  const Instance ex9 = example9_atoms();
  const auto vertical = verify(ex9, plane({1, 0}, 0));
  CHECK_FALSE(vertical.verdict);
  CHECK(vertical.measures[0].bisected);
  CHECK(vertical.measures[1].bisected);
  CHECK(vertical.measures[0].touched);
  CHECK_FALSE(vertical.measures[1].touched);
  CHECK(vertical.measures[1].nearest_atom_distance == doctest::Approx(3.0));

  const auto horizontal = verify(ex9, plane({0, 1}, 0));
  CHECK(horizontal.verdict);
  CHECK(horizontal.measures[1].mass_on == 2);
  REQUIRE(horizontal.measures[0].witness.has_value());

  CHECK_THROWS_AS(verify(ex9, plane({1, 0, 0}, 0)), invalid_input);
}

TEST_CASE("generators are seed-deterministic and well-formed") {
  const GenBox box{qp({0, 0}), qp({10, 10})};
  const Instance a = gen_saltpepper(1, 5, 7, box);
  const Instance b = gen_saltpepper(1, 5, 7, box);
  CHECK(instance_to_json(a) == instance_to_json(b));
  CHECK(a.measures()[0].size() == 5);
  CHECK(a.measures()[1].size() == 7);
  CHECK(a.measures()[0].name() == "salt");
  CHECK(a.measures()[1].name() == "pepper");
  for (const auto& mu : a.measures())
    for (const auto& atom : mu.atoms()) {
      CHECK(atom.mass == 1);
      for (const Rat& c : atom.point.coords) {
        CHECK(c >= 0);
        CHECK(c <= 10);
        CHECK(denominator(c) <= 65536);
      }
    }

  const Instance c = gen_saltpepper(2, 5, 7, box);
  CHECK(instance_to_json(a) != instance_to_json(c));

  CHECK_THROWS_AS(gen_saltpepper(1, 0, 7, box), invalid_input);
  // a box with four grid nodes cannot hold five distinct points
  const GenBox tiny{qp({0, 0}), PointQ{Rat(1, 65536), Rat(1, 65536)}};
  CHECK_THROWS_AS(gen_saltpepper(1, 5, 5, tiny), limit_error);

  const GenBox box3{qp({0, 0, 0}), qp({4, 4, 4})};
  const Instance three = gen_instance(9, 3, {2, 3, 4}, box3);
  CHECK(three.dimension() == 3);
  CHECK(three.measures()[2].size() == 4);
  CHECK(three.measures()[2].name() == "C");
}

TEST_CASE("instance files round-trip exactly") {
  const std::string text = R"({
    "dimension": 2,
    "sets": [
      {"name": "salt", "atoms": [
        {"point": ["1/3", "0.1"], "mass": "2/7"},
        {"point": [2, -1], "mass": 1}
      ]},
      {"name": "pepper", "atoms": [{"point": ["-0.5", "4"]}]}
    ]
  })";
  const Instance inst = instance_from_json(parse_json_text(text, "mem"), "mem");
  CHECK(inst.measures()[0].atom(0).point[0] == Rat(1) / 3);
  CHECK(inst.measures()[0].atom(0).point[1] == Rat(1) / 10);  // decimal, not binary float
  CHECK(inst.measures()[0].atom(0).mass == Rat(2) / 7);
  CHECK(inst.measures()[1].atom(0).mass == 1);  // default
  CHECK(inst.measures()[1].atom(0).point[0] == Rat(-1) / 2);

  const json dumped = instance_to_json(inst);
  const Instance again = instance_from_json(dumped, "mem2");
  CHECK(instance_to_json(again) == dumped);
}

TEST_CASE("parse errors carry line and column") {
  const std::string bad = "{\n  \"dimension\": 2,\n  \"sets\": [}\n}";
  try {
    parse_json_text(bad, "bad.json");
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line == 3);
    CHECK(e.column > 0);
    CHECK(std::string(e.what()).find("bad.json:3:") != std::string::npos);
  }

  CHECK_THROWS_AS(instance_from_json(parse_json_text("{}", "x"), "x"), parse_error);
  CHECK_THROWS_AS(
      instance_from_json(parse_json_text(R"({"dimension":2,"sets":[]})", "x"), "x"),
      parse_error);
  CHECK_THROWS_AS(
      instance_from_json(
          parse_json_text(R"({"dimension":2,"sets":[{"atoms":[{"point":[1]}]}]})", "x"), "x"),
      parse_error);
  // measure invariants surface as parse errors too
  CHECK_THROWS_AS(
      instance_from_json(
          parse_json_text(
              R"({"dimension":2,"sets":[{"atoms":[{"point":[1,2]},{"point":[1,2]}]},{"atoms":[{"point":[0,0]}]}]})",
              "x"),
          "x"),
      parse_error);
}

TEST_CASE("plane flags parse exactly and canonicalize") {
  const HyperplaneQ h = parse_plane("u=0,-2;c=-4", 2);
  CHECK(h == plane({0, 1}, 2));
  CHECK(parse_plane(" u = 1/2 , 0 ; c = 3 ", 2) == plane({1, 0}, 6));
  CHECK_THROWS_AS(parse_plane("u=1,0", 2), parse_error);
  CHECK_THROWS_AS(parse_plane("u=1;c=0", 2), parse_error);
  CHECK_THROWS_AS(parse_plane("u=0,0;c=1", 2), parse_error);
  CHECK_THROWS_AS(parse_plane("u=a,b;c=1", 2), parse_error);
}

TEST_CASE("shape files parse into validated specs") {
  const std::string text = R"({
    "dimension": 2,
    "shapes": [
      {"name": "A", "components": [
        {"type": "disk", "center": [-1, 1], "radius": 1},
        {"type": "disk", "center": [-1, -1], "radius": 1}
      ]},
      {"name": "B", "components": [{"type": "box", "min": [0, 0], "max": [2, 1], "density": 3}]}
    ]
  })";
  const ShapeFile sf = shapes_from_json(parse_json_text(text, "mem"), "mem");
  CHECK(sf.dimension == 2);
  REQUIRE(sf.shapes.size() == 2);
  CHECK(sf.shapes[0].parts.size() == 2);
  CHECK(std::get<BoxShape>(sf.shapes[1].parts[0]).density == 3);

  CHECK_THROWS_AS(
      shapes_from_json(
          parse_json_text(R"({"dimension":2,"shapes":[{"components":[{"type":"disk","center":[0,0],"radius":-1}]}]})",
                          "m"),
          "m"),
      parse_error);
}

TEST_CASE("solution reports round-trip through verify") {
  const GenBox box{qp({0, 0}), qp({10, 10})};
  const Instance inst = gen_saltpepper(11, 6, 5, box);
  const Solution sol = solve_touching_cut(inst);
  const json report = solution_to_json(sol);

  // every CutReport field is present
  const json& cut = report["report"];
  CHECK(cut.contains("hyperplane"));
  CHECK(cut.contains("all_bisected"));
  CHECK(cut.contains("all_touched"));
  for (const auto& m : cut["measures"]) {
    CHECK(m.contains("mass_minus"));
    CHECK(m.contains("mass_on"));
    CHECK(m.contains("mass_plus"));
    CHECK(m.contains("touch_witness"));
    CHECK(m.contains("support_distance"));
  }

  // the emitted plane flag verifies against the original instance
  const HyperplaneQ parsed = parse_plane(report["plane_flag"].get<std::string>(), 2);
  CHECK(verify(inst, parsed).verdict);
  CHECK(parsed == sol.hyperplane);
}

TEST_CASE("svg rendering matches the committed golden file") {
  const Instance inst = example9_atoms();
  const std::string svg = render_svg(inst, HyperplaneD{{0, 1}, 0});
  CHECK(svg == render_svg(inst, HyperplaneD{{0, 1}, 0}));
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<line") != std::string::npos);

  std::ifstream golden_file(std::string(MAYOCUT_TEST_DATA) + "/golden_example9.svg",
                            std::ios::binary);
  REQUIRE(golden_file.good());
  std::ostringstream golden;
  golden << golden_file.rdbuf();
  // normalized comparison: line endings stripped
  const auto normalize = [](std::string s) {
    std::string out;
    for (char ch : s)
      if (ch != '\r') out.push_back(ch);
    while (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
  };
  CHECK(normalize(svg) == normalize(golden.str()));
  // three atoms, three dots
  std::size_t count = 0;
  for (std::size_t pos = svg.find("<circle"); pos != std::string::npos;
       pos = svg.find("<circle", pos + 1))
    ++count;
  CHECK(count == 3);

  ShapeSpec a;
  a.name = "A";
  a.parts.push_back(BallShape{PointD{0, 0}, 1, 1});
  a.parts.push_back(BoxShape{PointD{2, 0}, PointD{3, 2}, 1});
  const std::string shapes = render_svg(std::vector<ShapeSpec>{a}, std::nullopt);
  CHECK(shapes.find("<circle") != std::string::npos);
  CHECK(shapes.find("<rect") != std::string::npos);

  Instance three_d({unit_measure({qp({0, 0, 0})}, "A"), unit_measure({qp({1, 0, 0})}, "B"),
                    unit_measure({qp({0, 1, 0})}, "C")});
  CHECK_THROWS_AS(render_svg(three_d, std::nullopt), invalid_input);
}
