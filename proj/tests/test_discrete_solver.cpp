#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "mayocut/discrete_solver.hpp"
#include "mayocut/oracle.hpp"
#include "mayocut/parallel.hpp"

using namespace mayocut;
using namespace mayocut::testing;

namespace {

const Rat kZero{0};

bool subset_tie_free(const AtomicMeasureQ& mu) {
  const std::size_t m = mu.size();
  Rat total{0};
  for (const auto& a : mu.atoms()) total += a.mass;
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << m); ++mask) {
    Rat sum{0};
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (std::uint64_t{1} << i)) sum += mu.atom(i).mass;
    if (sum * 2 == total) return false;
  }
  return true;
}

Instance derived_fixture() {
  return Instance({unit_measure({qp({0, 0}), qp({2, 0}), qp({1, 3})}, "A"),
                   unit_measure({qp({0, 1}), qp({2, 1}), qp({1, -2})}, "B")});
}

}  // namespace

TEST_CASE("perturb_masses breaks every subset tie") {
  const AtomicMeasureQ equal_pair({{qp({0, 0}), Rat(1)}, {qp({1, 0}), Rat(1)}}, "pair");
  const auto p1 = perturb_masses(equal_pair, Rat(1) / 2);
  CHECK(p1.atom(0).mass == Rat(2) / 3);  // delta = m_min / 3, the first workable prime
  CHECK(p1.atom(1).mass == 1);
  CHECK(subset_tie_free(p1));
  CHECK(equal_pair.total_mass() - p1.total_mass() < Rat(1) / 2);

  const AtomicMeasureQ single({{qp({0, 0}), Rat(1)}}, "single");
  const auto p2 = perturb_masses(single, Rat(1) / 2);
  CHECK(p2.atom(0).mass > 0);
  CHECK(p2.atom(0).mass < 1);
  CHECK(Rat(1) - p2.atom(0).mass < Rat(1) / 2);
  CHECK(subset_tie_free(p2));

  // 1 + 2 = 3 is a tie; the reduction must break it
  const AtomicMeasureQ trio(
      {{qp({0, 0}), Rat(1)}, {qp({1, 0}), Rat(2)}, {qp({2, 0}), Rat(3)}}, "trio");
  const auto p3 = perturb_masses(trio, Rat(1) / 4);
  CHECK(p3.atom(0).mass == Rat(4) / 5);  // skips 1/2 and 1/3 (not < eps), lands on 1/5
  CHECK(subset_tie_free(p3));

  CHECK_THROWS_AS(perturb_masses(equal_pair, Rat(0)), invalid_input);
  CHECK_THROWS_AS(perturb_masses(equal_pair, Rat(1) / 2, 1), limit_error);
}

TEST_CASE("perturb_masses on random rational mass lists") {
  std::mt19937_64 rng(9301);
  for (int rep = 0; rep < 60; ++rep) {
    const int m = 1 + static_cast<int>(rng() % 10);
    std::vector<Atom<Rat>> atoms;
    for (int i = 0; i < m; ++i)
      atoms.push_back(Atom<Rat>{qp({i, 0}),
                                Rat(1 + static_cast<long>(rng() % 12),
                                    1 + static_cast<long>(rng() % 7))});
    const AtomicMeasureQ mu(atoms, "random");
    Rat min_mass = mu.atom(0).mass;
    for (const auto& a : mu.atoms()) min_mass = std::min(min_mass, a.mass);

    const Rat eps = Rat(1, 1 + static_cast<long>(rng() % 5));
    const auto perturbed = perturb_masses(mu, eps);
    CHECK(subset_tie_free(perturbed));
    const Rat reduction = mu.total_mass() - perturbed.total_mass();
    CHECK(reduction > 0);
    CHECK(reduction < eps);
    CHECK(reduction < min_mass);
  }
}

TEST_CASE("solve_touching_cut on the forced singleton line") {
  Instance inst({unit_measure({qp({0, 0})}, "A"), unit_measure({qp({1, 0})}, "B")});
  const Solution sol = solve_touching_cut(inst);
  CHECK(sol.hyperplane == plane({0, 1}, 0));
  CHECK(sol.report.all_bisected);
  CHECK(sol.report.all_touched);
  CHECK(sol.witness_tuple == std::vector<std::size_t>{0, 0});
}

TEST_CASE("solve_touching_cut returns the first passing tuple in lex order") {
  const Instance inst = derived_fixture();
  const Solution sol = solve_touching_cut(inst);
  // frozen via enumerate_all_cuts: tuple (0,0) fails (two A atoms strictly
  // right of the line through (0,0),(0,1)), tuple (0,1) passes
  CHECK(sol.hyperplane == plane({1, -2}, 0));
  CHECK(sol.witness_tuple == std::vector<std::size_t>{0, 1});

  const auto all = enumerate_all_cuts(inst);
  REQUIRE(all.size() == 3);
  CHECK(all[0].hyperplane == plane({1, -2}, 0));
  CHECK(all[1].hyperplane == plane({1, 2}, 2));
  CHECK(all[2].hyperplane == plane({1, 0}, 1));
  bool contains = false;
  for (const auto& s : all) contains = contains || s.hyperplane == sol.hyperplane;
  CHECK(contains);
}

TEST_CASE("every witness atom lies on the returned plane") {
  std::mt19937_64 rng(9302);
  for (int rep = 0; rep < 25; ++rep) {
    const GenBox box{qp({0, 0}), qp({10, 10})};
    const Instance inst =
        gen_instance(rng(), 2, {1 + rng() % 9, 1 + rng() % 9}, box);
    const Solution sol = solve_touching_cut(inst);
    for (std::size_t i = 0; i < inst.measures().size(); ++i) {
      const PointQ& witness = inst.measures()[i].atom(sol.witness_tuple[i]).point;
      CHECK(side_of(witness, sol.hyperplane, kZero) == Side::On);
    }
  }
}

TEST_CASE("degenerate tuples complete instead of failing") {
  // shared single point: the family of all lines through it
  Instance shared({unit_measure({qp({0, 0})}, "A"), unit_measure({qp({0, 0})}, "B")});
  const Solution sol = solve_touching_cut(shared);
  CHECK(sol.report.all_bisected);
  CHECK(sol.report.all_touched);
  CHECK(sol.diagnostics.completions_used > 0);

  const auto cuts = enumerate_all_cuts(shared);
  CHECK(!cuts.empty());
  for (const auto& s : cuts) CHECK(verify(shared, s.hyperplane).verdict);

  // coincident singletons in R^3 leave a two-parameter family
  Instance deep({unit_measure({qp({0, 0, 0})}, "A"), unit_measure({qp({0, 0, 0})}, "B"),
                 unit_measure({qp({0, 0, 0})}, "C")});
  const Solution dsol = solve_touching_cut(deep);
  CHECK(verify(deep, dsol.hyperplane).verdict);
  CHECK(dsol.diagnostics.perturb_retries == 0);

  // collinear tuple in R^3 with off-line mass: pencil sweep territory
  Instance collinear({unit_measure({qp({0, 0, 0}), qp({1, 1, 1})}, "A"),
                      unit_measure({qp({2, 2, 2})}, "B"),
                      unit_measure({qp({4, 4, 4}), qp({0, 0, 1}), qp({0, 1, 0})}, "C")});
  const Solution csol = solve_touching_cut(collinear);
  CHECK(verify(collinear, csol.hyperplane).verdict);
}

TEST_CASE("enumerate_all_cuts: forced and degenerate cases") {
  Instance forced({unit_measure({qp({0, 0})}, "A"), unit_measure({qp({1, 0})}, "B")});
  const auto cuts = enumerate_all_cuts(forced);
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].hyperplane == plane({0, 1}, 0));

  SolverLimits tight;
  tight.enumerate_tuple_cap = 3;
  Instance big({unit_measure({qp({0, 0}), qp({1, 0})}, "A"),
                unit_measure({qp({0, 1}), qp({1, 1})}, "B")});
  CHECK_THROWS_AS(enumerate_all_cuts(big, tight), limit_error);
}

TEST_CASE("solver equals itself under any worker count") {
  std::mt19937_64 rng(9303);
  const GenBox box{qp({0, 0}), qp({10, 10})};
  for (int rep = 0; rep < 10; ++rep) {
    const Instance inst = gen_instance(rng(), 2, {2 + rng() % 8, 2 + rng() % 8}, box);
    set_max_threads(1);
    const Solution s1 = solve_touching_cut(inst);
    set_max_threads(2);
    const Solution s2 = solve_touching_cut(inst);
    set_max_threads(8);
    const Solution s8 = solve_touching_cut(inst);
    set_max_threads(0);
    CHECK(s1.hyperplane == s2.hyperplane);
    CHECK(s1.hyperplane == s8.hyperplane);
    CHECK(s1.witness_tuple == s2.witness_tuple);
    CHECK(s1.witness_tuple == s8.witness_tuple);
    CHECK(s1.diagnostics.candidates_examined == s8.diagnostics.candidates_examined);
  }
}

TEST_CASE("rigid motions transform the solution") {
  std::mt19937_64 rng(9304);
  const GenBox box{qp({0, 0}), qp({8, 8})};
  int checked = 0;
  for (int rep = 0; rep < 20 && checked < 10; ++rep) {
    const Instance inst = gen_instance(rng(), 2, {1 + rng() % 6, 1 + rng() % 6}, box);
    const RigidMotion motion = pythagorean_motion(2);
    const Solution before = solve_touching_cut(inst);
    const Solution after = solve_touching_cut(apply(motion, inst));
    CHECK(after.hyperplane == motion.apply(before.hyperplane));
    CHECK(after.witness_tuple == before.witness_tuple);
    ++checked;
  }
}

TEST_CASE("salt and pepper always admits a touching line") {
  std::mt19937_64 rng(9305);
  for (int rep = 0; rep < 10; ++rep) {
    const GenBox box{qp({0, 0}), qp({10, 10})};
    const Instance inst = gen_saltpepper(rng(), 1 + rng() % 10, 1 + rng() % 10, box);
    const Solution sol = solve_touching_cut(inst);
    CHECK(verify(inst, sol.hyperplane).verdict);
  }
}
