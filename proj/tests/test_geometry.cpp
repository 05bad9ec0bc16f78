#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "mayocut/geometry.hpp"

using namespace mayocut;
using namespace mayocut::testing;

TEST_CASE("canonicalize reduces scale, sign, and gcd") {
  auto h1 = canonicalize(HyperplaneQ{{Rat(0), Rat(-2)}, Rat(-4)});
  CHECK(h1 == plane({0, 1}, 2));

  auto h2 = canonicalize(HyperplaneQ{{Rat(3), Rat(0)}, Rat(0)});
  CHECK(h2 == plane({1, 0}, 0));

  auto h3 = canonicalize(HyperplaneQ{{Rat(-1), Rat(0), Rat(0)}, Rat(5)});
  CHECK(h3 == plane({1, 0, 0}, -5));

  CHECK_THROWS_AS(canonicalize(HyperplaneQ{{Rat(0), Rat(0)}, Rat(1)}), invalid_input);
}

TEST_CASE("canonicalize is idempotent and antipodally stable") {
  std::mt19937_64 rng(7101);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t dim = 2 + rep % 3;
    const HyperplaneQ h = random_plane(rng, dim);
    const HyperplaneQ c = canonicalize(h);
    CHECK(canonicalize(c) == c);
    CHECK(canonicalize(h.flipped()) == c);
  }
}

TEST_CASE("double canonical form: unit normal, offset sign rule") {
  auto h = canonicalize(HyperplaneD{{0.0, -2.0}, -4.0});
  CHECK(h.normal[0] == 0.0);
  CHECK(h.normal[1] == 1.0);
  CHECK(h.offset == 2.0);

  auto zero_offset = canonicalize(HyperplaneD{{-3.0, 0.0}, 0.0});
  CHECK(zero_offset.normal[0] == 1.0);
  CHECK(zero_offset.offset == 0.0);
  CHECK(!std::signbit(zero_offset.offset));
}

TEST_CASE("side_of matches the open half-space signs") {
  const Rat zero{0};
  CHECK(side_of(qp({3, 0}), plane({1, 0}, 0), zero) == Side::Plus);
  CHECK(side_of(qp({0, 5}), plane({1, 0}, 0), zero) == Side::On);
  CHECK(side_of(qp({1, 1}), plane({1, 1}, 3), zero) == Side::Minus);

  CHECK_THROWS_AS(side_of(qp({1, 2, 3}), plane({1, 0}, 0), zero), invalid_input);
  CHECK_THROWS_AS(side_of(qp({1, 2}), plane({1, 0}, 0), Rat(1) / 100), invalid_input);
}

TEST_CASE("side_of flips with orientation and respects tol in double mode") {
  std::mt19937_64 rng(7102);
  const Rat zero{0};
  for (int rep = 0; rep < 100; ++rep) {
    const HyperplaneQ h = random_plane(rng, 2);
    const PointQ p = random_point(rng, 2);
    const Side s = side_of(p, h, zero);
    const Side f = side_of(p, h.flipped(), zero);
    if (s == Side::On) CHECK(f == Side::On);
    if (s == Side::Plus) CHECK(f == Side::Minus);
    if (s == Side::Minus) CHECK(f == Side::Plus);
  }

  const HyperplaneD h{{1.0, 0.0}, 0.0};
  CHECK(side_of(PointD{5e-10, 1.0}, h, 1e-9) == Side::On);
  CHECK(side_of(PointD{5e-9, 1.0}, h, 1e-9) == Side::Plus);
  CHECK(side_of(PointD{-5e-9, 1.0}, h, 1e-9) == Side::Minus);
}

TEST_CASE("side_of partitions every point list") {
  std::mt19937_64 rng(7103);
  const Rat zero{0};
  const HyperplaneQ h = canonicalize(random_plane(rng, 3));
  int minus = 0, on = 0, plus = 0;
  const int total = 64;
  for (int i = 0; i < total; ++i) {
    switch (side_of(random_point(rng, 3), h, zero)) {
      case Side::Minus: ++minus; break;
      case Side::On: ++on; break;
      case Side::Plus: ++plus; break;
    }
  }
  CHECK(minus + on + plus == total);
}

TEST_CASE("hyperplane_through: unique plane or Deficient") {
  auto x_axis = hyperplane_through({qp({0, 0}), qp({1, 0})});
  CHECK(std::get<HyperplaneQ>(x_axis) == plane({0, 1}, 0));

  auto collinear = hyperplane_through({qp({0, 0, 0}), qp({1, 0, 0}), qp({2, 0, 0})});
  CHECK(std::get<Deficient>(collinear) == Deficient{1});

  auto diagonal = hyperplane_through({qp({1, 0}), qp({0, 1})});
  CHECK(std::get<HyperplaneQ>(diagonal) == plane({1, 1}, 1));

  // k < n always leaves a family
  auto single = hyperplane_through({qp({4, 5})});
  CHECK(std::get<Deficient>(single) == Deficient{0});

  // n = 1: a point is a hyperplane
  auto pointline = hyperplane_through({PointQ{Rat(7) / 2}});
  CHECK(std::get<HyperplaneQ>(pointline).normal[0] == 1);
  CHECK(std::get<HyperplaneQ>(pointline).offset == Rat(7) / 2);

  CHECK_THROWS_AS(hyperplane_through({}), invalid_input);
  CHECK_THROWS_AS(hyperplane_through({qp({0, 0}), qp({1, 0}), qp({0, 1})}), invalid_input);
}

TEST_CASE("hyperplane_through contains its inputs") {
  std::mt19937_64 rng(7104);
  const Rat zero{0};
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t dim = 2 + rep % 3;
    std::vector<PointQ> pts;
    for (std::size_t i = 0; i < dim; ++i) pts.push_back(random_point(rng, dim));
    auto result = hyperplane_through(pts);
    if (auto* h = std::get_if<HyperplaneQ>(&result)) {
      for (const PointQ& p : pts) CHECK(side_of(p, *h, zero) == Side::On);
    }
  }
}

TEST_CASE("hyperplane_through is rigid-motion equivariant") {
  std::mt19937_64 rng(7105);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t dim = 2 + rep % 2;
    const RigidMotion motion = pythagorean_motion(dim);
    std::vector<PointQ> pts, moved;
    for (std::size_t i = 0; i < dim; ++i) {
      pts.push_back(random_point(rng, dim));
      moved.push_back(motion.apply(pts.back()));
    }
    auto before = hyperplane_through(pts);
    auto after = hyperplane_through(moved);
    if (auto* h = std::get_if<HyperplaneQ>(&before)) {
      CHECK(std::get<HyperplaneQ>(after) == motion.apply(*h));
    } else {
      CHECK(std::get<Deficient>(after) == std::get<Deficient>(before));
    }
  }
}

TEST_CASE("distance to hyperplane") {
  CHECK(distance_point_hyperplane(qp({0, 3}), plane({0, 1}, 0)) == doctest::Approx(3.0));
  CHECK(distance_point_hyperplane(qp({5, 0}), plane({1, 0}, 5)) == 0.0);
  CHECK(distance_point_hyperplane(qp({1, 1}), plane({1, 1}, 0)) ==
        doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("distance zero exactly when side_of reports On") {
  std::mt19937_64 rng(7106);
  const Rat zero{0};
  for (int rep = 0; rep < 200; ++rep) {
    const HyperplaneQ h = random_plane(rng, 2);
    PointQ p = random_point(rng, 2);
    if (rep % 3 == 0 && h.normal[1] != 0) {
      // project onto the plane so the On branch is exercised
      p.coords[1] = (h.offset - h.normal[0] * p[0]) / h.normal[1];
    }
    const bool on = side_of(p, h, zero) == Side::On;
    CHECK((distance_point_hyperplane(p, h) == 0.0) == on);
  }
}
