#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mayocut/discrete_solver.hpp"
#include "mayocut/measure_solver.hpp"

// Independent verification and instance generation. verify() recomputes
// every predicate from scratch using only side_of, sharing no intermediate
// state with the solvers, so a solver bug not shared with side_of is
// detectable.

namespace mayocut {

struct MeasureVerify {
  std::string name;
  Rat mass_minus{}, mass_on{}, mass_plus{}, total_mass{};
  bool bisected = false;
  bool touched = false;
  std::optional<PointQ> witness;        // first atom on the plane
  double nearest_atom_distance = 0;     // 0 when touched
};

struct VerifyReport {
  std::vector<MeasureVerify> measures;
  bool verdict = false;  // every measure bisected and touched
};

VerifyReport verify(const Instance& inst, const HyperplaneQ& plane, const Rat& tol = Rat(0));

// Measure-mode verification on grids: bisection of the centroid atoms,
// touching via the distance from the plane to the nearest nonzero cell
// region (the grid's outer approximation of the support), within touch_tol.
struct GridMeasureVerify {
  std::string name;
  double mass_minus = 0, mass_on = 0, mass_plus = 0, total_mass = 0;
  bool bisected = false;
  double support_distance = 0;
  bool touched = false;
};

struct GridVerifyReport {
  std::vector<GridMeasureVerify> measures;
  bool verdict = false;
};

GridVerifyReport verify(const std::vector<GridMeasure>& grids, const HyperplaneD& plane,
                        double touch_tol);

// Axis-aligned box for generators; exact corners, lo < hi per axis.
struct GenBox {
  PointQ lo, hi;
};

// Two unit-mass measures ("salt", "pepper") with points drawn uniformly on
// the 1/65536 grid inside the box. Reproducible from the seed; points are
// de-duplicated within each measure (100 retries per point).
Instance gen_saltpepper(std::uint64_t seed, std::size_t count_salt, std::size_t count_pepper,
                        const GenBox& bbox);

// General seeded instance: sizes.size() == dimension measures named A, B, ...
Instance gen_instance(std::uint64_t seed, std::size_t dimension,
                      const std::vector<std::size_t>& sizes, const GenBox& bbox);

}  // namespace mayocut
