#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mayocut/bisection.hpp"
#include "mayocut/discrete_solver.hpp"
#include "mayocut/geometry.hpp"

// Cuts for compactly supported measures: rasterize each measure onto a cube
// grid, concentrate cell mass at centroids, cut the atomic approximations,
// and refine the cell size along a decreasing epsilon schedule. Per level the
// cut bisects every atomic approximation exactly and passes within epsilon of
// every support; the trace records the realized bounds so the approximation
// quality is auditable.

namespace mayocut {

// Axis-aligned cube grid with per-cell masses. Cells are half-open boxes
// [origin + i*h, origin + (i+1)*h) per axis, so they partition the bounding
// box with no double counting. Row-major storage, last axis fastest.
struct GridMeasure {
  PointD origin;
  double cell_size = 0;
  std::vector<std::size_t> dims;
  std::vector<double> cell_masses;
  std::string name;

  std::size_t dim() const { return dims.size(); }
  std::size_t cell_count() const;
  PointD centroid(std::size_t flat_index) const;
  double total_mass() const;
  double diameter() const;  // h * sqrt(n), the resolution parameter
};

// Constructive solid shapes: unions of balls and axis-aligned boxes with
// constant densities. Open/closed boundaries are immaterial (measure zero).
// Where components overlap, the first listed component wins.
struct BallShape {
  PointD center;
  double radius = 0;
  double density = 1;
};

struct BoxShape {
  PointD lo, hi;
  double density = 1;
};

struct ShapeSpec {
  std::string name;
  std::vector<std::variant<BallShape, BoxShape>> parts;

  std::size_t dim() const;
  std::pair<PointD, PointD> bounding_box() const;
  double density_at(const PointD& p) const;
  void validate() const;
};

// Cell mass = density x overlap volume: exact for boxes when the parts are
// pairwise disjoint, midpoint supersampling (supersample^n points per cell)
// otherwise. Deterministic for a fixed supersample count and worker count.
GridMeasure rasterize(const ShapeSpec& shape, double cell_size, int supersample = 4);

// One atom per nonzero cell, at the cell centroid, carrying the cell mass.
// Total mass is preserved exactly.
AtomicMeasureD discretize(const GridMeasure& grid);

// The exact set { c : (u, c) bisects mu }, a closed nonempty interval whose
// endpoints are atom projections <u, p>. For a unit-length u these are
// offsets in distance units along the normal.
template <class S>
struct OffsetInterval {
  S lo{}, hi{};
};

template <class S>
OffsetInterval<S> median_offset_interval(const AtomicMeasure<S>& mu,
                                         const std::vector<S>& direction);

enum class Strategy { Sweep, Enumerate };

struct SweepOptions {
  std::size_t directions_2d = 720;      // uniform half-circle grid
  std::size_t min_directions_3d = 1000; // geodesic (subdivided icosahedron) grid
  int refine_rounds = 2;                // each round shrinks the local step by 3
};

struct MeasureLevelStats {
  std::string name;
  double total_mass = 0;
  // side masses of the centroid atoms (the bisected approximation)
  double mass_minus = 0, mass_on = 0, mass_plus = 0;
  // upper bounds on the continuous side masses: all cells meeting the open halfspace
  double cells_meeting_plus = 0, cells_meeting_minus = 0;
  double slab_mass = 0;          // mass of cells within epsilon of the plane
  double support_distance = 0;   // plane to nearest nonzero cell (box distance)
  double atom_distance = 0;      // plane to nearest centroid along the normal
};

struct LevelReport {
  double epsilon = 0;
  double cell_size = 0;
  HyperplaneD hyperplane;
  std::vector<MeasureLevelStats> measures;
  bool atom_on_plane = false;  // exact incidence witness (enumerate strategy)
};

struct ConvergenceTrace {
  std::vector<LevelReport> levels;
  bool converged = false;
  double direction_residual = 0;  // angle between the last two level normals
  double offset_residual = 0;
};

struct MeasureSolution {
  HyperplaneD hyperplane;       // canonical representative of the finest level
  CutReport<double> report;     // measure-mode: touching = support within the finest epsilon
  ConvergenceTrace trace;
};

using MeasureInput = std::variant<ShapeSpec, GridMeasure>;

struct MeasureSolveOptions {
  Strategy strategy = Strategy::Sweep;
  SweepOptions sweep;
  std::size_t enumerate_atom_cap = 400;  // per measure, per level
  double convergence_tol = 1e-3;         // angle and offset agreement of the last two levels
};

// Runs the refinement schedule (strictly decreasing epsilon values). Shape
// inputs are rasterized per level with cell diameter < epsilon; grid inputs
// are used as-is and must already satisfy that bound at every level.
MeasureSolution solve_measure_cut(const std::vector<MeasureInput>& inputs,
                                  const std::vector<double>& schedule,
                                  const MeasureSolveOptions& options = {});

}  // namespace mayocut
