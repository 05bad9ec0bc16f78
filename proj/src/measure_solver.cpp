#include "mayocut/measure_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>

#include "mayocut/kernels.hpp"

namespace mayocut {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// ---- GridMeasure ------------------------------------------------------------

std::size_t GridMeasure::cell_count() const {
  std::size_t n = 1;
  for (std::size_t d : dims) n *= d;
  return n;
}

PointD GridMeasure::centroid(std::size_t flat_index) const {
  std::vector<double> x(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    const std::size_t i = flat_index % dims[k];
    flat_index /= dims[k];
    x[k] = origin[k] + (static_cast<double>(i) + 0.5) * cell_size;
  }
  return PointD(std::move(x));
}

double GridMeasure::total_mass() const {
  double s = 0;
  for (double m : cell_masses) s += m;
  return s;
}

double GridMeasure::diameter() const {
  return cell_size * std::sqrt(static_cast<double>(dim()));
}

// ---- ShapeSpec ----------------------------------------------------------------

std::size_t ShapeSpec::dim() const {
  if (parts.empty()) return 0;
  return std::visit([](const auto& p) {
    if constexpr (std::is_same_v<std::decay_t<decltype(p)>, BallShape>)
      return p.center.dim();
    else
      return p.lo.dim();
  }, parts.front());
}

void ShapeSpec::validate() const {
  if (parts.empty()) throw invalid_input("shape '" + name + "': no components");
  const std::size_t n = dim();
  if (n == 0) throw invalid_input("shape '" + name + "': zero-dimensional");
  for (const auto& part : parts) {
    if (const auto* b = std::get_if<BallShape>(&part)) {
      if (b->center.dim() != n) throw invalid_input("shape '" + name + "': mixed dimensions");
      if (!(b->radius > 0)) throw invalid_input("shape '" + name + "': nonpositive radius");
      if (!(b->density > 0)) throw invalid_input("shape '" + name + "': nonpositive density");
    } else {
      const auto& box = std::get<BoxShape>(part);
      if (box.lo.dim() != n || box.hi.dim() != n)
        throw invalid_input("shape '" + name + "': mixed dimensions");
      for (std::size_t k = 0; k < n; ++k)
        if (!(box.hi[k] > box.lo[k]))
          throw invalid_input("shape '" + name + "': empty box extent");
      if (!(box.density > 0)) throw invalid_input("shape '" + name + "': nonpositive density");
    }
  }
}

std::pair<PointD, PointD> ShapeSpec::bounding_box() const {
  const std::size_t n = dim();
  std::vector<double> lo(n, kInf), hi(n, -kInf);
  for (const auto& part : parts) {
    for (std::size_t k = 0; k < n; ++k) {
      if (const auto* b = std::get_if<BallShape>(&part)) {
        lo[k] = std::min(lo[k], b->center[k] - b->radius);
        hi[k] = std::max(hi[k], b->center[k] + b->radius);
      } else {
        const auto& box = std::get<BoxShape>(part);
        lo[k] = std::min(lo[k], box.lo[k]);
        hi[k] = std::max(hi[k], box.hi[k]);
      }
    }
  }
  return {PointD(std::move(lo)), PointD(std::move(hi))};
}

double ShapeSpec::density_at(const PointD& p) const {
  for (const auto& part : parts) {
    if (const auto* b = std::get_if<BallShape>(&part)) {
      double d2 = 0;
      for (std::size_t k = 0; k < p.dim(); ++k) {
        const double d = p[k] - b->center[k];
        d2 += d * d;
      }
      if (d2 < b->radius * b->radius) return b->density;
    } else {
      const auto& box = std::get<BoxShape>(part);
      bool inside = true;
      for (std::size_t k = 0; k < p.dim() && inside; ++k)
        inside = p[k] >= box.lo[k] && p[k] < box.hi[k];
      if (inside) return box.density;
    }
  }
  return 0;
}

// ---- rasterize ----------------------------------------------------------------

namespace {

bool parts_pairwise_disjoint(const ShapeSpec& shape) {
  const auto dist2_to_box = [](const PointD& c, const BoxShape& box) {
    double d2 = 0;
    for (std::size_t k = 0; k < c.dim(); ++k) {
      const double d = std::max({box.lo[k] - c[k], c[k] - box.hi[k], 0.0});
      d2 += d * d;
    }
    return d2;
  };
  for (std::size_t i = 0; i < shape.parts.size(); ++i) {
    for (std::size_t j = i + 1; j < shape.parts.size(); ++j) {
      const auto& a = shape.parts[i];
      const auto& b = shape.parts[j];
      const auto* ba = std::get_if<BallShape>(&a);
      const auto* bb = std::get_if<BallShape>(&b);
      if (ba && bb) {
        double d2 = 0;
        for (std::size_t k = 0; k < ba->center.dim(); ++k) {
          const double d = ba->center[k] - bb->center[k];
          d2 += d * d;
        }
        const double r = ba->radius + bb->radius;
        if (d2 < r * r) return false;
      } else if (!ba && !bb) {
        const auto& xa = std::get<BoxShape>(a);
        const auto& xb = std::get<BoxShape>(b);
        bool separated = false;
        for (std::size_t k = 0; k < xa.lo.dim() && !separated; ++k)
          separated = xa.hi[k] <= xb.lo[k] || xb.hi[k] <= xa.lo[k];
        if (!separated) return false;
      } else {
        const auto* ball = ba ? ba : bb;
        const auto& box = ba ? std::get<BoxShape>(b) : std::get<BoxShape>(a);
        if (dist2_to_box(ball->center, box) < ball->radius * ball->radius) return false;
      }
    }
  }
  return true;
}

// Visits the midpoints of an s x ... x s subdivision of one cell.
template <class Fn>
void visit_subsamples(const PointD& cell_lo, double h, int s, Fn&& fn) {
  const std::size_t n = cell_lo.dim();
  const double step = h / s;
  std::vector<int> idx(n, 0);
  PointD p;
  p.coords.resize(n);
  while (true) {
    for (std::size_t k = 0; k < n; ++k)
      p.coords[k] = cell_lo[k] + (idx[k] + 0.5) * step;
    fn(p);
    std::size_t k = n;
    while (k-- > 0) {
      if (++idx[k] < s) break;
      idx[k] = 0;
      if (k == 0) return;
    }
  }
}

double ball_cell_mass(const BallShape& ball, const PointD& cell_lo, double h, int s) {
  const double r2 = ball.radius * ball.radius;
  std::size_t inside = 0;
  visit_subsamples(cell_lo, h, s, [&](const PointD& p) {
    double d2 = 0;
    for (std::size_t k = 0; k < p.dim(); ++k) {
      const double d = p[k] - ball.center[k];
      d2 += d * d;
    }
    if (d2 < r2) ++inside;
  });
  double sample_volume = 1;
  for (std::size_t k = 0; k < cell_lo.dim(); ++k) sample_volume *= h / s;
  return ball.density * static_cast<double>(inside) * sample_volume;
}

double box_cell_mass(const BoxShape& box, const PointD& cell_lo, double h) {
  double volume = 1;
  for (std::size_t k = 0; k < cell_lo.dim(); ++k) {
    const double lo = std::max(box.lo[k], cell_lo[k]);
    const double hi = std::min(box.hi[k], cell_lo[k] + h);
    if (hi <= lo) return 0;
    volume *= hi - lo;
  }
  return box.density * volume;
}

}  // namespace

GridMeasure rasterize(const ShapeSpec& shape, double cell_size, int supersample) {
  shape.validate();
  if (!(cell_size > 0)) throw invalid_input("rasterize: cell size must be positive");
  if (supersample < 1) throw invalid_input("rasterize: supersample count must be >= 1");

  const auto [lo, hi] = shape.bounding_box();
  const std::size_t n = lo.dim();
  for (std::size_t k = 0; k < n; ++k)
    if (!std::isfinite(lo[k]) || !std::isfinite(hi[k]))
      throw invalid_input("rasterize: unbounded shape");

  GridMeasure grid;
  grid.name = shape.name;
  grid.cell_size = cell_size;
  grid.dims.resize(n);
  grid.origin.coords.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto cells = static_cast<std::size_t>(std::ceil((hi[k] - lo[k]) / cell_size - 1e-12));
    grid.dims[k] = std::max<std::size_t>(1, cells);
    // center the overhang so symmetric shapes rasterize symmetrically
    const double overhang = grid.dims[k] * cell_size - (hi[k] - lo[k]);
    grid.origin.coords[k] = lo[k] - 0.5 * overhang;
  }
  grid.cell_masses.assign(grid.cell_count(), 0.0);

  const bool disjoint = parts_pairwise_disjoint(shape);
  for_each_index(grid.cell_count(), [&](std::size_t flat) {
    PointD c = grid.centroid(flat);
    PointD cell_lo;
    cell_lo.coords.resize(n);
    for (std::size_t k = 0; k < n; ++k) cell_lo.coords[k] = c[k] - 0.5 * cell_size;

    double mass = 0;
    if (disjoint) {
      // additive: boxes get exact overlap volume, balls are supersampled
      for (const auto& part : shape.parts) {
        if (const auto* b = std::get_if<BallShape>(&part))
          mass += ball_cell_mass(*b, cell_lo, cell_size, supersample);
        else
          mass += box_cell_mass(std::get<BoxShape>(part), cell_lo, cell_size);
      }
    } else {
      double sample_volume = 1;
      for (std::size_t k = 0; k < n; ++k) sample_volume *= cell_size / supersample;
      visit_subsamples(cell_lo, cell_size, supersample,
                       [&](const PointD& p) { mass += shape.density_at(p) * sample_volume; });
    }
    grid.cell_masses[flat] = mass;
  });
  return grid;
}

AtomicMeasureD discretize(const GridMeasure& grid) {
  std::vector<Atom<double>> atoms;
  for (std::size_t flat = 0; flat < grid.cell_masses.size(); ++flat) {
    if (grid.cell_masses[flat] > 0)
      atoms.push_back(Atom<double>{grid.centroid(flat), grid.cell_masses[flat]});
  }
  if (atoms.empty()) throw invalid_input("discretize: grid carries no mass");
  return AtomicMeasureD(std::move(atoms), grid.name);
}

// ---- median offset interval -----------------------------------------------

template <class S>
OffsetInterval<S> median_offset_interval(const AtomicMeasure<S>& mu,
                                         const std::vector<S>& direction) {
  if (direction.size() != mu.dim())
    throw invalid_input("median_offset_interval: dimension mismatch");
  if (std::all_of(direction.begin(), direction.end(), [](const S& v) { return v == S{}; }))
    throw invalid_input("median_offset_interval: zero direction");

  std::vector<std::pair<S, S>> proj;  // (projection, mass)
  proj.reserve(mu.size());
  for (const Atom<S>& a : mu.atoms())
    proj.emplace_back(dot(direction, a.point.coords), a.mass);
  std::stable_sort(proj.begin(), proj.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  // group equal projections
  std::vector<std::pair<S, S>> groups;
  for (auto& [t, m] : proj) {
    if (!groups.empty() && groups.back().first == t)
      groups.back().second += m;
    else
      groups.emplace_back(t, m);
  }

  const S total = mu.total_mass();
  const S half = total / 2;

  // c = v is admissible iff the strict masses below and above v are both <= half;
  // the admissible set is a contiguous run of group values.
  std::optional<S> lo, hi;
  S below{};
  for (const auto& [v, m] : groups) {
    const S above = total - below - m;
    if (below <= half && above <= half) {
      if (!lo) lo = v;
      hi = v;
    }
    below += m;
  }
  // nonempty by the weighted median property
  return OffsetInterval<S>{*lo, *hi};
}

template OffsetInterval<Rat> median_offset_interval<Rat>(const AtomicMeasure<Rat>&,
                                                         const std::vector<Rat>&);
template OffsetInterval<double> median_offset_interval<double>(const AtomicMeasure<double>&,
                                                               const std::vector<double>&);

// ---- direction grids --------------------------------------------------------

namespace {

// snap near-zero components (cos(pi/2) and friends) so axis directions are exact
std::vector<double> snapped_unit(std::vector<double> v) {
  for (double& x : v)
    if (std::abs(x) < 1e-12) x = 0.0;
  const double n = norm(v);
  for (double& x : v) x /= n;
  return v;
}

std::vector<std::vector<double>> half_circle_directions(std::size_t count) {
  std::vector<std::vector<double>> dirs;
  dirs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double theta = M_PI * static_cast<double>(i) / static_cast<double>(count);
    dirs.push_back(snapped_unit({std::cos(theta), std::sin(theta)}));
  }
  return dirs;
}

// Subdivided icosahedron vertices, antipodally deduplicated. Returns the
// directions sorted by a quantized key so the ordering is reproducible.
std::vector<std::vector<double>> geodesic_directions(std::size_t min_count, double* step_out) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const std::array<std::array<double, 3>, 12> verts = {{
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
  }};
  const std::array<std::array<int, 3>, 20> faces = {{
      {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
      {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
      {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1},
  }};

  for (int freq = 1;; ++freq) {
    std::map<std::array<std::int64_t, 3>, std::vector<double>> unique;
    for (const auto& f : faces) {
      for (int i = 0; i <= freq; ++i) {
        for (int j = 0; i + j <= freq; ++j) {
          const int k = freq - i - j;
          std::array<double, 3> p{};
          for (int d = 0; d < 3; ++d)
            p[d] = i * verts[f[0]][d] + j * verts[f[1]][d] + k * verts[f[2]][d];
          double len = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
          for (double& v : p) v /= len;
          std::array<std::int64_t, 3> key;
          for (int d = 0; d < 3; ++d) key[d] = std::llround(p[d] * 1e7);
          // antipodal canonical representative
          if (key[2] < 0 || (key[2] == 0 && (key[1] < 0 || (key[1] == 0 && key[0] < 0)))) {
            for (double& v : p) v = -v + 0.0;
            for (auto& v : key) v = -v;
          }
          unique.emplace(key, std::vector<double>{p[0], p[1], p[2]});
        }
      }
    }
    if (unique.size() >= min_count) {
      if (step_out) *step_out = 1.1071 / freq;  // icosahedron edge arc / frequency
      std::vector<std::vector<double>> dirs;
      dirs.reserve(unique.size() + 3);
      // coordinate axes first; symmetric fixtures want them exactly
      dirs.push_back({1.0, 0.0, 0.0});
      dirs.push_back({0.0, 1.0, 0.0});
      dirs.push_back({0.0, 0.0, 1.0});
      for (auto& [key, v] : unique) dirs.push_back(std::move(v));
      return dirs;
    }
  }
}

std::vector<double> normalized(std::vector<double> v) {
  const double n = norm(v);
  for (double& x : v) x /= n;
  return v;
}

// ---- per-direction offset optimization --------------------------------------

struct MeasureProjection {
  std::vector<double> values;  // distinct, ascending
  std::vector<double> masses;  // per distinct value
  double lo = 0, hi = 0;       // median offset interval

  double nearest(double c) const {
    auto it = std::lower_bound(values.begin(), values.end(), c);
    double best = kInf;
    if (it != values.end()) best = std::min(best, *it - c);
    if (it != values.begin()) best = std::min(best, c - *(it - 1));
    return best;
  }
};

MeasureProjection project_measure(const AtomicMeasureD& mu, const std::vector<double>& u) {
  std::vector<std::pair<double, double>> proj;
  proj.reserve(mu.size());
  for (const auto& a : mu.atoms()) proj.emplace_back(dot(u, a.point.coords), a.mass);
  std::stable_sort(proj.begin(), proj.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  MeasureProjection out;
  for (const auto& [t, m] : proj) {
    if (!out.values.empty() && out.values.back() == t)
      out.masses.back() += m;
    else {
      out.values.push_back(t);
      out.masses.push_back(m);
    }
  }

  double total = 0;
  for (double m : out.masses) total += m;
  const double half = total / 2;
  double below = 0;
  bool have_lo = false;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double above = total - below - out.masses[i];
    if (below <= half && above <= half) {
      if (!have_lo) {
        out.lo = out.values[i];
        have_lo = true;
      }
      out.hi = out.values[i];
    }
    below += out.masses[i];
  }
  return out;
}

struct OffsetPick {
  double score = kInf;        // max over measures of max(interval distance, support distance)
  double offset = 0;
  double interval_gap = kInf;  // max over measures of dist(offset, median interval)
};

// Picks the offset for a fixed direction. With finely discretized measures
// the exact bisection sets are generically single points that never coincide
// across measures, so a literal common intersection is a measure-zero event;
// instead the offset is allowed to sit within the level epsilon of every
// median interval. Atoms between the offset and a measure's interval then lie
// inside the epsilon slab, which is exactly what the per-level slab-mass
// bound charges for. Minimizing
//     f(c) = max_i max(dist(c, interval_i), dist(c, projections_i))
// therefore targets both level guarantees at once, and reduces to "minimize
// the maximum support distance inside the common interval" whenever that
// intersection is nonempty. Every piece is linear with slopes -1/0/+1 and
// breaks only at projections, midpoints of consecutive projections, and
// interval endpoints, so the optimum sits on a breakpoint or a crossing.
OffsetPick pick_offset(const std::vector<MeasureProjection>& projections) {
  OffsetPick pick;
  double lo = kInf, hi = -kInf;  // hull of the median intervals
  for (const auto& mp : projections) {
    lo = std::min(lo, mp.lo);
    hi = std::max(hi, mp.hi);
  }

  std::vector<double> breaks{lo, hi};
  for (const auto& mp : projections) {
    breaks.push_back(mp.lo);
    breaks.push_back(mp.hi);
    auto first = std::lower_bound(mp.values.begin(), mp.values.end(), lo);
    auto last = std::upper_bound(mp.values.begin(), mp.values.end(), hi);
    for (auto it = first; it != last; ++it) breaks.push_back(*it);
    for (std::size_t i = 0; i + 1 < mp.values.size(); ++i) {
      const double mid = 0.5 * (mp.values[i] + mp.values[i + 1]);
      if (mid >= lo && mid <= hi) breaks.push_back(mid);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const auto interval_dist = [](const MeasureProjection& mp, double c) {
    return std::max({mp.lo - c, c - mp.hi, 0.0});
  };

  const double center = 0.5 * (lo + hi);
  double best_tie = kInf;
  const auto consider = [&](double c) {
    double f = 0, gap = 0;
    for (const auto& mp : projections) {
      gap = std::max(gap, interval_dist(mp, c));
      f = std::max({f, interval_dist(mp, c), mp.nearest(c)});
    }
    const double tie = std::abs(c - center);
    if (f < pick.score ||
        (f == pick.score && (tie < best_tie || (tie == best_tie && c < pick.offset)))) {
      pick.score = f;
      pick.offset = c;
      pick.interval_gap = gap;
      best_tie = tie;
    }
  };

  for (double b : breaks) consider(b);
  const std::size_t m = projections.size();
  std::vector<double> da(2 * m), db(2 * m);
  for (std::size_t bi = 0; bi + 1 < breaks.size(); ++bi) {
    const double a = breaks[bi], b = breaks[bi + 1];
    for (std::size_t i = 0; i < m; ++i) {
      da[2 * i] = projections[i].nearest(a);
      db[2 * i] = projections[i].nearest(b);
      da[2 * i + 1] = interval_dist(projections[i], a);
      db[2 * i + 1] = interval_dist(projections[i], b);
    }
    for (std::size_t i = 0; i < da.size(); ++i) {
      const double si = (db[i] - da[i]) / (b - a);
      for (std::size_t j = i + 1; j < da.size(); ++j) {
        const double sj = (db[j] - da[j]) / (b - a);
        if (si == sj) continue;
        const double c = a + (da[j] - da[i]) / (si - sj);
        if (c > a && c < b) consider(c);
      }
    }
  }
  return pick;
}

// ---- level reports -----------------------------------------------------------

// Classification frame: side masses are computed against the exact direction
// and offset the sweep picked; the canonical representative only rescales
// (and possibly flips) that frame, so labels are swapped rather than
// reclassified and the median guarantee survives verbatim.
LevelReport build_level_report(const std::vector<GridMeasure>& grids,
                               const std::vector<AtomicMeasureD>& atoms,
                               const std::vector<double>& frame_u, double frame_c,
                               const HyperplaneD& canonical, bool flipped, double eps,
                               double cell_size) {
  LevelReport level;
  level.epsilon = eps;
  level.cell_size = cell_size;
  level.hyperplane = canonical;

  for (std::size_t i = 0; i < grids.size(); ++i) {
    MeasureLevelStats st;
    st.name = grids[i].name;
    st.total_mass = atoms[i].total_mass();

    double atom_dist = kInf;
    for (const auto& a : atoms[i].atoms()) {
      const double t = dot(frame_u, a.point.coords);
      if (t > frame_c)
        st.mass_plus += a.mass;
      else if (t < frame_c)
        st.mass_minus += a.mass;
      else
        st.mass_on += a.mass;
      atom_dist = std::min(atom_dist, std::abs(t - frame_c));
    }
    st.atom_distance = atom_dist / norm(frame_u);

    const GridMeasure& g = grids[i];
    const double half_reach = 0.5 * g.cell_size * [&] {
      double s = 0;
      for (double v : frame_u) s += std::abs(v);
      return s;
    }() / norm(frame_u);
    double support = kInf;
    for (std::size_t flat = 0; flat < g.cell_masses.size(); ++flat) {
      const double mass = g.cell_masses[flat];
      if (!(mass > 0)) continue;
      const double s = (dot(frame_u, g.centroid(flat).coords) - frame_c) / norm(frame_u);
      const double dist = std::max(0.0, std::abs(s) - half_reach);
      support = std::min(support, dist);
      if (dist < eps) st.slab_mass += mass;
      if (s + half_reach > 0) st.cells_meeting_plus += mass;
      if (s - half_reach < 0) st.cells_meeting_minus += mass;
    }
    st.support_distance = support;

    if (flipped) {
      std::swap(st.mass_plus, st.mass_minus);
      std::swap(st.cells_meeting_plus, st.cells_meeting_minus);
    }
    level.measures.push_back(std::move(st));
  }
  return level;
}

// ---- sweep strategy -----------------------------------------------------------

struct SweepOutcome {
  std::vector<double> direction;
  double offset = 0;
  double score = kInf;
};

SweepOutcome sweep_level(const std::vector<AtomicMeasureD>& atoms, std::size_t dimension,
                         const SweepOptions& opts) {
  std::vector<std::vector<double>> dirs;
  double step = 0;
  if (dimension == 1) {
    dirs.push_back({1.0});
  } else if (dimension == 2) {
    dirs = half_circle_directions(opts.directions_2d);
    step = M_PI / static_cast<double>(opts.directions_2d);
  } else if (dimension == 3) {
    dirs = geodesic_directions(opts.min_directions_3d, &step);
  } else {
    throw invalid_input("sweep strategy supports dimensions 1-3; use the enumerate strategy");
  }

  const auto score_of = [&](const std::vector<double>& u) {
    std::vector<MeasureProjection> proj;
    proj.reserve(atoms.size());
    for (const auto& mu : atoms) proj.push_back(project_measure(mu, u));
    return pick_offset(proj);
  };

  ScoredIndex best = argmin_score(dirs.size(), [&](std::uint64_t i) {
    return score_of(dirs[static_cast<std::size_t>(i)]).score;
  });

  SweepOutcome out;
  out.direction = dirs[static_cast<std::size_t>(best.index)];

  // local x3 refinement around the incumbent direction
  for (int round = 0; round < opts.refine_rounds && dimension >= 2; ++round) {
    step /= 3.0;
    std::vector<std::vector<double>> local{out.direction};
    if (dimension == 2) {
      const double ux = out.direction[0], uy = out.direction[1];
      for (int k : {-2, -1, 1, 2}) {
        const double a = k * step;
        local.push_back({std::cos(a) * ux - std::sin(a) * uy,
                         std::sin(a) * ux + std::cos(a) * uy});
      }
    } else {
      std::size_t axis = 0;
      for (std::size_t k = 1; k < 3; ++k)
        if (std::abs(out.direction[k]) < std::abs(out.direction[axis])) axis = k;
      std::vector<double> e(3, 0.0);
      e[axis] = 1.0;
      std::vector<double> t1 = normalized({out.direction[1] * e[2] - out.direction[2] * e[1],
                                           out.direction[2] * e[0] - out.direction[0] * e[2],
                                           out.direction[0] * e[1] - out.direction[1] * e[0]});
      const std::vector<double> t2 = {out.direction[1] * t1[2] - out.direction[2] * t1[1],
                                      out.direction[2] * t1[0] - out.direction[0] * t1[2],
                                      out.direction[0] * t1[1] - out.direction[1] * t1[0]};
      for (int a = -2; a <= 2; ++a) {
        for (int b = -2; b <= 2; ++b) {
          if (a == 0 && b == 0) continue;
          std::vector<double> v(3);
          for (int d = 0; d < 3; ++d)
            v[d] = out.direction[d] + step * (a * t1[d] + b * t2[d]);
          local.push_back(normalized(std::move(v)));
        }
      }
    }
    ScoredIndex improved = argmin_score(local.size(), [&](std::uint64_t i) {
      return score_of(local[static_cast<std::size_t>(i)]).score;
    });
    out.direction = local[static_cast<std::size_t>(improved.index)];
  }

  const OffsetPick pick = score_of(out.direction);
  out.offset = pick.offset;
  out.score = pick.score;
  return out;
}

// ---- enumerate strategy ---------------------------------------------------------

Instance exact_instance_from_atoms(const std::vector<AtomicMeasureD>& atoms,
                                   std::size_t atom_cap) {
  std::vector<AtomicMeasureQ> exact;
  for (const auto& mu : atoms) {
    if (mu.size() > atom_cap) {
      std::ostringstream os;
      os << "enumerate strategy: measure '" << mu.name() << "' has " << mu.size()
         << " grid atoms, above the cap of " << atom_cap << "; coarsen the schedule or sweep";
      throw limit_error(os.str());
    }
    std::vector<Atom<Rat>> a;
    a.reserve(mu.size());
    for (const auto& atom : mu.atoms()) {
      PointQ p;
      p.coords.reserve(atom.point.dim());
      for (double x : atom.point.coords) p.coords.push_back(rat_from_double(x));
      a.push_back(Atom<Rat>{std::move(p), rat_from_double(atom.mass)});
    }
    exact.emplace_back(std::move(a), mu.name());
  }
  return Instance(std::move(exact));
}

}  // namespace

// ---- schedule driver -------------------------------------------------------------

MeasureSolution solve_measure_cut(const std::vector<MeasureInput>& inputs,
                                  const std::vector<double>& schedule,
                                  const MeasureSolveOptions& options) {
  if (inputs.empty()) throw invalid_input("solve_measure_cut: no inputs");
  const std::size_t n = std::visit([](const auto& v) { return v.dim(); }, inputs.front());
  for (const auto& input : inputs)
    if (std::visit([](const auto& v) { return v.dim(); }, input) != n)
      throw invalid_input("solve_measure_cut: mixed dimensions");
  if (inputs.size() != n)
    throw invalid_input("solve_measure_cut: number of inputs must equal the dimension");
  if (schedule.empty()) throw invalid_input("solve_measure_cut: empty schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0)) throw invalid_input("solve_measure_cut: epsilon must be positive");
    if (i > 0 && !(schedule[i] < schedule[i - 1]))
      throw invalid_input("solve_measure_cut: schedule must be strictly decreasing");
  }

  MeasureSolution solution;
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  for (double eps : schedule) {
    // cell diameter strictly below the level epsilon
    const double h = 0.999 * eps / sqrt_n;

    std::vector<GridMeasure> grids;
    grids.reserve(inputs.size());
    for (const auto& input : inputs) {
      if (const auto* shape = std::get_if<ShapeSpec>(&input)) {
        grids.push_back(rasterize(*shape, h));
      } else {
        const auto& g = std::get<GridMeasure>(input);
        if (!(g.diameter() < eps))
          throw invalid_input("solve_measure_cut: grid cell diameter must stay below epsilon " +
                              std::to_string(eps));
        grids.push_back(g);
      }
    }

    std::vector<AtomicMeasureD> atoms;
    atoms.reserve(grids.size());
    for (const auto& g : grids) atoms.push_back(discretize(g));

    LevelReport level;
    if (options.strategy == Strategy::Sweep) {
      const SweepOutcome out = sweep_level(atoms, n, options.sweep);
      if (!(out.score <= eps)) {
        std::ostringstream os;
        os << "sweep found no direction with an offset within " << eps
           << " of every median interval and every support (best " << out.score
           << "); the direction grid is too coarse";
        throw limit_error(os.str());
      }
      const HyperplaneD canonical = canonicalize(HyperplaneD{out.direction, out.offset});
      const bool flipped = dot(canonical.normal, out.direction) < 0;
      level = build_level_report(grids, atoms, out.direction, out.offset, canonical, flipped,
                                 eps, h);
    } else {
      const Instance exact = exact_instance_from_atoms(atoms, options.enumerate_atom_cap);
      const Solution discrete = solve_touching_cut(exact);
      std::vector<double> u(n);
      for (std::size_t k = 0; k < n; ++k) u[k] = rat_to_double(discrete.hyperplane.normal[k]);
      const double c = rat_to_double(discrete.hyperplane.offset);
      const HyperplaneD canonical = canonicalize(HyperplaneD{u, c});
      const bool flipped = dot(canonical.normal, u) < 0;
      level = build_level_report(grids, atoms, u, c, canonical, flipped, eps, h);
      level.atom_on_plane = true;

      // the frame came from exact data; overwrite the atom masses with the
      // exactly computed classification
      for (std::size_t i = 0; i < exact.measures().size(); ++i) {
        const auto masses = side_masses(exact.measures()[i], discrete.hyperplane, Rat(0));
        auto& st = level.measures[i];
        st.mass_plus = rat_to_double(flipped ? masses.minus : masses.plus);
        st.mass_minus = rat_to_double(flipped ? masses.plus : masses.minus);
        st.mass_on = rat_to_double(masses.on);
        st.atom_distance = 0.0;
      }
    }
    solution.trace.levels.push_back(std::move(level));

    // remember the final level's grids for the solution report
    if (eps == schedule.back()) {
      const LevelReport& last = solution.trace.levels.back();
      solution.hyperplane = last.hyperplane;
      CutReport<double> report;
      report.hyperplane = last.hyperplane;
      report.all_bisected = true;
      report.all_touched = true;
      for (std::size_t i = 0; i < grids.size(); ++i) {
        const auto& st = last.measures[i];
        MeasureCut<double> cut;
        cut.name = st.name;
        cut.total_mass = st.total_mass;
        cut.mass_minus = st.mass_minus;
        cut.mass_on = st.mass_on;
        cut.mass_plus = st.mass_plus;
        cut.support_distance = st.support_distance;
        // nearest nonzero cell centroid stands in as the touch witness
        const GridMeasure& g = grids[i];
        double best = kInf;
        std::optional<PointD> witness;
        for (std::size_t flat = 0; flat < g.cell_masses.size(); ++flat) {
          if (!(g.cell_masses[flat] > 0)) continue;
          PointD p = g.centroid(flat);
          const double d = std::abs(dot(last.hyperplane.normal, p.coords) - last.hyperplane.offset);
          if (d < best) {
            best = d;
            witness = std::move(p);
          }
        }
        cut.touch_witness = witness;
        // measure-mode flags: bisected within the level's slab bound, touched
        // within the level epsilon (both are the realized finite-level bounds)
        const double slack = st.slab_mass + 1e-12 * st.total_mass;
        report.all_bisected = report.all_bisected &&
                              cut.mass_plus <= st.total_mass / 2 + slack &&
                              cut.mass_minus <= st.total_mass / 2 + slack;
        report.all_touched = report.all_touched && st.support_distance <= eps;
        report.measures.push_back(std::move(cut));
      }
      solution.report = std::move(report);
    }
  }

  // convergence: last two levels agree in direction and offset
  auto& trace = solution.trace;
  if (trace.levels.size() >= 2) {
    const HyperplaneD& a = trace.levels[trace.levels.size() - 2].hyperplane;
    const HyperplaneD& b = trace.levels.back().hyperplane;
    double best_angle = kInf, best_offset = kInf;
    for (double s : {1.0, -1.0}) {
      const double d = std::clamp(s * dot(a.normal, b.normal), -1.0, 1.0);
      const double angle = std::acos(d);
      const double off = std::abs(a.offset - s * b.offset);
      if (std::max(angle, off) < std::max(best_angle, best_offset)) {
        best_angle = angle;
        best_offset = off;
      }
    }
    trace.direction_residual = best_angle;
    trace.offset_residual = best_offset;
    trace.converged = best_angle < options.convergence_tol && best_offset < options.convergence_tol;
  }
  return solution;
}

}  // namespace mayocut
