#include "mayocut/oracle.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace mayocut {

VerifyReport verify(const Instance& inst, const HyperplaneQ& plane, const Rat& tol) {
  if (plane.dim() != inst.dimension()) throw invalid_input("verify: dimension mismatch");
  VerifyReport report;
  report.verdict = true;
  for (const auto& mu : inst.measures()) {
    MeasureVerify v;
    v.name = mu.name();
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& atom : mu.atoms()) {
      v.total_mass += atom.mass;
      switch (side_of(atom.point, plane, tol)) {
        case Side::Minus: v.mass_minus += atom.mass; break;
        case Side::Plus: v.mass_plus += atom.mass; break;
        case Side::On:
          v.mass_on += atom.mass;
          if (!v.witness) v.witness = atom.point;
          break;
      }
      nearest = std::min(nearest, distance_point_hyperplane(atom.point, plane));
    }
    v.bisected = v.mass_plus * 2 <= v.total_mass && v.mass_minus * 2 <= v.total_mass;
    v.touched = v.mass_on > 0;
    v.nearest_atom_distance = v.touched ? 0.0 : nearest;
    report.verdict = report.verdict && v.bisected && v.touched;
    report.measures.push_back(std::move(v));
  }
  return report;
}

GridVerifyReport verify(const std::vector<GridMeasure>& grids, const HyperplaneD& plane,
                        double touch_tol) {
  if (grids.empty()) throw invalid_input("verify: no grids");
  GridVerifyReport report;
  report.verdict = true;
  const double unit = norm(plane.normal);
  if (!(unit > 0)) throw invalid_input("verify: zero normal");

  for (const GridMeasure& g : grids) {
    if (g.dim() != plane.dim()) throw invalid_input("verify: dimension mismatch");
    GridMeasureVerify v;
    v.name = g.name;
    double reach = 0;
    for (double x : plane.normal) reach += std::abs(x);
    reach *= 0.5 * g.cell_size / unit;

    double support = std::numeric_limits<double>::infinity();
    double slab = 0;
    for (std::size_t flat = 0; flat < g.cell_masses.size(); ++flat) {
      const double mass = g.cell_masses[flat];
      if (!(mass > 0)) continue;
      v.total_mass += mass;
      const double s = (dot(plane.normal, g.centroid(flat).coords) - plane.offset) / unit;
      if (s > 0)
        v.mass_plus += mass;
      else if (s < 0)
        v.mass_minus += mass;
      else
        v.mass_on += mass;
      const double dist = std::max(0.0, std::abs(s) - reach);
      support = std::min(support, dist);
      if (dist < touch_tol) slab += mass;
    }
    // bisected at this resolution: the excess over half is charged to the
    // slab mass, the finite-level bound the refinement argument provides
    const double slack = slab + 1e-12 * v.total_mass;
    v.bisected = v.mass_plus <= v.total_mass / 2 + slack && v.mass_minus <= v.total_mass / 2 + slack;
    v.support_distance = support;
    v.touched = support <= touch_tol;
    report.verdict = report.verdict && v.bisected && v.touched;
    report.measures.push_back(std::move(v));
  }
  return report;
}

namespace {

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  // rejection sampling keeps the draw uniform and engine-portable
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

constexpr std::int64_t kDenom = 65536;  // coordinate grid 1/2^16

AtomicMeasureQ gen_measure(std::mt19937_64& rng, std::size_t count, const GenBox& bbox,
                           const std::string& name, const Rat& mass) {
  const std::size_t n = bbox.lo.dim();
  std::vector<std::uint64_t> spans(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Rat extent = (bbox.hi[k] - bbox.lo[k]) * kDenom;
    if (!(extent > 0)) throw invalid_input("generator: degenerate bounding box");
    const Int ticks = numerator(extent) / denominator(extent);
    if (ticks > Int(UINT64_MAX / 2)) throw invalid_input("generator: bounding box too large");
    spans[k] = ticks.convert_to<std::uint64_t>() + 1;
  }

  std::set<std::vector<Rat>> seen;
  std::vector<Atom<Rat>> atoms;
  for (std::size_t i = 0; i < count; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
      std::vector<Rat> coords(n);
      for (std::size_t k = 0; k < n; ++k)
        coords[k] = bbox.lo[k] + make_rat(Int(bounded(rng, spans[k])), Int(kDenom));
      if (seen.insert(coords).second) {
        atoms.push_back(Atom<Rat>{PointQ(std::move(coords)), mass});
        placed = true;
      }
    }
    if (!placed)
      throw limit_error("generator: bounding box too small to place " + std::to_string(count) +
                        " distinct points");
  }
  return AtomicMeasureQ(std::move(atoms), name);
}

}  // namespace

Instance gen_saltpepper(std::uint64_t seed, std::size_t count_salt, std::size_t count_pepper,
                        const GenBox& bbox) {
  if (count_salt == 0 || count_pepper == 0) throw invalid_input("generator: counts must be >= 1");
  if (bbox.lo.dim() != 2) throw invalid_input("gen_saltpepper: two measures need a 2-d box");
  std::mt19937_64 rng(seed);
  std::vector<AtomicMeasureQ> measures;
  measures.push_back(gen_measure(rng, count_salt, bbox, "salt", Rat(1)));
  measures.push_back(gen_measure(rng, count_pepper, bbox, "pepper", Rat(1)));
  return Instance(std::move(measures));
}

Instance gen_instance(std::uint64_t seed, std::size_t dimension,
                      const std::vector<std::size_t>& sizes, const GenBox& bbox) {
  if (sizes.size() != dimension) throw invalid_input("gen_instance: one size per dimension");
  if (bbox.lo.dim() != dimension) throw invalid_input("gen_instance: box dimension mismatch");
  std::mt19937_64 rng(seed);
  std::vector<AtomicMeasureQ> measures;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) throw invalid_input("gen_instance: counts must be >= 1");
    std::string name(1, static_cast<char>('A' + i % 26));
    measures.push_back(gen_measure(rng, sizes[i], bbox, name, Rat(1)));
  }
  return Instance(std::move(measures));
}

}  // namespace mayocut
