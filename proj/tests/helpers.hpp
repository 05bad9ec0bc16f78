#pragma once

#include <random>
#include <vector>

#include "mayocut/bisection.hpp"
#include "mayocut/discrete_solver.hpp"
#include "mayocut/geometry.hpp"

// Shared test scaffolding: terse builders, exact rigid motions, and seeded
// random data on the 1/2^16 coordinate grid.

namespace mayocut::testing {

inline PointQ qp(std::initializer_list<long> coords) {
  PointQ p;
  for (long c : coords) p.coords.emplace_back(c);
  return p;
}

inline AtomicMeasureQ unit_measure(std::vector<PointQ> points, std::string name = {}) {
  std::vector<Atom<Rat>> atoms;
  for (auto& p : points) atoms.push_back(Atom<Rat>{std::move(p), Rat(1)});
  return AtomicMeasureQ(std::move(atoms), std::move(name));
}

inline HyperplaneQ plane(std::initializer_list<long> normal, long offset) {
  HyperplaneQ h;
  for (long c : normal) h.normal.emplace_back(c);
  h.offset = Rat(offset);
  return h;
}

// Exact rigid motion built from Pythagorean rotations.
struct RigidMotion {
  std::vector<std::vector<Rat>> rot;  // orthogonal, det +1
  std::vector<Rat> shift;

  PointQ apply(const PointQ& p) const {
    PointQ out;
    out.coords.assign(p.dim(), Rat(0));
    for (std::size_t i = 0; i < p.dim(); ++i) {
      for (std::size_t j = 0; j < p.dim(); ++j) out[i] += rot[i][j] * p[j];
      out[i] += shift[i];
    }
    return out;
  }

  // x' = Rx + t maps {<u,x> = c} to {<Ru, x'> = c + <Ru, t>}
  HyperplaneQ apply(const HyperplaneQ& h) const {
    HyperplaneQ out;
    out.normal.assign(h.dim(), Rat(0));
    for (std::size_t i = 0; i < h.dim(); ++i)
      for (std::size_t j = 0; j < h.dim(); ++j) out.normal[i] += rot[i][j] * h.normal[j];
    out.offset = h.offset + dot(out.normal, shift);
    return canonicalize(out);
  }
};

inline RigidMotion pythagorean_motion(std::size_t dim) {
  // rotation by the (3,4,5) angle in the first plane, plus (5,12,13) in the
  // next plane for dim 3; translation by small rationals
  RigidMotion m;
  m.rot.assign(dim, std::vector<Rat>(dim, Rat(0)));
  for (std::size_t i = 0; i < dim; ++i) m.rot[i][i] = 1;
  m.rot[0][0] = Rat(3) / 5;
  m.rot[0][1] = Rat(-4) / 5;
  m.rot[1][0] = Rat(4) / 5;
  m.rot[1][1] = Rat(3) / 5;
  if (dim >= 3) {
    // compose with a rotation in the (1,2) plane
    std::vector<std::vector<Rat>> r2(dim, std::vector<Rat>(dim, Rat(0)));
    for (std::size_t i = 0; i < dim; ++i) r2[i][i] = 1;
    r2[1][1] = Rat(5) / 13;
    r2[1][2] = Rat(-12) / 13;
    r2[2][1] = Rat(12) / 13;
    r2[2][2] = Rat(5) / 13;
    std::vector<std::vector<Rat>> prod(dim, std::vector<Rat>(dim, Rat(0)));
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t k = 0; k < dim; ++k) prod[i][j] += r2[i][k] * m.rot[k][j];
    m.rot = std::move(prod);
  }
  m.shift.assign(dim, Rat(0));
  m.shift[0] = Rat(7) / 3;
  if (dim >= 2) m.shift[1] = Rat(-2) / 5;
  if (dim >= 3) m.shift[2] = Rat(11) / 7;
  return m;
}

inline Instance apply(const RigidMotion& m, const Instance& inst) {
  std::vector<AtomicMeasureQ> measures;
  for (const auto& mu : inst.measures()) {
    std::vector<Atom<Rat>> atoms;
    for (const auto& a : mu.atoms()) atoms.push_back(Atom<Rat>{m.apply(a.point), a.mass});
    measures.emplace_back(std::move(atoms), mu.name());
  }
  return Instance(std::move(measures));
}

inline Rat random_coord(std::mt19937_64& rng, long lo, long hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) * 65536;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % (span + 1);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return Rat(lo) + Rat(Int(x % (span + 1)), Int(65536));
}

inline PointQ random_point(std::mt19937_64& rng, std::size_t dim, long lo = -8, long hi = 8) {
  PointQ p;
  for (std::size_t k = 0; k < dim; ++k) p.coords.push_back(random_coord(rng, lo, hi));
  return p;
}

inline HyperplaneQ random_plane(std::mt19937_64& rng, std::size_t dim) {
  HyperplaneQ h;
  bool nonzero = false;
  do {
    h.normal.clear();
    for (std::size_t k = 0; k < dim; ++k) {
      h.normal.push_back(random_coord(rng, -8, 8));
      if (h.normal.back() != 0) nonzero = true;
    }
  } while (!nonzero);
  h.offset = random_coord(rng, -8, 8);
  return h;
}

}  // namespace mayocut::testing
