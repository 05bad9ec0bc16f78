#include "mayocut/discrete_solver.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include "mayocut/kernels.hpp"

namespace mayocut {

namespace {

const Rat kZero{0};

// ---- tuple indexing --------------------------------------------------------

struct TupleIndexer {
  std::vector<std::size_t> sizes;
  std::uint64_t total = 1;

  explicit TupleIndexer(const Instance& inst) {
    for (const auto& mu : inst.measures()) {
      sizes.push_back(mu.size());
      if (total > UINT64_MAX / mu.size())
        throw limit_error("tuple space overflows a 64-bit index");
      total *= mu.size();
    }
  }

  // Row-major decode: measure 0 varies slowest, matching lexicographic
  // ordering of (a_1, ..., a_n).
  std::vector<std::size_t> decode(std::uint64_t idx) const {
    std::vector<std::size_t> tuple(sizes.size());
    for (std::size_t i = sizes.size(); i-- > 0;) {
      tuple[i] = static_cast<std::size_t>(idx % sizes[i]);
      idx /= sizes[i];
    }
    return tuple;
  }
};

std::vector<PointQ> tuple_points(const Instance& inst, const std::vector<std::size_t>& tuple) {
  std::vector<PointQ> pts;
  pts.reserve(tuple.size());
  for (std::size_t i = 0; i < tuple.size(); ++i)
    pts.push_back(inst.measures()[i].atom(tuple[i]).point);
  return pts;
}

bool passes(const Instance& inst, const HyperplaneQ& h) {
  const Rat two{2};
  for (const auto& mu : inst.measures()) {
    const SideMasses<Rat> m = side_masses(mu, h, kZero);
    if (m.plus * two > mu.total_mass() || m.minus * two > mu.total_mass()) return false;
    if (!(m.on > 0)) return false;
  }
  return true;
}

// ---- degeneracy completion -------------------------------------------------

// A tuple whose affine hull F has dimension d < n-1 leaves an
// (n-1-d)-parameter family of containing hyperplanes. Family normals live in
// the null space W of F's direction space (dim w = n-d >= 2); each atom
// outside F contributes a linear constraint on the normal, and the cut
// predicate is constant on the cells of the resulting central arrangement.
// Moving a hyperplane to the boundary of its cell only moves atoms onto the
// plane, which never breaks bisection or touching, so whenever any family
// member passes, a minimal face of the arrangement passes too. It is enough
// to test, exactly and deterministically:
//   w = 2: every critical direction plus one representative per open arc,
//   w > 2: the null direction of every rank-(w-1) constraint subset
//          (the arrangement vertices) plus a representative of the common
//          null space when the constraints do not span.
struct Family {
  PointQ base;
  std::vector<std::vector<Rat>> w;  // basis of the normal space, size n-d
};

std::optional<Family> make_family(const std::vector<PointQ>& pts) {
  const std::size_t n = pts[0].dim();
  std::vector<std::vector<Rat>> dirs;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    std::vector<Rat> d(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = pts[i][j] - pts[0][j];
    dirs.push_back(std::move(d));
  }
  auto basis = null_space(dirs, n);
  if (basis.size() < 2) return std::nullopt;  // full rank: the plane is unique
  return Family{pts[0], std::move(basis)};
}

struct Dir2 {
  Int x, y;
  friend bool operator==(const Dir2&, const Dir2&) = default;
};

// cross > 0 means a's angle precedes b's within the half-open upper
// half-circle the canonical form maps onto.
Int cross(const Dir2& a, const Dir2& b) { return a.x * b.y - a.y * b.x; }

Dir2 canonical_dir(const Rat& x, const Rat& y) {
  Int den = lcm(denominator(x), denominator(y));
  Int ix = numerator(x) * (den / denominator(x));
  Int iy = numerator(y) * (den / denominator(y));
  Int g = gcd(ix, iy);  // nonnegative; inputs are never both zero
  ix /= g;
  iy /= g;
  if (iy < 0 || (iy == 0 && ix < 0)) {
    ix = -ix;
    iy = -iy;
  }
  return Dir2{std::move(ix), std::move(iy)};
}

HyperplaneQ family_plane(const Family& family, const std::vector<Rat>& coords) {
  const std::size_t n = family.base.dim();
  HyperplaneQ h;
  h.normal.assign(n, Rat(0));
  for (std::size_t k = 0; k < family.w.size(); ++k)
    for (std::size_t j = 0; j < n; ++j) h.normal[j] += coords[k] * family.w[k][j];
  h.offset = dot(h.normal, family.base.coords);
  return canonicalize(h);
}

// Atom constraints in family coordinates: <u, a - base> as a linear form on
// the normal-space coefficients. All-zero rows (atoms on every family
// member) are dropped; the rest are deduplicated projectively.
std::vector<std::vector<Rat>> family_constraints(const Instance& inst, const Family& family) {
  std::set<std::vector<Rat>> seen;
  std::vector<std::vector<Rat>> rows;
  for (const auto& mu : inst.measures()) {
    for (const auto& atom : mu.atoms()) {
      std::vector<Rat> row(family.w.size(), Rat(0));
      bool nonzero = false;
      for (std::size_t k = 0; k < family.w.size(); ++k) {
        for (std::size_t j = 0; j < atom.point.dim(); ++j)
          row[k] += family.w[k][j] * (atom.point[j] - family.base[j]);
        if (row[k] != 0) nonzero = true;
      }
      if (!nonzero) continue;
      // projective canonical form
      std::size_t first = 0;
      while (row[first] == 0) ++first;
      const Rat scale = row[first];
      for (Rat& v : row) v /= scale;
      if (seen.insert(row).second) rows.push_back(std::move(row));
    }
  }
  return rows;
}

// w = 2 sweep: sorted critical directions plus arc representatives (any
// positive combination stays strictly inside an arc shorter than a half
// turn).
std::vector<std::vector<Rat>> pencil_candidates(const std::vector<std::vector<Rat>>& constraints) {
  std::vector<Dir2> crit;
  for (const auto& row : constraints) crit.push_back(canonical_dir(-row[1], row[0]));
  std::sort(crit.begin(), crit.end(),
            [](const Dir2& a, const Dir2& b) { return cross(a, b) > 0; });
  crit.erase(std::unique(crit.begin(), crit.end()), crit.end());

  std::vector<Dir2> dirs;
  if (crit.empty()) {
    dirs.push_back(Dir2{1, 0});
  } else if (crit.size() == 1) {
    dirs.push_back(crit[0]);
    dirs.push_back(Dir2{-crit[0].y, crit[0].x});
  } else {
    for (std::size_t i = 0; i < crit.size(); ++i) {
      dirs.push_back(crit[i]);
      if (i + 1 < crit.size())
        dirs.push_back(Dir2{crit[i].x + crit[i + 1].x, crit[i].y + crit[i + 1].y});
    }
    // wrap-around arc between the last direction and the first one's antipode
    dirs.push_back(Dir2{crit.back().x - crit.front().x, crit.back().y - crit.front().y});
  }

  std::vector<std::vector<Rat>> out;
  out.reserve(dirs.size());
  for (const Dir2& d : dirs) out.push_back({Rat(d.x), Rat(d.y)});
  return out;
}

// w > 2: arrangement vertices (null directions of rank-(w-1) constraint
// subsets) plus, when the constraints do not span, the common null space.
std::vector<std::vector<Rat>> vertex_candidates(const std::vector<std::vector<Rat>>& constraints,
                                                std::size_t w) {
  std::vector<std::vector<Rat>> out;
  if (constraints.empty()) {
    std::vector<Rat> e1(w, Rat(0));
    e1[0] = 1;
    out.push_back(std::move(e1));
    return out;
  }
  if (auto common = null_space(constraints, w); !common.empty())
    out.push_back(common.front());

  // every (w-1)-subset in lexicographic order
  const std::size_t m = constraints.size();
  const std::size_t k = w - 1;
  if (m >= k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::vector<std::vector<Rat>> rows;
      rows.reserve(k);
      for (std::size_t i : idx) rows.push_back(constraints[i]);
      if (auto ns = null_space(rows, w); ns.size() == 1) out.push_back(std::move(ns.front()));

      std::size_t pos = k;
      while (pos-- > 0) {
        if (idx[pos] != m - k + pos) {
          ++idx[pos];
          for (std::size_t i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
          break;
        }
        if (pos == 0) return out;
      }
    }
  }
  return out;
}

std::vector<HyperplaneQ> family_planes(const Instance& inst, const Family& family) {
  const auto constraints = family_constraints(inst, family);
  const auto coords = family.w.size() == 2 ? pencil_candidates(constraints)
                                           : vertex_candidates(constraints, family.w.size());
  std::set<std::pair<std::vector<Rat>, Rat>> seen;
  std::vector<HyperplaneQ> out;
  for (const auto& c : coords) {
    HyperplaneQ h = family_plane(family, c);
    if (seen.insert({h.normal, h.offset}).second) out.push_back(std::move(h));
  }
  return out;
}

std::optional<HyperplaneQ> family_first_passing(const Instance& inst, const Family& family) {
  for (HyperplaneQ& h : family_planes(inst, family))
    if (passes(inst, h)) return std::move(h);
  return std::nullopt;
}

std::vector<HyperplaneQ> family_all_passing(const Instance& inst, const Family& family) {
  std::vector<HyperplaneQ> out;
  for (HyperplaneQ& h : family_planes(inst, family))
    if (passes(inst, h)) out.push_back(std::move(h));
  return out;
}

// ---- solver phases ---------------------------------------------------------

Solution materialize(const Instance& inst, HyperplaneQ h, std::vector<std::size_t> tuple,
                     SolveDiagnostics diag) {
  Solution sol;
  sol.report = evaluate_cut(inst.measures(), h, kZero);
  sol.hyperplane = std::move(h);
  sol.witness_tuple = std::move(tuple);
  sol.diagnostics = diag;
  return sol;
}

std::optional<HyperplaneQ> full_rank_candidate(const Instance& inst,
                                               const std::vector<std::size_t>& tuple) {
  auto result = hyperplane_through(tuple_points(inst, tuple));
  if (auto* h = std::get_if<HyperplaneQ>(&result))
    if (passes(inst, *h)) return std::move(*h);
  return std::nullopt;
}

std::optional<HyperplaneQ> completion_candidate(const Instance& inst,
                                                const std::vector<std::size_t>& tuple) {
  const auto pts = tuple_points(inst, tuple);
  auto result = hyperplane_through(pts);
  if (!std::holds_alternative<Deficient>(result)) return std::nullopt;
  auto family = make_family(pts);
  if (!family) return std::nullopt;
  return family_first_passing(inst, *family);
}

// Phases 1 and 2: full-rank tuples first, then pencil completions, both in
// lexicographic tuple order with deterministic parallel scans.
std::optional<Solution> solve_by_enumeration(const Instance& inst, SolveDiagnostics& diag) {
  const TupleIndexer indexer(inst);

  const auto full_rank_pred = [&](std::uint64_t idx) {
    return full_rank_candidate(inst, indexer.decode(idx)).has_value();
  };
  std::uint64_t idx = min_index_where(indexer.total, full_rank_pred);
  diag.candidates_examined += (idx == knpos ? indexer.total : idx + 1);
  if (idx != knpos) {
    auto tuple = indexer.decode(idx);
    auto h = full_rank_candidate(inst, tuple);
    return materialize(inst, std::move(*h), std::move(tuple), diag);
  }

  const auto completion_pred = [&](std::uint64_t i) {
    return completion_candidate(inst, indexer.decode(i)).has_value();
  };
  idx = min_index_where(indexer.total, completion_pred);
  const std::uint64_t scanned = (idx == knpos ? indexer.total : idx + 1);
  diag.candidates_examined += scanned;
  // recount sweeps deterministically: one per degenerate tuple actually reached
  for (std::uint64_t i = 0; i < scanned; ++i) {
    const auto pts = tuple_points(inst, indexer.decode(i));
    if (std::holds_alternative<Deficient>(hyperplane_through(pts)) && make_family(pts))
      ++diag.completions_used;
  }
  if (idx != knpos) {
    auto tuple = indexer.decode(idx);
    auto h = completion_candidate(inst, tuple);
    return materialize(inst, std::move(*h), std::move(tuple), diag);
  }
  return std::nullopt;
}

// Symbolic perturbation: displace atom j of measure i along a moment-curve
// direction indexed by q = i*M + j; distinct q give linearly independent
// displacement directions, so degeneracies among the original atoms break.
Instance displaced_instance(const Instance& inst, const Rat& delta) {
  std::size_t max_size = 0;
  for (const auto& mu : inst.measures()) max_size = std::max(max_size, mu.size());
  const std::size_t denom = inst.measures().size() * max_size;

  std::vector<AtomicMeasureQ> out;
  for (std::size_t i = 0; i < inst.measures().size(); ++i) {
    const auto& mu = inst.measures()[i];
    std::vector<Atom<Rat>> atoms = mu.atoms();
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      const Rat r = make_rat(Int(i * max_size + j), Int(denom));
      Rat power{1};
      for (std::size_t k = 0; k < atoms[j].point.dim(); ++k) {
        atoms[j].point[k] += delta * power;
        power *= r;
      }
    }
    out.emplace_back(std::move(atoms), mu.name());
  }
  return Instance(std::move(out));
}

// Re-check a tuple found on perturbed data against the original atoms.
std::optional<HyperplaneQ> reverify_on_original(const Instance& inst,
                                                const std::vector<std::size_t>& tuple) {
  if (auto h = full_rank_candidate(inst, tuple)) return h;
  return completion_candidate(inst, tuple);
}

std::string nearest_miss_report(const Instance& inst) {
  const TupleIndexer indexer(inst);
  Rat best_excess{-1};
  std::vector<std::size_t> best_tuple;
  for (std::uint64_t idx = 0; idx < indexer.total; ++idx) {
    const auto tuple = indexer.decode(idx);
    auto result = hyperplane_through(tuple_points(inst, tuple));
    auto* h = std::get_if<HyperplaneQ>(&result);
    if (!h) continue;
    Rat excess{0};
    for (const auto& mu : inst.measures()) {
      const auto m = side_masses(mu, *h, kZero);
      const Rat half = mu.total_mass() / 2;
      excess = std::max({excess, Rat(m.plus - half), Rat(m.minus - half)});
    }
    if (best_excess < 0 || excess < best_excess) {
      best_excess = excess;
      best_tuple = tuple;
    }
  }
  std::ostringstream os;
  os << "nearest miss: bisection excess " << best_excess << " at tuple (";
  for (std::size_t i = 0; i < best_tuple.size(); ++i) os << (i ? "," : "") << best_tuple[i];
  os << ")";
  return os.str();
}

}  // namespace

AtomicMeasureQ perturb_masses(const AtomicMeasureQ& mu, const Rat& eps, std::size_t atom_cap) {
  if (!(eps > 0)) throw invalid_input("perturb_masses: eps must be positive");
  if (mu.size() > atom_cap || mu.size() > 62)
    throw limit_error("perturb_masses: atom count exceeds the exhaustive verification cap");

  Rat min_mass = mu.atom(0).mass;
  for (const auto& a : mu.atoms()) min_mass = std::min(min_mass, a.mass);

  const auto subset_tie_free = [&](const std::vector<Rat>& masses) {
    Rat total{0};
    for (const Rat& m : masses) total += m;
    // Gray-code walk over all nonempty subsets, one add or subtract each.
    Rat sum{0};
    std::uint64_t prev = 0;
    for (std::uint64_t k = 1; k < (std::uint64_t{1} << masses.size()); ++k) {
      const std::uint64_t code = k ^ (k >> 1);
      const std::uint64_t flipped = code ^ prev;
      const int bit = std::countr_zero(flipped);
      if (code & flipped)
        sum += masses[static_cast<std::size_t>(bit)];
      else
        sum -= masses[static_cast<std::size_t>(bit)];
      prev = code;
      if (sum * 2 == total) return false;
    }
    return true;
  };

  const auto is_prime = [](std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) return false;
    return true;
  };

  for (std::uint64_t p = 2; p < 100'000; ++p) {
    if (!is_prime(p)) continue;
    const Rat delta = min_mass / Rat(p);
    if (!(delta < eps)) continue;  // also < min_mass since p >= 2
    std::vector<Rat> masses;
    masses.reserve(mu.size());
    for (const auto& a : mu.atoms()) masses.push_back(a.mass);
    masses[0] -= delta;
    if (!subset_tie_free(masses)) continue;
    std::vector<Atom<Rat>> atoms = mu.atoms();
    atoms[0].mass = masses[0];
    return AtomicMeasureQ(std::move(atoms), mu.name());
  }
  throw limit_error("perturb_masses: no tie-free reduction found (prime budget exhausted)");
}

Solution solve_touching_cut(const Instance& inst, const SolverLimits& limits) {
  SolveDiagnostics diag;
  if (auto sol = solve_by_enumeration(inst, diag)) return *sol;

  // Degenerate beyond pencil reach: perturb the points, solve, and carry the
  // winning tuple's family back to the original data.
  for (int retry = 1; retry <= limits.max_perturb_retries; ++retry) {
    diag.perturb_retries = retry;
    const Rat delta = make_rat(1, Int(1) << (10 * retry));
    std::optional<Solution> perturbed_sol;
    try {
      const Instance perturbed = displaced_instance(inst, delta);
      perturbed_sol = solve_by_enumeration(perturbed, diag);
    } catch (const invalid_input&) {
      continue;  // displacement collided two atoms; shrink and retry
    }
    if (!perturbed_sol) continue;
    if (auto h = reverify_on_original(inst, perturbed_sol->witness_tuple))
      return materialize(inst, std::move(*h), perturbed_sol->witness_tuple, diag);
  }
  throw limit_error("solve_touching_cut: retry budget exhausted; " + nearest_miss_report(inst));
}

std::vector<Solution> enumerate_all_cuts(const Instance& inst, const SolverLimits& limits) {
  const TupleIndexer indexer(inst);
  if (indexer.total > limits.enumerate_tuple_cap)
    throw limit_error("enumerate_all_cuts: tuple count exceeds the cap");

  std::vector<std::vector<HyperplaneQ>> found(indexer.total);
  for_each_index(static_cast<std::size_t>(indexer.total), [&](std::size_t idx) {
    const auto tuple = indexer.decode(idx);
    const auto pts = tuple_points(inst, tuple);
    auto result = hyperplane_through(pts);
    if (auto* h = std::get_if<HyperplaneQ>(&result)) {
      if (passes(inst, *h)) found[idx].push_back(std::move(*h));
    } else if (auto family = make_family(pts)) {
      found[idx] = family_all_passing(inst, *family);
    }
  });

  std::set<std::pair<std::vector<Rat>, Rat>> seen;
  std::vector<Solution> out;
  for (std::uint64_t idx = 0; idx < indexer.total; ++idx) {
    for (HyperplaneQ& h : found[idx]) {
      if (!seen.insert({h.normal, h.offset}).second) continue;
      SolveDiagnostics diag;
      diag.candidates_examined = idx + 1;
      out.push_back(materialize(inst, std::move(h), indexer.decode(idx), diag));
    }
  }
  return out;
}

}  // namespace mayocut
