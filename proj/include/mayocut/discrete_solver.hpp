#pragma once

#include <cstdint>
#include <vector>

#include "mayocut/bisection.hpp"
#include "mayocut/geometry.hpp"

// Exact solver for the discrete touching-cut problem: given n atomic
// measures in R^n, find a hyperplane that bisects every measure and carries
// an atom of each. Candidates are hyperplanes spanned by one atom per
// measure, enumerated in lexicographic tuple order; degenerate tuples are
// completed by a pencil sweep, and stubborn configurations fall back to a
// deterministic symbolic perturbation of the points.

namespace mayocut {

// Exactly n atomic measures in R^n, exact masses. Immutable.
class Instance {
 public:
  explicit Instance(std::vector<AtomicMeasureQ> measures)
      : measures_(std::move(measures)) {
    if (measures_.empty()) throw invalid_input("instance: no measures");
    dimension_ = measures_[0].dim();
    if (measures_.size() != dimension_)
      throw invalid_input("instance: number of measures must equal the dimension");
    for (const auto& mu : measures_)
      if (mu.dim() != dimension_) throw invalid_input("instance: mixed dimensions");
  }

  std::size_t dimension() const { return dimension_; }
  const std::vector<AtomicMeasureQ>& measures() const { return measures_; }

 private:
  std::vector<AtomicMeasureQ> measures_;
  std::size_t dimension_ = 0;
};

struct SolveDiagnostics {
  std::uint64_t candidates_examined = 0;  // tuple tests across all phases
  std::uint64_t completions_used = 0;     // pencil sweeps evaluated
  int perturb_retries = 0;                // symbolic perturbation rounds
};

struct Solution {
  HyperplaneQ hyperplane;
  CutReport<Rat> report;
  std::vector<std::size_t> witness_tuple;  // one atom index per measure, all on the plane
  SolveDiagnostics diagnostics;
};

struct SolverLimits {
  std::uint64_t enumerate_tuple_cap = 1'000'000;
  std::size_t perturb_atom_cap = 20;  // exhaustive 2^m subset check beyond this is infeasible
  int max_perturb_retries = 5;
};

// Reduces the mass of the first atom by delta = m_min/p (successive primes p,
// delta < eps) until no atom subset has mass-sum equal to its complement's.
// Verified by exhaustive subset enumeration, hence the atom-count cap.
AtomicMeasureQ perturb_masses(const AtomicMeasureQ& mu, const Rat& eps,
                              std::size_t atom_cap = SolverLimits{}.perturb_atom_cap);

// Returns the first passing cut in lexicographic tuple order. Existence is
// guaranteed for valid input; exhausting the perturbation retries throws
// limit_error with a nearest-miss report. Deterministic for any worker count.
Solution solve_touching_cut(const Instance& inst, const SolverLimits& limits = {});

// All distinct canonical hyperplanes through one atom per measure that pass
// the cut test: full-rank tuples, plus the completion families of degenerate
// tuples sampled at their critical positions. Oracle-grade, capped.
std::vector<Solution> enumerate_all_cuts(const Instance& inst,
                                         const SolverLimits& limits = {});

}  // namespace mayocut
