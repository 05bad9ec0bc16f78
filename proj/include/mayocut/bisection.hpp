#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mayocut/geometry.hpp"

// Side-mass accounting and the bisection/touching predicates for atomic
// measures. Bisection is the open-half-space inequality (a weighted median):
// no more than half the total mass strictly on either side. Mass sitting on
// the plane itself counts toward neither side, which is what makes odd
// counts and atoms-on-plane work.

namespace mayocut {

template <class S>
struct Atom {
  Point<S> point;
  S mass{};
};

// Finite list of positively weighted, pairwise distinct points. Immutable
// after construction; all accessors are const and thread-safe.
template <class S>
class AtomicMeasure {
 public:
  AtomicMeasure(std::vector<Atom<S>> atoms, std::string name = {})
      : atoms_(std::move(atoms)), name_(std::move(name)) {
    if (atoms_.empty()) throw invalid_input("atomic measure needs at least one atom");
    const std::size_t n = atoms_[0].point.dim();
    if (n == 0) throw invalid_input("atomic measure: zero-dimensional atoms");
    total_ = S{};
    for (const Atom<S>& a : atoms_) {
      if (a.point.dim() != n) throw invalid_input("atomic measure: mixed dimensions");
      if (!(a.mass > S{})) throw invalid_input("atomic measure: nonpositive mass");
      total_ += a.mass;
    }
    std::vector<std::size_t> order(atoms_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return atoms_[a].point.coords < atoms_[b].point.coords;
    });
    for (std::size_t i = 1; i < order.size(); ++i)
      if (atoms_[order[i - 1]].point == atoms_[order[i]].point)
        throw invalid_input("atomic measure: duplicate atom location");
  }

  const std::vector<Atom<S>>& atoms() const { return atoms_; }
  const Atom<S>& atom(std::size_t i) const { return atoms_[i]; }
  std::size_t size() const { return atoms_.size(); }
  std::size_t dim() const { return atoms_[0].point.dim(); }
  const S& total_mass() const { return total_; }
  const std::string& name() const { return name_; }

 private:
  std::vector<Atom<S>> atoms_;
  std::string name_;
  S total_{};
};

using AtomicMeasureQ = AtomicMeasure<Rat>;
using AtomicMeasureD = AtomicMeasure<double>;

template <class S>
struct SideMasses {
  S minus{}, on{}, plus{};
};

template <class S>
SideMasses<S> side_masses(const AtomicMeasure<S>& mu, const Hyperplane<S>& h, const S& tol) {
  SideMasses<S> out;
  for (const Atom<S>& a : mu.atoms()) {
    switch (side_of(a.point, h, tol)) {
      case Side::Minus: out.minus += a.mass; break;
      case Side::On: out.on += a.mass; break;
      case Side::Plus: out.plus += a.mass; break;
    }
  }
  return out;
}

template <class S>
bool bisects(const AtomicMeasure<S>& mu, const Hyperplane<S>& h, const S& tol) {
  const SideMasses<S> m = side_masses(mu, h, tol);
  const S half = mu.total_mass() / 2;
  return m.plus <= half && m.minus <= half;
}

template <class S>
bool touches(const AtomicMeasure<S>& mu, const Hyperplane<S>& h, const S& tol) {
  const SideMasses<S> m = side_masses(mu, h, tol);
  return m.on > S{};
}

template <class S>
struct MeasureCut {
  std::string name;
  S mass_minus{}, mass_on{}, mass_plus{};
  S total_mass{};
  std::optional<Point<S>> touch_witness;  // lowest-index atom on the plane
  double support_distance = 0;            // distance from the plane to the nearest atom

  bool bisected() const {
    const S half = total_mass / 2;
    return mass_plus <= half && mass_minus <= half;
  }
  bool touched() const { return mass_on > S{}; }
};

template <class S>
struct CutReport {
  Hyperplane<S> hyperplane;
  std::vector<MeasureCut<S>> measures;
  bool all_bisected = false;
  bool all_touched = false;
};

template <class S>
CutReport<S> evaluate_cut(const std::vector<AtomicMeasure<S>>& measures, const Hyperplane<S>& h,
                          const S& tol) {
  if (measures.empty()) throw invalid_input("evaluate_cut: empty measure list");
  CutReport<S> report;
  report.hyperplane = h;
  report.all_bisected = true;
  report.all_touched = true;
  for (const AtomicMeasure<S>& mu : measures) {
    MeasureCut<S> cut;
    cut.name = mu.name();
    cut.total_mass = mu.total_mass();
    double nearest = std::numeric_limits<double>::infinity();
    for (const Atom<S>& a : mu.atoms()) {
      switch (side_of(a.point, h, tol)) {
        case Side::Minus: cut.mass_minus += a.mass; break;
        case Side::On:
          cut.mass_on += a.mass;
          if (!cut.touch_witness) cut.touch_witness = a.point;
          break;
        case Side::Plus: cut.mass_plus += a.mass; break;
      }
      nearest = std::min(nearest, distance_point_hyperplane(a.point, h));
    }
    cut.support_distance = cut.touch_witness ? 0.0 : nearest;
    report.all_bisected = report.all_bisected && cut.bisected();
    report.all_touched = report.all_touched && cut.touched();
    report.measures.push_back(std::move(cut));
  }
  return report;
}

}  // namespace mayocut
