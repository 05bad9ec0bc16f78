#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <type_traits>
#include <variant>
#include <vector>

#include "mayocut/errors.hpp"
#include "mayocut/rational.hpp"

// Geometric primitives in two numeric modes sharing one set of templates:
// exact rationals (S = Rat) for the discrete solver, doubles for the
// measure pipeline. Exact-mode predicates take tol = 0 only.

namespace mayocut {

enum class Side { Minus, On, Plus };

template <class S>
struct Point {
  std::vector<S> coords;

  Point() = default;
  explicit Point(std::vector<S> c) : coords(std::move(c)) {}
  Point(std::initializer_list<S> c) : coords(c) {}

  std::size_t dim() const { return coords.size(); }
  const S& operator[](std::size_t i) const { return coords[i]; }
  S& operator[](std::size_t i) { return coords[i]; }

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point& a, const Point& b) {
    return a.coords <=> b.coords;
  }
};

using PointQ = Point<Rat>;
using PointD = Point<double>;

// The plane { x : <normal, x> = offset }. (u, c) and (-u, -c) describe the
// same plane and canonicalize to the same representative.
template <class S>
struct Hyperplane {
  std::vector<S> normal;
  S offset{};

  std::size_t dim() const { return normal.size(); }

  Hyperplane flipped() const {
    Hyperplane h;
    h.normal.reserve(normal.size());
    for (const S& v : normal) h.normal.push_back(-v);
    h.offset = -offset;
    return h;
  }

  friend bool operator==(const Hyperplane&, const Hyperplane&) = default;
};

using HyperplaneQ = Hyperplane<Rat>;
using HyperplaneD = Hyperplane<double>;

// Result of hyperplane construction through too-degenerate a point tuple:
// the affine hull has this dimension (< n-1), so a family of containing
// hyperplanes remains. A value, not an error; callers complete the family.
struct Deficient {
  std::size_t affine_dim = 0;
  friend bool operator==(const Deficient&, const Deficient&) = default;
};

using HyperplaneOrDeficient = std::variant<HyperplaneQ, Deficient>;

// ---- small vector helpers -------------------------------------------------

template <class S>
S dot(const std::vector<S>& a, const std::vector<S>& b) {
  if (a.size() != b.size()) throw invalid_input("dot: dimension mismatch");
  S acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// <u, p> - c, the signed quantity whose sign classifies p against the plane.
template <class S>
S signed_eval(const Hyperplane<S>& h, const Point<S>& p) {
  if (h.dim() != p.dim()) throw invalid_input("hyperplane/point dimension mismatch");
  return dot(h.normal, p.coords) - h.offset;
}

// ---- canonical forms -------------------------------------------------------

// Exact mode: integer normal with no common factor, first nonzero component
// positive, offset scaled along. Idempotent; identifies (u,c) with (-u,-c).
HyperplaneQ canonicalize(const HyperplaneQ& h);

// Approximate mode: |normal| = 1 and offset > 0, or offset = 0 and the first
// nonzero normal component positive. Negative zeros are normalized away so
// canonical forms compare bitwise.
HyperplaneD canonicalize(const HyperplaneD& h);

// ---- predicates -------------------------------------------------------------

template <class S>
Side side_of(const Point<S>& p, const Hyperplane<S>& h, const S& tol) {
  if constexpr (std::is_same_v<S, Rat>) {
    if (tol != 0) throw invalid_input("side_of: exact mode requires tol = 0");
    const int s = signed_eval(h, p).sign();
    return s > 0 ? Side::Plus : (s < 0 ? Side::Minus : Side::On);
  } else {
    if (!(tol >= 0)) throw invalid_input("side_of: tol must be nonnegative");
    const double s = signed_eval(h, p);
    const double threshold = tol * norm(h.normal);
    if (s > threshold) return Side::Plus;
    if (s < -threshold) return Side::Minus;
    return Side::On;
  }
}

// |<u,p> - c| / |u|. Exact zero is decided exactly in rational mode.
template <class S>
double distance_point_hyperplane(const Point<S>& p, const Hyperplane<S>& h) {
  const S s = signed_eval(h, p);
  if constexpr (std::is_same_v<S, Rat>) {
    if (s == 0) return 0.0;
    double num = std::abs(rat_to_double(s));
    double den2 = 0;
    for (const Rat& v : h.normal) {
      const double d = rat_to_double(v);
      den2 += d * d;
    }
    return num / std::sqrt(den2);
  } else {
    return std::abs(s) / norm(h.normal);
  }
}

// Unique canonical hyperplane through k <= n points when their affine hull
// has dimension n-1; Deficient(affine hull dimension) otherwise. Exact.
HyperplaneOrDeficient hyperplane_through(const std::vector<PointQ>& points);

// ---- exact linear algebra shared with the solvers -------------------------

// Rank of the row span.
std::size_t matrix_rank(std::vector<std::vector<Rat>> rows);

// Basis of { u in R^n : <u, row> = 0 for every row }.
std::vector<std::vector<Rat>> null_space(const std::vector<std::vector<Rat>>& rows, std::size_t n);

}  // namespace mayocut
