#include "mayocut/geometry.hpp"

#include <algorithm>
#include <utility>

namespace mayocut {

namespace {

bool all_zero(const std::vector<Rat>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

// Row echelon reduction in place; returns the pivot column of each surviving
// nonzero row (rank = result size).
std::vector<std::size_t> echelon(std::vector<std::vector<Rat>>& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t cols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    const Rat inv = Rat(1) / rows[r][c];
    for (std::size_t j = c; j < cols; ++j) rows[r][j] *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const Rat f = rows[i][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

Rat determinant(std::vector<std::vector<Rat>> m) {
  const std::size_t n = m.size();
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && m[pivot][c] == 0) ++pivot;
    if (pivot == n) return Rat(0);
    if (pivot != c) {
      std::swap(m[pivot], m[c]);
      det = -det;
    }
    det *= m[c][c];
    const Rat inv = Rat(1) / m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      const Rat f = m[i][c] * inv;
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

}  // namespace

HyperplaneQ canonicalize(const HyperplaneQ& h) {
  if (h.normal.empty() || all_zero(h.normal)) throw invalid_input("canonicalize: zero normal");

  Int den_lcm = 1;
  for (const Rat& v : h.normal) den_lcm = lcm(den_lcm, denominator(v));

  std::vector<Int> ints;
  ints.reserve(h.normal.size());
  Int g = 0;
  for (const Rat& v : h.normal) {
    Int w = numerator(v) * (den_lcm / denominator(v));
    g = gcd(g, w);
    ints.push_back(std::move(w));
  }
  // g > 0 since some component is nonzero (boost gcd is nonnegative)

  int sign = 0;
  for (const Int& w : ints) {
    if (w != 0) {
      sign = w > 0 ? 1 : -1;
      break;
    }
  }
  if (sign < 0) g = -g;

  HyperplaneQ out;
  out.normal.reserve(ints.size());
  for (Int& w : ints) out.normal.emplace_back(make_rat(std::move(w) / g, 1));
  out.offset = h.offset * Rat(den_lcm, 1) / Rat(g, 1);
  return out;
}

HyperplaneD canonicalize(const HyperplaneD& h) {
  const double n = norm(h.normal);
  if (!(n > 0) || !std::isfinite(n)) throw invalid_input("canonicalize: zero normal");

  HyperplaneD out;
  out.normal.reserve(h.normal.size());
  for (double v : h.normal) out.normal.push_back(v / n);
  out.offset = h.offset / n;

  bool flip = false;
  if (out.offset < 0) {
    flip = true;
  } else if (out.offset == 0) {
    for (double v : out.normal) {
      if (v != 0) {
        flip = v < 0;
        break;
      }
    }
  }
  if (flip) {
    for (double& v : out.normal) v = -v;
    out.offset = -out.offset;
  }
  // flush -0.0 so canonical forms compare bitwise
  for (double& v : out.normal) v += 0.0;
  out.offset += 0.0;
  return out;
}

HyperplaneOrDeficient hyperplane_through(const std::vector<PointQ>& points) {
  if (points.empty()) throw invalid_input("hyperplane_through: empty input");
  const std::size_t n = points[0].dim();
  if (n == 0) throw invalid_input("hyperplane_through: zero-dimensional points");
  const std::size_t k = points.size();
  if (k > n) throw invalid_input("hyperplane_through: more points than the dimension");
  for (const PointQ& p : points)
    if (p.dim() != n) throw invalid_input("hyperplane_through: dimension mismatch");

  std::vector<std::vector<Rat>> diffs;
  diffs.reserve(k - 1);
  for (std::size_t i = 1; i < k; ++i) {
    std::vector<Rat> d(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = points[i][j] - points[0][j];
    diffs.push_back(std::move(d));
  }

  if (k == n) {
    // Generalized cross product: cofactor expansion along the missing column.
    // Nonzero iff the n-1 difference vectors are independent.
    std::vector<Rat> normal(n);
    bool nonzero = false;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::vector<Rat>> minor(n - 1, std::vector<Rat>(n - 1));
      for (std::size_t r = 0; r + 1 < n; ++r) {
        std::size_t cc = 0;
        for (std::size_t c = 0; c < n; ++c) {
          if (c == j) continue;
          minor[r][cc++] = diffs[r][c];
        }
      }
      Rat d = determinant(std::move(minor));
      if (j % 2 == 1) d = -d;
      if (d != 0) nonzero = true;
      normal[j] = std::move(d);
    }
    if (nonzero) {
      HyperplaneQ h;
      h.offset = dot(normal, points[0].coords);
      h.normal = std::move(normal);
      return canonicalize(h);
    }
  }
  return Deficient{matrix_rank(std::move(diffs))};
}

std::size_t matrix_rank(std::vector<std::vector<Rat>> rows) {
  return echelon(rows).size();
}

std::vector<std::vector<Rat>> null_space(const std::vector<std::vector<Rat>>& rows, std::size_t n) {
  std::vector<std::vector<Rat>> reduced = rows;
  for (const auto& r : reduced)
    if (r.size() != n) throw invalid_input("null_space: ragged rows");
  const std::vector<std::size_t> pivots = echelon(reduced);

  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : pivots) is_pivot[c] = true;

  std::vector<std::vector<Rat>> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rat> v(n, Rat(0));
    v[f] = 1;
    // reduced row r: x[pivot_r] + sum_{c > pivot_r, free} coeff * x[c] = 0
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -reduced[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace mayocut
