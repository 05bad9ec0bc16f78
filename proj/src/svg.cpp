#include "mayocut/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mayocut {

namespace {

constexpr const char* kPalette[] = {"#c0392b", "#2471a3", "#1e8449", "#884ea0",
                                    "#b7950b", "#17a589"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v + 0.0);
  return buf;
}

struct Box2 {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  void grow(double x, double y, double r = 0) {
    x0 = std::min(x0, x - r);
    y0 = std::min(y0, y - r);
    x1 = std::max(x1, x + r);
    y1 = std::max(y1, y + r);
  }
};

class Canvas {
 public:
  explicit Canvas(Box2 box) {
    const double w = std::max(box.x1 - box.x0, 1e-6);
    const double h = std::max(box.y1 - box.y0, 1e-6);
    const double pad = 0.1 * std::max(w, h);
    box_ = Box2{box.x0 - pad, box.y0 - pad, box.x1 + pad, box.y1 + pad};
    body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(box_.x0) << " "
          << fmt(box_.y0) << " " << fmt(box_.x1 - box_.x0) << " " << fmt(box_.y1 - box_.y0)
          << "\">\n";
  }

  // SVG y grows downward; mirror within the viewBox
  double Y(double y) const { return box_.y0 + box_.y1 - y; }

  void circle(double cx, double cy, double r, const std::string& fill,
              const std::string& stroke, double stroke_width) {
    body_ << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(Y(cy)) << "\" r=\"" << fmt(r)
          << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\""
          << fmt(stroke_width) << "\"/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& stroke,
            double stroke_width) {
    body_ << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(Y(y + h)) << "\" width=\"" << fmt(w)
          << "\" height=\"" << fmt(h) << "\" fill=\"none\" stroke=\"" << stroke
          << "\" stroke-width=\"" << fmt(stroke_width) << "\"/>\n";
  }

  // full-width segment of { <u,x> = c } clipped to the viewBox
  void plane_line(const HyperplaneD& h) {
    const double ux = h.normal[0], uy = h.normal[1], c = h.offset;
    std::vector<std::pair<double, double>> pts;
    const auto add = [&](double x, double y) {
      for (const auto& [px, py] : pts)
        if (std::abs(px - x) < 1e-12 && std::abs(py - y) < 1e-12) return;
      pts.emplace_back(x, y);
    };
    if (uy != 0) {
      for (double x : {box_.x0, box_.x1}) {
        const double y = (c - ux * x) / uy;
        if (y >= box_.y0 - 1e-12 && y <= box_.y1 + 1e-12) add(x, y);
      }
    }
    if (ux != 0) {
      for (double y : {box_.y0, box_.y1}) {
        const double x = (c - uy * y) / ux;
        if (x >= box_.x0 - 1e-12 && x <= box_.x1 + 1e-12) add(x, y);
      }
    }
    if (pts.size() < 2) return;
    body_ << "<line x1=\"" << fmt(pts[0].first) << "\" y1=\"" << fmt(Y(pts[0].second))
          << "\" x2=\"" << fmt(pts[1].first) << "\" y2=\"" << fmt(Y(pts[1].second))
          << "\" stroke=\"#111111\" stroke-width=\"" << fmt(line_width()) << "\"/>\n";
  }

  double extent() const { return std::max(box_.x1 - box_.x0, box_.y1 - box_.y0); }
  double line_width() const { return 0.006 * extent(); }

  std::string finish() {
    body_ << "</svg>\n";
    return body_.str();
  }

 private:
  Box2 box_;
  std::ostringstream body_;
};

}  // namespace

std::string render_svg(const Instance& inst, const std::optional<HyperplaneD>& plane) {
  if (inst.dimension() != 2) throw invalid_input("svg rendering requires dimension 2");

  Box2 box;
  bool first = true;
  double max_mass = 0;
  for (const auto& mu : inst.measures()) {
    for (const auto& a : mu.atoms()) {
      const double x = rat_to_double(a.point[0]);
      const double y = rat_to_double(a.point[1]);
      if (first) {
        box = Box2{x, y, x, y};
        first = false;
      } else {
        box.grow(x, y);
      }
      max_mass = std::max(max_mass, rat_to_double(a.mass));
    }
  }

  Canvas canvas(box);
  const double r_max = 0.02 * canvas.extent();
  const double r_min = 0.006 * canvas.extent();
  for (std::size_t i = 0; i < inst.measures().size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    for (const auto& a : inst.measures()[i].atoms()) {
      const double m = rat_to_double(a.mass);
      const double r = r_min + (r_max - r_min) * std::sqrt(m / max_mass);
      canvas.circle(rat_to_double(a.point[0]), rat_to_double(a.point[1]), r, color, "none", 0);
    }
  }
  if (plane) canvas.plane_line(*plane);
  return canvas.finish();
}

std::string render_svg(const std::vector<ShapeSpec>& shapes,
                       const std::optional<HyperplaneD>& plane) {
  if (shapes.empty()) throw invalid_input("svg rendering: no shapes");
  for (const auto& s : shapes)
    if (s.dim() != 2) throw invalid_input("svg rendering requires dimension 2");

  Box2 box;
  bool first = true;
  for (const auto& s : shapes) {
    const auto [lo, hi] = s.bounding_box();
    if (first) {
      box = Box2{lo[0], lo[1], hi[0], hi[1]};
      first = false;
    } else {
      box.grow(lo[0], lo[1]);
      box.grow(hi[0], hi[1]);
    }
  }

  Canvas canvas(box);
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    for (const auto& part : shapes[i].parts) {
      if (const auto* b = std::get_if<BallShape>(&part))
        canvas.circle(b->center[0], b->center[1], b->radius, "none", color,
                      canvas.line_width());
      else {
        const auto& bx = std::get<BoxShape>(part);
        canvas.rect(bx.lo[0], bx.lo[1], bx.hi[0] - bx.lo[0], bx.hi[1] - bx.lo[1], color,
                    canvas.line_width());
      }
    }
  }
  if (plane) canvas.plane_line(*plane);
  return canvas.finish();
}

}  // namespace mayocut
