#pragma once

#include <functional>
#include <string>
#include <vector>

#include "screenlab/geometry.hpp"

namespace screenlab::cli {

// Fixed 600x600 canvas mapping the window [lo, hi] with a 50px margin. All
// numbers are printed with fixed precision so output is byte-stable.
class SvgPlot {
 public:
  SvgPlot(Point lo, Point hi);

  void polygon(const std::vector<Point>& pts, const std::string& fill, const std::string& stroke,
               double opacity = 0.35);
  void segment(Point a, Point b, const std::string& stroke, double width = 1.5, bool dashed = false);
  // Boundary of h inside the window.
  void boundary(const HalfPlane& h, const std::string& stroke, bool dashed = false);
  void marker(Point p, const std::string& label, const std::string& color = "#000");
  void circle(Point c, double r, const std::string& stroke, bool dashed = true);
  // Cells where inside(centre) holds, merged into horizontal runs.
  void raster(const std::function<bool(Point)>& inside, int cells, const std::string& fill, double opacity = 0.45);
  // Gray-level heat layer; value in [0,1] per cell, row-major from lo.
  void heat(Point lo, double cell, std::size_t nx, std::size_t ny, const std::vector<double>& value,
            const std::string& color);
  void legend(const std::string& label, const std::string& color);

  std::string str() const;
  void write(const std::string& path) const;  // throws IoError

  static constexpr double kSize = 600.0;
  static constexpr double kMargin = 50.0;

 private:
  Point px(Point p) const;
  double scale() const;

  Point lo_;
  Point hi_;
  std::vector<std::string> body_;
  std::vector<std::string> legend_;
};

}  // namespace screenlab::cli
