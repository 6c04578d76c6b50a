#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "screenlab/errors.hpp"

namespace screenlab::cli {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", std::abs(v) < 0.005 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Liang-Barsky clip of the segment a-b to the box.
bool clip(Point& a, Point& b, Point lo, Point hi) {
  double t0 = 0.0, t1 = 1.0;
  const Point d = b - a;
  const double p[4] = {-d.x, d.x, -d.y, d.y};
  const double q[4] = {a.x - lo.x, hi.x - a.x, a.y - lo.y, hi.y - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) t0 = std::max(t0, r);
    else t1 = std::min(t1, r);
    if (t0 > t1) return false;
  }
  const Point a0 = a;
  a = a0 + t0 * d;
  b = a0 + t1 * d;
  return true;
}

double nice_step(double span) {
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) return m * mag;
  return 10.0 * mag;
}

}  // namespace

SvgPlot::SvgPlot(Point lo, Point hi) : lo_(lo), hi_(hi) {
  // Square window so that angles are not distorted.
  const double span = std::max(hi.x - lo.x, hi.y - lo.y);
  const Point c = 0.5 * (lo + hi);
  lo_ = c - Point{span / 2, span / 2};
  hi_ = c + Point{span / 2, span / 2};
}

double SvgPlot::scale() const { return (kSize - 2 * kMargin) / (hi_.x - lo_.x); }

Point SvgPlot::px(Point p) const {
  return {kMargin + (p.x - lo_.x) * scale(), kSize - kMargin - (p.y - lo_.y) * scale()};
}

void SvgPlot::polygon(const std::vector<Point>& pts, const std::string& fill, const std::string& stroke,
                      double opacity) {
  if (pts.empty()) return;
  std::ostringstream os;
  os << "<polygon points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point q = px(pts[i]);
    os << (i ? " " : "") << fmt(q.x) << "," << fmt(q.y);
  }
  os << "\" fill=\"" << fill << "\" fill-opacity=\"" << fmt(opacity) << "\" stroke=\"" << stroke << "\"/>";
  body_.push_back(os.str());
}

void SvgPlot::segment(Point a, Point b, const std::string& stroke, double width, bool dashed) {
  if (!clip(a, b, lo_, hi_)) return;
  const Point pa = px(a), pb = px(b);
  std::ostringstream os;
  os << "<line x1=\"" << fmt(pa.x) << "\" y1=\"" << fmt(pa.y) << "\" x2=\"" << fmt(pb.x) << "\" y2=\""
     << fmt(pb.y) << "\" stroke=\"" << stroke << "\" stroke-width=\"" << fmt(width) << "\""
     << (dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>";
  body_.push_back(os.str());
}

void SvgPlot::boundary(const HalfPlane& h, const std::string& stroke, bool dashed) {
  const double span = 4.0 * (hi_.x - lo_.x);
  const Point c = project_to_boundary(h, 0.5 * (lo_ + hi_));
  segment(c - span * h.direction(), c + span * h.direction(), stroke, 1.5, dashed);
}

void SvgPlot::marker(Point p, const std::string& label, const std::string& color) {
  if (p.x < lo_.x || p.x > hi_.x || p.y < lo_.y || p.y > hi_.y) return;
  const Point q = px(p);
  std::ostringstream os;
  os << "<circle cx=\"" << fmt(q.x) << "\" cy=\"" << fmt(q.y) << "\" r=\"3\" fill=\"" << color << "\"/>"
     << "<text x=\"" << fmt(q.x + 5) << "\" y=\"" << fmt(q.y - 5) << "\" font-size=\"12\">" << escape(label)
     << "</text>";
  body_.push_back(os.str());
}

void SvgPlot::circle(Point c, double r, const std::string& stroke, bool dashed) {
  const Point q = px(c);
  std::ostringstream os;
  os << "<circle cx=\"" << fmt(q.x) << "\" cy=\"" << fmt(q.y) << "\" r=\"" << fmt(r * scale())
     << "\" fill=\"none\" stroke=\"" << stroke << "\"" << (dashed ? " stroke-dasharray=\"4,3\"" : "") << "/>";
  body_.push_back(os.str());
}

void SvgPlot::raster(const std::function<bool(Point)>& inside, int cells, const std::string& fill, double opacity) {
  const double cell = (hi_.x - lo_.x) / cells;
  const double w = cell * scale();
  std::ostringstream os;
  os << "<g fill=\"" << fill << "\" fill-opacity=\"" << fmt(opacity) << "\" shape-rendering=\"crispEdges\">";
  for (int j = 0; j < cells; ++j) {
    int run = -1;
    for (int i = 0; i <= cells; ++i) {
      const bool in = i < cells && inside(lo_ + Point{(i + 0.5) * cell, (j + 0.5) * cell});
      if (in && run < 0) run = i;
      if (!in && run >= 0) {
        const Point tl = px(lo_ + Point{run * cell, (j + 1) * cell});
        os << "<rect x=\"" << fmt(tl.x) << "\" y=\"" << fmt(tl.y) << "\" width=\"" << fmt((i - run) * w)
           << "\" height=\"" << fmt(w) << "\"/>";
        run = -1;
      }
    }
  }
  os << "</g>";
  body_.push_back(os.str());
}

void SvgPlot::heat(Point lo, double cell, std::size_t nx, std::size_t ny, const std::vector<double>& value,
                   const std::string& color) {
  const double w = cell * scale();
  std::ostringstream os;
  os << "<g fill=\"" << color << "\" shape-rendering=\"crispEdges\">";
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const double v = value[j * nx + i];
      if (v <= 0.0) continue;
      const Point tl = px(lo + Point{i * cell, (j + 1) * cell});
      os << "<rect x=\"" << fmt(tl.x) << "\" y=\"" << fmt(tl.y) << "\" width=\"" << fmt(w) << "\" height=\""
         << fmt(w) << "\" fill-opacity=\"" << fmt(0.35 * v) << "\"/>";
    }
  os << "</g>";
  body_.push_back(os.str());
}

void SvgPlot::legend(const std::string& label, const std::string& color) {
  std::ostringstream os;
  const double y = 20.0 + 16.0 * legend_.size();
  os << "<rect x=\"" << fmt(kSize - 210) << "\" y=\"" << fmt(y - 9) << "\" width=\"10\" height=\"10\" fill=\""
     << color << "\"/><text x=\"" << fmt(kSize - 195) << "\" y=\"" << fmt(y) << "\" font-size=\"11\">"
     << escape(label) << "</text>";
  legend_.push_back(os.str());
}

std::string SvgPlot::str() const {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 600 600\" width=\"600\" height=\"600\">\n";
  os << "<rect width=\"600\" height=\"600\" fill=\"#fff\"/>\n";
  // Axes frame with ticks in attribute units.
  const Point a = px(lo_), b = px(hi_);
  os << "<rect x=\"" << fmt(a.x) << "\" y=\"" << fmt(b.y) << "\" width=\"" << fmt(b.x - a.x) << "\" height=\""
     << fmt(a.y - b.y) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  const double step = nice_step(hi_.x - lo_.x);
  for (double t = std::ceil(lo_.x / step) * step; t <= hi_.x + 1e-12; t += step) {
    const Point p = px({t, lo_.y});
    os << "<line x1=\"" << fmt(p.x) << "\" y1=\"" << fmt(p.y) << "\" x2=\"" << fmt(p.x) << "\" y2=\""
       << fmt(p.y + 5) << "\" stroke=\"#444\"/><text x=\"" << fmt(p.x) << "\" y=\"" << fmt(p.y + 18)
       << "\" font-size=\"10\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  for (double t = std::ceil(lo_.y / step) * step; t <= hi_.y + 1e-12; t += step) {
    const Point p = px({lo_.x, t});
    os << "<line x1=\"" << fmt(p.x - 5) << "\" y1=\"" << fmt(p.y) << "\" x2=\"" << fmt(p.x) << "\" y2=\""
       << fmt(p.y) << "\" stroke=\"#444\"/><text x=\"" << fmt(p.x - 8) << "\" y=\"" << fmt(p.y + 3)
       << "\" font-size=\"10\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
  }
  os << "<defs><clipPath id=\"plot\"><rect x=\"" << fmt(a.x) << "\" y=\"" << fmt(b.y) << "\" width=\""
     << fmt(b.x - a.x) << "\" height=\"" << fmt(a.y - b.y) << "\"/></clipPath></defs>\n";
  os << "<g clip-path=\"url(#plot)\">\n";
  for (const auto& e : body_) os << e << "\n";
  os << "</g>\n";
  for (const auto& e : legend_) os << e << "\n";
  os << "</svg>\n";
  return os.str();
}

void SvgPlot::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << str();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace screenlab::cli
