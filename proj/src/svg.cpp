#include "quadrl/svg.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "quadrl/numfmt.hpp"

namespace quadrl {

namespace {
std::string fmt_px(double v) {
  // Two decimals is plenty for pixel space and keeps files compact.
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}
}  // namespace

SvgPlot::SvgPlot(double x0, double y0, double x1, double y1, double pixels_per_meter)
    : scale_(pixels_per_meter), x0_(x0), y0_(y0), x1_(x1), y1_(y1) {
  if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("svg: empty world window");
  width_ = static_cast<int>(std::ceil((x1 - x0) * scale_));
  height_ = static_cast<int>(std::ceil((y1 - y0) * scale_));
}

double SvgPlot::px(double x) const { return (x - x0_) * scale_; }
double SvgPlot::py(double y) const { return (y1_ - y) * scale_; }

void SvgPlot::rect(double x0, double y0, double x1, double y1, const std::string& stroke,
                   const std::string& fill) {
  std::ostringstream o;
  o << "  <rect x=\"" << fmt_px(px(x0)) << "\" y=\"" << fmt_px(py(y1)) << "\" width=\""
    << fmt_px((x1 - x0) * scale_) << "\" height=\"" << fmt_px((y1 - y0) * scale_)
    << "\" stroke=\"" << stroke << "\" fill=\"" << fill << "\"/>\n";
  body_ += o.str();
}

void SvgPlot::circle(double cx, double cy, double r, const std::string& stroke,
                     const std::string& fill) {
  std::ostringstream o;
  o << "  <circle cx=\"" << fmt_px(px(cx)) << "\" cy=\"" << fmt_px(py(cy)) << "\" r=\""
    << fmt_px(r * scale_) << "\" stroke=\"" << stroke << "\" fill=\"" << fill << "\"/>\n";
  body_ += o.str();
}

void SvgPlot::polyline(const std::vector<std::array<double, 2>>& pts, const std::string& stroke,
                       double stroke_width_px) {
  if (pts.empty()) return;
  std::ostringstream o;
  o << "  <polyline points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) o << ' ';
    o << fmt_px(px(pts[i][0])) << ',' << fmt_px(py(pts[i][1]));
  }
  o << "\" stroke=\"" << stroke << "\" stroke-width=\"" << fmt_px(stroke_width_px)
    << "\" fill=\"none\"/>\n";
  body_ += o.str();
}

void SvgPlot::intervention_marker(double x, double y, double half_size_m) {
  const double h = half_size_m;
  std::ostringstream o;
  o << "  <g class=\"intervention\" stroke=\"red\" stroke-width=\"2\">"
    << "<line x1=\"" << fmt_px(px(x - h)) << "\" y1=\"" << fmt_px(py(y - h)) << "\" x2=\""
    << fmt_px(px(x + h)) << "\" y2=\"" << fmt_px(py(y + h)) << "\"/>"
    << "<line x1=\"" << fmt_px(px(x - h)) << "\" y1=\"" << fmt_px(py(y + h)) << "\" x2=\""
    << fmt_px(px(x + h)) << "\" y2=\"" << fmt_px(py(y - h)) << "\"/></g>\n";
  body_ += o.str();
}

void SvgPlot::text(double x, double y, const std::string& s, int font_px) {
  std::ostringstream o;
  o << "  <text x=\"" << fmt_px(px(x)) << "\" y=\"" << fmt_px(py(y)) << "\" font-size=\""
    << font_px << "\" font-family=\"sans-serif\">" << s << "</text>\n";
  body_ += o.str();
}

std::string SvgPlot::finish() const {
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\"" << height_
    << "\" viewBox=\"0 0 " << width_ << ' ' << height_ << "\">\n"
    << body_ << "</svg>\n";
  return o.str();
}

void SvgPlot::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("svg: cannot open " + path + " for writing");
  out << finish();
  if (!out) throw std::runtime_error("svg: write failed for " + path);
}

}  // namespace quadrl
