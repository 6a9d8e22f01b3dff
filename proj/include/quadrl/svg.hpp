#pragma once

#include <array>
#include <string>
#include <vector>

namespace quadrl {

/// Minimal SVG document builder for headless trajectory plots. World
/// coordinates in meters map onto a pixel viewport with the y axis flipped
/// so +y points up in the image.
class SvgPlot {
 public:
  /// World window [x0,x1] x [y0,y1] rendered at pixels_per_meter.
  SvgPlot(double x0, double y0, double x1, double y1, double pixels_per_meter = 200.0);

  void rect(double x0, double y0, double x1, double y1, const std::string& stroke,
            const std::string& fill = "none");
  void circle(double cx, double cy, double r, const std::string& stroke,
              const std::string& fill = "none");
  void polyline(const std::vector<std::array<double, 2>>& pts, const std::string& stroke,
                double stroke_width_px = 1.5);
  /// X-shaped marker; carries class="intervention" so reports are greppable.
  void intervention_marker(double x, double y, double half_size_m = 0.05);
  void text(double x, double y, const std::string& s, int font_px = 12);

  std::string finish() const;
  void save(const std::string& path) const;

 private:
  double px(double x) const;
  double py(double y) const;
  double scale_;
  double x0_, y0_, x1_, y1_;
  int width_, height_;
  std::string body_;
};

}  // namespace quadrl
