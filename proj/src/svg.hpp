#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace ranksentinel::svg {

class Canvas {
public:
  Canvas(double width, double height);

  void comment(const std::string& text);
  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double width = 1.0, double opacity = 1.0);
  void circle(double cx, double cy, double r, const std::string& fill, double opacity = 1.0);
  void square(double cx, double cy, double half, const std::string& stroke);
  void rect(double x, double y, double w, double h, const std::string& fill);
  void polyline(const std::vector<std::pair<double, double>>& points, const std::string& stroke,
                double width = 1.5);
  void text(double x, double y, const std::string& content, double size = 12,
            const std::string& anchor = "middle", double rotate = 0);

  std::string str() const;

private:
  double width_, height_;
  std::ostringstream body_;
};

/// Axis box mapping data coordinates to a rectangle on the canvas.
struct Panel {
  double left, top, width, height;
  double xmin, xmax, ymin, ymax;

  double px(double x) const;
  double py(double y) const;

  /// Frame, tick labels, title and axis labels.
  void draw_axes(Canvas& c, const std::string& title, const std::string& xlabel,
                 const std::string& ylabel, int ticks = 5) const;
};

std::string format_number(double v);

}  // namespace ranksentinel::svg
