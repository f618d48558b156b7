#include "svg.hpp"

#include <cmath>
#include <cstdio>

namespace ranksentinel::svg {

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Canvas::Canvas(double width, double height) : width_(width), height_(height) {}

void Canvas::comment(const std::string& text) {
  body_ << "<!-- " << text << " -->\n";
}

void Canvas::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                  double width, double opacity) {
  body_ << "<line x1=\"" << fixed(x1) << "\" y1=\"" << fixed(y1) << "\" x2=\"" << fixed(x2)
        << "\" y2=\"" << fixed(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\""
        << fixed(width) << "\"";
  if (opacity < 1.0) body_ << " stroke-opacity=\"" << fixed(opacity) << "\"";
  body_ << "/>\n";
}

void Canvas::circle(double cx, double cy, double r, const std::string& fill, double opacity) {
  body_ << "<circle cx=\"" << fixed(cx) << "\" cy=\"" << fixed(cy) << "\" r=\"" << fixed(r)
        << "\" fill=\"" << fill << "\"";
  if (opacity < 1.0) body_ << " fill-opacity=\"" << fixed(opacity) << "\"";
  body_ << "/>\n";
}

void Canvas::square(double cx, double cy, double half, const std::string& stroke) {
  body_ << "<rect x=\"" << fixed(cx - half) << "\" y=\"" << fixed(cy - half) << "\" width=\""
        << fixed(2 * half) << "\" height=\"" << fixed(2 * half)
        << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.50\"/>\n";
}

void Canvas::rect(double x, double y, double w, double h, const std::string& fill) {
  body_ << "<rect x=\"" << fixed(x) << "\" y=\"" << fixed(y) << "\" width=\"" << fixed(w)
        << "\" height=\"" << fixed(h) << "\" fill=\"" << fill << "\"/>\n";
}

void Canvas::polyline(const std::vector<std::pair<double, double>>& points,
                      const std::string& stroke, double width) {
  body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << fixed(width)
        << "\" points=\"";
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (k) body_ << ' ';
    body_ << fixed(points[k].first) << ',' << fixed(points[k].second);
  }
  body_ << "\"/>\n";
}

void Canvas::text(double x, double y, const std::string& content, double size,
                  const std::string& anchor, double rotate) {
  body_ << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(y) << "\" font-size=\"" << fixed(size)
        << "\" text-anchor=\"" << anchor << "\"";
  if (rotate != 0) {
    body_ << " transform=\"rotate(" << fixed(rotate) << ' ' << fixed(x) << ' ' << fixed(y)
          << ")\"";
  }
  body_ << ">" << escape(content) << "</text>\n";
}

std::string Canvas::str() const {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width_) << "\" height=\""
      << fixed(height_) << "\" viewBox=\"0 0 " << fixed(width_) << ' ' << fixed(height_)
      << "\" font-family=\"sans-serif\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body_.str() << "</svg>\n";
  return out.str();
}

double Panel::px(double x) const {
  if (xmax == xmin) return left + width / 2;
  return left + (x - xmin) / (xmax - xmin) * width;
}

double Panel::py(double y) const {
  if (ymax == ymin) return top + height / 2;
  return top + height - (y - ymin) / (ymax - ymin) * height;
}

void Panel::draw_axes(Canvas& c, const std::string& title, const std::string& xlabel,
                      const std::string& ylabel, int ticks) const {
  c.line(left, top + height, left + width, top + height, "black");
  c.line(left, top, left, top + height, "black");
  for (int k = 0; k <= ticks; ++k) {
    const double fx = xmin + (xmax - xmin) * k / ticks;
    const double fy = ymin + (ymax - ymin) * k / ticks;
    c.line(px(fx), top + height, px(fx), top + height + 4, "black");
    c.text(px(fx), top + height + 16, format_number(fx), 10);
    c.line(left - 4, py(fy), left, py(fy), "black");
    c.text(left - 6, py(fy) + 3, format_number(fy), 10, "end");
  }
  c.text(left + width / 2, top - 10, title, 13);
  c.text(left + width / 2, top + height + 34, xlabel, 11);
  c.text(left - 48, top + height / 2, ylabel, 11, "middle", -90);
}

}  // namespace ranksentinel::svg
