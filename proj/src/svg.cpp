#include "hamlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "hamlab/phase_state.hpp"

namespace hamlab {

namespace {

constexpr double kMargin = 60.0;
constexpr int kTicks = 5;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  std::string r = s.str();
  return r == "-0.00" || r == "-0.0" ? r.substr(1) : r;
}

std::string tick_label(double v) {
  std::ostringstream s;
  s << std::setprecision(3) << v;
  return s.str();
}

struct Range {
  double lo, hi;
};

Range padded(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  double a = *lo, b = *hi;
  if (a == b) {
    a -= 1.0;
    b += 1.0;
  }
  const double pad = 0.05 * (b - a);
  return {a - pad, b + pad};
}

}  // namespace

void write_svg(std::ostream& out, const std::vector<double>& x, const std::vector<double>& y,
               const PlotSpec& spec) {
  if (x.size() != y.size() || x.empty()) throw UsageError("write_svg: need equal nonempty series");
  const Range rx = padded(x), ry = padded(y);
  const double w = spec.width, h = spec.height;
  const double pw = w - 2 * kMargin, ph = h - 2 * kMargin;
  auto px = [&](double v) { return kMargin + (v - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto py = [&](double v) { return h - kMargin - (v - ry.lo) / (ry.hi - ry.lo) * ph; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
      << spec.height << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n";
  out << "<title>" << escape(spec.title) << "</title>\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" fill=\"white\"/>\n";
  out << "<rect x=\"" << fmt(kMargin, 1) << "\" y=\"" << fmt(kMargin, 1) << "\" width=\"" << fmt(pw, 1)
      << "\" height=\"" << fmt(ph, 1) << "\" fill=\"none\" stroke=\"black\"/>\n";

  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k <= kTicks; ++k) {
    const double vx = rx.lo + (rx.hi - rx.lo) * k / kTicks;
    const double vy = ry.lo + (ry.hi - ry.lo) * k / kTicks;
    out << "<line x1=\"" << fmt(px(vx), 2) << "\" y1=\"" << fmt(h - kMargin, 2) << "\" x2=\""
        << fmt(px(vx), 2) << "\" y2=\"" << fmt(h - kMargin + 5, 2) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(px(vx), 2) << "\" y=\"" << fmt(h - kMargin + 18, 2)
        << "\" text-anchor=\"middle\">" << tick_label(vx) << "</text>\n";
    out << "<line x1=\"" << fmt(kMargin - 5, 2) << "\" y1=\"" << fmt(py(vy), 2) << "\" x2=\""
        << fmt(kMargin, 2) << "\" y2=\"" << fmt(py(vy), 2) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(kMargin - 8, 2) << "\" y=\"" << fmt(py(vy) + 4, 2)
        << "\" text-anchor=\"end\">" << tick_label(vy) << "</text>\n";
  }
  out << "<text x=\"" << fmt(w / 2, 1) << "\" y=\"" << fmt(h - 15, 1) << "\" text-anchor=\"middle\">"
      << escape(spec.x_label) << "</text>\n";
  out << "<text x=\"15\" y=\"" << fmt(h / 2, 1) << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
      << fmt(h / 2, 1) << ")\">" << escape(spec.y_label) << "</text>\n";
  out << "<text x=\"" << fmt(w / 2, 1) << "\" y=\"30\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(spec.title) << "</text>\n";
  out << "</g>\n";

  out << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1\" points=\"";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out << ' ';
    out << fmt(px(x[i]), 2) << ',' << fmt(py(y[i]), 2);
  }
  out << "\"/>\n</svg>\n";
}

}  // namespace hamlab
