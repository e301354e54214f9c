#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace qdnls::cli {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
constexpr const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

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

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double decade) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(decade));
  return buf;
}

}  // namespace

std::string loglog_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<PlotSeries>& series) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0.0 && s.y[i] > 0.0)) continue;
      x0 = std::min(x0, std::log10(s.x[i]));
      x1 = std::max(x1, std::log10(s.x[i]));
      y0 = std::min(y0, std::log10(s.y[i]));
      y1 = std::max(y1, std::log10(s.y[i]));
    }
  }
  if (x0 > x1) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  // Pad to whole decades so the ticks land on the frame.
  x0 = std::floor(x0), x1 = std::max(std::ceil(x1), x0 + 1);
  y0 = std::floor(y0), y1 = std::max(std::ceil(y1), y0 + 1);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double lx) { return kLeft + (lx - x0) / (x1 - x0) * pw; };
  auto py = [&](double ly) { return kTop + (y1 - ly) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
    << "</text>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double d = x0; d <= x1 + 1e-9; d += 1.0) {
    o << "<line x1=\"" << fmt(px(d)) << "\" y1=\"" << kTop << "\" x2=\"" << fmt(px(d)) << "\" y2=\""
      << kTop + ph << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << fmt(px(d)) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
      << tick_label(d) << "</text>\n";
  }
  for (double d = y0; d <= y1 + 1e-9; d += 1.0) {
    o << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(py(d)) << "\" x2=\"" << kLeft + pw << "\" y2=\""
      << fmt(py(d)) << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(py(d) + 4) << "\" text-anchor=\"end\">"
      << tick_label(d) << "</text>\n";
  }
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
    << escape(x_label) << "</text>\n";
  o << "<text transform=\"translate(16," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kColours[k % std::size(kColours)];
    std::ostringstream pts;
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0.0 && s.y[i] > 0.0)) continue;
      const double lx = std::log10(s.x[i]), ly = std::log10(s.y[i]);
      lo = std::min(lo, lx);
      hi = std::max(hi, lx);
      pts << fmt(px(lx)) << "," << fmt(py(ly)) << " ";
      o << "<circle cx=\"" << fmt(px(lx)) << "\" cy=\"" << fmt(py(ly)) << "\" r=\"3\" fill=\"" << colour
        << "\"/>\n";
    }
    o << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << colour << "\"/>\n";
    std::string label = s.label;
    if (s.fit && lo < hi) {
      auto fy = [&](double lx) { return (s.fit->intercept + s.fit->exponent * lx * std::log(10.0)) / std::log(10.0); };
      o << "<line x1=\"" << fmt(px(lo)) << "\" y1=\"" << fmt(py(fy(lo))) << "\" x2=\"" << fmt(px(hi))
        << "\" y2=\"" << fmt(py(fy(hi))) << "\" stroke=\"" << colour << "\" stroke-dasharray=\"4 3\"/>\n";
      char buf[48];
      std::snprintf(buf, sizeof buf, " (slope %.3f)", s.fit->exponent);
      label += buf;
    }
    const double ly = kTop + 12 + 16 * k;
    o << "<rect x=\"" << kLeft + pw + 10 << "\" y=\"" << ly - 8 << "\" width=\"10\" height=\"10\" fill=\""
      << colour << "\"/>\n";
    o << "<text x=\"" << kLeft + pw + 24 << "\" y=\"" << ly + 1 << "\">" << escape(label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

PlotSeries sweep_series(const SweepReport& report) {
  std::map<double, double> best;
  for (const auto& p : report.points) {
    const double x = p.parameter(report.fit_variable);
    auto [it, inserted] = best.emplace(x, p.best_ratio);
    if (!inserted) it->second = std::max(it->second, p.best_ratio);
  }
  PlotSeries s{report.estimate_id, {}, {}, report.fit};
  for (const auto& [x, y] : best) {
    s.x.push_back(x);
    s.y.push_back(y);
  }
  return s;
}

}  // namespace qdnls::cli
