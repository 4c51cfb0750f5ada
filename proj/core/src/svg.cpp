#include "smalife/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "text.hpp"

namespace smalife::svg {

namespace {

constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 150.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 50.0;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) { return text::precise(v, 6); }

double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  const double nice = r < 1.5 ? 1.0 : r < 3.0 ? 2.0 : r < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

void render_panel(std::ostringstream& out, const Panel& p, double y0, double width, double height) {
  Range xr, yr;
  for (const Series& s : p.series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  xr.finish();
  yr.finish();
  const double xstep = nice_step(xr.hi - xr.lo, 6), ystep = nice_step(yr.hi - yr.lo, 5);
  xr.lo = std::floor(xr.lo / xstep) * xstep;
  xr.hi = std::ceil(xr.hi / xstep) * xstep;
  yr.lo = std::floor(yr.lo / ystep) * ystep;
  yr.hi = std::ceil(yr.hi / ystep) * ystep;

  const double left = kMarginLeft, right = width - kMarginRight;
  const double top = y0 + kMarginTop, bottom = y0 + height - kMarginBottom;
  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * (right - left); };
  auto py = [&](double y) { return bottom - (y - yr.lo) / (yr.hi - yr.lo) * (bottom - top); };

  out << "<g class=\"panel\">\n";
  out << "<text x=\"" << num(width / 2) << "\" y=\"" << num(y0 + 24) << "\" text-anchor=\"middle\" font-size=\"16\">"
      << escape(p.title) << "</text>\n";
  out << "<g class=\"axes\" stroke=\"#444\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << num(left) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(right) << "\" y2=\""
      << num(bottom) << "\"/>\n";
  out << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left) << "\" y2=\""
      << num(bottom) << "\"/>\n";
  for (double x = xr.lo; x <= xr.hi + xstep * 1e-6; x += xstep)
    out << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(px(x)) << "\" y2=\""
        << num(bottom + 5) << "\"/>\n";
  for (double y = yr.lo; y <= yr.hi + ystep * 1e-6; y += ystep)
    out << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(py(y)) << "\" x2=\"" << num(left) << "\" y2=\""
        << num(py(y)) << "\"/>\n";
  out << "</g>\n<g class=\"ticks\" font-size=\"11\" fill=\"#222\">\n";
  for (double x = xr.lo; x <= xr.hi + xstep * 1e-6; x += xstep)
    out << "<text x=\"" << num(px(x)) << "\" y=\"" << num(bottom + 18) << "\" text-anchor=\"middle\">"
        << num(std::abs(x) < xstep * 1e-9 ? 0.0 : x) << "</text>\n";
  for (double y = yr.lo; y <= yr.hi + ystep * 1e-6; y += ystep)
    out << "<text x=\"" << num(left - 8) << "\" y=\"" << num(py(y) + 4) << "\" text-anchor=\"end\">"
        << num(std::abs(y) < ystep * 1e-9 ? 0.0 : y) << "</text>\n";
  out << "</g>\n";
  out << "<text x=\"" << num((left + right) / 2) << "\" y=\"" << num(bottom + 40)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(p.x_label) << "</text>\n";
  out << "<text transform=\"translate(" << num(18) << "," << num((top + bottom) / 2)
      << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">" << escape(p.y_label) << "</text>\n";

  double legend_y = top + 10;
  for (const Series& s : p.series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    out << "<g class=\"series\" data-name=\"" << escape(s.name) << "\">\n";
    if (s.line && n > 0) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < n; ++i) out << (i ? " " : "") << num(px(s.x[i])) << ',' << num(py(s.y[i]));
      out << "\"/>\n";
    }
    if (s.markers)
      for (std::size_t i = 0; i < n; ++i)
        out << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i])) << "\" r=\"2\" fill=\""
            << s.color << "\"/>\n";
    out << "</g>\n";
    if (!s.name.empty()) {
      out << "<text x=\"" << num(right + 12) << "\" y=\"" << num(legend_y) << "\" font-size=\"11\" fill=\""
          << s.color << "\">" << escape(s.name) << "</text>\n";
      legend_y += 15;
    }
  }
  out << "</g>\n";
}

}  // namespace

std::string palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return colors[i % (sizeof colors / sizeof colors[0])];
}

std::string render(const std::vector<Panel>& panels, double width, double panel_height) {
  std::ostringstream out;
  const double height = panel_height * static_cast<double>(std::max<std::size_t>(panels.size(), 1));
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i)
    render_panel(out, panels[i], panel_height * static_cast<double>(i), width, panel_height);
  out << "</svg>\n";
  return out.str();
}

Panel decay_panel(const std::string& title, const std::vector<TrialAnalysis>& trials) {
  Panel p{title, "cycle", "max force (N)", {}};
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const TrialAnalysis& t = trials[i];
    Series pts{"", {}, {}, palette(i), false, true};
    for (const auto& pt : t.fmax.points) {
      pts.x.push_back(pt.cycle);
      pts.y.push_back(pt.force);
    }
    Series fit{text::precise(t.t_set, 6) + " degC (" + std::string(to_string(t.fit.family)) + ")", {}, {},
               palette(i), true, false};
    if (!t.fmax.points.empty()) {
      const int first = t.fmax.points.front().cycle, last = t.fmax.points.back().cycle;
      for (int v = first; v <= last; ++v) {
        fit.x.push_back(v);
        fit.y.push_back(t.fit.evaluate(v));
      }
    }
    p.series.push_back(std::move(pts));
    p.series.push_back(std::move(fit));
  }
  return p;
}

Panel force_curve_panel(const std::vector<ForceCurve>& curves) {
  Panel p{"Predicted long-life force", "limit temperature (degC)", "F_inf (N)", {}};
  for (std::size_t i = 0; i < curves.size(); ++i) {
    Series s{std::string(to_string(curves[i].profile)), {}, {}, palette(i), true, true};
    for (const auto& pt : curves[i].points) {
      s.x.push_back(pt.t_set);
      s.y.push_back(pt.f_inf);
    }
    p.series.push_back(std::move(s));
  }
  return p;
}

std::vector<Panel> trial_panels(const TrialLog& log) {
  Series temp_meas{"measured", {}, {}, palette(0), true, false};
  Series temp_true{"true", {}, {}, palette(1), true, false};
  Series force_meas{"measured", {}, {}, palette(0), true, false};
  for (const TrialRow& r : log.rows) {
    temp_meas.x.push_back(r.time_s);
    temp_meas.y.push_back(r.temp_meas);
    temp_true.x.push_back(r.time_s);
    temp_true.y.push_back(r.temp_true);
    force_meas.x.push_back(r.time_s);
    force_meas.y.push_back(r.force_meas);
  }
  const std::string name = log.config.label.empty() ? "trial" : log.config.label;
  return {Panel{name + ": temperature", "time (s)", "temperature (degC)", {temp_meas, temp_true}},
          Panel{name + ": blocked force", "time (s)", "force (N)", {force_meas}}};
}

}  // namespace smalife::svg
