#include "landauer/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "landauer/error.hpp"

namespace landauer {

namespace {

constexpr double kWidth = 760.0;
constexpr double kPanelHeight = 380.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 190.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  // Avoid "-0.00" so equal pixels print identically.
  std::string s = buf;
  if (s.rfind("-0.", 0) == 0 && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string px(double v) { return fmt("%.2f", v); }

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  void settle() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) {
      const double pad = std::max(1.0, std::abs(hi)) * 0.5;
      lo -= pad;
      hi += pad;
    }
  }
};

double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  const double nice = f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

std::vector<double> ticks(double lo, double hi, double step) {
  std::vector<double> out;
  for (double k = std::ceil(lo / step - 1e-9); k * step <= hi + 1e-9 * step; k += 1.0) out.push_back(k * step);
  return out;
}

std::string tick_label(double v, double step) {
  if (std::abs(v) < 1e-12 * step) v = 0.0;
  const double a = std::max(std::abs(v), step);
  if (a >= 1e4 || a < 1e-3) return fmt("%.2g", v);
  const int digits = std::max(0, static_cast<int>(-std::floor(std::log10(step) + 1e-9)));
  char pattern[16];
  std::snprintf(pattern, sizeof pattern, "%%.%df", digits);
  return fmt(pattern, v);
}

void render_panel(std::ostringstream& svg, const Panel& panel, double y0) {
  Range xr;
  Range yr;
  for (const auto& s : panel.series) {
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (std::isfinite(s.y[k])) {
        xr.add(s.x[k]);
        yr.add(s.y[k]);
      }
    }
  }
  xr.settle();
  yr.settle();
  const double ypad = 0.05 * (yr.hi - yr.lo);
  yr.lo -= ypad;
  yr.hi += ypad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kPanelHeight - kTop - kBottom;
  const double ox = kLeft;
  const double oy = y0 + kTop;
  auto sx = [&](double x) { return ox + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto sy = [&](double y) { return oy + (yr.hi - y) / (yr.hi - yr.lo) * plot_h; };

  svg << "<g>\n";
  svg << "<text x=\"" << px(ox + plot_w / 2) << "\" y=\"" << px(y0 + 24)
      << "\" text-anchor=\"middle\" font-size=\"15\">" << escape(panel.title) << "</text>\n";
  svg << "<rect x=\"" << px(ox) << "\" y=\"" << px(oy) << "\" width=\"" << px(plot_w) << "\" height=\""
      << px(plot_h) << "\" fill=\"none\" stroke=\"#000\"/>\n";

  const double xstep = nice_step(xr.hi - xr.lo, 6);
  for (double v : ticks(xr.lo, xr.hi, xstep)) {
    svg << "<line x1=\"" << px(sx(v)) << "\" y1=\"" << px(oy + plot_h) << "\" x2=\"" << px(sx(v)) << "\" y2=\""
        << px(oy + plot_h + 5) << "\" stroke=\"#000\"/>\n";
    svg << "<text x=\"" << px(sx(v)) << "\" y=\"" << px(oy + plot_h + 20)
        << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(v, xstep) << "</text>\n";
  }
  const double ystep = nice_step(yr.hi - yr.lo, 6);
  for (double v : ticks(yr.lo, yr.hi, ystep)) {
    svg << "<line x1=\"" << px(ox - 5) << "\" y1=\"" << px(sy(v)) << "\" x2=\"" << px(ox) << "\" y2=\""
        << px(sy(v)) << "\" stroke=\"#000\"/>\n";
    svg << "<text x=\"" << px(ox - 8) << "\" y=\"" << px(sy(v) + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">" << tick_label(v, ystep) << "</text>\n";
  }
  if (yr.lo < 0.0 && yr.hi > 0.0) {
    svg << "<line x1=\"" << px(ox) << "\" y1=\"" << px(sy(0.0)) << "\" x2=\"" << px(ox + plot_w) << "\" y2=\""
        << px(sy(0.0)) << "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";
  }
  svg << "<text x=\"" << px(ox + plot_w / 2) << "\" y=\"" << px(oy + plot_h + 42)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(panel.x_label) << "</text>\n";
  svg << "<text transform=\"translate(" << px(24) << "," << px(oy + plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">" << escape(panel.y_label) << "</text>\n";

  for (std::size_t i = 0; i < panel.series.size(); ++i) {
    const auto& s = panel.series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    std::string points;
    auto flush = [&] {
      if (points.empty()) return;
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"" << points
          << "\"/>\n";
      points.clear();
    };
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += px(sx(s.x[k])) + "," + px(sy(s.y[k]));
    }
    flush();

    const double ly = oy + 14 + 20.0 * static_cast<double>(i);
    const double lx = ox + plot_w + 14;
    svg << "<line x1=\"" << px(lx) << "\" y1=\"" << px(ly) << "\" x2=\"" << px(lx + 24) << "\" y2=\"" << px(ly)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << px(lx + 30) << "\" y=\"" << px(ly + 4) << "\" font-size=\"12\">" << escape(s.label)
        << "</text>\n";
  }
  svg << "</g>\n";
}

std::vector<double> scaled(std::vector<double> v, double factor) {
  for (auto& x : v) x *= factor;
  return v;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
  out << text;
}

}  // namespace

std::string render_svg(const std::vector<Panel>& panels) {
  std::ostringstream svg;
  const double height = kPanelHeight * static_cast<double>(std::max<std::size_t>(1, panels.size()));
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << px(kWidth) << "\" height=\""
      << px(height) << "\" viewBox=\"0 0 " << px(kWidth) << " " << px(height)
      << "\" font-family=\"Helvetica, Arial, sans-serif\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  for (std::size_t p = 0; p < panels.size(); ++p) {
    render_panel(svg, panels[p], kPanelHeight * static_cast<double>(p));
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<Panel> bounds_panels(const CsvTable& table, const PlotUnits& units) {
  const auto& t = table.at("t");
  const std::string x_label = "t [" + units.time + "]";
  const std::string e_label = "energy [" + units.energy + "]";

  if (table.has("beta_R_t")) {
    Panel heat{"Heat and bounds", x_label, e_label, {}};
    heat.series.push_back({"Q", t, table.at("Q")});
    heat.series.push_back({"Q̃u + W", t, table.at("upper")});
    heat.series.push_back({"−TΔS", t, table.at("lp_lower")});
    heat.series.push_back({"T_R(0)ΔCoh", t, table.at("TR0_dCoh")});
    Panel ref{"Reference parameter and work", x_label, "β_R [1/" + units.energy + "], energy [" + units.energy + "]",
              {}};
    ref.series.push_back({"β_R(t)", t, table.at("beta_R_t")});
    ref.series.push_back({"W", t, table.at("W")});
    ref.series.push_back({"−Q̃u", t, scaled(table.at("Qu_tilde"), -1.0)});
    return {heat, ref};
  }
  if (table.has("Q_u")) {
    Panel heat{"Heat and Landauer-like bound", x_label, e_label, {}};
    heat.series.push_back({"Q", t, table.at("Q")});
    heat.series.push_back({"Qu", t, table.at("Q_u")});
    heat.series.push_back({"T_RΔCoh", t, table.at("TR_dCoh")});
    heat.series.push_back({"−T_RΔS′", t, table.at("mTR_dS_diag")});
    return {heat};
  }
  throw Error(ErrorCode::SchemaError, "bounds table has neither driven nor undriven columns");
}

std::filesystem::path emit_plots(const std::filesystem::path& bounds_csv, const std::filesystem::path& out_svg,
                                 const PlotUnits& units) {
  write_text(out_svg, render_svg(bounds_panels(read_csv(bounds_csv), units)));
  return out_svg;
}

std::filesystem::path emit_sweep_plot(const std::vector<std::pair<std::string, std::filesystem::path>>& runs,
                                      const std::filesystem::path& out_svg, const PlotUnits& units) {
  std::vector<Panel> panels;
  for (const auto& [label, csv] : runs) {
    const CsvTable table = read_csv(csv);
    const auto& t = table.at("t");
    Panel p{label, "t [" + units.time + "]", "energy [" + units.energy + "]", {}};
    p.series.push_back({"Q", t, table.at("Q")});
    p.series.push_back({"T_R(0)ΔCoh", t, table.at("TR0_dCoh")});
    panels.push_back(std::move(p));
  }
  write_text(out_svg, render_svg(panels));
  return out_svg;
}

}  // namespace landauer
