#include "dtcns/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "dtcns/errors.hpp"

namespace fs = std::filesystem;

namespace dtcns {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 70, kRight = 180, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
                                    "#393b79", "#637939", "#843c39"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

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

// Rounds the axis maximum up to 1, 2 or 5 times a power of ten.
double nice_ceiling(double v) {
  if (v <= 0.0) return 1.0;
  const double p = std::pow(10.0, std::floor(std::log10(v)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * p >= v) return m * p;
  return 10.0 * p;
}

}  // namespace

std::string render_svg(const LineChart& chart) {
  double xmax = 1.0, ymax = 0.0;
  for (const auto& s : chart.series) {
    for (double x : s.x) xmax = std::max(xmax, x);
    for (double y : s.hi) ymax = std::max(ymax, y);
    for (double y : s.mean) ymax = std::max(ymax, y);
  }
  ymax = nice_ceiling(ymax);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + pw * x / xmax; };
  auto py = [&](double y) { return kTop + ph * (1.0 - y / ymax); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(chart.title) << "</text>\n";
  for (int k = 0; k <= 5; ++k) {
    const double y = ymax * k / 5.0, x = xmax * k / 5.0;
    svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(y)) << "\" x2=\"" << num(kLeft + pw)
        << "\" y2=\"" << num(py(y)) << "\" stroke=\"#e0e0e0\"/>\n"
        << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(y) + 4)
        << "\" text-anchor=\"end\">" << num(y) << "</text>\n"
        << "<text x=\"" << num(px(x)) << "\" y=\"" << num(kTop + ph + 18)
        << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
  }
  svg << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 10)
      << "\" text-anchor=\"middle\">" << escape(chart.x_label) << "</text>\n"
      << "<text transform=\"translate(16," << num(kTop + ph / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(chart.y_label) << "</text>\n";

  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    const auto& series = chart.series[s];
    const char* color = kPalette[s % std::size(kPalette)];
    if (!series.x.empty()) {
      svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
      for (std::size_t k = 0; k < series.x.size(); ++k)
        svg << num(px(series.x[k])) << ',' << num(py(series.hi[k])) << ' ';
      for (std::size_t k = series.x.size(); k-- > 0;)
        svg << num(px(series.x[k])) << ',' << num(py(series.lo[k])) << ' ';
      svg << "\"/>\n<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << color
          << "\" points=\"";
      for (std::size_t k = 0; k < series.x.size(); ++k)
        svg << num(px(series.x[k])) << ',' << num(py(series.mean[k])) << ' ';
      svg << "\"/>\n";
    }
    const double ly = kTop + 14 + 18 * static_cast<double>(s);
    svg << "<line x1=\"" << num(kLeft + pw + 12) << "\" y1=\"" << num(ly) << "\" x2=\""
        << num(kLeft + pw + 32) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n<text x=\"" << num(kLeft + pw + 38) << "\" y=\""
        << num(ly + 4) << "\">" << escape(series.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::string> emit_plots(const std::vector<CellResult>& cells,
                                    const std::string& out_dir) {
  std::vector<std::string> written;
  if (cells.empty()) {
    std::cerr << "warning: no results to plot\n";
    return written;
  }
  // family -> (recovery, zeta) -> scenario -> cells
  using Group = std::map<std::string, std::vector<const CellResult*>>;
  std::map<std::string, std::map<std::pair<double, double>, Group>> families;
  std::map<std::string, int> scenario_order;
  for (const auto& c : cells) {
    const std::string family = c.scenario.kind == Scenario::Kind::Single ? "Each" : "Rider";
    families[family][{c.point.recovery_days, c.point.zeta}][c.scenario.name()].push_back(&c);
    scenario_order.emplace(c.scenario.name(), static_cast<int>(scenario_order.size()));
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create plot directory (" + ec.message() + ")", out_dir);

  for (const auto& [family, points] : families) {
    for (const auto& [key, group] : points) {
      const auto [rt, zeta] = key;
      std::vector<std::string> names;
      for (const auto& [name, _] : group) names.push_back(name);
      std::sort(names.begin(), names.end(), [&](const std::string& a, const std::string& b) {
        return scenario_order[a] < scenario_order[b];
      });
      for (const bool infection : {true, false}) {
        LineChart chart;
        char title[128];
        std::snprintf(title, sizeof title, "%s, recovery %g days, transmissibility %.2f",
                      infection ? "Cumulative infections" : "Cumulative total reward", rt, zeta);
        chart.title = title;
        chart.x_label = "day";
        chart.y_label = infection ? "cumulative infections" : "cumulative reward";
        for (const auto& name : names) {
          const auto& runs = group.at(name);
          PlotSeries s;
          s.label = name;
          std::size_t days = runs.front()->daily.size();
          for (const auto* r : runs) days = std::min(days, r->daily.size());
          for (std::size_t d = 0; d < days; ++d) {
            double sum = 0.0, lo = INFINITY, hi = -INFINITY;
            for (const auto* r : runs) {
              const double v = infection ? r->daily[d].cum_infections : r->daily[d].cum_reward;
              sum += v;
              lo = std::min(lo, v);
              hi = std::max(hi, v);
            }
            s.x.push_back(static_cast<double>(runs.front()->daily[d].day + 1));
            s.mean.push_back(sum / static_cast<double>(runs.size()));
            s.lo.push_back(lo);
            s.hi.push_back(hi);
          }
          chart.series.push_back(std::move(s));
        }
        char file[128];
        std::snprintf(file, sizeof file, "Compare_%s%s_RT%g_Inf%.2f.svg", family.c_str(),
                      infection ? "Infection" : "Reward", rt, zeta);
        const auto path = (fs::path(out_dir) / file).string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot open plot for writing", path);
        out << render_svg(chart);
        if (!out) throw IoError("failed writing plot", path);
        written.push_back(path);
      }
    }
  }
  return written;
}

}  // namespace dtcns
