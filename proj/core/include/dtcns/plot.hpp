#pragma once

#include <string>
#include <vector>

#include "dtcns/experiment.hpp"

namespace dtcns {

/// One series of a line chart: mean curve plus a min/max envelope.
struct PlotSeries {
  std::string label;
  std::vector<double> x, mean, lo, hi;
};

struct LineChart {
  std::string title, x_label, y_label;
  std::vector<PlotSeries> series;
};

/// Deterministic SVG rendering: identical charts give identical bytes.
std::string render_svg(const LineChart& chart);

/// Writes one chart per (family, zeta, recovery) and metric, where the
/// families are single-style scenarios ("Each") and free-rider mixes
/// ("Rider"), e.g. plots/Compare_EachInfection_RT5_Inf0.10.svg. Returns the
/// written paths; an empty input writes nothing.
std::vector<std::string> emit_plots(const std::vector<CellResult>& cells,
                                    const std::string& out_dir);

}  // namespace dtcns
