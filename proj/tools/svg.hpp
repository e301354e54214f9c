#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdnls/report.hpp"

namespace qdnls::cli {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::optional<LogLogFit> fit;  // drawn as a dashed line over the x range
};

// Self-contained log-log line plot. Nonpositive values are dropped.
std::string loglog_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<PlotSeries>& series);

// Series of one SweepReport: max ratio per fit-variable value, plus its fit.
PlotSeries sweep_series(const SweepReport& report);

}  // namespace qdnls::cli
