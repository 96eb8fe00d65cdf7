#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scalefit/fitting.hpp"

namespace scalefit {

/// One observed series to draw, with its power fit when available.
struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;  // (N, observed value)
    std::optional<PowerLawFit> fit;
};

struct PlotOptions {
    std::string title = "scaling";
    std::string x_label = "cores";
    std::string y_label = "value";
    std::optional<int> saturation_n;  // draws a marker when present
    bool linear_reference = true;     // slope-1 guide through the first point
    int width = 720;
    int height = 480;
};

/// Render a log-log scatter of every series with its power-fit line, an
/// optional linear-scaling reference and saturation marker. Axis ranges are
/// padded by 5% in log space. Output is deterministic. Requires at least
/// two points in some series and positive coordinates everywhere.
std::string render_loglog_svg(const std::vector<PlotSeries>& series,
                              const PlotOptions& options = {});

/// Plot-data table, header `n_cores,observed,fitted,deviation_pct`.
/// Without a fit, fitted and deviation_pct are written as nan.
std::string plot_data_csv(const std::vector<std::pair<double, double>>& points,
                          const std::optional<PowerLawFit>& fit);

}  // namespace scalefit
