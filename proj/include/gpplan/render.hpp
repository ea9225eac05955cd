#pragma once

#include <string>
#include <vector>

#include "gpplan/common.hpp"
#include "gpplan/envgen.hpp"
#include "gpplan/gpr.hpp"

namespace gpplan::bench {

/// Raster of the GP posterior over the map: traversability mean per pixel
/// plus the blocked mask (inferred obstacle distance <= safety radius).
struct Underlay {
    int nx = 0;
    int ny = 0;
    double res = 0.05;
    std::vector<double> mean_T;        // row-major, ny rows of nx
    std::vector<std::uint8_t> blocked;
};

Underlay compute_underlay(const gp::GprModel& model, const Rect& bounds, double res = 0.05,
                          double safety_radius = 0.1);

struct RenderPath {
    std::string label;
    std::string color;  // SVG color
    PointList points;   // polyline; curves are pre-sampled by the caller
};

/// Standalone SVG: grayscale traversability underlay, blocked region in
/// black, overlaid paths with a legend. Deterministic for fixed inputs.
std::string render_svg(const env::EnvironmentMap& map, const gp::GprModel& model,
                       const std::vector<RenderPath>& paths, double raster_res = 0.05,
                       double safety_radius = 0.1);

}  // namespace gpplan::bench
