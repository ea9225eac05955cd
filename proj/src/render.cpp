#include "gpplan/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace gpplan::bench {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

/// 32-level grayscale hex for a traversability value in [0,1].
std::string gray_hex(double t) {
    const int level = std::clamp(static_cast<int>(std::floor(t * 32.0)), 0, 31);
    const int byte = 64 + (level * 191) / 31;  // dark gray .. near white
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", byte, byte, byte);
    return buf;
}

}  // namespace

Underlay compute_underlay(const gp::GprModel& model, const Rect& bounds, double res,
                           double safety_radius) {
    Underlay u;
    u.res = res;
    u.nx = static_cast<int>(std::ceil(bounds.w / res - 1e-9));
    u.ny = static_cast<int>(std::ceil(bounds.h / res - 1e-9));

    PointList centers;
    centers.reserve(static_cast<std::size_t>(u.nx) * static_cast<std::size_t>(u.ny));
    for (int iy = 0; iy < u.ny; ++iy) {
        for (int ix = 0; ix < u.nx; ++ix) {
            centers.emplace_back(bounds.x + (ix + 0.5) * res, bounds.y + (iy + 0.5) * res);
        }
    }
    const auto posteriors = model.infer_batch(centers, /*with_gradients=*/false);
    u.mean_T.resize(posteriors.size());
    u.blocked.resize(posteriors.size());
    for (std::size_t i = 0; i < posteriors.size(); ++i) {
        u.mean_T[i] = posteriors[i].mean_T;
        u.blocked[i] = posteriors[i].mean_d <= safety_radius ? 1 : 0;
    }
    return u;
}

std::string render_svg(const env::EnvironmentMap& map, const gp::GprModel& model,
                       const std::vector<RenderPath>& paths, double raster_res,
                       double safety_radius) {
    const Rect bounds = map.bounds();
    const Underlay u = compute_underlay(model, bounds, raster_res, safety_radius);
    const double side = map.side;

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" viewBox=\"0 0 "
        << fmt(side) << " " << fmt(side) << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << fmt(side) << "\" height=\"" << fmt(side)
        << "\" fill=\"#ffffff\"/>\n";

    // Raster underlay, run-length merged per row. SVG y grows downward, map
    // y upward, so row iy maps to y = side - (iy+1)*res.
    for (int iy = 0; iy < u.ny; ++iy) {
        int run_start = 0;
        auto cell_fill = [&](int ix) {
            const std::size_t i =
                static_cast<std::size_t>(iy) * static_cast<std::size_t>(u.nx) +
                static_cast<std::size_t>(ix);
            return u.blocked[i] ? std::string("#000000") : gray_hex(u.mean_T[i]);
        };
        std::string current = cell_fill(0);
        for (int ix = 1; ix <= u.nx; ++ix) {
            const std::string fill = ix < u.nx ? cell_fill(ix) : std::string();
            if (ix == u.nx || fill != current) {
                svg << "<rect x=\"" << fmt(bounds.x + run_start * u.res) << "\" y=\""
                    << fmt(side - (iy + 1) * u.res) << "\" width=\""
                    << fmt((ix - run_start) * u.res) << "\" height=\"" << fmt(u.res)
                    << "\" fill=\"" << current << "\"/>\n";
                run_start = ix;
                current = fill;
            }
        }
    }

    for (const RenderPath& path : paths) {
        if (path.points.size() < 2) continue;
        svg << "<polyline fill=\"none\" stroke=\"" << path.color
            << "\" stroke-width=\"0.06\" points=\"";
        for (std::size_t i = 0; i < path.points.size(); ++i) {
            if (i) svg << " ";
            svg << fmt(path.points[i].x()) << "," << fmt(side - path.points[i].y());
        }
        svg << "\"/>\n";
    }

    // Legend, top-left corner.
    double ly = 0.35;
    for (const RenderPath& path : paths) {
        svg << "<line x1=\"0.2\" y1=\"" << fmt(ly) << "\" x2=\"0.8\" y2=\"" << fmt(ly)
            << "\" stroke=\"" << path.color << "\" stroke-width=\"0.08\"/>\n";
        svg << "<text x=\"0.9\" y=\"" << fmt(ly + 0.12)
            << "\" font-size=\"0.32\" fill=\"#111111\">" << path.label << "</text>\n";
        ly += 0.45;
    }

    svg << "</svg>\n";
    return svg.str();
}

}  // namespace gpplan::bench
