#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace gpplan {

using Vec2 = Eigen::Vector2d;

/// Axis-aligned rectangle, min corner + extents, metres.
struct Rect {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    double area() const { return w * h; }
    double max_x() const { return x + w; }
    double max_y() const { return y + h; }

    bool contains(const Vec2& p) const {
        return p.x() >= x && p.x() <= max_x() && p.y() >= y && p.y() <= max_y();
    }
};

/// Euclidean distance from p to the rectangle (0 on the boundary or inside).
inline double rect_distance(const Rect& r, const Vec2& p) {
    const double dx = std::max({r.x - p.x(), 0.0, p.x() - r.max_x()});
    const double dy = std::max({r.y - p.y(), 0.0, p.y() - r.max_y()});
    return std::sqrt(dx * dx + dy * dy);
}

struct Disc {
    Vec2 center{0.0, 0.0};
    double radius = 0.0;
};

using PointList = std::vector<Vec2>;

}  // namespace gpplan
