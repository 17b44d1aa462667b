#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "stochfred/errors.hpp"

namespace stochfred {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

using PlaneMap = std::function<Point2(Point2)>;

// Finite-sample bracket for the covering modulus of a plane-to-plane map at a
// point: the largest rho with B(F(center), rho) inside the sampled image of
// B(center, r), divided by r. A sampling bracket, not a certificate.
struct CoveringRateEstimate {
    Point2 center;
    double radius = 0.0;
    double alpha_lower = 0.0;
    double alpha_upper = 0.0;
    std::size_t sectors = 0;
    std::size_t rings = 0;
};

// Occupancy test on a polar grid around F(center). A disk of radius rho
// counts as covered when every ring it meets is occupied in every sector, so
// the covered radius is the shortest contiguous occupied prefix over sectors.
// The bracket margin is one bin diagonal.
inline CoveringRateEstimate covering_rate_estimate(const PlaneMap& map2d, Point2 center,
                                                   double r, std::size_t resolution = 400) {
    if (!(r > 0.0)) fail("parameter-out-of-range", "radius must be positive");
    if (resolution < 64) fail("parameter-out-of-range", "resolution must be at least 64 per axis");

    const Point2 image_center = map2d(center);
    if (!std::isfinite(image_center.x) || !std::isfinite(image_center.y))
        fail("degenerate-map", "map not finite at the center");

    const std::size_t sectors = resolution;
    const std::size_t rings = resolution;

    // Dense polar sampling of the input ball, several samples per output bin.
    const std::size_t n_rad = 4 * resolution;
    const std::size_t n_ang = 4 * resolution;
    const double two_pi = 6.283185307179586476925;

    std::vector<Point2> images;
    images.reserve(n_rad * n_ang + 1);
    images.push_back(image_center);
    double r_max = 0.0;
    for (std::size_t i = 1; i <= n_rad; ++i) {
        const double rho_in = r * static_cast<double>(i) / static_cast<double>(n_rad);
        for (std::size_t j = 0; j < n_ang; ++j) {
            const double theta = two_pi * static_cast<double>(j) / static_cast<double>(n_ang);
            const Point2 p{center.x + rho_in * std::cos(theta),
                           center.y + rho_in * std::sin(theta)};
            const Point2 q = map2d(p);
            if (!std::isfinite(q.x) || !std::isfinite(q.y))
                fail("degenerate-map", "map not finite on the sampled ball");
            const double dx = q.x - image_center.x;
            const double dy = q.y - image_center.y;
            r_max = std::max(r_max, std::hypot(dx, dy));
            images.push_back(q);
        }
    }

    CoveringRateEstimate est;
    est.center = center;
    est.radius = r;
    est.sectors = sectors;
    est.rings = rings;

    if (r_max == 0.0) {
        // Image collapsed to a point: zero covering rate, exactly.
        est.alpha_lower = est.alpha_upper = 0.0;
        return est;
    }

    const double dr = r_max / static_cast<double>(rings);
    std::vector<char> occupied(sectors * rings, 0);
    for (const Point2& q : images) {
        const double dx = q.x - image_center.x;
        const double dy = q.y - image_center.y;
        const double rho = std::hypot(dx, dy);
        std::size_t ring = static_cast<std::size_t>(rho / dr);
        if (ring >= rings) ring = rings - 1;
        double theta = std::atan2(dy, dx);
        if (theta < 0.0) theta += two_pi;
        std::size_t sector = static_cast<std::size_t>(theta / two_pi * static_cast<double>(sectors));
        if (sector >= sectors) sector = sectors - 1;
        if (rho == 0.0) {
            // The image of the center seeds ring 0 in every sector.
            for (std::size_t sct = 0; sct < sectors; ++sct) occupied[sct * rings] = 1;
        } else {
            occupied[sector * rings + ring] = 1;
        }
    }

    std::size_t shortest_prefix = rings;
    for (std::size_t sct = 0; sct < sectors; ++sct) {
        std::size_t prefix = 0;
        while (prefix < rings && occupied[sct * rings + prefix]) ++prefix;
        shortest_prefix = std::min(shortest_prefix, prefix);
    }
    const double rho_covered = dr * static_cast<double>(shortest_prefix);
    const double margin = std::hypot(dr, r_max * two_pi / static_cast<double>(sectors));

    est.alpha_lower = std::max(0.0, (rho_covered - margin) / r);
    est.alpha_upper = (rho_covered + margin) / r;
    return est;
}

} // namespace stochfred
