#pragma once

#include "clockforge/raster.hpp"
#include "clockforge/synclock.hpp"

namespace clockforge::detail {

// Unit vector for a clock angle (clockwise from 12, y down). Odd in the
// angle, so mirrored angles give exactly mirrored directions.
Eigen::Vector2d clock_direction(double degrees);

// Hand silhouette relative to `origin`.
Shape hand_shape(const HandGeometry& hand, Eigen::Vector2d origin);

}  // namespace clockforge::detail
