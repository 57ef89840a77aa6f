// Copyright 2026 The dfqpe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <numbers>

namespace dfqpe {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Equivalent angle in [0, 2*pi).
inline double wrap_2pi(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod of a tiny negative value can round up to exactly 2*pi.
    if (r >= kTwoPi) r = 0.0;
    return r;
}

/// Equivalent angle in (-pi, pi].
inline double wrap_pm_pi(double x) {
    double r = wrap_2pi(x);
    if (r > kPi) r -= kTwoPi;
    return r;
}

/// Signed wrap-aware error, estimate - truth reduced to (-pi, pi].
inline double signed_circular_error(double estimate, double truth) {
    return wrap_pm_pi(estimate - truth);
}

/// d(a, b) = min over integers m of |a - b + 2*pi*m|.
inline double circular_distance(double a, double b) {
    return std::abs(wrap_pm_pi(a - b));
}

/// Midpoint of the shorter arc from a to b, in [0, 2*pi).
inline double circular_midpoint(double a, double b) {
    return wrap_2pi(a + 0.5 * wrap_pm_pi(b - a));
}

/// Size of one resolution cell, 2*pi/N.
inline double cell_width(std::size_t n_points) {
    return kTwoPi / static_cast<double>(n_points);
}

}  // namespace dfqpe
