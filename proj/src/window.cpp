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

#include "dfqpe/window.hpp"

#include <cmath>
#include <stdexcept>

#include "dfqpe/angles.hpp"

namespace dfqpe {
namespace {

void require_length(std::size_t n_points) {
    if (n_points < 2) {
        throw std::invalid_argument("window length must be at least 2, got " +
                                    std::to_string(n_points));
    }
}

double l2_norm(std::span<const double> v) {
    // Scaled accumulation so huge custom weights do not overflow.
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) return 0.0;
    double sum = 0.0;
    for (double x : v) {
        double s = x / scale;
        sum += s * s;
    }
    return scale * std::sqrt(sum);
}

std::vector<double> normalized(std::span<const double> v) {
    double norm = l2_norm(v);
    std::vector<double> out(v.begin(), v.end());
    for (double& x : out) x /= norm;
    return out;
}

}  // namespace

std::string_view to_string(WindowKind kind) {
    switch (kind) {
        case WindowKind::kRectangular: return "rect";
        case WindowKind::kCosine: return "cosine";
        case WindowKind::kBartlett: return "bartlett";
        case WindowKind::kCustom: return "custom";
    }
    return "unknown";
}

WindowKind parse_window_kind(std::string_view id) {
    if (id == "rect") return WindowKind::kRectangular;
    if (id == "cosine") return WindowKind::kCosine;
    if (id == "bartlett") return WindowKind::kBartlett;
    if (id == "custom") return WindowKind::kCustom;
    throw std::invalid_argument("unknown window id '" + std::string(id) +
                                "' (expected rect, cosine, bartlett or custom)");
}

WindowVector make_rectangular(std::size_t n_points) {
    require_length(n_points);
    double w = 1.0 / std::sqrt(static_cast<double>(n_points));
    return WindowVector(WindowKind::kRectangular, std::vector<double>(n_points, w));
}

WindowVector make_cosine(std::size_t n_points) {
    require_length(n_points);
    const double n = static_cast<double>(n_points);
    const double amp = std::sqrt(2.0 / n);
    std::vector<double> w(n_points);
    for (std::size_t y = 0; y < n_points; ++y) {
        w[y] = amp * std::sin(kPi * static_cast<double>(y) / n);
    }
    for (std::size_t y = n_points / 2 + 1; y < n_points; ++y) w[y] = w[n_points - y];
    // The closed form is unit norm analytically; renormalize away the
    // rounding so the 1e-12 invariant holds for every N.
    return WindowVector(WindowKind::kCosine, normalized(w));
}

WindowVector make_bartlett(std::size_t n_points) {
    require_length(n_points);
    if (n_points == 2) {
        auto rect = make_rectangular(2);
        return WindowVector(WindowKind::kBartlett,
                            std::vector<double>(rect.weights().begin(), rect.weights().end()));
    }
    const double half = 0.5 * static_cast<double>(n_points - 1);
    std::vector<double> w(n_points);
    for (std::size_t y = 0; y < n_points; ++y) {
        w[y] = 1.0 - std::abs(static_cast<double>(y) - half) / half;
    }
    // Mirror the left half so the symmetry is exact in floating point.
    for (std::size_t y = 0; y < n_points / 2; ++y) w[n_points - 1 - y] = w[y];
    return WindowVector(WindowKind::kBartlett, normalized(w));
}

WindowVector make_custom(std::span<const double> weights) {
    if (weights.size() < 2) {
        throw std::invalid_argument("custom window needs at least 2 weights");
    }
    for (double x : weights) {
        if (!std::isfinite(x)) throw std::invalid_argument("custom window has a non-finite weight");
    }
    if (l2_norm(weights) == 0.0) {
        throw std::invalid_argument("custom window is the zero vector");
    }
    auto w = normalized(weights);
    // Second pass settles the norm to the last ulp; keeps make_custom idempotent.
    return WindowVector(WindowKind::kCustom, normalized(w));
}

WindowVector make_window(WindowKind kind, std::size_t n_points) {
    switch (kind) {
        case WindowKind::kRectangular: return make_rectangular(n_points);
        case WindowKind::kCosine: return make_cosine(n_points);
        case WindowKind::kBartlett: return make_bartlett(n_points);
        case WindowKind::kCustom: break;
    }
    throw std::invalid_argument("custom windows need explicit weights");
}

}  // namespace dfqpe
