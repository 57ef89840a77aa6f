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

#include "dfqpe/qpe_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dfqpe/angles.hpp"
#include "dfqpe/detail/dft.hpp"
#include "dfqpe/rng.hpp"

namespace dfqpe {
namespace {

constexpr double kSingularityThreshold = 1e-9;

void require_finite(double phase, double offset) {
    if (!std::isfinite(phase)) throw std::invalid_argument("phase must be finite");
    if (!std::isfinite(offset)) throw std::invalid_argument("offset must be finite");
}

// Offsets below this many cells from an integer are treated as exact
// zeros of the Dirichlet kernel numerator.
constexpr double kZeroSnap = 1e-12;

// (1/N^2) sin^2(N theta/2) / sin^2(theta/2) with theta = 2 pi d / N, where d is
// the displacement of phase from bin y in cells. Working in cells makes
// sin(N theta/2) = +-sin(pi frac(d)), exact zero on grid.
std::vector<double> rectangular_closed_form(std::size_t n_points, double theta0) {
    const double n = static_cast<double>(n_points);
    const double x = n * theta0 / kTwoPi;
    std::vector<double> probs(n_points);
    for (std::size_t y = 0; y < n_points; ++y) {
        double d = x - static_cast<double>(y);
        if (d >= 0.5 * n) d -= n;
        if (d < -0.5 * n) d += n;
        const double s = std::sin(kPi * d / n);
        const double frac = d - std::round(d);
        if (std::abs(s) < kSingularityThreshold) {
            probs[y] = 1.0;
        } else if (std::abs(frac) <= kZeroSnap) {
            probs[y] = 0.0;
        } else {
            const double r = std::sin(kPi * frac) / (n * s);
            probs[y] = r * r;
        }
    }
    return probs;
}

}  // namespace

Histogram Histogram::from_counts(std::vector<std::uint64_t> counts) {
    Histogram h;
    h.n_points = counts.size();
    h.total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    h.counts = std::move(counts);
    return h;
}

double half_cell_offset(std::size_t n_points) {
    return kPi / static_cast<double>(n_points);
}

PhaseDistribution distribution(const WindowVector& window, double phase, double offset) {
    require_finite(phase, offset);
    const std::size_t n_points = window.n_points();
    const double theta0 = wrap_2pi(phase + offset);

    PhaseDistribution dist{n_points, phase, offset, {}};
    if (window.kind() == WindowKind::kRectangular) {
        dist.probs = rectangular_closed_form(n_points, theta0);
    } else {
        std::vector<std::complex<double>> modulated(n_points);
        for (std::size_t n = 0; n < n_points; ++n) {
            modulated[n] = window[n] * std::polar(1.0, theta0 * static_cast<double>(n));
        }
        auto spectrum = detail::dft(modulated);
        const double inv_n = 1.0 / static_cast<double>(n_points);
        dist.probs.resize(n_points);
        for (std::size_t y = 0; y < n_points; ++y) dist.probs[y] = std::norm(spectrum[y]) * inv_n;
    }
    for (double& p : dist.probs) p = std::max(p, 0.0);
    return dist;
}

std::vector<double> distribution_direct(const WindowVector& window, double phase, double offset) {
    require_finite(phase, offset);
    const std::size_t n_points = window.n_points();
    const double theta0 = wrap_2pi(phase + offset);
    const double cell = cell_width(n_points);
    std::vector<double> probs(n_points);
    for (std::size_t y = 0; y < n_points; ++y) {
        const double theta = theta0 - cell * static_cast<double>(y);
        std::complex<double> acc = 0.0;
        for (std::size_t n = 0; n < n_points; ++n) {
            acc += window[n] * std::polar(1.0, static_cast<double>(n) * theta);
        }
        probs[y] = std::max(0.0, std::norm(acc) / static_cast<double>(n_points));
    }
    return probs;
}

SampleSet sample(const PhaseDistribution& dist, std::size_t n_shots, std::uint64_t seed) {
    if (n_shots == 0) throw std::invalid_argument("n_shots must be at least 1");
    if (dist.probs.size() != dist.n_points || dist.n_points == 0) {
        throw std::invalid_argument("distribution length does not match n_points");
    }

    std::vector<double> cdf(dist.n_points);
    double running = 0.0;
    std::size_t last_nonzero = 0;
    for (std::size_t y = 0; y < dist.n_points; ++y) {
        double p = dist.probs[y];
        if (!(p > 0.0)) p = 0.0;  // clamps negatives and NaN
        if (p > 0.0) last_nonzero = y;
        running += p;
        cdf[y] = running;
    }
    if (!(running > 0.0) || !std::isfinite(running)) {
        throw std::domain_error("degenerate distribution: no positive probability mass");
    }

    Rng rng(seed);
    SampleSet out{dist.n_points, {}, dist.offset};
    out.outcomes.reserve(n_shots);
    for (std::size_t i = 0; i < n_shots; ++i) {
        const double u = rng.uniform01() * running;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t y = static_cast<std::size_t>(it - cdf.begin());
        // u < running always, but guard against landing past the last bin
        // that actually carries mass.
        y = std::min(y, last_nonzero);
        out.outcomes.push_back(static_cast<std::uint32_t>(y));
    }
    return out;
}

Histogram histogram(const SampleSet& samples) {
    validate(samples);
    std::vector<std::uint64_t> counts(samples.n_points, 0);
    for (auto y : samples.outcomes) ++counts[y];
    return Histogram::from_counts(std::move(counts));
}

Histogram rounded_histogram(const PhaseDistribution& dist, std::uint64_t n_shots) {
    std::vector<std::uint64_t> counts(dist.n_points);
    for (std::size_t y = 0; y < dist.n_points; ++y) {
        counts[y] = static_cast<std::uint64_t>(
            std::llround(static_cast<double>(n_shots) * std::max(dist.probs[y], 0.0)));
    }
    return Histogram::from_counts(std::move(counts));
}

void validate(const SampleSet& samples) {
    if (samples.n_points == 0) throw std::invalid_argument("sample set has n_points = 0");
    for (auto y : samples.outcomes) {
        if (y >= samples.n_points) {
            throw std::invalid_argument("outcome " + std::to_string(y) + " outside [0, " +
                                        std::to_string(samples.n_points - 1) + "]");
        }
    }
}

}  // namespace dfqpe
