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

#include "dfqpe/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dfqpe/angles.hpp"

namespace dfqpe {
namespace {

constexpr double kOffsetTolerance = 1e-12;
constexpr double kResultantFloor = 1e-9;

void require_nonempty(const Histogram& hist) {
    if (hist.total == 0 || hist.counts.empty()) {
        throw std::invalid_argument("histogram holds no samples");
    }
}

struct WeightedBin {
    std::size_t bin;
    double count;
};

std::vector<WeightedBin> kept_bins(const Histogram& hist, std::size_t bins_kept) {
    std::vector<WeightedBin> kept;
    for (std::size_t k : strongest_bins(hist, bins_kept)) {
        if (hist.counts[k] > 0) kept.push_back({k, static_cast<double>(hist.counts[k])});
    }
    return kept;
}

// Objective with the frame phase (phase + offset) already formed.
double objective_in_frame(const std::vector<WeightedBin>& bins, std::size_t n_points,
                          double frame_phase, double sinc_floor) {
    const double n = static_cast<double>(n_points);
    const double x = n * wrap_2pi(frame_phase) / kTwoPi;
    const double log_floor = std::log(sinc_floor);
    double total = 0.0;
    for (const auto& [k, count] : bins) {
        double d = x - static_cast<double>(k);
        if (d >= 0.5 * n) d -= n;
        if (d < -0.5 * n) d += n;
        const double s = std::abs(sinc(d));
        total += count * (s > sinc_floor ? std::log(s) : log_floor);
    }
    return total;
}

bool offset_is(double offset, double target) {
    return std::abs(wrap_pm_pi(offset - target)) <= kOffsetTolerance;
}

}  // namespace

std::size_t EstimatorConfig::grid_points(std::uint64_t n_shots) const {
    const double scaled = std::ceil(grid_scale * std::sqrt(static_cast<double>(n_shots)));
    std::size_t g = std::max(grid_min, static_cast<std::size_t>(scaled));
    if (g % 2 == 0) ++g;
    return g;
}

void EstimatorConfig::validate() const {
    if (bins_kept < 2) throw std::invalid_argument("bins_kept must be at least 2");
    if (grid_min < 3) throw std::invalid_argument("grid_min must be at least 3");
    if (!(grid_scale > 0.0)) throw std::invalid_argument("grid_scale must be positive");
    if (!(sinc_floor > 0.0 && sinc_floor < 1.0)) {
        throw std::invalid_argument("sinc_floor must lie in (0, 1)");
    }
}

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = kPi * x;
    return std::sin(px) / px;
}

std::optional<double> circular_sample_mean(const Histogram& hist) {
    if (hist.total == 0) return std::nullopt;
    const double cell = cell_width(hist.n_points);
    std::complex<double> resultant = 0.0;
    for (std::size_t y = 0; y < hist.counts.size(); ++y) {
        if (hist.counts[y] == 0) continue;
        resultant += static_cast<double>(hist.counts[y]) *
                     std::polar(1.0, cell * static_cast<double>(y));
    }
    if (std::abs(resultant) <= kResultantFloor * static_cast<double>(hist.total)) {
        return std::nullopt;
    }
    return wrap_2pi(std::arg(resultant));
}

std::optional<double> circular_sample_mean(const SampleSet& samples) {
    return circular_sample_mean(histogram(samples));
}

std::size_t peak_bin(const Histogram& hist) {
    require_nonempty(hist);
    // max_element keeps the first maximum, i.e. the smallest index.
    return static_cast<std::size_t>(
        std::max_element(hist.counts.begin(), hist.counts.end()) - hist.counts.begin());
}

double rough_estimate(const Histogram& hist) {
    return cell_width(hist.n_points) * static_cast<double>(peak_bin(hist));
}

std::vector<std::size_t> strongest_bins(const Histogram& hist, std::size_t bins_kept) {
    std::vector<std::size_t> order(hist.counts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t keep = std::min(bins_kept, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (hist.counts[a] != hist.counts[b]) return hist.counts[a] > hist.counts[b];
                          return a < b;
                      });
    order.resize(keep);
    return order;
}

double aml_objective(const Histogram& hist, double phase, double offset,
                     const EstimatorConfig& config) {
    return objective_in_frame(kept_bins(hist, config.bins_kept), hist.n_points, phase + offset,
                              config.sinc_floor);
}

AmlResult aml_estimate(const Histogram& hist, double offset, const EstimatorConfig& config) {
    require_nonempty(hist);
    const std::size_t n_points = hist.n_points;
    const auto bins = kept_bins(hist, config.bins_kept);

    AmlResult result;
    result.offset = offset;
    result.rough = rough_estimate(hist);
    result.grid_points = config.grid_points(hist.total);

    const auto half = static_cast<std::ptrdiff_t>(result.grid_points / 2);
    const double step =
        2.0 * cell_width(n_points) / static_cast<double>(result.grid_points);
    std::ptrdiff_t best_m = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::ptrdiff_t m = -half; m <= half; ++m) {
        const double value = objective_in_frame(
            bins, n_points, result.rough + step * static_cast<double>(m), config.sinc_floor);
        if (value > best_value) {
            best_value = value;
            best_m = m;
        }
    }
    result.correction = step * static_cast<double>(best_m);
    result.refined = wrap_2pi(result.rough + result.correction);
    return result;
}

CandidateSet dual_frequency_candidates(const AmlResult& set1, const AmlResult& set2,
                                       std::size_t n_points) {
    const double rough2 = wrap_2pi(set2.rough - half_cell_offset(n_points));
    CandidateSet c;
    c.u = {wrap_2pi(set1.rough + set1.correction), wrap_2pi(set1.rough - set1.correction),
           wrap_2pi(rough2 + set2.correction), wrap_2pi(rough2 - set2.correction)};
    return c;
}

DfResult dual_frequency_estimate(const Histogram& plain, const Histogram& shifted,
                                 const EstimatorConfig& config) {
    require_nonempty(plain);
    require_nonempty(shifted);
    if (plain.n_points != shifted.n_points) {
        throw std::invalid_argument("dual-frequency sets have different record lengths");
    }
    const std::size_t n_points = plain.n_points;

    DfResult r;
    r.set1 = aml_estimate(plain, 0.0, config);
    r.set2 = aml_estimate(shifted, half_cell_offset(n_points), config);
    r.rough2_shifted = wrap_2pi(r.set2.rough - half_cell_offset(n_points));
    r.candidates = dual_frequency_candidates(r.set1, r.set2, n_points);

    const auto& u = r.candidates.u;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i : {std::size_t{0}, std::size_t{1}}) {
        for (std::size_t j : {std::size_t{2}, std::size_t{3}}) {
            const double d = circular_distance(u[i], u[j]);
            if (d < best) {
                best = d;
                r.pair = {i, j};
            }
        }
    }
    r.estimate = circular_midpoint(u[r.pair.first], u[r.pair.second]);
    return r;
}

DfResult dual_frequency_estimate(const SampleSet& a, const SampleSet& b,
                                 const EstimatorConfig& config) {
    if (a.outcomes.empty() || b.outcomes.empty()) {
        throw std::invalid_argument("dual-frequency estimation needs two nonempty sample sets");
    }
    if (a.n_points != b.n_points) {
        throw std::invalid_argument("dual-frequency sets have different record lengths");
    }
    const double half = half_cell_offset(a.n_points);
    if (offset_is(a.offset, 0.0) && offset_is(b.offset, half)) {
        return dual_frequency_estimate(histogram(a), histogram(b), config);
    }
    if (offset_is(b.offset, 0.0) && offset_is(a.offset, half)) {
        return dual_frequency_estimate(histogram(b), histogram(a), config);
    }
    throw std::invalid_argument("dual-frequency sets must carry offsets 0 and pi/N");
}

}  // namespace dfqpe
