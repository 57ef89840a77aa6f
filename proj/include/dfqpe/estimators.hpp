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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dfqpe/qpe_model.hpp"

namespace dfqpe {

/// Tuning knobs shared by the AML and dual-frequency estimators.
struct EstimatorConfig {
    /// Highest-count bins entering the sinc log-likelihood.
    std::size_t bins_kept = 8;
    /// Grid size is max(grid_min, ceil(grid_scale * sqrt(n_shots))), bumped to odd.
    std::size_t grid_min = 9;
    double grid_scale = 4.0;
    /// |sinc| is clamped here before the log.
    double sinc_floor = 1e-12;

    /// Number of grid points for a histogram of n_shots outcomes; always odd.
    std::size_t grid_points(std::uint64_t n_shots) const;

    /// Throws std::invalid_argument when bins_kept < 2, grid_min < 3,
    /// grid_scale <= 0 or sinc_floor outside (0, 1).
    void validate() const;
};

struct AmlResult {
    double rough = 0.0;       // 2 pi k / N for the peak bin k
    double refined = 0.0;     // best grid point, in [0, 2 pi)
    double correction = 0.0;  // refined - rough, wrapped to (-pi, pi]
    std::size_t grid_points = 0;
    double offset = 0.0;  // frame label: the values above estimate phase + offset
};

struct CandidateSet {
    std::array<double, 4> u{};
};

struct DfResult {
    double estimate = 0.0;
    AmlResult set1;  // offset-0 frame
    AmlResult set2;  // offset frame, phase + pi/N
    double rough2_shifted = 0.0;  // set-2 rough estimate mapped back to the phase frame
    CandidateSet candidates;
    std::pair<std::size_t, std::size_t> pair{0, 2};  // 0-based indices into candidates.u
};

/// sinc(x) = sin(pi x) / (pi x), sinc(0) = 1.
double sinc(double x);

/// arg(sum_i exp(2 pi i y_i / N)) in [0, 2 pi). std::nullopt when the
/// resultant vanishes (perfectly balanced antipodal mass) or the set is empty.
std::optional<double> circular_sample_mean(const SampleSet& samples);
std::optional<double> circular_sample_mean(const Histogram& hist);

/// Index of the largest count, ties to the smaller index. Throws
/// std::invalid_argument on an empty histogram.
std::size_t peak_bin(const Histogram& hist);

/// 2 pi * peak_bin(hist) / N.
double rough_estimate(const Histogram& hist);

/// The bins_kept highest-count bins, ties to the smaller index, in that order.
std::vector<std::size_t> strongest_bins(const Histogram& hist, std::size_t bins_kept);

/// sum_k counts_k * ln(max(|sinc(d_k)|, sinc_floor)) over strongest_bins, with
/// d_k = N (phase + offset) / (2 pi) - k wrapped to [-N/2, N/2).
double aml_objective(const Histogram& hist, double phase, double offset,
                     const EstimatorConfig& config = {});

/// Rough estimate plus a uniform grid search of the sinc log-likelihood.
///
/// The grid is rough + 4 pi m / (N G), |m| <= (G - 1) / 2, G = grid_points,
/// which always contains the rough estimate and stays inside
/// [rough - 2 pi / N, rough + 2 pi / N]. All values are in the frame the
/// histogram was measured in, i.e. they estimate phase + offset; the offset
/// itself only labels that frame. Ties go to the first (lowest) grid point.
AmlResult aml_estimate(const Histogram& hist, double offset, const EstimatorConfig& config = {});

/// Four mirror candidates from the two AML runs:
///   u1 = r1 + e1, u2 = r1 - e1, u3 = r2 + e2, u4 = r2 - e2
/// with r2 = set-2 rough - pi/N. All reduced to [0, 2 pi).
CandidateSet dual_frequency_candidates(const AmlResult& set1, const AmlResult& set2,
                                       std::size_t n_points);

/// Dual-frequency estimate from an offset-0 and an offset-pi/N histogram.
///
/// Picks the cross-set pair (u1|u2, u3|u4) with the smallest circular
/// distance and returns its circular midpoint. Ties go to the first pair in
/// the order (1,3), (1,4), (2,3), (2,4).
DfResult dual_frequency_estimate(const Histogram& plain, const Histogram& shifted,
                                 const EstimatorConfig& config = {});

/// Sample-set front end. The offset travels with each set: one set must carry
/// offset 0 and the other pi/N, in either argument position. Throws
/// std::invalid_argument for empty sets, mismatched N or other offsets.
DfResult dual_frequency_estimate(const SampleSet& a, const SampleSet& b,
                                 const EstimatorConfig& config = {});

}  // namespace dfqpe
