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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dfqpe/window.hpp"

namespace dfqpe {

/// Outcome distribution f(y; phase) of windowed phase estimation, y = 0..N-1.
///
/// `offset` is the extra phase applied to the control register before the
/// inverse QFT (0 for plain QPE, pi/N for the half-cell shifted run). It
/// enters the likelihood only through phase + offset.
struct PhaseDistribution {
    std::size_t n_points = 0;
    double phase = 0.0;
    double offset = 0.0;
    std::vector<double> probs;
};

/// Outcome counts z_y, with total = sum of counts.
struct Histogram {
    std::size_t n_points = 0;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    static Histogram from_counts(std::vector<std::uint64_t> counts);
};

/// Measured outcomes together with the offset they were drawn under.
struct SampleSet {
    std::size_t n_points = 0;
    std::vector<std::uint32_t> outcomes;
    double offset = 0.0;
};

/// The half-cell frequency offset pi/N.
double half_cell_offset(std::size_t n_points);

/// probs_y = (1/N) |sum_n alpha_n exp(i n (phase + offset - 2 pi y / N))|^2.
///
/// The rectangular window uses the closed Dirichlet-kernel form; any other
/// window goes through a DFT of alpha_n exp(i n (phase + offset)). Tiny
/// negative roundoff is clamped to zero. Throws std::invalid_argument on a
/// non-finite phase or offset.
PhaseDistribution distribution(const WindowVector& window, double phase, double offset = 0.0);

/// The same probabilities by the literal O(N^2) double sum. Reference path
/// for tests and small-N cross checks.
std::vector<double> distribution_direct(const WindowVector& window, double phase,
                                        double offset = 0.0);

/// n_shots i.i.d. outcomes by inverse-CDF over dist.probs, driven by Rng(seed).
///
/// Identical (dist, n_shots, seed) give identical outcomes on every platform.
/// Throws std::invalid_argument for n_shots == 0 and std::domain_error when
/// the probabilities are all zero after clamping.
SampleSet sample(const PhaseDistribution& dist, std::size_t n_shots, std::uint64_t seed);

Histogram histogram(const SampleSet& samples);

/// counts_y = round(n_shots * probs_y); the total is whatever the rounded
/// counts add up to.
Histogram rounded_histogram(const PhaseDistribution& dist, std::uint64_t n_shots);

/// Throws std::invalid_argument unless every outcome lies in [0, N-1].
void validate(const SampleSet& samples);

}  // namespace dfqpe
