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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "dfqpe/angles.hpp"
#include "dfqpe/estimators.hpp"
#include "dfqpe/qpe_model.hpp"
#include "dfqpe/window.hpp"

namespace dfqpe {
namespace {

Histogram single_bin(std::size_t n, std::size_t k, std::uint64_t count) {
    std::vector<std::uint64_t> c(n, 0);
    c[k] = count;
    return Histogram::from_counts(c);
}

struct DrawnPair {
    SampleSet plain, shifted;
};

DrawnPair draw_pair(std::size_t n, double phase, std::size_t shots, std::uint64_t seed) {
    auto w = make_rectangular(n);
    const double half = half_cell_offset(n);
    return {sample(distribution(w, phase, 0.0), (shots + 1) / 2, seed),
            sample(distribution(w, phase, half), shots / 2, seed ^ 0x9e3779b97f4a7c15ULL)};
}

TEST(Sinc, Values) {
    EXPECT_EQ(sinc(0.0), 1.0);
    EXPECT_NEAR(sinc(0.5), 2.0 / kPi, 1e-16);
    EXPECT_NEAR(sinc(1.0), 0.0, 1e-16);
    EXPECT_NEAR(sinc(-0.5), sinc(0.5), 0.0);
}

TEST(CircularMean, Examples) {
    SampleSet s{8, std::vector<std::uint32_t>(7, 5), 0.0};
    EXPECT_NEAR(*circular_sample_mean(s), kTwoPi * 5 / 8, 1e-15);

    SampleSet wrap{100, {0, 99, 0, 99, 0, 99}, 0.0};
    EXPECT_NEAR(*circular_sample_mean(wrap), kTwoPi * 99.5 / 100, 1e-12);

    const double phase = cell_width(128) * 41;
    auto h = histogram(sample(distribution(make_rectangular(128), phase), 10000, 5));
    EXPECT_NEAR(*circular_sample_mean(h), phase, 1e-12);
}

TEST(CircularMean, AntipodalIsUndefined) {
    SampleSet s{8, {0, 4, 0, 4}, 0.0};
    EXPECT_FALSE(circular_sample_mean(s).has_value());
    EXPECT_FALSE(circular_sample_mean(SampleSet{8, {}, 0.0}).has_value());
}

TEST(RoughEstimate, PeakAndTies) {
    std::vector<std::uint64_t> c{0, 1, 0, 5, 2, 0, 0, 0};
    EXPECT_NEAR(rough_estimate(Histogram::from_counts(c)), kTwoPi * 3 / 8, 1e-15);

    std::vector<std::uint64_t> tie{0, 0, 4, 0, 0, 4, 0, 0};
    EXPECT_EQ(peak_bin(Histogram::from_counts(tie)), 2u);

    std::vector<std::uint64_t> lean{0, 0, 4, 0, 1, 4, 2, 0};
    EXPECT_EQ(peak_bin(Histogram::from_counts(lean)), 2u);

    EXPECT_THROW(rough_estimate(Histogram::from_counts(std::vector<std::uint64_t>(8, 0))),
                 std::invalid_argument);
}

TEST(RoughEstimate, MidCellPeakIsMainlobe) {
    const double phase = kTwoPi * 10.5 / 100;
    auto dist = distribution(make_rectangular(100), phase);
    int hits = 0;
    const int reps = 2000;
    for (int r = 0; r < reps; ++r) {
        auto k = peak_bin(histogram(sample(dist, 30, 1000 + r)));
        hits += (k == 10 || k == 11);
    }
    EXPECT_GT(hits, 0.99 * reps);
}

TEST(StrongestBins, OrderAndTies) {
    std::vector<std::uint64_t> c{3, 1, 3, 7, 0, 1};
    auto h = Histogram::from_counts(c);
    EXPECT_EQ(strongest_bins(h, 3), (std::vector<std::size_t>{3, 0, 2}));
    EXPECT_EQ(strongest_bins(h, 5), (std::vector<std::size_t>{3, 0, 2, 1, 5}));
    EXPECT_EQ(strongest_bins(h, 10).size(), 6u);
}

TEST(AmlObjective, Examples) {
    const std::size_t n = 16;
    const EstimatorConfig cfg;
    auto h = single_bin(n, 5, 7);
    EXPECT_EQ(aml_objective(h, cell_width(n) * 5, 0.0, cfg), 0.0);
    EXPECT_NEAR(aml_objective(h, cell_width(n) * 6, 0.0, cfg), 7 * std::log(1e-12), 1e-9);
    // Offset enters through phase + offset only.
    EXPECT_EQ(aml_objective(h, cell_width(n) * 4.5, cell_width(n) * 0.5, cfg), 0.0);

    std::vector<std::uint64_t> c(n, 0);
    c[5] = c[6] = 4;
    auto two = Histogram::from_counts(c);
    EXPECT_NEAR(aml_objective(two, cell_width(n) * 5.5, 0.0, cfg), 8 * std::log(2.0 / kPi), 1e-12);
}

TEST(AmlObjective, CircularDisplacement) {
    const std::size_t n = 16;
    auto h = single_bin(n, 0, 3);
    // Bin 0 sits half a cell above phase 2 pi (15.5 / 16), not 15.5 cells away.
    EXPECT_NEAR(aml_objective(h, cell_width(n) * 15.5, 0.0, {}), 3 * std::log(2.0 / kPi), 1e-12);
}

TEST(AmlEstimate, NoiselessOnGrid) {
    for (std::size_t k : {0u, 17u, 127u}) {
        auto r = aml_estimate(single_bin(128, k, 50), 0.0);
        EXPECT_NEAR(r.refined, cell_width(128) * k, 1e-15);
        EXPECT_EQ(r.correction, 0.0);
        EXPECT_EQ(r.rough, cell_width(128) * k);
    }
}

TEST(AmlEstimate, GridRule) {
    EstimatorConfig cfg;
    EXPECT_EQ(cfg.grid_points(1), 9u);
    EXPECT_EQ(cfg.grid_points(15), 17u);  // ceil(4 sqrt 15) = 16, forced odd
    EXPECT_EQ(cfg.grid_points(30), 23u);
    EXPECT_EQ(cfg.grid_points(100), 41u);
    cfg.grid_scale = 1.0;
    EXPECT_EQ(cfg.grid_points(30), 9u);
    EXPECT_EQ(cfg.grid_points(400), 21u);
    for (std::uint64_t s = 1; s < 5000; s += 7) {
        ASSERT_EQ(EstimatorConfig{}.grid_points(s) % 2, 1u);
        ASSERT_GE(EstimatorConfig{}.grid_points(s), 9u);
    }
}

TEST(AmlEstimate, ConfigValidation) {
    EstimatorConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.bins_kept = 1;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.grid_min = 2;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.sinc_floor = 0.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(AmlEstimate, CorrectionStaysInsideSearchInterval) {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> uni(0.0, kTwoPi);
    for (std::size_t n : {16u, 100u, 128u}) {
        auto w = make_rectangular(n);
        for (int rep = 0; rep < 200; ++rep) {
            const double offset = rep % 2 ? half_cell_offset(n) : 0.0;
            auto h = histogram(sample(distribution(w, uni(gen), offset), 1 + rep % 60, rep));
            auto r = aml_estimate(h, offset);
            ASSERT_LE(std::abs(r.correction), cell_width(n) * (1 + 1e-12));
            ASSERT_GE(r.refined, 0.0);
            ASSERT_LT(r.refined, kTwoPi);
            ASSERT_LE(circular_distance(r.refined, r.rough), cell_width(n) * (1 + 1e-12));
        }
    }
}

TEST(AmlEstimate, MidCellAccuracy) {
    const std::size_t n = 100, shots = 30;
    std::mt19937_64 gen(32);
    std::uniform_real_distribution<double> uni(kTwoPi * 10.3 / 100, kTwoPi * 10.7 / 100);
    const double bound = 5 * kTwoPi / (100 * std::sqrt(30.0));
    int good = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        const double phase = uni(gen);
        auto h = histogram(sample(distribution(make_rectangular(n), phase), shots, gen()));
        good += circular_distance(aml_estimate(h, 0.0).refined, phase) < bound;
    }
    EXPECT_GE(good, 0.9 * trials);
}

TEST(AmlEstimate, NearGridMirrorErrors) {
    const std::size_t n = 100, shots = 30;
    const double phase = kTwoPi * 10.05 / 100;
    const double mirror = kTwoPi * 9.95 / 100;
    auto dist = distribution(make_rectangular(n), phase);
    int near_mirror = 0;
    for (int t = 0; t < 1000; ++t) {
        auto r = aml_estimate(histogram(sample(dist, shots, 5000 + t)), 0.0);
        near_mirror += circular_distance(r.refined, mirror) < circular_distance(r.refined, phase);
    }
    EXPECT_GT(near_mirror, 0);
}

// Exhaustive maximum likelihood over a fine phase grid with the exact
// likelihood: the sinc surrogate should land within a couple of grid steps.
TEST(AmlEstimate, AgreesWithExactMaximumLikelihood) {
    const std::size_t n = 32, shots = 2000;
    auto w = make_rectangular(n);
    std::mt19937_64 gen(33);
    std::uniform_real_distribution<double> uni(0.0, kTwoPi);
    const int fine = 1 << 15;
    for (int rep = 0; rep < 10; ++rep) {
        const double phase = cell_width(n) * (std::floor(uni(gen) / cell_width(n)) + 0.25 + 0.5 * (rep % 2));
        auto h = histogram(sample(distribution(w, phase), shots, gen()));
        double best = -1e300, ml = 0.0;
        for (int i = 0; i < fine; ++i) {
            const double p = kTwoPi * i / fine;
            const auto probs = distribution(w, p).probs;
            double ll = 0.0;
            for (std::size_t y = 0; y < n; ++y) {
                if (h.counts[y]) ll += static_cast<double>(h.counts[y]) * std::log(std::max(probs[y], 1e-300));
            }
            if (ll > best) best = ll, ml = p;
        }
        auto r = aml_estimate(h, 0.0);
        const double step = 2 * cell_width(n) / static_cast<double>(r.grid_points);
        EXPECT_LT(circular_distance(r.refined, ml), 2 * step) << rep;
    }
}

TEST(DualFrequency, MirrorStructure) {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> uni(0.0, kTwoPi);
    for (int rep = 0; rep < 200; ++rep) {
        auto p = draw_pair(128, uni(gen), 2 + rep % 50, rep);
        auto r = dual_frequency_estimate(p.plain, p.shifted);
        const auto& u = r.candidates.u;
        EXPECT_NEAR(circular_distance(u[0] + u[1], 2 * r.set1.rough), 0.0, 1e-12);
        EXPECT_NEAR(circular_distance(u[2] + u[3], 2 * r.rough2_shifted), 0.0, 1e-12);
        EXPECT_NEAR(circular_distance(r.rough2_shifted, r.set2.rough - half_cell_offset(128)), 0.0, 1e-15);
        for (double x : u) {
            ASSERT_GE(x, 0.0);
            ASSERT_LT(x, kTwoPi);
        }
        ASSERT_GE(r.estimate, 0.0);
        ASSERT_LT(r.estimate, kTwoPi);
        ASSERT_LT(r.pair.first, 2u);
        ASSERT_GE(r.pair.second, 2u);
    }
}

TEST(DualFrequency, PicksClosestCrossPair) {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> uni(0.0, kTwoPi);
    for (int rep = 0; rep < 100; ++rep) {
        auto p = draw_pair(64, uni(gen), 20, rep);
        auto r = dual_frequency_estimate(p.plain, p.shifted);
        const auto& u = r.candidates.u;
        const double chosen = circular_distance(u[r.pair.first], u[r.pair.second]);
        for (std::size_t i : {0u, 1u})
            for (std::size_t j : {2u, 3u}) ASSERT_LE(chosen, circular_distance(u[i], u[j]));
        EXPECT_NEAR(r.estimate, circular_midpoint(u[r.pair.first], u[r.pair.second]), 0.0);
    }
}

TEST(DualFrequency, NoiselessLimit) {
    const double phase = kTwoPi * 41.5 / 128;
    auto p = draw_pair(128, phase, 20000, 7);
    auto r = dual_frequency_estimate(p.plain, p.shifted);
    EXPECT_LT(circular_distance(r.estimate, phase), kTwoPi / (128 * 50));
}

TEST(DualFrequency, OnGrid) {
    for (std::size_t k : {0u, 5u, 64u, 127u}) {
        const double phase = cell_width(128) * k;
        auto p = draw_pair(128, phase, 30, k);
        auto r = dual_frequency_estimate(p.plain, p.shifted);
        const double step = 2 * cell_width(128) / static_cast<double>(r.set1.grid_points);
        EXPECT_LE(circular_distance(r.estimate, phase), step) << k;
    }
}

TEST(DualFrequency, NoLargeErrorsAcrossCell) {
    const std::size_t n = 100, shots = 30, trials = 2000;
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const double phase = cell_width(n) * (10.0 + (t + 0.5) / trials);
        auto p = draw_pair(n, phase, shots, 77 + t);
        worst = std::max(worst, circular_distance(dual_frequency_estimate(p.plain, p.shifted).estimate, phase));
    }
    EXPECT_LT(worst, 1.5 * cell_width(n));
}

TEST(DualFrequency, OffsetTravelsWithTheSet) {
    std::mt19937_64 gen(43);
    std::uniform_real_distribution<double> uni(0.0, kTwoPi);
    for (int rep = 0; rep < 50; ++rep) {
        auto p = draw_pair(128, uni(gen), 30, rep);
        auto a = dual_frequency_estimate(p.plain, p.shifted);
        auto b = dual_frequency_estimate(p.shifted, p.plain);
        EXPECT_EQ(a.estimate, b.estimate);
        // Relabelling the offsets without moving the data changes the answer
        // (or is rejected), so position alone carries no meaning.
        SampleSet mislabeled = p.plain;
        mislabeled.offset = 0.3;
        EXPECT_THROW(dual_frequency_estimate(mislabeled, p.shifted), std::invalid_argument);
    }
}

TEST(DualFrequency, Errors) {
    SampleSet empty{8, {}, 0.0};
    SampleSet ok{8, {1, 2}, half_cell_offset(8)};
    EXPECT_THROW(dual_frequency_estimate(empty, ok), std::invalid_argument);
    SampleSet other{16, {1}, 0.0};
    EXPECT_THROW(dual_frequency_estimate(other, ok), std::invalid_argument);
    SampleSet both_plain{8, {1}, 0.0};
    EXPECT_THROW(dual_frequency_estimate(both_plain, SampleSet{8, {2}, 0.0}), std::invalid_argument);
}

struct Coincidence {
    int close_pairs = 0;
    double pair_gap = 0.0;        // closest cross pair, in grid steps
    double midpoint_error = 0.0;  // in grid steps
};

// Noiseless rounded histograms at N = 128; distances in units of one grid
// step 4 pi / (N N_g).
Coincidence coincidence(double phase, const EstimatorConfig& cfg, bool shift_u4 = false) {
    const std::size_t n = 128, shots = 100000;
    auto w = make_rectangular(n);
    auto h1 = rounded_histogram(distribution(w, phase, 0.0), shots);
    auto h2 = rounded_histogram(distribution(w, phase, half_cell_offset(n)), shots);
    auto r = dual_frequency_estimate(h1, h2, cfg);
    auto u = r.candidates.u;
    if (shift_u4) u[3] = wrap_2pi(u[3] + cell_width(n));
    const double tol = 4 * kPi / (n * static_cast<double>(r.set1.grid_points));
    Coincidence c;
    double best = 1e9;
    std::size_t bi = 0, bj = 2;
    for (std::size_t i : {0u, 1u}) {
        for (std::size_t j : {2u, 3u}) {
            const double d = circular_distance(u[i], u[j]);
            c.close_pairs += d <= tol;
            if (d < best) best = d, bi = i, bj = j;
        }
    }
    c.pair_gap = best / tol;
    c.midpoint_error = circular_distance(circular_midpoint(u[bi], u[bj]), phase) / tol;
    return c;
}

// Surrogate without bin truncation and with a sqrt(N_s) grid: its per-set
// bias is below one grid step, so only the frame convention is under test.
EstimatorConfig unbiased_config() {
    EstimatorConfig cfg;
    cfg.bins_kept = 128;
    cfg.grid_scale = 1.0;
    return cfg;
}

TEST(DualFrequency, CoincidenceInvariant) {
    std::mt19937_64 gen(44);
    std::uniform_real_distribution<double> uni(0.0, kTwoPi);
    for (int rep = 0; rep < 50; ++rep) {
        const double phase = uni(gen);
        auto c = coincidence(phase, unbiased_config());
        EXPECT_EQ(c.close_pairs, 1) << phase;
        EXPECT_LE(c.midpoint_error, 1.0) << phase;
    }
}

// Keeping 8 bins biases each set's refinement in opposite directions; the
// matched pair drifts apart but the midpoint stays put.
TEST(DualFrequency, TruncatedSurrogateKeepsMidpoint) {
    std::mt19937_64 gen(45);
    std::uniform_real_distribution<double> uni(0.0, kTwoPi);
    for (int rep = 0; rep < 50; ++rep) {
        const double phase = uni(gen);
        auto c = coincidence(phase, EstimatorConfig{});
        EXPECT_LE(c.midpoint_error, 1.0) << phase;
    }
}

// With u4 shifted by a full cell the mirror pair of set 2 collides with a
// set-1 candidate for phases in the upper half of a cell.
TEST(DualFrequency, ShiftedFourthCandidateBreaksInvariant) {
    int violations = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const double phase = cell_width(128) * (37 + 0.55 + 0.4 * rep / 20.0);
        auto c = coincidence(phase, unbiased_config(), true);
        violations += c.close_pairs != 1 || c.midpoint_error > 1.0;
    }
    EXPECT_GT(violations, 0);
}

}  // namespace
}  // namespace dfqpe
