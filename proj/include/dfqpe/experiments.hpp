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
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dfqpe/estimators.hpp"
#include "dfqpe/fisher.hpp"
#include "dfqpe/window.hpp"

namespace dfqpe {

enum class EstimatorId { kMeanRect, kMeanCosine, kMeanBartlett, kAml, kDualFrequency };

/// "mean-rect" | "mean-cosine" | "mean-bartlett" | "aml" | "df".
std::string_view to_string(EstimatorId id);
EstimatorId parse_estimator_id(std::string_view id);
/// Window the estimator's samples are drawn with (rect for aml and df).
WindowKind estimator_window(EstimatorId id);

enum class ExperimentKind { kRmseVsShots, kRmseVsN, kScatter, kCrbCurve };

/// "rmse-vs-shots" | "rmse-vs-n" | "scatter" | "crb-curve".
std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view id);

struct PhasePolicy {
    enum class Kind {
        kUniform,        // continuous uniform on [0, 2 pi)
        kUniformInCell,  // stratified across [2 pi k / N, 2 pi (k+1) / N)
        kFixedList,      // trial t uses phases[t mod size]
    };
    Kind kind = Kind::kUniform;
    std::int64_t cell = 0;
    std::vector<double> phases;
};

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::kRmseVsShots;
    std::vector<EstimatorId> estimators;
    std::vector<WindowKind> windows;  // crb-curve only
    std::vector<std::size_t> n_list;
    std::vector<std::size_t> shots_list;
    std::size_t trials = 10000;
    std::uint64_t master_seed = 0;
    PhasePolicy phase_policy;
    bool allow_any_n = false;
    std::size_t threads = 0;  // 0: default_thread_count()
    std::size_t crb_grid = 256;
    EstimatorConfig config;
};

/// Throws std::invalid_argument when the spec cannot be run: empty lists,
/// trials == 0 (allowed for scatter), N < 2, N not a power of two without
/// allow_any_n, zero shots, fewer than 2 shots for df, or an empty fixed
/// phase list.
void validate(const ExperimentSpec& spec);

struct ExperimentRow {
    std::size_t n_points = 0;
    std::size_t n_shots = 0;
    std::string window;
    std::string estimator;
    double rmse = 0.0;
    double sqrt_crb = 0.0;
    std::size_t trials = 0;
    double wall_time = 0.0;  // seconds; excluded from deterministic output
};

struct ExperimentTable {
    ExperimentSpec spec;
    std::vector<ExperimentRow> rows;
};

struct ScatterRow {
    std::size_t n_points = 0;
    std::size_t n_shots = 0;
    std::string estimator;
    std::size_t trial = 0;
    double true_phase = 0.0;
    double signed_error = 0.0;  // wrapped to (-pi, pi]
};

struct ScatterTable {
    ExperimentSpec spec;
    std::vector<ScatterRow> rows;
};

/// QPE_THREADS if set to a positive integer, else hardware concurrency.
std::size_t default_thread_count();

/// Runs fn(i) for i in [0, count) on `threads` workers. fn must only write
/// state owned by index i.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

/// Pairwise (cascade) summation in index order.
double pairwise_sum(std::span<const double> values);

/// Phase for one trial under a policy. `u` is a uniform draw in [0, 1).
double policy_phase(const PhasePolicy& policy, std::size_t n_points, std::size_t trial,
                    std::size_t trials, double u);

/// One Monte-Carlo trial: draw the estimator's samples at `phase` and return
/// the signed wrap-aware error. Sample streams come from trial_seed.
double run_trial(EstimatorId estimator, std::size_t n_points, std::size_t n_shots, double phase,
                 std::uint64_t trial_seed, const EstimatorConfig& config = {});

/// Seeds for trial t of the (N, N_s) configuration of experiment family
/// `family` ("rmse" or "scatter"):
///   phase:     derive_seed(master, fnv1a64("<family>/N=<N>/Ns=<Ns>"), t)
///   estimator: derive_seed(master, fnv1a64("<family>/N=<N>/Ns=<Ns>/<estimator>"), t)
/// The phase stream is shared by all estimators (common random numbers).
std::uint64_t phase_stream_seed(std::uint64_t master, std::string_view family,
                                std::size_t n_points, std::size_t n_shots, std::size_t trial);
std::uint64_t estimator_stream_seed(std::uint64_t master, std::string_view family,
                                    std::size_t n_points, std::size_t n_shots,
                                    EstimatorId estimator, std::size_t trial);

/// RMSE per (N, N_s, estimator), rows ordered N, then N_s, then estimator.
/// Identical for either kind; the two names document the sweep axis.
ExperimentTable run_rmse_vs_shots(const ExperimentSpec& spec);
ExperimentTable run_rmse_vs_n(const ExperimentSpec& spec);

/// One row per (N, N_s, estimator, trial).
ScatterTable run_scatter(const ExperimentSpec& spec);

/// sqrt-CRB rows for every window, N and N_s. x is N when the spec sweeps
/// several N at a single N_s, N_s otherwise.
CrbCurve run_crb_curve(const ExperimentSpec& spec);

enum class SlopeAxis { kShots, kRecordLength };

/// Ordinary least-squares slope of log(y) on log(x). Throws
/// std::invalid_argument for fewer than 3 points, mismatched lengths or
/// nonpositive values.
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

/// Slope of log(rmse) against log(N_s) or log(N) over rows passing `filter`.
double fit_loglog_slope(std::span<const ExperimentRow> rows, SlopeAxis axis,
                        const std::function<bool(const ExperimentRow&)>& filter = {});

}  // namespace dfqpe
