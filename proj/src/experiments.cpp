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

#include "dfqpe/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>

#include "dfqpe/angles.hpp"
#include "dfqpe/detail/dft.hpp"
#include "dfqpe/qpe_model.hpp"
#include "dfqpe/rng.hpp"

namespace dfqpe {
namespace {

constexpr std::string_view kRmseFamily = "rmse";
constexpr std::string_view kScatterFamily = "scatter";

std::string config_label(std::string_view family, std::size_t n_points, std::size_t n_shots) {
    return std::string(family) + "/N=" + std::to_string(n_points) + "/Ns=" +
           std::to_string(n_shots);
}

double estimate_from_histogram_mean(const Histogram& hist) {
    // A vanishing resultant has no circular mean; fall back to the peak bin.
    if (auto m = circular_sample_mean(hist)) return *m;
    return rough_estimate(hist);
}

// Phase stream draw for a trial, then the policy mapping.
double trial_phase(const ExperimentSpec& spec, std::string_view family, std::size_t n_points,
                   std::size_t n_shots, std::size_t trial) {
    Rng rng(phase_stream_seed(spec.master_seed, family, n_points, n_shots, trial));
    return policy_phase(spec.phase_policy, n_points, trial, spec.trials, rng.uniform01());
}

std::size_t resolve_threads(std::size_t requested) {
    return requested == 0 ? default_thread_count() : requested;
}

}  // namespace

std::string_view to_string(EstimatorId id) {
    switch (id) {
        case EstimatorId::kMeanRect: return "mean-rect";
        case EstimatorId::kMeanCosine: return "mean-cosine";
        case EstimatorId::kMeanBartlett: return "mean-bartlett";
        case EstimatorId::kAml: return "aml";
        case EstimatorId::kDualFrequency: return "df";
    }
    return "unknown";
}

EstimatorId parse_estimator_id(std::string_view id) {
    for (auto e : {EstimatorId::kMeanRect, EstimatorId::kMeanCosine, EstimatorId::kMeanBartlett,
                   EstimatorId::kAml, EstimatorId::kDualFrequency}) {
        if (id == to_string(e)) return e;
    }
    throw std::invalid_argument("unknown estimator '" + std::string(id) +
                                "' (expected mean-rect, mean-cosine, mean-bartlett, aml or df)");
}

WindowKind estimator_window(EstimatorId id) {
    switch (id) {
        case EstimatorId::kMeanCosine: return WindowKind::kCosine;
        case EstimatorId::kMeanBartlett: return WindowKind::kBartlett;
        default: return WindowKind::kRectangular;
    }
}

std::string_view to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::kRmseVsShots: return "rmse-vs-shots";
        case ExperimentKind::kRmseVsN: return "rmse-vs-n";
        case ExperimentKind::kScatter: return "scatter";
        case ExperimentKind::kCrbCurve: return "crb-curve";
    }
    return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view id) {
    for (auto k : {ExperimentKind::kRmseVsShots, ExperimentKind::kRmseVsN,
                   ExperimentKind::kScatter, ExperimentKind::kCrbCurve}) {
        if (id == to_string(k)) return k;
    }
    throw std::invalid_argument("unknown experiment kind '" + std::string(id) + "'");
}

void validate(const ExperimentSpec& spec) {
    if (spec.n_list.empty()) throw std::invalid_argument("experiment needs at least one N");
    if (spec.shots_list.empty()) throw std::invalid_argument("experiment needs at least one N_s");
    if (spec.kind == ExperimentKind::kCrbCurve) {
        if (spec.windows.empty()) throw std::invalid_argument("crb-curve needs at least one window");
    } else if (spec.estimators.empty()) {
        throw std::invalid_argument("experiment needs at least one estimator");
    }
    if (spec.trials == 0 && spec.kind != ExperimentKind::kScatter &&
        spec.kind != ExperimentKind::kCrbCurve) {
        throw std::invalid_argument("trials must be at least 1");
    }
    for (std::size_t n : spec.n_list) {
        if (n < 2) throw std::invalid_argument("record length must be at least 2");
        if (!spec.allow_any_n && !detail::is_power_of_two(n)) {
            throw std::invalid_argument("record length " + std::to_string(n) +
                                        " is not a power of two (set allow_any_n to override)");
        }
    }
    const bool has_df = std::find(spec.estimators.begin(), spec.estimators.end(),
                                  EstimatorId::kDualFrequency) != spec.estimators.end();
    for (std::size_t s : spec.shots_list) {
        if (s == 0) throw std::invalid_argument("N_s must be at least 1");
        if (has_df && s < 2) throw std::invalid_argument("df needs N_s >= 2 to fill both sets");
    }
    if (spec.phase_policy.kind == PhasePolicy::Kind::kFixedList) {
        if (spec.phase_policy.phases.empty()) throw std::invalid_argument("fixed phase list is empty");
        for (double p : spec.phase_policy.phases) {
            if (!std::isfinite(p)) throw std::invalid_argument("fixed phase list has a non-finite entry");
        }
    }
    spec.config.validate();
}

std::size_t default_thread_count() {
    if (const char* env = std::getenv("QPE_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double policy_phase(const PhasePolicy& policy, std::size_t n_points, std::size_t trial,
                    std::size_t trials, double u) {
    switch (policy.kind) {
        case PhasePolicy::Kind::kUniform:
            return kTwoPi * u;
        case PhasePolicy::Kind::kUniformInCell: {
            const double within = (static_cast<double>(trial) + u) /
                                  static_cast<double>(std::max<std::size_t>(trials, 1));
            return wrap_2pi(cell_width(n_points) * (static_cast<double>(policy.cell) + within));
        }
        case PhasePolicy::Kind::kFixedList:
            return policy.phases.at(trial % policy.phases.size());
    }
    return 0.0;
}

double run_trial(EstimatorId estimator, std::size_t n_points, std::size_t n_shots, double phase,
                 std::uint64_t trial_seed, const EstimatorConfig& config) {
    const auto window = make_window(estimator_window(estimator), n_points);
    const std::uint64_t seed1 = mix64(trial_seed ^ 1);
    const std::uint64_t seed2 = mix64(trial_seed ^ 2);
    double estimate = 0.0;
    switch (estimator) {
        case EstimatorId::kMeanRect:
        case EstimatorId::kMeanCosine:
        case EstimatorId::kMeanBartlett: {
            auto samples = sample(distribution(window, phase), n_shots, seed1);
            estimate = estimate_from_histogram_mean(histogram(samples));
            break;
        }
        case EstimatorId::kAml: {
            auto samples = sample(distribution(window, phase), n_shots, seed1);
            estimate = aml_estimate(histogram(samples), 0.0, config).refined;
            break;
        }
        case EstimatorId::kDualFrequency: {
            const std::size_t n1 = (n_shots + 1) / 2;
            const std::size_t n2 = n_shots / 2;
            auto plain = sample(distribution(window, phase, 0.0), n1, seed1);
            auto shifted =
                sample(distribution(window, phase, half_cell_offset(n_points)), n2, seed2);
            estimate = dual_frequency_estimate(plain, shifted, config).estimate;
            break;
        }
    }
    return signed_circular_error(estimate, phase);
}

std::uint64_t phase_stream_seed(std::uint64_t master, std::string_view family,
                                std::size_t n_points, std::size_t n_shots, std::size_t trial) {
    return derive_seed(master, fnv1a64(config_label(family, n_points, n_shots)), trial);
}

std::uint64_t estimator_stream_seed(std::uint64_t master, std::string_view family,
                                    std::size_t n_points, std::size_t n_shots,
                                    EstimatorId estimator, std::size_t trial) {
    const std::string label =
        config_label(family, n_points, n_shots) + "/" + std::string(to_string(estimator));
    return derive_seed(master, fnv1a64(label), trial);
}

namespace {

ExperimentTable run_rmse(const ExperimentSpec& spec) {
    validate(spec);
    const std::size_t threads = resolve_threads(spec.threads);
    ExperimentTable table{spec, {}};
    std::map<std::pair<WindowKind, std::size_t>, double> inverse_fisher;

    for (std::size_t n_points : spec.n_list) {
        for (std::size_t n_shots : spec.shots_list) {
            for (EstimatorId est : spec.estimators) {
                const auto start = std::chrono::steady_clock::now();
                std::vector<double> squared(spec.trials);
                parallel_for(spec.trials, threads, [&](std::size_t t) {
                    const double phase = trial_phase(spec, kRmseFamily, n_points, n_shots, t);
                    const auto seed = estimator_stream_seed(spec.master_seed, kRmseFamily,
                                                            n_points, n_shots, est, t);
                    const double err = run_trial(est, n_points, n_shots, phase, seed, spec.config);
                    squared[t] = err * err;
                });
                const double mse = pairwise_sum(squared) / static_cast<double>(spec.trials);

                const WindowKind wk = estimator_window(est);
                auto key = std::make_pair(wk, n_points);
                auto it = inverse_fisher.find(key);
                if (it == inverse_fisher.end()) {
                    it = inverse_fisher
                             .emplace(key, avg_inverse_fisher(make_window(wk, n_points),
                                                              spec.crb_grid))
                             .first;
                }
                const double elapsed =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

                table.rows.push_back({n_points, n_shots, std::string(to_string(wk)),
                                      std::string(to_string(est)), std::sqrt(mse),
                                      std::sqrt(it->second / static_cast<double>(n_shots)),
                                      spec.trials, elapsed});
            }
        }
    }
    return table;
}

}  // namespace

ExperimentTable run_rmse_vs_shots(const ExperimentSpec& spec) { return run_rmse(spec); }

ExperimentTable run_rmse_vs_n(const ExperimentSpec& spec) { return run_rmse(spec); }

ScatterTable run_scatter(const ExperimentSpec& spec) {
    validate(spec);
    const std::size_t threads = resolve_threads(spec.threads);
    ScatterTable table{spec, {}};
    for (std::size_t n_points : spec.n_list) {
        for (std::size_t n_shots : spec.shots_list) {
            for (EstimatorId est : spec.estimators) {
                std::vector<ScatterRow> rows(spec.trials);
                parallel_for(spec.trials, threads, [&](std::size_t t) {
                    const double phase = trial_phase(spec, kScatterFamily, n_points, n_shots, t);
                    const auto seed = estimator_stream_seed(spec.master_seed, kScatterFamily,
                                                            n_points, n_shots, est, t);
                    rows[t] = {n_points,
                               n_shots,
                               std::string(to_string(est)),
                               t,
                               phase,
                               run_trial(est, n_points, n_shots, phase, seed, spec.config)};
                });
                table.rows.insert(table.rows.end(), std::make_move_iterator(rows.begin()),
                                  std::make_move_iterator(rows.end()));
            }
        }
    }
    return table;
}

CrbCurve run_crb_curve(const ExperimentSpec& spec) {
    validate(spec);
    const bool sweep_n = spec.n_list.size() > 1 && spec.shots_list.size() == 1;
    CrbCurve curve;
    for (WindowKind wk : spec.windows) {
        for (std::size_t n_points : spec.n_list) {
            const double inv_fi = avg_inverse_fisher(make_window(wk, n_points), spec.crb_grid);
            for (std::size_t n_shots : spec.shots_list) {
                curve.push_back({n_points, n_shots,
                                 static_cast<double>(sweep_n ? n_points : n_shots),
                                 std::string(to_string(wk)),
                                 std::sqrt(inv_fi / static_cast<double>(n_shots))});
            }
        }
    }
    return curve;
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("slope fit: x and y lengths differ");
    if (x.size() < 3) throw std::invalid_argument("slope fit needs at least 3 points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw std::invalid_argument("slope fit needs strictly positive values");
        }
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx == 0.0) throw std::invalid_argument("slope fit needs at least two distinct x values");
    return sxy / sxx;
}

double fit_loglog_slope(std::span<const ExperimentRow> rows, SlopeAxis axis,
                        const std::function<bool(const ExperimentRow&)>& filter) {
    std::vector<double> x, y;
    for (const auto& row : rows) {
        if (filter && !filter(row)) continue;
        x.push_back(static_cast<double>(axis == SlopeAxis::kShots ? row.n_shots : row.n_points));
        y.push_back(row.rmse);
    }
    return fit_loglog_slope(x, y);
}

}  // namespace dfqpe
