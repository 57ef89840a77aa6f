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

#include "dfqpe/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dfqpe/angles.hpp"
#include "dfqpe/detail/dft.hpp"
#include "dfqpe/estimators.hpp"
#include "dfqpe/experiments.hpp"
#include "dfqpe/fisher.hpp"
#include "dfqpe/io.hpp"
#include "dfqpe/qpe_model.hpp"
#include "dfqpe/rng.hpp"
#include "dfqpe/window.hpp"

namespace dfqpe::cli {
namespace {

using nlohmann::json;

constexpr int kMaxQubits = 24;

const std::vector<std::size_t> kDefaultShots = {2,  4,  6,  8,  10, 12, 14, 16, 18, 20,
                                              24, 30, 40, 50, 60, 70, 80, 90, 100};
const std::vector<std::size_t> kDefaultRecordLengths = {64, 128, 256, 512, 1024};

std::size_t qubits_to_n(int m) {
    if (m < 1 || m > kMaxQubits) {
        throw UsageError("qubit count must lie in [1, " + std::to_string(kMaxQubits) + "]");
    }
    return std::size_t{1} << m;
}

void check_n(std::size_t n, bool allow_any_n) {
    if (n < 2) throw UsageError("record length must be at least 2");
    if (!allow_any_n && !detail::is_power_of_two(n)) {
        throw UsageError("record length " + std::to_string(n) +
                         " is not a power of two; pass --allow-any-n to override");
    }
}

/// N list for sweeps; falls back to a single N, then to `fallback`.
std::vector<std::size_t> resolve_n_list(const CliConfig& c, std::vector<std::size_t> fallback) {
    const int given = (c.qubits ? 1 : 0) + (c.record_length ? 1 : 0) +
                      (c.qubits_list.empty() ? 0 : 1) + (c.record_lengths.empty() ? 0 : 1);
    if (given > 1) {
        throw UsageError("give exactly one of --qubits, --record-length, --qubits-list, "
                         "--record-lengths");
    }
    std::vector<std::size_t> out;
    if (c.qubits || c.record_length) {
        out.push_back(resolve_record_length(c));
    } else if (!c.qubits_list.empty()) {
        for (int m : c.qubits_list) out.push_back(qubits_to_n(m));
    } else if (!c.record_lengths.empty()) {
        out = c.record_lengths;
    } else {
        out = std::move(fallback);
    }
    for (std::size_t n : out) check_n(n, c.allow_any_n);
    return out;
}

double resolve_phase(const CliConfig& c, bool required) {
    if (c.phase_frac && c.phase_rad) throw UsageError("give only one of --phase-frac, --phase-rad");
    if (c.phase_frac) return kTwoPi * *c.phase_frac;
    if (c.phase_rad) return *c.phase_rad;
    if (required) throw UsageError("a phase is required (--phase-frac or --phase-rad)");
    return 0.0;
}

io::Format output_format(const CliConfig& c) {
    try {
        return io::parse_format(c.format);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

io::Format input_format(const CliConfig& c) {
    if (!c.input_format.empty()) {
        try {
            return io::parse_format(c.input_format);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    return std::filesystem::path(c.input).extension() == ".json" ? io::Format::kJson
                                                                 : io::Format::kCsv;
}

WindowVector build_window(const CliConfig& c, std::size_t n_points) {
    WindowKind kind;
    try {
        kind = parse_window_kind(c.window);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (kind != WindowKind::kCustom) {
        if (!c.weights_file.empty()) throw UsageError("--weights-file needs --window custom");
        return make_window(kind, n_points);
    }
    if (c.weights_file.empty()) throw UsageError("--window custom needs --weights-file");
    std::ifstream in(c.weights_file);
    if (!in) throw std::runtime_error("cannot open weights file '" + c.weights_file + "'");
    const auto format = std::filesystem::path(c.weights_file).extension() == ".json"
                            ? io::Format::kJson
                            : io::Format::kCsv;
    auto window = make_custom(io::read_weights(in, format));
    if (window.n_points() != n_points) {
        throw std::runtime_error("weights file has " + std::to_string(window.n_points()) +
                                 " entries but N = " + std::to_string(n_points));
    }
    return window;
}

EstimatorConfig estimator_config(const CliConfig& c) {
    EstimatorConfig cfg;
    cfg.bins_kept = c.bins_kept;
    cfg.grid_min = c.grid_min;
    cfg.grid_scale = c.grid_scale;
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

template <typename Fn>
void with_output(const CliConfig& c, std::ostream& out, Fn&& fn) {
    if (c.output.empty()) {
        fn(out);
        return;
    }
    std::ofstream file(c.output, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file '" + c.output + "'");
    fn(file);
    if (!file) throw std::runtime_error("failed writing '" + c.output + "'");
}

void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& fn) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file '" + path.string() + "'");
    fn(file);
}

// Subcommands -------------------------------------------------------------

void run_window(const CliConfig& c, std::ostream& out) {
    const auto window = build_window(c, resolve_record_length(c));
    with_output(c, out, [&](std::ostream& o) { io::write_window(o, window, output_format(c)); });
}

void run_dist(const CliConfig& c, std::ostream& out) {
    const std::size_t n = resolve_record_length(c);
    const auto window = build_window(c, n);
    const double phase = resolve_phase(c, true);
    const double offset = c.half_cell ? half_cell_offset(n) : c.offset_rad;
    const auto dist = distribution(window, phase, offset);
    with_output(c, out, [&](std::ostream& o) {
        io::write_distribution(o, dist, to_string(window.kind()), output_format(c));
    });
}

void run_sample(const CliConfig& c, std::ostream& out, std::ostream& err) {
    const std::size_t n = resolve_record_length(c);
    const auto window = build_window(c, n);
    const double phase = resolve_phase(c, true);
    if (c.shots == 0) throw UsageError("--shots must be at least 1");
    err << "seed: " << c.seed << '\n';

    std::vector<SampleSet> sets;
    if (c.dual) {
        if (c.shots < 2) throw UsageError("--dual needs --shots >= 2");
        sets.push_back(sample(distribution(window, phase, 0.0), (c.shots + 1) / 2, mix64(c.seed ^ 1)));
        sets.push_back(sample(distribution(window, phase, half_cell_offset(n)), c.shots / 2,
                              mix64(c.seed ^ 2)));
    } else {
        const double offset = c.half_cell ? half_cell_offset(n) : c.offset_rad;
        sets.push_back(sample(distribution(window, phase, offset), c.shots, c.seed));
    }
    with_output(c, out, [&](std::ostream& o) { io::write_samples(o, sets, c.seed, output_format(c)); });
}

std::vector<WindowKind> parse_windows(const std::vector<std::string>& ids,
                                      std::vector<WindowKind> fallback) {
    if (ids.empty()) return fallback;
    std::vector<WindowKind> out;
    for (const auto& id : ids) {
        try {
            out.push_back(parse_window_kind(id));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (out.back() == WindowKind::kCustom) throw UsageError("CRB curves take named windows only");
    }
    return out;
}

std::vector<EstimatorId> parse_estimators(const std::vector<std::string>& ids,
                                          std::vector<EstimatorId> fallback) {
    if (ids.empty()) return fallback;
    std::vector<EstimatorId> out;
    for (const auto& id : ids) {
        try {
            out.push_back(parse_estimator_id(id));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    return out;
}

void run_crb(const CliConfig& c, std::ostream& out) {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::kCrbCurve;
    spec.windows = parse_windows(c.windows, {WindowKind::kRectangular, WindowKind::kCosine,
                                             WindowKind::kBartlett});
    spec.n_list = resolve_n_list(c, {128});
    spec.allow_any_n = c.allow_any_n;
    spec.shots_list = c.shots_list.empty() ? std::vector<std::size_t>{1, 2, 5, 10, 20, 50, 100}
                                           : c.shots_list;
    spec.crb_grid = c.crb_grid;
    if (spec.crb_grid < 16) throw UsageError("--grid must be at least 16");
    const auto curve = run_crb_curve(spec);
    with_output(c, out, [&](std::ostream& o) { io::write_crb_curve(o, curve, output_format(c)); });
}

json aml_json(const AmlResult& r) {
    return {{"rough", r.rough},
            {"refined", r.refined},
            {"correction", r.correction},
            {"grid_points", r.grid_points},
            {"offset", r.offset}};
}

void run_estimate(const CliConfig& c, std::ostream& out) {
    if (c.input.empty()) throw UsageError("--input is required");
    std::size_t n = 0;
    if (c.qubits || c.record_length) n = resolve_record_length(c);
    const auto format = input_format(c);
    if (n == 0 && format == io::Format::kCsv) {
        throw UsageError("CSV sample files need --qubits or --record-length");
    }
    std::ifstream in(c.input);
    if (!in) throw std::runtime_error("cannot open input file '" + c.input + "'");
    const auto sets = io::read_samples(in, format, n);
    if (sets.empty()) throw std::runtime_error("input holds no samples");
    n = sets.front().n_points;
    const auto cfg = estimator_config(c);

    json row;
    if (c.estimator == "mean") {
        if (sets.size() != 1) throw std::runtime_error("mean estimator takes a single sample set");
        auto m = circular_sample_mean(sets.front());
        row["estimate"] = m ? json(*m) : json(nullptr);
        row["defined"] = m.has_value();
    } else if (c.estimator == "aml") {
        if (sets.size() != 1) throw std::runtime_error("aml estimator takes a single sample set");
        const auto r = aml_estimate(histogram(sets.front()), sets.front().offset, cfg);
        row = aml_json(r);
        row["estimate"] = wrap_2pi(r.refined - sets.front().offset);
    } else if (c.estimator == "df") {
        if (sets.size() != 2) {
            throw std::runtime_error("df estimator needs exactly two sample sets (offsets 0 and pi/N)");
        }
        const auto r = dual_frequency_estimate(sets[0], sets[1], cfg);
        row["estimate"] = r.estimate;
        row["set1"] = aml_json(r.set1);
        row["set2"] = aml_json(r.set2);
        row["rough2_shifted"] = r.rough2_shifted;
        row["candidates"] = r.candidates.u;
        row["pair"] = {r.pair.first + 1, r.pair.second + 1};
    } else {
        throw UsageError("unknown estimator '" + c.estimator + "' (expected mean, aml or df)");
    }
    std::size_t total = 0;
    for (const auto& s : sets) total += s.outcomes.size();
    json doc = {{"spec", {{"estimator", c.estimator}, {"n_points", n}, {"n_samples", total},
                          {"input", c.input}}},
                {"rows", json::array({row})}};
    with_output(c, out, [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
}

PhasePolicy resolve_policy(const CliConfig& c, PhasePolicy::Kind fallback) {
    PhasePolicy p;
    const std::string kind = c.phase_policy.empty()
                                 ? (fallback == PhasePolicy::Kind::kUniformInCell ? "cell" : "uniform")
                                 : c.phase_policy;
    if (kind == "uniform") {
        p.kind = PhasePolicy::Kind::kUniform;
    } else if (kind == "cell") {
        p.kind = PhasePolicy::Kind::kUniformInCell;
        p.cell = c.cell;
    } else if (kind == "fixed") {
        if (c.phases.empty()) throw UsageError("--phase-policy fixed needs --phases");
        p.kind = PhasePolicy::Kind::kFixedList;
        p.phases = c.phases;
    } else {
        throw UsageError("unknown phase policy '" + kind + "' (expected uniform, cell or fixed)");
    }
    return p;
}

ExperimentSpec base_spec(const CliConfig& c) {
    ExperimentSpec spec;
    spec.master_seed = c.seed;
    spec.threads = c.threads;
    spec.allow_any_n = c.allow_any_n;
    spec.crb_grid = c.crb_grid;
    spec.config = estimator_config(c);
    return spec;
}

void write_table_plot(const std::filesystem::path& dir, const std::string& name,
                      const ExperimentTable& table, bool timing) {
    write_file(dir / name, [&](std::ostream& o) {
        io::write_experiment(o, table, io::Format::kCsv, timing);
    });
}

ScatterTable filter_scatter(const ScatterTable& t, EstimatorId id) {
    ScatterTable out{t.spec, {}};
    out.spec.estimators = {id};
    for (const auto& r : t.rows) {
        if (r.estimator == to_string(id)) out.rows.push_back(r);
    }
    return out;
}

void write_scatter_plots(const std::filesystem::path& dir, const ScatterTable& table,
                         bool cell_units) {
    for (auto [id, name] : {std::pair{EstimatorId::kAml, "fig4.csv"},
                            std::pair{EstimatorId::kDualFrequency, "fig7.csv"}}) {
        auto part = filter_scatter(table, id);
        if (part.rows.empty()) continue;
        write_file(dir / name, [&](std::ostream& o) {
            io::write_scatter(o, part, io::Format::kCsv, cell_units);
        });
    }
}

void run_figures(const CliConfig& c, std::ostream& err) {
    if (c.plot_data.empty()) throw UsageError("experiment figures needs --plot-data DIR");
    const std::filesystem::path dir(c.plot_data);
    std::filesystem::create_directories(dir);
    const std::size_t trials = c.trials ? c.trials : 10000;

    auto spec = base_spec(c);
    spec.kind = ExperimentKind::kRmseVsShots;
    spec.n_list = {128};
    spec.shots_list = kDefaultShots;
    spec.trials = trials;

    spec.estimators = {EstimatorId::kMeanRect, EstimatorId::kMeanCosine, EstimatorId::kMeanBartlett};
    err << "fig3: sample-mean RMSE and window CRBs vs N_s\n";
    write_table_plot(dir, "fig3.csv", run_rmse_vs_shots(spec), c.timing);

    spec.estimators = {EstimatorId::kDualFrequency, EstimatorId::kMeanCosine};
    err << "fig5: dual-frequency vs cosine sample mean vs N_s\n";
    write_table_plot(dir, "fig5.csv", run_rmse_vs_shots(spec), c.timing);

    spec.kind = ExperimentKind::kRmseVsN;
    spec.n_list = kDefaultRecordLengths;
    spec.shots_list = {30};
    spec.estimators = {EstimatorId::kDualFrequency, EstimatorId::kAml, EstimatorId::kMeanCosine,
                       EstimatorId::kMeanRect};
    err << "fig6: RMSE vs N at N_s = 30\n";
    write_table_plot(dir, "fig6.csv", run_rmse_vs_n(spec), c.timing);

    spec.shots_list = {6, 14, 30};
    spec.estimators = {EstimatorId::kDualFrequency};
    err << "fig8: dual-frequency RMSE vs N across shot regions\n";
    write_table_plot(dir, "fig8.csv", run_rmse_vs_n(spec), c.timing);

    spec.kind = ExperimentKind::kScatter;
    spec.n_list = {100};
    spec.allow_any_n = true;
    spec.shots_list = {30};
    spec.trials = c.trials ? c.trials : 2000;
    spec.phase_policy = {PhasePolicy::Kind::kUniformInCell, c.cell, {}};
    spec.estimators = {EstimatorId::kAml, EstimatorId::kDualFrequency};
    err << "fig4, fig7: AML and dual-frequency error scatter at N = 100\n";
    write_scatter_plots(dir, run_scatter(spec), c.cell_units);
}

void run_experiment(const CliConfig& c, std::ostream& out, std::ostream& err) {
    err << "seed: " << c.seed << '\n';
    if (c.experiment_kind == "figures") {
        run_figures(c, err);
        return;
    }
    ExperimentKind kind;
    try {
        kind = parse_experiment_kind(c.experiment_kind);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    auto spec = base_spec(c);
    spec.kind = kind;
    const auto format = output_format(c);
    const std::filesystem::path plot_dir(c.plot_data);
    if (!c.plot_data.empty()) std::filesystem::create_directories(plot_dir);

    switch (kind) {
        case ExperimentKind::kRmseVsShots:
        case ExperimentKind::kRmseVsN: {
            const bool vs_shots = kind == ExperimentKind::kRmseVsShots;
            spec.n_list = resolve_n_list(c, vs_shots ? std::vector<std::size_t>{128}
                                                     : kDefaultRecordLengths);
            spec.shots_list = !c.shots_list.empty() ? c.shots_list
                              : vs_shots            ? kDefaultShots
                                                    : std::vector<std::size_t>{30};
            spec.estimators = parse_estimators(
                c.estimators,
                vs_shots ? std::vector{EstimatorId::kDualFrequency, EstimatorId::kMeanCosine}
                         : std::vector{EstimatorId::kDualFrequency, EstimatorId::kAml,
                                       EstimatorId::kMeanCosine, EstimatorId::kMeanRect});
            spec.trials = c.trials ? c.trials : 10000;
            spec.phase_policy = resolve_policy(c, PhasePolicy::Kind::kUniform);
            try {
                validate(spec);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            const auto table = vs_shots ? run_rmse_vs_shots(spec) : run_rmse_vs_n(spec);
            with_output(c, out, [&](std::ostream& o) {
                io::write_experiment(o, table, format, c.timing);
            });
            if (!c.plot_data.empty()) {
                write_table_plot(plot_dir, vs_shots ? "fig5.csv" : "fig6.csv", table, c.timing);
            }
            for (const auto& r : table.rows) {
                if (r.rmse < r.sqrt_crb) {
                    err << "note: " << r.estimator << " at N=" << r.n_points << " N_s=" << r.n_shots
                        << " has RMSE below the phase-averaged CRB\n";
                }
            }
            break;
        }
        case ExperimentKind::kScatter: {
            spec.n_list = resolve_n_list(c, {128});
            spec.shots_list = c.shots_list.empty() ? std::vector<std::size_t>{30} : c.shots_list;
            spec.estimators = parse_estimators(
                c.estimators, {EstimatorId::kAml, EstimatorId::kDualFrequency});
            spec.trials = c.trials ? c.trials : 2000;
            spec.phase_policy = resolve_policy(c, PhasePolicy::Kind::kUniformInCell);
            try {
                validate(spec);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            const auto table = run_scatter(spec);
            with_output(c, out, [&](std::ostream& o) {
                io::write_scatter(o, table, format, c.cell_units);
            });
            if (!c.plot_data.empty()) write_scatter_plots(plot_dir, table, c.cell_units);
            break;
        }
        case ExperimentKind::kCrbCurve: {
            spec.windows = parse_windows(c.windows, {WindowKind::kRectangular, WindowKind::kCosine,
                                                     WindowKind::kBartlett});
            spec.n_list = resolve_n_list(c, {128});
            spec.shots_list = c.shots_list.empty() ? kDefaultShots : c.shots_list;
            try {
                validate(spec);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            const auto curve = run_crb_curve(spec);
            with_output(c, out, [&](std::ostream& o) { io::write_crb_curve(o, curve, format); });
            if (!c.plot_data.empty()) {
                write_file(plot_dir / "fig3_crb.csv", [&](std::ostream& o) {
                    io::write_crb_curve(o, curve, io::Format::kCsv);
                });
            }
            break;
        }
    }
}

// Option wiring -------------------------------------------------------------

void add_length_options(CLI::App* app, CliConfig& c) {
    app->add_option("-M,--qubits", c.qubits, "Control qubits M (N = 2^M)");
    app->add_option("-N,--record-length", c.record_length, "Record length N");
    app->add_flag("--allow-any-n", c.allow_any_n, "Accept N that is not a power of two");
}

void add_list_length_options(CLI::App* app, CliConfig& c) {
    add_length_options(app, c);
    app->add_option("--qubits-list", c.qubits_list, "Sweep of qubit counts")->delimiter(',');
    app->add_option("--record-lengths", c.record_lengths, "Sweep of record lengths")->delimiter(',');
}

void add_output_options(CLI::App* app, CliConfig& c) {
    app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("-o,--output", c.output, "Output file (default: stdout)");
}

void add_window_options(CLI::App* app, CliConfig& c) {
    app->add_option("--window", c.window, "rect | cosine | bartlett | custom");
    app->add_option("--weights-file", c.weights_file, "One-column CSV of custom weights");
}

void add_phase_options(CLI::App* app, CliConfig& c) {
    app->add_option("--phase-frac", c.phase_frac, "Phase as a fraction x of a turn (phi = 2 pi x)");
    app->add_option("--phase-rad", c.phase_rad, "Phase in radians");
    app->add_option("--offset-rad", c.offset_rad, "Extra control-register phase offset");
    app->add_flag("--half-cell", c.half_cell, "Use the half-cell offset pi/N");
}

void add_estimator_knobs(CLI::App* app, CliConfig& c) {
    app->add_option("--bins-kept", c.bins_kept, "Bins kept in the sinc likelihood");
    app->add_option("--grid-min", c.grid_min, "Minimum AML grid size");
    app->add_option("--grid-scale", c.grid_scale, "AML grid size per sqrt(N_s)");
}

}  // namespace

std::size_t resolve_record_length(const CliConfig& c) {
    if (c.qubits && c.record_length) throw UsageError("give only one of --qubits, --record-length");
    if (!c.qubits && !c.record_length) throw UsageError("--qubits or --record-length is required");
    const std::size_t n = c.qubits ? qubits_to_n(*c.qubits) : *c.record_length;
    check_n(n, c.allow_any_n);
    return n;
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CliConfig c;
    CLI::App app{"Windowed and dual-frequency quantum phase estimation toolkit", "qpe"};
    app.require_subcommand(1);

    auto* window = app.add_subcommand("window", "Print window weights");
    add_length_options(window, c);
    add_window_options(window, c);
    add_output_options(window, c);

    auto* dist = app.add_subcommand("dist", "Outcome distribution for a phase");
    add_length_options(dist, c);
    add_window_options(dist, c);
    add_phase_options(dist, c);
    add_output_options(dist, c);

    auto* samp = app.add_subcommand("sample", "Draw seeded measurement outcomes");
    add_length_options(samp, c);
    add_window_options(samp, c);
    add_phase_options(samp, c);
    add_output_options(samp, c);
    samp->add_option("--shots", c.shots, "Number of outcomes");
    samp->add_option("--seed", c.seed, "RNG seed");
    samp->add_flag("--dual", c.dual, "Split shots into offset-0 and offset-pi/N sets");

    auto* crb = app.add_subcommand("crb", "Phase-averaged sqrt-CRB curves");
    add_list_length_options(crb, c);
    add_output_options(crb, c);
    crb->add_option("--windows", c.windows, "Windows to compare")->delimiter(',');
    crb->add_option("--shots-list", c.shots_list, "N_s values")->delimiter(',');
    crb->add_option("--grid", c.crb_grid, "Phase grid size for averaging");

    auto* est = app.add_subcommand("estimate", "Estimate the phase from a sample file");
    add_length_options(est, c);
    add_output_options(est, c);
    add_estimator_knobs(est, c);
    est->add_option("--input", c.input, "Sample file written by `sample`")->required();
    est->add_option("--input-format", c.input_format, "csv | json (default: by extension)");
    est->add_option("--estimator", c.estimator, "mean | aml | df");

    auto* exp = app.add_subcommand("experiment", "Monte-Carlo experiments");
    exp->add_option("kind", c.experiment_kind,
                    "rmse-vs-shots | rmse-vs-n | scatter | crb-curve | figures")
        ->required();
    add_list_length_options(exp, c);
    add_output_options(exp, c);
    add_estimator_knobs(exp, c);
    exp->add_option("--shots-list", c.shots_list, "N_s values")->delimiter(',');
    exp->add_option("--estimators", c.estimators, "mean-rect, mean-cosine, mean-bartlett, aml, df")
        ->delimiter(',');
    exp->add_option("--windows", c.windows, "Windows for crb-curve")->delimiter(',');
    exp->add_option("--trials", c.trials, "Monte-Carlo trials per row");
    exp->add_option("--seed", c.seed, "Master seed");
    exp->add_option("--threads", c.threads, "Worker threads (default: QPE_THREADS or all cores)");
    exp->add_option("--grid", c.crb_grid, "Phase grid size for CRB averaging");
    exp->add_option("--phase-policy", c.phase_policy, "uniform | cell | fixed");
    exp->add_option("--cell", c.cell, "Resolution cell k for --phase-policy cell");
    exp->add_option("--phases", c.phases, "Phases in radians for --phase-policy fixed")
        ->delimiter(',');
    exp->add_flag("--cell-units", c.cell_units, "Scatter phases and errors in units of 2 pi / N");
    exp->add_flag("--timing", c.timing, "Add a wall_time column");
    exp->add_option("--plot-data", c.plot_data, "Directory for per-figure CSV files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*window) {
            run_window(c, out);
        } else if (*dist) {
            run_dist(c, out);
        } else if (*samp) {
            run_sample(c, out, err);
        } else if (*crb) {
            run_crb(c, out);
        } else if (*est) {
            run_estimate(c, out);
        } else if (*exp) {
            run_experiment(c, out, err);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n";
        CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace dfqpe::cli
