// railwave: link-level coverage simulation for rail corridors
// Copyright (C) 2026 The railwave authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "railwave/cli.hpp"
#include "railwave/ce_harness.hpp"
#include "railwave/dataset.hpp"
#include "railwave/error.hpp"
#include "railwave/report.hpp"
#include "railwave/sweep.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace railwave::cli {

namespace {

using report::ConfigEcho;
using report::format_number;

struct RadioFlags {
    double frequency_ghz = 28.0;
    double noise_dbm = -120.0;
    double power_dbm = 10.0;
    double height_m = 5.0;

    void add_to(CLI::App* app, bool with_power)
    {
        app->add_option("--frequency-ghz", frequency_ghz, "Carrier frequency in GHz")->capture_default_str();
        app->add_option("--noise-dbm", noise_dbm, "Noise power in dBm")->capture_default_str();
        if (with_power)
            app->add_option("--power-dbm", power_dbm, "Transmit power in dBm")->capture_default_str();
        app->add_option("--height", height_m, "Vertical PA/slot to user distance in m")->capture_default_str();
    }

    RadioConfig radio() const { return RadioConfig::from_dbm(frequency_ghz * 1e9, noise_dbm, power_dbm); }

    void echo(ConfigEcho& config, bool with_power) const
    {
        config.emplace_back("frequency_ghz", format_number(frequency_ghz));
        config.emplace_back("noise_dbm", format_number(noise_dbm));
        if (with_power)
            config.emplace_back("power_dbm", format_number(power_dbm));
        config.emplace_back("height_m", format_number(height_m));
    }
};

struct SweepFlags {
    std::string arch;
    double length_m = 100.0;
    std::size_t n = 1;
    double pitch_m = pass::default_pitch_m;
    std::size_t deployed = 0;
    std::size_t segments = 4;
    std::size_t samples = sweep::default_sample_count;
    RadioFlags radio;
    std::string out = "-";
};

struct Fig2Flags {
    std::vector<double> lengths{50, 100, 200, 300, 500, 1000};
    std::vector<std::size_t> counts{1, 2, 4, 8};
    double pitch_m = pass::default_pitch_m;
    std::size_t segments = 4;
    std::size_t samples = sweep::default_sample_count;
    RadioFlags radio;
    std::string out = "-";
    std::string report;
};

struct Fig3Flags {
    double length_m = 40.0;
    double snr_min = 0.0;
    double snr_max = 25.0;
    double snr_step = 1.0;
    std::size_t n = 40;
    std::size_t segments = 4;
    std::size_t samples = sweep::default_sample_count;
    std::string worst_case = "local-mean";
    RadioFlags radio;
    std::string out = "-";
};

struct DatasetFlags {
    std::string split = "test";
    std::uint64_t count = 0;
    std::uint64_t seed = 1;
    std::size_t t = 16;
    std::string out_dir = "dataset";
    double length_m = 100.0;
    double speed_kmh = 60.0;
    double pilot_interval_ms = 0.625;
    double snr_min = 0.0;
    double snr_max = 20.0;
    std::optional<double> snr_db;
    double frequency_ghz = 28.0;
    double height_m = 5.0;
};

struct ScoreFlags {
    std::string dataset;
    std::string pred;
    std::string out = "-";
};

struct LsEvalFlags {
    std::string dataset;
    std::optional<std::size_t> t;
    std::string out = "-";
};

// Writes to `out` for "-", otherwise buffers and writes the file in one go.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& writer)
{
    if (path == "-") {
        writer(out);
        out.flush();
        return;
    }
    std::ostringstream buffer;
    writer(buffer);
    const std::filesystem::path target(path);
    if (target.has_parent_path())
        std::filesystem::create_directories(target.parent_path());
    std::ofstream file(target, std::ios::binary | std::ios::trunc);
    if (!file)
        throw std::runtime_error("cannot open " + path + " for writing");
    file << buffer.str();
    if (!file)
        throw std::runtime_error("failed writing " + path);
}

std::string join(const auto& values)
{
    std::string s;
    for (const auto& v : values) {
        if (!s.empty())
            s += ' ';
        if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>)
            s += format_number(v);
        else
            s += std::to_string(v);
    }
    return s;
}

void common_echo(ConfigEcho& config, const std::string& command)
{
    config.emplace_back("command", command);
}

sweep::WorstCase parse_worst_case(const std::string& name)
{
    if (name == "local-mean")
        return sweep::WorstCase::local_mean;
    if (name == "instantaneous")
        return sweep::WorstCase::instantaneous;
    throw InvalidConfig("worst case must be 'local-mean' or 'instantaneous'");
}

void run_sweep(const SweepFlags& f, std::ostream& out)
{
    CorridorGeometry geometry;
    geometry.length_m = f.length_m;
    geometry.height_m = f.radio.height_m;
    const RadioConfig radio = f.radio.radio();

    sweep::ScenarioSpec spec;
    const std::string segmented_prefix = "lcx-segmented-";
    std::size_t segments = f.segments;
    std::string arch = f.arch;
    if (arch.starts_with(segmented_prefix)) {
        segments = std::stoul(arch.substr(segmented_prefix.size()));
        arch = "lcx-segmented";
    }
    switch (sweep::parse_architecture(arch)) {
    case sweep::Architecture::lcx_single:
        spec = sweep::lcx_scenario(lcx::FeedMode::single, geometry, radio);
        break;
    case sweep::Architecture::lcx_double:
        spec = sweep::lcx_scenario(lcx::FeedMode::double_ended, geometry, radio);
        break;
    case sweep::Architecture::lcx_segmented:
        spec = sweep::lcx_scenario(lcx::FeedMode::segmented, geometry, radio, segments);
        break;
    case sweep::Architecture::pass_fix:
        spec = sweep::pass_fix_scenario(f.n, geometry, radio);
        break;
    case sweep::Architecture::pass_active:
        if (f.pitch_m == 0.0 && f.deployed == 0)
            throw InvalidConfig("--pitch 0 selects an equidistant layout and needs --deployed");
        spec = f.pitch_m == 0.0 ? sweep::pass_active_equidistant_scenario(f.deployed, f.n, geometry, radio)
                                : sweep::pass_active_scenario(f.n, f.pitch_m, geometry, radio);
        break;
    case sweep::Architecture::pass_movable:
        spec = sweep::pass_movable_scenario(geometry, radio);
        break;
    }
    spec.sample_count = f.samples;
    const auto result = sweep::average_se(spec);

    ConfigEcho config;
    common_echo(config, "sweep");
    config.emplace_back("architecture", spec.label());
    config.emplace_back("length_m", format_number(f.length_m));
    if (spec.architecture == sweep::Architecture::pass_fix || spec.architecture == sweep::Architecture::pass_active)
        config.emplace_back("n", std::to_string(f.n));
    if (spec.architecture == sweep::Architecture::pass_active) {
        config.emplace_back("pitch_m", format_number(f.pitch_m));
        if (f.pitch_m == 0.0)
            config.emplace_back("deployed", std::to_string(f.deployed));
    }
    f.radio.echo(config, true);
    config.emplace_back("samples", std::to_string(f.samples));
    emit(f.out, out, [&](std::ostream& os) { report::write_sweep_csv(os, config, result); });
}

void run_fig2(const Fig2Flags& f, std::ostream& out, std::ostream& err)
{
    sweep::MatrixOptions options;
    options.geometry.height_m = f.radio.height_m;
    options.radio = f.radio.radio();
    options.pitch_m = f.pitch_m;
    options.segments = f.segments;
    options.sample_count = f.samples;
    const auto rows = sweep::compare_matrix(f.lengths, f.counts, options);

    ConfigEcho config;
    common_echo(config, "fig2");
    config.emplace_back("lengths_m", join(f.lengths));
    config.emplace_back("n", join(f.counts));
    config.emplace_back("pitch_m", format_number(f.pitch_m));
    config.emplace_back("segments", std::to_string(f.segments));
    f.radio.echo(config, true);
    config.emplace_back("samples", std::to_string(f.samples));
    emit(f.out, out, [&](std::ostream& os) { report::write_fig2_csv(os, config, rows); });

    // The published gaps need L = 50 and 1000 m with N = 1 and four segments.
    std::vector<sweep::DeltaCheck> checks;
    try {
        checks = sweep::reference_deltas(rows);
    } catch (const std::out_of_range&) {
        return;
    }
    bool all_within = true;
    for (const auto& c : checks)
        all_within = all_within && c.within();
    if (all_within && f.report.empty())
        return;
    emit(f.report.empty() ? "-" : f.report, f.report.empty() ? err : out,
         [&](std::ostream& os) { report::write_deviation_report(os, config, checks, options); });
}

void run_fig3(const Fig3Flags& f, std::ostream& out)
{
    CorridorGeometry geometry;
    geometry.length_m = f.length_m;
    geometry.height_m = f.radio.height_m;
    auto scenarios = sweep::energy_scenarios(geometry, f.radio.radio(), f.n, f.segments);
    for (auto& s : scenarios)
        s.sample_count = f.samples;
    const auto targets = sweep::target_range(f.snr_min, f.snr_max, f.snr_step);
    const auto rows = sweep::power_curve(scenarios, targets, parse_worst_case(f.worst_case));

    ConfigEcho config;
    common_echo(config, "fig3");
    config.emplace_back("length_m", format_number(f.length_m));
    config.emplace_back("n", std::to_string(f.n));
    config.emplace_back("segments", std::to_string(f.segments));
    config.emplace_back("snr_min_db", format_number(f.snr_min));
    config.emplace_back("snr_max_db", format_number(f.snr_max));
    config.emplace_back("snr_step_db", format_number(f.snr_step));
    config.emplace_back("worst_case", f.worst_case);
    f.radio.echo(config, false);
    config.emplace_back("samples", std::to_string(f.samples));
    emit(f.out, out, [&](std::ostream& os) { report::write_fig3_csv(os, config, rows); });
}

void run_gen_dataset(const DatasetFlags& f, std::ostream& out)
{
    ce::CeScenario scenario;
    scenario.geometry.length_m = f.length_m;
    scenario.geometry.height_m = f.height_m;
    scenario.carrier_frequency_hz = f.frequency_ghz * 1e9;
    scenario.speed_mps = ce::kmh_to_mps(f.speed_kmh);
    scenario.pilot_interval_s = f.pilot_interval_ms * 1e-3;
    scenario.history = f.t;
    scenario.snr_min_db = f.snr_min;
    scenario.snr_max_db = f.snr_max;
    scenario.validate();

    ce::GenerateOptions options;
    options.split = f.split;
    options.count = f.count;
    options.master_seed = f.seed;
    options.fixed_snr_db = f.snr_db;
    const auto split = ce::generate_split(scenario, options);
    ce::write_dataset(split, f.out_dir);
    out << "wrote " << split.samples.size() << " samples to "
        << (std::filesystem::path(f.out_dir) / (split.name + ".rwce")).string() << '\n';
}

ConfigEcho dataset_echo(const std::string& command, const ce::DatasetSplit& split, const std::string& dataset)
{
    ConfigEcho config;
    common_echo(config, command);
    config.emplace_back("dataset", dataset);
    config.emplace_back("split", split.name);
    config.emplace_back("samples", std::to_string(split.samples.size()));
    config.emplace_back("master_seed", std::to_string(split.manifest.master_seed));
    config.emplace_back("scenario_hash", split.manifest.scenario_hash());
    return config;
}

void run_score(const ScoreFlags& f, std::ostream& out)
{
    const auto split = ce::read_dataset(f.dataset);
    const auto predictions = ce::read_predictions(f.pred, split.manifest.scenario.pa_count);
    const auto rows = ce::score_predictions(split, predictions);
    auto config = dataset_echo("score", split, f.dataset);
    config.emplace_back("predictions", f.pred);
    emit(f.out, out, [&](std::ostream& os) { report::write_score_csv(os, config, rows); });
}

void run_ls_eval(const LsEvalFlags& f, std::ostream& out)
{
    const auto split = ce::read_dataset(f.dataset);
    const auto rows = ce::ls_evaluate(split, f.t);
    auto config = dataset_echo("ls-eval", split, f.dataset);
    config.emplace_back("t", f.t ? std::to_string(*f.t) : "all");
    emit(f.out, out, [&](std::ostream& os) { report::write_ls_csv(os, config, rows); });
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"railwave: coverage, power and channel-estimation studies for rail corridors", "railwave"};
    app.set_config("--config", "", "TOML/INI file with option defaults; flags given on the command line win");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    SweepFlags sweep_flags;
    auto* sweep_cmd = app.add_subcommand("sweep", "Per-position SNR and SE along the corridor");
    sweep_cmd->add_option("--arch", sweep_flags.arch,
                          "lcx-single, lcx-double, lcx-segmented[-S], pass-fix, pass-active or pass-movable")
        ->required();
    sweep_cmd->add_option("--length", sweep_flags.length_m, "Corridor length in m")->capture_default_str();
    sweep_cmd->add_option("--n", sweep_flags.n, "PAs deployed (pass-fix) or activated (pass-active)")
        ->capture_default_str();
    sweep_cmd->add_option("--pitch", sweep_flags.pitch_m, "pass-active PA pitch in m; 0 for equidistant --deployed")
        ->capture_default_str();
    sweep_cmd->add_option("--deployed", sweep_flags.deployed, "Equidistant PAs deployed when --pitch is 0");
    sweep_cmd->add_option("--segments", sweep_flags.segments, "Segments for lcx-segmented")->capture_default_str();
    sweep_cmd->add_option("--samples", sweep_flags.samples, "Grid points along the corridor")->capture_default_str();
    sweep_flags.radio.add_to(sweep_cmd, true);
    sweep_cmd->add_option("--out", sweep_flags.out, "Output CSV, '-' for stdout")->capture_default_str();

    Fig2Flags fig2_flags;
    auto* fig2_cmd = app.add_subcommand("fig2", "Average SE for every architecture, length and PA count");
    fig2_cmd->add_option("--lengths", fig2_flags.lengths, "Corridor lengths in m")->capture_default_str();
    fig2_cmd->add_option("--n", fig2_flags.counts, "PA counts for pass-fix and pass-active")->capture_default_str();
    fig2_cmd->add_option("--pitch", fig2_flags.pitch_m, "pass-active PA pitch in m")->capture_default_str();
    fig2_cmd->add_option("--segments", fig2_flags.segments, "Segments for lcx-segmented")->capture_default_str();
    fig2_cmd->add_option("--samples", fig2_flags.samples, "Grid points along the corridor")->capture_default_str();
    fig2_flags.radio.add_to(fig2_cmd, true);
    fig2_cmd->add_option("--out", fig2_flags.out, "Output CSV, '-' for stdout")->capture_default_str();
    fig2_cmd->add_option("--report", fig2_flags.report,
                         "Deviation report path; written to stderr when a published gap is missed");

    Fig3Flags fig3_flags;
    auto* fig3_cmd = app.add_subcommand("fig3", "Minimum transmit power against target SNR");
    fig3_cmd->add_option("--length", fig3_flags.length_m, "Corridor length in m")->capture_default_str();
    fig3_cmd->add_option("--snr-min", fig3_flags.snr_min, "Lowest target SNR in dB")->capture_default_str();
    fig3_cmd->add_option("--snr-max", fig3_flags.snr_max, "Highest target SNR in dB")->capture_default_str();
    fig3_cmd->add_option("--snr-step", fig3_flags.snr_step, "Target SNR step in dB")->capture_default_str();
    fig3_cmd->add_option("--n", fig3_flags.n, "Equidistant PAs for pass-fix and pass-active")->capture_default_str();
    fig3_cmd->add_option("--segments", fig3_flags.segments, "Segments for lcx-segmented")->capture_default_str();
    fig3_cmd->add_option("--samples", fig3_flags.samples, "Grid points along the corridor")->capture_default_str();
    fig3_cmd->add_option("--worst-case", fig3_flags.worst_case, "local-mean or instantaneous")
        ->capture_default_str();
    fig3_flags.radio.add_to(fig3_cmd, false);
    fig3_cmd->add_option("--out", fig3_flags.out, "Output CSV, '-' for stdout")->capture_default_str();

    DatasetFlags ds_flags;
    auto* ds_cmd = app.add_subcommand("gen-dataset", "Generate a channel-estimation dataset split");
    ds_cmd->add_option("--split", ds_flags.split, "Split name (train, val, test or custom)")->capture_default_str();
    ds_cmd->add_option("--count", ds_flags.count, "Samples; 0 uses the split default");
    ds_cmd->add_option("--seed", ds_flags.seed, "Master seed")->capture_default_str();
    ds_cmd->add_option("--t", ds_flags.t, "Pilots per window")->capture_default_str();
    ds_cmd->add_option("--out-dir", ds_flags.out_dir, "Dataset directory")->capture_default_str();
    ds_cmd->add_option("--length", ds_flags.length_m, "Corridor length in m")->capture_default_str();
    ds_cmd->add_option("--speed-kmh", ds_flags.speed_kmh, "User speed in km/h")->capture_default_str();
    ds_cmd->add_option("--pilot-interval-ms", ds_flags.pilot_interval_ms, "Pilot spacing in ms")
        ->capture_default_str();
    ds_cmd->add_option("--snr-min", ds_flags.snr_min, "Lowest pilot SNR in dB")->capture_default_str();
    ds_cmd->add_option("--snr-max", ds_flags.snr_max, "Highest pilot SNR in dB")->capture_default_str();
    ds_cmd->add_option("--snr-db", ds_flags.snr_db, "Fixed pilot SNR in dB instead of a uniform draw");
    ds_cmd->add_option("--frequency-ghz", ds_flags.frequency_ghz, "Carrier frequency in GHz")->capture_default_str();
    ds_cmd->add_option("--height", ds_flags.height_m, "Waveguide height above the user in m")->capture_default_str();

    ScoreFlags score_flags;
    auto* score_cmd = app.add_subcommand("score", "NMSE of a prediction file per history length and SNR");
    score_cmd->add_option("--dataset", score_flags.dataset, "Split file (.rwce) next to its manifest")->required();
    score_cmd->add_option("--pred", score_flags.pred, "Prediction file (.rwpr)")->required();
    score_cmd->add_option("--out", score_flags.out, "Output CSV, '-' for stdout")->capture_default_str();

    LsEvalFlags ls_flags;
    auto* ls_cmd = app.add_subcommand("ls-eval", "LS baseline NMSE per SNR bucket");
    ls_cmd->add_option("--dataset", ls_flags.dataset, "Split file (.rwce) next to its manifest")->required();
    ls_cmd->add_option("--t", ls_flags.t, "Use only the last T pilots of each window");
    ls_cmd->add_option("--out", ls_flags.out, "Output CSV, '-' for stdout")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*sweep_cmd)
            run_sweep(sweep_flags, out);
        else if (*fig2_cmd)
            run_fig2(fig2_flags, out, err);
        else if (*fig3_cmd)
            run_fig3(fig3_flags, out);
        else if (*ds_cmd)
            run_gen_dataset(ds_flags, out);
        else if (*score_cmd)
            run_score(score_flags, out);
        else if (*ls_cmd)
            run_ls_eval(ls_flags, out);
    } catch (const std::invalid_argument& e) {
        err << "railwave: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "railwave: " << e.what() << '\n';
        return exit_runtime;
    }
    return exit_ok;
}

int run(int argc, const char* const* argv)
{
    return run(argc, argv, std::cout, std::cerr);
}

} // namespace railwave::cli
