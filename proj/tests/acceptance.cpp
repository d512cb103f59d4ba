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

// Acceptance gate: one PASS/FAIL line per criterion, details indented below.
// Exit status is non-zero when any criterion fails.

#include "railwave/ce_harness.hpp"
#include "railwave/dataset.hpp"
#include "railwave/error.hpp"
#include "railwave/pass_channel.hpp"
#include "railwave/report.hpp"
#include "railwave/rng.hpp"
#include "railwave/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace railwave;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void verdict(bool ok, const std::string& name, const std::string& summary)
{
    std::cout << (ok ? "PASS  " : "FAIL  ") << name << ": " << summary << std::endl;
    if (!ok)
        ++failures;
}

void detail(const std::string& line)
{
    std::cout << "      " << line << '\n';
}

std::string fmt(double v, int precision = 4)
{
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

const std::vector<double> lengths{50, 100, 200, 300, 500, 1000};
const std::vector<std::size_t> counts{1, 2, 4, 8};

double cell(const std::vector<sweep::Fig2Row>& rows, const std::string& arch, double length,
            std::optional<std::size_t> n = std::nullopt)
{
    return sweep::find_cell(rows, arch, length, n).average_se;
}

void fig2_deltas(const std::vector<sweep::Fig2Row>& rows, double seconds, const sweep::MatrixOptions& options)
{
    const auto checks = sweep::reference_deltas(rows);
    std::size_t within = 0;
    for (const auto& c : checks) {
        within += c.within() ? 1 : 0;
        detail(c.name + ": model " + fmt(c.model_delta) + " vs " + fmt(c.reference_delta) + " bps/Hz (tolerance " +
               fmt(c.tolerance, 3) + ")" + (c.within() ? "" : "  OUT"));
    }
    const bool fast = seconds < 60.0;
    if (within != checks.size()) {
        std::ostringstream report;
        report::write_deviation_report(report, {{"command", "acceptance"}}, checks, options);
        std::istringstream lines(report.str());
        for (std::string line; std::getline(lines, line);)
            detail(line);
    }
    verdict(within == checks.size() && fast, "fig2-deltas",
            std::to_string(within) + "/" + std::to_string(checks.size()) + " gaps within tolerance; matrix " +
                fmt(seconds, 3) + " s (limit 60 s)");
}

void ordering_suite(const std::vector<sweep::Fig2Row>& rows)
{
    std::vector<std::string> violations;
    auto require = [&](bool ok, const std::string& what) {
        if (!ok)
            violations.push_back(what);
    };

    std::size_t checked = 0;
    for (const double l : lengths) {
        const std::string at = " at L=" + fmt(l);
        const double movable = cell(rows, "pass-movable", l);
        for (const std::size_t n : counts) {
            const double active = cell(rows, "pass-active", l, n);
            const double fix = cell(rows, "pass-fix", l, n);
            const std::string tag = "(N=" + std::to_string(n) + ")";
            require(movable >= active, "pass-movable < pass-active" + tag + at);
            ++checked;
            if (n != 1) {
                require(active >= fix, "pass-active" + tag + " < pass-fix" + tag + at);
                ++checked;
            }
        }
        if (l < 200)
            continue;
        const double single = cell(rows, "lcx-single", l);
        const double dbl = cell(rows, "lcx-double", l);
        const double seg = cell(rows, "lcx-segmented-4", l);
        require(seg >= dbl, "lcx-segmented-4 < lcx-double" + at);
        require(dbl >= single, "lcx-double < lcx-single" + at);
        checked += 2;
        const double best_lcx = std::max({single, dbl, seg});
        std::vector<std::pair<std::string, double>> pass_cells{{"pass-movable", movable}};
        for (const std::size_t n : counts) {
            if (n < 2)
                continue;
            pass_cells.emplace_back("pass-fix(N=" + std::to_string(n) + ")", cell(rows, "pass-fix", l, n));
            pass_cells.emplace_back("pass-active(N=" + std::to_string(n) + ")", cell(rows, "pass-active", l, n));
        }
        for (const auto& [name, se] : pass_cells) {
            require(se >= best_lcx, name + " " + fmt(se) + " < best LCX " + fmt(best_lcx) + at);
            ++checked;
        }
    }
    for (const auto& v : violations)
        detail("violated: " + v);
    verdict(violations.empty(), "ordering-suite",
            std::to_string(checked - violations.size()) + "/" + std::to_string(checked) + " orderings hold");
}

void fig3()
{
    const CorridorGeometry geometry{40.0, 20.0, 5.0};
    const RadioConfig radio;
    const auto targets = sweep::target_range(0.0, 25.0, 1.0);
    const auto scenarios = sweep::energy_scenarios(geometry, radio);
    const auto rows = sweep::power_curve(scenarios, targets);

    auto curve = [&](const std::string& arch) {
        std::vector<double> p;
        for (const auto& r : rows) {
            if (r.architecture == arch)
                p.push_back(r.p_min_dbm);
        }
        return p;
    };
    const auto single = curve("lcx-single");
    const auto active = curve("pass-active");

    double gap_min = 1e9;
    double gap_max = -1e9;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        gap_min = std::min(gap_min, single[i] - active[i]);
        gap_max = std::max(gap_max, single[i] - active[i]);
    }
    const bool gap_ok = gap_min >= 7.0 && gap_max <= 13.0;

    double slope_err = 0.0;
    bool single_highest = true;
    for (const auto& s : scenarios) {
        const auto p = curve(s.label());
        for (std::size_t i = 1; i < p.size(); ++i)
            slope_err = std::max(slope_err, std::abs((p[i] - p[i - 1]) / (targets[i] - targets[i - 1]) - 1.0));
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (s.label() != "lcx-single" && p[i] >= single[i])
                single_highest = false;
        }
        detail(s.label() + ": " + fmt(p.front(), 5) + " dBm at 0 dB");
    }
    detail("pass-active below lcx-single by " + fmt(gap_min) + " to " + fmt(gap_max) + " dB (target 10 +/- 3)");
    detail("largest slope error " + fmt(slope_err, 3) + " dB/dB (limit 1e-6)");
    detail(std::string("lcx-single highest at every target: ") + (single_highest ? "yes" : "no"));
    verdict(gap_ok && slope_err <= 1e-6 && single_highest, "fig3-power",
            "gap " + fmt(gap_min) + ".." + fmt(gap_max) + " dB, slope error " + fmt(slope_err, 3) +
                (single_highest ? ", lcx-single highest" : ", lcx-single not highest"));
}

void oracle_suite()
{
    std::mt19937_64 gen(20260101);
    std::uniform_real_distribution<double> length_dist(10.0, 200.0);
    std::uniform_int_distribution<std::size_t> size_dist(1, 12);
    const RadioConfig radio;

    std::size_t dominated = 0;
    std::size_t equal = 0;
    std::size_t nearest1_ok = 0;
    const std::size_t instances = 1000;
    for (std::size_t i = 0; i < instances; ++i) {
        const CorridorGeometry g{length_dist(gen), 20.0, 5.0};
        std::uniform_real_distribution<double> pos(0.0, g.length_m);
        std::vector<double> xs(size_dist(gen));
        for (auto& x : xs)
            x = pos(gen);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        const pass::PassArray array(xs, g);
        const double user = pos(gen);
        std::uniform_int_distribution<std::size_t> n_dist(1, array.size());
        const std::size_t n = n_dist(gen);

        const auto best = pass::best_subset_oracle(array, user, n, radio);
        const auto nearest = pass::select_nearest(array, user, n);
        const double best_snr = pass::pass_snr(array, best, user, radio);
        const double nearest_snr = pass::pass_snr(array, nearest, user, radio);
        dominated += best_snr >= nearest_snr ? 1 : 0;
        equal += best == nearest ? 1 : 0;
        nearest1_ok += pass::best_subset_oracle(array, user, 1, radio) == pass::select_nearest(array, user, 1) ? 1 : 0;
    }
    detail("oracle >= nearest-N in " + std::to_string(dominated) + "/" + std::to_string(instances));
    detail("nearest-N optimal (equality rate) " + fmt(100.0 * static_cast<double>(equal) / instances, 4) + " %");
    detail("nearest-1 equals best-1 in " + std::to_string(nearest1_ok) + "/" + std::to_string(instances));
    verdict(dominated == instances && nearest1_ok == instances, "oracle-suite",
            std::to_string(instances) + " instances, equality rate " +
                fmt(100.0 * static_cast<double>(equal) / instances, 4) + " %");
}

void solver_exactness()
{
    std::mt19937_64 gen(777);
    std::uniform_int_distribution<int> arch(0, 5);
    std::uniform_real_distribution<double> length(20.0, 400.0);
    std::uniform_real_distribution<double> target(-10.0, 40.0);
    std::uniform_real_distribution<double> noise(-130.0, -90.0);
    std::uniform_real_distribution<double> power(-10.0, 40.0);
    std::uniform_int_distribution<std::size_t> count(1, 12);

    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        sweep::ScenarioSpec spec;
        spec.architecture = static_cast<sweep::Architecture>(arch(gen));
        spec.geometry = {length(gen), 20.0, 5.0};
        spec.radio = RadioConfig::from_dbm(28e9, noise(gen), power(gen));
        spec.pa_count = count(gen);
        spec.active_count = count(gen);
        spec.segments = count(gen);
        spec.sample_count = 1000;
        const double gamma_db = target(gen);
        const auto p = sweep::min_power(spec, gamma_db);
        const double rhs = std::pow(10.0, gamma_db / 10.0) * spec.radio.noise_power_w;
        worst = std::max(worst, std::abs(p.p_min_w * p.worst_gain - rhs) / rhs);
    }
    verdict(worst <= 1e-9, "solver-exactness", "100 scenarios, largest relative error " + fmt(worst, 3));
}

double ls_db(const ce::CeScenario& scenario, std::optional<double> snr, std::uint64_t count, std::uint64_t seed)
{
    ce::GenerateOptions opt;
    opt.split = "acceptance";
    opt.count = count;
    opt.master_seed = seed;
    opt.fixed_snr_db = snr;
    if (snr)
        return ce::ls_nmse_db(ce::generate_split(scenario, opt));

    // Noiseless pilots cannot be stored with a finite SNR; evaluate directly.
    const ce::ChannelModel model(scenario);
    ce::NmseAccumulator acc;
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto traj = ce::gen_trajectory(derive_seed(seed, 1, i), scenario);
        const auto pilots = ce::simulate_pilots(traj, model, std::nullopt, derive_seed(seed, 2, i));
        const auto est = ce::ls_estimate(std::span<const ce::PilotRecord>(pilots), scenario.pa_count);
        const auto truth = model.true_channel(traj.back().x_m);
        acc.add(ce::relative_error(std::span<const std::complex<double>>(est.csi),
                                   std::span<const std::complex<double>>(truth)));
    }
    return acc.db();
}

void ce_baseline()
{
    ce::CeScenario mobile;
    const double baseline = ls_db(mobile, 20.0, 10000, 1);
    const bool baseline_ok = std::abs(baseline - 1.46) <= 1.5;
    detail("LS NMSE at 60 km/h, T=16, SNR 20 dB: " + fmt(baseline) + " dB (target 1.46 +/- 1.5)");

    ce::CeScenario still;
    still.speed_mps = 0.0;
    const double floor = ls_db(still, std::nullopt, 10000, 2);
    const bool floor_ok = floor == ce::nmse_floor_db;
    detail("static user, no noise: " + fmt(floor) + " dB");

    bool monotone = true;
    double prev = -1e9;
    std::string trace;
    for (const double kmh : {0.0, 10.0, 60.0, 120.0}) {
        ce::CeScenario s;
        s.speed_mps = ce::kmh_to_mps(kmh);
        const double v = ls_db(s, std::nullopt, 10000, 3);
        monotone = monotone && v > prev;
        prev = v;
        trace += " " + fmt(kmh) + " km/h " + fmt(v) + " dB;";
    }
    detail("noiseless LS NMSE by speed:" + trace);
    std::string noisy;
    for (const double kmh : {0.0, 10.0, 60.0, 120.0}) {
        ce::CeScenario s;
        s.speed_mps = ce::kmh_to_mps(kmh);
        noisy += " " + fmt(kmh) + " km/h " + fmt(ls_db(s, 20.0, 10000, 3)) + " dB;";
    }
    detail("LS NMSE by speed at SNR 20 dB:" + noisy);
    verdict(baseline_ok && floor_ok && monotone, "ce-baseline",
            std::string("baseline ") + (baseline_ok ? "ok" : "out of band") + ", floor " +
                (floor_ok ? "ok" : "missed") + ", speed ordering " + (monotone ? "ok" : "broken"));
}

std::vector<char> slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::vector<char>& bytes)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::optional<DatasetErrc> read_error(const std::function<void()>& f)
{
    try {
        f();
    } catch (const DatasetError& e) {
        return e.code();
    }
    return std::nullopt;
}

void dataset_round_trip()
{
    char tmpl[] = "/tmp/railwave-acceptance-XXXXXX";
    const fs::path dir = mkdtemp(tmpl);
    ce::GenerateOptions opt;
    opt.split = "test";
    opt.count = 1000;
    opt.master_seed = 42;
    const auto split = ce::generate_split(ce::CeScenario{}, opt);
    ce::write_dataset(split, dir);
    const auto file = dir / "test.rwce";
    const auto back = ce::read_dataset(file);
    const auto bytes = slurp(file);
    const auto encoded = ce::encode_split(back);
    const bool identical = back.samples == split.samples &&
                           std::equal(bytes.begin(), bytes.end(), encoded.begin(), encoded.end(),
                                      [](char a, std::uint8_t b) { return static_cast<std::uint8_t>(a) == b; });
    detail(std::string("1000-sample split read back ") + (identical ? "byte-identical" : "DIFFERENT"));

    ce::write_predictions(ce::label_predictions(back), dir / "labels.rwpr");
    bool floor_everywhere = true;
    std::size_t buckets = 0;
    for (const auto& row : ce::score_predictions(back, ce::read_predictions(dir / "labels.rwpr", 16))) {
        floor_everywhere = floor_everywhere && row.nmse_db == ce::nmse_floor_db;
        ++buckets;
    }
    detail("ground-truth predictions: " + std::string(floor_everywhere ? "floor" : "NOT floor") + " in " +
           std::to_string(buckets) + " buckets");
    ce::write_predictions(ce::zero_predictions(back), dir / "zero.rwpr");
    double zero_db = 0.0;
    for (const auto& row : ce::score_predictions(back, ce::read_predictions(dir / "zero.rwpr", 16)))
        zero_db = std::max(zero_db, std::abs(row.nmse_db));
    detail("zero predictor scores " + fmt(zero_db, 3) + " dB away from 0 dB");

    struct Damage {
        const char* what;
        std::function<void(std::vector<char>&)> edit;
        DatasetErrc expected;
    };
    const std::vector<Damage> damages{
        {"magic", [](auto& b) { b[0] = 'X'; }, DatasetErrc::bad_magic},
        {"version", [](auto& b) { b[4] = 9; }, DatasetErrc::version_mismatch},
        {"header count", [](auto& b) { b[8] ^= 0x01; }, DatasetErrc::count_mismatch},
        {"truncation", [](auto& b) { b.resize(b.size() - 100); }, DatasetErrc::truncated},
        {"extra record bytes", [](auto& b) { b.insert(b.end(), 352, 0); }, DatasetErrc::count_mismatch},
        {"payload bit flip", [](auto& b) { b[5000] ^= 0x10; }, DatasetErrc::hash_mismatch},
    };
    bool kinds_ok = true;
    for (const auto& d : damages) {
        auto damaged = bytes;
        d.edit(damaged);
        spit(file, damaged);
        const auto got = read_error([&] { ce::read_dataset(file); });
        const bool ok = got == d.expected;
        kinds_ok = kinds_ok && ok;
        detail(std::string(d.what) + ": " + (got ? to_string(*got) : "accepted") + (ok ? "" : "  WRONG"));
    }
    spit(file, bytes);
    auto short_pred = ce::zero_predictions(back);
    short_pred.values.resize(short_pred.values.size() - 16);
    const auto got = read_error([&] { ce::score_predictions(back, short_pred); });
    kinds_ok = kinds_ok && got == DatasetErrc::count_mismatch;
    detail(std::string("short prediction file: ") + (got ? to_string(*got) : "accepted"));

    fs::remove_all(dir);
    verdict(identical && floor_everywhere && kinds_ok, "dataset-round-trip",
            std::string(identical ? "identical" : "mismatch") + ", " + (floor_everywhere ? "floor" : "no floor") +
                ", corruption " + (kinds_ok ? "rejected by kind" : "misclassified"));
}

} // namespace

int main()
{
    const sweep::MatrixOptions options;
    const auto start = std::chrono::steady_clock::now();
    const auto rows = sweep::compare_matrix(lengths, counts, options);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::vector<std::pair<const char*, std::function<void()>>> criteria{
        {"fig2-deltas", [&] { fig2_deltas(rows, seconds, options); }},
        {"ordering-suite", [&] { ordering_suite(rows); }},
        {"fig3-power", fig3},
        {"oracle-suite", oracle_suite},
        {"solver-exactness", solver_exactness},
        {"ce-baseline", ce_baseline},
        {"dataset-round-trip", dataset_round_trip},
    };
    for (const auto& [name, run] : criteria) {
        try {
            run();
        } catch (const std::exception& e) {
            verdict(false, name, std::string("threw: ") + e.what());
        }
    }
    std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed") << std::endl;
    return failures ? EXIT_FAILURE : EXIT_SUCCESS;
}
