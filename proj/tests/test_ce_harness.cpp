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

#include "railwave/ce_harness.hpp"
#include "railwave/error.hpp"
#include "railwave/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace railwave;
using namespace railwave::ce;

namespace {

// LS NMSE in dB over `windows` random windows, keeping the last `t` pilots.
double ls_nmse(const ChannelModel& model, std::optional<double> snr_db, std::size_t t, std::size_t windows,
               std::uint64_t seed)
{
    NmseAccumulator acc;
    for (std::size_t w = 0; w < windows; ++w) {
        const auto traj = gen_trajectory(derive_seed(seed, 1, w), model.scenario());
        const auto pilots = simulate_pilots(traj, model, snr_db, derive_seed(seed, 2, w));
        const auto est = ls_estimate(std::span<const PilotRecord>(pilots).last(t), model.array().size());
        const auto truth = model.true_channel(traj.back().x_m);
        acc.add(relative_error(std::span<const std::complex<double>>(est.csi),
                               std::span<const std::complex<double>>(truth)));
    }
    return acc.db();
}

} // namespace

TEST_CASE("scenario defaults and validation")
{
    const CeScenario s;
    CHECK(s.pa_count == 16);
    CHECK(s.history == 16);
    CHECK(s.speed_mps == doctest::Approx(kmh_to_mps(60.0)));
    CHECK(kmh_to_mps(36.0) == doctest::Approx(10.0));
    CHECK(s.window_span_m() == doctest::Approx(60.0 / 3.6 * 16 * 0.625e-3));
    CHECK_NOTHROW(s.validate());

    CeScenario bad = s;
    bad.pa_count = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidConfig);
    bad = s;
    bad.speed_mps = -1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidConfig);
    bad = s;
    bad.history = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidConfig);
    bad = s;
    bad.snr_min_db = 30.0;
    CHECK_THROWS_AS(bad.validate(), InvalidConfig);
    bad = s;
    bad.pilot_interval_s = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidConfig);
    bad = s;
    bad.speed_mps = 1e5;
    CHECK_THROWS_AS(bad.validate(), InvalidConfig);
}

TEST_CASE("channel normalization gives unit average power")
{
    const ChannelModel model{CeScenario{}};
    CHECK(model.array().size() == 16);
    CHECK(model.array().positions()[1] - model.array().positions()[0] == doctest::Approx(6.25));
    double total = 0.0;
    const std::size_t k = 20000;
    for (std::size_t i = 0; i < k; ++i) {
        const double x = (static_cast<double>(i) + 0.5) * 100.0 / static_cast<double>(k);
        for (const auto& h : model.true_channel(x))
            total += std::norm(h);
    }
    CHECK(total / (16.0 * static_cast<double>(k)) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(model.normalization_constant() > 0.0);
    CHECK(model.true_entry(3, 42.0) == model.true_channel(42.0)[3]);
}

TEST_CASE("trajectories")
{
    const CeScenario s;
    const double step = s.speed_mps * s.pilot_interval_s;
    std::set<std::int64_t> starts;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const auto traj = gen_trajectory(seed, s);
        REQUIRE(traj.size() == s.history);
        CHECK(traj.front().x_m >= 0.0);
        CHECK(traj.back().x_m <= s.geometry.length_m);
        CHECK(traj.front().time_index >= 0);
        CHECK(traj.front().time_index < 16);
        starts.insert(traj.front().time_index);
        for (std::size_t t = 1; t < traj.size(); ++t) {
            CHECK(traj[t].time_index == traj[t - 1].time_index + 1);
            CHECK(traj[t].x_m - traj[t - 1].x_m == doctest::Approx(step).epsilon(1e-9));
        }
    }
    CHECK(starts.size() == 16);
    const auto a = gen_trajectory(77, s);
    const auto b = gen_trajectory(77, s);
    for (std::size_t t = 0; t < a.size(); ++t)
        CHECK(a[t].x_m == b[t].x_m);
}

TEST_CASE("round-robin schedule covers every PA once per 16 pilots")
{
    for (std::int64_t start = -40; start < 40; start += 7) {
        std::set<std::uint32_t> seen;
        for (std::int64_t t = start; t < start + 16; ++t)
            seen.insert(scheduled_pa(t, 16));
        CHECK(seen.size() == 16);
    }
    CHECK(scheduled_pa(17, 16) == 1);
    CHECK(scheduled_pa(-1, 16) == 15);
}

TEST_CASE("pilot simulation")
{
    const ChannelModel model{CeScenario{}};
    const auto traj = gen_trajectory(5, model.scenario());
    const auto clean = simulate_pilots(traj, model, std::nullopt, 9);
    for (std::size_t t = 0; t < clean.size(); ++t) {
        CHECK(clean[t].active_pa == scheduled_pa(traj[t].time_index, 16));
        CHECK(clean[t].observation == model.true_entry(clean[t].active_pa, traj[t].x_m));
        CHECK(std::isinf(clean[t].snr_db));
    }
    CHECK_THROWS_AS(simulate_pilots(traj, model, std::numeric_limits<double>::infinity(), 1), InvalidConfig);

    // Noise power 10^(-snr/10).
    double noise = 0.0;
    std::size_t n = 0;
    for (std::uint64_t w = 0; w < 3000; ++w) {
        const auto noisy = simulate_pilots(traj, model, 10.0, w);
        for (std::size_t t = 0; t < noisy.size(); ++t, ++n)
            noise += std::norm(noisy[t].observation - clean[t].observation);
    }
    CHECK(noise / static_cast<double>(n) == doctest::Approx(0.1).epsilon(0.03));
}

TEST_CASE("LS keeps the freshest observation")
{
    const std::vector<PilotTuple> window{{2, {1.0f, 0.0f}}, {5, {0.0f, 1.0f}}, {2, {3.0f, -1.0f}}};
    const auto est = ls_estimate(std::span<const PilotTuple>(window), 8);
    CHECK(est.csi[2] == std::complex<double>(3.0, -1.0));
    CHECK(est.csi[5] == std::complex<double>(0.0, 1.0));
    CHECK(est.csi[0] == std::complex<double>(0.0, 0.0));
    CHECK(est.unobserved_count() == 6);
    CHECK(est.observed[2]);
    CHECK_FALSE(est.observed[7]);
    const std::vector<PilotTuple> bad{{8, {1.0f, 0.0f}}};
    CHECK_THROWS_AS(ls_estimate(std::span<const PilotTuple>(bad), 8), InvalidConfig);
}

TEST_CASE("NMSE reference points")
{
    const std::vector<std::complex<double>> truth{{1.0, 2.0}, {-0.5, 0.25}, {0.0, -3.0}};
    std::vector<std::complex<double>> zero(3);
    std::vector<std::complex<double>> twice(3);
    for (std::size_t i = 0; i < 3; ++i)
        twice[i] = 2.0 * truth[i];
    CHECK(nmse_db(truth, truth) == nmse_floor_db);
    CHECK(nmse_db(zero, truth) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(nmse_db(twice, truth) == doctest::Approx(0.0).epsilon(1e-12));
    for (const double c : {-2.0, 0.1, 0.5, 0.99, 1.5, 7.0}) {
        std::vector<std::complex<double>> scaled(3);
        for (std::size_t i = 0; i < 3; ++i)
            scaled[i] = c * truth[i];
        CHECK(nmse_db(scaled, truth) == doctest::Approx(20.0 * std::log10(std::abs(c - 1.0))).epsilon(1e-9));
    }
    CHECK_THROWS_AS(nmse_db(zero, zero), DomainError);
    const std::vector<std::complex<double>> shorter(2);
    CHECK_THROWS_AS(nmse_db(shorter, truth), InvalidConfig);
    CHECK(to_nmse_db(0.0) == nmse_floor_db);

    NmseAccumulator acc;
    acc.add(1.0);
    acc.add(0.0);
    CHECK(acc.count() == 2);
    CHECK(acc.db() == doctest::Approx(10.0 * std::log10(0.5)));
}

TEST_CASE("static noiseless user is estimated exactly")
{
    CeScenario s;
    s.speed_mps = 0.0;
    const ChannelModel model(s);
    CHECK(ls_nmse(model, std::nullopt, 16, 200, 1) == nmse_floor_db);
}

TEST_CASE("LS NMSE is non-increasing in T for a static user")
{
    CeScenario s;
    s.speed_mps = 0.0;
    const ChannelModel model(s);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t t = 1; t <= 16; ++t) {
        const double v = ls_nmse(model, 20.0, t, 400, 3);
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
}

TEST_CASE("LS NMSE is non-increasing in T at 60 km/h" * doctest::should_fail())
{
    // With zeros for unsounded PAs, a stale observation whose phase has
    // rotated by more than 60 degrees costs more than the zero it replaces.
    const ChannelModel model{CeScenario{}};
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t t = 1; t <= 16; ++t) {
        const double v = ls_nmse(model, 20.0, t, 400, 3);
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
}

TEST_CASE("channel aging without noise")
{
    for (const double kmh : {10.0, 60.0, 120.0}) {
        CeScenario s;
        s.speed_mps = kmh_to_mps(kmh);
        const ChannelModel model(s);
        for (const std::size_t t : {2, 8, 16})
            CHECK(ls_nmse(model, std::nullopt, t, 100, 5) > nmse_floor_db);
    }
}
