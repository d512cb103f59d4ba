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

#include <algorithm>
#include <cmath>
#include <limits>

namespace railwave::ce {

double kmh_to_mps(double kmh)
{
    return kmh / 3.6;
}

void CeScenario::validate() const
{
    geometry.validate();
    wavelength(carrier_frequency_hz);
    if (pa_count == 0)
        throw InvalidConfig("scenario needs at least one PA");
    if (!(speed_mps >= 0.0) || !std::isfinite(speed_mps))
        throw InvalidConfig("speed must be finite and non-negative");
    if (!(pilot_interval_s > 0.0))
        throw InvalidConfig("pilot interval must be positive");
    if (history == 0)
        throw InvalidConfig("history length T must be at least 1");
    if (!(snr_min_db <= snr_max_db) || !std::isfinite(snr_min_db) || !std::isfinite(snr_max_db))
        throw InvalidConfig("SNR range must be finite with min <= max");
    if (window_span_m() >= geometry.length_m)
        throw InvalidConfig("corridor is shorter than one pilot window");
}

double CeScenario::window_span_m() const
{
    return speed_mps * static_cast<double>(history) * pilot_interval_s;
}

double compute_normalization(const pass::PassArray& array, double wavelength_m, std::size_t samples)
{
    const double length = array.geometry().length_m;
    double total = 0.0;
    for (std::size_t n = 0; n < array.size(); ++n) {
        double per_pa = 0.0;
        for (std::size_t k = 0; k < samples; ++k) {
            const double x = (static_cast<double>(k) + 0.5) * length / static_cast<double>(samples);
            per_pa += std::norm(pass::channel_entry(array, n, x, wavelength_m));
        }
        total += per_pa / static_cast<double>(samples);
    }
    return total / static_cast<double>(array.size());
}

ChannelModel::ChannelModel(const CeScenario& scenario)
    : scenario_(scenario),
      array_(pass::build_equidistant(scenario.pa_count, scenario.geometry, scenario.eta, scenario.n_eff)),
      wavelength_(wavelength(scenario.carrier_frequency_hz)),
      normalization_(compute_normalization(array_, wavelength_))
{
    scenario_.validate();
}

std::complex<double> ChannelModel::true_entry(std::size_t pa, double x_user) const
{
    return pass::channel_entry(array_, pa, x_user, wavelength_) / std::sqrt(normalization_);
}

std::vector<std::complex<double>> ChannelModel::true_channel(double x_user) const
{
    std::vector<std::complex<double>> h(array_.size());
    for (std::size_t n = 0; n < h.size(); ++n)
        h[n] = true_entry(n, x_user);
    return h;
}

std::vector<TrajectoryPoint> gen_trajectory(std::uint64_t seed, const CeScenario& scenario)
{
    scenario.validate();
    Rng rng(seed);
    const double x0 = rng.uniform(0.0, scenario.geometry.length_m - scenario.window_span_m());
    const auto t0 = static_cast<std::int64_t>(rng.below(scenario.pa_count));
    const double step = scenario.speed_mps * scenario.pilot_interval_s;

    std::vector<TrajectoryPoint> points(scenario.history);
    for (std::size_t t = 0; t < scenario.history; ++t) {
        points[t].time_index = t0 + static_cast<std::int64_t>(t);
        points[t].x_m = x0 + step * static_cast<double>(t);
    }
    return points;
}

std::uint32_t scheduled_pa(std::int64_t time_index, std::size_t pa_count)
{
    const auto n = static_cast<std::int64_t>(pa_count);
    return static_cast<std::uint32_t>(((time_index % n) + n) % n);
}

std::vector<PilotRecord> simulate_pilots(std::span<const TrajectoryPoint> trajectory,
                                         const ChannelModel& model, std::optional<double> snr_db,
                                         std::uint64_t noise_seed)
{
    if (snr_db && !std::isfinite(*snr_db))
        throw InvalidConfig("pilot SNR must be finite (omit it for noiseless pilots)");
    Rng rng(noise_seed);
    const double sigma = snr_db ? std::sqrt(db_to_linear(-*snr_db) / 2.0) : 0.0;

    std::vector<PilotRecord> pilots(trajectory.size());
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        auto& rec = pilots[i];
        rec.time_index = trajectory[i].time_index;
        rec.active_pa = scheduled_pa(rec.time_index, model.array().size());
        rec.x_user = trajectory[i].x_m;
        rec.snr_db = snr_db ? *snr_db : std::numeric_limits<double>::infinity();
        rec.observation = model.true_entry(rec.active_pa, rec.x_user);
        if (snr_db) {
            const double re = rng.normal();
            const double im = rng.normal();
            rec.observation += std::complex<double>(sigma * re, sigma * im);
        }
    }
    return pilots;
}

std::size_t LsEstimate::unobserved_count() const
{
    return static_cast<std::size_t>(std::count(observed.begin(), observed.end(), false));
}

namespace {

template <typename Record, typename IndexFn, typename ObsFn>
LsEstimate ls_from(std::span<const Record> window, std::size_t pa_count, IndexFn index_of, ObsFn obs_of)
{
    LsEstimate est;
    est.csi.assign(pa_count, {0.0, 0.0});
    est.observed.assign(pa_count, false);
    // Later pilots overwrite earlier ones, leaving the freshest observation.
    for (const auto& rec : window) {
        const std::size_t pa = index_of(rec);
        if (pa >= pa_count)
            throw InvalidConfig("pilot refers to a PA outside the array");
        est.csi[pa] = obs_of(rec);
        est.observed[pa] = true;
    }
    return est;
}

} // namespace

LsEstimate ls_estimate(std::span<const PilotRecord> window, std::size_t pa_count)
{
    return ls_from(
        window, pa_count, [](const PilotRecord& r) { return static_cast<std::size_t>(r.active_pa); },
        [](const PilotRecord& r) { return r.observation; });
}

LsEstimate ls_estimate(std::span<const PilotTuple> window, std::size_t pa_count)
{
    return ls_from(
        window, pa_count, [](const PilotTuple& r) { return static_cast<std::size_t>(r.pa_index); },
        [](const PilotTuple& r) {
            return std::complex<double>(r.observation.real(), r.observation.imag());
        });
}

double to_nmse_db(double mean_relative_error)
{
    const double floor_linear = std::pow(10.0, nmse_floor_db / 10.0);
    return 10.0 * std::log10(std::max(mean_relative_error, floor_linear));
}

double nmse_db(std::span<const std::complex<double>> estimate, std::span<const std::complex<double>> truth)
{
    return to_nmse_db(relative_error(estimate, truth));
}

} // namespace railwave::ce
