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

#pragma once

#include "railwave/corridor.hpp"
#include "railwave/error.hpp"
#include "railwave/pass_channel.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace railwave::ce {

inline constexpr double nmse_floor_db = -100.0;

double kmh_to_mps(double kmh);

/// Mobility scenario for the channel-estimation benchmark: a user moving
/// rightward at constant speed under an equidistant PA array, one PA
/// sounded per pilot in round-robin order.
struct CeScenario {
    CorridorGeometry geometry{100.0, 20.0, 5.0};
    double carrier_frequency_hz = 28e9;
    std::size_t pa_count = 16;
    double eta = pass::default_eta;
    double n_eff = pass::default_n_eff;
    double speed_mps = 60.0 / 3.6;
    double pilot_interval_s = 0.625e-3;
    std::size_t history = 16;
    double snr_min_db = 0.0;
    double snr_max_db = 20.0;

    void validate() const;
    double window_span_m() const;
};

/// Channel of the scenario's PA array, scaled so that the mean of |h_n|^2
/// over all PAs and over user positions spread uniformly along the
/// corridor equals one.
class ChannelModel {
public:
    explicit ChannelModel(const CeScenario& scenario);

    const CeScenario& scenario() const { return scenario_; }
    const pass::PassArray& array() const { return array_; }
    double wavelength_m() const { return wavelength_; }
    double normalization_constant() const { return normalization_; }

    std::vector<std::complex<double>> true_channel(double x_user) const;
    std::complex<double> true_entry(std::size_t pa, double x_user) const;

private:
    CeScenario scenario_;
    pass::PassArray array_;
    double wavelength_;
    double normalization_;
};

// Mean of |h_n(x)|^2 over PAs and a midpoint grid of `samples` positions.
double compute_normalization(const pass::PassArray& array, double wavelength_m,
                             std::size_t samples = 100'000);

struct TrajectoryPoint {
    std::int64_t time_index = 0;
    double x_m = 0.0;
};

/// history points: x_0 uniform on [0, L - v T dt], x_t = x_0 + v t dt. The
/// first time index is drawn uniformly from [0, pa_count) so the schedule
/// phase varies between windows.
std::vector<TrajectoryPoint> gen_trajectory(std::uint64_t seed, const CeScenario& scenario);

struct PilotRecord {
    std::int64_t time_index = 0;
    std::uint32_t active_pa = 0;
    std::complex<double> observation;
    double snr_db = 0.0;
    double x_user = 0.0; // ground truth; never serialized
};

std::uint32_t scheduled_pa(std::int64_t time_index, std::size_t pa_count);

/// observation = h[active](x_t) + w_t, w ~ CN(0, 10^(-snr/10)). With no
/// SNR the pilots are noiseless and snr_db is recorded as +inf.
std::vector<PilotRecord> simulate_pilots(std::span<const TrajectoryPoint> trajectory,
                                         const ChannelModel& model, std::optional<double> snr_db,
                                         std::uint64_t noise_seed);

struct LsEstimate {
    std::vector<std::complex<double>> csi;
    std::vector<bool> observed;

    std::size_t unobserved_count() const;
};

/// Unit pilots, so LS is the raw observation: each PA takes its most recent
/// observation in the window; PAs never sounded stay at zero and are flagged.
LsEstimate ls_estimate(std::span<const PilotRecord> window, std::size_t pa_count);

struct PilotTuple {
    std::uint32_t pa_index = 0;
    std::complex<float> observation;

    bool operator==(const PilotTuple&) const = default;
};

LsEstimate ls_estimate(std::span<const PilotTuple> window, std::size_t pa_count);

// ||estimate - truth||^2 / ||truth||^2. Throws DomainError for a zero truth.
template <typename T, typename U>
double relative_error(std::span<const std::complex<T>> estimate, std::span<const std::complex<U>> truth)
{
    if (estimate.size() != truth.size())
        throw InvalidConfig("estimate and truth differ in length");
    double err = 0.0;
    double ref = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const std::complex<double> t(truth[i].real(), truth[i].imag());
        const std::complex<double> e(estimate[i].real(), estimate[i].imag());
        err += std::norm(e - t);
        ref += std::norm(t);
    }
    if (!(ref > 0.0))
        throw DomainError("NMSE is undefined for an all-zero true channel");
    return err / ref;
}

// 10 log10 of a mean relative error, floored at -100 dB.
double to_nmse_db(double mean_relative_error);

// Single-sample NMSE in dB.
double nmse_db(std::span<const std::complex<double>> estimate,
               std::span<const std::complex<double>> truth);

/// Streaming mean of relative errors.
class NmseAccumulator {
public:
    void add(double relative_error_value)
    {
        sum_ += relative_error_value;
        ++count_;
    }
    std::size_t count() const { return count_; }
    double mean() const { return count_ ? sum_ / static_cast<double>(count_) : 0.0; }
    double db() const { return to_nmse_db(mean()); }

private:
    double sum_ = 0.0;
    std::size_t count_ = 0;
};

} // namespace railwave::ce
