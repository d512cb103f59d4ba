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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace railwave::lcx {

struct CableParams {
    double slot_pitch_m = 0.08;
    double attenuation_db_per_m = 9.8 / 100.0;
    double epsilon_r = 1.26;

    void validate() const;
};

/// One feed of a slotted cable. Slot m sits at x_m, at guided distance
/// l_m from the feed, and radiates a_m^2 watts where
/// a_m^2 ~ 10^(-alpha l_m / 10) and sum a_m^2 equals the feed power.
class LcxCable {
public:
    LcxCable(double span_begin_m, double span_end_m, double feed_origin_m, int feed_direction,
             double feed_power_w, const CableParams& params, double wavelength_m);

    std::span<const double> slot_positions() const { return x_; }
    // Amplitudes a_m in sqrt-watts.
    std::span<const double> slot_weights() const { return weight_; }
    // a_m^2 / feed power; sums to one.
    std::span<const double> slot_shares() const { return share_; }
    std::span<const double> guided_distances() const { return guided_; }
    // 2 pi sqrt(eps_r) l_m / lambda, reduced modulo 2 pi.
    std::span<const double> guided_phases() const { return guided_phase_; }
    std::size_t slot_count() const { return x_.size(); }
    double feed_origin() const { return feed_origin_; }
    int feed_direction() const { return feed_direction_; }
    double feed_power_w() const { return feed_power_; }
    double wavelength_m() const { return wavelength_; }

    // Same slots and attenuation profile, rescaled to another feed power.
    LcxCable with_feed_power(double feed_power_w) const;

private:
    std::vector<double> x_;
    std::vector<double> share_;
    std::vector<double> weight_;
    std::vector<double> guided_;
    std::vector<double> guided_phase_;
    double feed_origin_;
    int feed_direction_;
    double feed_power_;
    double wavelength_;
};

// Received power (watts) from one feed; coherent sum and its phase-free local mean.
struct FeedPower {
    double coherent_w = 0.0;
    double local_mean_w = 0.0;
};

FeedPower feed_power_at_user(const LcxCable& cable, double x_user, const CorridorGeometry& geometry);

enum class FeedMode { single, double_ended, segmented };

struct LcxDeployment {
    FeedMode mode = FeedMode::single;
    std::size_t segments = 1;
    CorridorGeometry geometry;
    std::vector<LcxCable> feeds;
};

/// single: one feed at x = 0 with P_t. double_ended: feeds at 0 and L
/// sharing one slot grid, P_t/2 each. segmented: S feeds at s L / S, each
/// P_t / S and confined to its own segment.
LcxDeployment build_lcx(FeedMode mode, std::size_t segments, const CorridorGeometry& geometry,
                        const RadioConfig& radio, const CableParams& params = {});

// Feeds add in power (independent feed equipment).
FeedPower lcx_received_power(const LcxDeployment& deployment, double x_user);

double lcx_snr(const LcxDeployment& deployment, double x_user, const RadioConfig& radio);

std::string to_string(FeedMode mode);

} // namespace railwave::lcx
