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

#include <cmath>
#include <numbers>

namespace railwave {

inline constexpr double speed_of_light_mps = 299'792'458.0;
inline constexpr double pi = std::numbers::pi;

// Wavelength in meters for a carrier in Hz. Throws InvalidConfig for f <= 0.
double wavelength(double frequency_hz);

double dbm_to_watts(double p_dbm);

// Throws DomainError for non-positive power.
double watts_to_dbm(double p_w);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double ratio);

/// Straight corridor of length L. The radiating line (waveguide or cable)
/// runs at height Dz above the user trajectory; both share y = Dy/2, so the
/// width never enters a distance.
struct CorridorGeometry {
    double length_m = 100.0;
    double width_m = 20.0;
    double height_m = 5.0;

    void validate() const;
};

/// Carrier and link budget. Powers are stored in watts; dBm only appears at
/// the configuration and reporting boundary.
struct RadioConfig {
    double carrier_frequency_hz = 28e9;
    double noise_power_w = 1e-15;
    double transmit_power_w = 1e-2;

    static RadioConfig from_dbm(double carrier_frequency_hz, double noise_dbm, double transmit_dbm);

    double wavelength_m() const { return wavelength(carrier_frequency_hz); }
    void validate() const;
};

// Distance between a user at x_user (z = 0) and a radiator at x_radiator
// on the radiating line (z = Dz).
double slant_distance(double x_user, double x_radiator, const CorridorGeometry& geometry);

// Free-space amplitude lambda / (4 pi d). Throws SingularityError for d <= 0.
double free_space_amplitude(double distance_m, double wavelength_m);

// Spectral efficiency log2(1 + snr) in bps/Hz.
double spectral_efficiency(double snr);

} // namespace railwave
