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

#include "railwave/corridor.hpp"
#include "railwave/error.hpp"

#include <cmath>
#include <string>

namespace railwave {

const char* to_string(DatasetErrc code) noexcept
{
    switch (code) {
    case DatasetErrc::bad_magic: return "bad magic";
    case DatasetErrc::version_mismatch: return "version mismatch";
    case DatasetErrc::truncated: return "truncated file";
    case DatasetErrc::count_mismatch: return "record count mismatch";
    case DatasetErrc::hash_mismatch: return "content hash mismatch";
    case DatasetErrc::manifest_invalid: return "invalid manifest";
    case DatasetErrc::io_failure: return "i/o failure";
    }
    return "unknown dataset error";
}

double wavelength(double frequency_hz)
{
    if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz))
        throw InvalidConfig("carrier frequency must be positive and finite");
    return speed_of_light_mps / frequency_hz;
}

double dbm_to_watts(double p_dbm)
{
    return std::pow(10.0, (p_dbm - 30.0) / 10.0);
}

double watts_to_dbm(double p_w)
{
    if (!(p_w > 0.0))
        throw DomainError("power in watts must be positive to convert to dBm");
    return 10.0 * std::log10(p_w) + 30.0;
}

double linear_to_db(double ratio)
{
    if (!(ratio > 0.0))
        throw DomainError("ratio must be positive to convert to dB");
    return 10.0 * std::log10(ratio);
}

void CorridorGeometry::validate() const
{
    if (!(length_m > 0.0) || !(width_m > 0.0) || !(height_m > 0.0))
        throw InvalidConfig("corridor length, width and height must be positive");
    if (!std::isfinite(length_m) || !std::isfinite(width_m) || !std::isfinite(height_m))
        throw InvalidConfig("corridor dimensions must be finite");
}

RadioConfig RadioConfig::from_dbm(double carrier_frequency_hz, double noise_dbm, double transmit_dbm)
{
    RadioConfig radio;
    radio.carrier_frequency_hz = carrier_frequency_hz;
    radio.noise_power_w = dbm_to_watts(noise_dbm);
    radio.transmit_power_w = dbm_to_watts(transmit_dbm);
    radio.validate();
    return radio;
}

void RadioConfig::validate() const
{
    wavelength(carrier_frequency_hz);
    if (!(noise_power_w > 0.0))
        throw InvalidConfig("noise power must be positive");
    if (!(transmit_power_w >= 0.0))
        throw InvalidConfig("transmit power must be non-negative");
}

double slant_distance(double x_user, double x_radiator, const CorridorGeometry& geometry)
{
    const double dx = x_user - x_radiator;
    return std::sqrt(dx * dx + geometry.height_m * geometry.height_m);
}

double free_space_amplitude(double distance_m, double wavelength_m)
{
    if (!(distance_m > 0.0))
        throw SingularityError("free-space amplitude is singular at zero distance");
    if (!(wavelength_m > 0.0))
        throw InvalidConfig("wavelength must be positive");
    return wavelength_m / (4.0 * pi * distance_m);
}

double spectral_efficiency(double snr)
{
    return std::log2(1.0 + snr);
}

} // namespace railwave
