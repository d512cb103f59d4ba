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

#include <stdexcept>
#include <string>

namespace railwave {

// Parameter combinations that cannot describe a physical deployment.
class InvalidConfig : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input outside the mathematical domain of a conversion (log of zero power, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Free-space amplitude evaluated at zero distance.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Exhaustive subset search refused because the array is too large.
class OracleCapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

// No finite transmit power reaches the requested SNR.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class DatasetErrc {
    bad_magic,
    version_mismatch,
    truncated,
    count_mismatch,
    hash_mismatch,
    manifest_invalid,
    io_failure,
};

const char* to_string(DatasetErrc code) noexcept;

// Raised by the dataset and prediction file readers/writers. The kind
// distinguishes format damage from integrity failures.
class DatasetError : public std::runtime_error {
public:
    DatasetError(DatasetErrc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    DatasetErrc code() const noexcept { return code_; }

private:
    DatasetErrc code_;
};

} // namespace railwave
