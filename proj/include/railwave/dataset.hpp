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

#include "railwave/ce_harness.hpp"

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace railwave::ce {

inline constexpr char dataset_magic[4] = {'R', 'W', 'C', 'E'};
inline constexpr char prediction_magic[4] = {'R', 'W', 'P', 'R'};
inline constexpr std::uint32_t dataset_version = 1;
inline constexpr std::uint32_t prediction_version = 1;
inline constexpr int manifest_schema_version = 1;
inline constexpr const char* manifest_file_name = "manifest.json";

/// One supervised example: T pilot tuples (features) and the true
/// normalized channel at the last pilot instant (label).
struct DatasetSample {
    float snr_db = 0.0f;
    std::vector<PilotTuple> pilots;
    std::vector<std::complex<float>> label;

    bool operator==(const DatasetSample&) const = default;
};

struct SplitInfo {
    std::string file;
    std::uint64_t count = 0;
    std::string sha256;
};

/// Everything needed to regenerate or audit a dataset directory.
struct DatasetManifest {
    CeScenario scenario;
    std::optional<double> fixed_snr_db;
    double normalization_constant = 0.0;
    std::uint64_t master_seed = 0;
    std::map<std::string, SplitInfo> splits;

    std::string scenario_hash() const;
};

struct DatasetSplit {
    std::string name;
    DatasetManifest manifest;
    std::vector<DatasetSample> samples;
};

// Default record counts: train 70 000, val 30 000, test 10 000.
std::uint64_t default_split_size(const std::string& split);

struct GenerateOptions {
    std::string split = "test";
    std::uint64_t count = 0; // 0 selects default_split_size(split)
    std::uint64_t master_seed = 1;
    std::optional<double> fixed_snr_db; // otherwise uniform over the scenario range
};

/// Sample i draws from seeds derive_seed(master, tag(split), i), so the
/// content is independent of worker count and generation order.
DatasetSplit generate_split(const CeScenario& scenario, const GenerateOptions& options);

// Builds one sample (also used by generate_split).
DatasetSample make_sample(const ChannelModel& model, std::uint64_t sample_seed,
                          std::optional<double> fixed_snr_db);

std::vector<std::uint8_t> encode_split(const DatasetSplit& split);

/// Writes <dir>/<split>.rwce and creates or updates <dir>/manifest.json.
/// An existing manifest must describe the same scenario and master seed.
void write_dataset(const DatasetSplit& split, const std::filesystem::path& dir);

/// Reads a split file next to its manifest. Failures raise DatasetError:
/// bad_magic, version_mismatch, count_mismatch (manifest vs header, or
/// trailing records), truncated, hash_mismatch, manifest_invalid.
DatasetSplit read_dataset(const std::filesystem::path& split_file);

DatasetManifest read_manifest(const std::filesystem::path& dir);

std::string sha256_hex(const std::vector<std::uint8_t>& bytes);

/// Predictions: one pa_count-entry complex vector per sample, in dataset order.
struct Predictions {
    std::size_t width = 16;
    std::vector<std::complex<float>> values; // row-major, count() x width

    std::size_t count() const { return width ? values.size() / width : 0; }
    std::span<const std::complex<float>> row(std::size_t i) const
    {
        return std::span<const std::complex<float>>(values).subspan(i * width, width);
    }
};

void write_predictions(const Predictions& predictions, const std::filesystem::path& path);
Predictions read_predictions(const std::filesystem::path& path, std::size_t width);

// Convenience predictors for exercising the scorer without a trained model.
Predictions zero_predictions(const DatasetSplit& split);
Predictions label_predictions(const DatasetSplit& split);
Predictions ls_predictions(const DatasetSplit& split, std::optional<std::size_t> last_t = std::nullopt);

// Nearest integer dB.
int snr_bucket(double snr_db);

struct ScoreRow {
    std::size_t t = 0;
    int snr_bucket_db = 0;
    std::size_t samples = 0;
    double nmse_db = 0.0;
    double baseline_ls_nmse_db = 0.0;
};

/// NMSE per (T, SNR bucket) for the predictions, side by side with LS on
/// the same samples. Throws DatasetError(count_mismatch) when the
/// prediction count differs from the split.
std::vector<ScoreRow> score_predictions(const DatasetSplit& split, const Predictions& predictions);

struct LsRow {
    std::size_t t = 0;
    int snr_bucket_db = 0;
    std::size_t samples = 0;
    double nmse_db = 0.0;
};

/// LS NMSE per SNR bucket using only the last `last_t` pilots of every
/// window (the whole window when unset).
std::vector<LsRow> ls_evaluate(const DatasetSplit& split, std::optional<std::size_t> last_t = std::nullopt);

// Mean NMSE in dB over the whole split, ignoring buckets.
double ls_nmse_db(const DatasetSplit& split, std::optional<std::size_t> last_t = std::nullopt);

} // namespace railwave::ce
