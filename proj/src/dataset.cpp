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

#include "railwave/dataset.hpp"
#include "railwave/error.hpp"
#include "railwave/parallel.hpp"
#include "railwave/rng.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace railwave::ce {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t trajectory_stream = 1;
constexpr std::uint64_t noise_stream = 2;
constexpr std::uint64_t snr_stream = 3;

class ByteWriter {
public:
    void bytes(const char* data, std::size_t n) { out_.insert(out_.end(), data, data + n); }

    void u32(std::uint32_t v)
    {
        for (int i = 0; i < 4; ++i)
            out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    void u64(std::uint64_t v)
    {
        for (int i = 0; i < 8; ++i)
            out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    std::vector<std::uint8_t> out_;
};

class ByteReader {
public:
    ByteReader(const std::vector<std::uint8_t>& data, std::string what) : data_(data), what_(std::move(what)) {}

    std::size_t remaining() const { return data_.size() - pos_; }

    void need(std::size_t n) const
    {
        if (remaining() < n)
            throw DatasetError(DatasetErrc::truncated, what_ + " ends early at byte " + std::to_string(pos_));
    }

    bool magic(const char (&expected)[4])
    {
        need(4);
        const bool ok = std::memcmp(data_.data() + pos_, expected, 4) == 0;
        pos_ += 4;
        return ok;
    }

    std::uint32_t u32()
    {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(data_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
        pos_ += 4;
        return v;
    }

    std::uint64_t u64()
    {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(data_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
        pos_ += 8;
        return v;
    }

    float f32() { return std::bit_cast<float>(u32()); }

private:
    const std::vector<std::uint8_t>& data_;
    std::string what_;
    std::size_t pos_ = 0;
};

std::vector<std::uint8_t> read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DatasetError(DatasetErrc::io_failure, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const fs::path& path, const void* data, std::size_t size)
{
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw DatasetError(DatasetErrc::io_failure, "cannot write " + tmp.string());
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
        if (!out)
            throw DatasetError(DatasetErrc::io_failure, "short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

json scenario_to_json(const CeScenario& s, std::optional<double> fixed_snr_db)
{
    json j;
    j["length_m"] = s.geometry.length_m;
    j["width_m"] = s.geometry.width_m;
    j["height_m"] = s.geometry.height_m;
    j["carrier_frequency_hz"] = s.carrier_frequency_hz;
    j["pa_count"] = s.pa_count;
    j["eta"] = s.eta;
    j["n_eff"] = s.n_eff;
    j["speed_mps"] = s.speed_mps;
    j["pilot_interval_s"] = s.pilot_interval_s;
    j["history"] = s.history;
    j["snr_min_db"] = s.snr_min_db;
    j["snr_max_db"] = s.snr_max_db;
    j["fixed_snr_db"] = fixed_snr_db ? json(*fixed_snr_db) : json(nullptr);
    return j;
}

CeScenario scenario_from_json(const json& j, std::optional<double>& fixed_snr_db)
{
    CeScenario s;
    s.geometry.length_m = j.at("length_m").get<double>();
    s.geometry.width_m = j.at("width_m").get<double>();
    s.geometry.height_m = j.at("height_m").get<double>();
    s.carrier_frequency_hz = j.at("carrier_frequency_hz").get<double>();
    s.pa_count = j.at("pa_count").get<std::size_t>();
    s.eta = j.at("eta").get<double>();
    s.n_eff = j.at("n_eff").get<double>();
    s.speed_mps = j.at("speed_mps").get<double>();
    s.pilot_interval_s = j.at("pilot_interval_s").get<double>();
    s.history = j.at("history").get<std::size_t>();
    s.snr_min_db = j.at("snr_min_db").get<double>();
    s.snr_max_db = j.at("snr_max_db").get<double>();
    const auto& fixed = j.at("fixed_snr_db");
    fixed_snr_db = fixed.is_null() ? std::nullopt : std::optional<double>(fixed.get<double>());
    return s;
}

std::string sha256_of_string(const std::string& text)
{
    return sha256_hex(std::vector<std::uint8_t>(text.begin(), text.end()));
}

json manifest_to_json(const DatasetManifest& m)
{
    json j;
    j["schema_version"] = manifest_schema_version;
    j["format"] = {{"dataset_magic", "RWCE"}, {"dataset_version", dataset_version},
                   {"prediction_magic", "RWPR"}, {"prediction_version", prediction_version}};
    j["scenario"] = scenario_to_json(m.scenario, m.fixed_snr_db);
    j["scenario_hash"] = m.scenario_hash();
    j["normalization_constant"] = m.normalization_constant;
    j["master_seed"] = m.master_seed;
    j["splits"] = json::object();
    for (const auto& [name, info] : m.splits)
        j["splits"][name] = {{"file", info.file}, {"count", info.count}, {"sha256", info.sha256}};
    return j;
}

DatasetManifest manifest_from_json(const json& j)
{
    DatasetManifest m;
    if (j.at("schema_version").get<int>() != manifest_schema_version)
        throw DatasetError(DatasetErrc::version_mismatch, "unsupported manifest schema version");
    m.scenario = scenario_from_json(j.at("scenario"), m.fixed_snr_db);
    m.normalization_constant = j.at("normalization_constant").get<double>();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    for (const auto& [name, info] : j.at("splits").items()) {
        m.splits[name] = {info.at("file").get<std::string>(), info.at("count").get<std::uint64_t>(),
                          info.at("sha256").get<std::string>()};
    }
    if (j.at("scenario_hash").get<std::string>() != m.scenario_hash())
        throw DatasetError(DatasetErrc::hash_mismatch, "scenario parameters do not match scenario_hash");
    return m;
}

} // namespace

std::string DatasetManifest::scenario_hash() const
{
    return sha256_of_string(scenario_to_json(scenario, fixed_snr_db).dump());
}

std::string sha256_hex(const std::vector<std::uint8_t>& bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::uint64_t default_split_size(const std::string& split)
{
    if (split == "train")
        return 70'000;
    if (split == "val")
        return 30'000;
    if (split == "test")
        return 10'000;
    throw InvalidConfig("no default size for split '" + split + "'; pass an explicit count");
}

DatasetSample make_sample(const ChannelModel& model, std::uint64_t sample_seed,
                          std::optional<double> fixed_snr_db)
{
    const auto& scenario = model.scenario();
    double snr = 0.0;
    if (fixed_snr_db) {
        snr = *fixed_snr_db;
    } else {
        Rng rng(derive_seed(sample_seed, snr_stream, 0));
        snr = rng.uniform(scenario.snr_min_db, scenario.snr_max_db);
    }
    // Stored SNR is f32; simulate with the stored value so LS on the file
    // and on the in-memory sample see the same noise level.
    const float snr_f = static_cast<float>(snr);

    const auto trajectory = gen_trajectory(derive_seed(sample_seed, trajectory_stream, 0), scenario);
    const auto pilots = simulate_pilots(trajectory, model, static_cast<double>(snr_f),
                                        derive_seed(sample_seed, noise_stream, 0));

    DatasetSample sample;
    sample.snr_db = snr_f;
    sample.pilots.reserve(pilots.size());
    for (const auto& p : pilots) {
        sample.pilots.push_back({p.active_pa, {static_cast<float>(p.observation.real()),
                                               static_cast<float>(p.observation.imag())}});
    }
    const auto truth = model.true_channel(trajectory.back().x_m);
    sample.label.reserve(truth.size());
    for (const auto& h : truth)
        sample.label.emplace_back(static_cast<float>(h.real()), static_cast<float>(h.imag()));
    return sample;
}

DatasetSplit generate_split(const CeScenario& scenario, const GenerateOptions& options)
{
    if (options.split.empty())
        throw InvalidConfig("split name must not be empty");
    const std::uint64_t count = options.count ? options.count : default_split_size(options.split);
    if (options.fixed_snr_db && !std::isfinite(*options.fixed_snr_db))
        throw InvalidConfig("fixed SNR must be finite");

    const ChannelModel model(scenario);
    DatasetSplit split;
    split.name = options.split;
    split.manifest.scenario = scenario;
    split.manifest.fixed_snr_db = options.fixed_snr_db;
    split.manifest.normalization_constant = model.normalization_constant();
    split.manifest.master_seed = options.master_seed;
    split.samples.resize(count);

    const std::uint64_t tag = stream_tag(options.split);
    parallel_for(count, [&](std::size_t i) {
        split.samples[i] = make_sample(model, derive_seed(options.master_seed, tag, i), options.fixed_snr_db);
    });
    return split;
}

std::vector<std::uint8_t> encode_split(const DatasetSplit& split)
{
    const std::size_t width = split.manifest.scenario.pa_count;
    ByteWriter w;
    w.bytes(dataset_magic, 4);
    w.u32(dataset_version);
    w.u64(split.samples.size());
    for (const auto& s : split.samples) {
        if (s.label.size() != width)
            throw InvalidConfig("label length differs from the scenario PA count");
        w.f32(s.snr_db);
        w.u32(static_cast<std::uint32_t>(s.pilots.size()));
        for (const auto& p : s.pilots) {
            w.u32(p.pa_index);
            w.f32(p.observation.real());
            w.f32(p.observation.imag());
        }
        for (const auto& h : s.label) {
            w.f32(h.real());
            w.f32(h.imag());
        }
    }
    return w.take();
}

DatasetManifest read_manifest(const fs::path& dir)
{
    const fs::path path = dir / manifest_file_name;
    const auto bytes = read_file(path);
    try {
        return manifest_from_json(json::parse(bytes.begin(), bytes.end()));
    } catch (const json::exception& e) {
        throw DatasetError(DatasetErrc::manifest_invalid, path.string() + ": " + e.what());
    }
}

void write_dataset(const DatasetSplit& split, const fs::path& dir)
{
    fs::create_directories(dir);
    const auto bytes = encode_split(split);
    const std::string file = split.name + ".rwce";

    DatasetManifest manifest = split.manifest;
    if (fs::exists(dir / manifest_file_name)) {
        DatasetManifest existing = read_manifest(dir);
        if (existing.scenario_hash() != manifest.scenario_hash() || existing.master_seed != manifest.master_seed)
            throw DatasetError(DatasetErrc::manifest_invalid,
                               "existing manifest in " + dir.string() + " describes another scenario or seed");
        existing.splits.erase(split.name);
        manifest.splits = std::move(existing.splits);
    }
    manifest.splits[split.name] = {file, split.samples.size(), sha256_hex(bytes)};

    write_file_atomic(dir / file, bytes.data(), bytes.size());
    const std::string text = manifest_to_json(manifest).dump(2) + "\n";
    write_file_atomic(dir / manifest_file_name, text.data(), text.size());
}

DatasetSplit read_dataset(const fs::path& split_file)
{
    const fs::path dir = split_file.has_parent_path() ? split_file.parent_path() : fs::path(".");
    DatasetSplit split;
    split.manifest = read_manifest(dir);

    const std::string file = split_file.filename().string();
    const SplitInfo* info = nullptr;
    for (const auto& [name, entry] : split.manifest.splits) {
        if (entry.file == file) {
            split.name = name;
            info = &entry;
        }
    }
    if (!info)
        throw DatasetError(DatasetErrc::manifest_invalid, "manifest does not list " + file);

    const auto bytes = read_file(split_file);
    ByteReader r(bytes, file);
    if (!r.magic(dataset_magic))
        throw DatasetError(DatasetErrc::bad_magic, file + " is not an RWCE dataset");
    if (const auto version = r.u32(); version != dataset_version)
        throw DatasetError(DatasetErrc::version_mismatch,
                           file + " has version " + std::to_string(version));
    const std::uint64_t count = r.u64();
    if (count != info->count)
        throw DatasetError(DatasetErrc::count_mismatch, file + " holds " + std::to_string(count) +
                                                            " records but the manifest lists " +
                                                            std::to_string(info->count));

    const std::size_t width = split.manifest.scenario.pa_count;
    split.samples.resize(count);
    for (auto& s : split.samples) {
        s.snr_db = r.f32();
        const std::uint32_t t = r.u32();
        r.need(static_cast<std::size_t>(t) * 12);
        s.pilots.resize(t);
        for (auto& p : s.pilots) {
            p.pa_index = r.u32();
            const float re = r.f32();
            const float im = r.f32();
            p.observation = {re, im};
        }
        s.label.resize(width);
        for (auto& h : s.label) {
            const float re = r.f32();
            const float im = r.f32();
            h = {re, im};
        }
    }
    if (r.remaining() != 0)
        throw DatasetError(DatasetErrc::count_mismatch, file + " has data past the last record");
    if (sha256_hex(bytes) != info->sha256)
        throw DatasetError(DatasetErrc::hash_mismatch, file + " does not match the manifest hash");
    return split;
}

void write_predictions(const Predictions& predictions, const fs::path& path)
{
    if (predictions.width == 0 || predictions.values.size() % predictions.width != 0)
        throw InvalidConfig("prediction buffer is not a whole number of rows");
    ByteWriter w;
    w.bytes(prediction_magic, 4);
    w.u32(prediction_version);
    w.u64(predictions.count());
    for (const auto& v : predictions.values) {
        w.f32(v.real());
        w.f32(v.imag());
    }
    const auto bytes = w.take();
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    write_file_atomic(path, bytes.data(), bytes.size());
}

Predictions read_predictions(const fs::path& path, std::size_t width)
{
    const auto bytes = read_file(path);
    const std::string name = path.filename().string();
    ByteReader r(bytes, name);
    if (!r.magic(prediction_magic))
        throw DatasetError(DatasetErrc::bad_magic, name + " is not an RWPR prediction file");
    if (const auto version = r.u32(); version != prediction_version)
        throw DatasetError(DatasetErrc::version_mismatch, name + " has version " + std::to_string(version));
    const std::uint64_t count = r.u64();
    Predictions p;
    p.width = width;
    r.need(static_cast<std::size_t>(count) * width * 8);
    p.values.resize(static_cast<std::size_t>(count) * width);
    for (auto& v : p.values) {
        const float re = r.f32();
        const float im = r.f32();
        v = {re, im};
    }
    if (r.remaining() != 0)
        throw DatasetError(DatasetErrc::count_mismatch, name + " has data past the declared count");
    return p;
}

Predictions zero_predictions(const DatasetSplit& split)
{
    Predictions p;
    p.width = split.manifest.scenario.pa_count;
    p.values.assign(split.samples.size() * p.width, {0.0f, 0.0f});
    return p;
}

Predictions label_predictions(const DatasetSplit& split)
{
    Predictions p;
    p.width = split.manifest.scenario.pa_count;
    p.values.reserve(split.samples.size() * p.width);
    for (const auto& s : split.samples)
        p.values.insert(p.values.end(), s.label.begin(), s.label.end());
    return p;
}

namespace {

std::span<const PilotTuple> tail(const DatasetSample& s, std::optional<std::size_t> last_t)
{
    std::span<const PilotTuple> all(s.pilots);
    if (!last_t)
        return all;
    if (*last_t == 0 || *last_t > all.size())
        throw InvalidConfig("history length t must lie in [1, " + std::to_string(all.size()) + "]");
    return all.last(*last_t);
}

} // namespace

Predictions ls_predictions(const DatasetSplit& split, std::optional<std::size_t> last_t)
{
    Predictions p;
    p.width = split.manifest.scenario.pa_count;
    p.values.reserve(split.samples.size() * p.width);
    for (const auto& s : split.samples) {
        const auto est = ls_estimate(tail(s, last_t), p.width);
        for (const auto& v : est.csi)
            p.values.emplace_back(static_cast<float>(v.real()), static_cast<float>(v.imag()));
    }
    return p;
}

int snr_bucket(double snr_db)
{
    return static_cast<int>(std::lround(snr_db));
}

std::vector<ScoreRow> score_predictions(const DatasetSplit& split, const Predictions& predictions)
{
    const std::size_t width = split.manifest.scenario.pa_count;
    if (predictions.width != width)
        throw DatasetError(DatasetErrc::count_mismatch, "prediction width differs from the PA count");
    if (predictions.count() != split.samples.size())
        throw DatasetError(DatasetErrc::count_mismatch,
                           "predictions hold " + std::to_string(predictions.count()) + " rows for " +
                               std::to_string(split.samples.size()) + " samples");

    std::map<std::pair<std::size_t, int>, std::pair<NmseAccumulator, NmseAccumulator>> groups;
    for (std::size_t i = 0; i < split.samples.size(); ++i) {
        const auto& s = split.samples[i];
        const std::span<const std::complex<float>> label(s.label);
        auto& [model, baseline] = groups[{s.pilots.size(), snr_bucket(s.snr_db)}];
        model.add(relative_error(predictions.row(i), label));
        const auto ls = ls_estimate(std::span<const PilotTuple>(s.pilots), width);
        baseline.add(relative_error(std::span<const std::complex<double>>(ls.csi), label));
    }

    std::vector<ScoreRow> rows;
    for (const auto& [key, acc] : groups)
        rows.push_back({key.first, key.second, acc.first.count(), acc.first.db(), acc.second.db()});
    return rows;
}

std::vector<LsRow> ls_evaluate(const DatasetSplit& split, std::optional<std::size_t> last_t)
{
    const std::size_t width = split.manifest.scenario.pa_count;
    std::map<std::pair<std::size_t, int>, NmseAccumulator> groups;
    for (const auto& s : split.samples) {
        const auto window = tail(s, last_t);
        const auto ls = ls_estimate(window, width);
        groups[{window.size(), snr_bucket(s.snr_db)}].add(
            relative_error(std::span<const std::complex<double>>(ls.csi), std::span<const std::complex<float>>(s.label)));
    }
    std::vector<LsRow> rows;
    for (const auto& [key, acc] : groups)
        rows.push_back({key.first, key.second, acc.count(), acc.db()});
    return rows;
}

double ls_nmse_db(const DatasetSplit& split, std::optional<std::size_t> last_t)
{
    const std::size_t width = split.manifest.scenario.pa_count;
    NmseAccumulator acc;
    for (const auto& s : split.samples) {
        const auto ls = ls_estimate(tail(s, last_t), width);
        acc.add(relative_error(std::span<const std::complex<double>>(ls.csi), std::span<const std::complex<float>>(s.label)));
    }
    return acc.db();
}

} // namespace railwave::ce
