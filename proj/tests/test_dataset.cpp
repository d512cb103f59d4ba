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

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

using namespace railwave;
using namespace railwave::ce;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir()
    {
        char tmpl[] = "/tmp/railwave-test-XXXXXX";
        path = mkdtemp(tmpl);
    }
    ~TempDir() { fs::remove_all(path); }
};

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

DatasetErrc error_kind(const fs::path& p)
{
    try {
        read_dataset(p);
    } catch (const DatasetError& e) {
        return e.code();
    }
    FAIL("read_dataset accepted a damaged file");
    return DatasetErrc::io_failure;
}

DatasetSplit small_split(std::uint64_t count, std::uint64_t seed = 7, std::string name = "test")
{
    GenerateOptions opt;
    opt.split = std::move(name);
    opt.count = count;
    opt.master_seed = seed;
    return generate_split(CeScenario{}, opt);
}

} // namespace

TEST_CASE("default split sizes")
{
    CHECK(default_split_size("train") == 70000);
    CHECK(default_split_size("val") == 30000);
    CHECK(default_split_size("test") == 10000);
    CHECK_THROWS_AS(default_split_size("holdout"), InvalidConfig);
}

TEST_CASE("generated samples")
{
    const auto split = small_split(50);
    REQUIRE(split.samples.size() == 50);
    for (const auto& s : split.samples) {
        CHECK(s.pilots.size() == 16);
        CHECK(s.label.size() == 16);
        CHECK(s.snr_db >= 0.0f);
        CHECK(s.snr_db <= 20.0f);
    }
    GenerateOptions fixed;
    fixed.count = 5;
    fixed.fixed_snr_db = 20.0;
    for (const auto& s : generate_split(CeScenario{}, fixed).samples)
        CHECK(s.snr_db == 20.0f);
}

TEST_CASE("generation does not depend on worker count")
{
    setenv("RAILWAVE_THREADS", "1", 1);
    const auto a = encode_split(small_split(200));
    setenv("RAILWAVE_THREADS", "6", 1);
    const auto b = encode_split(small_split(200));
    unsetenv("RAILWAVE_THREADS");
    CHECK(a == b);
    CHECK(encode_split(small_split(200, 8)) != a);

    // Sample i is the same whatever the split size.
    const auto longer = small_split(300);
    const auto shorter = small_split(200);
    for (std::size_t i = 0; i < shorter.samples.size(); ++i)
        CHECK(longer.samples[i] == shorter.samples[i]);
}

TEST_CASE("binary layout")
{
    const auto split = small_split(3);
    const auto bytes = encode_split(split);
    const std::size_t record = 4 + 4 + 16 * 12 + 16 * 8;
    REQUIRE(bytes.size() == 16 + 3 * record);
    CHECK(std::memcmp(bytes.data(), "RWCE", 4) == 0);
    CHECK(bytes[4] == 1);
    CHECK(bytes[5] == 0);
    CHECK(bytes[8] == 3);
    float snr = 0.0f;
    std::memcpy(&snr, bytes.data() + 16, 4);
    CHECK(snr == split.samples[0].snr_db);
    std::uint32_t t = 0;
    std::memcpy(&t, bytes.data() + 20, 4);
    CHECK(t == 16);
    std::uint32_t pa = 0;
    std::memcpy(&pa, bytes.data() + 24, 4);
    CHECK(pa == split.samples[0].pilots[0].pa_index);
}

TEST_CASE("write then read round-trips bit for bit")
{
    TempDir dir;
    const auto split = small_split(100);
    write_dataset(split, dir.path);
    const auto back = read_dataset(dir.path / "test.rwce");
    CHECK(back.name == "test");
    REQUIRE(back.samples.size() == split.samples.size());
    for (std::size_t i = 0; i < back.samples.size(); ++i)
        CHECK(back.samples[i] == split.samples[i]);
    CHECK(encode_split(back) == encode_split(split));
    CHECK(back.manifest.scenario_hash() == split.manifest.scenario_hash());
    CHECK(back.manifest.normalization_constant == split.manifest.normalization_constant);
    CHECK(back.manifest.master_seed == 7);

    const auto manifest = nlohmann::json::parse(slurp(dir.path / "manifest.json"));
    CHECK(manifest["schema_version"] == 1);
    CHECK(manifest["splits"]["test"]["count"] == 100);
    CHECK(manifest["splits"]["test"]["file"] == "test.rwce");
    CHECK(manifest["scenario"]["pa_count"] == 16);
    CHECK(manifest["scenario_hash"].get<std::string>().size() == 64);

    // Second split joins the manifest; a different seed is refused.
    write_dataset(small_split(10, 7, "val"), dir.path);
    CHECK(read_manifest(dir.path).splits.size() == 2);
    CHECK(read_dataset(dir.path / "test.rwce").samples.size() == 100);
    CHECK_THROWS_AS(write_dataset(small_split(10, 8, "train"), dir.path), DatasetError);
}

TEST_CASE("same seed and scenario give byte-identical files")
{
    TempDir a;
    TempDir b;
    write_dataset(small_split(40), a.path);
    write_dataset(small_split(40), b.path);
    CHECK(slurp(a.path / "test.rwce") == slurp(b.path / "test.rwce"));
    CHECK(slurp(a.path / "manifest.json") == slurp(b.path / "manifest.json"));
}

TEST_CASE("SHA-256")
{
    CHECK(sha256_hex({}) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    const std::string abc = "abc";
    CHECK(sha256_hex(std::vector<std::uint8_t>(abc.begin(), abc.end())) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("damaged files are rejected by kind")
{
    TempDir dir;
    write_dataset(small_split(20), dir.path);
    const auto file = dir.path / "test.rwce";
    const auto good = slurp(file);

    auto bytes = good;
    bytes[0] = 'X';
    spit(file, bytes);
    CHECK(error_kind(file) == DatasetErrc::bad_magic);

    bytes = good;
    bytes[4] = 2;
    spit(file, bytes);
    CHECK(error_kind(file) == DatasetErrc::version_mismatch);

    bytes = good;
    bytes[8] = 21;
    spit(file, bytes);
    CHECK(error_kind(file) == DatasetErrc::count_mismatch);

    bytes = good;
    bytes.resize(bytes.size() - 5);
    spit(file, bytes);
    CHECK(error_kind(file) == DatasetErrc::truncated);

    bytes = good;
    bytes.push_back(0);
    spit(file, bytes);
    CHECK(error_kind(file) == DatasetErrc::count_mismatch);

    bytes = good;
    bytes[100] ^= 0x01;
    spit(file, bytes);
    CHECK(error_kind(file) == DatasetErrc::hash_mismatch);

    spit(file, good);
    CHECK_NOTHROW(read_dataset(file));

    // Manifest count disagreeing with the header.
    auto manifest = nlohmann::json::parse(slurp(dir.path / "manifest.json"));
    manifest["splits"]["test"]["count"] = 19;
    std::ofstream(dir.path / "manifest.json") << manifest.dump(2);
    CHECK(error_kind(file) == DatasetErrc::count_mismatch);

    manifest["splits"]["test"]["count"] = 20;
    manifest["scenario"]["speed_mps"] = 1.0;
    std::ofstream(dir.path / "manifest.json") << manifest.dump(2);
    CHECK(error_kind(file) == DatasetErrc::hash_mismatch);

    std::ofstream(dir.path / "manifest.json") << "{ not json";
    CHECK(error_kind(file) == DatasetErrc::manifest_invalid);

    fs::remove(dir.path / "manifest.json");
    CHECK(error_kind(file) == DatasetErrc::io_failure);
}

TEST_CASE("prediction files")
{
    TempDir dir;
    const auto split = small_split(30);
    const auto labels = label_predictions(split);
    CHECK(labels.count() == 30);
    write_predictions(labels, dir.path / "p.rwpr");
    const auto bytes = slurp(dir.path / "p.rwpr");
    CHECK(bytes.size() == 16 + 30 * 16 * 8);
    CHECK(std::memcmp(bytes.data(), "RWPR", 4) == 0);
    const auto back = read_predictions(dir.path / "p.rwpr", 16);
    CHECK(back.values == labels.values);

    auto damaged = bytes;
    damaged[1] = 'X';
    spit(dir.path / "bad.rwpr", damaged);
    CHECK_THROWS_AS(read_predictions(dir.path / "bad.rwpr", 16), DatasetError);
    damaged = bytes;
    damaged.resize(damaged.size() - 8);
    spit(dir.path / "short.rwpr", damaged);
    CHECK_THROWS_AS(read_predictions(dir.path / "short.rwpr", 16), DatasetError);

    Predictions ragged;
    ragged.values.resize(17);
    CHECK_THROWS_AS(write_predictions(ragged, dir.path / "r.rwpr"), InvalidConfig);
}

TEST_CASE("scoring")
{
    const auto split = small_split(200);
    for (const auto& row : score_predictions(split, label_predictions(split))) {
        CHECK(row.nmse_db == nmse_floor_db);
        CHECK(row.t == 16);
    }
    std::size_t total = 0;
    for (const auto& row : score_predictions(split, zero_predictions(split))) {
        CHECK(row.nmse_db == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(row.snr_bucket_db >= 0);
        CHECK(row.snr_bucket_db <= 20);
        total += row.samples;
    }
    CHECK(total == 200);

    // LS predictions score exactly as the built-in baseline.
    for (const auto& row : score_predictions(split, ls_predictions(split)))
        CHECK(row.nmse_db == doctest::Approx(row.baseline_ls_nmse_db).epsilon(1e-6));

    auto short_pred = zero_predictions(split);
    short_pred.values.resize(short_pred.values.size() - 16);
    try {
        score_predictions(split, short_pred);
        FAIL("count mismatch accepted");
    } catch (const DatasetError& e) {
        CHECK(e.code() == DatasetErrc::count_mismatch);
    }
}

TEST_CASE("SNR buckets")
{
    CHECK(snr_bucket(0.2) == 0);
    CHECK(snr_bucket(0.5) == 1);
    CHECK(snr_bucket(19.6) == 20);
    CHECK(snr_bucket(-0.4) == 0);
}

TEST_CASE("LS evaluation on the last T pilots")
{
    GenerateOptions opt;
    opt.count = 300;
    opt.fixed_snr_db = 20.0;
    const auto split = generate_split(CeScenario{}, opt);
    const auto rows = ls_evaluate(split, 4);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].t == 4);
    CHECK(rows[0].snr_bucket_db == 20);
    CHECK(rows[0].samples == 300);
    CHECK(rows[0].nmse_db == doctest::Approx(ls_nmse_db(split, 4)));
    CHECK(ls_evaluate(split)[0].t == 16);
    CHECK_THROWS_AS(ls_evaluate(split, 0), InvalidConfig);
    CHECK_THROWS_AS(ls_evaluate(split, 17), InvalidConfig);
}
