// Copyright 2026 The fuzzystego Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzystego/codec.hpp"
#include "fuzzystego/corpus.hpp"
#include "fuzzystego/crypto.hpp"
#include "fuzzystego/evaluation.hpp"
#include "fuzzystego/statistics.hpp"
#include "fuzzystego/steganalysis.hpp"

namespace fuzzystego {

enum class AblationVariant { full, entropy_only, edge_only, no_pressure };

std::string_view variant_name(AblationVariant v) noexcept;
AblationVariant parse_variant(std::string_view name);
/// Inputs held at 0.5 for a variant.
InputPins variant_pins(AblationVariant v) noexcept;

struct BenchConfig {
  std::vector<double> bpp_levels{0.05, 0.10, 0.20, 0.30, 0.40};
  std::vector<Method> methods{Method::fixed1, Method::fixed2, Method::adaptive};
  std::filesystem::path corpus_manifest;
  std::uint64_t seed = kDefaultSeed;
  std::string password;
  std::optional<int> images_limit;
  std::vector<AblationVariant> ablation_variants{AblationVariant::full, AblationVariant::entropy_only,
                                                 AblationVariant::edge_only, AblationVariant::no_pressure};
  FillPolicy fill_policy = FillPolicy::scale;
  KdfParams kdf;
  DetectorThresholds thresholds;
  CodecConfig codec;
  unsigned workers = 0;  // 0: one per hardware thread
  int ablation_images = 100;
  int profile_images = 30;
  double profile_bpp = 0.20;

  /// Throws InvalidArgument (empty or non-ascending bpp levels, no methods).
  void validate() const;
};

/// Keys mirror the struct fields; `fuzzy_config` names a rule-base JSON file
/// resolved relative to the config file. Unknown keys are rejected.
BenchConfig bench_config_from_json(std::string_view text, const std::filesystem::path& base_dir = {});
BenchConfig load_bench_config(const std::filesystem::path& path);

struct RecordTimes {
  double feature = 0;
  double fuzzy = 0;
  double embed = 0;
  double extract = 0;

  double total() const noexcept { return feature + fuzzy + embed + extract; }
};

struct ExperimentRecord {
  std::string image_id;
  Category category = Category::smooth;
  Method method = Method::fixed1;
  double bpp = 0;
  std::size_t plaintext_bytes = 0;
  std::size_t wire_bytes = 0;
  QualityRecord quality;
  DetectionResult rs;
  DetectionResult chi2;
  DetectionResult spa;
  bool extraction_ok = false;
  std::string error;  // ErrorCode name of a failed record, empty otherwise
  RecordTimes times;
};

/// Seed for one record: seed XOR FNV-1a64("<image_id>|<method>|<bpp %.2f>").
std::uint64_t record_seed(std::uint64_t seed, std::string_view image_id, Method method, double bpp) noexcept;

struct CorpusImage {
  std::string id;
  Category category = Category::smooth;
  std::filesystem::path path;
};

/// Manifest entries, interleaved across categories (one of each in turn) and
/// truncated to `limit`. Throws CorpusMissing when the manifest is absent.
std::vector<CorpusImage> select_images(const std::filesystem::path& manifest, std::optional<int> limit);

/// One embed → measure → extract → open cycle. Module errors are caught and
/// reported in `error`.
ExperimentRecord run_record(const Image& cover, const CorpusImage& meta, Method method, double bpp,
                            const BenchConfig& cfg);

struct AggregateRow {
  Method method = Method::fixed1;
  double bpp = 0;
  std::string metric;
  Summary summary;
};

struct PairedRow {
  Method first = Method::fixed1;
  Method second = Method::adaptive;
  double bpp = 0;
  std::string metric;
  int k = 1;
  std::optional<PairedTestReport> report;  // empty with `error` set when the test is undefined
  std::string error;
};

struct BenchResult {
  std::vector<ExperimentRecord> records;  // image-major, then method, then bpp
  std::vector<AggregateRow> aggregates;
  std::vector<AggregateRow> timing;
  std::vector<PairedRow> paired;
};

using LogFn = std::function<void(std::string_view)>;

/// Throws CorpusMissing when the manifest is absent; other failures are
/// per-record and reported through `log`.
BenchResult run_bench(const BenchConfig& cfg, const LogFn& log = {});

std::vector<AggregateRow> aggregate(const std::vector<ExperimentRecord>& records, const BenchConfig& cfg,
                                    bool timing);
/// Paired t-tests of first − second for (fixed1, adaptive), (fixed2,
/// adaptive) and (fixed1, fixed2) on psnr and rs_rate, complete pairs only.
std::vector<PairedRow> paired_tests(const std::vector<ExperimentRecord>& records, const BenchConfig& cfg);

struct AblationCell {
  AblationVariant variant = AblationVariant::full;
  double bpp = 0;
  std::size_t train_pairs = 0;
  std::size_t test_pairs = 0;
  double positive_rate = 0;        // % of held-out stegos flagged
  double false_positive_rate = 0;  // % of held-out covers flagged
  double extraction_success = 0;   // % over the whole subset
  bool valid_depths = true;
};

std::vector<AblationCell> run_ablation(const BenchConfig& cfg, const LogFn& log = {});

struct ProfileRow {
  Method method = Method::fixed1;
  Summary feature, fuzzy, embed, extract, total;
};

/// Single-threaded stage timings at `profile_bpp` over `profile_images`.
std::vector<ProfileRow> run_profile(const BenchConfig& cfg, const LogFn& log = {});

void write_records_csv(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path);
void write_aggregates_csv(const std::vector<AggregateRow>& rows, const std::filesystem::path& path);
void write_paired_csv(const std::vector<PairedRow>& rows, const std::filesystem::path& path);
std::string bench_tables_markdown(const BenchResult& result, const BenchConfig& cfg);
std::string ablation_markdown(const std::vector<AblationCell>& cells, const BenchConfig& cfg);
std::string profile_markdown(const std::vector<ProfileRow>& rows);

/// records.csv, aggregates.csv, timing.csv, paired_tests.csv and tables.md.
void write_bench_outputs(const BenchResult& result, const BenchConfig& cfg, const std::filesystem::path& dir);

/// "%.17g", with "inf"/"-inf"/"nan" spelled out.
std::string format_number(double v);

}  // namespace fuzzystego
