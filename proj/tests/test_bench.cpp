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


#include <fstream>
#include <sstream>

#include "fuzzystego/bench.hpp"
#include "support.hpp"

using namespace fuzzystego;

namespace {

BenchConfig tiny_config(const std::filesystem::path& dir, int per_category = 2) {
  CorpusSpec spec;
  spec.images_per_category = per_category;
  spec.side = 64;
  generate_corpus(spec, dir);
  BenchConfig cfg;
  cfg.corpus_manifest = dir / "manifest.csv";
  cfg.bpp_levels = {0.10, 0.30};
  cfg.password = "bench-pw";
  cfg.kdf = {1, 16, 1, kKeySize};
  cfg.ablation_images = 10;
  cfg.profile_images = 4;
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  return h;
}

}  // namespace

TEST_SUITE("bench") {
  TEST_CASE("variants") {
    for (auto v : {AblationVariant::full, AblationVariant::entropy_only, AblationVariant::edge_only,
                   AblationVariant::no_pressure})
      CHECK(parse_variant(variant_name(v)) == v);
    CHECK_THROWS_CODE(parse_variant("half"), ErrorCode::invalid_argument);
    CHECK(variant_pins(AblationVariant::full) == InputPins{});
    const auto e = variant_pins(AblationVariant::entropy_only);
    CHECK_FALSE(e.entropy.has_value());
    CHECK(e.edge == 0.5);
    CHECK(e.pressure == 0.5);
    const auto g = variant_pins(AblationVariant::edge_only);
    CHECK(g.entropy == 0.5);
    CHECK_FALSE(g.edge.has_value());
    const auto n = variant_pins(AblationVariant::no_pressure);
    CHECK(n.pressure == 0.5);
    CHECK_FALSE(n.entropy.has_value());
  }

  TEST_CASE("record seeds hash the record key") {
    CHECK(record_seed(42, "smooth_0001", Method::adaptive, 0.2) == (42 ^ fnv1a("smooth_0001|adaptive|0.20")));
    CHECK(record_seed(42, "a", Method::fixed1, 0.1) != record_seed(42, "a", Method::fixed2, 0.1));
    CHECK(record_seed(42, "a", Method::fixed1, 0.1) != record_seed(43, "a", Method::fixed1, 0.1));
  }

  TEST_CASE("config parsing") {
    const auto cfg = bench_config_from_json(R"({
      "bpp_levels": [0.1, 0.2], "methods": ["adaptive", "fixed1"], "corpus_manifest": "c/manifest.csv",
      "seed": 7, "password": "x", "images_limit": 10, "ablation_variants": ["full"], "fill_policy": "cap",
      "kdf": {"time_cost": 1, "memory_kib": 64, "parallelism": 2}, "thresholds": {"rs": 0.1},
      "entropy_window_radius": 3, "workers": 1, "ablation_images": 4, "profile_images": 3, "profile_bpp": 0.3
    })", "/base");
    CHECK(cfg.bpp_levels == std::vector<double>{0.1, 0.2});
    CHECK(cfg.methods == std::vector<Method>{Method::adaptive, Method::fixed1});
    CHECK(cfg.corpus_manifest == std::filesystem::path("/base/c/manifest.csv"));
    CHECK(cfg.seed == 7);
    CHECK(cfg.images_limit == 10);
    CHECK(cfg.fill_policy == FillPolicy::cap);
    CHECK(cfg.kdf.memory_kib == 64);
    CHECK(cfg.kdf.parallelism == 2);
    CHECK(cfg.thresholds.rs == 0.1);
    CHECK(cfg.thresholds.chi2 == 0.95);
    CHECK(cfg.codec.entropy.window_radius == 3);
    CHECK(cfg.profile_bpp == 0.3);

    const BenchConfig defaults;
    CHECK(defaults.bpp_levels == std::vector<double>{0.05, 0.10, 0.20, 0.30, 0.40});
    CHECK(defaults.methods.size() == 3);
    CHECK(defaults.seed == 42);

    CHECK_THROWS_CODE(bench_config_from_json(R"({"bogus": 1})"), ErrorCode::invalid_argument);
    CHECK_THROWS_CODE(bench_config_from_json(R"({"bpp_levels": [0.2, 0.1]})"), ErrorCode::invalid_argument);
    CHECK_THROWS_CODE(bench_config_from_json(R"({"bpp_levels": [0.0, 0.1]})"), ErrorCode::invalid_argument);
    CHECK_THROWS_CODE(bench_config_from_json(R"({"methods": ["lsb7"]})"), ErrorCode::invalid_argument);
    CHECK_THROWS_CODE(bench_config_from_json(R"({"fill_policy": "maybe"})"), ErrorCode::invalid_argument);
    CHECK_THROWS_CODE(bench_config_from_json("[1, 2"), ErrorCode::invalid_argument);
    CHECK_THROWS_CODE(load_bench_config("/nonexistent/bench.json"), ErrorCode::file_not_found);
  }

  TEST_CASE("shipped desk config parses") {
    const auto cfg = load_bench_config(std::filesystem::path(FUZZYSTEGO_SOURCE_DIR) / "config" / "desk.json");
    CHECK(cfg.images_limit == 100);
  }

  TEST_CASE("image selection interleaves categories") {
    testing::TempDir dir;
    CorpusSpec spec;
    spec.images_per_category = 3;
    spec.side = 16;
    generate_corpus(spec, dir.path());
    const auto all = select_images(dir / "manifest.csv", std::nullopt);
    REQUIRE(all.size() == 15);
    for (std::size_t i = 0; i < 5; ++i) CHECK(all[i].category == kCategories[i]);
    CHECK(all[5].id == "smooth_0001");
    CHECK(select_images(dir / "manifest.csv", 7).size() == 7);
    CHECK_THROWS_CODE(select_images(dir / "missing.csv", std::nullopt), ErrorCode::corpus_missing);
    BenchConfig cfg;
    cfg.corpus_manifest = dir / "missing.csv";
    CHECK_THROWS_CODE(run_bench(cfg), ErrorCode::corpus_missing);
  }

  TEST_CASE("tiny end-to-end run") {
    testing::TempDir corpus, out1, out2;
    BenchConfig cfg = tiny_config(corpus.path());
    const auto a = run_bench(cfg);
    REQUIRE(a.records.size() == 10 * 3 * 2);
    // Image-major, then method, then bpp.
    CHECK(a.records[0].method == Method::fixed1);
    CHECK(a.records[0].bpp == 0.10);
    CHECK(a.records[1].bpp == 0.30);
    CHECK(a.records[2].method == Method::fixed2);
    CHECK(a.records[6].image_id != a.records[0].image_id);
    for (const auto& r : a.records) {
      CHECK_MESSAGE(r.extraction_ok, r.image_id, " ", method_name(r.method), " ", r.error);
      CHECK(r.error.empty());
      CHECK(r.wire_bytes == r.plaintext_bytes + 44);
      if (r.method != Method::adaptive) {
        CHECK(r.times.feature == 0.0);
        CHECK(r.times.fuzzy == 0.0);
      }
      CHECK(r.times.embed >= 0.0);
      CHECK(r.times.extract >= 0.0);
    }
    // extraction_ok_pct plus ten quality and detector metrics per cell.
    CHECK(a.aggregates.size() == 3 * 2 * 11);
    CHECK(a.timing.size() == 3 * 2 * 5);
    CHECK(a.paired.size() == 2 * 3 * 2);
    for (const auto& p : a.paired) CHECK(p.k == 6);

    write_bench_outputs(a, cfg, out1.path());
    const auto b = run_bench(cfg);
    write_bench_outputs(b, cfg, out2.path());
    CHECK(slurp(out1 / "aggregates.csv") == slurp(out2 / "aggregates.csv"));
    CHECK(slurp(out1 / "paired_tests.csv") == slurp(out2 / "paired_tests.csv"));
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      CHECK(a.records[i].quality.psnr == b.records[i].quality.psnr);
      CHECK(a.records[i].rs.statistic == b.records[i].rs.statistic);
      CHECK(a.records[i].plaintext_bytes == b.records[i].plaintext_bytes);
    }

    const std::string header = slurp(out1 / "records.csv").substr(0, slurp(out1 / "records.csv").find('\n'));
    CHECK(header ==
          "image_id,category,method,bpp,plaintext_bytes,wire_bytes,psnr,ssim,mse,kl,rs_rate,rs_detected,"
          "chi2_p,chi2_detected,spa_rate,spa_detected,extraction_ok,error,t_feature,t_fuzzy,t_embed,t_extract,t_total");
    CHECK(slurp(out1 / "aggregates.csv").rfind("method,bpp,metric,mean,sd,ci_low,ci_high\n", 0) == 0);
    CHECK(std::filesystem::exists(out1 / "timing.csv"));
    const std::string md = slurp(out1 / "tables.md");
    CHECK(md.find("PSNR") != std::string::npos);
    CHECK(md.find("Adaptive") != std::string::npos);
  }

  TEST_CASE("paired tests use first minus second on complete pairs") {
    BenchConfig cfg;
    cfg.bpp_levels = {0.1};
    std::vector<ExperimentRecord> recs;
    const double f1[] = {60, 61, 62, 63}, ad[] = {62, 62.5, 65, 64};
    for (int i = 0; i < 4; ++i) {
      for (Method m : {Method::fixed1, Method::fixed2, Method::adaptive}) {
        ExperimentRecord r;
        r.image_id = "img" + std::to_string(i);
        r.method = m;
        r.bpp = 0.1;
        r.quality.psnr = m == Method::fixed1 ? f1[i] : m == Method::adaptive ? ad[i] : 50.0 + i * i;
        recs.push_back(r);
      }
    }
    recs.push_back(recs[0]);
    recs.back().image_id = "lonely";  // no partners
    recs[3 * 3 + 2].error = "CapacityExceeded";  // drops img3 from the adaptive pairs
    const auto rows = paired_tests(recs, cfg);
    const auto& row = rows[0];
    CHECK(row.first == Method::fixed1);
    CHECK(row.second == Method::adaptive);
    CHECK(row.metric == "psnr");
    REQUIRE(row.report.has_value());
    CHECK(row.report->n == 3);
    CHECK(row.report->mean_diff == doctest::Approx((-2.0 - 1.5 - 3.0) / 3));
  }

  TEST_CASE("ablation and profile on a tiny corpus") {
    testing::TempDir corpus;
    BenchConfig cfg = tiny_config(corpus.path());
    const auto cells = run_ablation(cfg);
    CHECK(cells.size() == 4 * 2);
    for (const auto& c : cells) {
      CHECK(c.extraction_success == 100.0);
      CHECK(c.valid_depths);
      CHECK(c.train_pairs == 5);
      CHECK(c.test_pairs == 5);
      CHECK(c.positive_rate >= 0.0);
      CHECK(c.positive_rate <= 100.0);
    }
    CHECK(ablation_markdown(cells, cfg).find("no_pressure") != std::string::npos);

    const auto prof = run_profile(cfg);
    REQUIRE(prof.size() == 3);
    for (const auto& p : prof) {
      CHECK(p.total.n == 4);
      CHECK(p.embed.mean >= 0.0);
      if (p.method != Method::adaptive) {
        CHECK(p.feature.mean == 0.0);
        CHECK(p.fuzzy.mean == 0.0);
      }
    }
    CHECK(!profile_markdown(prof).empty());
  }

  TEST_CASE("number formatting") {
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(2.0) == "2");
  }
}
