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

#include "fuzzystego/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>

#include "json.hpp"

#include "fuzzystego/error.hpp"
#include "fuzzystego/parallel.hpp"

namespace fuzzystego {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string format_bpp(double bpp) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", bpp);
  return buf;
}

std::string fixed(double v, int digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void emit(const LogFn& log, const std::string& line) {
  if (log) {
    log(line);
  } else {
    static std::mutex m;
    std::lock_guard lock(m);
    std::cerr << line << '\n';
  }
}

// Detector errors become a non-detection carrying the condition.
template <typename F>
DetectionResult guarded(F&& detector, double threshold) {
  try {
    return detector();
  } catch (const Error& e) {
    DetectionResult r;
    r.threshold = threshold;
    r.condition = e.code();
    return r;
  }
}

constexpr std::uint64_t kSealDomain = 0x5EA1'5EA1'0000'0001ull;

}  // namespace

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view variant_name(AblationVariant v) noexcept {
  switch (v) {
    case AblationVariant::full: return "full";
    case AblationVariant::entropy_only: return "entropy_only";
    case AblationVariant::edge_only: return "edge_only";
    case AblationVariant::no_pressure: return "no_pressure";
  }
  return "full";
}

AblationVariant parse_variant(std::string_view name) {
  for (auto v : {AblationVariant::full, AblationVariant::entropy_only, AblationVariant::edge_only,
                 AblationVariant::no_pressure}) {
    if (variant_name(v) == name) return v;
  }
  throw Error(ErrorCode::invalid_argument, "unknown ablation variant '" + std::string(name) + "'");
}

InputPins variant_pins(AblationVariant v) noexcept {
  InputPins p;
  switch (v) {
    case AblationVariant::full: break;
    case AblationVariant::entropy_only: p.edge = 0.5; p.pressure = 0.5; break;
    case AblationVariant::edge_only: p.entropy = 0.5; break;
    case AblationVariant::no_pressure: p.pressure = 0.5; break;
  }
  return p;
}

void BenchConfig::validate() const {
  if (bpp_levels.empty()) throw Error(ErrorCode::invalid_argument, "bpp_levels is empty");
  for (std::size_t i = 0; i < bpp_levels.size(); ++i) {
    if (!(bpp_levels[i] > 0)) throw Error(ErrorCode::invalid_argument, "bpp levels must be positive");
    if (i > 0 && !(bpp_levels[i] > bpp_levels[i - 1])) {
      throw Error(ErrorCode::invalid_argument, "bpp levels must be strictly ascending");
    }
  }
  if (methods.empty()) throw Error(ErrorCode::invalid_argument, "no methods configured");
  if (images_limit && *images_limit <= 0) throw Error(ErrorCode::invalid_argument, "images_limit must be positive");
  if (!(profile_bpp > 0)) throw Error(ErrorCode::invalid_argument, "profile_bpp must be positive");
}

BenchConfig bench_config_from_json(std::string_view text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("bench config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::invalid_argument, "bench config must be a JSON object");
  BenchConfig cfg;
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "bpp_levels") {
        cfg.bpp_levels = value.get<std::vector<double>>();
      } else if (key == "methods") {
        cfg.methods.clear();
        for (const auto& m : value) cfg.methods.push_back(parse_method(m.get<std::string>()));
      } else if (key == "corpus_manifest") {
        cfg.corpus_manifest = resolve(value.get<std::string>());
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "password") {
        cfg.password = value.get<std::string>();
      } else if (key == "images_limit") {
        if (value.is_null()) {
          cfg.images_limit.reset();
        } else {
          cfg.images_limit = value.get<int>();
        }
      } else if (key == "ablation_variants") {
        cfg.ablation_variants.clear();
        for (const auto& v : value) cfg.ablation_variants.push_back(parse_variant(v.get<std::string>()));
      } else if (key == "fill_policy") {
        const auto p = value.get<std::string>();
        if (p == "scale") {
          cfg.fill_policy = FillPolicy::scale;
        } else if (p == "cap") {
          cfg.fill_policy = FillPolicy::cap;
        } else {
          throw Error(ErrorCode::invalid_argument, "fill_policy must be 'cap' or 'scale'");
        }
      } else if (key == "kdf") {
        cfg.kdf.time_cost = value.value("time_cost", cfg.kdf.time_cost);
        cfg.kdf.memory_kib = value.value("memory_kib", cfg.kdf.memory_kib);
        cfg.kdf.parallelism = value.value("parallelism", cfg.kdf.parallelism);
      } else if (key == "thresholds") {
        cfg.thresholds.rs = value.value("rs", cfg.thresholds.rs);
        cfg.thresholds.spa = value.value("spa", cfg.thresholds.spa);
        cfg.thresholds.chi2 = value.value("chi2", cfg.thresholds.chi2);
      } else if (key == "entropy_window_radius") {
        cfg.codec.entropy.window_radius = value.get<int>();
      } else if (key == "fuzzy_config") {
        cfg.codec.fuzzy = load_fuzzy_system(resolve(value.get<std::string>()));
      } else if (key == "workers") {
        cfg.workers = value.get<unsigned>();
      } else if (key == "ablation_images") {
        cfg.ablation_images = value.get<int>();
      } else if (key == "profile_images") {
        cfg.profile_images = value.get<int>();
      } else if (key == "profile_bpp") {
        cfg.profile_bpp = value.get<double>();
      } else {
        throw Error(ErrorCode::invalid_argument, "unknown bench config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("bench config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

BenchConfig load_bench_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::file_not_found, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return bench_config_from_json(ss.str(), path.parent_path());
}

std::uint64_t record_seed(std::uint64_t seed, std::string_view image_id, Method method, double bpp) noexcept {
  const std::string key = std::string(image_id) + "|" + std::string(method_name(method)) + "|" + format_bpp(bpp);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : key) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return seed ^ h;
}

std::vector<CorpusImage> select_images(const std::filesystem::path& manifest, std::optional<int> limit) {
  if (manifest.empty() || !std::filesystem::exists(manifest)) {
    throw Error(ErrorCode::corpus_missing, "corpus manifest not found: " + manifest.string());
  }
  const auto entries = read_manifest(manifest);
  std::array<std::vector<CorpusImage>, kCategories.size()> by_cat;
  const auto root = manifest.parent_path();
  for (const auto& e : entries) {
    by_cat[static_cast<std::size_t>(e.category)].push_back(
        {e.relative_path.stem().string(), e.category, root / e.relative_path});
  }
  std::vector<CorpusImage> out;
  const std::size_t cap = limit ? static_cast<std::size_t>(*limit) : entries.size();
  for (std::size_t i = 0; out.size() < cap; ++i) {
    bool any = false;
    for (const auto& list : by_cat) {
      if (i < list.size() && out.size() < cap) {
        out.push_back(list[i]);
        any = true;
      }
    }
    if (!any) break;
  }
  if (out.empty()) throw Error(ErrorCode::corpus_missing, "corpus manifest lists no images");
  return out;
}

ExperimentRecord run_record(const Image& cover, const CorpusImage& meta, Method method, double bpp,
                            const BenchConfig& cfg) {
  ExperimentRecord r;
  r.image_id = meta.id;
  r.category = meta.category;
  r.method = method;
  r.bpp = bpp;
  try {
    const std::uint64_t rs = record_seed(cfg.seed, meta.id, method, bpp);
    r.plaintext_bytes = plan_payload(bpp, cover.height(), cover.width(), cover.channels(), method, cfg.fill_policy);
    Bytes plaintext(r.plaintext_bytes);
    Prng(rs).fill(plaintext);
    PrngEntropy entropy(rs ^ kSealDomain);
    const auto password = as_bytes(cfg.password);
    const Bytes wire = serialize(seal(plaintext, password, entropy, cfg.kdf));
    r.wire_bytes = wire.size();

    StageTimes st;
    const Image stego = embed(cover, wire, method, cfg.seed, cfg.codec, &st);
    r.times.feature = st.feature;
    r.times.fuzzy = st.fuzzy;
    r.times.embed = st.write;

    r.quality = quality(cover, stego);
    r.rs = guarded([&] { return rs_analysis(stego, cfg.thresholds.rs); }, cfg.thresholds.rs);
    r.chi2 = guarded([&] { return chi_square_attack(stego, cfg.thresholds.chi2); }, cfg.thresholds.chi2);
    r.spa = guarded([&] { return sample_pair_analysis(stego, cfg.thresholds.spa); }, cfg.thresholds.spa);

    const auto t0 = Clock::now();
    const Bytes recovered = extract(stego, method, cfg.seed, cfg.codec);
    r.times.extract = seconds_since(t0);
    const auto opened = open(deserialize(recovered), password, cfg.kdf);
    r.extraction_ok = opened.has_value() && *opened == plaintext;
    if (!opened) r.error = "DecryptionFailed";
  } catch (const Error& e) {
    r.extraction_ok = false;
    r.error = std::string(to_string(e.code()));
  }
  return r;
}

BenchResult run_bench(const BenchConfig& cfg, const LogFn& log) {
  cfg.validate();
  const auto images = select_images(cfg.corpus_manifest, cfg.images_limit);
  const std::size_t per_image = cfg.methods.size() * cfg.bpp_levels.size();
  BenchResult result;
  result.records.resize(images.size() * per_image);
  parallel_for(images.size(), cfg.workers, [&](std::size_t i) {
    const auto& meta = images[i];
    std::optional<Image> cover;
    std::string load_error;
    try {
      cover = load_png(meta.path);
    } catch (const Error& e) {
      load_error = std::string(to_string(e.code()));
      emit(log, "record failure: " + meta.id + ": " + e.what());
    }
    std::size_t slot = i * per_image;
    for (Method m : cfg.methods) {
      for (double bpp : cfg.bpp_levels) {
        ExperimentRecord r;
        if (cover) {
          r = run_record(*cover, meta, m, bpp, cfg);
          if (!r.error.empty()) {
            emit(log, "record failure: " + meta.id + " " + std::string(method_name(m)) + " " + format_bpp(bpp) +
                          ": " + r.error);
          }
        } else {
          r.image_id = meta.id;
          r.category = meta.category;
          r.method = m;
          r.bpp = bpp;
          r.error = load_error;
        }
        result.records[slot++] = std::move(r);
      }
    }
  });
  result.aggregates = aggregate(result.records, cfg, false);
  result.timing = aggregate(result.records, cfg, true);
  result.paired = paired_tests(result.records, cfg);
  return result;
}

namespace {

struct MetricDef {
  const char* name;
  double (*get)(const ExperimentRecord&);
};

constexpr MetricDef kQualityMetrics[] = {
    {"psnr", [](const ExperimentRecord& r) { return r.quality.psnr; }},
    {"ssim", [](const ExperimentRecord& r) { return r.quality.ssim; }},
    {"mse", [](const ExperimentRecord& r) { return r.quality.mse; }},
    {"kl", [](const ExperimentRecord& r) { return r.quality.kl; }},
    {"rs_rate", [](const ExperimentRecord& r) { return r.rs.statistic; }},
    {"spa_rate", [](const ExperimentRecord& r) { return r.spa.statistic; }},
    {"chi2_p", [](const ExperimentRecord& r) { return r.chi2.statistic; }},
    {"rs_detected_pct", [](const ExperimentRecord& r) { return r.rs.detected ? 100.0 : 0.0; }},
    {"chi2_detected_pct", [](const ExperimentRecord& r) { return r.chi2.detected ? 100.0 : 0.0; }},
    {"spa_detected_pct", [](const ExperimentRecord& r) { return r.spa.detected ? 100.0 : 0.0; }},
};

constexpr MetricDef kTimingMetrics[] = {
    {"t_feature", [](const ExperimentRecord& r) { return r.times.feature; }},
    {"t_fuzzy", [](const ExperimentRecord& r) { return r.times.fuzzy; }},
    {"t_embed", [](const ExperimentRecord& r) { return r.times.embed; }},
    {"t_extract", [](const ExperimentRecord& r) { return r.times.extract; }},
    {"t_total", [](const ExperimentRecord& r) { return r.times.total(); }},
};

const AggregateRow* find_row(const std::vector<AggregateRow>& rows, Method m, double bpp, std::string_view metric) {
  for (const auto& r : rows) {
    if (r.method == m && r.bpp == bpp && r.metric == metric) return &r;
  }
  return nullptr;
}

}  // namespace

std::vector<AggregateRow> aggregate(const std::vector<ExperimentRecord>& records, const BenchConfig& cfg,
                                    bool timing) {
  std::vector<AggregateRow> rows;
  const auto add = [&](Method m, double bpp, const char* name, std::vector<double> values) {
    rows.push_back({m, bpp, name, summarize(values)});
  };
  for (Method m : cfg.methods) {
    for (double bpp : cfg.bpp_levels) {
      std::vector<const ExperimentRecord*> all, ok;
      for (const auto& r : records) {
        if (r.method != m || r.bpp != bpp) continue;
        all.push_back(&r);
        if (r.error.empty()) ok.push_back(&r);
      }
      if (!timing) {
        std::vector<double> success;
        for (const auto* r : all) success.push_back(r->extraction_ok ? 100.0 : 0.0);
        add(m, bpp, "extraction_ok_pct", std::move(success));
      }
      const auto metrics = timing ? std::span<const MetricDef>(kTimingMetrics) : std::span<const MetricDef>(kQualityMetrics);
      for (const auto& def : metrics) {
        std::vector<double> values;
        for (const auto* r : ok) values.push_back(def.get(*r));
        add(m, bpp, def.name, std::move(values));
      }
    }
  }
  return rows;
}

std::vector<PairedRow> paired_tests(const std::vector<ExperimentRecord>& records, const BenchConfig& cfg) {
  const std::pair<Method, Method> candidates[] = {
      {Method::fixed1, Method::adaptive}, {Method::fixed2, Method::adaptive}, {Method::fixed1, Method::fixed2}};
  std::vector<std::pair<Method, Method>> pairs;
  const auto has = [&](Method m) { return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end(); };
  for (const auto& p : candidates) {
    if (has(p.first) && has(p.second)) pairs.push_back(p);
  }
  const int k = static_cast<int>(std::max<std::size_t>(1, pairs.size() * cfg.bpp_levels.size()));

  // (image, method, bpp) -> record, for successful records only.
  std::map<std::tuple<std::string, Method, double>, const ExperimentRecord*> index;
  std::vector<std::string> image_order;
  for (const auto& r : records) {
    if (image_order.empty() || image_order.back() != r.image_id) image_order.push_back(r.image_id);
    if (r.error.empty()) index[{r.image_id, r.method, r.bpp}] = &r;
  }

  std::vector<PairedRow> rows;
  for (const char* metric : {"psnr", "rs_rate"}) {
    const bool is_psnr = std::string_view(metric) == "psnr";
    for (const auto& [a, b] : pairs) {
      for (double bpp : cfg.bpp_levels) {
        PairedRow row;
        row.first = a;
        row.second = b;
        row.bpp = bpp;
        row.metric = metric;
        row.k = k;
        std::vector<double> diffs;
        for (const auto& id : image_order) {
          const auto ia = index.find({id, a, bpp});
          const auto ib = index.find({id, b, bpp});
          if (ia == index.end() || ib == index.end()) continue;
          const double va = is_psnr ? ia->second->quality.psnr : ia->second->rs.statistic;
          const double vb = is_psnr ? ib->second->quality.psnr : ib->second->rs.statistic;
          if (!std::isfinite(va) || !std::isfinite(vb)) continue;
          diffs.push_back(va - vb);
        }
        try {
          row.report = paired_t_test(diffs, k);
        } catch (const Error& e) {
          row.error = std::string(to_string(e.code()));
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::vector<AblationCell> run_ablation(const BenchConfig& cfg, const LogFn& log) {
  cfg.validate();
  const auto images = select_images(cfg.corpus_manifest, cfg.ablation_images);
  std::vector<Image> covers(images.size());
  std::vector<DetectorFeatures> cover_features(images.size());
  parallel_for(images.size(), cfg.workers, [&](std::size_t i) {
    covers[i] = load_png(images[i].path);
    cover_features[i] = detector_features(covers[i]);
  });

  std::vector<AblationCell> cells;
  for (AblationVariant v : cfg.ablation_variants) {
    BenchConfig vcfg = cfg;
    vcfg.codec.pins = variant_pins(v);
    for (double bpp : cfg.bpp_levels) {
      std::vector<DetectorFeatures> stego_features(images.size());
      std::vector<char> ok(images.size(), 0);
      std::vector<char> valid(images.size(), 1);
      parallel_for(images.size(), cfg.workers, [&](std::size_t i) {
        const auto& meta = images[i];
        try {
          const std::uint64_t rs = record_seed(cfg.seed, meta.id, Method::adaptive, bpp);
          Bytes plaintext(plan_payload(bpp, covers[i].height(), covers[i].width(), covers[i].channels(),
                                       Method::adaptive, cfg.fill_policy));
          Prng(rs).fill(plaintext);
          PrngEntropy entropy(rs ^ kSealDomain);
          const Bytes wire = serialize(seal(plaintext, as_bytes(cfg.password), entropy, cfg.kdf));
          const DepthMap depths = method_depths(covers[i], Method::adaptive, wire.size(), vcfg.codec);
          for (std::uint8_t d : depths.values()) {
            if (d < 1 || d > 3) valid[i] = 0;
          }
          const Image stego = embed_with_depths(covers[i], wire, depths, cfg.seed);
          stego_features[i] = detector_features(stego);
          const auto opened = open(deserialize(extract(stego, Method::adaptive, cfg.seed, vcfg.codec)),
                                   as_bytes(cfg.password), cfg.kdf);
          ok[i] = opened.has_value() && *opened == plaintext;
        } catch (const Error& e) {
          emit(log, "ablation failure: " + meta.id + " " + std::string(variant_name(v)) + " " + format_bpp(bpp) +
                        ": " + e.what());
          stego_features[i] = cover_features[i];
        }
      });

      std::vector<DetectorFeatures> train_c, train_s, test_c, test_s;
      for (std::size_t i = 0; i < images.size(); ++i) {
        (i % 2 == 0 ? train_c : test_c).push_back(cover_features[i]);
        (i % 2 == 0 ? train_s : test_s).push_back(stego_features[i]);
      }
      AblationCell cell;
      cell.variant = v;
      cell.bpp = bpp;
      cell.train_pairs = train_c.size();
      cell.test_pairs = test_c.size();
      if (test_c.empty()) {
        test_c = train_c;
        test_s = train_s;
      }
      const auto model = train_feature_detector(train_c, train_s);
      std::size_t tp = 0, fp = 0;
      for (const auto& f : test_s) tp += feature_detector(f, model).detected;
      for (const auto& f : test_c) fp += feature_detector(f, model).detected;
      cell.positive_rate = 100.0 * static_cast<double>(tp) / static_cast<double>(test_s.size());
      cell.false_positive_rate = 100.0 * static_cast<double>(fp) / static_cast<double>(test_c.size());
      cell.extraction_success =
          100.0 * static_cast<double>(std::count(ok.begin(), ok.end(), 1)) / static_cast<double>(ok.size());
      cell.valid_depths = std::all_of(valid.begin(), valid.end(), [](char c) { return c != 0; });
      cells.push_back(cell);
    }
  }
  return cells;
}

std::vector<ProfileRow> run_profile(const BenchConfig& cfg, const LogFn& log) {
  cfg.validate();
  const auto images = select_images(cfg.corpus_manifest, cfg.profile_images);
  std::vector<ProfileRow> rows;
  for (Method m : cfg.methods) {
    std::vector<double> fe, fu, em, ex, to;
    for (const auto& meta : images) {
      const Image cover = load_png(meta.path);
      const ExperimentRecord r = run_record(cover, meta, m, cfg.profile_bpp, cfg);
      if (!r.error.empty()) {
        emit(log, "profile failure: " + meta.id + " " + std::string(method_name(m)) + ": " + r.error);
        continue;
      }
      fe.push_back(r.times.feature);
      fu.push_back(r.times.fuzzy);
      em.push_back(r.times.embed);
      ex.push_back(r.times.extract);
      to.push_back(r.times.total());
    }
    rows.push_back({m, summarize(fe), summarize(fu), summarize(em), summarize(ex), summarize(to)});
  }
  return rows;
}

void write_records_csv(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  out << "image_id,category,method,bpp,plaintext_bytes,wire_bytes,psnr,ssim,mse,kl,rs_rate,rs_detected,"
         "chi2_p,chi2_detected,spa_rate,spa_detected,extraction_ok,error,"
         "t_feature,t_fuzzy,t_embed,t_extract,t_total\n";
  for (const auto& r : records) {
    out << r.image_id << ',' << category_name(r.category) << ',' << method_name(r.method) << ','
        << format_bpp(r.bpp) << ',' << r.plaintext_bytes << ',' << r.wire_bytes << ','
        << format_number(r.quality.psnr) << ',' << format_number(r.quality.ssim) << ','
        << format_number(r.quality.mse) << ',' << format_number(r.quality.kl) << ','
        << format_number(r.rs.statistic) << ',' << int(r.rs.detected) << ',' << format_number(r.chi2.statistic)
        << ',' << int(r.chi2.detected) << ',' << format_number(r.spa.statistic) << ',' << int(r.spa.detected)
        << ',' << int(r.extraction_ok) << ',' << r.error << ',' << format_number(r.times.feature) << ','
        << format_number(r.times.fuzzy) << ',' << format_number(r.times.embed) << ','
        << format_number(r.times.extract) << ',' << format_number(r.times.total()) << '\n';
  }
  if (!out) throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

void write_aggregates_csv(const std::vector<AggregateRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  out << "method,bpp,metric,mean,sd,ci_low,ci_high\n";
  for (const auto& r : rows) {
    out << method_name(r.method) << ',' << format_bpp(r.bpp) << ',' << r.metric << ','
        << format_number(r.summary.mean) << ',' << format_number(r.summary.sd) << ','
        << format_number(r.summary.ci_low) << ',' << format_number(r.summary.ci_high) << '\n';
  }
  if (!out) throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

void write_paired_csv(const std::vector<PairedRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  out << "first,second,metric,bpp,n,mean_diff,sd_diff,t_stat,df,p_value,p_bonferroni,k,cohens_d,ci_low,ci_high,"
         "power,error\n";
  for (const auto& r : rows) {
    out << method_name(r.first) << ',' << method_name(r.second) << ',' << r.metric << ',' << format_bpp(r.bpp)
        << ',';
    if (r.report) {
      const auto& t = *r.report;
      out << t.n << ',' << format_number(t.mean_diff) << ',' << format_number(t.sd_diff) << ','
          << format_number(t.t_stat) << ',' << format_number(t.df) << ',' << format_number(t.p_value) << ','
          << format_number(t.p_bonferroni) << ',' << r.k << ',' << format_number(t.cohens_d) << ','
          << format_number(t.ci_low) << ',' << format_number(t.ci_high) << ',' << format_number(t.power) << ",";
    } else {
      out << ",,,,,,," << r.k << ",,,,,";
    }
    out << r.error << '\n';
  }
  if (!out) throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

namespace {

std::string method_label(Method m) {
  switch (m) {
    case Method::fixed1: return "Fixed-LSB-1";
    case Method::fixed2: return "Fixed-LSB-2";
    case Method::adaptive: return "Adaptive";
  }
  return "";
}

std::string mean_sd_ci(const Summary& s, int digits) {
  return fixed(s.mean, digits) + " ± " + fixed(s.sd, digits) + " [" + fixed(s.ci_low, digits) + ", " +
         fixed(s.ci_high, digits) + "]";
}

void method_table(std::ostringstream& md, const BenchResult& res, const BenchConfig& cfg, const char* title,
                  const char* metric, int digits) {
  md << "## " << title << "\n\n| BPP |";
  for (Method m : cfg.methods) md << ' ' << method_label(m) << " |";
  md << "\n|---|";
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) md << "---|";
  md << '\n';
  for (double bpp : cfg.bpp_levels) {
    md << "| " << format_bpp(bpp) << " |";
    for (Method m : cfg.methods) {
      const auto* row = find_row(res.aggregates, m, bpp, metric);
      md << ' ' << (row ? mean_sd_ci(row->summary, digits) : "-") << " |";
    }
    md << '\n';
  }
  md << '\n';
}

}  // namespace

std::string bench_tables_markdown(const BenchResult& res, const BenchConfig& cfg) {
  std::ostringstream md;
  md << "# Benchmark results\n\n";
  method_table(md, res, cfg, "PSNR (dB), mean ± sd [95% CI]", "psnr", 2);
  method_table(md, res, cfg, "SSIM, mean ± sd [95% CI]", "ssim", 6);

  md << "## Detection rates (%)\n\n| BPP |";
  for (const char* det : {"RS", "Chi-square", "SPA"}) {
    for (Method m : cfg.methods) md << ' ' << det << ' ' << method_label(m) << " |";
  }
  md << "\n|---|";
  for (std::size_t i = 0; i < 3 * cfg.methods.size(); ++i) md << "---|";
  md << '\n';
  for (double bpp : cfg.bpp_levels) {
    md << "| " << format_bpp(bpp) << " |";
    for (const char* metric : {"rs_detected_pct", "chi2_detected_pct", "spa_detected_pct"}) {
      for (Method m : cfg.methods) {
        const auto* row = find_row(res.aggregates, m, bpp, metric);
        md << ' ' << (row ? fixed(row->summary.mean, 1) : "-") << " |";
      }
    }
    md << '\n';
  }
  md << '\n';

  md << "## Paired t-tests (difference = first − second)\n\n"
        "| Comparison | Metric | BPP | n | Mean diff. | t-stat | p (Bonferroni) | Cohen's d | Power |\n"
        "|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : res.paired) {
    md << "| " << method_label(r.first) << " vs " << method_label(r.second) << " | " << r.metric << " | "
       << format_bpp(r.bpp) << " | ";
    if (r.report) {
      const auto& t = *r.report;
      const std::string p = t.p_bonferroni < 0.001 ? "<0.001" : fixed(t.p_bonferroni, 4);
      md << t.n << " | " << fixed(t.mean_diff, 4) << " | " << fixed(t.t_stat, 3) << " | " << p << " | "
         << fixed(t.cohens_d, 3) << " | " << fixed(t.power, 3) << " |\n";
    } else {
      md << "- | - | - | " << r.error << " | - | - |\n";
    }
  }
  md << '\n';

  md << "## Extraction success rate (%)\n\n| BPP |";
  for (Method m : cfg.methods) md << ' ' << method_label(m) << " |";
  md << "\n|---|";
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) md << "---|";
  md << '\n';
  for (double bpp : cfg.bpp_levels) {
    md << "| " << format_bpp(bpp) << " |";
    for (Method m : cfg.methods) {
      const auto* row = find_row(res.aggregates, m, bpp, "extraction_ok_pct");
      md << ' ' << (row ? fixed(row->summary.mean, 1) : "-") << " |";
    }
    md << '\n';
  }
  md << '\n';

  md << "## Mean time per record (s)\n\n| Method | Feature | Fuzzy | Embed | Extract | Total |\n"
        "|---|---|---|---|---|---|\n";
  for (Method m : cfg.methods) {
    md << "| " << method_label(m) << " |";
    for (const char* metric : {"t_feature", "t_fuzzy", "t_embed", "t_extract", "t_total"}) {
      std::vector<double> means;
      for (double bpp : cfg.bpp_levels) {
        if (const auto* row = find_row(res.timing, m, bpp, metric)) means.push_back(row->summary.mean);
      }
      md << ' ' << fixed(summarize(means).mean, 4) << " |";
    }
    md << '\n';
  }
  return md.str();
}

std::string ablation_markdown(const std::vector<AblationCell>& cells, const BenchConfig& cfg) {
  std::ostringstream md;
  const auto table = [&](const char* title, double AblationCell::*field) {
    md << "## " << title << "\n\n| BPP |";
    for (auto v : cfg.ablation_variants) md << ' ' << variant_name(v) << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < cfg.ablation_variants.size(); ++i) md << "---|";
    md << '\n';
    for (double bpp : cfg.bpp_levels) {
      md << "| " << format_bpp(bpp) << " |";
      for (auto v : cfg.ablation_variants) {
        const auto it = std::find_if(cells.begin(), cells.end(),
                                     [&](const AblationCell& c) { return c.variant == v && c.bpp == bpp; });
        md << ' ' << (it != cells.end() ? fixed((*it).*field, 1) : "-") << " |";
      }
      md << '\n';
    }
    md << '\n';
  };
  table("Feature-based detector positive rate (%)", &AblationCell::positive_rate);
  table("Feature-based detector false positive rate (%)", &AblationCell::false_positive_rate);
  table("Extraction success rate (%)", &AblationCell::extraction_success);
  return md.str();
}

std::string profile_markdown(const std::vector<ProfileRow>& rows) {
  std::ostringstream md;
  md << "## Timing profile (s, mean ± sd)\n\n| Method | Feature extract | Fuzzy infer | Embed | Extract | Total |\n"
        "|---|---|---|---|---|---|\n";
  const auto cell = [](const Summary& s) { return fixed(s.mean, 4) + " ± " + fixed(s.sd, 4); };
  for (const auto& r : rows) {
    md << "| " << method_label(r.method) << " | " << cell(r.feature) << " | " << cell(r.fuzzy) << " | "
       << cell(r.embed) << " | " << cell(r.extract) << " | " << cell(r.total) << " |\n";
  }
  if (rows.size() > 1) {
    const auto fixed_it = std::find_if(rows.begin(), rows.end(), [](const ProfileRow& r) { return r.method == Method::fixed1; });
    const auto adapt_it = std::find_if(rows.begin(), rows.end(), [](const ProfileRow& r) { return r.method == Method::adaptive; });
    if (fixed_it != rows.end() && adapt_it != rows.end() && fixed_it->total.mean > 0) {
      md << "\nAdaptive overhead vs Fixed-LSB-1: "
         << fixed(100.0 * (adapt_it->total.mean - fixed_it->total.mean) / fixed_it->total.mean, 1) << "%\n";
    }
  }
  return md.str();
}

void write_bench_outputs(const BenchResult& result, const BenchConfig& cfg, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create " + dir.string() + ": " + ec.message());
  write_records_csv(result.records, dir / "records.csv");
  write_aggregates_csv(result.aggregates, dir / "aggregates.csv");
  write_aggregates_csv(result.timing, dir / "timing.csv");
  write_paired_csv(result.paired, dir / "paired_tests.csv");
  std::ofstream md(dir / "tables.md", std::ios::binary);
  md << bench_tables_markdown(result, cfg);
  if (!md) throw Error(ErrorCode::io_error, "write failed for tables.md");
}

}  // namespace fuzzystego
