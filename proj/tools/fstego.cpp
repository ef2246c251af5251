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

// fstego: command-line front end for embedding, analysis and the benchmark.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "fuzzystego/bench.hpp"
#include "fuzzystego/codec.hpp"
#include "fuzzystego/corpus.hpp"
#include "fuzzystego/crypto.hpp"
#include "fuzzystego/error.hpp"
#include "fuzzystego/steganalysis.hpp"

namespace fs = std::filesystem;
using namespace fuzzystego;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitAuthFailure = 2;

std::string resolve_password(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("FSTEGO_PASSWORD"); env != nullptr && *env != '\0') return env;
  throw Error(ErrorCode::invalid_argument, "no password: pass --password or set FSTEGO_PASSWORD");
}

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::file_not_found, "cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
}

nlohmann::json detection_json(const DetectionResult& r) {
  nlohmann::json j{{"statistic", r.statistic}, {"detected", r.detected}, {"threshold", r.threshold}};
  if (r.condition) j["condition"] = std::string(to_string(*r.condition));
  return j;
}

struct KdfFlags {
  std::uint32_t time_cost = KdfParams{}.time_cost;
  std::uint32_t memory_kib = KdfParams{}.memory_kib;
  std::uint32_t parallelism = KdfParams{}.parallelism;

  void add(CLI::App* app) {
    app->add_option("--kdf-time", time_cost, "Argon2id passes")->capture_default_str();
    app->add_option("--kdf-memory", memory_kib, "Argon2id memory in KiB")->capture_default_str();
    app->add_option("--kdf-lanes", parallelism, "Argon2id lanes")->capture_default_str();
  }
  KdfParams params() const { return {time_cost, memory_kib, parallelism, kKeySize}; }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy-controlled adaptive LSB steganography toolkit"};
  app.require_subcommand(1);

  // gen-corpus
  auto* gen = app.add_subcommand("gen-corpus", "Generate the synthetic PNG corpus and manifest");
  fs::path gen_out;
  CorpusSpec spec;
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--per-category", spec.images_per_category, "Images per category")->capture_default_str();
  gen->add_option("--side", spec.side, "Image side in pixels")->capture_default_str();
  gen->add_option("--seed", spec.master_seed, "Master seed")->capture_default_str();

  // embed
  auto* emb = app.add_subcommand("embed", "Encrypt a message and hide it in a cover PNG");
  fs::path emb_cover, emb_out, emb_msg_file, emb_fuzzy;
  std::string emb_msg, emb_method = "adaptive", emb_password;
  std::uint64_t emb_seed = kDefaultSeed;
  KdfFlags emb_kdf;
  emb->add_option("--cover", emb_cover, "Cover PNG")->required();
  emb->add_option("--out", emb_out, "Stego PNG to write")->required();
  auto* msg_opt = emb->add_option("--message", emb_msg, "Message text");
  emb->add_option("--message-file", emb_msg_file, "Message file")->excludes(msg_opt);
  emb->add_option("--method", emb_method, "fixed1 | fixed2 | adaptive")->capture_default_str();
  emb->add_option("--seed", emb_seed, "Permutation key")->capture_default_str();
  emb->add_option("--password", emb_password, "Password (or FSTEGO_PASSWORD)");
  emb->add_option("--fuzzy-config", emb_fuzzy, "Rule base JSON");
  emb_kdf.add(emb);

  // extract
  auto* ext = app.add_subcommand("extract", "Recover and decrypt a message from a stego PNG");
  fs::path ext_stego, ext_out, ext_fuzzy;
  std::string ext_method = "adaptive", ext_password;
  std::uint64_t ext_seed = kDefaultSeed;
  KdfFlags ext_kdf;
  ext->add_option("--stego", ext_stego, "Stego PNG")->required();
  ext->add_option("--out", ext_out, "Write plaintext here instead of stdout");
  ext->add_option("--method", ext_method, "fixed1 | fixed2 | adaptive")->capture_default_str();
  ext->add_option("--seed", ext_seed, "Permutation key")->capture_default_str();
  ext->add_option("--password", ext_password, "Password (or FSTEGO_PASSWORD)");
  ext->add_option("--fuzzy-config", ext_fuzzy, "Rule base JSON");
  ext_kdf.add(ext);

  // analyze
  auto* ana = app.add_subcommand("analyze", "Run classical steganalysis on one PNG");
  fs::path ana_image;
  std::string ana_detector = "all";
  DetectorThresholds thr;
  ana->add_option("--image", ana_image, "PNG to analyze")->required();
  ana->add_option("--detector", ana_detector, "rs | chi2 | spa | all")
      ->check(CLI::IsMember({"rs", "chi2", "spa", "all"}))
      ->capture_default_str();
  ana->add_option("--rs-threshold", thr.rs)->capture_default_str();
  ana->add_option("--spa-threshold", thr.spa)->capture_default_str();
  ana->add_option("--chi2-threshold", thr.chi2)->capture_default_str();

  // bench / ablate / profile share the config plumbing.
  fs::path cfg_path, out_dir = "results";
  std::string cfg_password;
  int limit = 0;
  const auto add_cfg = [&](CLI::App* sub) {
    sub->add_option("--config", cfg_path, "Bench config JSON")->required();
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--password", cfg_password, "Password (or FSTEGO_PASSWORD / config)");
    sub->add_option("--images-limit", limit, "Override images_limit");
  };
  auto* ben = app.add_subcommand("bench", "Run the full embedding benchmark");
  auto* abl = app.add_subcommand("ablate", "Run the fuzzy-input ablation study");
  auto* pro = app.add_subcommand("profile", "Profile per-stage timings");
  add_cfg(ben);
  add_cfg(abl);
  add_cfg(pro);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto entries = generate_corpus(spec, gen_out);
      std::cout << "wrote " << entries.size() << " images to " << gen_out.string() << '\n';
      return 0;
    }

    if (emb->parsed()) {
      const Method method = parse_method(emb_method);
      CodecConfig codec;
      if (!emb_fuzzy.empty()) codec.fuzzy = load_fuzzy_system(emb_fuzzy);
      const Bytes message = emb_msg_file.empty() ? Bytes(emb_msg.begin(), emb_msg.end()) : read_file(emb_msg_file);
      const std::string password = resolve_password(emb_password);
      const Image cover = load_png(emb_cover);
      OsEntropy entropy;
      const Bytes wire = serialize(seal(message, as_bytes(password), entropy, emb_kdf.params()));
      save_png(embed(cover, wire, method, emb_seed, codec), emb_out);
      std::cout << "embedded " << message.size() << " bytes (" << wire.size() << " on the wire) into "
                << emb_out.string() << '\n';
      return 0;
    }

    if (ext->parsed()) {
      const Method method = parse_method(ext_method);
      CodecConfig codec;
      if (!ext_fuzzy.empty()) codec.fuzzy = load_fuzzy_system(ext_fuzzy);
      const std::string password = resolve_password(ext_password);
      const Bytes wire = extract(load_png(ext_stego), method, ext_seed, codec);
      const auto plain = open(deserialize(wire), as_bytes(password), ext_kdf.params());
      if (!plain) {
        std::cerr << "error: authentication failed (wrong password, key or method, or corrupted image)\n";
        return kExitAuthFailure;
      }
      if (ext_out.empty()) {
        std::cout.write(reinterpret_cast<const char*>(plain->data()), static_cast<std::streamsize>(plain->size()));
      } else {
        write_file(ext_out, *plain);
      }
      return 0;
    }

    if (ana->parsed()) {
      const Image img = load_png(ana_image);
      nlohmann::json out = nlohmann::json::object();
      const bool all = ana_detector == "all";
      const auto run = [&](const char* name, auto&& detector, double threshold) {
        try {
          out[name] = detection_json(detector());
        } catch (const Error& e) {
          DetectionResult r;
          r.threshold = threshold;
          r.condition = e.code();
          out[name] = detection_json(r);
        }
      };
      if (all || ana_detector == "rs") run("rs", [&] { return rs_analysis(img, thr.rs); }, thr.rs);
      if (all || ana_detector == "chi2") run("chi2", [&] { return chi_square_attack(img, thr.chi2); }, thr.chi2);
      if (all || ana_detector == "spa") run("spa", [&] { return sample_pair_analysis(img, thr.spa); }, thr.spa);
      std::cout << out.dump(2) << '\n';
      return 0;
    }

    BenchConfig cfg = load_bench_config(cfg_path);
    if (!cfg_password.empty()) {
      cfg.password = cfg_password;
    } else if (cfg.password.empty()) {
      cfg.password = resolve_password("");
    }
    if (limit > 0) cfg.images_limit = limit;

    if (ben->parsed()) {
      const BenchResult result = run_bench(cfg);
      write_bench_outputs(result, cfg, out_dir);
      std::size_t failed = 0;
      for (const auto& r : result.records) failed += !r.extraction_ok;
      std::cout << "records: " << result.records.size() << ", extraction failures: " << failed << ", outputs in "
                << out_dir.string() << '\n';
      return 0;
    }
    if (abl->parsed()) {
      const auto cells = run_ablation(cfg);
      write_text(out_dir / "ablation.md", ablation_markdown(cells, cfg));
      std::cout << ablation_markdown(cells, cfg);
      return 0;
    }
    if (pro->parsed()) {
      const auto rows = run_profile(cfg);
      write_text(out_dir / "profile.md", profile_markdown(rows));
      std::cout << profile_markdown(rows);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
