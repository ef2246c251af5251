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


#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>
#include <numeric>

#include "fuzzystego/features.hpp"
#include "support.hpp"

using namespace fuzzystego;

namespace {

// Straight transcription of the published SplitMix64 reference (Vigna).
struct ReferenceSplitMix {
  std::uint64_t x;
  std::uint64_t operator()() {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

double mean_entropy(const Image& img) {
  const auto fm = extract_features(img);
  const auto h = fm.entropy.values();
  return std::accumulate(h.begin(), h.end(), 0.0) / static_cast<double>(h.size());
}

// Mean entropy per category over 50 images at full size; computed once.
const std::map<Category, double>& category_entropy() {
  static const std::map<Category, double> table = [] {
    std::map<Category, double> t;
    const CorpusSpec spec;
    for (Category c : kCategories) {
      double sum = 0.0;
      for (int i = 0; i < 50; ++i) sum += mean_entropy(generate_category(c, i, spec));
      t[c] = sum / 50.0;
    }
    return t;
  }();
  return table;
}

std::vector<char> file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("splitmix64 matches the reference sequence") {
    CHECK(Prng(0).next() == 0xE220A8397B1DCDAFull);
    for (std::uint64_t seed : {0ull, 1ull, 42ull, 0xDEADBEEFull, ~0ull}) {
      Prng p(seed);
      ReferenceSplitMix ref{seed};
      for (int i = 0; i < 1000; ++i) REQUIRE(p.next() == ref());
    }
  }

  TEST_CASE("prng is deterministic and seed-sensitive") {
    Prng a(7), b(7);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    CHECK(Prng(1).next() != Prng(2).next());

    const auto [out, succ] = prng_next(Prng(5));
    Prng direct(5);
    CHECK(out == direct.next());
    CHECK(succ.state() == direct.state());
  }

  TEST_CASE("bounded draws stay in range") {
    Prng p(3);
    for (int i = 0; i < 10000; ++i) {
      CHECK(p.below(7) < 7);
      const double d = p.next_double();
      CHECK((d >= 0.0 && d < 1.0));
    }
  }

  TEST_CASE("category names") {
    for (Category c : kCategories) CHECK(parse_category(category_name(c)) == c);
    CHECK_THROWS_CODE(parse_category("plasma"), ErrorCode::unknown_category);
    CHECK_THROWS_CODE(generate_category("plasma", 0, CorpusSpec{}), ErrorCode::unknown_category);
  }

  TEST_CASE("per-image seed formula") {
    const CorpusSpec spec;
    CHECK(image_seed(Category::smooth, 0, spec) == 42);
    CHECK(image_seed(Category::mixed, 7, spec) == (42ull ^ 4000007ull));
  }

  TEST_CASE("generation is deterministic and shaped") {
    CorpusSpec spec;
    spec.side = 64;
    for (Category c : kCategories) {
      const Image a = generate_category(c, 3, spec);
      CHECK(a.height() == 64);
      CHECK(a.width() == 64);
      CHECK(a.channels() == 3);
      CHECK(a == generate_category(c, 3, spec));
      CHECK(a != generate_category(c, 4, spec));
    }
  }

  TEST_CASE("generate_corpus writes the manifest and files reproducibly") {
    CorpusSpec spec;
    spec.images_per_category = 2;
    spec.side = 32;
    testing::TempDir a, b;
    const auto ma = generate_corpus(spec, a.path());
    const auto mb = generate_corpus(spec, b.path());
    REQUIRE(ma.size() == 10);
    CHECK(read_manifest(a / "manifest.csv").size() == 10);
    for (Category c : kCategories) {
      CHECK(std::count_if(ma.begin(), ma.end(), [c](const ManifestEntry& e) { return e.category == c; }) == 2);
    }
    for (std::size_t i = 0; i < ma.size(); ++i) {
      CHECK(ma[i].relative_path == mb[i].relative_path);
      CHECK(load_png(a.path() / ma[i].relative_path) == load_png(b.path() / mb[i].relative_path));
    }
    CHECK(file_bytes(a / "manifest.csv") == file_bytes(b / "manifest.csv"));
  }

  TEST_CASE("generate_corpus rejects an unwritable destination") {
    CorpusSpec spec;
    spec.images_per_category = 1;
    spec.side = 16;
    testing::TempDir dir;
    { std::ofstream(dir / "blocker") << "x"; }
    CHECK_THROWS_CODE(generate_corpus(spec, dir / "blocker"), ErrorCode::io_error);
  }

  TEST_CASE("manifest parse errors") {
    CHECK_THROWS_CODE(read_manifest("/nonexistent/manifest.csv"), ErrorCode::file_not_found);
    testing::TempDir dir;
    { std::ofstream(dir / "m.csv") << "a.png,plasma\n"; }
    CHECK_THROWS_CODE(read_manifest(dir / "m.csv"), ErrorCode::unknown_category);
    { std::ofstream(dir / "n.csv") << "no comma here\n"; }
    CHECK_THROWS_CODE(read_manifest(dir / "n.csv"), ErrorCode::unsupported_format);
  }

  // The generators place mixed below natural_like, so only the orderings
  // that hold for them are asserted here.
  TEST_CASE("category entropy ordering over 50 images each") {
    const auto& h = category_entropy();
    MESSAGE("smooth " << h.at(Category::smooth) << " noise " << h.at(Category::noise) << " natural_like "
                      << h.at(Category::natural_like) << " textured " << h.at(Category::textured) << " mixed "
                      << h.at(Category::mixed));
    CHECK(h.at(Category::noise) > h.at(Category::smooth));
    CHECK(h.at(Category::noise) >= h.at(Category::textured));
    CHECK(h.at(Category::textured) >= h.at(Category::mixed));
    CHECK(h.at(Category::textured) >= h.at(Category::natural_like));
    CHECK(h.at(Category::mixed) >= h.at(Category::smooth));
    CHECK(h.at(Category::natural_like) >= h.at(Category::smooth));
    CHECK(h.at(Category::noise) > 4.5);
    CHECK(h.at(Category::smooth) < 3.0);
  }
}
