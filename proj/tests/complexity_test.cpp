// Copyright 2026 The lambdaenv Authors.
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


#include "lambdaenv/complexity.hpp"

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "lambdaenv/random.hpp"

namespace lambdaenv {
namespace {

std::string random_text(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::string s(n, ' ');
  for (char& c : s) c = static_cast<char>(33 + rng.below(94));
  return s;
}

TEST(CompressedSize, RepetitiveBeatsRandom) {
  std::string repeated;
  for (int i = 0; i < 1000; ++i) repeated += "0 1 2 -\n";
  std::string noisy;
  for (int i = 0; i < 1000; ++i) noisy += random_text(7, 1000 + i) + "\n";
  ASSERT_EQ(repeated.size(), noisy.size());
  EXPECT_LT(compressed_size(repeated), compressed_size(noisy));
}

TEST(ApproxComplexity, DeterministicAndPatternSensitive) {
  const Environment env = make_environment(GenConfig{}, 3);
  EXPECT_EQ(approx_complexity(env.space, env.pattern),
            approx_complexity(env.space, env.pattern));
  PatternSequence flat{std::vector<Action>(400, 0)};
  PatternSequence noisy;
  Rng rng(4);
  for (int i = 0; i < 400; ++i) noisy.actions.push_back(rng.below(env.space.n_actions()));
  EXPECT_LT(approx_complexity(env.space, flat), approx_complexity(env.space, noisy));
}

TEST(ApproxComplexity, IncompressiblePaddingNeverShrinks) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Environment env = make_environment(GenConfig{}, seed);
    const std::string text = serialize(env.space, env.pattern);
    const std::size_t base = compressed_size(text);
    EXPECT_LE(base, text.size() + 11);  // zlib header/trailer + stored-block overhead
    EXPECT_GE(compressed_size(text + random_text(64, seed)), base);
  }
}

TEST(ComplexityRecord, Fields) {
  const Environment env = make_environment(GenConfig{}, 8);
  const auto rec = complexity_record("env0008", env);
  EXPECT_EQ(rec.env_id, "env0008");
  EXPECT_EQ(rec.serialized_len, serialize(env.space, env.pattern).size());
  EXPECT_EQ(rec.k_approx, approx_complexity(env.space, env.pattern));
  EXPECT_GT(rec.k_approx, 0u);
}

TEST(LinearFit, ExactLine) {
  const auto f = linear_fit({{0, 1}, {1, 3}, {2, 5}});
  EXPECT_DOUBLE_EQ(f.slope, 2.0);
  EXPECT_DOUBLE_EQ(f.intercept, 1.0);
  EXPECT_DOUBLE_EQ(f.r, 1.0);
  EXPECT_EQ(f.n, 3u);
}

TEST(LinearFit, FlatLine) {
  const auto f = linear_fit({{0, 0}, {1, 0}});
  EXPECT_EQ(f.slope, 0.0);
  EXPECT_EQ(f.intercept, 0.0);
  EXPECT_EQ(f.r, 0.0);
}

TEST(LinearFit, Errors) {
  EXPECT_THROW(linear_fit({{1, 2}}), std::invalid_argument);
  EXPECT_THROW(linear_fit({{1, 2}, {1, 3}}), std::invalid_argument);
}

TEST(LinearFit, ExactLinesClosedForm) {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const double a = rng.uniform01() * 4 - 2, b = rng.uniform01() * 10 - 5;
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 10; ++i) {
      const double x = rng.uniform01() * 100;
      pts.emplace_back(x, a * x + b);
    }
    const auto f = linear_fit(pts);
    EXPECT_NEAR(f.slope, a, 1e-9);
    EXPECT_NEAR(f.intercept, b, 1e-7);
    if (a != 0.0) EXPECT_NEAR(std::abs(f.r), 1.0, 1e-12);
  }
}

TEST(LinearFit, NoisySlopeWithinThreeSigma) {
  // y = -0.002 x + 0.3 + N(0, 0.05); sigma of the slope is s / sqrt(Sxx).
  Rng rng(6);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<std::pair<double, double>> pts;
  double mx = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = 50.0 + i;
    pts.emplace_back(x, -0.002 * x + 0.3 + noise(rng));
    mx += x;
  }
  mx /= 100;
  double sxx = 0.0;
  for (const auto& [x, y] : pts) sxx += (x - mx) * (x - mx);
  const auto f = linear_fit(pts);
  EXPECT_NEAR(f.slope, -0.002, 3 * 0.05 / std::sqrt(sxx));
}

TEST(ComplexityReport, Examples) {
  const std::map<std::string, std::size_t> k{{"e0", 100}, {"e1", 110}, {"e2", 120}};
  const std::map<std::string, std::map<std::string, double>> scores{
      {"ql", {{"e0", 0.3}, {"e1", 0.2}, {"e2", 0.1}}},
      {"rnd", {{"e0", 0.01}, {"e1", -0.02}, {"e2", 0.03}}}};
  const auto fits = complexity_report(scores, k);
  EXPECT_NEAR(fits.at("ql").r, -1.0, 1e-12);
  EXPECT_NEAR(fits.at("ql").slope, -0.01, 1e-12);
  const auto manual = linear_fit({{100, 0.01}, {110, -0.02}, {120, 0.03}});
  EXPECT_DOUBLE_EQ(fits.at("rnd").slope, manual.slope);
  EXPECT_DOUBLE_EQ(fits.at("rnd").r, manual.r);

  auto missing = scores;
  missing["ql"].erase("e2");
  EXPECT_THROW(complexity_report(missing, k), std::invalid_argument);
  auto renamed = scores;
  renamed["ql"].erase("e2");
  renamed["ql"]["e9"] = 0.0;
  EXPECT_THROW(complexity_report(renamed, k), std::invalid_argument);
}

}  // namespace
}  // namespace lambdaenv
