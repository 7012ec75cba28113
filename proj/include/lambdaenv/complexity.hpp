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

// Environment complexity approximated by the compressed size of its canonical
// description, and least-squares fits of scores against it.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <zlib.h>

#include "lambdaenv/space.hpp"

namespace lambdaenv {

// zlib stream (RFC 1950 header + deflate + adler32) at level 9, default
// window and memory level, default strategy.
inline constexpr int kCompressionLevel = 9;

inline std::size_t compressed_size(std::string_view bytes) {
  uLongf bound = compressBound(static_cast<uLong>(bytes.size()));
  std::vector<Bytef> out(bound);
  const int rc = compress2(out.data(), &bound, reinterpret_cast<const Bytef*>(bytes.data()),
                           static_cast<uLong>(bytes.size()), kCompressionLevel);
  if (rc != Z_OK) throw std::runtime_error("compress2 failed: " + std::to_string(rc));
  return static_cast<std::size_t>(bound);
}

struct ComplexityRecord {
  std::string env_id;
  std::size_t k_approx = 0;
  std::size_t serialized_len = 0;
};

inline std::size_t approx_complexity(const Space& space, const PatternSequence& pattern) {
  return compressed_size(serialize(space, pattern));
}

inline ComplexityRecord complexity_record(std::string env_id, const Environment& env) {
  const std::string text = serialize(env.space, env.pattern);
  return {std::move(env_id), compressed_size(text), text.size()};
}

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r = 0.0;  // Pearson; 0 when y has no variance
  std::size_t n = 0;
};

// Ordinary least squares of y on x.
inline RegressionFit linear_fit(const std::vector<std::pair<double, double>>& points) {
  const std::size_t n = points.size();
  if (n < 2) throw std::invalid_argument("linear_fit: need at least 2 points");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: x has zero variance");
  RegressionFit fit;
  fit.n = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r = syy == 0.0 ? 0.0 : std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  return fit;
}

// scores[agent][env_id] -> score; complexities[env_id] -> k_approx.
// One fit per agent over (k_approx, score), points taken in env_id order.
inline std::map<std::string, RegressionFit> complexity_report(
    const std::map<std::string, std::map<std::string, double>>& scores,
    const std::map<std::string, std::size_t>& complexities) {
  std::map<std::string, RegressionFit> fits;
  for (const auto& [agent, per_env] : scores) {
    if (per_env.size() != complexities.size())
      throw std::invalid_argument("complexity_report: env sets differ for agent " + agent);
    std::vector<std::pair<double, double>> points;
    points.reserve(per_env.size());
    for (const auto& [env_id, score] : per_env) {
      auto it = complexities.find(env_id);
      if (it == complexities.end())
        throw std::invalid_argument("complexity_report: no complexity for env " + env_id);
      points.emplace_back(static_cast<double>(it->second), score);
    }
    fits[agent] = linear_fit(points);
  }
  return fits;
}

}  // namespace lambdaenv
