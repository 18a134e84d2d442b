// Copyright 2026 The OSP Authors
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

// Test-only reference implementations, written straight from the
// definitions and kept independent of the library's code paths.

#ifndef OSP_TESTS_ORACLE_HPP_
#define OSP_TESTS_ORACLE_HPP_

#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "osp/metric.hpp"
#include "osp/pose_model.hpp"

namespace osp::oracle {

// D_k by naive double loops over the raw frames in long double. Vectors are
// never materialised; the dot products walk the same (site, frame, x/y)
// pairing the flattened vectors use.
inline double BruteForceDk(const ActivitySet& set, const std::vector<SiteId>& subset) {
  const std::size_t n = set.size();
  auto dot = [&](std::size_t a, std::size_t b) {
    long double sum = 0.0L;
    for (SiteId site : subset) {
      const auto& ta = set[a].track(site);
      const auto& tb = set[b].track(site);
      for (std::size_t f = 0; f < ta.size(); ++f) {
        sum += static_cast<long double>(ta[f].x) * tb[f].x;
        sum += static_cast<long double>(ta[f].y) * tb[f].y;
      }
    }
    return sum;
  };
  long double total = 0.0L;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const long double cosine = dot(i, j) / (std::sqrt(dot(i, i)) * std::sqrt(dot(j, j)));
      total += std::fabs(1.0L - cosine);
    }
  }
  return static_cast<double>(total);
}

// tau = 2 / (n (n - 1)) * sum_{i<j} sgn(x_i - x_j) sgn(y_i - y_j).
inline double BruteForceTau(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
  auto sgn = [](long long v) { return (v > 0) - (v < 0); };
  const std::size_t n = x.size();
  long long sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      sum += sgn(static_cast<long long>(x[i]) - static_cast<long long>(x[j])) *
             sgn(static_cast<long long>(y[i]) - static_cast<long long>(y[j]));
    }
  }
  return 2.0 * static_cast<double>(sum) / (static_cast<double>(n) * static_cast<double>(n - 1));
}

// Random activity set with points uniform in [0, 1).
inline ActivitySet RandomActivitySet(std::mt19937_64& rng, std::size_t n,
                                     const std::vector<SiteId>& sites, std::size_t length) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<SkeletonSeries> activities;
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<std::vector<Point2>> tracks(sites.size(), std::vector<Point2>(length));
    for (auto& track : tracks) {
      for (auto& p : track) p = {unit(rng), unit(rng)};
    }
    activities.emplace_back("a" + std::to_string(a), sites, std::move(tracks), 10.0);
  }
  return ActivitySet(std::move(activities));
}

// Closed-form instance whose D_k values were computed independently at 40
// significant digits:
//   x = 0.5 + 0.3  sin(1.7 f + 0.9 a + 0.4 s)
//   y = 0.5 + 0.25 cos(1.3 f + 0.6 a + 0.7 s)
// for activity a, canonical site index s and frame f; n = 4, L = 10.
inline ActivitySet TrigActivitySet() {
  std::vector<SiteId> sites(kEvaluationRoster.begin(), kEvaluationRoster.end());
  std::vector<SkeletonSeries> activities;
  for (int a = 0; a < 4; ++a) {
    std::vector<std::vector<Point2>> tracks;
    for (int s = 0; s < 5; ++s) {
      std::vector<Point2> track;
      for (int f = 0; f < 10; ++f) {
        track.push_back({0.5 + 0.3 * std::sin(1.7 * f + 0.9 * a + 0.4 * s),
                         0.5 + 0.25 * std::cos(1.3 * f + 0.6 * a + 0.7 * s)});
      }
      tracks.push_back(std::move(track));
    }
    activities.emplace_back("trig" + std::to_string(a), sites, std::move(tracks), 10.0);
  }
  return ActivitySet(std::move(activities));
}

inline constexpr double kTrigDkLwRw = 0.56086901641285138529;
inline constexpr double kTrigDkPeLfRf = 0.60458266196563735772;
inline constexpr double kTrigDkLw = 0.55735502963572920895;

}  // namespace osp::oracle

#endif  // OSP_TESTS_ORACLE_HPP_
