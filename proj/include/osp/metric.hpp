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

#ifndef OSP_METRIC_HPP_
#define OSP_METRIC_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "osp/error.hpp"
#include "osp/fingerprint.hpp"
#include "osp/pose_model.hpp"
#include "osp/sites.hpp"

namespace osp {

// A nonempty set of placement sites, stored in canonical order.
class PlacementSubset {
 public:
  PlacementSubset() = default;

  explicit PlacementSubset(std::vector<SiteId> sites)
      : sites_(CanonicalOrder(sites)) {
    if (sites_.empty()) {
      Fail(ErrorCode::kInvalidArgument, "placement subset is empty");
    }
    ValidateRoster(sites_, /*exclude_head=*/false);
  }

  PlacementSubset(std::initializer_list<SiteId> sites)
      : PlacementSubset(std::vector<SiteId>(sites)) {}

  static PlacementSubset Parse(std::string_view label) {
    return PlacementSubset(ParseSiteList(label, '+'));
  }

  const std::vector<SiteId>& sites() const { return sites_; }
  std::size_t size() const { return sites_.size(); }
  std::string label() const { return JoinSites(sites_); }

  bool contains(SiteId site) const {
    return std::binary_search(sites_.begin(), sites_.end(), site);
  }

  // Smaller subsets first, then lexicographic in canonical site order.
  friend std::strong_ordering operator<=>(const PlacementSubset& a,
                                          const PlacementSubset& b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(
        a.sites_.begin(), a.sites_.end(), b.sites_.begin(), b.sites_.end());
  }
  friend bool operator==(const PlacementSubset&, const PlacementSubset&) = default;

 private:
  std::vector<SiteId> sites_;
};

struct ActivityVector {
  std::string activity_id;
  PlacementSubset subset;
  std::vector<double> values;
};

// Flattens the subset's trajectories site-major (canonical site order), then
// time, then x before y: [s0 f0 x, s0 f0 y, s0 f1 x, ..., s1 f0 x, ...].
inline ActivityVector BuildActivityVector(const SkeletonSeries& series,
                                          const PlacementSubset& subset) {
  ActivityVector out{series.activity_id(), subset, {}};
  out.values.reserve(2 * subset.size() * series.length());
  for (SiteId site : subset.sites()) {
    for (const Point2& p : series.track(site)) {
      out.values.push_back(p.x);
      out.values.push_back(p.y);
    }
  }
  bool nonzero = false;
  for (double v : out.values) {
    if (!std::isfinite(v)) {
      Fail(ErrorCode::kInvalidArgument,
           "non-finite coordinate in activity '" + series.activity_id() + "'");
    }
    nonzero = nonzero || v != 0.0;
  }
  if (!nonzero) {
    Fail(ErrorCode::kZeroVector, "activity '" + series.activity_id() +
                                     "' is the zero vector on " + subset.label());
  }
  return out;
}

namespace internal {

inline double Dot(std::span<const double> u, std::span<const double> v) {
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += u[i] * v[i];
  return sum;
}

// |1 - cos| from a dot product and two squared norms. sqrt(a*a) == a in
// IEEE arithmetic, so identical vectors give exactly zero.
inline double CosineTerm(double dot, double nu2, double nv2) {
  double denom = std::sqrt(nu2 * nv2);
  if (!std::isfinite(denom) || denom == 0.0) {
    denom = std::sqrt(nu2) * std::sqrt(nv2);
  }
  return std::abs(1.0 - dot / denom);
}

}  // namespace internal

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

inline double PairDistance(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    Fail(ErrorCode::kLengthMismatch, "vector lengths " + std::to_string(u.size()) +
                                         " and " + std::to_string(v.size()) +
                                         " differ");
  }
  const double nu2 = internal::Dot(u, u);
  const double nv2 = internal::Dot(v, v);
  if (nu2 == 0.0 || nv2 == 0.0) Fail(ErrorCode::kZeroNorm, "zero-norm vector");
  return internal::CosineTerm(internal::Dot(u, v), nu2, nv2);
}

inline double PairDistance(const ActivityVector& u, const ActivityVector& v) {
  if (u.values.size() != v.values.size()) {
    Fail(ErrorCode::kLengthMismatch,
         "activities '" + u.activity_id + "' and '" + v.activity_id +
             "' have vectors of different length");
  }
  return PairDistance(std::span<const double>(u.values),
                      std::span<const double>(v.values));
}

struct ScoredSubset {
  PlacementSubset subset;
  double score = 0.0;

  friend bool operator==(const ScoredSubset&, const ScoredSubset&) = default;
};

// Sum over activity pairs i < j of |1 - cos(A_i, A_j)|, pairs visited in
// ascending (i, j) order.
inline ScoredSubset ComputeDk(const ActivitySet& set, const PlacementSubset& subset) {
  std::vector<ActivityVector> vectors;
  vectors.reserve(set.size());
  for (const SkeletonSeries& series : set.activities()) {
    try {
      vectors.push_back(BuildActivityVector(series, subset));
    } catch (const Error& e) {
      throw Error(e.code(), "activity '" + series.activity_id() + "': " + e.what());
    }
  }
  std::vector<double> norms2(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    norms2[i] = internal::Dot(vectors[i].values, vectors[i].values);
  }
  CompensatedSum total;
  for (std::size_t i = 0; i + 1 < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      const double dot = internal::Dot(vectors[i].values, vectors[j].values);
      total.add(internal::CosineTerm(dot, norms2[i], norms2[j]));
    }
  }
  return {subset, total.value()};
}

// Mean D_k over aligned windows (one ActivitySet per window).
inline ScoredSubset ComputeMeanDk(std::span<const ActivitySet> windows,
                                  const PlacementSubset& subset) {
  if (windows.empty()) Fail(ErrorCode::kInvalidArgument, "no windows to score");
  CompensatedSum total;
  for (const ActivitySet& window : windows) total.add(ComputeDk(window, subset).score);
  return {subset, total.value() / static_cast<double>(windows.size())};
}

// All combinations of the requested sizes (every size when `sizes` is
// empty), ordered by size and then lexicographically. Requested sizes
// outside [1, |roster|] contribute nothing.
inline std::vector<PlacementSubset> EnumerateSubsets(
    std::span<const SiteId> roster,
    const std::optional<std::set<std::size_t>>& sizes = std::nullopt) {
  ValidateRoster(roster, /*exclude_head=*/false);
  const std::vector<SiteId> sorted = CanonicalOrder(roster);
  const std::size_t n = sorted.size();
  std::vector<PlacementSubset> out;
  for (std::size_t s = 1; s <= n; ++s) {
    if (sizes && !sizes->contains(s)) continue;
    std::vector<std::size_t> idx(s);
    for (std::size_t i = 0; i < s; ++i) idx[i] = i;
    while (true) {
      std::vector<SiteId> sites;
      sites.reserve(s);
      for (std::size_t i : idx) sites.push_back(sorted[i]);
      out.emplace_back(std::move(sites));
      // Advance to the next combination in lexicographic order.
      std::size_t pos = s;
      while (pos > 0 && idx[pos - 1] == n - s + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < s; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  if (out.empty()) {
    Fail(ErrorCode::kEmptyResult, "size filter excludes every subset of " +
                                      JoinSites(sorted));
  }
  return out;
}

inline constexpr const char* kTieBreakRule = "score-desc,size-asc,canonical-lex";

struct Ranking {
  std::vector<ScoredSubset> entries;
  // When set, entries are grouped by subset size and ranked within a group.
  bool per_size = false;
  std::size_t num_activities = 0;
  std::size_t length = 0;
  std::vector<SiteId> roster;
  std::string tie_break = kTieBreakRule;
  std::string fingerprint;

  // 1-based rank of every entry, restarting per size group when per_size.
  std::vector<std::size_t> rank_numbers() const {
    std::vector<std::size_t> ranks(entries.size());
    std::size_t rank = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (per_size && i > 0 && entries[i].subset.size() != entries[i - 1].subset.size()) {
        rank = 0;
      }
      ranks[i] = ++rank;
    }
    return ranks;
  }
};

// Descending score; ties go to the smaller, then lexicographically smaller
// subset.
inline bool RanksBefore(const ScoredSubset& a, const ScoredSubset& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.subset < b.subset;
}

inline void SortEntries(std::vector<ScoredSubset>& entries, bool per_size) {
  std::sort(entries.begin(), entries.end(),
            [per_size](const ScoredSubset& a, const ScoredSubset& b) {
              if (per_size && a.subset.size() != b.subset.size()) {
                return a.subset.size() < b.subset.size();
              }
              return RanksBefore(a, b);
            });
}

struct RankOptions {
  std::size_t threads = 1;
  bool per_size = false;
  // Caller configuration folded into the ranking fingerprint.
  std::string config;
};

namespace internal {

template <typename ScoreFn>
std::vector<ScoredSubset> ScoreAll(std::span<const PlacementSubset> subsets,
                                   std::size_t threads, const ScoreFn& score) {
  std::vector<ScoredSubset> results(subsets.size());
  std::size_t workers = std::max<std::size_t>(1, std::min(threads, subsets.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < subsets.size(); ++i) results[i] = score(subsets[i]);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < subsets.size(); i = next++) {
          try {
            results[i] = score(subsets[i]);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

inline Ranking MakeRanking(std::vector<ScoredSubset> scored, const ActivitySet& set,
                           const RankOptions& options) {
  Ranking ranking;
  ranking.entries = std::move(scored);
  ranking.per_size = options.per_size;
  SortEntries(ranking.entries, ranking.per_size);
  ranking.num_activities = set.size();
  ranking.length = set.length();
  ranking.roster = set.sites();
  ranking.fingerprint = Fingerprint(
      options.config + ";n=" + std::to_string(ranking.num_activities) +
      ";L=" + std::to_string(ranking.length) + ";roster=" + JoinSites(ranking.roster) +
      ";per_size=" + (ranking.per_size ? "1" : "0") + ";tie=" + ranking.tie_break);
  return ranking;
}

}  // namespace internal

// Scores every subset independently (optionally in parallel) and sorts. The
// result does not depend on the thread count.
inline Ranking RankPlacements(const ActivitySet& set,
                              std::span<const PlacementSubset> subsets,
                              const RankOptions& options = {}) {
  if (subsets.empty()) Fail(ErrorCode::kInvalidArgument, "no subsets to rank");
  auto scored = internal::ScoreAll(subsets, options.threads,
                                   [&](const PlacementSubset& s) { return ComputeDk(set, s); });
  return internal::MakeRanking(std::move(scored), set, options);
}

inline Ranking RankPlacements(std::span<const ActivitySet> windows,
                              std::span<const PlacementSubset> subsets,
                              const RankOptions& options = {}) {
  if (subsets.empty()) Fail(ErrorCode::kInvalidArgument, "no subsets to rank");
  if (windows.empty()) Fail(ErrorCode::kInvalidArgument, "no windows to rank");
  auto scored = internal::ScoreAll(subsets, options.threads, [&](const PlacementSubset& s) {
    return ComputeMeanDk(windows, s);
  });
  return internal::MakeRanking(std::move(scored), windows.front(), options);
}

}  // namespace osp

#endif  // OSP_METRIC_HPP_
