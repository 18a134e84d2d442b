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

#ifndef OSP_RANK_EVAL_HPP_
#define OSP_RANK_EVAL_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "osp/error.hpp"
#include "osp/metric.hpp"

namespace osp {

// Paired 1-based ranks of the same items under two rankings.
struct RankAssignment {
  std::vector<std::string> items;
  std::vector<std::size_t> x;
  std::vector<std::size_t> y;
};

struct TauReport {
  std::string scope;
  std::size_t n = 0;
  std::int64_t concordant = 0;
  std::int64_t discordant = 0;
  // tau == numerator / denominator, reduced.
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;
  double tau = 0.0;
};

namespace internal {

inline void CheckPermutation(const std::vector<std::size_t>& ranks, const char* name) {
  const std::size_t n = ranks.size();
  std::vector<bool> seen(n + 1, false);
  for (std::size_t r : ranks) {
    if (r >= 1 && r <= n && seen[r]) {
      Fail(ErrorCode::kTieDetected,
           std::string("rank ") + std::to_string(r) + " repeats in " + name);
    }
    if (r < 1 || r > n) {
      Fail(ErrorCode::kInvalidArgument, std::string(name) + " rank " + std::to_string(r) +
                                            " outside 1.." + std::to_string(n));
    }
    seen[r] = true;
  }
}

inline int Sign(std::size_t a, std::size_t b) { return a < b ? -1 : (a > b ? 1 : 0); }

}  // namespace internal

// Tie-free Kendall tau from exact integer pair counts.
inline TauReport KendallTau(const RankAssignment& assignment) {
  const std::size_t n = assignment.items.size();
  if (assignment.x.size() != n || assignment.y.size() != n) {
    Fail(ErrorCode::kMismatchedItems, "rank vectors do not match the item list");
  }
  if (std::set<std::string>(assignment.items.begin(), assignment.items.end()).size() != n) {
    Fail(ErrorCode::kMismatchedItems, "item list contains duplicates");
  }
  if (n < 2) Fail(ErrorCode::kPrecondition, "tau needs at least 2 paired items");
  internal::CheckPermutation(assignment.x, "x");
  internal::CheckPermutation(assignment.y, "y");

  TauReport report;
  report.n = n;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int s = internal::Sign(assignment.x[i], assignment.x[j]) *
                    internal::Sign(assignment.y[i], assignment.y[j]);
      if (s > 0) ++report.concordant;
      if (s < 0) ++report.discordant;
    }
  }
  const auto pairs = static_cast<std::int64_t>(n * (n - 1) / 2);
  const std::int64_t diff = report.concordant - report.discordant;
  const std::int64_t g = std::gcd(diff < 0 ? -diff : diff, pairs);
  report.numerator = diff / (g == 0 ? 1 : g);
  report.denominator = pairs / (g == 0 ? 1 : g);
  report.tau = static_cast<double>(diff) / static_cast<double>(pairs);
  return report;
}

// Which part of two rankings to compare: every subset, or only one size,
// optionally restricted to the first k items of the first ranking.
struct Scope {
  std::optional<std::size_t> size;
  std::optional<std::size_t> top_k;

  static Scope All() { return {}; }
  static Scope Size(std::size_t s) { return {s, std::nullopt}; }
  static Scope TopK(std::size_t k) { return {std::nullopt, k}; }

  std::string label() const {
    std::string out = size ? "size=" + std::to_string(*size) : "all";
    if (top_k) out += ";top=" + std::to_string(*top_k);
    return out;
  }
};

namespace internal {

inline std::vector<std::string> ScopedLabels(const Ranking& ranking,
                                             std::optional<std::size_t> size) {
  std::vector<std::string> labels;
  for (const ScoredSubset& entry : ranking.entries) {
    if (size && entry.subset.size() != *size) continue;
    labels.push_back(entry.subset.label());
  }
  return labels;
}

inline std::string JoinLabels(const std::vector<std::string>& labels) {
  std::string out;
  for (const auto& label : labels) {
    if (!out.empty()) out += ", ";
    out += label;
  }
  return out;
}

}  // namespace internal

// Matches items by subset identity. Ranks come from each ranking's row order
// within the scope.
inline RankAssignment AlignRankings(const Ranking& first, const Ranking& second,
                                    const Scope& scope = Scope::All()) {
  std::vector<std::string> a = internal::ScopedLabels(first, scope.size);
  std::vector<std::string> b = internal::ScopedLabels(second, scope.size);
  for (const auto* labels : {&a, &b}) {
    if (std::set<std::string>(labels->begin(), labels->end()).size() != labels->size()) {
      Fail(ErrorCode::kMismatchedItems, "ranking lists a subset twice");
    }
  }
  if (scope.top_k) {
    if (*scope.top_k == 0) Fail(ErrorCode::kInvalidArgument, "top-k must be positive");
    if (a.size() > *scope.top_k) a.resize(*scope.top_k);
    const std::set<std::string> keep(a.begin(), a.end());
    std::vector<std::string> missing;
    std::set<std::string> in_b(b.begin(), b.end());
    for (const auto& label : a) {
      if (!in_b.contains(label)) missing.push_back(label);
    }
    if (!missing.empty()) {
      Fail(ErrorCode::kUniverseMismatch, "scope " + scope.label() +
                                             ": second ranking lacks " +
                                             internal::JoinLabels(missing));
    }
    std::erase_if(b, [&](const std::string& label) { return !keep.contains(label); });
  } else {
    std::vector<std::string> only_a;
    std::vector<std::string> only_b;
    const std::set<std::string> set_a(a.begin(), a.end());
    const std::set<std::string> set_b(b.begin(), b.end());
    std::set_difference(set_a.begin(), set_a.end(), set_b.begin(), set_b.end(),
                        std::back_inserter(only_a));
    std::set_difference(set_b.begin(), set_b.end(), set_a.begin(), set_a.end(),
                        std::back_inserter(only_b));
    if (!only_a.empty() || !only_b.empty()) {
      Fail(ErrorCode::kUniverseMismatch,
           "scope " + scope.label() + ": only in first [" + internal::JoinLabels(only_a) +
               "], only in second [" + internal::JoinLabels(only_b) + "]");
    }
  }

  std::map<std::string, std::size_t> rank_in_b;
  for (std::size_t i = 0; i < b.size(); ++i) rank_in_b[b[i]] = i + 1;
  RankAssignment out;
  out.items = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.x.push_back(i + 1);
    out.y.push_back(rank_in_b.at(a[i]));
  }
  return out;
}

enum class ScopeMode { kAll, kPerSize, kSize };

// Sizes present in either ranking, ascending.
inline std::vector<std::size_t> SizesOf(const Ranking& a, const Ranking& b) {
  std::set<std::size_t> sizes;
  for (const auto* r : {&a, &b}) {
    for (const auto& e : r->entries) sizes.insert(e.subset.size());
  }
  return {sizes.begin(), sizes.end()};
}

// Tau per requested scope. In per-size mode, size groups with fewer than two
// items are skipped since tau is undefined there.
inline std::vector<TauReport> CompareRankings(const Ranking& a, const Ranking& b,
                                              ScopeMode mode,
                                              std::optional<std::size_t> size = std::nullopt,
                                              std::optional<std::size_t> top_k = std::nullopt) {
  std::vector<TauReport> reports;
  auto run = [&](Scope scope) {
    TauReport report = KendallTau(AlignRankings(a, b, scope));
    report.scope = scope.label();
    reports.push_back(std::move(report));
  };
  switch (mode) {
    case ScopeMode::kAll:
      run(Scope{std::nullopt, top_k});
      break;
    case ScopeMode::kSize:
      if (!size) Fail(ErrorCode::kInvalidArgument, "size scope needs a size");
      run(Scope{size, top_k});
      break;
    case ScopeMode::kPerSize:
      for (std::size_t s : SizesOf(a, b)) {
        std::size_t items = internal::ScopedLabels(a, s).size();
        if (top_k) items = std::min(items, *top_k);
        if (items < 2 && internal::ScopedLabels(b, s).size() < 2) continue;
        run(Scope{s, top_k});
      }
      if (reports.empty()) {
        Fail(ErrorCode::kEmptyResult, "no size group has two or more items");
      }
      break;
  }
  return reports;
}

}  // namespace osp

#endif  // OSP_RANK_EVAL_HPP_
