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

#ifndef OSP_SITES_HPP_
#define OSP_SITES_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "osp/error.hpp"

namespace osp {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

// The twelve skeleton locations left after keypoint merging. Enumerator
// order is the canonical site order: the five evaluation sites first, then
// the rest sorted by short id.
enum class SiteId : int {
  kLeftWrist = 0,   // LW
  kRightWrist,      // RW
  kPelvis,          // PE
  kLeftAnkle,       // LF
  kRightAnkle,      // RF
  kHead,            // HE
  kLeftElbow,       // LE
  kLeftKnee,        // LK
  kLeftShoulder,    // LS
  kRightElbow,      // RE
  kRightKnee,       // RK
  kRightShoulder,   // RS
};

inline constexpr std::size_t kNumSites = 12;

inline constexpr std::array<SiteId, kNumSites> kAllSites = {
    SiteId::kLeftWrist,    SiteId::kRightWrist, SiteId::kPelvis,
    SiteId::kLeftAnkle,    SiteId::kRightAnkle, SiteId::kHead,
    SiteId::kLeftElbow,    SiteId::kLeftKnee,   SiteId::kLeftShoulder,
    SiteId::kRightElbow,   SiteId::kRightKnee,  SiteId::kRightShoulder,
};

// Wrists, ankles and pelvis.
inline constexpr std::array<SiteId, 5> kEvaluationRoster = {
    SiteId::kLeftWrist, SiteId::kRightWrist, SiteId::kPelvis,
    SiteId::kLeftAnkle, SiteId::kRightAnkle,
};

inline constexpr std::size_t SiteIndex(SiteId site) {
  return static_cast<std::size_t>(site);
}

inline constexpr std::array<std::string_view, kNumSites> kSiteCodes = {
    "LW", "RW", "PE", "LF", "RF", "HE", "LE", "LK", "LS", "RE", "RK", "RS"};

inline std::string_view SiteCode(SiteId site) {
  return kSiteCodes[SiteIndex(site)];
}

inline SiteId ParseSite(std::string_view code) {
  for (std::size_t i = 0; i < kNumSites; ++i) {
    if (kSiteCodes[i] == code) return kAllSites[i];
  }
  Fail(ErrorCode::kUnknownSite, "unknown site id '" + std::string(code) + "'");
}

// Parses "LW+RW" or "LW,RW" style lists; order is preserved.
inline std::vector<SiteId> ParseSiteList(std::string_view text,
                                         char separator = '+') {
  std::vector<SiteId> sites;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(separator, start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view token = text.substr(start, end - start);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (token.empty()) {
      Fail(ErrorCode::kUnknownSite,
           "empty site id in list '" + std::string(text) + "'");
    }
    sites.push_back(ParseSite(token));
    start = end + 1;
  }
  return sites;
}

inline std::string JoinSites(std::span<const SiteId> sites,
                             char separator = '+') {
  std::string out;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (i > 0) out.push_back(separator);
    out.append(SiteCode(sites[i]));
  }
  return out;
}

}  // namespace osp

#endif  // OSP_SITES_HPP_
