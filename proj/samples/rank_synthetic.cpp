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

// Ranks placements on a synthetic activity set where only the left wrist
// moves differently between activities.

#include <cstdio>
#include <vector>

#include "osp/osp.hpp"

int main() {
  const std::vector<osp::SiteId> moving = {osp::SiteId::kLeftWrist};
  osp::SeparableOptions options;
  options.noise_sigma = 0.01;
  const osp::ActivitySet set = osp::MakeSeparableSet(13, moving, /*seed=*/7, options);

  const auto subsets = osp::EnumerateSubsets(osp::kEvaluationRoster);
  osp::RankOptions rank_options;
  rank_options.per_size = true;
  const osp::Ranking ranking = osp::RankPlacements(set, subsets, rank_options);

  std::fputs(osp::FormatRankingTable(ranking).c_str(), stdout);
  return 0;
}
