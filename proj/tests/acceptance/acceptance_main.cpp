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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "osp/osp.hpp"

namespace osp {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void Check(bool condition, const std::string& what) {
    if (!condition && pass) {
      pass = false;
      detail = what;
    }
  }
};

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("osp_acceptance_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ignored;
    std::filesystem::remove_all(path_, ignored);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

const std::vector<SiteId>& Roster() {
  static const std::vector<SiteId> roster(kEvaluationRoster.begin(), kEvaluationRoster.end());
  return roster;
}

std::vector<std::string> Labels(const Ranking& ranking) {
  std::vector<std::string> labels;
  for (const auto& e : ranking.entries) labels.push_back(e.subset.label());
  return labels;
}

Outcome OracleEquivalence() {
  Outcome o;
  std::mt19937_64 rng(20261014);
  const auto start = Clock::now();
  const auto subsets = EnumerateSubsets(Roster(), std::set<std::size_t>{1, 2, 3});
  double worst = 0.0;
  const int instances = 400;
  for (int i = 0; i < instances; ++i) {
    const std::size_t n = 2 + rng() % 5;
    const std::size_t length = 1 + rng() % 20;
    const ActivitySet set = oracle::RandomActivitySet(rng, n, Roster(), length);
    const PlacementSubset& subset = subsets[rng() % subsets.size()];
    const double got = ComputeDk(set, subset).score;
    const double want = oracle::BruteForceDk(set, subset.sites());
    const double rel = std::abs(got - want) / std::max(std::abs(want), 1e-300);
    worst = std::max(worst, rel);
  }
  const double seconds = SecondsSince(start);
  o.Check(worst <= 1e-9, "relative error " + std::to_string(worst));
  o.Check(seconds < 5.0, "took " + std::to_string(seconds) + " s");
  std::ostringstream d;
  d << instances << " instances, max relative error " << worst << ", " << seconds << " s";
  if (o.pass) o.detail = d.str();
  return o;
}

Outcome CosineGeometry() {
  Outcome o;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t half = 1 + rng() % 500;
    std::vector<double> u(2 * half), orth(2 * half), anti(2 * half), gram(2 * half);
    for (double& x : u) x = normal(rng);
    for (std::size_t i = 0; i < half; ++i) {
      orth[2 * i] = -u[2 * i + 1];
      orth[2 * i + 1] = u[2 * i];
    }
    for (std::size_t i = 0; i < u.size(); ++i) anti[i] = -3.5 * u[i];
    // Gram-Schmidt against u from a random start.
    for (double& x : gram) x = normal(rng);
    const double proj = internal::Dot(gram, u) / internal::Dot(u, u);
    for (std::size_t i = 0; i < u.size(); ++i) gram[i] -= proj * u[i];

    worst = std::max(worst, std::abs(PairDistance(u, u) - 0.0));
    worst = std::max(worst, std::abs(PairDistance(u, orth) - 1.0));
    worst = std::max(worst, std::abs(PairDistance(u, gram) - 1.0));
    worst = std::max(worst, std::abs(PairDistance(u, anti) - 2.0));
  }
  o.Check(worst <= 1e-12, "deviation " + std::to_string(worst));
  std::ostringstream d;
  d << "500 random dimensions, max deviation " << worst;
  if (o.pass) o.detail = d.str();
  return o;
}

ActivitySet ScaleActivity(const ActivitySet& set, std::size_t index, double c) {
  std::vector<SkeletonSeries> members = set.activities();
  std::vector<std::vector<Point2>> tracks = members[index].tracks();
  for (auto& track : tracks) {
    for (auto& p : track) p = {p.x * c, p.y * c};
  }
  members[index] = SkeletonSeries(members[index].activity_id(), members[index].sites(),
                                  std::move(tracks), members[index].sample_rate());
  return ActivitySet(std::move(members));
}

Outcome ScaleInvariance() {
  Outcome o;
  std::mt19937_64 rng(3);
  const auto subsets = EnumerateSubsets(Roster());
  double worst = 0.0;
  int rankings = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 12;
    const ActivitySet set = oracle::RandomActivitySet(rng, n, Roster(), 5 + trial * 3);
    for (bool per_size : {true, false}) {
      RankOptions options;
      options.per_size = per_size;
      const Ranking base = RankPlacements(set, subsets, options);
      for (std::size_t a = 0; a < n; ++a) {
        for (double c : {1e-3, 1.0, 1e3}) {
          const Ranking scaled = RankPlacements(ScaleActivity(set, a, c), subsets, options);
          ++rankings;
          o.Check(Labels(scaled) == Labels(base), "order changed for c=" + std::to_string(c));
          for (const auto& e : base.entries) {
            const auto it = std::find_if(scaled.entries.begin(), scaled.entries.end(),
                                         [&](const auto& s) { return s.subset == e.subset; });
            worst = std::max(worst, std::abs(it->score - e.score) / e.score);
          }
        }
      }
    }
  }
  o.Check(worst <= 1e-9, "relative change " + std::to_string(worst));
  std::ostringstream d;
  d << rankings << " rescaled rankings, order unchanged, max relative change " << worst;
  if (o.pass) o.detail = d.str();
  return o;
}

Outcome SubsetEnumeration() {
  Outcome o;
  const auto all = EnumerateSubsets(Roster());
  const auto pairs = EnumerateSubsets(Roster(), std::set<std::size_t>{2});
  o.Check(all.size() == 31, std::to_string(all.size()) + " subsets");
  o.Check(pairs.size() == 10, std::to_string(pairs.size()) + " pairs");
  std::set<std::string> unique;
  for (const auto& s : all) unique.insert(s.label());
  o.Check(unique.size() == 31, "duplicate subsets");
  if (o.pass) o.detail = "31 subsets, 10 of size 2";
  return o;
}

Outcome KendallTauAgreement() {
  Outcome o;
  std::size_t checked = 0;
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<std::size_t> x(n);
    std::iota(x.begin(), x.end(), 1);
    std::vector<std::vector<std::size_t>> perms;
    do perms.push_back(x);
    while (std::next_permutation(x.begin(), x.end()));
    for (const auto& a : perms) {
      for (const auto& b : perms) {
        RankAssignment assignment;
        for (std::size_t i = 0; i < n; ++i) assignment.items.push_back("i" + std::to_string(i));
        assignment.x = a;
        assignment.y = b;
        const TauReport r = KendallTau(assignment);
        o.Check(r.tau == oracle::BruteForceTau(a, b), "mismatch at n=" + std::to_string(n));
        ++checked;
      }
      RankAssignment self{{}, a, a};
      for (std::size_t i = 0; i < n; ++i) self.items.push_back("i" + std::to_string(i));
      o.Check(KendallTau(self).tau == 1.0, "identity is not 1");
      RankAssignment reversed = self;
      for (auto& r : reversed.y) r = n + 1 - r;
      o.Check(KendallTau(reversed).tau == -1.0, "reversal is not -1");
    }
  }

  TempDir dir("tau");
  const std::string rows[] = {"rank,sites\n1,LW\n2,RW\n3,LF\n",
                              "rank,sites\n1,LW+RW+PE+RF\n2,LW+RW+PE+LF\n3,LW+PE+LF+RF\n"};
  for (int k = 0; k < 2; ++k) {
    const auto truth = dir.path() / ("truth" + std::to_string(k) + ".csv");
    const auto dk = dir.path() / ("dk" + std::to_string(k) + ".csv");
    std::ofstream(truth) << rows[k];
    std::ofstream(dk) << rows[k];
    const CompareRun run = RunCompare(truth, dk, CompareOptions{});
    o.Check(run.reports.size() == 1 && run.reports[0].tau == 1.0 &&
                run.reports[0].numerator == 1 && run.reports[0].denominator == 1,
            "comparison table identity row is not 1");
  }
  std::ostringstream d;
  d << checked << " permutation pairs match pair counting; identity 1, reversal -1; "
    << "single and four-sensor table rows give tau = 1";
  if (o.pass) o.detail = d.str();
  return o;
}

Outcome SeparabilityRecovery() {
  Outcome o;
  const std::vector<SiteId> lw{SiteId::kLeftWrist};
  const auto singles = EnumerateSubsets(Roster(), std::set<std::size_t>{1});
  int clean = 0, noisy = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    for (double sigma : {0.0, 0.01}) {
      SeparableOptions options;
      options.length = 500;
      options.sample_rate = 10.0;
      options.noise_sigma = sigma;
      const ActivitySet set = MakeSeparableSet(13, lw, seed, options);
      const Ranking ranking = RankPlacements(set, singles);
      if (ranking.entries.front().subset.label() == "LW") ++(sigma == 0.0 ? clean : noisy);
    }
  }
  o.Check(clean == 100, "zero noise: LW first in " + std::to_string(clean) + "/100");
  o.Check(noisy >= 95, "noise 0.01: LW first in " + std::to_string(noisy) + "/100");
  if (o.pass) {
    o.detail = "LW first in " + std::to_string(clean) + "/100 noiseless and " +
               std::to_string(noisy) + "/100 noisy runs (n = 13, L = 500, 10 Hz)";
  }
  return o;
}

RawPoseFrame RandomRawFrame(std::mt19937_64& rng, double t) {
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  std::uniform_real_distribution<double> conf(0.0, 1.0);
  RawPoseFrame frame;
  frame.t = t;
  for (auto& kp : frame.keypoints) kp = {unit(rng), unit(rng), conf(rng)};
  return frame;
}

Outcome PreprocessingInvariants() {
  Outcome o;
  std::mt19937_64 rng(7);
  double centroid_error = 0.0, translation_error = 0.0;
  for (int trial = 0; trial < 2000; ++trial) {
    const RawPoseFrame raw = RandomRawFrame(rng, 0.0);
    const Skeleton12Frame merged = MergeKeypoints(raw);
    if (merged.valid_count() == 0) continue;
    const Point2 c = ValidCentroid(Centralize(merged));
    centroid_error = std::max({centroid_error, std::abs(c.x - 0.5), std::abs(c.y - 0.5)});

    RawPoseFrame shifted = raw;
    const double dx = 0.3 * (static_cast<double>(rng() % 1000) / 1000.0 - 0.5);
    const double dy = 0.3 * (static_cast<double>(rng() % 1000) / 1000.0 - 0.5);
    for (auto& kp : shifted.keypoints) kp = {kp.x + dx, kp.y + dy, kp.confidence};
    const Skeleton12Frame a = Centralize(merged);
    const Skeleton12Frame b = Centralize(MergeKeypoints(shifted));
    for (SiteId site : kAllSites) {
      if (!a.is_valid(site)) continue;
      translation_error = std::max({translation_error,
                                    std::abs(a.point(site).x - b.point(site).x),
                                    std::abs(a.point(site).y - b.point(site).y)});
    }
  }
  o.Check(centroid_error <= 1e-9, "centroid error " + std::to_string(centroid_error));
  o.Check(translation_error <= 1e-9, "translation error " + std::to_string(translation_error));

  // Length boundary through preprocessing and truncation.
  auto series_of = [&](std::size_t frames) {
    std::vector<RawPoseFrame> raw;
    for (std::size_t i = 0; i < frames; ++i) {
      RawPoseFrame f = RandomRawFrame(rng, 0.1 * static_cast<double>(i));
      for (auto& kp : f.keypoints) kp.confidence = 0.9;
      raw.push_back(f);
    }
    return PreprocessFrames(raw, PreprocessOptions{}, "boundary");
  };
  const SkeletonSeries exact = series_of(500);
  o.Check(exact.length() == 500, "500 raw frames gave " + std::to_string(exact.length()));
  o.Check(TruncateSeries(exact).length() == 500, "500 frames not accepted");
  o.Check(TruncateSeries(series_of(501)).length() == 500, "501 frames not cut to 500");
  bool too_short = false;
  try {
    TruncateSeries(series_of(499));
  } catch (const Error& e) {
    too_short = e.code() == ErrorCode::kTooShort;
  }
  o.Check(too_short, "499 frames not rejected as too short");

  std::ostringstream d;
  d << "centroid error " << centroid_error << ", translation error " << translation_error
    << "; 500 accepted, 501 cut to 500, 499 rejected";
  if (o.pass) o.detail = d.str();
  return o;
}

Outcome Performance() {
  Outcome o;
  SeparableOptions motion;
  motion.noise_sigma = 0.01;
  const ActivitySet set = MakeSeparableSet(13, std::vector<SiteId>{SiteId::kLeftWrist}, 1, motion);
  const auto subsets = EnumerateSubsets(Roster());
  auto start = Clock::now();
  const Ranking ranking = RankPlacements(set, subsets);
  const double rank_seconds = SecondsSince(start);
  o.Check(ranking.entries.size() == 31, "wrong ranking size");
  o.Check(rank_seconds < 1.0, "ranking took " + std::to_string(rank_seconds) + " s");

  TempDir dir("perf");
  SynthOptions synth;
  synth.motion = motion;
  const SynthRun corpus = BuildSynthCorpus(synth, dir.path());
  WriteFilesAtomically(corpus.files);
  RunConfig config;
  config.sizes = std::nullopt;
  start = Clock::now();
  const RankRun run = RunRank(config, corpus.manifest);
  const double pipeline_seconds = SecondsSince(start);
  o.Check(run.ranking.entries.size() == 31, "pipeline ranking size");
  o.Check(pipeline_seconds < 5.0, "pipeline took " + std::to_string(pipeline_seconds) + " s");

  std::ostringstream d;
  d << "31 subsets x 13 activities x 5 sites x 500 frames ranked in " << rank_seconds
    << " s single-threaded; parse and rank pipeline " << pipeline_seconds << " s";
  if (o.pass) o.detail = d.str();
  return o;
}

int RunBinary(const std::string& args) {
  const int status = std::system((std::string(OSP_CLI_PATH) + " " + args).c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome Determinism() {
  Outcome o;
  TempDir dir("det");
  const std::string out = dir.path().string();
  o.Check(RunBinary("synth --out-dir " + out + " --activities 13 --noise 0.01 --seed 9 >/dev/null") ==
              0,
          "synth failed");
  std::string reference;
  int runs = 0;
  for (const std::string threads : {"1", "1", "2", "4", "8"}) {
    const std::string table = out + "/rank_" + std::to_string(runs) + ".csv";
    o.Check(RunBinary("rank -m " + out + "/manifest.txt --sizes all --threads " + threads +
                      " -o " + table + " >/dev/null") == 0,
            "rank failed");
    const std::string bytes = ReadFile(table);
    if (runs == 0) reference = bytes;
    o.Check(!bytes.empty() && bytes == reference, "table differs at threads=" + threads);
    ++runs;
  }
  if (o.pass) {
    o.detail = std::to_string(runs) + " rank runs (threads 1, 1, 2, 4, 8) byte-identical";
  }
  return o;
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace osp

int main() {
  using osp::Criterion;
  const Criterion criteria[] = {
      {"metric matches brute-force oracle", osp::OracleEquivalence},
      {"cosine geometry 0/1/2", osp::CosineGeometry},
      {"scale invariance of scores and order", osp::ScaleInvariance},
      {"subset enumeration counts", osp::SubsetEnumeration},
      {"Kendall tau exhaustive and table rows", osp::KendallTauAgreement},
      {"separability recovery", osp::SeparabilityRecovery},
      {"preprocessing invariants", osp::PreprocessingInvariants},
      {"performance", osp::Performance},
      {"determinism", osp::Determinism},
  };
  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    osp::Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::printf("%s [%d] %s: %s\n", outcome.pass ? "PASS" : "FAIL", index, c.name,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
