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

// Seeded synthetic keypoint activities. Each site moves on a circle around a
// base position plus Gaussian noise:
//
//   p(t) = base + amplitude * (sin(w t + phase), cos(w t + phase)) + noise,
//   w = 2 pi frequency, t = frame / sample_rate.
//
// Noise comes from std::mt19937_64, whose output sequence is fixed by the
// C++ standard, through a local Box-Muller transform, so corpora are
// reproducible across platforms and standard libraries.

#ifndef OSP_SYNTH_HPP_
#define OSP_SYNTH_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "osp/error.hpp"
#include "osp/metric.hpp"
#include "osp/pose_model.hpp"
#include "osp/sites.hpp"

namespace osp {

inline constexpr const char* kNoiseGenerator = "mt19937_64/box-muller";

class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) : engine_(seed) {}

  // Uniform in (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Standing pose in normalized image coordinates (y grows downwards),
// indexed by SiteId.
inline constexpr std::array<Point2, kNumSites> kTemplatePose = {{
    {0.36, 0.55},  // LW
    {0.64, 0.55},  // RW
    {0.50, 0.55},  // PE
    {0.45, 0.90},  // LF
    {0.55, 0.90},  // RF
    {0.50, 0.15},  // HE
    {0.38, 0.42},  // LE
    {0.45, 0.72},  // LK
    {0.42, 0.28},  // LS
    {0.62, 0.42},  // RE
    {0.55, 0.72},  // RK
    {0.58, 0.28},  // RS
}};

struct SiteMotion {
  SiteId site = SiteId::kLeftWrist;
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
  double noise_sigma = 0.0;
  Point2 base;
};

struct MotionSpec {
  std::string activity_id = "activity";
  std::vector<SiteMotion> sites;
  std::size_t length = kDefaultSeriesLength;
  double sample_rate = kDefaultTargetRate;
  std::uint64_t seed = 0;
  // Translate the bases so their centroid sits at (0.5, 0.5).
  bool center_bases = true;
};

inline void ValidateSpec(const MotionSpec& spec) {
  if (spec.sites.empty()) Fail(ErrorCode::kInvalidSpec, "motion spec has no sites");
  if (spec.length < 1) Fail(ErrorCode::kInvalidSpec, "length must be >= 1");
  if (!(spec.sample_rate > 0.0) || !std::isfinite(spec.sample_rate)) {
    Fail(ErrorCode::kInvalidSpec, "sample rate must be positive");
  }
  std::array<bool, kNumSites> seen{};
  for (const SiteMotion& m : spec.sites) {
    const std::string site(SiteCode(m.site));
    if (seen[SiteIndex(m.site)]) Fail(ErrorCode::kInvalidSpec, "site " + site + " listed twice");
    seen[SiteIndex(m.site)] = true;
    if (!(m.amplitude >= 0.0) || !(m.frequency >= 0.0) || !(m.noise_sigma >= 0.0)) {
      Fail(ErrorCode::kInvalidSpec,
           "site " + site + ": amplitude, frequency and noise must be >= 0");
    }
    if (!std::isfinite(m.amplitude) || !std::isfinite(m.frequency) ||
        !std::isfinite(m.noise_sigma) || !std::isfinite(m.phase) ||
        !std::isfinite(m.base.x) || !std::isfinite(m.base.y)) {
      Fail(ErrorCode::kInvalidSpec, "site " + site + ": non-finite parameter");
    }
  }
}

inline SkeletonSeries GenerateActivity(const MotionSpec& spec) {
  ValidateSpec(spec);
  std::vector<SiteMotion> motions = spec.sites;
  std::sort(motions.begin(), motions.end(),
            [](const SiteMotion& a, const SiteMotion& b) { return a.site < b.site; });

  Point2 shift;
  if (spec.center_bases) {
    double sx = 0.0;
    double sy = 0.0;
    for (const SiteMotion& m : motions) {
      sx += m.base.x;
      sy += m.base.y;
    }
    const auto count = static_cast<double>(motions.size());
    shift = {0.5 - sx / count, 0.5 - sy / count};
  }

  NoiseSource noise(spec.seed);
  std::vector<SiteId> sites;
  std::vector<std::vector<Point2>> tracks;
  for (const SiteMotion& m : motions) {
    sites.push_back(m.site);
    const Point2 base{m.base.x + shift.x, m.base.y + shift.y};
    const double omega = 2.0 * std::numbers::pi * m.frequency;
    std::vector<Point2> track(spec.length);
    for (std::size_t i = 0; i < spec.length; ++i) {
      const double t = static_cast<double>(i) / spec.sample_rate;
      const double angle = omega * t + m.phase;
      Point2 p{base.x + m.amplitude * std::sin(angle),
               base.y + m.amplitude * std::cos(angle)};
      if (m.noise_sigma > 0.0) {
        p.x += m.noise_sigma * noise.gaussian();
        p.y += m.noise_sigma * noise.gaussian();
      }
      track[i] = p;
    }
    tracks.push_back(std::move(track));
  }
  return SkeletonSeries(spec.activity_id, std::move(sites), std::move(tracks),
                        spec.sample_rate);
}

struct SeparableOptions {
  std::vector<SiteId> roster{kEvaluationRoster.begin(), kEvaluationRoster.end()};
  std::size_t length = kDefaultSeriesLength;
  double sample_rate = kDefaultTargetRate;
  double amplitude = 0.1;
  double noise_sigma = 0.0;
};

inline std::uint64_t ActivitySeed(std::uint64_t seed, std::size_t activity) {
  // splitmix64 finalizer over (seed, activity).
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (activity + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::string SyntheticActivityId(std::size_t index) {
  std::string id = std::to_string(index + 1);
  if (id.size() < 2) id.insert(0, "0");
  return "act" + id;
}

// Activities that differ only on `discriminative_sites`: each activity moves
// them at its own frequency and phase, every other site is static at the same
// base (plus independent noise when noise_sigma > 0).
inline ActivitySet MakeSeparableSet(std::size_t n_activities,
                                    std::span<const SiteId> discriminative_sites,
                                    std::uint64_t seed,
                                    const SeparableOptions& options = {}) {
  if (n_activities < 2) Fail(ErrorCode::kInvalidSpec, "need at least 2 activities");
  if (discriminative_sites.empty()) {
    Fail(ErrorCode::kInvalidSpec, "no discriminative sites");
  }
  ValidateRoster(options.roster, /*exclude_head=*/false);
  for (SiteId site : discriminative_sites) {
    if (std::find(options.roster.begin(), options.roster.end(), site) ==
        options.roster.end()) {
      Fail(ErrorCode::kInvalidSpec,
           "discriminative site " + std::string(SiteCode(site)) + " not in roster");
    }
  }

  std::vector<SkeletonSeries> activities;
  for (std::size_t a = 0; a < n_activities; ++a) {
    MotionSpec spec;
    spec.activity_id = SyntheticActivityId(a);
    spec.length = options.length;
    spec.sample_rate = options.sample_rate;
    spec.seed = ActivitySeed(seed, a);
    for (SiteId site : CanonicalOrder(options.roster)) {
      SiteMotion m;
      m.site = site;
      m.base = kTemplatePose[SiteIndex(site)];
      m.noise_sigma = options.noise_sigma;
      const auto it = std::find(discriminative_sites.begin(), discriminative_sites.end(), site);
      if (it != discriminative_sites.end()) {
        const auto k = static_cast<double>(it - discriminative_sites.begin());
        const auto ad = static_cast<double>(a);
        m.amplitude = options.amplitude;
        m.frequency = 0.2 + 0.05 * ad + 0.013 * k;
        m.phase = std::fmod(2.0 * std::numbers::pi * (0.37 * ad + 0.21 * k),
                            2.0 * std::numbers::pi);
      }
      spec.sites.push_back(m);
    }
    activities.push_back(GenerateActivity(spec));
  }
  return ActivitySet(std::move(activities));
}

// Renders a series as raw 17-keypoint frames: sites missing from the series
// take the template pose, every point is shifted by `offset`, and all
// confidences are 1. Facial keypoints copy the head and both hips copy the
// pelvis, so merging recovers the site positions.
inline std::vector<RawPoseFrame> ToRawFrames(const SkeletonSeries& series,
                                             Point2 offset = {0.1, 0.05}) {
  std::vector<RawPoseFrame> frames(series.length());
  for (std::size_t i = 0; i < series.length(); ++i) {
    std::array<Point2, kNumSites> pose = kTemplatePose;
    for (std::size_t s = 0; s < series.sites().size(); ++s) {
      pose[SiteIndex(series.sites()[s])] = series.tracks()[s][i];
    }
    for (Point2& p : pose) {
      p.x += offset.x;
      p.y += offset.y;
    }
    RawPoseFrame& frame = frames[i];
    frame.t = static_cast<double>(i) / series.sample_rate();
    auto put = [&](Keypoint17 k, SiteId site) {
      const Point2& p = pose[SiteIndex(site)];
      frame.at(k) = {p.x, p.y, 1.0};
    };
    for (Keypoint17 k : {Keypoint17::kNose, Keypoint17::kLeftEye, Keypoint17::kRightEye,
                         Keypoint17::kLeftEar, Keypoint17::kRightEar}) {
      put(k, SiteId::kHead);
    }
    put(Keypoint17::kLeftShoulder, SiteId::kLeftShoulder);
    put(Keypoint17::kRightShoulder, SiteId::kRightShoulder);
    put(Keypoint17::kLeftElbow, SiteId::kLeftElbow);
    put(Keypoint17::kRightElbow, SiteId::kRightElbow);
    put(Keypoint17::kLeftWrist, SiteId::kLeftWrist);
    put(Keypoint17::kRightWrist, SiteId::kRightWrist);
    put(Keypoint17::kLeftHip, SiteId::kPelvis);
    put(Keypoint17::kRightHip, SiteId::kPelvis);
    put(Keypoint17::kLeftKnee, SiteId::kLeftKnee);
    put(Keypoint17::kRightKnee, SiteId::kRightKnee);
    put(Keypoint17::kLeftAnkle, SiteId::kLeftAnkle);
    put(Keypoint17::kRightAnkle, SiteId::kRightAnkle);
  }
  return frames;
}

}  // namespace osp

#endif  // OSP_SYNTH_HPP_
