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

// Pose data model and the keypoint preprocessing chain:
//
//   RawPoseFrame (17 COCO keypoints)
//     -> MergeKeypoints   (facial points -> head, hips -> pelvis)
//     -> Centralize       (per frame, valid-point centroid at (0.5, 0.5))
//     -> SelectSites      (placement roster, canonical order)
//     -> RepairGaps       (short interior gaps, linear interpolation)
//     -> TruncateSeries   (uniform length, 500 frames by default)

#ifndef OSP_POSE_MODEL_HPP_
#define OSP_POSE_MODEL_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "osp/error.hpp"
#include "osp/sites.hpp"

namespace osp {

inline constexpr std::size_t kNumKeypoints = 17;
inline constexpr double kDefaultConfidenceThreshold = 0.3;
inline constexpr std::size_t kDefaultMaxGap = 10;
inline constexpr std::size_t kDefaultSeriesLength = 500;
inline constexpr double kDefaultTargetRate = 10.0;

// COCO-17 keypoint order.
enum class Keypoint17 : int {
  kNose = 0,
  kLeftEye,
  kRightEye,
  kLeftEar,
  kRightEar,
  kLeftShoulder,
  kRightShoulder,
  kLeftElbow,
  kRightElbow,
  kLeftWrist,
  kRightWrist,
  kLeftHip,
  kRightHip,
  kLeftKnee,
  kRightKnee,
  kLeftAnkle,
  kRightAnkle,
};

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double confidence = 0.0;

  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

struct RawPoseFrame {
  double t = 0.0;
  std::array<Keypoint, kNumKeypoints> keypoints{};

  const Keypoint& at(Keypoint17 k) const {
    return keypoints[static_cast<std::size_t>(k)];
  }
  Keypoint& at(Keypoint17 k) { return keypoints[static_cast<std::size_t>(k)]; }
};

struct Skeleton12Frame {
  std::array<Point2, kNumSites> points{};
  std::array<bool, kNumSites> valid{};

  const Point2& point(SiteId site) const { return points[SiteIndex(site)]; }
  bool is_valid(SiteId site) const { return valid[SiteIndex(site)]; }

  void set(SiteId site, Point2 p) {
    points[SiteIndex(site)] = p;
    valid[SiteIndex(site)] = true;
  }

  std::size_t valid_count() const {
    return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), true));
  }

  friend bool operator==(const Skeleton12Frame&,
                         const Skeleton12Frame&) = default;
};

struct SitePoint {
  Point2 point;
  bool valid = false;

  friend bool operator==(const SitePoint&, const SitePoint&) = default;
};

// A per-site trajectory that may still contain missing samples.
struct MaskedTrack {
  SiteId site = SiteId::kLeftWrist;
  std::vector<Point2> points;
  std::vector<std::uint8_t> valid;
};

// Throws on an empty roster, duplicates, or a head entry when the head is
// excluded from placement.
inline void ValidateRoster(std::span<const SiteId> roster,
                           bool exclude_head = true) {
  if (roster.empty()) Fail(ErrorCode::kInvalidArgument, "roster is empty");
  std::array<bool, kNumSites> seen{};
  for (SiteId site : roster) {
    const auto index = static_cast<std::size_t>(site);
    if (index >= kNumSites) {
      Fail(ErrorCode::kUnknownSite,
           "site index " + std::to_string(index) + " out of range");
    }
    if (exclude_head && site == SiteId::kHead) {
      Fail(ErrorCode::kExcludedSite, "head is excluded from sensor placement");
    }
    if (seen[index]) {
      Fail(ErrorCode::kDuplicateSite,
           "site " + std::string(SiteCode(site)) + " listed twice");
    }
    seen[index] = true;
  }
}

inline std::vector<SiteId> CanonicalOrder(std::span<const SiteId> sites) {
  std::vector<SiteId> sorted(sites.begin(), sites.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

// SkeletonSeries is a gap-free set of per-site trajectories of one length.
class SkeletonSeries {
 public:
  SkeletonSeries() = default;

  SkeletonSeries(std::string activity_id, std::vector<SiteId> sites,
                 std::vector<std::vector<Point2>> tracks, double sample_rate)
      : activity_id_(std::move(activity_id)),
        sites_(std::move(sites)),
        tracks_(std::move(tracks)),
        sample_rate_(sample_rate) {
    ValidateRoster(sites_, /*exclude_head=*/false);
    if (tracks_.size() != sites_.size()) {
      Fail(ErrorCode::kInvalidArgument,
           "series has " + std::to_string(sites_.size()) + " sites but " +
               std::to_string(tracks_.size()) + " tracks");
    }
    for (std::size_t i = 1; i < tracks_.size(); ++i) {
      if (tracks_[i].size() != tracks_[0].size()) {
        Fail(ErrorCode::kInvalidArgument,
             "track lengths differ: site " + std::string(SiteCode(sites_[i])) +
                 " has " + std::to_string(tracks_[i].size()) +
                 " frames, expected " + std::to_string(tracks_[0].size()));
      }
    }
    if (!(sample_rate_ > 0.0)) {
      Fail(ErrorCode::kInvalidArgument, "sample rate must be positive");
    }
  }

  const std::string& activity_id() const { return activity_id_; }
  void set_activity_id(std::string id) { activity_id_ = std::move(id); }
  const std::vector<SiteId>& sites() const { return sites_; }
  const std::vector<std::vector<Point2>>& tracks() const { return tracks_; }
  double sample_rate() const { return sample_rate_; }
  std::size_t length() const { return tracks_.empty() ? 0 : tracks_[0].size(); }

  bool has_site(SiteId site) const {
    return std::find(sites_.begin(), sites_.end(), site) != sites_.end();
  }

  const std::vector<Point2>& track(SiteId site) const {
    auto it = std::find(sites_.begin(), sites_.end(), site);
    if (it == sites_.end()) {
      Fail(ErrorCode::kSiteNotPresent,
           "site " + std::string(SiteCode(site)) + " not in series '" +
               activity_id_ + "'");
    }
    return tracks_[static_cast<std::size_t>(it - sites_.begin())];
  }

  // Frames [begin, begin + count).
  SkeletonSeries slice(std::size_t begin, std::size_t count) const {
    if (begin + count > length()) {
      Fail(ErrorCode::kInvalidArgument, "slice past end of series");
    }
    std::vector<std::vector<Point2>> out;
    out.reserve(tracks_.size());
    for (const auto& track : tracks_) {
      out.emplace_back(track.begin() + static_cast<std::ptrdiff_t>(begin),
                       track.begin() + static_cast<std::ptrdiff_t>(begin + count));
    }
    return SkeletonSeries(activity_id_, sites_, std::move(out), sample_rate_);
  }

  friend bool operator==(const SkeletonSeries&, const SkeletonSeries&) = default;

 private:
  std::string activity_id_;
  std::vector<SiteId> sites_;
  std::vector<std::vector<Point2>> tracks_;
  double sample_rate_ = kDefaultTargetRate;
};

// ActivitySet holds n >= 2 series with distinct ids that share sites, site
// order and length.
class ActivitySet {
 public:
  explicit ActivitySet(std::vector<SkeletonSeries> activities)
      : activities_(std::move(activities)) {
    if (activities_.size() < 2) {
      Fail(ErrorCode::kPrecondition,
           "an activity set needs at least 2 activities, got " +
               std::to_string(activities_.size()));
    }
    std::set<std::string> ids;
    const SkeletonSeries& first = activities_.front();
    for (const SkeletonSeries& series : activities_) {
      if (!ids.insert(series.activity_id()).second) {
        Fail(ErrorCode::kInvalidArgument,
             "duplicate activity id '" + series.activity_id() + "'");
      }
      if (series.sites() != first.sites()) {
        Fail(ErrorCode::kInvalidArgument,
             "activity '" + series.activity_id() + "' has roster " +
                 JoinSites(series.sites()) + ", expected " +
                 JoinSites(first.sites()));
      }
      if (series.length() != first.length()) {
        Fail(ErrorCode::kInvalidArgument,
             "activity '" + series.activity_id() + "' has " +
                 std::to_string(series.length()) + " frames, expected " +
                 std::to_string(first.length()));
      }
    }
  }

  std::size_t size() const { return activities_.size(); }
  std::size_t length() const { return activities_.front().length(); }
  const std::vector<SiteId>& sites() const { return activities_.front().sites(); }
  const std::vector<SkeletonSeries>& activities() const { return activities_; }
  const SkeletonSeries& operator[](std::size_t i) const { return activities_[i]; }

 private:
  std::vector<SkeletonSeries> activities_;
};

namespace internal {

inline bool MeanOfConfident(const RawPoseFrame& frame,
                            std::span<const Keypoint17> parts,
                            double threshold, Point2* out) {
  double sx = 0.0;
  double sy = 0.0;
  std::size_t count = 0;
  for (Keypoint17 part : parts) {
    const Keypoint& kp = frame.at(part);
    if (kp.confidence >= threshold) {
      sx += kp.x;
      sy += kp.y;
      ++count;
    }
  }
  if (count == 0) return false;
  *out = {sx / static_cast<double>(count), sy / static_cast<double>(count)};
  return true;
}

}  // namespace internal

inline Skeleton12Frame MergeKeypoints(
    const RawPoseFrame& frame,
    double confidence_threshold = kDefaultConfidenceThreshold) {
  static constexpr std::array<Keypoint17, 5> kFace = {
      Keypoint17::kNose, Keypoint17::kLeftEye, Keypoint17::kRightEye,
      Keypoint17::kLeftEar, Keypoint17::kRightEar};
  static constexpr std::array<Keypoint17, 2> kHips = {Keypoint17::kLeftHip,
                                                      Keypoint17::kRightHip};
  static constexpr std::array<std::pair<SiteId, Keypoint17>, 10> kDirect = {{
      {SiteId::kLeftShoulder, Keypoint17::kLeftShoulder},
      {SiteId::kRightShoulder, Keypoint17::kRightShoulder},
      {SiteId::kLeftElbow, Keypoint17::kLeftElbow},
      {SiteId::kRightElbow, Keypoint17::kRightElbow},
      {SiteId::kLeftWrist, Keypoint17::kLeftWrist},
      {SiteId::kRightWrist, Keypoint17::kRightWrist},
      {SiteId::kLeftKnee, Keypoint17::kLeftKnee},
      {SiteId::kRightKnee, Keypoint17::kRightKnee},
      {SiteId::kLeftAnkle, Keypoint17::kLeftAnkle},
      {SiteId::kRightAnkle, Keypoint17::kRightAnkle},
  }};

  Skeleton12Frame out;
  Point2 merged;
  if (internal::MeanOfConfident(frame, kFace, confidence_threshold, &merged)) {
    out.set(SiteId::kHead, merged);
  }
  if (internal::MeanOfConfident(frame, kHips, confidence_threshold, &merged)) {
    out.set(SiteId::kPelvis, merged);
  }
  for (const auto& [site, part] : kDirect) {
    const Keypoint& kp = frame.at(part);
    if (kp.confidence >= confidence_threshold) out.set(site, {kp.x, kp.y});
  }
  return out;
}

// Frames whose centroid is already this close to (0.5, 0.5) are returned
// unchanged, which makes Centralize bit-exactly idempotent.
inline constexpr double kCentroidTolerance = 1e-12;

inline Point2 ValidCentroid(const Skeleton12Frame& frame) {
  double sx = 0.0;
  double sy = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < kNumSites; ++i) {
    if (!frame.valid[i]) continue;
    sx += frame.points[i].x;
    sy += frame.points[i].y;
    ++count;
  }
  if (count == 0) Fail(ErrorCode::kEmptyFrame, "frame has no valid points");
  return {sx / static_cast<double>(count), sy / static_cast<double>(count)};
}

inline Skeleton12Frame Centralize(const Skeleton12Frame& frame) {
  const Point2 centroid = ValidCentroid(frame);
  const double dx = 0.5 - centroid.x;
  const double dy = 0.5 - centroid.y;
  if (std::abs(dx) <= kCentroidTolerance && std::abs(dy) <= kCentroidTolerance) {
    return frame;
  }
  Skeleton12Frame out = frame;
  for (std::size_t i = 0; i < kNumSites; ++i) {
    if (!out.valid[i]) continue;
    out.points[i].x += dx;
    out.points[i].y += dy;
  }
  return out;
}

inline std::vector<SitePoint> SelectSites(const Skeleton12Frame& frame,
                                          std::span<const SiteId> roster,
                                          bool exclude_head = true) {
  ValidateRoster(roster, exclude_head);
  std::vector<SitePoint> out;
  out.reserve(roster.size());
  for (SiteId site : roster) {
    out.push_back({frame.point(site), frame.is_valid(site)});
  }
  return out;
}

struct RepairResult {
  std::vector<std::vector<Point2>> tracks;
  // Frames dropped from the front/back to reach the common valid envelope.
  std::size_t trimmed_front = 0;
  std::size_t trimmed_back = 0;
  std::size_t filled = 0;
};

inline RepairResult RepairGaps(std::span<const MaskedTrack> tracks,
                               std::size_t max_gap = kDefaultMaxGap) {
  if (tracks.empty()) Fail(ErrorCode::kInvalidArgument, "no tracks to repair");
  const std::size_t n = tracks.front().points.size();
  if (n == 0) Fail(ErrorCode::kInvalidArgument, "tracks are empty");

  std::size_t begin = 0;
  std::size_t end = n - 1;
  for (const MaskedTrack& track : tracks) {
    if (track.points.size() != n || track.valid.size() != n) {
      Fail(ErrorCode::kInvalidArgument, "masked tracks differ in length");
    }
    auto first = std::find(track.valid.begin(), track.valid.end(), 1);
    if (first == track.valid.end()) {
      Fail(ErrorCode::kAllMissingSite,
           "site " + std::string(SiteCode(track.site)) + " has no valid frame");
    }
    auto last = std::find(track.valid.rbegin(), track.valid.rend(), 1);
    begin = std::max(begin, static_cast<std::size_t>(first - track.valid.begin()));
    end = std::min(end, n - 1 - static_cast<std::size_t>(last - track.valid.rbegin()));
  }
  if (begin > end) {
    Fail(ErrorCode::kAllMissingSite,
         "sites share no valid frame range (latest first-valid frame " +
             std::to_string(begin) + " > earliest last-valid frame " +
             std::to_string(end) + ")");
  }

  RepairResult result;
  result.trimmed_front = begin;
  result.trimmed_back = n - 1 - end;
  result.tracks.reserve(tracks.size());
  for (const MaskedTrack& track : tracks) {
    std::vector<Point2> out(track.points.begin() + static_cast<std::ptrdiff_t>(begin),
                            track.points.begin() + static_cast<std::ptrdiff_t>(end + 1));
    std::size_t last_valid = 0;
    for (std::size_t i = 1; i < out.size(); ++i) {
      if (!track.valid[begin + i]) continue;
      const std::size_t gap = i - last_valid - 1;
      if (gap > 0) {
        if (gap > max_gap) {
          Fail(ErrorCode::kGapTooLong,
               "site " + std::string(SiteCode(track.site)) + " is missing " +
                   std::to_string(gap) + " frames [" +
                   std::to_string(begin + last_valid + 1) + ", " +
                   std::to_string(begin + i - 1) + "], max gap " +
                   std::to_string(max_gap));
        }
        const Point2 p0 = out[last_valid];
        const Point2 p1 = out[i];
        for (std::size_t k = 1; k <= gap; ++k) {
          const double w = static_cast<double>(k) / static_cast<double>(gap + 1);
          out[last_valid + k] = {p0.x + (p1.x - p0.x) * w, p0.y + (p1.y - p0.y) * w};
        }
        result.filled += gap;
      }
      last_valid = i;
    }
    result.tracks.push_back(std::move(out));
  }
  return result;
}

enum class TruncateMode { kFirst, kUniform };

inline SkeletonSeries TruncateSeries(const SkeletonSeries& series,
                                     std::size_t length = kDefaultSeriesLength,
                                     TruncateMode mode = TruncateMode::kFirst) {
  if (length == 0) Fail(ErrorCode::kInvalidArgument, "target length is 0");
  const std::size_t n = series.length();
  if (n < length) {
    Fail(ErrorCode::kTooShort,
         "activity '" + series.activity_id() + "' has " + std::to_string(n) +
             " frames, needs at least " + std::to_string(length));
  }
  if (mode == TruncateMode::kFirst || n == length) return series.slice(0, length);

  std::vector<std::vector<Point2>> tracks;
  for (const auto& track : series.tracks()) {
    std::vector<Point2> out(length);
    for (std::size_t i = 0; i < length; ++i) out[i] = track[i * n / length];
    tracks.push_back(std::move(out));
  }
  return SkeletonSeries(series.activity_id(), series.sites(), std::move(tracks),
                        series.sample_rate());
}

// Consecutive disjoint windows of `length` frames; a trailing partial window
// is dropped.
inline std::vector<SkeletonSeries> SplitWindows(const SkeletonSeries& series,
                                                std::size_t length) {
  if (length == 0) Fail(ErrorCode::kInvalidArgument, "window length is 0");
  if (series.length() < length) {
    Fail(ErrorCode::kTooShort,
         "activity '" + series.activity_id() + "' has " +
             std::to_string(series.length()) + " frames, needs at least " +
             std::to_string(length));
  }
  std::vector<SkeletonSeries> windows;
  for (std::size_t begin = 0; begin + length <= series.length(); begin += length) {
    windows.push_back(series.slice(begin, length));
  }
  return windows;
}

// Integer decimation stride that brings `frames` down to `target_rate`.
inline std::size_t DecimationStride(std::span<const RawPoseFrame> frames,
                                    double target_rate) {
  if (!(target_rate > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "target rate must be positive");
  }
  if (frames.size() < 2) return 1;
  const double span = frames.back().t - frames.front().t;
  if (!(span > 0.0)) {
    Fail(ErrorCode::kNonMonotoneTime, "recording spans no time");
  }
  const double rate = static_cast<double>(frames.size() - 1) / span;
  const double ratio = rate / target_rate;
  const double stride = std::round(ratio);
  if (stride < 1.0 || std::abs(ratio - stride) > 0.01 * stride) {
    Fail(ErrorCode::kRateMismatch,
         "input rate " + std::to_string(rate) + " Hz is not an integer multiple of " +
             std::to_string(target_rate) + " Hz");
  }
  return static_cast<std::size_t>(stride);
}

struct PreprocessOptions {
  std::vector<SiteId> roster{kEvaluationRoster.begin(), kEvaluationRoster.end()};
  double confidence_threshold = kDefaultConfidenceThreshold;
  std::size_t max_gap = kDefaultMaxGap;
  double target_rate = kDefaultTargetRate;
  bool exclude_head = true;
};

// Decimate, merge, centralize, select and repair one recording. The result
// is gap-free but not truncated; the roster is emitted in canonical order.
inline SkeletonSeries PreprocessFrames(std::span<const RawPoseFrame> frames,
                                       const PreprocessOptions& options,
                                       std::string activity_id = {}) {
  if (frames.empty()) Fail(ErrorCode::kTooShort, "recording has no frames");
  ValidateRoster(options.roster, options.exclude_head);
  const std::vector<SiteId> roster = CanonicalOrder(options.roster);
  const std::size_t stride = DecimationStride(frames, options.target_rate);

  std::vector<MaskedTrack> masked(roster.size());
  for (std::size_t s = 0; s < roster.size(); ++s) masked[s].site = roster[s];
  for (std::size_t i = 0; i < frames.size(); i += stride) {
    Skeleton12Frame frame = MergeKeypoints(frames[i], options.confidence_threshold);
    if (frame.valid_count() > 0) frame = Centralize(frame);
    for (std::size_t s = 0; s < roster.size(); ++s) {
      masked[s].points.push_back(frame.point(roster[s]));
      masked[s].valid.push_back(frame.is_valid(roster[s]) ? 1 : 0);
    }
  }
  RepairResult repaired = RepairGaps(masked, options.max_gap);
  return SkeletonSeries(std::move(activity_id), roster, std::move(repaired.tracks),
                        options.target_rate);
}

// Appends recordings of the same activity in order.
inline SkeletonSeries ConcatenateSeries(std::span<const SkeletonSeries> parts,
                                        std::string activity_id) {
  if (parts.empty()) Fail(ErrorCode::kInvalidArgument, "nothing to concatenate");
  std::vector<std::vector<Point2>> tracks(parts.front().sites().size());
  for (const SkeletonSeries& part : parts) {
    if (part.sites() != parts.front().sites() ||
        part.sample_rate() != parts.front().sample_rate()) {
      Fail(ErrorCode::kInvalidArgument,
           "recordings of '" + activity_id + "' disagree on sites or rate");
    }
    for (std::size_t s = 0; s < tracks.size(); ++s) {
      tracks[s].insert(tracks[s].end(), part.tracks()[s].begin(),
                       part.tracks()[s].end());
    }
  }
  return SkeletonSeries(std::move(activity_id), parts.front().sites(),
                        std::move(tracks), parts.front().sample_rate());
}

}  // namespace osp

#endif  // OSP_POSE_MODEL_HPP_
