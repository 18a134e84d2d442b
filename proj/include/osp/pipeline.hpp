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

// End-to-end runs behind the CLI: manifest -> preprocessed activities ->
// ranking, ranking files -> tau, and synthetic corpus generation.

#ifndef OSP_PIPELINE_HPP_
#define OSP_PIPELINE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "osp/error.hpp"
#include "osp/fingerprint.hpp"
#include "osp/io.hpp"
#include "osp/metric.hpp"
#include "osp/pose_model.hpp"
#include "osp/rank_eval.hpp"
#include "osp/sites.hpp"
#include "osp/synth.hpp"

namespace osp {

struct RunConfig {
  std::vector<SiteId> roster{kEvaluationRoster.begin(), kEvaluationRoster.end()};
  std::size_t length = kDefaultSeriesLength;
  double target_rate = kDefaultTargetRate;
  double confidence_threshold = kDefaultConfidenceThreshold;
  std::size_t max_gap = kDefaultMaxGap;
  // nullopt enumerates every size.
  std::optional<std::set<std::size_t>> sizes = std::set<std::size_t>{1, 2, 3, 4};
  bool cross_size = false;
  TruncateMode truncate = TruncateMode::kFirst;
  bool multi_window = false;
  bool exclude_head = true;
  std::uint64_t seed = 0;
  // Not part of the fingerprint: results do not depend on it.
  std::size_t threads = 1;

  void Validate() const {
    ValidateRoster(roster, exclude_head);
    if (length < 1) Fail(ErrorCode::kInvalidArgument, "length must be >= 1");
    if (!(target_rate > 0.0)) Fail(ErrorCode::kInvalidArgument, "rate must be positive");
    if (!(confidence_threshold > 0.0) || confidence_threshold > 1.0) {
      Fail(ErrorCode::kInvalidArgument, "confidence threshold must be in (0, 1]");
    }
    if (max_gap < 1) Fail(ErrorCode::kInvalidArgument, "max gap must be >= 1");
    if (threads < 1) Fail(ErrorCode::kInvalidArgument, "threads must be >= 1");
    if (sizes && sizes->empty()) Fail(ErrorCode::kInvalidArgument, "size filter is empty");
  }

  std::string SizesText() const {
    if (!sizes) return "all";
    std::string out;
    for (std::size_t s : *sizes) {
      if (!out.empty()) out += ",";
      out += std::to_string(s);
    }
    return out;
  }

  // Canonical text of every setting that can change results.
  std::string Canonical() const {
    return "roster=" + JoinSites(CanonicalOrder(roster)) + ";L=" + std::to_string(length) +
           ";rate=" + FormatDouble(target_rate) +
           ";threshold=" + FormatDouble(confidence_threshold) +
           ";max_gap=" + std::to_string(max_gap) + ";sizes=" + SizesText() +
           ";cross_size=" + (cross_size ? "1" : "0") +
           ";truncate=" + (truncate == TruncateMode::kFirst ? "first" : "uniform") +
           ";windows=" + (multi_window ? "multi" : "single") +
           ";exclude_head=" + (exclude_head ? "1" : "0");
  }

  PreprocessOptions preprocess() const {
    PreprocessOptions options;
    options.roster = roster;
    options.confidence_threshold = confidence_threshold;
    options.max_gap = max_gap;
    options.target_rate = target_rate;
    options.exclude_head = exclude_head;
    return options;
  }
};

inline std::optional<std::set<std::size_t>> ParseSizes(const std::string& text) {
  if (text == "all") return std::nullopt;
  std::set<std::size_t> sizes;
  for (std::string_view token : Split(text, ',')) {
    double v = 0.0;
    if (!ParseDouble(token, &v) || v < 1.0 || v != std::floor(v)) {
      Fail(ErrorCode::kInvalidArgument, "bad subset size '" + std::string(token) + "'");
    }
    sizes.insert(static_cast<std::size_t>(v));
  }
  return sizes;
}

// One diagnostic per activity that failed to load.
class PipelineError : public Error {
 public:
  PipelineError(ErrorCode code, std::vector<std::string> diagnostics)
      : Error(code, JoinDiagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  static std::string JoinDiagnostics(const std::vector<std::string>& lines) {
    std::string out = std::to_string(lines.size()) + " activity(ies) failed";
    for (const auto& line : lines) out += "\n  " + line;
    return out;
  }

  std::vector<std::string> diagnostics_;
};

struct LoadedActivity {
  std::string activity_id;
  std::vector<std::string> files;
  std::size_t raw_frames = 0;
  std::size_t out_of_range = 0;
  SkeletonSeries series;
};

// Parses and preprocesses every manifest entry. Failures are collected per
// activity and raised together.
inline std::vector<LoadedActivity> LoadActivities(const RunConfig& config,
                                                  const std::vector<ManifestEntry>& manifest) {
  config.Validate();
  const PreprocessOptions options = config.preprocess();
  std::vector<LoadedActivity> loaded;
  std::vector<std::string> failures;
  ErrorCode first_code = ErrorCode::kPrecondition;
  for (const ManifestEntry& entry : manifest) {
    try {
      LoadedActivity activity;
      activity.activity_id = entry.activity_id;
      std::vector<SkeletonSeries> parts;
      for (const auto& file : entry.files) {
        activity.files.push_back(file.generic_string());
        KeypointFile parsed = ParseKeypointFile(file);
        activity.raw_frames += parsed.frames.size();
        activity.out_of_range += parsed.report.out_of_range;
        parts.push_back(PreprocessFrames(parsed.frames, options, entry.activity_id));
      }
      activity.series = ConcatenateSeries(parts, entry.activity_id);
      if (activity.series.length() < config.length) {
        Fail(ErrorCode::kTooShort, std::to_string(activity.series.length()) +
                                       " frames after preprocessing, needs at least " +
                                       std::to_string(config.length));
      }
      loaded.push_back(std::move(activity));
    } catch (const Error& e) {
      if (failures.empty()) first_code = e.code();
      failures.push_back(entry.activity_id + ": " + e.what());
    }
  }
  if (!failures.empty()) throw PipelineError(first_code, std::move(failures));
  if (loaded.size() < 2) {
    Fail(ErrorCode::kPrecondition, "need at least 2 activities, manifest yields " +
                                       std::to_string(loaded.size()));
  }
  return loaded;
}

struct RankRun {
  Ranking ranking;
  std::vector<LoadedActivity> activities;
  std::size_t windows = 1;
  std::string table;
  std::string report;
};

// Ranks already-preprocessed full-length series under `config`.
inline RankRun RankSeries(const RunConfig& config, std::vector<LoadedActivity> activities) {
  config.Validate();
  RankRun run;
  const std::vector<PlacementSubset> subsets = EnumerateSubsets(config.roster, config.sizes);
  RankOptions options;
  options.threads = config.threads;
  options.per_size = !config.cross_size;
  options.config = config.Canonical();

  if (config.multi_window) {
    std::size_t windows = SIZE_MAX;
    for (const auto& a : activities) {
      windows = std::min(windows, a.series.length() / config.length);
    }
    std::vector<ActivitySet> sets;
    for (std::size_t w = 0; w < windows; ++w) {
      std::vector<SkeletonSeries> members;
      for (const auto& a : activities) {
        members.push_back(a.series.slice(w * config.length, config.length));
      }
      sets.emplace_back(std::move(members));
    }
    run.windows = windows;
    run.ranking = RankPlacements(std::span<const ActivitySet>(sets), subsets, options);
  } else {
    std::vector<SkeletonSeries> members;
    for (const auto& a : activities) {
      members.push_back(TruncateSeries(a.series, config.length, config.truncate));
    }
    run.ranking = RankPlacements(ActivitySet(std::move(members)), subsets, options);
  }
  run.activities = std::move(activities);
  run.table = FormatRankingTable(run.ranking);

  nlohmann::ordered_json report;
  report["kind"] = "ranking";
  report["fingerprint"] = run.ranking.fingerprint;
  report["config"] = {
      {"roster", JoinSites(CanonicalOrder(config.roster))},
      {"length", config.length},
      {"rate_hz", config.target_rate},
      {"confidence_threshold", config.confidence_threshold},
      {"max_gap", config.max_gap},
      {"sizes", config.SizesText()},
      {"cross_size", config.cross_size},
      {"truncate", config.truncate == TruncateMode::kFirst ? "first" : "uniform"},
      {"windows", config.multi_window ? "multi" : "single"},
      {"exclude_head", config.exclude_head},
      {"tie_break", run.ranking.tie_break},
  };
  report["num_activities"] = run.ranking.num_activities;
  report["length"] = run.ranking.length;
  report["windows_scored"] = run.windows;
  report["activities"] = nlohmann::ordered_json::array();
  for (const auto& a : run.activities) {
    report["activities"].push_back({{"id", a.activity_id},
                                    {"files", a.files},
                                    {"raw_frames", a.raw_frames},
                                    {"preprocessed_frames", a.series.length()},
                                    {"out_of_range_coordinates", a.out_of_range}});
  }
  report["ranking"] = nlohmann::ordered_json::array();
  const auto ranks = run.ranking.rank_numbers();
  for (std::size_t i = 0; i < run.ranking.entries.size(); ++i) {
    const auto& e = run.ranking.entries[i];
    report["ranking"].push_back({{"rank", ranks[i]},
                                 {"size", e.subset.size()},
                                 {"sites", e.subset.label()},
                                 {"score", e.score}});
  }
  run.report = report.dump(2) + "\n";
  return run;
}

inline RankRun RunRank(const RunConfig& config, const std::filesystem::path& manifest) {
  config.Validate();
  return RankSeries(config, LoadActivities(config, ParseManifestFile(manifest)));
}

struct CompareOptions {
  ScopeMode mode = ScopeMode::kPerSize;
  std::optional<std::size_t> size;
  std::optional<std::size_t> top_k;

  std::string label() const {
    std::string out = mode == ScopeMode::kAll       ? "all"
                      : mode == ScopeMode::kPerSize ? "per-size"
                                                    : "size:" + std::to_string(*size);
    if (top_k) out += ";top=" + std::to_string(*top_k);
    return out;
  }
};

inline CompareOptions ParseScope(const std::string& text) {
  CompareOptions options;
  if (text == "all") {
    options.mode = ScopeMode::kAll;
  } else if (text == "per-size") {
    options.mode = ScopeMode::kPerSize;
  } else if (text.starts_with("size:")) {
    double v = 0.0;
    if (!ParseDouble(std::string_view(text).substr(5), &v) || v < 1.0 || v != std::floor(v)) {
      Fail(ErrorCode::kInvalidArgument, "bad scope '" + text + "'");
    }
    options.mode = ScopeMode::kSize;
    options.size = static_cast<std::size_t>(v);
  } else {
    Fail(ErrorCode::kInvalidArgument,
         "scope must be all, per-size or size:N, got '" + text + "'");
  }
  return options;
}

struct CompareRun {
  std::vector<TauReport> reports;
  std::string table;
  std::string report;
};

inline CompareRun CompareRankingFiles(const Ranking& a, const Ranking& b,
                                      const CompareOptions& options,
                                      const std::string& name_a = "a",
                                      const std::string& name_b = "b") {
  CompareRun run;
  run.reports = CompareRankings(a, b, options.mode, options.size, options.top_k);
  run.table = FormatTauTable(run.reports);
  nlohmann::ordered_json report;
  report["kind"] = "compare";
  report["fingerprint"] = Fingerprint("scope=" + options.label());
  report["first"] = name_a;
  report["second"] = name_b;
  report["scope"] = options.label();
  report["results"] = nlohmann::ordered_json::array();
  for (const TauReport& r : run.reports) {
    report["results"].push_back({{"scope", r.scope},
                                 {"n", r.n},
                                 {"concordant", r.concordant},
                                 {"discordant", r.discordant},
                                 {"tau_numerator", r.numerator},
                                 {"tau_denominator", r.denominator},
                                 {"tau", r.tau}});
  }
  run.report = report.dump(2) + "\n";
  return run;
}

inline CompareRun RunCompare(const std::filesystem::path& a, const std::filesystem::path& b,
                             const CompareOptions& options) {
  return CompareRankingFiles(ParseRankingFile(a), ParseRankingFile(b), options,
                             a.generic_string(), b.generic_string());
}

struct SynthOptions {
  std::size_t activities = 13;
  std::vector<SiteId> discriminative{SiteId::kLeftWrist};
  SeparableOptions motion;
  std::uint64_t seed = 0;
  Point2 offset{0.1, 0.05};
};

struct SynthRun {
  // (path, content) pairs: one keypoint file per activity, the manifest, and
  // a JSON report.
  std::vector<std::pair<std::filesystem::path, std::string>> files;
  std::filesystem::path manifest;
};

inline SynthRun BuildSynthCorpus(const SynthOptions& options,
                                 const std::filesystem::path& out_dir) {
  const ActivitySet set =
      MakeSeparableSet(options.activities, options.discriminative, options.seed, options.motion);
  SynthRun run;
  std::vector<ManifestEntry> manifest;
  for (const SkeletonSeries& series : set.activities()) {
    const std::string name = series.activity_id() + ".csv";
    run.files.emplace_back(out_dir / name, FormatKeypointCsv(ToRawFrames(series, options.offset)));
    manifest.push_back({series.activity_id(), {name}});
  }
  run.manifest = out_dir / "manifest.txt";
  run.files.emplace_back(run.manifest, FormatManifest(manifest));

  nlohmann::ordered_json report;
  report["kind"] = "synth";
  const std::string canonical =
      "activities=" + std::to_string(options.activities) +
      ";discriminative=" + JoinSites(options.discriminative) +
      ";roster=" + JoinSites(CanonicalOrder(options.motion.roster)) +
      ";L=" + std::to_string(options.motion.length) +
      ";rate=" + FormatDouble(options.motion.sample_rate) +
      ";amplitude=" + FormatDouble(options.motion.amplitude) +
      ";noise=" + FormatDouble(options.motion.noise_sigma) + ";seed=" + std::to_string(options.seed) +
      ";rng=" + kNoiseGenerator;
  report["fingerprint"] = Fingerprint(canonical);
  report["generator"] = kNoiseGenerator;
  report["seed"] = options.seed;
  report["activities"] = options.activities;
  report["discriminative"] = JoinSites(options.discriminative);
  report["roster"] = JoinSites(CanonicalOrder(options.motion.roster));
  report["length"] = options.motion.length;
  report["rate_hz"] = options.motion.sample_rate;
  report["amplitude"] = options.motion.amplitude;
  report["noise_sigma"] = options.motion.noise_sigma;
  run.files.emplace_back(out_dir / "synth.json", report.dump(2) + "\n");
  return run;
}

// Human-readable summary of a ranking, compare or synth JSON report.
inline std::string RenderReport(const std::string& json_text) {
  nlohmann::ordered_json report;
  try {
    report = nlohmann::ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kMalformedLine, std::string("report is not valid JSON: ") + e.what());
  }
  std::ostringstream out;
  const std::string kind = report.value("kind", "");
  if (kind == "ranking") {
    const auto& c = report.at("config");
    out << "Sensor placement ranking (" << report.at("num_activities").get<std::size_t>()
        << " activities, " << report.at("length").get<std::size_t>() << " frames at "
        << c.at("rate_hz").get<double>() << " Hz, roster " << c.at("roster").get<std::string>()
        << ")\n";
    out << "fingerprint " << report.at("fingerprint").get<std::string>() << "\n";
    std::size_t current_size = 0;
    for (const auto& row : report.at("ranking")) {
      const auto size = row.at("size").get<std::size_t>();
      if (!c.at("cross_size").get<bool>() && size != current_size) {
        out << "\n" << size << " sensor(s):\n";
        current_size = size;
      }
      char line[128];
      std::snprintf(line, sizeof(line), "  %3zu. %-16s D_k = %.6f\n",
                    row.at("rank").get<std::size_t>(), row.at("sites").get<std::string>().c_str(),
                    row.at("score").get<double>());
      out << line;
    }
  } else if (kind == "compare") {
    out << "Ranking agreement: " << report.at("first").get<std::string>() << " vs "
        << report.at("second").get<std::string>() << "\n";
    for (const auto& row : report.at("results")) {
      out << "  " << row.at("scope").get<std::string>() << ": tau = "
          << row.at("tau_numerator").get<long long>() << "/"
          << row.at("tau_denominator").get<long long>() << " = "
          << FormatDouble(row.at("tau").get<double>()) << " (n = " << row.at("n").get<std::size_t>()
          << ", concordant " << row.at("concordant").get<long long>() << ", discordant "
          << row.at("discordant").get<long long>() << ")\n";
    }
  } else if (kind == "synth") {
    out << "Synthetic corpus: " << report.at("activities").get<std::size_t>()
        << " activities, discriminative " << report.at("discriminative").get<std::string>()
        << ", noise " << report.at("noise_sigma").get<double>() << ", seed "
        << report.at("seed").get<std::uint64_t>() << " (" << report.at("generator").get<std::string>()
        << ")\n";
  } else {
    Fail(ErrorCode::kMalformedLine, "unknown report kind '" + kind + "'");
  }
  return out.str();
}

}  // namespace osp

#endif  // OSP_PIPELINE_HPP_
