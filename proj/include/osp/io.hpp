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

// File formats.
//
// Keypoint file, one frame per line, either
//   t,kp0_x,kp0_y,kp0_c,...,kp16_x,kp16_y,kp16_c        (52 fields)
// or the labeled form with the same fields as whitespace-separated key=value
// tokens in any order:
//   t=0.1 kp0_x=0.51 kp0_y=0.14 kp0_c=0.98 ...
// Blank lines and lines starting with '#' are ignored, as is a CSV header
// line starting with "t,".
//
// Manifest: `activity_id path [path ...]` per line; relative paths resolve
// against the manifest's directory.
//
// Ranking table: `rank,score,sites` (or `rank,sites` for external rankings),
// sites joined with '+', e.g. `1,3.25,LW+RW`.

#ifndef OSP_IO_HPP_
#define OSP_IO_HPP_

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "osp/error.hpp"
#include "osp/metric.hpp"
#include "osp/pose_model.hpp"
#include "osp/rank_eval.hpp"
#include "osp/sites.hpp"

namespace osp {

// Shortest representation that round-trips.
inline std::string FormatDouble(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) Fail(ErrorCode::kInvalidArgument, "unformattable number");
  return std::string(buf, ptr);
}

inline bool ParseDouble(std::string_view text, double* out) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), *out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes every file to a temporary sibling first and renames only after all
// writes succeeded, so a failure never leaves partial outputs behind.
inline void WriteFilesAtomically(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
  std::vector<std::filesystem::path> temps;
  auto cleanup = [&] {
    std::error_code ignored;
    for (const auto& t : temps) std::filesystem::remove(t, ignored);
  };
  for (const auto& [path, content] : files) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) {
      cleanup();
      Fail(ErrorCode::kIo, "cannot write " + path.string());
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    std::filesystem::rename(temps[i], files[i].first, ec);
    if (ec) {
      cleanup();
      Fail(ErrorCode::kIo, "cannot rename into " + files[i].first.string() + ": " +
                               ec.message());
    }
  }
}

inline std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

inline std::vector<std::string_view> Split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t end = text.find(sep, start);
    if (end == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
}

inline std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// ---------------------------------------------------------------------------
// Keypoint files

inline constexpr std::size_t kKeypointFields = 1 + 3 * kNumKeypoints;

struct ValidationReport {
  std::size_t frames = 0;
  // Coordinates outside [0, 1]; legal but worth flagging.
  std::size_t out_of_range = 0;
  std::vector<std::string> notes;
};

struct KeypointFile {
  std::vector<RawPoseFrame> frames;
  ValidationReport report;
};

namespace internal {

inline std::string LineError(const std::string& source, std::size_t line,
                             const std::string& what) {
  return source + ":" + std::to_string(line) + ": " + what;
}

inline std::string KeypointKey(std::size_t index) {
  static const std::vector<std::string> kKeys = [] {
    std::vector<std::string> keys{"t"};
    for (std::size_t k = 0; k < kNumKeypoints; ++k) {
      const std::string base = "kp" + std::to_string(k) + "_";
      keys.push_back(base + "x");
      keys.push_back(base + "y");
      keys.push_back(base + "c");
    }
    return keys;
  }();
  return kKeys[index];
}

inline std::vector<std::string_view> LabeledFields(std::string_view line,
                                                   const std::string& source,
                                                   std::size_t line_no) {
  static const std::map<std::string, std::size_t, std::less<>> kIndex = [] {
    std::map<std::string, std::size_t, std::less<>> index;
    for (std::size_t i = 0; i < kKeypointFields; ++i) index[KeypointKey(i)] = i;
    return index;
  }();
  std::vector<std::string_view> fields(kKeypointFields);
  std::vector<bool> seen(kKeypointFields, false);
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
    std::string_view token = line.substr(pos, end - pos);
    pos = end;
    const std::size_t eq = token.find('=');
    if (eq == std::string_view::npos) {
      Fail(ErrorCode::kMalformedLine,
           LineError(source, line_no, "token '" + std::string(token) + "' is not key=value"));
    }
    auto it = kIndex.find(token.substr(0, eq));
    if (it == kIndex.end()) {
      Fail(ErrorCode::kMalformedLine, LineError(source, line_no,
                                                "unknown key '" +
                                                    std::string(token.substr(0, eq)) + "'"));
    }
    if (seen[it->second]) {
      Fail(ErrorCode::kMalformedLine,
           LineError(source, line_no, "key '" + it->first + "' given twice"));
    }
    seen[it->second] = true;
    fields[it->second] = token.substr(eq + 1);
  }
  for (std::size_t i = 0; i < kKeypointFields; ++i) {
    if (!seen[i]) {
      Fail(ErrorCode::kMalformedLine,
           LineError(source, line_no, "missing key '" + KeypointKey(i) + "'"));
    }
  }
  return fields;
}

}  // namespace internal

inline KeypointFile ParseKeypointText(std::string_view text,
                                      const std::string& source = "<input>") {
  KeypointFile out;
  const auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string_view line = Trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    if (line.starts_with("t,")) continue;

    std::vector<std::string_view> fields;
    if (line.find('=') != std::string_view::npos) {
      fields = internal::LabeledFields(line, source, line_no);
    } else {
      fields = Split(line, ',');
      if (fields.size() != kKeypointFields) {
        Fail(ErrorCode::kMalformedLine,
             internal::LineError(source, line_no,
                                 "expected " + std::to_string(kKeypointFields) +
                                     " fields, found " + std::to_string(fields.size())));
      }
    }

    std::array<double, kKeypointFields> values{};
    for (std::size_t f = 0; f < kKeypointFields; ++f) {
      if (!ParseDouble(fields[f], &values[f]) || !std::isfinite(values[f])) {
        Fail(ErrorCode::kMalformedLine,
             internal::LineError(source, line_no,
                                 "field " + internal::KeypointKey(f) + " ('" +
                                     std::string(fields[f]) + "') is not a finite number"));
      }
    }
    RawPoseFrame frame;
    frame.t = values[0];
    if (frame.t < 0.0) {
      Fail(ErrorCode::kMalformedLine,
           internal::LineError(source, line_no, "negative timestamp"));
    }
    if (!out.frames.empty() && !(frame.t > out.frames.back().t)) {
      Fail(ErrorCode::kNonMonotoneTime,
           internal::LineError(source, line_no,
                               "timestamp " + FormatDouble(frame.t) + " does not exceed " +
                                   FormatDouble(out.frames.back().t)));
    }
    for (std::size_t k = 0; k < kNumKeypoints; ++k) {
      Keypoint& kp = frame.keypoints[k];
      kp.x = values[1 + 3 * k];
      kp.y = values[2 + 3 * k];
      kp.confidence = values[3 + 3 * k];
      if (kp.confidence < 0.0 || kp.confidence > 1.0) {
        Fail(ErrorCode::kMalformedLine,
             internal::LineError(source, line_no,
                                 "confidence of keypoint " + std::to_string(k) +
                                     " outside [0, 1]"));
      }
      if (kp.x < 0.0 || kp.x > 1.0 || kp.y < 0.0 || kp.y > 1.0) {
        if (out.report.out_of_range < 10) {
          out.report.notes.push_back(internal::LineError(
              source, line_no,
              "keypoint " + std::to_string(k) + " outside the unit square"));
        }
        ++out.report.out_of_range;
      }
    }
    out.frames.push_back(frame);
  }
  out.report.frames = out.frames.size();
  return out;
}

inline KeypointFile ParseKeypointFile(const std::filesystem::path& path) {
  return ParseKeypointText(ReadFile(path), path.string());
}

inline std::string FormatKeypointCsv(std::span<const RawPoseFrame> frames) {
  std::string out = "t";
  for (std::size_t i = 1; i < kKeypointFields; ++i) out += "," + internal::KeypointKey(i);
  out += '\n';
  for (const RawPoseFrame& frame : frames) {
    out += FormatDouble(frame.t);
    for (const Keypoint& kp : frame.keypoints) {
      out += ',';
      out += FormatDouble(kp.x);
      out += ',';
      out += FormatDouble(kp.y);
      out += ',';
      out += FormatDouble(kp.confidence);
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Manifest

struct ManifestEntry {
  std::string activity_id;
  std::vector<std::filesystem::path> files;
};

inline std::vector<ManifestEntry> ParseManifestText(std::string_view text,
                                                    const std::filesystem::path& base_dir,
                                                    const std::string& source = "<manifest>") {
  std::vector<ManifestEntry> entries;
  std::set<std::string> ids;
  const auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = Trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    std::istringstream tokens{std::string(line)};
    ManifestEntry entry;
    tokens >> entry.activity_id;
    std::string file;
    while (tokens >> file) {
      std::filesystem::path p(file);
      entry.files.push_back(p.is_absolute() ? p : base_dir / p);
    }
    if (entry.files.empty()) {
      Fail(ErrorCode::kMalformedLine,
           internal::LineError(source, i + 1, "activity '" + entry.activity_id +
                                                  "' lists no keypoint file"));
    }
    if (!ids.insert(entry.activity_id).second) {
      Fail(ErrorCode::kMalformedLine,
           internal::LineError(source, i + 1,
                               "duplicate activity id '" + entry.activity_id + "'"));
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

inline std::vector<ManifestEntry> ParseManifestFile(const std::filesystem::path& path) {
  return ParseManifestText(ReadFile(path), path.parent_path(), path.string());
}

inline std::string FormatManifest(const std::vector<ManifestEntry>& entries) {
  std::string out = "# activity_id keypoint_file...\n";
  for (const ManifestEntry& entry : entries) {
    out += entry.activity_id;
    for (const auto& f : entry.files) out += " " + f.generic_string();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ranking tables

inline std::string FormatRankingTable(const Ranking& ranking) {
  std::string out = "rank,score,sites\n";
  const auto ranks = ranking.rank_numbers();
  for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
    out += std::to_string(ranks[i]) + "," + FormatDouble(ranking.entries[i].score) + "," +
           ranking.entries[i].subset.label() + "\n";
  }
  return out;
}

// Reads `rank,score,sites` or `rank,sites`. A file whose ranks restart at 1
// is taken to hold one ranking per subset size. Rows are ordered by rank
// (within size group when per size).
inline Ranking ParseRankingText(std::string_view text, const std::string& source = "<ranking>") {
  struct Row {
    std::size_t rank;
    ScoredSubset entry;
  };
  std::vector<Row> rows;
  std::set<std::string> labels;
  const auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string_view line = Trim(lines[i]);
    if (line.empty() || line.front() == '#' || line.starts_with("rank")) continue;
    const auto fields = Split(line, ',');
    if (fields.size() != 2 && fields.size() != 3) {
      Fail(ErrorCode::kMalformedLine,
           internal::LineError(source, line_no, "expected rank,score,sites or rank,sites"));
    }
    double rank_value = 0.0;
    if (!ParseDouble(fields[0], &rank_value) || rank_value < 1.0 ||
        rank_value != std::floor(rank_value)) {
      Fail(ErrorCode::kMalformedLine,
           internal::LineError(source, line_no, "rank must be a positive integer"));
    }
    Row row{static_cast<std::size_t>(rank_value), {}};
    if (fields.size() == 3 && !ParseDouble(fields[1], &row.entry.score)) {
      Fail(ErrorCode::kMalformedLine, internal::LineError(source, line_no, "bad score"));
    }
    try {
      row.entry.subset = PlacementSubset::Parse(Trim(fields.back()));
    } catch (const Error& e) {
      Fail(ErrorCode::kMalformedLine, internal::LineError(source, line_no, e.what()));
    }
    if (!labels.insert(row.entry.subset.label()).second) {
      Fail(ErrorCode::kMalformedLine,
           internal::LineError(source, line_no,
                               "subset " + row.entry.subset.label() + " listed twice"));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) Fail(ErrorCode::kMalformedLine, source + ": no ranking rows");

  // Per-size when some rank value occurs in two size groups.
  std::map<std::size_t, std::set<std::size_t>> sizes_by_rank;
  for (const Row& row : rows) sizes_by_rank[row.rank].insert(row.entry.subset.size());
  bool per_size = false;
  for (const auto& [rank, sizes] : sizes_by_rank) per_size = per_size || sizes.size() > 1;

  std::stable_sort(rows.begin(), rows.end(), [per_size](const Row& a, const Row& b) {
    if (per_size && a.entry.subset.size() != b.entry.subset.size()) {
      return a.entry.subset.size() < b.entry.subset.size();
    }
    return a.rank < b.rank;
  });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const bool same_group = !per_size || rows[i].entry.subset.size() == rows[i - 1].entry.subset.size();
    if (same_group && rows[i].rank == rows[i - 1].rank) {
      Fail(ErrorCode::kTieDetected, source + ": rank " + std::to_string(rows[i].rank) +
                                        " given to both " + rows[i - 1].entry.subset.label() +
                                        " and " + rows[i].entry.subset.label());
    }
  }

  Ranking ranking;
  ranking.per_size = per_size;
  std::set<SiteId> roster;
  for (Row& row : rows) {
    for (SiteId s : row.entry.subset.sites()) roster.insert(s);
    ranking.entries.push_back(std::move(row.entry));
  }
  ranking.roster.assign(roster.begin(), roster.end());
  return ranking;
}

inline Ranking ParseRankingFile(const std::filesystem::path& path) {
  return ParseRankingText(ReadFile(path), path.string());
}

inline std::string FormatTauTable(const std::vector<TauReport>& reports) {
  std::string out = "scope,n,concordant,discordant,tau_numerator,tau_denominator,tau\n";
  for (const TauReport& r : reports) {
    out += r.scope + "," + std::to_string(r.n) + "," + std::to_string(r.concordant) + "," +
           std::to_string(r.discordant) + "," + std::to_string(r.numerator) + "," +
           std::to_string(r.denominator) + "," + FormatDouble(r.tau) + "\n";
  }
  return out;
}

}  // namespace osp

#endif  // OSP_IO_HPP_
