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

// Command-line surface: validate, rank, compare, synth, report.
//
// Exit status: 0 success, 1 input error, 2 computation error.

#ifndef OSP_CLI_HPP_
#define OSP_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "osp/error.hpp"
#include "osp/io.hpp"
#include "osp/pipeline.hpp"

namespace osp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitComputation = 2;

namespace internal {

// Applies `key = value` lines to options of `command` that were not given on
// the command line.
inline void ApplyConfigFile(CLI::App& command, const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  const auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = Trim(lines[i]);
    if (line.empty() || line.front() == '#' || line.front() == ';' || line.front() == '[') {
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      Fail(ErrorCode::kMalformedLine,
           path.string() + ":" + std::to_string(i + 1) + ": expected key = value");
    }
    const std::string key(Trim(line.substr(0, eq)));
    std::string value(Trim(line.substr(eq + 1)));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    CLI::Option* option = nullptr;
    try {
      option = command.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      Fail(ErrorCode::kMalformedLine,
           path.string() + ":" + std::to_string(i + 1) + ": unknown key '" + key + "'");
    }
    if (key == "config") continue;
    if (option->count() > 0) continue;
    option->add_result(value);
    option->run_callback();
  }
}

inline int ExitCodeFor(const Error& e) {
  return IsComputationError(e.code()) ? kExitComputation : kExitInput;
}

}  // namespace internal

inline int RunCli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recommends on-body sensor placements from 2D pose keypoints.", "osp"};
  app.require_subcommand(1);

  // validate
  std::vector<std::string> validate_files;
  auto* validate = app.add_subcommand("validate", "Schema-check keypoint files");
  validate->add_option("files", validate_files, "Keypoint files")->required();

  // rank
  RunConfig config;
  std::string manifest;
  std::string rank_output;
  std::string rank_report;
  std::string config_file;
  std::string roster_text = JoinSites(config.roster, ',');
  std::string sizes_text = config.SizesText();
  std::string truncate_text = "first";
  bool allow_head = false;
  auto* rank = app.add_subcommand("rank", "Rank placement subsets of a manifest");
  rank->add_option("--manifest,-m", manifest, "Activity manifest")->required();
  rank->add_option("--output,-o", rank_output, "Ranking table (rank,score,sites)");
  rank->add_option("--report", rank_report, "Structured JSON report (default: <output>.json)");
  rank->add_option("--config", config_file, "key = value file supplying defaults");
  rank->add_option("--roster", roster_text, "Comma-separated placement sites");
  rank->add_option("--length", config.length, "Frames per activity");
  rank->add_option("--rate", config.target_rate, "Target sample rate in Hz");
  rank->add_option("--threshold", config.confidence_threshold, "Keypoint confidence threshold");
  rank->add_option("--max-gap", config.max_gap, "Longest repairable gap in frames");
  rank->add_option("--sizes", sizes_text, "Subset sizes, e.g. 1,2,3,4 or all");
  rank->add_flag("--cross-size", config.cross_size, "Rank all sizes in one list");
  rank->add_option("--truncate", truncate_text, "first | uniform");
  rank->add_flag("--multi-window", config.multi_window, "Average D_k over disjoint windows");
  rank->add_flag("--allow-head", allow_head, "Allow HE in the roster");
  rank->add_option("--threads", config.threads, "Worker threads for scoring");
  rank->add_option("--seed", config.seed, "Recorded in the report");

  // compare
  std::string compare_a;
  std::string compare_b;
  std::string scope_text = "per-size";
  std::size_t top_k = 0;
  std::string compare_output;
  std::string compare_report;
  auto* compare = app.add_subcommand("compare", "Kendall's tau between two rankings");
  compare->add_option("first", compare_a, "Ranking table")->required();
  compare->add_option("second", compare_b, "Ranking table")->required();
  compare->add_option("--scope", scope_text, "all | per-size | size:N");
  compare->add_option("--top-k", top_k, "Only the first k items of the first ranking");
  compare->add_option("--output,-o", compare_output, "Tau table");
  compare->add_option("--report", compare_report, "Structured JSON report");

  // synth
  SynthOptions synth_options;
  std::string synth_dir;
  std::string discriminative_text = "LW";
  std::string synth_roster_text = JoinSites(synth_options.motion.roster, ',');
  auto* synth = app.add_subcommand("synth", "Emit a synthetic keypoint corpus");
  synth->add_option("--out-dir", synth_dir, "Output directory")->required();
  synth->add_option("--activities", synth_options.activities, "Number of activities");
  synth->add_option("--discriminative", discriminative_text, "Comma-separated moving sites");
  synth->add_option("--roster", synth_roster_text, "Comma-separated generated sites");
  synth->add_option("--noise", synth_options.motion.noise_sigma, "Per-coordinate noise sigma");
  synth->add_option("--amplitude", synth_options.motion.amplitude, "Motion radius");
  synth->add_option("--length", synth_options.motion.length, "Frames per activity");
  synth->add_option("--rate", synth_options.motion.sample_rate, "Sample rate in Hz");
  synth->add_option("--seed", synth_options.seed, "Noise seed");

  // report
  std::string report_file;
  auto* report = app.add_subcommand("report", "Render a JSON report as text");
  report->add_option("file", report_file, "Report from rank, compare or synth")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "osp: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*validate) {
      int status = kExitOk;
      for (const auto& file : validate_files) {
        try {
          KeypointFile parsed = ParseKeypointFile(file);
          out << file << ": " << parsed.frames.size() << " frames";
          if (parsed.frames.size() >= 2) {
            const double span = parsed.frames.back().t - parsed.frames.front().t;
            out << ", " << FormatDouble(static_cast<double>(parsed.frames.size() - 1) / span)
                << " Hz";
          }
          out << ", " << parsed.report.out_of_range << " out-of-range coordinate(s)\n";
          for (const auto& note : parsed.report.notes) out << "  note: " << note << "\n";
        } catch (const Error& e) {
          err << e.what() << "\n";
          status = kExitInput;
        }
      }
      return status;
    }

    if (*rank) {
      if (!config_file.empty()) internal::ApplyConfigFile(*rank, config_file);
      config.roster = ParseSiteList(roster_text, ',');
      config.sizes = ParseSizes(sizes_text);
      config.exclude_head = !allow_head;
      if (truncate_text == "first") {
        config.truncate = TruncateMode::kFirst;
      } else if (truncate_text == "uniform") {
        config.truncate = TruncateMode::kUniform;
      } else {
        Fail(ErrorCode::kInvalidArgument, "--truncate must be first or uniform");
      }
      RankRun run;
      try {
        run = RunRank(config, manifest);
      } catch (const PipelineError& e) {
        for (const auto& line : e.diagnostics()) err << "osp: " << line << "\n";
        return internal::ExitCodeFor(e);
      }
      if (rank_output.empty()) {
        out << run.table;
      } else {
        if (rank_report.empty()) {
          rank_report = std::filesystem::path(rank_output).replace_extension(".json").string();
        }
        WriteFilesAtomically({{rank_output, run.table}, {rank_report, run.report}});
        out << "wrote " << run.ranking.entries.size() << " ranked subsets to " << rank_output
            << " (fingerprint " << run.ranking.fingerprint << ")\n";
      }
      return kExitOk;
    }

    if (*compare) {
      CompareOptions options = ParseScope(scope_text);
      if (top_k > 0) options.top_k = top_k;
      CompareRun run = RunCompare(compare_a, compare_b, options);
      std::vector<std::pair<std::filesystem::path, std::string>> files;
      if (!compare_output.empty()) files.emplace_back(compare_output, run.table);
      if (!compare_report.empty()) files.emplace_back(compare_report, run.report);
      WriteFilesAtomically(files);
      for (const TauReport& r : run.reports) {
        out << r.scope << ": tau = " << FormatDouble(r.tau) << " (" << r.numerator << "/"
            << r.denominator << ", n = " << r.n << ")\n";
      }
      return kExitOk;
    }

    if (*synth) {
      synth_options.discriminative = ParseSiteList(discriminative_text, ',');
      synth_options.motion.roster = ParseSiteList(synth_roster_text, ',');
      std::filesystem::create_directories(synth_dir);
      SynthRun run = BuildSynthCorpus(synth_options, synth_dir);
      WriteFilesAtomically(run.files);
      out << "wrote " << synth_options.activities << " activities and " << run.manifest.string()
          << "\n";
      return kExitOk;
    }

    if (*report) {
      out << RenderReport(ReadFile(report_file));
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "osp: " << e.what() << "\n";
    return internal::ExitCodeFor(e);
  } catch (const std::exception& e) {
    err << "osp: " << e.what() << "\n";
    return kExitComputation;
  }
  return kExitInput;
}

}  // namespace osp

#endif  // OSP_CLI_HPP_
