// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "egogen/ingest/annotation.hpp"

namespace egogen::ingest {

struct ParseResult {
  std::vector<ActionAnnotation> annotations;
  std::size_t skipped = 0;
  /// One line per skipped record: "<record locator>: <reason>".
  std::vector<std::string> skip_reasons;
};

/// Reads a dataset's annotation file into the common schema.
///
///   EGTEA  - action_labels.csv (';' or ',' separated, header row):
///            Video Session, Starting Time (ms), Ending Time (ms), Action Label, ...
///   EK100  - EPIC_100_*.csv: video_id, start_timestamp, stop_timestamp
///            (HH:MM:SS.ff), narration, ...
///   Ego4D  - FHO JSON: videos[].annotated_intervals[].narrated_actions[] with
///            start_sec, end_sec, narration_text and critical_frames
///            {pre_frame, pnr_frame, post_frame} (frame numbers at videos[].fps,
///            default 30).
///   Custom - JSON Lines: {video_id, action_text, t_start, t_end,
///            keyframes?: {pre, pnr, post}}.
///
/// Malformed records are skipped and counted; SchemaMismatch when nothing parses.
ParseResult parse_annotations(const std::filesystem::path& source, DatasetTag tag);
ParseResult parse_annotations_text(const std::string& text, DatasetTag tag);

/// "HH:MM:SS.fff" (or plain seconds) to seconds.
double parse_clock(const std::string& text);

}  // namespace egogen::ingest
