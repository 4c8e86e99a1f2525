#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "evg/events.hpp"

namespace evg {

enum class InputFormat { csv, jsonl };

// Dyadic CSV with a required header naming `source`, `target`, `time` and
// optionally `duration`, in any column order. Fields may be double-quoted.
std::vector<RawRecord> read_csv_records(std::istream& in);

// One JSON object per line: {"source": [...], "target": [...], "t": num, "d": num}.
// Blank lines are skipped.
std::vector<RawRecord> read_jsonl_records(std::istream& in);

// Picks the format from `format` or else from the extension (.jsonl/.json
// select JSON-lines, anything else CSV).
EventSequence read_events(const std::filesystem::path& path, bool directed,
                          OverlapPolicy policy = OverlapPolicy::warn,
                          std::optional<InputFormat> format = std::nullopt);

// `source,target,time` rows, plus a duration column when any event has
// one. Requires a dyadic sequence.
void write_events_csv(std::ostream& out, const EventSequence& seq);
void write_events_jsonl(std::ostream& out, const EventSequence& seq);

// Splits one CSV line, honouring double quotes ("" escapes a quote).
std::vector<std::string> split_csv_line(const std::string& line);
// Quotes a field when it contains a comma, quote or surrounding spaces.
std::string csv_field(const std::string& value);

// Writes via a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

} // namespace evg
