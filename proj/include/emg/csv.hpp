#pragma once

// Recording CSV format:
//   - optional comment lines `# key=value` (sample_rate_hz is required,
//     gesture is optional), one row per sample instant, one column per
//     channel, decimal point, UTF-8, LF or CRLF.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "emg/types.hpp"

namespace emg {

struct LoadedRecording {
  Recording recording;
  std::optional<Gesture> label;
  std::map<std::string, std::string> metadata;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline double parse_cell(std::string_view cell, std::size_t line_no,
                         std::size_t column) {
  const std::string_view t = trim(cell);
  double value = 0.0;
  const auto* begin = t.data();
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || t.empty())
    throw Error("non-numeric cell at line " + std::to_string(line_no) +
                ", column " + std::to_string(column) + ": '" +
                std::string(cell) + "'");
  return value;
}

}  // namespace detail

inline LoadedRecording load_recording(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  // Strip a UTF-8 BOM if present.
  if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0)
    text.erase(0, 3);

  LoadedRecording out;
  std::vector<std::vector<double>>& channels = out.recording.channels;
  std::size_t column_count = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    line = detail::trim(line);
    if (line.empty()) {
      if (pos > text.size()) break;
      continue;
    }
    if (line.front() == '#') {
      std::string_view body = detail::trim(line.substr(1));
      const std::size_t eq = body.find('=');
      if (eq == std::string_view::npos)
        throw Error("malformed header at line " + std::to_string(line_no) +
                    ": expected '# key=value', got '" + std::string(line) + "'");
      std::string key(detail::trim(body.substr(0, eq)));
      std::string value(detail::trim(body.substr(eq + 1)));
      if (key.empty())
        throw Error("malformed header at line " + std::to_string(line_no) +
                    ": empty key");
      out.metadata[key] = value;
      continue;
    }
    // Data row: split on commas.
    std::vector<double> cells;
    std::size_t cell_begin = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        cells.push_back(detail::parse_cell(line.substr(cell_begin, i - cell_begin),
                                           line_no, cells.size() + 1));
        cell_begin = i + 1;
      }
    }
    if (column_count == 0) {
      column_count = cells.size();
      channels.resize(column_count);
    } else if (cells.size() != column_count) {
      throw Error("row at line " + std::to_string(line_no) + " has " +
                  std::to_string(cells.size()) + " cells, expected " +
                  std::to_string(column_count));
    }
    for (std::size_t c = 0; c < column_count; ++c)
      channels[c].push_back(cells[c]);
  }

  if (column_count == 0) throw Error("no samples in " + path.string());

  auto rate_it = out.metadata.find("sample_rate_hz");
  if (rate_it == out.metadata.end())
    throw Error("malformed header: missing required 'sample_rate_hz' in " +
                path.string());
  try {
    out.recording.sample_rate_hz = std::stod(rate_it->second);
  } catch (const std::exception&) {
    throw Error("malformed header: sample_rate_hz is not a number: '" +
                rate_it->second + "'");
  }
  if (out.recording.sample_rate_hz <= 0.0)
    throw Error("malformed header: sample_rate_hz must be positive");

  auto gesture_it = out.metadata.find("gesture");
  if (gesture_it != out.metadata.end()) {
    auto g = gesture_from_string(gesture_it->second);
    if (!g)
      throw Error("unknown gesture in header: '" + gesture_it->second + "'");
    out.label = *g;
  }

  validate(out.recording);
  return out;
}

inline void save_recording(const std::filesystem::path& path,
                           const Recording& rec,
                           std::optional<Gesture> label = std::nullopt) {
  validate(rec);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write file: " + path.string());
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", rec.sample_rate_hz);
  os << "# sample_rate_hz=" << buf << "\n";
  if (label) os << "# gesture=" << to_string(*label) << "\n";
  const std::size_t n = rec.sample_count();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < rec.channel_count(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.12g", rec.channels[c][i]);
      if (c) os << ',';
      os << buf;
    }
    os << '\n';
  }
  if (!os) throw Error("write failed: " + path.string());
}

}  // namespace emg
