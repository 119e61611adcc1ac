#include "scrnn/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

#include "scrnn/error.hpp"

namespace scrnn {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view cell, const std::string& source, std::size_t line,
                  std::size_t column) {
  cell = trim(cell);
  double value = 0.0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (cell.empty() || ec != std::errc() || ptr != last) {
    throw DataError(source + ": line " + std::to_string(line) + ", column " +
                    std::to_string(column) + ": cannot parse '" + std::string(cell) +
                    "' as a number");
  }
  return value;
}

}  // namespace

SkeletonSequence parse_csv(const std::string& text,
                           const std::optional<std::vector<int>>& joint_selection,
                           double frame_interval_ms, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::size_t width_line = 0;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::string_view rest(line);
    std::size_t column = 1;
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(parse_cell(rest.substr(0, comma), source, line_no, column));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
      ++column;
    }
    if (width == 0) {
      width = row.size();
      width_line = line_no;
      if (width % 3 != 0) {
        throw DataError(source + ": line " + std::to_string(line_no) + " has " +
                        std::to_string(width) + " columns, not a multiple of 3");
      }
    } else if (row.size() != width) {
      throw DataError(source + ": line " + std::to_string(line_no) + " has " +
                      std::to_string(row.size()) + " columns, line " +
                      std::to_string(width_line) + " has " + std::to_string(width));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError(source + ": no frames");

  const int source_joints = static_cast<int>(width / 3);
  if (!joint_selection) return SkeletonSequence(source_joints, std::move(rows), frame_interval_ms);

  const auto& sel = *joint_selection;
  for (std::size_t i = 0; i < sel.size(); ++i) {
    if (sel[i] < 1 || sel[i] > source_joints) {
      throw DataError(source + ": joint selection entry " + std::to_string(i + 1) + " (" +
                      std::to_string(sel[i]) + ") outside [1, " + std::to_string(source_joints) +
                      "]");
    }
  }
  std::vector<std::vector<double>> picked;
  picked.reserve(rows.size());
  for (const auto& row : rows) {
    std::vector<double> frame;
    frame.reserve(3 * sel.size());
    for (int k : sel)
      for (int c = 0; c < 3; ++c) frame.push_back(row[static_cast<std::size_t>(3 * (k - 1) + c)]);
    picked.push_back(std::move(frame));
  }
  return SkeletonSequence(static_cast<int>(sel.size()), std::move(picked), frame_interval_ms);
}

SkeletonSequence load_csv(const std::filesystem::path& path,
                          const std::optional<std::vector<int>>& joint_selection,
                          double frame_interval_ms) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), joint_selection, frame_interval_ms, path.string());
}

std::string format_csv(const SkeletonSequence& seq) {
  std::string out;
  char cell[64];
  for (const auto& frame : seq.frames()) {
    for (std::size_t i = 0; i < frame.size(); ++i) {
      if (i) out.push_back(',');
      const int n = std::snprintf(cell, sizeof cell, "%.17g", frame[i]);
      out.append(cell, static_cast<std::size_t>(n));
    }
    out.push_back('\n');
  }
  return out;
}

void save_csv(const std::filesystem::path& path, const SkeletonSequence& seq) {
  write_file_atomic(path, format_csv(seq));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw DataError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw DataError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace scrnn
