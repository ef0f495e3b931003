#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vortexline/format.hpp"
#include "vortexline/state.hpp"

namespace vortexline {

inline constexpr const char* kVersionTag = "vortexline 0.1.0";

// Result of one scenario run: a column-labelled numeric table, the metadata
// needed to reproduce the run, and optional state snapshots.
struct RunRecord {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  // written verbatim to metadata.txt; '#'-prefixed keys become comments
  std::vector<std::pair<std::string, std::string>> metadata;

  struct Snapshot {
    long step = 0;
    FilamentState state;
  };
  std::vector<Snapshot> snapshots;
};

inline std::string serialize_series_csv(const RunRecord& record) {
  std::ostringstream out;
  for (std::size_t i = 0; i < record.columns.size(); ++i) {
    if (i) out << ',';
    out << record.columns[i];
  }
  out << '\n';
  for (const auto& row : record.rows) {
    if (row.size() != record.columns.size())
      throw std::runtime_error("serialize_series_csv: ragged row");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
  return out.str();
}

inline std::string serialize_metadata(const RunRecord& record) {
  // '#'-prefixed keys are comments to the config loader, so the file is
  // itself a loadable config reproducing the run
  std::ostringstream out;
  for (const auto& [key, value] : record.metadata)
    out << key << " = " << value << '\n';
  return out.str();
}

// Snapshot file: grid and time in comment headers, then one
// "z,psi_re,psi_im" row per grid point at full round-trip precision.
inline std::string serialize_snapshot(const FilamentState& s) {
  std::ostringstream out;
  out << "# grid.length = " << format_double(s.grid.length) << '\n';
  out << "# grid.count = " << s.grid.count << '\n';
  out << "# t = " << format_double(s.time) << '\n';
  out << "z,psi_re,psi_im\n";
  for (int j = 0; j < s.grid.count; ++j)
    out << format_double(s.grid.z(j)) << ',' << format_double(s.psi[j].real())
        << ',' << format_double(s.psi[j].imag()) << '\n';
  return out.str();
}

inline FilamentState parse_snapshot(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  double length = 0.0, t = 0.0;
  long count = 0;
  std::vector<cdouble> psi;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream h(line.substr(1));
      std::string key, eq, value;
      h >> key >> eq >> value;
      if (key == "grid.length") length = parse_double_exact(value, "snapshot grid.length");
      else if (key == "grid.count") count = std::stol(value);
      else if (key == "t") t = parse_double_exact(value, "snapshot t");
      continue;
    }
    if (!header_seen) {  // column header row
      header_seen = true;
      continue;
    }
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos
                                                   : line.find(',', c1 + 1);
    if (c2 == std::string::npos)
      throw std::runtime_error("snapshot: malformed row '" + line + "'");
    const double re =
        parse_double_exact(line.substr(c1 + 1, c2 - c1 - 1), "snapshot psi_re");
    const double im = parse_double_exact(line.substr(c2 + 1), "snapshot psi_im");
    psi.emplace_back(re, im);
  }
  if (count == 0 || static_cast<long>(psi.size()) != count)
    throw std::runtime_error("snapshot: row count " +
                             std::to_string(psi.size()) +
                             " does not match declared grid.count " +
                             std::to_string(count));
  return FilamentState(ZGrid(length, static_cast<int>(count)), std::move(psi), t);
}

namespace detail {

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace detail

inline FilamentState read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open snapshot '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_snapshot(buf.str());
}

// Write series.csv, metadata.txt and any snapshots under out_dir; returns
// the list of files written.
inline std::vector<std::filesystem::path> write_outputs(
    const RunRecord& record, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory '" +
                             out_dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  const auto series = out_dir / "series.csv";
  detail::write_file(series, serialize_series_csv(record));
  written.push_back(series);
  const auto meta = out_dir / "metadata.txt";
  detail::write_file(meta, serialize_metadata(record));
  written.push_back(meta);
  for (const auto& snap : record.snapshots) {
    char name[32];
    std::snprintf(name, sizeof(name), "snapshot_%08ld.csv", snap.step);
    const auto path = out_dir / name;
    detail::write_file(path, serialize_snapshot(snap.state));
    written.push_back(path);
  }
  return written;
}

}  // namespace vortexline
