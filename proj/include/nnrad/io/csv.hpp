#pragma once

/// Comma-separated output with shortest round-trip number formatting, and a
/// small reader for numeric tables produced by it.

#include <charconv>
#include <cstddef>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "nnrad/analysis.hpp"
#include "nnrad/errors.hpp"
#include "nnrad/trajectory.hpp"

namespace nnrad::io {

/// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

inline void write_row(std::ostream& os, const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) os << ',';
    os << format_double(row[i]);
  }
  os << '\n';
}

inline void write_header(std::ostream& os, const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i > 0) os << ',';
    os << cols[i];
  }
  os << '\n';
}

inline std::vector<std::string> trajectory_columns(std::size_t n) {
  std::vector<std::string> cols{"t"};
  for (const char* prefix : {"x_", "v_", "a_"})
    for (std::size_t i = 0; i < n; ++i) cols.push_back(prefix + std::to_string(i));
  return cols;
}

/// Columns t, x_0..x_{n-1}, v_0.., a_0..
inline void write_trajectory(std::ostream& os, const Trajectory& traj) {
  const std::size_t n = traj.dim();
  write_header(os, trajectory_columns(n));
  std::vector<double> row;
  for (const State& s : traj.states) {
    row.clear();
    row.push_back(s.t);
    row.insert(row.end(), s.x.begin(), s.x.end());
    row.insert(row.end(), s.v.begin(), s.v.end());
    row.insert(row.end(), s.a.begin(), s.a.end());
    write_row(os, row);
  }
}

/// Columns speed, then one amplitude per probe, then error (empty on success).
inline void write_sweep(std::ostream& os, const std::vector<SweepRow>& rows,
                        const std::vector<Probe>& probes) {
  std::vector<std::string> cols{"speed"};
  for (const auto& p : probes) cols.push_back("A_" + p.label);
  bool any_error = false;
  for (const auto& r : rows) any_error = any_error || !r.ok();
  if (any_error) cols.emplace_back("error");
  write_header(os, cols);
  for (const auto& r : rows) {
    os << format_double(r.speed);
    for (std::size_t i = 0; i < probes.size(); ++i)
      os << ',' << (r.ok() ? format_double(r.amplitudes[i]) : std::string("nan"));
    if (any_error) {
      std::string msg = r.error;
      for (char& c : msg)
        if (c == ',' || c == '\n') c = ';';
      os << ',' << msg;
    }
    os << '\n';
  }
}

inline void write_spectrum(std::ostream& os, const Spectrum& s) {
  write_header(os, {"omega", "magnitude"});
  for (std::size_t k = 0; k < s.frequency.size(); ++k) write_row(os, {s.frequency[k], s.magnitude[k]});
}

/// Numeric table keyed by header name.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  ///< data[c][row]

  std::size_t rows() const noexcept { return data.empty() ? 0 : data.front().size(); }

  const std::vector<double>& column(std::string_view name) const {
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (columns[c] == name) return data[c];
    std::string known;
    for (const auto& c : columns) known += (known.empty() ? "" : ", ") + c;
    throw std::out_of_range("no column '" + std::string(name) + "'; available: " + known);
  }
};

namespace detail {
inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline double parse_number(std::string_view s, std::size_t line) {
  s = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::runtime_error("csv line " + std::to_string(line) + ": not a number: '" + std::string(s) + "'");
  return v;
}
}  // namespace detail

inline Table read_table(std::istream& is) {
  Table t;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("csv: missing header row");
  for (auto c : detail::split(line)) t.columns.emplace_back(detail::trim(c));
  t.data.resize(t.columns.size());
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split(line);
    if (fields.size() != t.columns.size())
      throw std::runtime_error("csv line " + std::to_string(lineno) + ": expected " +
                               std::to_string(t.columns.size()) + " fields");
    for (std::size_t c = 0; c < fields.size(); ++c)
      t.data[c].push_back(detail::parse_number(fields[c], lineno));
  }
  return t;
}

inline Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_table(in);
}

}  // namespace nnrad::io
