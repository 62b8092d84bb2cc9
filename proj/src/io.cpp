#include "tailrisk/io.hpp"

#include "tailrisk/error.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <system_error>

namespace tailrisk {

std::string format_double(double v) {
  require(std::isfinite(v), "format_double: value is not finite");
  if (v == 0.0) return "0";  // folds -0 so reruns never differ on the sign of zero
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general);
  require(res.ec == std::errc{}, "format_double: conversion failed");
  return std::string(buf, res.ptr);
}

double parse_cell(std::string_view cell, const std::string& file, std::size_t line,
                  std::size_t column) {
  const auto where = "column " + std::to_string(column);
  if (cell.empty()) throw ParseError(file, line, where + ": empty cell");
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (*first == '+') ++first;
  double v = 0.0;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw ParseError(file, line, where + ": not a number: '" + std::string(cell) + "'");
  }
  if (!std::isfinite(v)) throw ParseError(file, line, where + ": non-finite value");
  return v;
}

bool is_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9})
    if (s[i] < '0' || s[i] > '9') return false;
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  std::from_chars(s.data(), s.data() + 4, y);
  std::from_chars(s.data() + 5, s.data() + 7, m);
  std::from_chars(s.data() + 8, s.data() + 10, d);
  using namespace std::chrono;
  return year_month_day{year{y}, month{m}, day{d}}.ok();
}

std::vector<std::string> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (auto& c : out) {
    const auto b = c.find_first_not_of(" \t");
    const auto e = c.find_last_not_of(" \t");
    c = b == std::string::npos ? std::string{} : c.substr(b, e - b + 1);
  }
  return out;
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot open input file " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Config, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) fail(ErrorKind::Config, "write failed for " + path.string());
}

}  // namespace

DatedTable read_dated_csv(const std::filesystem::path& path) {
  const std::string file = path.string();
  auto in = open_input(path);
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (split_csv_line(line) != std::vector<std::string>{""}) {
      header = split_csv_line(line);
      break;
    }
  }
  if (header.empty()) throw ParseError(file, lineno, "missing header");
  if (header[0] != "date") throw ParseError(file, lineno, "first header cell must be 'date'");
  DatedTable t;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].empty()) throw ParseError(file, lineno, "empty column name at column " + std::to_string(c + 1));
    for (const auto& prev : t.names)
      if (prev == header[c]) throw ParseError(file, lineno, "duplicate column '" + header[c] + "'");
    t.names.push_back(header[c]);
  }
  const std::size_t width = header.size();
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    const auto cells = split_csv_line(line);
    if (cells.size() == 1 && cells[0].empty()) continue;
    if (cells.size() != width) {
      throw ParseError(file, lineno, "expected " + std::to_string(width) + " cells, found " +
                                         std::to_string(cells.size()));
    }
    if (!is_iso_date(cells[0])) throw ParseError(file, lineno, "column 1: invalid date '" + cells[0] + "'");
    if (!t.dates.empty()) {
      if (cells[0] == t.dates.back()) throw ParseError(file, lineno, "duplicate date " + cells[0]);
      if (cells[0] < t.dates.back()) throw ParseError(file, lineno, "date " + cells[0] + " is out of order");
    }
    std::vector<double> row;
    for (std::size_t c = 1; c < width; ++c) row.push_back(parse_cell(cells[c], file, lineno, c + 1));
    t.dates.push_back(cells[0]);
    rows.push_back(std::move(row));
  }
  t.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(t.names.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) t.values(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  return t;
}

void write_dated_csv(const std::filesystem::path& path, const DatedTable& table) {
  auto out = open_output(path);
  out << "date";
  for (const auto& n : table.names) out << ',' << n;
  out << '\n';
  for (Index r = 0; r < table.values.rows(); ++r) {
    out << table.dates[static_cast<std::size_t>(r)];
    for (Index c = 0; c < table.values.cols(); ++c) out << ',' << format_double(table.values(r, c));
    out << '\n';
  }
  finish(out, path);
}

PanelData load_panel(const std::filesystem::path& returns_path, const std::filesystem::path& state_path) {
  const DatedTable r = read_dated_csv(returns_path);
  if (r.names.size() < 2) {
    throw ParseError(returns_path.string(), 1, "need at least two asset columns");
  }
  DatedTable s;
  if (!state_path.empty()) s = read_dated_csv(state_path);

  std::vector<std::size_t> ri;
  std::vector<std::size_t> si;
  if (state_path.empty()) {
    for (std::size_t k = 0; k < r.dates.size(); ++k) ri.push_back(k);
  } else {
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < r.dates.size() && b < s.dates.size()) {
      if (r.dates[a] < s.dates[b]) {
        ++a;
      } else if (s.dates[b] < r.dates[a]) {
        ++b;
      } else {
        ri.push_back(a++);
        si.push_back(b++);
      }
    }
  }
  const auto t = static_cast<Index>(ri.size());
  Matrix returns(static_cast<Index>(r.names.size()), t);
  Matrix state(static_cast<Index>(s.names.size()), t);
  std::vector<std::string> dates;
  for (Index k = 0; k < t; ++k) {
    returns.col(k) = r.values.row(static_cast<Index>(ri[static_cast<std::size_t>(k)])).transpose();
    if (!si.empty()) state.col(k) = s.values.row(static_cast<Index>(si[static_cast<std::size_t>(k)])).transpose();
    dates.push_back(r.dates[ri[static_cast<std::size_t>(k)]]);
  }
  try {
    return PanelData(r.names, std::move(returns), s.names, std::move(state), std::move(dates));
  } catch (const Error& e) {
    throw ParseError(returns_path.string(), 0, std::string("aligned panel is invalid: ") + e.what());
  }
}

void write_labeled_matrix(const std::filesystem::path& path, const std::vector<std::string>& ids,
                          const Matrix& m) {
  require(m.rows() == m.cols() && static_cast<Index>(ids.size()) == m.rows(),
          "write_labeled_matrix: ids do not match the matrix");
  auto out = open_output(path);
  for (const auto& id : ids) out << ',' << id;
  out << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    out << ids[static_cast<std::size_t>(i)];
    for (Index j = 0; j < m.cols(); ++j) out << ',' << format_double(m(i, j));
    out << '\n';
  }
  finish(out, path);
}

LabeledMatrix read_labeled_matrix(const std::filesystem::path& path) {
  const std::string file = path.string();
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(file, 1, "missing header");
  const auto header = split_csv_line(line);
  if (header.empty() || !header[0].empty()) throw ParseError(file, 1, "first header cell must be empty");
  LabeledMatrix lm;
  lm.ids.assign(header.begin() + 1, header.end());
  const auto n = static_cast<Index>(lm.ids.size());
  lm.values.resize(n, n);
  std::size_t lineno = 1;
  for (Index i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw ParseError(file, lineno + 1, "missing row");
    ++lineno;
    const auto cells = split_csv_line(line);
    if (static_cast<Index>(cells.size()) != n + 1) throw ParseError(file, lineno, "ragged row");
    if (cells[0] != lm.ids[static_cast<std::size_t>(i)]) throw ParseError(file, lineno, "row label does not match header");
    for (Index j = 0; j < n; ++j)
      lm.values(i, j) = parse_cell(cells[static_cast<std::size_t>(j + 1)], file, lineno, static_cast<std::size_t>(j + 2));
  }
  return lm;
}

void write_plain_matrix(const std::filesystem::path& path, const std::string& column_prefix,
                        const Matrix& m) {
  auto out = open_output(path);
  for (Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << column_prefix << (j + 1);
  out << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
  finish(out, path);
}

}  // namespace tailrisk
