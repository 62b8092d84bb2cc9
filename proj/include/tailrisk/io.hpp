#pragma once

#include "tailrisk/linalg.hpp"
#include "tailrisk/tail_risk.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tailrisk {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// Parses a full cell as a finite double; throws ParseError with the
/// location on failure.
double parse_cell(std::string_view cell, const std::string& file, std::size_t line,
                  std::size_t column);

/// True for a valid calendar date written as YYYY-MM-DD.
bool is_iso_date(std::string_view s);

/// Dated numeric table: rows are dates, columns are named series.
struct DatedTable {
  std::vector<std::string> names;
  std::vector<std::string> dates;
  Matrix values;  // dates x names
};

/// Reads `date,<name1>,...` with strictly increasing ISO dates.
DatedTable read_dated_csv(const std::filesystem::path& path);
void write_dated_csv(const std::filesystem::path& path, const DatedTable& table);

/// Inner-joins returns and (optional, empty path) state on date.
PanelData load_panel(const std::filesystem::path& returns_path,
                     const std::filesystem::path& state_path = {});

/// Square labelled matrix: header `,id1,...` then one row per id.
void write_labeled_matrix(const std::filesystem::path& path, const std::vector<std::string>& ids,
                          const Matrix& m);

struct LabeledMatrix {
  std::vector<std::string> ids;
  Matrix values;
};
LabeledMatrix read_labeled_matrix(const std::filesystem::path& path);

/// Plain numeric matrix with generated column names and no row labels.
void write_plain_matrix(const std::filesystem::path& path, const std::string& column_prefix,
                        const Matrix& m);

/// Splits one CSV line on commas; quotes are not supported.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace tailrisk
