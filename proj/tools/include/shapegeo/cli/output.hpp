#pragma once

// Result tables and the files written for them: CSV, hand-made SVG plots,
// atomic file replacement.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace shapegeo::cli {

class ResultTable {
 public:
  ResultTable() = default;
  explicit ResultTable(std::vector<std::string> columns, std::string note = {});

  /// Throws std::invalid_argument on a width mismatch or a non-finite entry.
  void add_row(std::vector<double> row);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }
  const std::string& note() const noexcept { return note_; }
  /// Throws std::invalid_argument for an unknown name.
  std::size_t column(const std::string& name) const;
  std::vector<double> column_values(const std::string& name) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
  std::string note_;
};

struct PlotSpec {
  std::string title;
  std::string x;               // column on the horizontal axis
  std::vector<std::string> y;  // one polyline per column
  std::string group;           // optional: split each series by this column's value
  std::string x_label, y_label;
  bool log_y = false;          // non-positive values are dropped
  bool markers = false;
  std::vector<std::pair<double, std::string>> hlines;  // labelled reference levels
};

/// %.17g, with "-0" normalised to "0".
std::string format_number(double v);

/// Header row then one line per row, comma separated, LF endings.
std::string format_csv(const ResultTable& table);

/// Line plot as a standalone SVG document. Throws std::invalid_argument when
/// a named column is missing. An empty table gives the axes alone.
std::string render_svg(const ResultTable& table, const PlotSpec& spec);

/// Writes to a sibling temporary file and renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace shapegeo::cli
