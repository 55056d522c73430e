#ifndef NEEP_CSV_HPP
#define NEEP_CSV_HPP

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "neep/dataset.hpp"
#include "neep/random.hpp"

namespace neep {

struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CsvDataset {
  Dataset data;
  std::vector<std::string> column_names;  // empty when the file has no header
  std::size_t rejected_rows = 0;
  std::size_t target_column = 0;
};

namespace detail {

inline std::vector<std::string> split_csv_line(std::string const& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' '))
      cell.pop_back();
    std::size_t start = cell.find_first_not_of(' ');
    cells.push_back(start == std::string::npos ? "" : cell.substr(start));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

inline bool parse_number(std::string const& text, double& out) {
  if (text.empty()) return false;
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size() && std::isfinite(out);
}

}  // namespace detail

// Comma-separated numeric data with an optional single header row. Rows with
// non-numeric cells are rejected and counted. The target column is selected
// by header name or by 0-based index; the remaining columns are features.
inline CsvDataset load_csv_dataset(std::string const& path,
                                   std::string const& target_column) {
  std::ifstream file(path);
  if (!file) throw CsvError("cannot open data file: " + path);

  std::vector<std::vector<double>> rows;
  std::vector<std::string> header;
  std::size_t rejected = 0;
  std::size_t width = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = detail::split_csv_line(line);
    std::vector<double> row(cells.size());
    bool numeric = true;
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (!detail::parse_number(cells[c], row[c])) {
        numeric = false;
        break;
      }
    if (!numeric) {
      if (line_no == 1) {
        header = cells;  // single header row
      } else {
        ++rejected;
      }
      continue;
    }
    if (width == 0) width = row.size();
    if (row.size() != width) {
      ++rejected;
      continue;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw CsvError("no numeric data rows in " + path +
                   (rejected > 0 ? " (" + std::to_string(rejected) + " rows rejected)"
                                 : ""));
  if (width < 2)
    throw CsvError(path + ": need at least one feature column plus the target");

  std::size_t target = width;
  if (!header.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (header[c] == target_column) target = c;
  }
  if (target == width) {
    char* end = nullptr;
    long idx = std::strtol(target_column.c_str(), &end, 10);
    if (end == target_column.c_str() + target_column.size()) {
      if (idx < 0) idx += static_cast<long>(width);  // -1 selects the last column
      if (idx >= 0 && static_cast<std::size_t>(idx) < width)
        target = static_cast<std::size_t>(idx);
    }
    if (target == width)
      throw CsvError("no numeric target column '" + target_column + "' in " + path);
  }

  CsvDataset out;
  out.column_names = header;
  out.rejected_rows = rejected;
  out.target_column = target;
  out.data.n_vars = width - 1;
  out.data.inputs.reserve(rows.size() * (width - 1));
  out.data.targets.reserve(rows.size());
  for (auto const& row : rows) {
    for (std::size_t c = 0; c < width; ++c)
      if (c != target) out.data.inputs.push_back(row[c]);
    out.data.targets.push_back(row[target]);
  }
  out.data.validate();
  return out;
}

// Deterministic seeded split; train gets round(fraction * n) shuffled rows.
inline std::pair<Dataset, Dataset> split_train_test(Dataset const& all,
                                                    double train_fraction,
                                                    std::uint64_t seed) {
  all.validate();
  std::size_t n = all.n_points();
  auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train >= n)
    throw std::invalid_argument("split leaves an empty train or test set");

  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i)
    std::swap(idx[i - 1], idx[rng.below(i)]);

  Dataset train;
  Dataset test;
  train.n_vars = test.n_vars = all.n_vars;
  for (std::size_t i = 0; i < n; ++i) {
    Dataset& dst = i < n_train ? train : test;
    dst.push_row(all.point(idx[i]), all.targets[idx[i]]);
  }
  return {std::move(train), std::move(test)};
}

}  // namespace neep

#endif  // NEEP_CSV_HPP
