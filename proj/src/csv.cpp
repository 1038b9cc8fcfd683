#include "pinnlab/csv.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "pinnlab/checkpoint.hpp"
#include "pinnlab/errors.hpp"

namespace pinnlab::csv {

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw UsageError("no CSV column named '" + name + "'");
}

double Table::number(std::size_t row, const std::string& name) const {
  const std::string& s = rows.at(row).at(column(name));
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw UsageError("CSV cell '" + s + "' is not a number");
  return v;
}

Writer::Writer(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_ = std::make_unique<std::ofstream>(path);
  if (!*out_) throw UsageError("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) *out_ << (i ? "," : "") << header[i];
  *out_ << '\n';
}

Writer& Writer::cell(double v) { return cell(std::isnan(v) ? std::string("nan") : format_double(v)); }

Writer& Writer::cell(long long v) { return cell(std::to_string(v)); }

Writer& Writer::cell(const std::string& v) {
  if (in_row_ == columns_) throw UsageError("too many cells in CSV row for " + path_.string());
  if (in_row_ > 0) buffer_ += ',';
  buffer_ += v;
  ++in_row_;
  return *this;
}

void Writer::end_row() {
  if (in_row_ != columns_) throw UsageError("incomplete CSV row for " + path_.string());
  *out_ << buffer_ << '\n';
  buffer_.clear();
  in_row_ = 0;
  if (!*out_) throw UsageError("failed writing " + path_.string());
}

Table read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path.string());
  const auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw UsageError("empty CSV file " + path.string());
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.header.size()) throw UsageError("ragged CSV row in " + path.string());
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace pinnlab::csv
