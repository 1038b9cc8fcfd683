#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

namespace pinnlab::csv {

/// Parsed CSV file: header row and raw cells.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

class Writer {
 public:
  Writer(const std::filesystem::path& path, const std::vector<std::string>& header);

  Writer& cell(double v);
  Writer& cell(long long v);
  Writer& cell(const std::string& v);
  void end_row();

 private:
  std::filesystem::path path_;
  std::string buffer_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
  std::unique_ptr<std::ofstream> out_;
};

Table read(const std::filesystem::path& path);

}  // namespace pinnlab::csv
