#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace litstyle {

// Shortest representation that round-trips, independent of the C locale.
std::string format_double(double value);

// Fixed number of decimals, also locale-independent (used by the SVG writer).
std::string format_fixed(double value, int decimals);

double parse_double(std::string_view text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column; throws Errc::parse when absent.
  std::size_t column(std::string_view name) const;
};

// RFC 4180 subset: comma separated, double-quoted fields may contain commas,
// quotes ("") and newlines. The first record is the header.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  CsvWriter& field(std::string_view text);
  CsvWriter& field(double value);
  CsvWriter& field(std::optional<double> value);  // empty when nullopt
  CsvWriter& field(long long value);
  CsvWriter& field(int value) { return field(static_cast<long long>(value)); }
  CsvWriter& field(std::size_t value) {
    return field(static_cast<long long>(value));
  }
  void end_row();

  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
  bool first_ = true;
};

}  // namespace litstyle
