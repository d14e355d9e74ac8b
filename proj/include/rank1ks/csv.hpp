#pragma once

// Minimal CSV table: a header line, then rows. Floats are written with 17
// significant digits so that reruns compare byte for byte.

#include <cstdint>
#include <iomanip>
#include <limits>
#include <locale>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "rank1ks/errors.hpp"

namespace rank1ks {

inline std::string format_double(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << x;
  return os.str();
}

class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  const std::vector<std::string>& header() const { return header_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  /// Appends a row; numbers are formatted, strings are taken verbatim.
  template <class... Ts>
  void add(const Ts&... cells) {
    std::vector<std::string> row;
    (row.push_back(cell(cells)), ...);
    if (row.size() != header_.size()) throw InvalidArgument("CSV row width does not match header");
    rows_.push_back(std::move(row));
  }

  void write(std::ostream& os) const {
    write_line(os, header_);
    for (const auto& r : rows_) write_line(os, r);
  }

  std::string str() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }

 private:
  template <class T>
  static std::string cell(const T& x) {
    if constexpr (std::is_same_v<T, bool>) {
      return x ? "1" : "0";
    } else if constexpr (std::is_floating_point_v<T>) {
      return format_double(static_cast<double>(x));
    } else if constexpr (std::is_integral_v<T>) {
      return std::to_string(x);
    } else {
      return std::string(x);
    }
  }

  static void write_line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) os << ',';
      os << cells[i];
    }
    os << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace rank1ks
