#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace prelat::cli {

/**
 * CSV emission, RFC 4180 flavored: CRLF record ends, quoting only where
 * needed. The first record is a comment row carrying the resolved config
 * hash, then the header row, then data. Doubles print with 17 significant
 * digits so equal runs produce equal bytes.
 */
class CsvBuilder {
 public:
  explicit CsvBuilder(std::uint64_t config_hash);

  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& fields);

  static std::string number(double v);
  static std::string integer(long long v);

  const std::string& text() const { return out_; }

 private:
  void record(const std::vector<std::string>& fields);
  std::string out_;
  std::size_t columns_ = 0;
  bool have_header_ = false;
};

// 16 hex digits, zero padded; the form used in the CSV comment row.
std::string hash_hex(std::uint64_t v);

struct ChartSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Minimal SVG 1.1 line chart: one polyline per series with point markers,
// optional horizontal rule (used for the continuum minimum), linear axes
// with value labels at the extremes.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<ChartSeries>& series,
                           const double* horizontal_rule = nullptr,
                           const std::string& rule_label = "");

}  // namespace prelat::cli
