#include "reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace prelat::cli {

namespace {

bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\r\n") != std::string::npos;
}

std::string quoted(const std::string& field) {
  if (!needs_quoting(field)) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string hex16(std::uint64_t v) {
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(v));
  return buffer;
}

}  // namespace

std::string hash_hex(std::uint64_t v) { return hex16(v); }

CsvBuilder::CsvBuilder(std::uint64_t config_hash) {
  out_ = "# config-hash=" + hex16(config_hash) + "\r\n";
}

void CsvBuilder::header(const std::vector<std::string>& names) {
  if (have_header_) throw std::logic_error("CsvBuilder: header already written");
  have_header_ = true;
  columns_ = names.size();
  record(names);
}

void CsvBuilder::row(const std::vector<std::string>& fields) {
  if (!have_header_) throw std::logic_error("CsvBuilder: header must come first");
  if (fields.size() != columns_) throw std::logic_error("CsvBuilder: column count mismatch");
  record(fields);
}

void CsvBuilder::record(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ += ',';
    out_ += quoted(fields[i]);
  }
  out_ += "\r\n";
}

std::string CsvBuilder::number(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

std::string CsvBuilder::integer(long long v) { return std::to_string(v); }

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<ChartSeries>& series,
                           const double* horizontal_rule, const std::string& rule_label) {
  const double width = 640, height = 400;
  const double left = 70, right = 20, top = 40, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (horizontal_rule) {
    ymin = std::min(ymin, *horizontal_rule);
    ymax = std::max(ymax, *horizontal_rule);
  }
  if (!(xmin < xmax)) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (!(ymin < ymax)) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  auto sx = [&](double x) { return left + plot_w * (x - xmin) / (xmax - xmin); };
  auto sy = [&](double y) { return top + plot_h * (1.0 - (y - ymin) / (ymax - ymin)); };
  auto num = [](double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.6g", v);
    return std::string(buffer);
  };

  static const char* colors[] = {"#1f6f8b", "#c05746", "#5a7d2a", "#7a4fa3"};
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(width) +
         "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) +
         "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(width / 2) + "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         title + "</text>\n";
  // Axes.
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" +
         num(top + plot_h) + "\" stroke=\"#333\"/>\n";
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + plot_h) + "\" x2=\"" +
         num(left + plot_w) + "\" y2=\"" + num(top + plot_h) + "\" stroke=\"#333\"/>\n";
  svg += "<text x=\"" + num(left + plot_w / 2) + "\" y=\"" + num(height - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + x_label +
         "</text>\n";
  svg += "<text x=\"16\" y=\"" + num(top + plot_h / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " +
         num(top + plot_h / 2) + ")\">" + y_label + "</text>\n";
  // Extreme tick labels.
  svg += "<text x=\"" + num(left) + "\" y=\"" + num(top + plot_h + 16) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + num(xmin) +
         "</text>\n";
  svg += "<text x=\"" + num(left + plot_w) + "\" y=\"" + num(top + plot_h + 16) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + num(xmax) +
         "</text>\n";
  svg += "<text x=\"" + num(left - 6) + "\" y=\"" + num(sy(ymin) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + num(ymin) +
         "</text>\n";
  svg += "<text x=\"" + num(left - 6) + "\" y=\"" + num(sy(ymax) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + num(ymax) +
         "</text>\n";

  if (horizontal_rule) {
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(sy(*horizontal_rule)) + "\" x2=\"" +
           num(left + plot_w) + "\" y2=\"" + num(sy(*horizontal_rule)) +
           "\" stroke=\"#888\" stroke-dasharray=\"6 4\"/>\n";
    if (!rule_label.empty())
      svg += "<text x=\"" + num(left + plot_w - 4) + "\" y=\"" + num(sy(*horizontal_rule) - 6) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#666\">" +
             rule_label + "</text>\n";
  }

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = colors[k % 4];
    std::string pts;
    for (const auto& [x, y] : series[k].points) pts += num(sx(x)) + "," + num(sy(y)) + " ";
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" +
           pts + "\"/>\n";
    for (const auto& [x, y] : series[k].points)
      svg += "<circle cx=\"" + num(sx(x)) + "\" cy=\"" + num(sy(y)) + "\" r=\"3\" fill=\"" + color +
             "\"/>\n";
    if (!series[k].label.empty())
      svg += "<text x=\"" + num(left + 8) + "\" y=\"" + num(top + 14 + 16 * k) +
             "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + color + "\">" +
             series[k].label + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace prelat::cli
