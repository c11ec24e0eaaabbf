#pragma once

#include "prelat/energies.hpp"
#include "prelat/fields.hpp"
#include "prelat/geometry.hpp"
#include "prelat/metric.hpp"
#include "prelat/minimize.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace prelat::cli {

/**
 * Flat sectioned key=value configuration. Sections and keys are drawn from a
 * fixed vocabulary; anything else is rejected at parse time with its line
 * number. '#' and ';' start comments.
 */
struct Config {
  std::map<std::string, std::map<std::string, std::string>> sections;

  bool has(const std::string& section, const std::string& key) const;
  const std::string& get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;

  // Sorted sections and keys, one per line: the hashing base.
  std::string canonical() const;
  std::uint64_t hash() const;
};

Config parse_config_text(const std::string& text);
Config load_config(const std::string& path);

std::uint64_t fnv1a(const std::string& text);

// Strict scalar and list parsing; context names the offending key in errors.
double to_double(const std::string& text, const std::string& context);
int to_int(const std::string& text, const std::string& context);
long to_long(const std::string& text, const std::string& context);
std::vector<double> to_doubles(const std::string& text, const std::string& context);

struct RunParams {
  std::vector<double> eps;
  bool has_case = false;
  CaseTag tag = CaseTag::nearest2d;
  int mesh = 32;
  int grid = 10;
  double h = 1e-3;
  int workers = 1;
  long seed = 1;
  Gauge gauge = Gauge::pin_mean;
  int max_iterations = 500;
  double tolerance = 1e-8;
  double smoothing = 1e-12;
  double regularization = 0.0;
  int subdivisions = 2;
  bool literal = false;

  DescentOptions descent() const;
};

Domain domain_from(const Config& config);
MetricField metric_from(const Config& config);
Cutoff cutoff_from(const Config& config);
std::function<Vec(const Vec&)> deformation_from(const Config& config, const MetricField& G,
                                                const Domain& omega);
bool has_deformation(const Config& config);
bool has_cutoff(const Config& config);
RunParams run_from(const Config& config);

}  // namespace prelat::cli
