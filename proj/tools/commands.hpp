#pragma once

#include "config.hpp"

#include <string>

namespace prelat::cli {

// Each command returns finished CSV text (see CsvBuilder for the framing).

std::string run_lattices(int dim, long radius_sq);
std::string run_qw(const std::string& matrix_entries);
std::string run_curvature(const Config& config);
std::string run_energy(const Config& config);
std::string run_represent(const Config& config);
std::string run_minimize(const Config& config);

struct StudyOutput {
  std::string csv;
  std::string svg;
};

StudyOutput run_study(const Config& config);

}  // namespace prelat::cli
