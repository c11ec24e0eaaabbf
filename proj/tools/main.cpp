#include "CLI11.hpp"

#include "commands.hpp"
#include "config.hpp"
#include "reports.hpp"

#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

namespace {

using prelat::cli::Config;

// CSV rows are CRLF terminated; write binary so Windows-style line ends
// survive on every platform and reruns stay byte identical.
void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
  if (!out.good()) throw std::runtime_error("short write: " + path);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    write_text(out_path, text);
}

Config load_and_log(const std::string& path) {
  const Config config = prelat::cli::load_config(path);
  std::cerr << "resolved config (hash " << prelat::cli::hash_hex(config.hash()) << "):\n"
            << config.canonical();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prestrained lattice energies: shells, densities, representations, minimization"};
  app.require_subcommand(1);

  int lattices_dim = 2;
  long lattices_radius_sq = 1;
  auto* lattices = app.add_subcommand("lattices", "Enumerate interaction shells and lattice families");
  lattices->add_option("--dim", lattices_dim, "Space dimension (1-3)")->required();
  lattices->add_option("--radius-sq", lattices_radius_sq, "Squared interaction length")->required();
  std::string lattices_out;
  lattices->add_option("--out", lattices_out, "CSV output path (default: stdout)");

  std::string qw_matrix, qw_out;
  auto* qw = app.add_subcommand("qw", "Stretch density W and its relaxation QW of a matrix");
  qw->add_option("--matrix", qw_matrix, "Row-major comma-separated entries")->required();
  qw->add_option("--out", qw_out, "CSV output path (default: stdout)");

  struct ConfigCmd {
    CLI::App* cmd;
    std::string config_path;
    std::string out_path;
  };
  auto add_config_cmd = [&](const char* name, const char* help) {
    ConfigCmd c;
    c.cmd = app.add_subcommand(name, help);
    c.cmd->add_option("--config", c.config_path, "Config file path")->required();
    c.cmd->add_option("--out", c.out_path, "CSV output path (default: stdout)");
    return c;
  };

  ConfigCmd curvature = add_config_cmd("curvature", "Gaussian curvature maps of a metric");
  ConfigCmd energy = add_config_cmd("energy", "Lattice energy and its integral representation");
  ConfigCmd represent = add_config_cmd("represent", "Integral representation vs hand-built forms");
  ConfigCmd minimize = add_config_cmd("minimize", "Minimize the lattice energy over nodal values");
  ConfigCmd study = add_config_cmd("study", "Minimum energy across a spacing ladder vs continuum");

  std::string svg_path;
  study.cmd->add_option("--svg", svg_path, "SVG chart output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (lattices->parsed()) {
      emit(prelat::cli::run_lattices(lattices_dim, lattices_radius_sq), lattices_out);
    } else if (qw->parsed()) {
      emit(prelat::cli::run_qw(qw_matrix), qw_out);
    } else if (curvature.cmd->parsed()) {
      emit(prelat::cli::run_curvature(load_and_log(curvature.config_path)), curvature.out_path);
    } else if (energy.cmd->parsed()) {
      emit(prelat::cli::run_energy(load_and_log(energy.config_path)), energy.out_path);
    } else if (represent.cmd->parsed()) {
      emit(prelat::cli::run_represent(load_and_log(represent.config_path)), represent.out_path);
    } else if (minimize.cmd->parsed()) {
      emit(prelat::cli::run_minimize(load_and_log(minimize.config_path)), minimize.out_path);
    } else if (study.cmd->parsed()) {
      const auto result = prelat::cli::run_study(load_and_log(study.config_path));
      emit(result.csv, study.out_path);
      if (!svg_path.empty()) write_text(svg_path, result.svg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
