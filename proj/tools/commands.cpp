#include "commands.hpp"

#include "reports.hpp"

#include "prelat/density.hpp"
#include "prelat/lattice_families.hpp"

#include <cmath>
#include <stdexcept>

namespace prelat::cli {

namespace {

std::string vec_text(const VecI& v) {
  std::string out;
  for (int i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string shifts_text(const std::vector<VecI>& shifts) {
  std::string out;
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    if (i) out += ';';
    out += vec_text(shifts[i]);
  }
  return out;
}

struct EnergySetup {
  Domain omega;
  MetricField G;
  Cutoff psi;
  std::function<Vec(const Vec&)> deformation;
  RunParams params;
};

EnergySetup energy_setup(const Config& config, bool need_cutoff, bool need_deformation) {
  EnergySetup setup{domain_from(config), metric_from(config), Cutoff{}, {}, run_from(config)};
  if (setup.G.dimension() != setup.omega.dimension())
    throw std::runtime_error("metric and domain dimensions differ");
  if (has_cutoff(config)) {
    setup.psi = cutoff_from(config);
    setup.psi.validate(setup.omega.dimension());
  } else if (setup.params.has_case) {
    setup.psi = cutoff_for_case(setup.params.tag);
  } else if (need_cutoff) {
    throw std::runtime_error("need a [cutoff] section or a [run] case");
  }
  if (has_deformation(config)) {
    setup.deformation = deformation_from(config, setup.G, setup.omega);
  } else if (need_deformation) {
    throw std::runtime_error("need a [deformation] section");
  } else {
    setup.deformation = center_stretch_map(setup.G, setup.omega);
  }
  if (setup.params.eps.empty()) throw std::runtime_error("[run] eps: required");
  return setup;
}

}  // namespace

std::string run_lattices(int dim, long radius_sq) {
  if (dim < 1 || dim > 3) throw std::runtime_error("lattices: --dim must be 1, 2 or 3");
  if (radius_sq < 1) throw std::runtime_error("lattices: --radius-sq must be >= 1");
  const std::string canonical =
      "lattices\ndim=" + std::to_string(dim) + "\nradius_sq=" + std::to_string(radius_sq) + "\n";
  CsvBuilder csv(fnv1a(canonical));
  csv.header({"record", "zeta", "xi", "sbar", "det", "orbit_count", "family_count",
              "translate_count", "shifts"});
  const Shell shell = enumerate_shell(dim, radius_sq);
  for (const VecI& zeta : shell.members) {
    const int k = nonzero_count(zeta);
    const auto orbit_count = orbit_size_count(zeta);
    csv.row({"orbit", vec_text(zeta), "", "", "", CsvBuilder::integer(static_cast<long long>(orbit_count)),
             CsvBuilder::integer(static_cast<long long>(orbit_count * k)), "", ""});
    for (const LatticeFamily& fam : lattice_set(zeta)) {
      csv.row({"family", vec_text(zeta), vec_text(fam.source), CsvBuilder::integer(fam.sbar),
               CsvBuilder::integer(fam.det), "", "",
               CsvBuilder::integer(static_cast<long long>(fam.shifts.size())),
               shifts_text(fam.shifts)});
    }
  }
  return csv.text();
}

std::string run_qw(const std::string& matrix_entries) {
  const auto e = to_doubles(matrix_entries, "--matrix");
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(e.size()))));
  if (static_cast<std::size_t>(n) * n != e.size() || n < 1)
    throw std::runtime_error("--matrix: need a square count of row-major values");
  Mat M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = e[static_cast<std::size_t>(i) * n + j];
  CsvBuilder csv(fnv1a("qw\nmatrix=" + matrix_entries + "\n"));
  csv.header({"matrix", "stretch", "relaxed"});
  csv.row({matrix_entries, CsvBuilder::number(stretch_density(M)),
           CsvBuilder::number(relaxed_stretch_density(M))});
  return csv.text();
}

std::string run_curvature(const Config& config) {
  const Domain omega = domain_from(config);
  const MetricField G = metric_from(config);
  if (omega.dimension() != 2 || G.dimension() != 2)
    throw std::runtime_error("curvature: 2d domain and metric required");
  const RunParams params = run_from(config);
  const MetricField Gd = diagonal_restriction(G);

  CsvBuilder csv(config.hash());
  csv.header({"x1", "x2", "curvature", "curvature_fd", "diagonal_curvature"});
  const auto [lo, hi] = omega.bounding_box();
  Vec x(2);
  for (int i = 0; i < params.grid; ++i)
    for (int j = 0; j < params.grid; ++j) {
      x[0] = lo[0] + (hi[0] - lo[0]) * (i + 0.5) / params.grid;
      x[1] = lo[1] + (hi[1] - lo[1]) * (j + 0.5) / params.grid;
      if (!omega.contains(x)) continue;
      csv.row({CsvBuilder::number(x[0]), CsvBuilder::number(x[1]),
               CsvBuilder::number(gaussian_curvature(G, x)),
               CsvBuilder::number(gaussian_curvature_fd(G, x, params.h)),
               CsvBuilder::number(gaussian_curvature(Gd, x))});
    }
  return csv.text();
}

std::string run_energy(const Config& config) {
  const EnergySetup setup = energy_setup(config, true, true);
  CsvBuilder csv(config.hash());
  std::vector<std::string> header = {"epsilon", "discrete", "representation", "gap",
                                     "boundary_bound"};
  for (const auto& [r2, w] : setup.psi.weights) header.push_back("shell_" + std::to_string(r2));
  csv.header(header);
  for (double eps : setup.params.eps) {
    const auto u = DiscreteDeformation::sample(setup.omega, eps, setup.deformation);
    const EnergyReport report =
        integral_representation(u, setup.G, setup.psi, setup.omega, setup.params.workers);
    std::vector<std::string> row = {
        CsvBuilder::number(eps), CsvBuilder::number(report.discrete),
        CsvBuilder::number(report.representation), CsvBuilder::number(report.gap),
        CsvBuilder::number(report.boundary_bound)};
    for (const auto& [r2, term] : report.shell_terms) row.push_back(CsvBuilder::number(term));
    csv.row(row);
  }
  return csv.text();
}

std::string run_represent(const Config& config) {
  const EnergySetup setup = energy_setup(config, true, true);
  CsvBuilder csv(config.hash());
  csv.header({"epsilon", "representation", "hand_form", "difference"});
  const bool single_nearest =
      setup.psi.weights.size() == 1 && setup.psi.weights[0].first == 1;
  const bool single_diagonal =
      setup.psi.weights.size() == 1 && setup.psi.weights[0].first == 2;
  for (double eps : setup.params.eps) {
    const auto u = DiscreteDeformation::sample(setup.omega, eps, setup.deformation);
    const EnergyReport report =
        integral_representation(u, setup.G, setup.psi, setup.omega, setup.params.workers);
    std::string hand, difference;
    if (setup.omega.dimension() == 2 && (single_nearest || single_diagonal)) {
      const double w = setup.psi.weights[0].second;
      const double value =
          single_nearest
              ? w * nearest_pair_representation(u, setup.G, setup.omega)
              : w * diagonal_pair_representation(u, setup.G, setup.omega, setup.params.literal);
      hand = CsvBuilder::number(value);
      difference = CsvBuilder::number(report.representation - value);
    }
    csv.row({CsvBuilder::number(eps), CsvBuilder::number(report.representation), hand, difference});
  }
  return csv.text();
}

std::string run_minimize(const Config& config) {
  const EnergySetup setup = energy_setup(config, true, false);
  CsvBuilder csv(config.hash());
  csv.header({"epsilon", "minimum", "iterations", "gradient_norm", "converged"});
  for (double eps : setup.params.eps) {
    const DiscreteMinimum result = minimize_discrete(setup.G, setup.psi, setup.omega, eps,
                                                     setup.deformation, setup.params.descent());
    csv.row({CsvBuilder::number(eps), CsvBuilder::number(result.report.value),
             CsvBuilder::integer(result.report.iterations),
             CsvBuilder::number(result.report.gradient_norm),
             result.report.converged ? "1" : "0"});
  }
  return csv.text();
}

StudyOutput run_study(const Config& config) {
  const Domain omega = domain_from(config);
  const MetricField G = metric_from(config);
  if (G.dimension() != omega.dimension())
    throw std::runtime_error("metric and domain dimensions differ");
  const RunParams params = run_from(config);
  if (!params.has_case) throw std::runtime_error("study: [run] case required");
  if (params.eps.empty()) throw std::runtime_error("study: [run] eps required");

  const StudyResult result =
      gamma_study(G, params.tag, omega, params.eps, params.mesh, params.descent());

  CsvBuilder csv(config.hash());
  csv.header({"kind", "epsilon", "minimum", "iterations", "gradient_norm"});
  for (const StudyRow& row : result.rows)
    csv.row({"level", CsvBuilder::number(row.eps), CsvBuilder::number(row.minimum),
             CsvBuilder::integer(row.iterations), CsvBuilder::number(row.gradient_norm)});
  csv.row({"extrapolated", "", CsvBuilder::number(result.extrapolated), "", ""});
  csv.row({"continuum", "", CsvBuilder::number(result.continuum_minimum), "", ""});

  ChartSeries series;
  series.label = "discrete minimum";
  for (const StudyRow& row : result.rows) series.points.emplace_back(row.eps, row.minimum);
  const double rule = result.continuum_minimum;
  StudyOutput out;
  out.csv = csv.text();
  out.svg = line_chart_svg("Minimum energy by lattice spacing", "epsilon", "minimum", {series},
                           &rule, "continuum minimum");
  return out;
}

}  // namespace prelat::cli
