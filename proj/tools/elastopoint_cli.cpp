// Command-line front end: convergence studies, single solves and the spectral
// and weight diagnostics.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "elastopoint/assembly.hpp"
#include "elastopoint/convergence.hpp"
#include "elastopoint/errors.hpp"
#include "elastopoint/io.hpp"
#include "elastopoint/spectral.hpp"
#include "elastopoint/weights.hpp"

namespace ep = elastopoint;

namespace {

struct RunConfig {
  int dim = 2;
  std::vector<int> levels;
  double mu = 1.0;
  double lambda = 1.0;
  std::string loads_path;
  bool manufactured = false;
  double alpha = 0.0;
  double s = 0.5;
  std::vector<std::string> centers;
  double tol = 1e-10;
  int max_iter = -1;
  int ref_extra = 2;
  int balls = 50;
  int points = 32;
  std::string out;
};

int thread_count() {
  const char* env = std::getenv("ELASTOPOINT_THREADS");
  if (env == nullptr) return 1;
  const int n = std::atoi(env);
  return n > 1 ? n : 1;
}

ep::Point parse_point(const std::string& text, int dim) {
  std::vector<double> coords;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      coords.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ep::ArgumentError("bad coordinate in '" + text + "'");
    }
  }
  if (coords.size() != static_cast<std::size_t>(dim)) {
    throw ep::ArgumentError("point '" + text + "' needs " + std::to_string(dim) + " coordinates");
  }
  ep::Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) p[a] = coords[a];
  return p;
}

std::vector<ep::Point> centers_or_default(const RunConfig& cfg) {
  std::vector<ep::Point> out;
  for (const auto& c : cfg.centers) out.push_back(parse_point(c, cfg.dim));
  if (out.empty()) out.push_back({0.5, 0.5, cfg.dim == 3 ? 0.5 : 0.0});
  return out;
}

ep::Forcing make_forcing(const RunConfig& cfg, const ep::LameParams& params) {
  if (cfg.manufactured == !cfg.loads_path.empty()) {
    throw ep::ArgumentError("give exactly one of --loads FILE or --manufactured");
  }
  if (cfg.manufactured) return ep::manufactured_sine_solution(cfg.dim, params);
  return ep::io::parse_loads_file(cfg.loads_path, cfg.dim);
}

ep::StudyOptions study_options(const RunConfig& cfg) {
  ep::StudyOptions opts;
  opts.ref_extra_levels = cfg.ref_extra;
  opts.cg.rel_tol = cfg.tol;
  opts.cg.max_iter = cfg.max_iter;
  opts.cg.threads = thread_count();
  return opts;
}

// Writes to --out when given, otherwise to stdout.
template <class Fn>
void emit(const RunConfig& cfg, Fn&& write) {
  if (cfg.out.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw ep::IoError("cannot open '" + cfg.out + "' for writing");
  write(f);
  if (!f.flush()) throw ep::IoError("write to '" + cfg.out + "' failed");
}

int run_converge(const RunConfig& cfg) {
  const ep::LameParams params{cfg.mu, cfg.lambda};
  params.validate();
  const auto forcing = make_forcing(cfg, params);
  const auto report = ep::run_convergence_study(cfg.dim, cfg.levels, params, forcing, study_options(cfg));
  for (const auto& r : report.rows) {
    std::fprintf(stderr, "n=%-5d ndof=%-9zu error=%.6e eoc=%s\n", r.n, r.ndof, r.error_l2,
                 r.eoc ? ep::io::format_real(*r.eoc).c_str() : "-");
  }
  emit(cfg, [&](std::ostream& os) { ep::io::write_csv_report(os, report); });
  return 0;
}

int run_solve(const RunConfig& cfg) {
  if (cfg.levels.size() != 1) throw ep::ArgumentError("solve takes a single --levels value");
  const ep::LameParams params{cfg.mu, cfg.lambda};
  params.validate();
  const auto forcing = make_forcing(cfg, params);
  const auto sol = ep::solve_level(cfg.dim, cfg.levels[0], params, forcing, study_options(cfg));
  std::printf("n=%d ndof=%zu iterations=%d relative_residual=%.3e converged=%s energy=%.12g\n", cfg.levels[0],
              sol.ndof, sol.stats.iterations, sol.stats.final_relative_residual, sol.stats.converged ? "yes" : "no",
              sol.energy);
  if (!cfg.out.empty()) ep::io::write_vtk_field(sol.mesh, sol.field, cfg.out);
  return 0;
}

int run_korn(const RunConfig& cfg) {
  std::optional<ep::WeightSpec> weight;
  if (cfg.alpha != 0.0) {
    weight = ep::WeightSpec{cfg.dim, centers_or_default(cfg), cfg.alpha};
    weight->validate();
  }
  std::ostringstream csv;
  csv << "n,ndof,lambda_min,korn_constant\n";
  for (int n : cfg.levels) {
    const ep::Mesh mesh(cfg.dim, n);
    const auto k = ep::discrete_korn_constant(mesh, weight);
    csv << n << ',' << k.n_free << ',' << ep::io::format_real(k.lambda_min) << ','
        << ep::io::format_real(k.constant) << '\n';
  }
  emit(cfg, [&](std::ostream& os) { os << csv.str(); });
  return 0;
}

int run_infsup(const RunConfig& cfg) {
  const auto center = centers_or_default(cfg).front();
  std::ostringstream csv;
  csv << "n,s,alpha_a_kernel,alpha_a_full,beta_b,beta_c,injective\n";
  for (int n : cfg.levels) {
    const ep::Mesh mesh(cfg.dim, n);
    const auto r = ep::weighted_pairing_demo(mesh, cfg.s, center);
    csv << n << ',' << ep::io::format_real(cfg.s) << ',' << ep::io::format_real(r.alpha_a_kernel) << ','
        << ep::io::format_real(r.alpha_a_full) << ',' << ep::io::format_real(r.beta_b) << ','
        << ep::io::format_real(r.beta_c) << ',' << (r.injective_on_kernels ? 1 : 0) << '\n';
  }
  emit(cfg, [&](std::ostream& os) { os << csv.str(); });
  return 0;
}

int run_a2(const RunConfig& cfg) {
  const ep::WeightSpec spec{cfg.dim, centers_or_default(cfg), cfg.alpha};
  spec.validate();
  const auto balls = ep::standard_ball_family(spec, cfg.balls);
  const double est = ep::estimate_a2(spec, balls, cfg.points);
  std::printf("alpha=%s balls=%d points_per_axis=%d a2_lower_bound=%s\n", ep::io::format_real(cfg.alpha).c_str(),
              cfg.balls, cfg.points, ep::io::format_real(est).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite element elasticity with point loads: convergence studies and diagnostics"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_dim = [&](CLI::App* sub) {
    sub->add_option("--dim", cfg.dim, "Spatial dimension")->check(CLI::IsMember({2, 3}));
  };
  auto add_levels = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--levels", cfg.levels, "Cells per side, comma separated")->delimiter(',');
    if (required) opt->required();
  };
  auto add_material = [&](CLI::App* sub) {
    sub->add_option("--mu", cfg.mu, "Lame constant mu");
    sub->add_option("--lambda", cfg.lambda, "Lame constant lambda");
    sub->add_option("--loads", cfg.loads_path, "Point loads file");
    sub->add_flag("--manufactured", cfg.manufactured, "Use the smooth manufactured solution");
    sub->add_option("--tol", cfg.tol, "CG relative tolerance");
    sub->add_option("--max-iter", cfg.max_iter, "CG iteration cap (default 20 sqrt(n) + 200)");
  };
  auto add_centers = [&](CLI::App* sub) {
    sub->add_option("--center", cfg.centers, "Weight center x,y[,z] (repeatable)");
  };

  auto* converge = app.add_subcommand("converge", "Convergence study written as CSV");
  add_dim(converge);
  add_levels(converge, true);
  add_material(converge);
  converge->add_option("--ref-extra", cfg.ref_extra, "Reference refinements past the finest level");
  converge->add_option("--out", cfg.out, "CSV output path (stdout if omitted)");

  auto* solve = app.add_subcommand("solve", "Single solve written as legacy VTK");
  add_dim(solve);
  add_levels(solve, true);
  add_material(solve);
  solve->add_option("--out", cfg.out, "VTK output path");

  auto* korn = app.add_subcommand("korn", "Discrete Korn constants as CSV");
  add_dim(korn);
  add_levels(korn, true);
  korn->add_option("--alpha", cfg.alpha, "Weight exponent (0 = unweighted)");
  add_centers(korn);
  korn->add_option("--out", cfg.out, "CSV output path (stdout if omitted)");

  auto* infsup = app.add_subcommand("infsup-demo", "Weighted tensor pairing inf-sup report as CSV");
  add_dim(infsup);
  add_levels(infsup, true);
  infsup->add_option("--s", cfg.s, "Weight exponent s of r^(d s), |s| < 1");
  add_centers(infsup);
  infsup->add_option("--out", cfg.out, "CSV output path (stdout if omitted)");

  auto* a2 = app.add_subcommand("a2", "Sampled A2 characteristic of the power weight");
  add_dim(a2);
  a2->add_option("--alpha", cfg.alpha, "Weight exponent")->required();
  add_centers(a2);
  a2->add_option("--balls", cfg.balls, "Number of sample balls");
  a2->add_option("--points", cfg.points, "Sample points per axis in each ball");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*converge) return run_converge(cfg);
    if (*solve) return run_solve(cfg);
    if (*korn) return run_korn(cfg);
    if (*infsup) return run_infsup(cfg);
    if (*a2) return run_a2(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
