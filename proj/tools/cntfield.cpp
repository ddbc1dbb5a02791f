// Command-line driver: gen → solve → field, or all three with `run`.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"
#include "cntfield/cauchy.hpp"
#include "cntfield/config.hpp"
#include "cntfield/field.hpp"
#include "cntfield/io.hpp"
#include "cntfield/placement.hpp"
#include "cntfield/render.hpp"
#include "cntfield/solver.hpp"

namespace fs = std::filesystem;
using namespace cntfield;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kValidation = 2, kCapacity = 3, kConvergence = 4, kIo = 5 };

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string geometry_path, solution_path, output_path;
};

RunConfig effective_config(const Options& o) {
  RunConfig c = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  apply_overrides(c, o.overrides);
  validate(c);
  if (c.threads > 0) omp_set_num_threads(c.threads);
  return c;
}

std::string artifact(const RunConfig& c, const std::string& suffix) {
  fs::create_directories(c.output_dir);
  return (fs::path(c.output_dir) / (c.prefix + suffix)).string();
}

template <typename Writer>
void write_file(const std::string& path, Writer&& writer, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  writer(out);
  if (!out) throw IoError("failed writing '" + path + "'");
  std::cout << "wrote " << path << "\n";
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

std::string cmd_gen(const RunConfig& c, const std::string& out_path) {
  GeometryRecord rec;
  rec.seed = c.seed;
  rec.config_hash = config_hash(c);
  rec.domain.shape = c.domain;
  rec.domain.aspect = c.aspect;
  rec.domain.inner_half_side = c.inner_half_side;
  if (c.domain == DomainShape::SquareRing) {
    PlacementOptions po;
    po.separation = c.separation;
    po.clearance = c.clearance;
    po.aspect = c.aspect;
    rec.domain.cnts = generate_cnts(c.m, c.length_law, c.inner_half_side, po, c.seed);
  }
  rec.domain.alpha = default_alpha(rec.domain, c.clearance);
  const std::string path = out_path.empty() ? artifact(c, ".geometry.txt") : out_path;
  write_file(path, [&](std::ostream& o) { write_geometry(rec, o); });
  return path;
}

std::string cmd_solve(const RunConfig& c, const std::string& geometry_path, const std::string& out_path) {
  std::ifstream in(geometry_path);
  if (!in) throw IoError("cannot open geometry file '" + geometry_path + "'");
  SolutionRecord rec;
  rec.geometry = read_geometry(in);
  rec.geometry.config_hash = config_hash(c);
  rec.n = c.n;
  rec.upsample = c.upsample;

  const auto t0 = std::chrono::steady_clock::now();
  KernelOptions ko;
  ko.upsample = c.upsample;
  const KernelContext ctx(DiscretizedBoundary(rec.geometry.domain.layout(), c.n), rec.geometry.domain.alpha, ko);
  SolverOptions so;
  so.gmres = {c.gmres_tol, c.gmres_maxit};
  rec.solution = solve_rh(ctx, so);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::string path = out_path.empty() ? artifact(c, ".solution.json") : out_path;
  write_file(path, [&](std::ostream& o) { write_solution(rec, o); });

  const auto& s = rec.solution;
  std::ostringstream r;
  r << "# cntfield solve report\n";
  r << "config_hash " << rec.geometry.config_hash << "\nseed " << rec.geometry.seed << "\n";
  r << "geometry_hash " << geometry_hash(rec.geometry.domain) << "\n";
  r << "m " << s.cnt_count << "\nn " << c.n << "\nunknowns " << ctx.size() << "\n";
  r << "converged " << (s.report.converged ? "yes" : "no") << "\niterations " << s.report.iterations << "\n";
  r << "final_residual " << fmt(s.report.final_residual) << "\n";
  r << "residual_history";
  for (double v : s.report.residual_history) r << " " << fmt(v);
  r << "\nc " << fmt(s.c) << "\n";
  r << "delta";
  for (Index i = 0; i < s.cnt_count; ++i) r << " " << fmt(s.delta[i]);
  r << "\n";
  if (auto h = s.hole_constant()) r << "hole_conjugate_constant " << fmt(*h) << "\n";
  r << "h_flatness";
  for (Index i = 0; i < s.h_flatness.size(); ++i) r << " " << fmt(s.h_flatness[i]);
  r << "\nwall_time_seconds " << fmt(seconds) << "\n";
  if (c.wants("report")) {
    write_file(artifact(c, ".solve_report.txt"), [&](std::ostream& o) { o << r.str(); });
  }
  std::cout << r.str();
  return path;
}

void cmd_field(const RunConfig& c, const std::string& solution_path) {
  std::ifstream in(solution_path);
  if (!in) throw IoError("cannot open solution file '" + solution_path + "'");
  const SolutionRecord rec = read_solution(in);
  const auto& domain = rec.geometry.domain;
  const DiscretizedBoundary boundary(domain.layout(), rec.n);
  const auto& sol = rec.solution;
  const FieldEvaluator eval(boundary, sol.f_boundary);
  const FieldHeader header{rec.geometry.seed, config_hash(c)};
  const std::string stamp = "config_hash " + header.config_hash + " seed " + std::to_string(header.seed);

  const auto t0 = std::chrono::steady_clock::now();
  ClassifyOptions co;
  co.guard = c.guard;
  const FieldGrid grid = sample_grid(eval, c.bbox, c.nx, c.ny, co);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const BandGrid bands = contour_bands(grid, c.contour_levels);

  if (c.wants("field_csv"))
    write_file(artifact(c, ".field.csv"), [&](std::ostream& o) { write_field_csv(grid, header, o); });
  if (c.wants("bands_csv"))
    write_file(artifact(c, ".bands.csv"), [&](std::ostream& o) { write_field_csv(grid, header, o, &bands); });
  if (c.wants("field_bin"))
    write_file(artifact(c, ".field.bin"), [&](std::ostream& o) { write_field_binary(grid, header, o); }, true);
  if (c.wants("phase_ppm"))
    write_file(artifact(c, ".phase.ppm"), [&](std::ostream& o) { write_ppm(phase_portrait(grid), o, stamp); });
  if (c.wants("contour_ppm"))
    write_file(artifact(c, ".contours.ppm"), [&](std::ostream& o) { write_ppm(band_image(bands), o, stamp); });

  std::ostringstream r;
  r << "# cntfield field report\n";
  r << "config_hash " << header.config_hash << "\nseed " << header.seed << "\n";
  r << "grid " << c.nx << "x" << c.ny << "\n";
  const auto ext = temperature_extrema(grid);
  r << "ring_cells " << ext.count << "\n";
  if (ext.count > 0) {
    const bool ok = ext.min >= -1 - 1e-6 && ext.max <= 1 + 1e-6;
    r << "U_min " << fmt(ext.min) << "\nU_max " << fmt(ext.max) << "\n";
    r << "max_principle " << (ok ? "pass" : "FAIL") << "\n";
  }
  for (Index k = 0; k < boundary.component_count(); ++k) {
    const auto role = boundary.component(k).role;
    const char* name = role == BoundaryRole::Dirichlet ? "outer" : role == BoundaryRole::InsulatedHole ? "inner" : "cnt";
    r << "net_flux " << k << " " << name << " " << fmt(net_flux(sol, boundary, k)) << "\n";
  }
  try {
    r << "flux_amplification " << fmt(flux_amplification(grid, c.standoff)) << " (standoff " << c.standoff << ")\n";
  } catch (const InvalidInput&) {
    r << "flux_amplification n/a (no cell beyond standoff)\n";
  }
  if (sol.cnt_count >= 2) {
    const auto st = delta_statistics(sol);
    r << "delta_fit_slope " << fmt(st.slope) << "\ndelta_fit_relative_residual " << fmt(st.relative_residual) << "\n";
  }
  for (const auto& p : c.probe_points) {
    const auto cls = classify_point(boundary, p, co);
    if (cls.kind != PointKind::RingInterior) {
      r << "probe " << p.real() << " " << p.imag() << " masked\n";
      continue;
    }
    const auto v = eval.evaluate(p);
    r << "probe " << p.real() << " " << p.imag() << " U " << fmt(v.U) << " q " << fmt(v.q.real()) << " "
      << fmt(v.q.imag()) << "\n";
  }
  r << "wall_time_seconds " << fmt(seconds) << "\n";
  if (c.wants("report")) write_file(artifact(c, ".field_report.txt"), [&](std::ostream& o) { o << r.str(); });
  std::cout << r.str();
}

template <typename F>
int guarded(F&& body) {
  try {
    body();
    return kOk;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kCapacity;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return kConvergence;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const InvalidInput& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const GeometryError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temperature and heat flux in a square-ring composite with nanotube inclusions"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", o.config_path, "configuration file (key = value)");
    sub->add_option("--set", o.overrides, "override one config key, e.g. --set n=1024")->take_all();
  };
  auto* gen = app.add_subcommand("gen", "place nanotubes and write the geometry file");
  common(gen);
  gen->add_option("-o,--output", o.output_path, "geometry file to write");
  auto* solve = app.add_subcommand("solve", "solve the boundary integral equation");
  common(solve);
  solve->add_option("-g,--geometry", o.geometry_path, "geometry file")->required();
  solve->add_option("-o,--output", o.output_path, "solution file to write");
  auto* field = app.add_subcommand("field", "sample U and q, render figures, report invariants");
  common(field);
  field->add_option("-s,--solution", o.solution_path, "solution file")->required();
  auto* run = app.add_subcommand("run", "gen, solve and field in one go");
  common(run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  return guarded([&] {
    const RunConfig c = effective_config(o);
    if (*gen) cmd_gen(c, o.output_path);
    if (*solve) cmd_solve(c, o.geometry_path, o.output_path);
    if (*field) cmd_field(c, o.solution_path);
    if (*run) {
      const auto g = cmd_gen(c, "");
      const auto s = cmd_solve(c, g, "");
      cmd_field(c, s);
    }
  });
}
