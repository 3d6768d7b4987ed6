// Command line front end: pi-p, solve, bounds, sweep, report.

#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "pfreq/bounds.hpp"
#include "pfreq/eigensolver.hpp"
#include "pfreq/errors.hpp"
#include "pfreq/experiments.hpp"
#include "pfreq/io.hpp"
#include "pfreq/poincare1d.hpp"

using namespace pfreq;

namespace {

struct ShapeArgs {
  std::string shape;  // inline JSON or a path to a JSON file
  std::optional<double> alpha;
  std::optional<double> length;
};

void add_shape_flags(CLI::App* app, ShapeArgs& s) {
  app->add_option("--shape", s.shape, "polygon, halfspace set or shape family as JSON text or file");
  app->add_option("--alpha", s.alpha, "planar collapsing pyramid C_alpha");
  app->add_option("--L", s.length, "L x 1 box");
}

ConvexPolygon resolve_shape(const ShapeArgs& s) {
  if (!s.shape.empty()) {
    std::string text = s.shape;
    if (std::filesystem::exists(text)) {
      std::ifstream f(text);
      text.assign(std::istreambuf_iterator<char>(f), {});
    }
    return io::domain_from_json(io::Json::parse(text));
  }
  if (s.alpha) return *collapsing_pyramid(2, *s.alpha).polygon;
  if (s.length) return rectangle(*s.length, 1.0);
  return rectangle(1.0, 1.0);
}

Format parse_format(const std::string& f) { return f == "json" ? Format::Json : Format::Csv; }

// Prints or writes the table and maps it to the exit code.
int emit(const Table& table, const std::string& out, const std::string& format) {
  const auto fmt_kind = parse_format(format);
  if (out.empty()) {
    std::cout << (fmt_kind == Format::Csv ? to_csv(table) : to_json(table).dump(2) + "\n");
  } else {
    const auto svg = write_outputs(table, out, fmt_kind);
    fmt::print(stderr, "wrote {} and {}\n", out, svg.string());
  }
  for (const auto& note : table.notes) fmt::print(stderr, "# {}\n", note);
  return table.ok() ? 0 : 1;
}

Table pi_p_table(double p, int n, double tol) {
  Poincare1dConfig c;
  c.tolerance = tol;
  const auto r = solve_pi_p(p, n, c);
  const double ref = pi_p_reference(p);
  Table t;
  t.experiment = "pi-p";
  t.columns = {"p", "n", "estimate", "reference", "rel_error", "iterations", "converged"};
  t.rows.push_back({p, static_cast<double>(n), r.value, ref, std::abs(r.value - ref) / ref,
                    static_cast<double>(r.iterations), r.converged});
  t.plot = {PlotSpec::Kind::Bar, "p", {"estimate"}, false};
  return t;
}

Table bounds_table(const ConvexPolygon& pg, double p, std::optional<double> q, PiSource pi) {
  const int N = 2;
  const double R = chebyshev_center(pg).radius, P = pg.perimeter(), V = pg.area();
  const auto ball = ball_reference(p);
  std::vector<BoundReport> reports{hardy_lower(p, R),
                                   hersch_protter_lower(p, R, pi),
                                   ball_upper(p, R, ball.value, ball.provenance),
                                   faber_krahn_lower(p, N, V, ball.value, ball.volume, ball.provenance),
                                   isoperimetric_lower(p, N, P, V, pi),
                                   isoperimetric_upper(p, P, V, pi),
                                   cheeger_lower(N, P, V)};
  if (q) reports.push_back(superhomogeneous_lower(p, *q, N, R, reports[1].value));
  Table t;
  t.experiment = "bounds";
  t.columns = {"name", "side", "value", "citation"};
  for (const auto& r : reports) t.rows.push_back({r.name, to_string(r.side), r.value, r.citation});
  const auto g = geometric_check(R, N, P, V);
  t.rows.push_back({g.report.name, to_string(g.report.side), g.report.value, g.report.citation});
  t.notes = {fmt::format("R = {}, P = {}, V = {}, R/N = {}", R, P, V, R / N)};
  t.plot = {PlotSpec::Kind::Bar, "name", {"value"}, false};
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-Laplacian principal frequencies and inradius bounds on convex polygons"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  double p = 2.0, tol = 1e-10, h = 0.0;
  std::optional<double> q;
  int n = 2000, threads = 1, fields = 50;
  std::uint64_t seed = 1;
  std::string out, format = "csv", mesh_out;
  bool reference = false;
  double inradius_factor = 1.0;
  ShapeArgs shape;
  std::vector<double> alphas{0.8, 0.4, 0.2, 0.1}, lengths{1.0, 2.0, 4.0, 8.0}, ps{2.0, 5.0, 10.0, 20.0};

  auto common = [&](CLI::App* c) {
    c->add_option("--out", out, "output file; the SVG plot goes next to it");
    c->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto solver_flags = [&](CLI::App* c) {
    c->add_option("--h", h, "mesh size (0 = default)");
    c->add_option("--tol", tol, "relative tolerance");
    c->add_option("--seed", seed, "seed for random starts and fields");
  };

  auto* pi = app.add_subcommand("pi-p", "one-dimensional constant pi_p");
  pi->add_option("--p", p)->required();
  pi->add_option("--n", n, "interior grid nodes");
  pi->add_option("--tol", tol);
  common(pi);

  auto* solve = app.add_subcommand("solve", "first eigenvalue on a polygon");
  solve->add_option("--p", p);
  solve->add_option("--q", q);
  solve->add_option("--mesh-out", mesh_out, "write the mesh as JSON");
  add_shape_flags(solve, shape);
  solver_flags(solve);
  common(solve);

  auto* bounds = app.add_subcommand("bounds", "evaluate the closed-form bounds");
  bounds->add_option("--p", p);
  bounds->add_option("--q", q, "adds the super-homogeneous bound");
  bounds->add_flag("--reference", reference, "closed-form pi_p instead of the 1D solver");
  add_shape_flags(bounds, shape);
  common(bounds);

  auto* sweep = app.add_subcommand("sweep", "parameter sweeps");
  sweep->require_subcommand(1);
  auto* pyramid = sweep->add_subcommand("pyramid", "R^p lambda_p on C_alpha as alpha shrinks");
  pyramid->add_option("--p", p);
  pyramid->add_option("--alpha", alphas)->expected(1, -1);
  auto* slab = sweep->add_subcommand("slab", "L x 1 boxes against pi_p^p");
  slab->add_option("--p", p);
  slab->add_option("--L", lengths)->expected(1, -1);
  auto* subhom = sweep->add_subcommand("subhom", "scaled lambda_pq on L x 1 boxes");
  subhom->add_option("--p", p);
  subhom->add_option("--q", q)->required();
  subhom->add_option("--L", lengths)->expected(1, -1);
  auto* pinfty = sweep->add_subcommand("pinfty", "lambda_p^(1/p) against 1/R");
  pinfty->add_option("--p", ps)->expected(1, -1);
  add_shape_flags(pinfty, shape);
  auto* hardy = sweep->add_subcommand("hardy", "Hardy inequality on sampled fields");
  hardy->add_option("--p", p);
  hardy->add_option("--n", fields, "number of random fields");
  add_shape_flags(hardy, shape);
  for (auto* c : {pyramid, slab, subhom, pinfty, hardy}) {
    solver_flags(c);
    common(c);
    c->add_option("--threads", threads, "rows computed in parallel");
  }

  auto* report = app.add_subcommand("report", "solve and check every bound");
  report->add_option("--p", p);
  report->add_option("--corrupt-R", inradius_factor, "multiply the inradius fed to the bounds");
  add_shape_flags(report, shape);
  solver_flags(report);
  common(report);

  CLI11_PARSE(app, argc, argv);

  try {
    SweepOptions so;
    so.h = h;
    so.tolerance = tol;
    so.seed = seed;
    so.threads = threads;

    if (*pi) return emit(pi_p_table(p, n, tol), out, format);

    if (*solve) {
      const auto pg = resolve_shape(shape);
      SolverConfig c;
      c.p = p;
      c.q = q;
      c.h = h;
      c.tolerance = tol;
      c.seed = seed;
      const auto r = q ? minimize_lambda_pq(pg, p, *q, c) : minimize_lambda_p(pg, p, c);
      if (!mesh_out.empty()) std::ofstream(mesh_out) << io::to_json(r.mesh).dump() << "\n";
      Table t;
      t.experiment = "solve";
      t.columns = {"p", "q", "h", "nodes", "lambda", "residual", "iterations", "converged"};
      t.rows.push_back({p, c.exponent_q(), r.mesh.h, static_cast<double>(r.mesh.size()), r.value, r.residual,
                        static_cast<double>(r.iterations), r.converged});
      t.plot = {PlotSpec::Kind::Bar, "p", {"lambda"}, false};
      return emit(t, out, format);
    }

    if (*bounds) {
      return emit(bounds_table(resolve_shape(shape), p, q, reference ? PiSource::Reference : PiSource::Estimate),
                  out, format);
    }

    if (*pyramid) return emit(run_pyramid_sweep(p, alphas, so), out, format);
    if (*slab) return emit(run_slab_sweep(p, lengths, so), out, format);
    if (*subhom) return emit(run_subhomogeneous(p, *q, lengths, so), out, format);
    if (*pinfty) return emit(run_pinfty_trend(resolve_shape(shape), ps, so), out, format);
    if (*hardy) {
      HardyFields f;
      f.random = fields;
      return emit(run_hardy_pointwise(resolve_shape(shape), p, f, so), out, format);
    }

    if (*report) {
      ReportOptions ro;
      ro.h = h;
      ro.tolerance = tol;
      ro.seed = seed;
      ro.inradius_factor = inradius_factor;
      return emit(to_table(run_bounds_report(resolve_shape(shape), p, ro)), out, format);
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  return 0;
}
