#include "pfreq/experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <random>
#include <thread>

#include "pfreq/eigensolver.hpp"
#include "pfreq/errors.hpp"
#include "pfreq/mesh.hpp"

namespace pfreq {

namespace {

const char* kPyramidCite = "R^p lambda_p(C_alpha) -> (pi_p/2)^p as alpha -> 0, strictly above";
const char* kSlabCite = "lambda_p of L x 1 boxes -> pi_p^p as L grows";
const char* kSubhomCite = "inf over convex sets of R^(Np/q-N+p) lambda_pq is 0 when q < p";
const char* kPinftyCite = "lambda_p^(1/p) -> 1/R as p -> infinity";
const char* kHardyCite = "((p-1)/p)^p int |u/d|^p <= int |grad u|^p";

// Rows are filled by index, so the output order never depends on scheduling.
template <class F>
void for_each_row(std::size_t n, int threads, F&& f) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min<int>(threads, static_cast<int>(n)); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void sort_grid(std::vector<double>& values, bool decreasing, const char* what) {
  if (values.empty()) throw DomainError(std::string(what) + " grid is empty");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (decreasing) std::reverse(values.begin(), values.end());
}

SolverConfig solver_config(double p, double h, const SweepOptions& options) {
  SolverConfig c;
  c.p = p;
  c.h = h;
  c.tolerance = options.tolerance;
  c.seed = options.seed;
  return c;
}

Point2 p1_gradient(const TriangleMesh& mesh, std::size_t t, const DiscreteField& u) {
  const auto& [a, b, c] = mesh.triangles[t];
  const Point2 &x0 = mesh.nodes[a], &x1 = mesh.nodes[b], &x2 = mesh.nodes[c];
  const double u0 = u[a], u1 = u[b], u2 = u[c];
  const double twice = (x1 - x0).x() * (x2 - x0).y() - (x1 - x0).y() * (x2 - x0).x();
  return Point2(u0 * (x1.y() - x2.y()) + u1 * (x2.y() - x0.y()) + u2 * (x0.y() - x1.y()),
                u0 * (x2.x() - x1.x()) + u1 * (x0.x() - x2.x()) + u2 * (x1.x() - x0.x())) /
         twice;
}

std::string csv_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return fmt::format("{}", *d);
  if (const auto* b = std::get_if<bool>(&cell)) return *b ? "true" : "false";
  const auto& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw DomainError("no column '" + name + "' in " + experiment);
  return static_cast<std::size_t>(it - columns.begin());
}

double Table::number(std::size_t row, const std::string& name) const {
  return std::get<double>(rows.at(row).at(column(name)));
}

bool Table::ok() const {
  for (const auto& name : {"pass", "converged"}) {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) continue;
    const auto k = static_cast<std::size_t>(it - columns.begin());
    for (const auto& row : rows) {
      if (!std::get<bool>(row[k])) return false;
    }
  }
  return true;
}

Table run_pyramid_sweep(double p, std::vector<double> alphas, const SweepOptions& options) {
  sort_grid(alphas, true, "alpha");
  for (double a : alphas) {
    if (!(a > 0.0 && a <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  }
  Table t;
  t.experiment = "pyramid";
  t.columns = {"alpha", "R", "lambda", "scaled", "target", "ratio", "converged", "pass", "citation"};
  t.rows.resize(alphas.size());
  const double target = std::pow(pi_p_value(p, options.pi) / 2.0, p);
  for_each_row(alphas.size(), options.threads, [&](std::size_t i) {
    const double a = alphas[i];
    const auto c = collapsing_pyramid(2, a);
    const double h = (options.h > 0.0 ? options.h : 1.0 / 24.0) * a;
    const auto r = minimize_lambda_p(*c.polygon, p, solver_config(p, h, options));
    const double scaled = std::pow(c.inradius, p) * r.value;
    const bool pass = verdict(hersch_protter_lower(p, c.inradius, options.pi), r.value).pass;
    t.rows[i] = {a, c.inradius, r.value, scaled, target, scaled / target, r.converged, pass, kPyramidCite};
  });
  t.notes = {"planar pyramids C_alpha, h = " + fmt::format("{}", options.h > 0.0 ? options.h : 1.0 / 24.0) +
                 " * alpha",
             "pi_p: " + to_string(options.pi)};
  t.plot = {PlotSpec::Kind::Line, "alpha", {"scaled", "target"}, true};
  return t;
}

Table run_slab_sweep(double p, std::vector<double> lengths, const SweepOptions& options) {
  sort_grid(lengths, false, "L");
  if (lengths.front() < 1.0) throw DomainError("L must be at least 1");
  Table t;
  t.experiment = "slab";
  t.columns = {"L", "lambda", "target", "gap", "converged", "pass", "citation"};
  t.rows.resize(lengths.size());
  const auto bound = hersch_protter_lower(p, 0.5, options.pi);
  const double h = options.h > 0.0 ? options.h : 1.0 / 32.0;
  for_each_row(lengths.size(), options.threads, [&](std::size_t i) {
    const double L = lengths[i];
    const auto r = minimize_lambda_p(rectangle(L, 1.0), p, solver_config(p, h, options));
    t.rows[i] = {L, r.value, bound.value, (r.value - bound.value) / bound.value, r.converged,
                 verdict(bound, r.value).pass, kSlabCite};
  });
  t.notes = {"L x 1 boxes, h = " + fmt::format("{}", h), "pi_p: " + to_string(options.pi)};
  t.plot = {PlotSpec::Kind::Line, "L", {"lambda", "target"}, true};
  return t;
}

Table run_subhomogeneous(double p, double q, std::vector<double> lengths, const SweepOptions& options) {
  sort_grid(lengths, false, "L");
  if (lengths.front() < 1.0) throw DomainError("L must be at least 1");
  check_exponents(p, q);
  const int N = 2;
  const double exponent = N * p / q - N + p;
  Table t;
  t.experiment = q < p ? "subhom" : "subhom-control";
  t.columns = {"L", "R", "lambda", "exponent", "scaled", "converged", "pass", "citation"};
  t.rows.resize(lengths.size());
  const double h = options.h > 0.0 ? options.h : 1.0 / 16.0;
  for_each_row(lengths.size(), options.threads, [&](std::size_t i) {
    const double L = lengths[i];
    const auto pg = rectangle(L, 1.0);
    const double R = chebyshev_center(pg).radius;
    const auto r = minimize_lambda_pq(pg, p, q, solver_config(p, h, options));
    t.rows[i] = {L, R, r.value, exponent, std::pow(R, exponent) * r.value, r.converged, r.value > 0.0,
                 kSubhomCite};
  });
  t.notes = {fmt::format("p = {}, q = {}, L x 1 boxes, h = {}", p, q, h)};
  t.plot = {PlotSpec::Kind::Line, "L", {"scaled"}, true};
  return t;
}

Table run_pinfty_trend(const ConvexPolygon& polygon, std::vector<double> ps, const SweepOptions& options) {
  sort_grid(ps, false, "p");
  for (double p : ps) check_exponents(p, p);
  const double R = chebyshev_center(polygon).radius;
  const double h = options.h > 0.0 ? options.h : polygon.diameter() / 45.0;
  Table t;
  t.experiment = "pinfty";
  t.columns = {"p", "lambda", "root", "inv_R", "gap", "bound_root", "converged", "pass", "citation"};
  t.rows.resize(ps.size());
  for_each_row(ps.size(), options.threads, [&](std::size_t i) {
    const double p = ps[i];
    const auto r = minimize_lambda_p(polygon, p, solver_config(p, h, options));
    const double root = std::pow(r.value, 1.0 / p);
    const auto bound = hersch_protter_lower(p, R, options.pi);
    t.rows[i] = {p,        r.value, root, 1.0 / R, std::abs(root - 1.0 / R), std::pow(bound.value, 1.0 / p),
                 r.converged, verdict(bound, r.value).pass, kPinftyCite};
  });
  t.notes = {"h = " + fmt::format("{}", h), "pi_p: " + to_string(options.pi)};
  t.plot = {PlotSpec::Kind::Line, "p", {"root", "inv_R", "bound_root"}, false};
  return t;
}

Table run_hardy_pointwise(const ConvexPolygon& polygon, double p, const HardyFields& fields,
                          const SweepOptions& options) {
  check_exponents(p, p);
  const double h = options.h > 0.0 ? options.h : std::min(polygon.diameter() / 24.0, 0.9 * polygon.shortest_edge());
  const auto mesh = triangulate(polygon, h);
  const auto n = static_cast<Eigen::Index>(mesh.size());

  std::vector<std::string> labels;
  std::vector<DiscreteField> samples;
  std::vector<bool> converged;
  if (fields.eigenfunction) {
    auto c = solver_config(p, h, options);
    const auto r = solve_on_mesh(mesh, c);
    labels.push_back("eigenfunction");
    samples.push_back(r.minimizer);
    converged.push_back(r.converged);
  }
  if (fields.hat) {
    const Point2 c = polygon.centroid();
    Eigen::Index best = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (mesh.marks[i] != NodeMark::Free) continue;
      if (best < 0 || (mesh.nodes[i] - c).norm() < (mesh.nodes[best] - c).norm()) best = i;
    }
    if (best >= 0) {
      DiscreteField u = DiscreteField::Zero(n);
      u[best] = 1.0;
      labels.push_back("hat");
      samples.push_back(u);
      converged.push_back(true);
    }
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < fields.random; ++k) {
    // Alternate rough nodal noise with perturbed powers of the distance.
    const double a = 0.3 + 2.0 * unit(rng);
    DiscreteField u = DiscreteField::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (mesh.marks[i] != NodeMark::Free) continue;
      const double d = distance_to_boundary(polygon, mesh.nodes[i]);
      u[i] = k % 2 ? 2.0 * unit(rng) - 1.0 : std::pow(d, a) * (1.0 + 0.2 * unit(rng));
    }
    labels.push_back(fmt::format("random-{}", k));
    samples.push_back(std::move(u));
    converged.push_back(true);
  }

  const double constant = std::pow((p - 1.0) / p, p);
  Table t;
  t.experiment = "hardy";
  t.columns = {"field", "lhs", "rhs", "ratio", "converged", "pass", "citation"};
  t.rows.resize(samples.size());
  for_each_row(samples.size(), options.threads, [&](std::size_t k) {
    const auto& u = samples[k];
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t tri = 0; tri < mesh.triangles.size(); ++tri) {
      const auto& v = mesh.triangles[tri];
      const Point2 centroid = (mesh.nodes[v[0]] + mesh.nodes[v[1]] + mesh.nodes[v[2]]) / 3.0;
      const double mean = (u[v[0]] + u[v[1]] + u[v[2]]) / 3.0;
      const double area = mesh.triangle_area(tri);
      lhs += area * std::pow(std::abs(mean) / distance_to_boundary(polygon, centroid), p);
      rhs += area * std::pow(p1_gradient(mesh, tri, u).norm(), p);
    }
    lhs *= constant;
    t.rows[k] = {labels[k], lhs, rhs, lhs / rhs, static_cast<bool>(converged[k]), lhs <= rhs, kHardyCite};
  });
  t.notes = {fmt::format("p = {}, {} nodes, h = {}", p, mesh.size(), h)};
  t.plot = {PlotSpec::Kind::Bar, "field", {"ratio"}, false};
  return t;
}

bool BoundsReport::ok() const {
  return converged && std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

BoundsReport run_bounds_report(const ConvexPolygon& polygon, double p, const ReportOptions& options) {
  if (!(options.inradius_factor > 0.0)) throw DomainError("inradius factor must be positive");
  const int N = 2;
  const double R = chebyshev_center(polygon).radius * options.inradius_factor;
  const double P = polygon.perimeter(), V = polygon.area();

  SolverConfig c;
  c.p = p;
  c.h = options.h;
  c.tolerance = options.tolerance;
  c.seed = options.seed;
  const auto r = minimize_lambda_p(polygon, p, c);

  BoundsReport out;
  out.p = p;
  out.measured = r.value;
  out.converged = r.converged;
  const auto ball = ball_reference(p);
  for (const auto& b : {hardy_lower(p, R), hersch_protter_lower(p, R, options.pi),
                        ball_upper(p, R, ball.value, ball.provenance),
                        faber_krahn_lower(p, N, V, ball.value, ball.volume, ball.provenance),
                        isoperimetric_lower(p, N, P, V, options.pi), isoperimetric_upper(p, P, V, options.pi)}) {
    out.verdicts.push_back(verdict(b, r.value));
  }
  out.verdicts.push_back(geometric_check(R, N, P, V));
  return out;
}

Table to_table(const BoundsReport& report) {
  Table t;
  t.experiment = "bounds";
  t.columns = {"name", "side", "value", "measured", "margin", "pass", "citation", "converged"};
  for (const auto& v : report.verdicts) {
    t.rows.push_back({v.report.name, to_string(v.report.side), v.report.value, v.measured, v.margin, v.pass,
                      v.report.citation, report.converged});
  }
  t.notes = {fmt::format("p = {}, measured lambda = {}", report.p, report.measured)};
  t.plot = {PlotSpec::Kind::Bar, "name", {"value"}, false};
  return t;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t k = 0; k < table.columns.size(); ++k) out += (k ? "," : "") + table.columns[k];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + csv_cell(row[k]);
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json to_json(const Table& table) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto o = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < row.size(); ++k) {
      std::visit([&](const auto& v) { o[table.columns[k]] = v; }, row[k]);
    }
    rows.push_back(std::move(o));
  }
  return rows;
}

std::string svg_filename(const Table& table) {
  return fmt::format("{}-{:016x}.svg", table.experiment, fnv1a(to_csv(table)));
}

std::string to_svg(const Table& table) {
  const double W = 640, H = 400, left = 70, right = 20, top = 30, bottom = 60;
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
      "font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{}\" y=\"18\" font-size=\"13\">{}</text>\n",
      W, H, left, escape_xml(table.experiment));
  if (table.rows.empty()) return s + "</svg>\n";

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& name : table.plot.y) {
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      lo = std::min(lo, table.number(i, name));
      hi = std::max(hi, table.number(i, name));
    }
  }
  if (table.plot.kind == PlotSpec::Kind::Bar) lo = std::min(lo, 0.0);
  if (hi <= lo) hi = lo + 1.0;
  auto py = [&](double y) { return top + (H - top - bottom) * (hi - y) / (hi - lo); };
  s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", left, top, H - bottom);
  s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", left, H - bottom,
                   W - right);
  s += fmt::format("<text x=\"4\" y=\"{}\">{:.4g}</text>\n<text x=\"4\" y=\"{}\">{:.4g}</text>\n", py(hi) + 4, hi,
                   py(lo) + 4, lo);

  const std::size_t n = table.rows.size();
  if (table.plot.kind == PlotSpec::Kind::Bar) {
    const double slot = (W - left - right) / static_cast<double>(n);
    const std::size_t label = table.column(table.plot.x);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = table.number(i, table.plot.y.front());
      const double x = left + slot * (static_cast<double>(i) + 0.15);
      s += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n", x,
                       std::min(py(v), py(0.0)), 0.7 * slot, std::abs(py(0.0) - py(v)), colors[0]);
      if (n <= 16) {
        s += fmt::format("<text x=\"{:.2f}\" y=\"{}\" transform=\"rotate(30 {:.2f} {})\">{}</text>\n", x,
                         H - bottom + 14, x, H - bottom + 14,
                         escape_xml(csv_cell(table.rows[i][label])));
      }
    }
    if (std::find(table.columns.begin(), table.columns.end(), "measured") != table.columns.end()) {
      const double m = table.number(0, "measured");
      if (m >= lo && m <= hi) {
        s += fmt::format("<line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\" stroke=\"{}\" "
                         "stroke-dasharray=\"4 3\"/>\n",
                         left, py(m), W - right, py(m), colors[1]);
      }
    }
    return s + "</svg>\n";
  }

  auto tx = [&](double x) { return table.plot.log_x ? std::log10(x) : x; };
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  for (std::size_t i = 0; i < n; ++i) {
    xlo = std::min(xlo, tx(table.number(i, table.plot.x)));
    xhi = std::max(xhi, tx(table.number(i, table.plot.x)));
  }
  if (xhi <= xlo) xhi = xlo + 1.0;
  auto px = [&](double x) { return left + (W - left - right) * (tx(x) - xlo) / (xhi - xlo); };
  s += fmt::format("<text x=\"{}\" y=\"{}\">{}{}</text>\n", (W + left) / 2, H - 20, escape_xml(table.plot.x),
                   table.plot.log_x ? " (log)" : "");
  for (std::size_t k = 0; k < table.plot.y.size(); ++k) {
    std::string pts;
    for (std::size_t i = 0; i < n; ++i) {
      pts += fmt::format("{:.2f},{:.2f} ", px(table.number(i, table.plot.x)), py(table.number(i, table.plot.y[k])));
    }
    const char* color = colors[k % 4];
    s += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n", pts, color);
    s += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", W - right - 110, top + 14 * (k + 1), color,
                     escape_xml(table.plot.y[k]));
  }
  return s + "</svg>\n";
}

std::filesystem::path write_outputs(const Table& table, const std::filesystem::path& out, Format format) {
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw DomainError("cannot write " + out.string());
    f << (format == Format::Csv ? to_csv(table) : to_json(table).dump(2) + "\n");
  }
  const auto svg = out.parent_path() / svg_filename(table);
  std::ofstream f(svg, std::ios::binary);
  if (!f) throw DomainError("cannot write " + svg.string());
  f << to_svg(table);
  return svg;
}

}  // namespace pfreq
