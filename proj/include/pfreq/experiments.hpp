#pragma once

// Parameter sweeps, pointwise Hardy checks and bound reports, with CSV, JSON
// and SVG output.

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "pfreq/bounds.hpp"
#include "pfreq/geometry.hpp"

namespace pfreq {

using Cell = std::variant<double, std::string, bool>;

struct PlotSpec {
  enum class Kind { Line, Bar };
  Kind kind = Kind::Line;
  std::string x;
  std::vector<std::string> y;
  bool log_x = false;
};

/// Fixed columns per experiment. Rows carry "converged", "pass" and
/// "citation" cells.
struct Table {
  std::string experiment;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;
  PlotSpec plot;

  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
  /// Every "pass" and "converged" cell is true.
  bool ok() const;
};

struct SweepOptions {
  double h = 0.0;  // 0 picks the per-experiment default; relative to alpha for pyramids
  double tolerance = 1e-10;
  std::uint64_t seed = 1;
  int threads = 1;
  PiSource pi = PiSource::Estimate;
};

/// (alpha, R, lambda, R^p lambda, target, ratio) on the planar pyramids,
/// alphas sorted decreasing. Default h = alpha / 24.
Table run_pyramid_sweep(double p, std::vector<double> alphas, const SweepOptions& options = {});

/// (L, lambda, target, gap) on L x 1 boxes, Ls sorted increasing.
/// Default h = 1/32.
Table run_slab_sweep(double p, std::vector<double> lengths, const SweepOptions& options = {});

/// (L, R, lambda_pq, exponent, scaled) on L x 1 boxes with
/// scaled = R^exponent lambda_pq, exponent = Np/q - N + p. Default h = 1/16.
Table run_subhomogeneous(double p, double q, std::vector<double> lengths,
                         const SweepOptions& options = {});

/// (p, lambda, root, inv_R, gap, bound_root) with root = lambda^{1/p}.
/// Default h = diameter / 45.
Table run_pinfty_trend(const ConvexPolygon& polygon, std::vector<double> ps,
                       const SweepOptions& options = {});

struct HardyFields {
  int random = 50;
  bool eigenfunction = true;
  bool hat = true;
};

/// One row per field: ((p-1)/p)^p sum |T| |u_T / d(c_T)|^p against
/// sum |T| |grad u|^p, with d the boundary distance at the centroid.
/// Default h = diameter / 24.
Table run_hardy_pointwise(const ConvexPolygon& polygon, double p, const HardyFields& fields = {},
                          const SweepOptions& options = {});

struct ReportOptions {
  double h = 0.0;
  double tolerance = 1e-10;
  std::uint64_t seed = 1;
  PiSource pi = PiSource::Estimate;
  // Fault injection: every bound sees R * inradius_factor.
  double inradius_factor = 1.0;
};

struct BoundsReport {
  double p = 2.0;
  double measured = 0.0;
  bool converged = false;
  std::vector<Verdict> verdicts;
  bool ok() const;
};

BoundsReport run_bounds_report(const ConvexPolygon& polygon, double p, const ReportOptions& options = {});
/// Columns (name, side, value, measured, margin, pass, citation) plus a
/// converged flag.
Table to_table(const BoundsReport& report);

std::string to_csv(const Table& table);
nlohmann::ordered_json to_json(const Table& table);
std::string to_svg(const Table& table);
/// <experiment>-<16 hex digits of the FNV-1a hash of the CSV>.svg
std::string svg_filename(const Table& table);

enum class Format { Csv, Json };

/// Writes the table to `out` and the plot next to it; returns the SVG path.
std::filesystem::path write_outputs(const Table& table, const std::filesystem::path& out, Format format);

}  // namespace pfreq
