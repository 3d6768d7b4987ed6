// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "pfreq/bounds.hpp"
#include "pfreq/eigensolver.hpp"
#include "pfreq/experiments.hpp"
#include "pfreq/geometry.hpp"
#include "pfreq/poincare1d.hpp"
#include "support/oracles.hpp"

using namespace pfreq;

namespace {

constexpr double kPi = std::numbers::pi;

// Tolerances and budgets.
constexpr double kPi2Tol = 1e-3;
constexpr double kLimitLo = 1.9, kLimitHi = 2.3;
constexpr double kPiBudget = 10.0;
constexpr double kOracleRel = 5e-3;
constexpr double kEigenRel = 0.02;
constexpr double kEigenH = 1.0 / 64.0;
constexpr double kEigenBudget = 60.0;
constexpr int kRandomPolygons = 20;
constexpr double kCertBudget = 180.0;
constexpr double kSlabGap = 0.02;
constexpr int kHardyFields = 50;
constexpr double kConservation = 1e-9;
constexpr double kEnvelopeTol = 1e-9;
constexpr int kEnvelopePolygons = 10;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool strictly_decreasing(const Table& t, const std::string& col) {
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    if (!(t.number(i, col) < t.number(i - 1, col))) return false;
  }
  return true;
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

Outcome ac1() {
  Outcome o;
  auto timed = [&](double p) {
    const auto t0 = std::chrono::steady_clock::now();
    const double v = pi_p_estimate(p, p == 2.0 ? 2000 : 4000);
    const double s = seconds_since(t0);
    o.require(s < kPiBudget, fmt::format("p={} took {:.1f}s", p, s));
    return v;
  };
  const double two = timed(2.0), low = timed(1.05), high = timed(30.0);
  o.require(std::abs(two - kPi) <= kPi2Tol, fmt::format("pi_2 = {:.6f}", two));
  o.require(low >= kLimitLo && low <= kLimitHi, fmt::format("pi_1.05 = {:.6f} outside [1.9, 2.3]", low));
  o.require(high >= kLimitLo && high <= kLimitHi, fmt::format("pi_30 = {:.6f} outside [1.9, 2.3]", high));
  if (o.pass) o.detail = fmt::format("pi_2={:.6f} pi_1.05={:.6f} pi_30={:.6f}", two, low, high);
  return o;
}

Outcome ac2() {
  Outcome o;
  double worst = 0.0;
  for (double p : {1.5, 2.0, 3.0, 5.0}) {
    const double ref = pi_p_reference(p);
    const double rel = std::abs(pi_p_estimate(p, 2000) - ref) / ref;
    worst = std::max(worst, rel);
    o.require(rel < kOracleRel, fmt::format("p={} rel={:.2e}", p, rel));
  }
  if (o.pass) o.detail = fmt::format("worst relative error {:.2e}", worst);
  return o;
}

Outcome ac3() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  SolverConfig c;
  c.h = kEigenH;
  const double j = oracle::bessel_j01();
  const std::vector<std::tuple<std::string, ConvexPolygon, double>> cases{
      {"square", rectangle(1.0, 1.0), 2.0 * kPi * kPi},
      {"8x1", rectangle(8.0, 1.0), kPi * kPi * (1.0 + 1.0 / 64.0)},
      {"disk", to_polygon(ShapeFamily{Disk{1.0}}), j * j}};
  std::string summary;
  for (const auto& [name, pg, exact] : cases) {
    const auto r = minimize_lambda_p(pg, 2.0, c);
    const double rel = r.value / exact - 1.0;
    o.require(std::abs(rel) < kEigenRel && r.converged, fmt::format("{} rel={:.3e} converged={}", name, rel, r.converged));
    summary += fmt::format("{}={:.4f} ({:+.2e}) ", name, r.value, rel);
  }
  const double s = seconds_since(t0);
  o.require(s < kEigenBudget, fmt::format("took {:.1f}s", s));
  if (o.pass) o.detail = summary + fmt::format("in {:.1f}s", s);
  return o;
}

Outcome ac4() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double tightest = std::numeric_limits<double>::infinity();
  int fields = 0;
  for (int k = 0; k < kRandomPolygons; ++k) {
    const auto pg = oracle::random_polygon(rng);
    const double R = chebyshev_center(pg).radius;
    for (double p : {1.5, 2.0, 3.0}) {
      const double bound = std::pow(pi_p_reference(p) / 2.0, p) / std::pow(R, p);
      SolverConfig c;
      c.seed = static_cast<std::uint64_t>(k + 1);
      const auto r = minimize_lambda_p(pg, p, c);
      o.require(r.value >= bound, fmt::format("polygon {} p={} lambda={} < {}", k, p, r.value, bound));
      tightest = std::min(tightest, r.value / bound);
      for (int f = 0; f < 10; ++f) {
        DiscreteField u(static_cast<Eigen::Index>(r.mesh.size()));
        for (std::size_t i = 0; i < r.mesh.size(); ++i) {
          u[static_cast<Eigen::Index>(i)] = r.mesh.marks[i] == NodeMark::Free ? unit(rng) - 0.3 : 0.0;
        }
        if (u.cwiseAbs().maxCoeff() == 0.0) continue;
        ++fields;
        const double q = rayleigh_pq(r.mesh, u, p, p);
        o.require(q >= bound, fmt::format("polygon {} p={} field quotient {} < {}", k, p, q, bound));
      }
    }
  }
  const double s = seconds_since(t0);
  o.require(s < kCertBudget, fmt::format("took {:.1f}s", s));
  if (o.pass) o.detail = fmt::format("{} solves, {} fields, min lambda/bound = {:.4f}, {:.1f}s",
                                     3 * kRandomPolygons, fields, tightest, s);
  return o;
}

Outcome ac5() {
  Outcome o;
  const auto pyr = run_pyramid_sweep(2.0, {0.8, 0.4, 0.2, 0.1});
  o.require(pyr.ok(), "pyramid row failed or did not converge");
  o.require(strictly_decreasing(pyr, "scaled"), "R^2 lambda not strictly decreasing");
  for (std::size_t i = 0; i < pyr.rows.size(); ++i) {
    o.require(pyr.number(i, "scaled") > kPi * kPi / 4.0, fmt::format("row {} below (pi/2)^2", i));
  }
  const auto slab = run_slab_sweep(2.0, {1.0, 2.0, 4.0, 8.0});
  o.require(slab.ok(), "slab row failed or did not converge");
  o.require(strictly_decreasing(slab, "lambda"), "slab lambda not decreasing");
  const double gap = slab.number(3, "gap");
  o.require(gap < kSlabGap, fmt::format("L=8 gap {:.4f}", gap));
  if (o.pass) {
    o.detail = fmt::format("R^2 lambda = {:.4f} {:.4f} {:.4f} {:.4f}; slab gap at L=8 {:.4f}", pyr.number(0, "scaled"),
                           pyr.number(1, "scaled"), pyr.number(2, "scaled"), pyr.number(3, "scaled"), gap);
  }
  return o;
}

Outcome ac6() {
  Outcome o;
  const double p = 2.0;
  const int N = 2;
  const auto ball = ball_reference(p);
  const std::vector<std::pair<std::string, ConvexPolygon>> shapes{
      {"square", rectangle(1.0, 1.0)},
      {"2x1", rectangle(2.0, 1.0)},
      {"8x1", rectangle(8.0, 1.0)},
      {"triangle", regular_polygon(3, 1.0)},
      {"hexagon", regular_polygon(6, 1.0)},
      {"C_0.2", *collapsing_pyramid(2, 0.2).polygon},
      {"disk", to_polygon(ShapeFamily{Disk{1.0}})}};
  for (const auto& [name, pg] : shapes) {
    const double R = chebyshev_center(pg).radius, P = pg.perimeter(), V = pg.area();
    const auto r = minimize_lambda_p(pg, p, {});
    const auto hardy = hardy_lower(p, R), hp = hersch_protter_lower(p, R, PiSource::Reference);
    o.require(hardy.value < hp.value, name + ": hardy >= HP");
    o.require(verdict(hp, r.value).pass, fmt::format("{}: lambda {} below HP {}", name, r.value, hp.value));
    const auto up = verdict(ball_upper(p, R, ball.value, ball.provenance), r.value);
    o.require(up.pass, fmt::format("{}: lambda {} above ball bound {}", name, r.value, up.report.value));
    o.require(isoperimetric_lower(p, N, P, V, PiSource::Reference).value <= hp.value * (1.0 + 1e-12),
              name + ": perimeter bound above HP");
    o.require(geometric_check(R, N, P, V).pass, name + ": R/N > V/P");
    o.require(r.converged, name + ": solve did not converge");
  }
  if (o.pass) o.detail = fmt::format("{} shapes", shapes.size());
  return o;
}

Outcome ac7() {
  Outcome o;
  const std::vector<ConvexPolygon> polygons{rectangle(1.0, 1.0), ConvexPolygon({{0.0, 0.0}, {2.0, 0.0}, {0.3, 1.1}}),
                                            regular_polygon(6, 1.0)};
  int rows = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < polygons.size(); ++k) {
    for (double p : {1.5, 2.0, 4.0}) {
      SweepOptions so;
      so.seed = 100 + k;
      const auto t = run_hardy_pointwise(polygons[k], p, HardyFields{kHardyFields, false, false}, so);
      o.require(t.ok(), fmt::format("polygon {} p={} has a violating field", k, p));
      rows += static_cast<int>(t.rows.size());
      for (std::size_t i = 0; i < t.rows.size(); ++i) worst = std::max(worst, t.number(i, "ratio"));
    }
  }
  if (o.pass) o.detail = fmt::format("{} fields, largest lhs/rhs = {:.4f}", rows, worst);
  return o;
}

Outcome ac8() {
  Outcome o;
  double worst = 0.0;
  for (const auto& pg : {rectangle(1.0, 1.0), ConvexPolygon({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}),
                         regular_polygon(6, 1.0)}) {
    const auto pieces = pyramid_decomposition(to_halfspaces(pg), chebyshev_center(pg));
    double sum = 0.0;
    for (const auto& piece : pieces) sum += piece.measure;
    const double area = oracle::shoelace(pg.vertices());
    worst = std::max(worst, std::abs(sum - area) / area);
  }
  o.require(worst <= kConservation, fmt::format("conservation error {:.2e}", worst));
  std::mt19937_64 rng(2024);
  for (int k = 0; k < kEnvelopePolygons; ++k) {
    const auto pg = oracle::random_polygon(rng);
    const auto env = polyhedral_envelope(pg);
    const double R = chebyshev_center(pg).radius;
    for (const auto& v : pg.vertices()) {
      o.require(env.set.contains(Eigen::VectorXd(v), kEnvelopeTol), fmt::format("polygon {} not contained", k));
    }
    for (std::size_t i = 0; i < env.set.size(); ++i) {
      o.require(std::abs(env.set.slack(i, env.inball.center) - R) <= kEnvelopeTol,
                fmt::format("polygon {} face {} not tangent", k, i));
    }
    o.require(std::abs(chebyshev_center(env.set).radius - R) <= kEnvelopeTol * std::max(1.0, R),
              fmt::format("polygon {} inradius changed", k));
  }
  if (o.pass) o.detail = fmt::format("conservation error {:.2e}; {} envelopes checked", worst, kEnvelopePolygons);
  return o;
}

Outcome ac9() {
  Outcome o;
  const auto t = run_subhomogeneous(2.0, 1.0, {1.0, 2.0, 4.0, 8.0});
  o.require(t.ok(), "q=1 row failed or did not converge");
  o.require(strictly_decreasing(t, "scaled"), "q=1 scaled column not strictly decreasing");
  const auto c = run_subhomogeneous(2.0, 2.0, {1.0, 2.0, 4.0, 8.0});
  o.require(c.ok(), "control row failed or did not converge");
  // The control settles: successive relative changes shrink and it stays
  // bounded away from zero.
  const double first = std::abs(c.number(1, "scaled") / c.number(0, "scaled") - 1.0);
  const double last = std::abs(c.number(3, "scaled") / c.number(2, "scaled") - 1.0);
  o.require(last < first, "control does not settle");
  o.require(c.number(3, "scaled") > 0.45 * c.number(0, "scaled"), "control collapses");
  if (o.pass) {
    o.detail = fmt::format("q=1 scaled {:.4f} -> {:.4f}; control {:.4f} -> {:.4f}", t.number(0, "scaled"),
                           t.number(3, "scaled"), c.number(0, "scaled"), c.number(3, "scaled"));
  }
  return o;
}

Outcome ac10() {
  Outcome o;
  const auto t = run_pinfty_trend(rectangle(1.0, 1.0), {2.0, 5.0, 10.0, 20.0});
  o.require(t.ok(), "row failed or did not converge");
  o.require(strictly_decreasing(t, "gap"), "gap not strictly decreasing");
  if (o.pass) {
    o.detail = fmt::format("|lambda^(1/p) - 2| = {:.4f} {:.4f} {:.4f} {:.4f}", t.number(0, "gap"), t.number(1, "gap"),
                           t.number(2, "gap"), t.number(3, "gap"));
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 pi_p values", ac1},
      {"AC2 pi_p oracle equivalence", ac2},
      {"AC3 eigensolver oracles", ac3},
      {"AC4 inradius bound certification", ac4},
      {"AC5 sharpness trends", ac5},
      {"AC6 inequality chain", ac6},
      {"AC7 Hardy pointwise", ac7},
      {"AC8 decomposition and envelopes", ac8},
      {"AC9 sub-homogeneous degeneration", ac9},
      {"AC10 p to infinity trend", ac10}};
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    fmt::print("{} {}: {} [{:.1f}s]\n", o.pass ? "PASS" : "FAIL", name, o.detail, seconds_since(t0));
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
