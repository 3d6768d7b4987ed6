#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pfreq/eigensolver.hpp"
#include "pfreq/errors.hpp"
#include "pfreq/poincare1d.hpp"
#include "support/oracles.hpp"

using namespace pfreq;

namespace {

SolverConfig with_h(double h) {
  SolverConfig c;
  c.h = h;
  return c;
}

DiscreteField sine_bump(const TriangleMesh& mesh) {
  DiscreteField u(static_cast<Eigen::Index>(mesh.size()));
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const auto& x = mesh.nodes[i];
    u[static_cast<Eigen::Index>(i)] = std::sin(std::numbers::pi * x.x()) * std::sin(std::numbers::pi * x.y());
  }
  return u;
}

}  // namespace

TEST_CASE("hat function on the coarse unit square") {
  const auto mesh = triangulate(rectangle(1.0, 1.0), 0.5);
  DiscreteField u = DiscreteField::Zero(9);
  for (std::size_t i = 0; i < 9; ++i) {
    if ((mesh.nodes[i] - Point2(0.5, 0.5)).norm() < 1e-15) u[static_cast<Eigen::Index>(i)] = 1.0;
  }
  // Four triangles with slope 2 and two with slope 2 sqrt 2, each of area
  // 1/8; every triangle has vertex mean 1/3.
  for (double p : {1.5, 2.0, 3.0}) {
    for (double q : {1.0, p, 4.0}) {
      const double e = (4.0 * std::pow(2.0, p) + 2.0 * std::pow(2.0 * std::sqrt(2.0), p)) / 8.0;
      const double d = 6.0 / 8.0 * std::pow(1.0 / 3.0, q);
      CHECK(rayleigh_pq(mesh, u, p, q) == doctest::Approx(e / std::pow(d, p / q)).epsilon(1e-13));
      CHECK(rayleigh_pq(mesh, 2.0 * u, p, q) == doctest::Approx(rayleigh_pq(mesh, u, p, q)).epsilon(1e-13));
    }
  }
  CHECK(rayleigh_pq(mesh, u, 2.0, 2.0) == doctest::Approx(48.0).epsilon(1e-14));
  CHECK_THROWS_AS(rayleigh_pq(mesh, DiscreteField::Zero(9), 2.0, 2.0), ZeroDenominator);
  // Values on pinned nodes do not count.
  DiscreteField corners = DiscreteField::Zero(9);
  corners[0] = 1.0;
  CHECK_THROWS_AS(rayleigh_pq(mesh, corners, 2.0, 2.0), ZeroDenominator);
}

TEST_CASE("separation-of-variables and Bessel oracles, p = 2") {
  const double square = 2.0 * std::numbers::pi * std::numbers::pi;
  const auto rs = minimize_lambda_p(rectangle(1.0, 1.0), 2.0, with_h(1.0 / 32.0));
  CHECK(rs.converged);
  CHECK(std::abs(rs.value / square - 1.0) < 0.02);
  CHECK(rs.value >= square);

  const double box = std::numbers::pi * std::numbers::pi * (1.0 + 1.0 / 64.0);
  const auto rb = minimize_lambda_p(rectangle(8.0, 1.0), 2.0, with_h(1.0 / 16.0));
  CHECK(rb.converged);
  CHECK(std::abs(rb.value / box - 1.0) < 0.02);
  CHECK(rb.value >= box);

  const double j = oracle::bessel_j01();
  const auto rd = minimize_lambda_p(to_polygon(ShapeFamily{Disk{1.0}}), 2.0, with_h(1.0 / 48.0));
  CHECK(rd.converged);
  CHECK(std::abs(rd.value / (j * j) - 1.0) < 0.02);
  CHECK(rd.value >= j * j);
}

TEST_CASE("result invariants") {
  for (double p : {1.5, 2.0, 3.0}) {
    const auto r = minimize_lambda_p(regular_polygon(6, 1.0), p, with_h(1.0 / 12.0));
    CAPTURE(p);
    CHECK(r.converged);
    CHECK(r.value > 0.0);
    CHECK(r.value == rayleigh_pq(r.mesh, r.minimizer, p, p));
    CHECK(r.restart_values.size() == 4);
    for (double v : r.restart_values) CHECK(v == doctest::Approx(r.value).epsilon(1e-6));
    for (std::size_t i = 0; i < r.mesh.size(); ++i) {
      if (r.mesh.marks[i] == NodeMark::Free) CHECK(r.minimizer[static_cast<Eigen::Index>(i)] > 0.0);
      else CHECK(r.minimizer[static_cast<Eigen::Index>(i)] == 0.0);
    }
    CHECK(r.residual < 1e-3);
  }
}

TEST_CASE("every discrete quotient clears the inradius bound") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 4; ++trial) {
    const auto pg = oracle::random_polygon(rng);
    const double radius = chebyshev_center(pg).radius;
    const auto mesh = triangulate(pg, std::min(pg.diameter() / 20.0, 0.9 * pg.shortest_edge()));
    for (double p : {1.5, 2.0, 3.0}) {
      const double bound = std::pow(pi_p_reference(p) / 2.0, p) / std::pow(radius, p);
      for (int k = 0; k < 100; ++k) {
        // Alternate between rough fields and smooth powers of the distance.
        const double a = 0.3 + 2.0 * unit(rng);
        DiscreteField u(static_cast<Eigen::Index>(mesh.size()));
        for (std::size_t i = 0; i < mesh.size(); ++i) {
          const double d = std::max(0.0, oracle::line_distance(pg.vertices(), mesh.nodes[i]));
          u[static_cast<Eigen::Index>(i)] = k % 2 ? unit(rng) - 0.3 : std::pow(d, a) * (1.0 + 0.2 * unit(rng));
        }
        CHECK(rayleigh_pq(mesh, u, p, p) >= bound);
      }
      SolverConfig c;
      c.restarts = 0;
      c.p = p;
      CHECK(solve_on_mesh(mesh, c).value >= bound);
    }
  }
}

TEST_CASE("nested refinement is monotone") {
  for (double p : {2.0, 3.0}) {
    SolverConfig c;
    c.p = p;
    c.restarts = 0;
    auto mesh = triangulate(regular_polygon(5, 1.0), 0.3);
    double prev = solve_on_mesh(mesh, c).value;
    for (int level = 0; level < 2; ++level) {
      mesh = refine_uniform(mesh);
      const double next = solve_on_mesh(mesh, c).value;
      CAPTURE(p);
      CHECK(next <= prev + 1e-10 * prev);
      prev = next;
    }
  }
}

TEST_CASE("domain monotonicity and scaling") {
  const auto tri = ConvexPolygon({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
  const auto sq = rectangle(1.0, 1.0);
  for (double p : {1.5, 3.0}) {
    const double lt = minimize_lambda_p(tri, p, with_h(1.0 / 24.0)).value;
    const double ls = minimize_lambda_p(sq, p, with_h(1.0 / 24.0)).value;
    CHECK(lt >= 0.98 * ls);
  }
  const auto hex = regular_polygon(6, 1.0);
  const double p = 3.0;
  const double base = minimize_lambda_p(hex, p, with_h(1.0 / 10.0)).value;
  for (double t : {0.5, 2.0}) {
    const double scaled = minimize_lambda_p(hex.scaled(t), p, with_h(t / 10.0)).value;
    CHECK(scaled * std::pow(t, p) == doctest::Approx(base).epsilon(1e-2));
  }
}

TEST_CASE("(p, q) quotient") {
  const auto sq = rectangle(1.0, 1.0);
  const auto a = minimize_lambda_p(sq, 3.0, with_h(1.0 / 16.0));
  const auto b = minimize_lambda_pq(sq, 3.0, 3.0, with_h(1.0 / 16.0));
  CHECK(std::abs(a.value - b.value) <= 1e-10 * a.value);

  const auto c = minimize_lambda_pq(sq, 2.0, 2.0, with_h(1.0 / 32.0));
  CHECK(std::abs(c.value / (2.0 * std::numbers::pi * std::numbers::pi) - 1.0) < 0.02);

  double prev = std::numeric_limits<double>::infinity();
  for (double length : {1.0, 2.0, 4.0, 8.0}) {
    const auto r = minimize_lambda_pq(rectangle(length, 1.0), 2.0, 1.0, with_h(1.0 / 16.0));
    CAPTURE(length);
    CHECK(r.converged);
    CHECK(r.value < prev);
    prev = r.value;
  }

  CHECK_THROWS_AS(check_exponents(1.5, 6.0), InadmissibleExponent);
  CHECK_NOTHROW(check_exponents(1.5, 5.9));
  CHECK_NOTHROW(check_exponents(3.0, 100.0));
  CHECK_THROWS_AS(check_exponents(2.0, std::numeric_limits<double>::infinity()), Unsupported);
  CHECK_THROWS_AS(check_exponents(2.0, 0.5), InadmissibleExponent);
  CHECK_THROWS_AS(check_exponents(1.01, 1.5), DomainError);
  CHECK_THROWS_AS(minimize_lambda_pq(sq, 1.5, 7.0), InadmissibleExponent);
}

TEST_CASE("mixed boundary conditions") {
  const auto sq = rectangle(1.0, 1.0);
  const auto one = minimize_mixed(sq, {0}, 2.0, with_h(1.0 / 32.0));
  const double quarter = std::pow(std::numbers::pi / 2.0, 2);
  CHECK(one.converged);
  CHECK(std::abs(one.value / quarter - 1.0) < 0.02);

  // Piece of the square's decomposition about its centre, base pinned.
  const ConvexPolygon piece({{0.0, 0.0}, {1.0, 0.0}, {0.5, 0.5}});
  for (double p : {2.0, 3.0}) {
    const auto r = minimize_mixed(piece, {0}, p, with_h(1.0 / 32.0));
    const double bound = std::pow(pi_p_reference(p) / 2.0, p) / std::pow(0.5, p);
    CHECK(r.value >= 0.98 * bound);
  }

  const auto all = minimize_mixed(sq, {0, 1, 2, 3}, 2.5, with_h(1.0 / 16.0));
  const auto plain = minimize_lambda_p(sq, 2.5, with_h(1.0 / 16.0));
  CHECK(all.value == plain.value);
  CHECK_THROWS_AS(minimize_mixed(sq, {}, 2.0), DomainError);
}

TEST_CASE("gradient check") {
  const auto mesh = triangulate(rectangle(1.0, 1.0), 1.0 / 8.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 0.05);
  DiscreteField u = sine_bump(mesh);
  for (Eigen::Index i = 0; i < u.size(); ++i) u[i] += unit(rng);
  CHECK(gradient_check(mesh, u, 2.0, 2.0, 1e-6) < 1e-6);
  CHECK(gradient_check(mesh, u, 3.0, 3.0, 1e-6, 1e-4) < 1e-4);
  CHECK(gradient_check(mesh, u, 1.3, 1.3, 1e-6, 1e-3) < 1e-3);
  CHECK(gradient_check(mesh, u, 2.0, 1.0, 1e-6) < 1e-6);
}

TEST_CASE("iteration cap raises the flag") {
  SolverConfig c;
  c.h = 1.0 / 16.0;
  c.max_iterations = 2;
  const auto r = minimize_lambda_p(rectangle(1.0, 1.0), 3.0, c);
  CHECK_FALSE(r.converged);
  CHECK(r.value > 0.0);
}
