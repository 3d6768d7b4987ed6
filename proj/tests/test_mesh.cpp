#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pfreq/errors.hpp"
#include "pfreq/mesh.hpp"
#include "support/oracles.hpp"

using namespace pfreq;

namespace {

// Every interior mesh edge is shared by exactly two triangles and every
// boundary mesh edge lies on the polygon boundary.
void check_conforming(const TriangleMesh& mesh, const ConvexPolygon& pg) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  }
  for (const auto& [e, c] : count) {
    CHECK(c <= 2);
    if (c == 1) {
      const Point2 mid = 0.5 * (mesh.nodes[e.first] + mesh.nodes[e.second]);
      CHECK(std::abs(oracle::line_distance(pg.vertices(), mid)) < 1e-12);
    }
  }
}

}  // namespace

TEST_CASE("unit square at h = 0.5 by hand") {
  const auto mesh = triangulate(rectangle(1.0, 1.0), 0.5);
  CHECK(mesh.size() == 9);
  CHECK(mesh.triangles.size() == 8);
  int dirichlet = 0;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    if (mesh.marks[i] == NodeMark::Dirichlet) ++dirichlet;
    const bool centre = (mesh.nodes[i] - Point2(0.5, 0.5)).norm() < 1e-15;
    CHECK((mesh.marks[i] == NodeMark::Free) == centre);
  }
  CHECK(dirichlet == 8);
  int around_centre = 0;
  for (const auto& t : mesh.triangles) {
    for (int k : t) around_centre += (mesh.nodes[k] - Point2(0.5, 0.5)).norm() < 1e-15;
  }
  CHECK(around_centre == 6);
  check_conforming(mesh, rectangle(1.0, 1.0));
}

TEST_CASE("triangle boundary nodes are all Dirichlet") {
  const ConvexPolygon tri({{0.0, 0.0}, {2.0, 0.0}, {0.3, 1.1}});
  const auto mesh = triangulate(tri, 0.1);
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double d = oracle::line_distance(tri.vertices(), mesh.nodes[i]);
    CHECK(d > -1e-12);
    CHECK((mesh.marks[i] == NodeMark::Dirichlet) == (d < 1e-12));
  }
}

TEST_CASE("random polygons: area, edge length, conformity") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    const auto pg = oracle::random_polygon(rng);
    const double h = std::min(pg.diameter() / 24.0, 0.9 * pg.shortest_edge());
    const auto mesh = triangulate(pg, h);
    CAPTURE(trial);
    CHECK(mesh.total_area() == doctest::Approx(oracle::shoelace(pg.vertices())).epsilon(1e-12));
    CHECK(mesh.max_edge() <= 1.5 * h);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) CHECK(mesh.triangle_area(t) > 1e-14);
    check_conforming(mesh, pg);
    // Deterministic in (polygon, h).
    const auto again = triangulate(pg, h);
    CHECK(again.triangles == mesh.triangles);
  }
}

TEST_CASE("disk stand-in and rotated rectangle") {
  const auto disk = to_polygon(ShapeFamily{Disk{1.0}});
  const auto mesh = triangulate(disk, 1.0 / 48.0);
  CHECK(mesh.total_area() == doctest::Approx(oracle::shoelace(disk.vertices())).epsilon(1e-12));
  check_conforming(mesh, disk);

  const double c = std::cos(0.3), s = std::sin(0.3);
  const ConvexPolygon rot({{0.0, 0.0}, {2.0 * c, 2.0 * s}, {2.0 * c - s, 2.0 * s + c}, {-s, c}});
  const auto m2 = triangulate(rot, 0.1);
  CHECK(m2.total_area() == doctest::Approx(2.0).epsilon(1e-12));
  check_conforming(m2, rot);
}

TEST_CASE("mesh failures") {
  CHECK_THROWS_AS(triangulate(rectangle(1.0, 0.2), 0.25), MeshFailure);
  CHECK_THROWS_AS(triangulate(rectangle(1.0, 1.0), 0.0), DomainError);
  MeshOptions strict;
  strict.min_angle = 1.2;  // no triangle has every angle above 68 degrees
  CHECK_THROWS_AS(triangulate(regular_polygon(5, 1.0), 0.1, strict), MeshFailure);
}

TEST_CASE("uniform refinement") {
  for (const auto& pg : {rectangle(1.0, 1.0), regular_polygon(5, 1.0)}) {
    const auto coarse = triangulate(pg, 0.25);
    const auto fine = refine_uniform(coarse);
    std::map<std::pair<int, int>, int> edges;
    for (const auto& t : coarse.triangles) {
      for (int k = 0; k < 3; ++k) edges[{std::min(t[k], t[(k + 1) % 3]), std::max(t[k], t[(k + 1) % 3])}];
    }
    CHECK(fine.size() == coarse.size() + edges.size());
    CHECK(fine.triangles.size() == 4 * coarse.triangles.size());
    CHECK(fine.total_area() == doctest::Approx(pg.area()).epsilon(1e-12));
    CHECK(fine.h == doctest::Approx(0.5 * coarse.h));
    check_mesh(fine, pg);
    for (std::size_t i = 0; i < fine.size(); ++i) {
      const double d = oracle::line_distance(pg.vertices(), fine.nodes[i]);
      CHECK((fine.marks[i] == NodeMark::Dirichlet) == (d < 1e-12));
    }
  }
}

TEST_CASE("Dirichlet edge subsets") {
  auto mesh = triangulate(rectangle(1.0, 1.0), 0.25);
  set_dirichlet_edges(mesh, {0});
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    CHECK((mesh.marks[i] == NodeMark::Dirichlet) == (std::abs(mesh.nodes[i].y()) < 1e-15));
  }
  // Refinement keeps the side edges free even between two pinned corners.
  set_dirichlet_edges(mesh, {0, 2});
  const auto fine = refine_uniform(mesh);
  for (std::size_t i = 0; i < fine.size(); ++i) {
    const double y = fine.nodes[i].y();
    CHECK((fine.marks[i] == NodeMark::Dirichlet) == (std::abs(y) < 1e-15 || std::abs(y - 1.0) < 1e-15));
  }
  CHECK_THROWS_AS(set_dirichlet_edges(mesh, {4}), DomainError);
}
