#pragma once

// Conforming triangulations of convex polygons for P1 elements.

#include <array>
#include <string>
#include <vector>

#include "pfreq/geometry.hpp"

namespace pfreq {

enum class NodeMark { Free, Dirichlet };

struct TriangleMesh {
  std::vector<Point2> nodes;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<NodeMark> marks;
  // Polygon edges through each node (-1 when unused). Corners sit on two.
  std::vector<std::array<int, 2>> on_edge;
  // Per polygon edge; marks follow from this.
  std::vector<bool> dirichlet_edges;
  double h = 0.0;

  std::size_t size() const { return nodes.size(); }
  bool on_boundary(std::size_t node) const { return on_edge[node][0] >= 0; }
  bool on_polygon_edge(std::size_t node, int edge) const {
    return on_edge[node][0] == edge || on_edge[node][1] == edge;
  }
  double triangle_area(std::size_t t) const;
  double total_area() const;
  double max_edge() const;
  // Smallest interior angle over all triangles, in radians.
  double min_angle() const;
  std::size_t free_count() const;
};

struct MeshOptions {
  // Smallest admissible triangle angle in radians, lowered to half the
  // sharpest polygon corner when that is smaller. Violations raise MeshFailure.
  double min_angle = 0.1;
  double max_edge_factor = 1.5;
};

/// Structured two-triangles-per-cell mesh for axis-aligned rectangles,
/// Delaunay triangulation of boundary nodes plus an equilateral lattice
/// otherwise. Every boundary node is marked Dirichlet.
TriangleMesh triangulate(const ConvexPolygon& polygon, double h, const MeshOptions& opts = {});

/// Default target edge length: diameter / 64, capped below the shortest edge.
double default_mesh_size(const ConvexPolygon& polygon);

/// Split every triangle into four through edge midpoints.
TriangleMesh refine_uniform(const TriangleMesh& mesh);

/// Mark nodes on the listed polygon edges Dirichlet and every other node Free.
void set_dirichlet_edges(TriangleMesh& mesh, const std::vector<int>& edges);

/// Throws MeshFailure when the mesh is not a conforming cover of `polygon`.
void check_mesh(const TriangleMesh& mesh, const ConvexPolygon& polygon);

}  // namespace pfreq
