#pragma once

// Convex geometry in the plane (general polygons) and analytic shape families
// in any dimension: inradius, measures, contact sets, the tangent envelope and
// the pyramid decomposition about the incenter.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pfreq {

using Point2 = Eigen::Vector2d;

struct GeometryTolerances {
  double tangency = 1e-9;
  double containment = 1e-9;
  // diameter / minimal width above which a polygon is rejected as a needle.
  double max_aspect = 1e6;
};

/// Counterclockwise, strictly convex polygon. Validated on construction.
class ConvexPolygon {
 public:
  explicit ConvexPolygon(std::vector<Point2> vertices,
                         const GeometryTolerances& tol = {});

  const std::vector<Point2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point2& vertex(std::size_t i) const { return vertices_[i % size()]; }
  const Point2& edge_start(std::size_t i) const { return vertex(i); }
  const Point2& edge_end(std::size_t i) const { return vertex(i + 1); }
  double edge_length(std::size_t i) const;
  // Unit outward normal of edge i (from vertex i to vertex i+1).
  Point2 outward_normal(std::size_t i) const;

  double area() const;
  double perimeter() const;
  double diameter() const;
  double min_width() const;
  double shortest_edge() const;
  Point2 centroid() const;

  // Signed distance of x to the supporting line of edge i, positive inside.
  double edge_slack(std::size_t i, const Point2& x) const;
  bool contains(const Point2& x, double tol = 0.0) const;

  ConvexPolygon scaled(double t) const;
  ConvexPolygon translated(const Point2& shift) const;

 private:
  std::vector<Point2> vertices_;
};

/// Rows <a_i, x> <= b_i in R^dim.
struct Halfspace {
  Eigen::VectorXd normal;
  double offset = 0.0;
};

class HalfspaceSet {
 public:
  HalfspaceSet() = default;
  HalfspaceSet(int dim, std::vector<Halfspace> rows);

  int dim() const { return dim_; }
  const std::vector<Halfspace>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  // Euclidean distance from x to the hyperplane of row i, positive inside.
  double slack(std::size_t i, const Eigen::VectorXd& x) const;
  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const;
  // True when the normals positively span R^dim, i.e. the (nonempty) region
  // is bounded.
  bool is_bounded() const;

 private:
  int dim_ = 0;
  std::vector<Halfspace> rows_;
};

struct InballResult {
  Eigen::VectorXd center;
  double radius = 0.0;
  // Rows whose slack equals the radius within tolerance.
  std::vector<int> active_rows;
};

/// Largest ball inside {x : A x <= b}, by linear programming.
/// Throws Infeasible for an empty region (or one with empty interior) and
/// UnboundedInradius when balls of every radius fit.
InballResult chebyshev_center(const HalfspaceSet& set,
                              const GeometryTolerances& tol = {});

InballResult chebyshev_center(const ConvexPolygon& polygon,
                              const GeometryTolerances& tol = {});

HalfspaceSet to_halfspaces(const ConvexPolygon& polygon);

/// Vertex representation of a bounded 2D halfspace set.
ConvexPolygon to_polygon(const HalfspaceSet& set,
                         const GeometryTolerances& tol = {});

double measure(const ConvexPolygon& polygon);
double perimeter(const ConvexPolygon& polygon);

/// Distance to the boundary for a point of the closed polygon.
double distance_to_boundary(const ConvexPolygon& polygon, const Point2& x);

struct ContactPoint {
  Point2 point;
  int edge = -1;
};

std::vector<ContactPoint> contact_set(const ConvexPolygon& polygon,
                                      const InballResult& inball,
                                      double tol = 1e-9);

struct Envelope {
  HalfspaceSet set;
  // Polygon edge each row of `set` was taken from.
  std::vector<int> edges;
  InballResult inball;
  bool bounded = false;
};

/// Intersection of inball-tangent supporting halfplanes at contact points
/// that contains the polygon, keeps its inradius and has every face tangent
/// to the inball. Rows are chosen greedily by splitting the widest angular
/// gap between the selected normals.
Envelope polyhedral_envelope(const ConvexPolygon& polygon,
                             const GeometryTolerances& tol = {});

struct PyramidPiece {
  int face = -1;
  Eigen::VectorXd apex;
  double measure = 0.0;
  // Endpoints of the base face.
  Point2 base_start;
  Point2 base_end;
};

/// Cones over each face of a bounded 2D set with common apex at the incenter.
std::vector<PyramidPiece> pyramid_decomposition(
    const HalfspaceSet& set, const InballResult& inball,
    const GeometryTolerances& tol = {});

// Analytic families -------------------------------------------------------

struct Box {
  std::vector<double> sides;
};

// Section (-L/2, L/2)^{N-1} x (0, thickness) of an infinite slab.
struct SlabSection {
  int dim = 2;
  double length = 1.0;
  double thickness = 1.0;
};

// conv((-1,1)^{N-1} x {0} and the apex (0,...,0,alpha)).
struct CollapsingPyramid {
  int dim = 2;
  double alpha = 1.0;
};

struct RegularPolygon {
  int sides = 3;
  double circumradius = 1.0;
};

struct Disk {
  double radius = 1.0;
};

using ShapeFamily =
    std::variant<Box, SlabSection, CollapsingPyramid, RegularPolygon, Disk>;

void validate(const ShapeFamily& shape);
int dimension(const ShapeFamily& shape);
double measure(const ShapeFamily& shape);
double perimeter(const ShapeFamily& shape);
double inradius(const ShapeFamily& shape);
std::string kind_name(const ShapeFamily& shape);

// Planar polygon realising a 2D family; disks become inscribed regular
// `disk_sides`-gons.
ConvexPolygon to_polygon(const ShapeFamily& shape, int disk_sides = 256);

struct CollapsingPyramidRecord {
  int dim = 2;
  double alpha = 0.0;
  double inradius = 0.0;
  double measure = 0.0;
  double perimeter = 0.0;
  std::optional<ConvexPolygon> polygon;
};

CollapsingPyramidRecord collapsing_pyramid(int dim, double alpha);

ConvexPolygon rectangle(double width, double height);
ConvexPolygon regular_polygon(int sides, double circumradius);

}  // namespace pfreq
