#include "pfreq/mesh.hpp"

#include <boost/polygon/voronoi.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "pfreq/errors.hpp"

namespace pfreq {

namespace {

double cross(const Point2& a, const Point2& b) { return a.x() * b.y() - a.y() * b.x(); }

void apply_marks(TriangleMesh& mesh) {
  mesh.marks.assign(mesh.size(), NodeMark::Free);
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    for (int e : mesh.on_edge[i]) {
      if (e >= 0 && mesh.dirichlet_edges[e]) mesh.marks[i] = NodeMark::Dirichlet;
    }
  }
}

// Polygon edges through x, found by distance to the segment.
std::array<int, 2> edges_through(const ConvexPolygon& pg, const Point2& x, double tol) {
  std::array<int, 2> out{-1, -1};
  int k = 0;
  for (std::size_t e = 0; e < pg.size() && k < 2; ++e) {
    if (std::abs(pg.edge_slack(e, x)) > tol) continue;
    const Point2 d = pg.edge_end(e) - pg.edge_start(e);
    const double t = d.dot(x - pg.edge_start(e)) / d.squaredNorm();
    if (t >= -1e-12 && t <= 1.0 + 1e-12) out[k++] = static_cast<int>(e);
  }
  return out;
}

bool axis_aligned_rectangle(const ConvexPolygon& pg) {
  if (pg.size() != 4) return false;
  for (std::size_t e = 0; e < 4; ++e) {
    const Point2 d = pg.edge_end(e) - pg.edge_start(e);
    const double tol = 1e-14 * d.norm();
    if (std::abs(d.x()) > tol && std::abs(d.y()) > tol) return false;
  }
  return true;
}

TriangleMesh structured(const ConvexPolygon& pg, double h) {
  double x0 = pg.vertex(0).x(), x1 = x0, y0 = pg.vertex(0).y(), y1 = y0;
  for (const auto& v : pg.vertices()) {
    x0 = std::min(x0, v.x());
    x1 = std::max(x1, v.x());
    y0 = std::min(y0, v.y());
    y1 = std::max(y1, v.y());
  }
  const int nx = std::max(1, static_cast<int>(std::ceil((x1 - x0) / h - 1e-9)));
  const int ny = std::max(1, static_cast<int>(std::ceil((y1 - y0) / h - 1e-9)));
  TriangleMesh mesh;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const double x = i == nx ? x1 : x0 + (x1 - x0) * i / nx;
      const double y = j == ny ? y1 : y0 + (y1 - y0) * j / ny;
      mesh.nodes.emplace_back(x, y);
    }
  }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return mesh;
}

// Triangles from the exact Voronoi diagram of integer-snapped sites.
void connect(TriangleMesh& mesh, double x0, double y0, double extent) {
  mesh.triangles.clear();
  using boost::polygon::point_data;
  const double scale = static_cast<double>(1 << 28) / extent;
  std::vector<point_data<int>> sites;
  sites.reserve(mesh.size());
  std::set<std::pair<int, int>> seen;
  for (const auto& x : mesh.nodes) {
    const int ix = static_cast<int>(std::lround((x.x() - x0) * scale));
    const int iy = static_cast<int>(std::lround((x.y() - y0) * scale));
    if (!seen.insert({ix, iy}).second) throw MeshFailure("coincident mesh nodes");
    sites.emplace_back(ix, iy);
  }
  boost::polygon::voronoi_diagram<double> vd;
  boost::polygon::construct_voronoi(sites.begin(), sites.end(), &vd);

  auto common_edge = [&](int a, int b, int c) {
    for (int e : mesh.on_edge[a]) {
      if (e >= 0 && mesh.on_polygon_edge(b, e) && mesh.on_polygon_edge(c, e)) return true;
    }
    return false;
  };
  std::vector<int> ring;
  for (const auto& vertex : vd.vertices()) {
    ring.clear();
    const auto* edge = vertex.incident_edge();
    do {
      ring.push_back(static_cast<int>(edge->cell()->source_index()));
      edge = edge->rot_next();
    } while (edge != vertex.incident_edge());
    for (std::size_t k = 1; k + 1 < ring.size(); ++k) {
      std::array<int, 3> t{ring[0], ring[k], ring[k + 1]};
      const auto& a = mesh.nodes[t[0]];
      if (cross(mesh.nodes[t[1]] - a, mesh.nodes[t[2]] - a) < 0.0) std::swap(t[1], t[2]);
      // Snapping can turn collinear boundary nodes into a sliver.
      if (common_edge(t[0], t[1], t[2])) continue;
      mesh.triangles.push_back(t);
    }
  }
}

TriangleMesh delaunay(const ConvexPolygon& pg, double h) {
  TriangleMesh mesh;
  std::vector<std::array<int, 2>> known;
  const std::size_t m = pg.size();
  // Boundary nodes, corners first.
  for (std::size_t e = 0; e < m; ++e) {
    mesh.nodes.push_back(pg.vertex(e));
    known.push_back({static_cast<int>((e + m - 1) % m), static_cast<int>(e)});
  }
  for (std::size_t e = 0; e < m; ++e) {
    const int k = static_cast<int>(std::ceil(pg.edge_length(e) / h - 1e-9));
    for (int s = 1; s < k; ++s) {
      const double t = static_cast<double>(s) / k;
      mesh.nodes.push_back((1.0 - t) * pg.edge_start(e) + t * pg.edge_end(e));
      known.push_back({static_cast<int>(e), -1});
    }
  }
  // Equilateral lattice, kept away from the boundary.
  double x0 = pg.vertex(0).x(), x1 = x0, y0 = pg.vertex(0).y(), y1 = y0;
  for (const auto& v : pg.vertices()) {
    x0 = std::min(x0, v.x());
    x1 = std::max(x1, v.x());
    y0 = std::min(y0, v.y());
    y1 = std::max(y1, v.y());
  }
  const double dy = 0.5 * std::sqrt(3.0) * h;
  const int rows = static_cast<int>(std::ceil((y1 - y0) / dy)) + 1;
  const int cols = static_cast<int>(std::ceil((x1 - x0) / h)) + 2;
  for (int j = 0; j <= rows; ++j) {
    for (int i = -1; i <= cols; ++i) {
      const Point2 x(x0 + (i + 0.5 * (j % 2)) * h, y0 + j * dy);
      double slack = std::numeric_limits<double>::infinity();
      for (std::size_t e = 0; e < m; ++e) slack = std::min(slack, pg.edge_slack(e, x));
      if (slack >= 0.3 * h) {
        mesh.nodes.push_back(x);
        known.push_back({-1, -1});
      }
    }
  }
  mesh.on_edge = known;

  connect(mesh, x0, y0, std::max(x1 - x0, y1 - y0));
  // Split edges that came out too long and reconnect.
  for (int pass = 0; pass < 20; ++pass) {
    std::set<std::pair<int, int>> split;
    for (const auto& t : mesh.triangles) {
      for (int k = 0; k < 3; ++k) {
        const int a = t[k], b = t[(k + 1) % 3];
        if ((mesh.nodes[a] - mesh.nodes[b]).norm() > 1.45 * h) split.insert({std::min(a, b), std::max(a, b)});
      }
    }
    if (split.empty()) break;
    for (const auto& [a, b] : split) {
      mesh.nodes.push_back(0.5 * (mesh.nodes[a] + mesh.nodes[b]));
      std::array<int, 2> on{-1, -1};
      for (int e : mesh.on_edge[a]) {
        if (e >= 0 && mesh.on_polygon_edge(b, e)) on[0] = e;
      }
      mesh.on_edge.push_back(on);
    }
    connect(mesh, x0, y0, std::max(x1 - x0, y1 - y0));
  }
  return mesh;
}

}  // namespace

double TriangleMesh::triangle_area(std::size_t t) const {
  const auto& [a, b, c] = triangles[t];
  return 0.5 * cross(nodes[b] - nodes[a], nodes[c] - nodes[a]);
}

double TriangleMesh::total_area() const {
  // Compensated sum; fine meshes have tens of thousands of terms.
  double s = 0.0, c = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const double a = triangle_area(t);
    const double u = s + a;
    c += std::abs(s) >= std::abs(a) ? (s - u) + a : (a - u) + s;
    s = u;
  }
  return s + c;
}

double TriangleMesh::max_edge() const {
  double m = 0.0;
  for (const auto& t : triangles) {
    for (int k = 0; k < 3; ++k) m = std::max(m, (nodes[t[k]] - nodes[t[(k + 1) % 3]]).norm());
  }
  return m;
}

double TriangleMesh::min_angle() const {
  double m = std::numbers::pi;
  for (const auto& t : triangles) {
    for (int k = 0; k < 3; ++k) {
      const Point2 u = nodes[t[(k + 1) % 3]] - nodes[t[k]];
      const Point2 v = nodes[t[(k + 2) % 3]] - nodes[t[k]];
      m = std::min(m, std::atan2(std::abs(cross(u, v)), u.dot(v)));
    }
  }
  return m;
}

std::size_t TriangleMesh::free_count() const {
  return static_cast<std::size_t>(std::count(marks.begin(), marks.end(), NodeMark::Free));
}

double default_mesh_size(const ConvexPolygon& polygon) {
  return std::min(polygon.diameter() / 64.0, 0.9 * polygon.shortest_edge());
}

TriangleMesh triangulate(const ConvexPolygon& polygon, double h, const MeshOptions& opts) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("mesh size must be positive");
  if (!(h < polygon.shortest_edge())) {
    std::ostringstream msg;
    msg << "mesh size " << h << " is not below the shortest edge " << polygon.shortest_edge();
    throw MeshFailure(msg.str());
  }
  const bool rect = axis_aligned_rectangle(polygon);
  TriangleMesh mesh = rect ? structured(polygon, h) : delaunay(polygon, h);
  mesh.h = h;
  if (rect) {
    const double tol = 1e-10 * polygon.diameter();
    mesh.on_edge.clear();
    for (const auto& x : mesh.nodes) mesh.on_edge.push_back(edges_through(polygon, x, tol));
  }
  mesh.dirichlet_edges.assign(polygon.size(), true);
  apply_marks(mesh);

  check_mesh(mesh, polygon);
  if (mesh.max_edge() > opts.max_edge_factor * h * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "longest mesh edge " << mesh.max_edge() << " exceeds " << opts.max_edge_factor << "h";
    throw MeshFailure(msg.str());
  }
  // Corners of the polygon itself are reproduced by the mesh.
  double corner = std::numbers::pi;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Point2 u = polygon.vertex(i + 1) - polygon.vertex(i);
    const Point2 v = polygon.vertex(i + polygon.size() - 1) - polygon.vertex(i);
    corner = std::min(corner, std::atan2(std::abs(cross(u, v)), u.dot(v)));
  }
  if (mesh.min_angle() < std::min(opts.min_angle, 0.5 * corner)) {
    std::ostringstream msg;
    msg << "needle triangle with minimum angle " << mesh.min_angle() << " rad";
    throw MeshFailure(msg.str());
  }
  return mesh;
}

void check_mesh(const TriangleMesh& mesh, const ConvexPolygon& polygon) {
  if (mesh.marks.size() != mesh.size() || mesh.on_edge.size() != mesh.size()) {
    throw MeshFailure("node attribute arrays have the wrong length");
  }
  std::vector<int> used(mesh.size(), 0);
  std::map<std::pair<int, int>, int> edge_count;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    if (!(mesh.triangle_area(t) > 1e-14)) throw MeshFailure("degenerate or inverted triangle");
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      used[tri[k]] = 1;
      const int a = tri[k], b = tri[(k + 1) % 3];
      ++edge_count[{std::min(a, b), std::max(a, b)}];
    }
  }
  if (std::find(used.begin(), used.end(), 0) != used.end()) throw MeshFailure("orphan mesh node");
  for (const auto& [e, count] : edge_count) {
    if (count > 2) throw MeshFailure("mesh edge shared by more than two triangles");
    if (count == 1) {
      bool along = false;
      for (int pe : mesh.on_edge[e.first]) along = along || (pe >= 0 && mesh.on_polygon_edge(e.second, pe));
      if (!along) throw MeshFailure("mesh has a hole or a hanging node");
    }
  }
  const double tol = 1e-10 * polygon.diameter();
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    for (int e : mesh.on_edge[i]) {
      if (e >= 0 && std::abs(polygon.edge_slack(e, mesh.nodes[i])) > tol) {
        throw MeshFailure("boundary node off its polygon edge");
      }
    }
    if (!mesh.on_boundary(i) && !polygon.contains(mesh.nodes[i], -tol)) {
      throw MeshFailure("interior node outside the polygon");
    }
  }
  const double area = polygon.area();
  if (std::abs(mesh.total_area() - area) > 1e-12 * std::max(1.0, area)) {
    std::ostringstream msg;
    msg << "triangle areas miss the polygon area by " << mesh.total_area() - area;
    throw MeshFailure(msg.str());
  }
}

TriangleMesh refine_uniform(const TriangleMesh& mesh) {
  TriangleMesh out;
  out.nodes = mesh.nodes;
  out.on_edge = mesh.on_edge;
  out.dirichlet_edges = mesh.dirichlet_edges;
  out.h = 0.5 * mesh.h;
  std::map<std::pair<int, int>, int> mid;
  auto midpoint = [&](int a, int b) {
    const auto key = std::make_pair(std::min(a, b), std::max(a, b));
    const auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    const int id = static_cast<int>(out.nodes.size());
    out.nodes.push_back(0.5 * (mesh.nodes[a] + mesh.nodes[b]));
    std::array<int, 2> on{-1, -1};
    for (int e : mesh.on_edge[a]) {
      if (e >= 0 && mesh.on_polygon_edge(b, e)) on[0] = e;
    }
    out.on_edge.push_back(on);
    mid.emplace(key, id);
    return id;
  };
  for (const auto& [a, b, c] : mesh.triangles) {
    const int ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
    out.triangles.push_back({a, ab, ca});
    out.triangles.push_back({ab, b, bc});
    out.triangles.push_back({ca, bc, c});
    out.triangles.push_back({ab, bc, ca});
  }
  apply_marks(out);
  return out;
}

void set_dirichlet_edges(TriangleMesh& mesh, const std::vector<int>& edges) {
  std::fill(mesh.dirichlet_edges.begin(), mesh.dirichlet_edges.end(), false);
  for (int e : edges) {
    if (e < 0 || e >= static_cast<int>(mesh.dirichlet_edges.size())) {
      throw DomainError("Dirichlet edge index out of range");
    }
    mesh.dirichlet_edges[e] = true;
  }
  apply_marks(mesh);
}

}  // namespace pfreq
