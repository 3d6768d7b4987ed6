#include "pfreq/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pfreq/errors.hpp"
#include "pfreq/lp.hpp"

namespace pfreq {

namespace {

double cross(const Point2& a, const Point2& b) { return a.x() * b.y() - a.y() * b.x(); }

double point_segment_distance(const Point2& x, const Point2& a, const Point2& b,
                              Point2* foot = nullptr) {
  const Point2 d = b - a;
  const double len2 = d.squaredNorm();
  double t = len2 > 0.0 ? (x - a).dot(d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Point2 f = a + t * d;
  if (foot != nullptr) *foot = f;
  return (x - f).norm();
}

double angle_of(const Eigen::VectorXd& n) { return std::atan2(n(1), n(0)); }

// Largest gap between consecutive directions on the circle. Returns 2*pi for
// fewer than two directions.
double max_angular_gap(std::vector<double> angles) {
  if (angles.size() < 2) return 2.0 * std::numbers::pi;
  std::sort(angles.begin(), angles.end());
  double gap = angles.front() + 2.0 * std::numbers::pi - angles.back();
  for (std::size_t i = 1; i < angles.size(); ++i) {
    gap = std::max(gap, angles[i] - angles[i - 1]);
  }
  return gap;
}

}  // namespace

// ConvexPolygon -------------------------------------------------------------

ConvexPolygon::ConvexPolygon(std::vector<Point2> vertices,
                             const GeometryTolerances& tol)
    : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw InvalidShape("polygon needs at least 3 vertices");
  for (const auto& v : vertices_) {
    if (!v.allFinite()) throw InvalidShape("polygon vertex is not finite");
  }
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 e1 = vertex(i + 1) - vertex(i);
    const Point2 e2 = vertex(i + 2) - vertex(i + 1);
    const double l1 = e1.norm();
    const double l2 = e2.norm();
    if (l1 == 0.0 || l2 == 0.0) throw InvalidShape("polygon has repeated vertices");
    const double c = cross(e1, e2);
    if (c <= 1e-12 * l1 * l2) {
      std::ostringstream msg;
      msg << "polygon is not strictly convex counterclockwise at vertex " << (i + 1) % n;
      throw InvalidShape(msg.str());
    }
    turning += std::atan2(c, e1.dot(e2));
  }
  if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6) {
    throw InvalidShape("polygon winds more than once");
  }
  const double aspect = diameter() / min_width();
  if (!(aspect <= tol.max_aspect)) {
    std::ostringstream msg;
    msg << "needle-like polygon rejected (aspect ratio " << aspect << ")";
    throw InvalidShape(msg.str());
  }
}

double ConvexPolygon::edge_length(std::size_t i) const {
  return (edge_end(i) - edge_start(i)).norm();
}

Point2 ConvexPolygon::outward_normal(std::size_t i) const {
  const Point2 d = edge_end(i) - edge_start(i);
  return Point2(d.y(), -d.x()).normalized();
}

double ConvexPolygon::area() const {
  double twice = 0.0;
  for (std::size_t i = 0; i < size(); ++i) twice += cross(vertex(i), vertex(i + 1));
  return 0.5 * twice;
}

double ConvexPolygon::perimeter() const {
  double p = 0.0;
  for (std::size_t i = 0; i < size(); ++i) p += edge_length(i);
  return p;
}

double ConvexPolygon::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) {
      d = std::max(d, (vertices_[i] - vertices_[j]).norm());
    }
  }
  return d;
}

double ConvexPolygon::min_width() const {
  double w = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size(); ++i) {
    double far = 0.0;
    for (const auto& v : vertices_) far = std::max(far, edge_slack(i, v));
    w = std::min(w, far);
  }
  return w;
}

double ConvexPolygon::shortest_edge() const {
  double s = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size(); ++i) s = std::min(s, edge_length(i));
  return s;
}

Point2 ConvexPolygon::centroid() const {
  Point2 c = Point2::Zero();
  double twice = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const double w = cross(vertex(i), vertex(i + 1));
    c += w * (vertex(i) + vertex(i + 1));
    twice += w;
  }
  return c / (3.0 * twice);
}

double ConvexPolygon::edge_slack(std::size_t i, const Point2& x) const {
  return -outward_normal(i).dot(x - edge_start(i));
}

bool ConvexPolygon::contains(const Point2& x, double tol) const {
  for (std::size_t i = 0; i < size(); ++i) {
    if (edge_slack(i, x) < -tol) return false;
  }
  return true;
}

ConvexPolygon ConvexPolygon::scaled(double t) const {
  std::vector<Point2> v(vertices_);
  for (auto& p : v) p *= t;
  return ConvexPolygon(std::move(v));
}

ConvexPolygon ConvexPolygon::translated(const Point2& shift) const {
  std::vector<Point2> v(vertices_);
  for (auto& p : v) p += shift;
  return ConvexPolygon(std::move(v));
}

double measure(const ConvexPolygon& polygon) { return polygon.area(); }
double perimeter(const ConvexPolygon& polygon) { return polygon.perimeter(); }

// HalfspaceSet --------------------------------------------------------------

HalfspaceSet::HalfspaceSet(int dim, std::vector<Halfspace> rows)
    : dim_(dim), rows_(std::move(rows)) {
  if (dim_ < 1) throw InvalidShape("halfspace set dimension must be positive");
  for (const auto& r : rows_) {
    if (r.normal.size() != dim_) throw InvalidShape("halfspace normal has wrong dimension");
    if (!(r.normal.norm() > 0.0) || !std::isfinite(r.offset)) {
      throw InvalidShape("halfspace normal must be nonzero and finite");
    }
  }
}

double HalfspaceSet::slack(std::size_t i, const Eigen::VectorXd& x) const {
  const auto& r = rows_[i];
  return (r.offset - r.normal.dot(x)) / r.normal.norm();
}

bool HalfspaceSet::contains(const Eigen::VectorXd& x, double tol) const {
  for (std::size_t i = 0; i < size(); ++i) {
    if (slack(i, x) < -tol) return false;
  }
  return true;
}

bool HalfspaceSet::is_bounded() const {
  if (rows_.empty()) return false;
  if (dim_ == 2) {
    std::vector<double> angles;
    angles.reserve(size());
    for (const auto& r : rows_) angles.push_back(angle_of(r.normal));
    return max_angular_gap(std::move(angles)) < std::numbers::pi - 1e-12;
  }
  // Recession cone {d : A d <= 0} must be trivial.
  const int m = static_cast<int>(size());
  Eigen::MatrixXd A(m + 2 * dim_, dim_);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 2 * dim_);
  for (int i = 0; i < m; ++i) A.row(i) = rows_[i].normal.normalized().transpose();
  A.bottomRows(2 * dim_) << Eigen::MatrixXd::Identity(dim_, dim_),
      -Eigen::MatrixXd::Identity(dim_, dim_);
  b.tail(2 * dim_).setOnes();
  for (int k = 0; k < dim_; ++k) {
    for (double sign : {1.0, -1.0}) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(dim_);
      c(k) = sign;
      const auto r = lp::maximize_free(A, b, c);
      if (r.status != lp::Status::Optimal || r.objective > 1e-10) return false;
    }
  }
  return true;
}

// Chebyshev center -----------------------------------------------------------

InballResult chebyshev_center(const HalfspaceSet& set, const GeometryTolerances& tol) {
  const int n = set.dim();
  const int m = static_cast<int>(set.size());
  if (m == 0) throw UnboundedInradius("no constraints");
  // Variables (x, r); rows <a/|a|, x> + r <= b/|a| and -r <= 0.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + 1, n + 1);
  Eigen::VectorXd b(m + 1);
  for (int i = 0; i < m; ++i) {
    const auto& row = set.rows()[i];
    const double s = row.normal.norm();
    A.row(i).head(n) = row.normal.transpose() / s;
    A(i, n) = 1.0;
    b(i) = row.offset / s;
  }
  A(m, n) = -1.0;
  b(m) = 0.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  c(n) = 1.0;
  const auto res = lp::maximize_free(A, b, c);
  if (res.status == lp::Status::Infeasible) throw Infeasible("halfspace set is empty");
  if (res.status == lp::Status::Unbounded) {
    throw UnboundedInradius("halfspace set contains balls of every radius");
  }
  InballResult out;
  out.center = res.x.head(n);
  out.radius = res.x(n);
  if (!(out.radius > tol.containment)) {
    throw Infeasible("halfspace set has empty interior");
  }
  const double active_tol = tol.tangency * std::max(1.0, out.radius);
  for (int i = 0; i < m; ++i) {
    if (std::abs(set.slack(i, out.center) - out.radius) <= active_tol) {
      out.active_rows.push_back(i);
    }
  }
  return out;
}

InballResult chebyshev_center(const ConvexPolygon& polygon, const GeometryTolerances& tol) {
  return chebyshev_center(to_halfspaces(polygon), tol);
}

HalfspaceSet to_halfspaces(const ConvexPolygon& polygon) {
  std::vector<Halfspace> rows;
  rows.reserve(polygon.size());
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Point2 nrm = polygon.outward_normal(i);
    rows.push_back({Eigen::VectorXd(nrm), nrm.dot(polygon.edge_start(i))});
  }
  return HalfspaceSet(2, std::move(rows));
}

ConvexPolygon to_polygon(const HalfspaceSet& set, const GeometryTolerances& tol) {
  if (set.dim() != 2) throw InvalidShape("vertex extraction is implemented in 2D only");
  if (!set.is_bounded()) throw InvalidShape("halfspace set is unbounded");
  const auto& rows = set.rows();
  std::vector<Point2> pts;
  double scale = 1.0;
  for (const auto& r : rows) scale = std::max(scale, std::abs(r.offset) / r.normal.norm());
  const double feas_tol = 1e-9 * scale;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      Eigen::Matrix2d M;
      M.row(0) = rows[i].normal.transpose();
      M.row(1) = rows[j].normal.transpose();
      const double det = M.determinant();
      if (std::abs(det) <= 1e-14 * rows[i].normal.norm() * rows[j].normal.norm()) continue;
      const Point2 x = M.inverse() * Eigen::Vector2d(rows[i].offset, rows[j].offset);
      if (!set.contains(x, feas_tol)) continue;
      bool dup = false;
      for (const auto& q : pts) {
        if ((q - x).norm() <= feas_tol) {
          dup = true;
          break;
        }
      }
      if (!dup) pts.push_back(x);
    }
  }
  if (pts.size() < 3) throw Infeasible("halfspace set has empty interior");
  Point2 mean = Point2::Zero();
  for (const auto& q : pts) mean += q;
  mean /= static_cast<double>(pts.size());
  std::sort(pts.begin(), pts.end(), [&](const Point2& a, const Point2& b) {
    return std::atan2(a.y() - mean.y(), a.x() - mean.x()) <
           std::atan2(b.y() - mean.y(), b.x() - mean.x());
  });
  return ConvexPolygon(std::move(pts), tol);
}

// Distances, contacts --------------------------------------------------------

double distance_to_boundary(const ConvexPolygon& polygon, const Point2& x) {
  const double scale = std::max(1.0, polygon.diameter());
  if (!polygon.contains(x, 1e-12 * scale)) {
    throw OutsideDomain("point lies outside the polygon");
  }
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    d = std::min(d, point_segment_distance(x, polygon.edge_start(i), polygon.edge_end(i)));
  }
  return d;
}

std::vector<ContactPoint> contact_set(const ConvexPolygon& polygon,
                                      const InballResult& inball, double tol) {
  if (inball.center.size() != 2) throw InvalidShape("inball must be planar");
  const Point2 c = inball.center;
  std::vector<ContactPoint> out;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    Point2 foot;
    const double d = point_segment_distance(c, polygon.edge_start(i), polygon.edge_end(i), &foot);
    if (std::abs(d - inball.radius) <= tol) out.push_back({foot, static_cast<int>(i)});
  }
  if (out.size() < 2) {
    throw DegenerateContact("fewer than two contact points; inball inconsistent with polygon");
  }
  return out;
}

// Envelope ------------------------------------------------------------------

Envelope polyhedral_envelope(const ConvexPolygon& polygon, const GeometryTolerances& tol) {
  Envelope env;
  env.inball = chebyshev_center(polygon, tol);
  const double R = env.inball.radius;
  const auto contacts = contact_set(polygon, env.inball, tol.tangency * std::max(1.0, R));

  std::vector<int> candidates;
  std::vector<double> angles;
  for (const auto& cp : contacts) {
    candidates.push_back(cp.edge);
    angles.push_back(angle_of(Eigen::VectorXd(polygon.outward_normal(cp.edge))));
  }
  const bool can_bound = max_angular_gap(angles) < std::numbers::pi - 1e-12;

  auto make_set = [&](const std::vector<int>& picked) {
    std::vector<Halfspace> rows;
    for (int k : picked) {
      const Point2 nrm = polygon.outward_normal(candidates[k]);
      rows.push_back({Eigen::VectorXd(nrm), nrm.dot(polygon.edge_start(candidates[k]))});
    }
    return HalfspaceSet(2, std::move(rows));
  };
  auto gap_with = [&](const std::vector<int>& picked) {
    std::vector<double> a;
    for (int k : picked) a.push_back(angles[k]);
    return max_angular_gap(std::move(a));
  };

  // Seed with the most opposed pair of contact normals.
  std::vector<int> picked;
  {
    int bi = 0;
    int bj = 1;
    double best = -1.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      for (std::size_t j = i + 1; j < candidates.size(); ++j) {
        double d = std::abs(angles[i] - angles[j]);
        d = std::min(d, 2.0 * std::numbers::pi - d);
        if (d > best + 1e-12) {
          best = d;
          bi = static_cast<int>(i);
          bj = static_cast<int>(j);
        }
      }
    }
    picked = {bi, bj};
  }

  const double r_tol = tol.tangency * std::max(1.0, R);
  while (true) {
    const HalfspaceSet T = make_set(picked);
    bool radius_ok = false;
    try {
      const auto ib = chebyshev_center(T, tol);
      radius_ok = std::abs(ib.radius - R) <= r_tol;
    } catch (const UnboundedInradius&) {
      radius_ok = false;
    }
    const bool bounded = T.is_bounded();
    if (radius_ok && (bounded || !can_bound)) {
      env.set = T;
      env.bounded = bounded;
      break;
    }
    if (picked.size() == candidates.size()) {
      throw EnvelopeFailure("no subset of contact halfplanes reproduces the inradius");
    }
    int best = -1;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k < static_cast<int>(candidates.size()); ++k) {
      if (std::find(picked.begin(), picked.end(), k) != picked.end()) continue;
      auto trial = picked;
      trial.push_back(k);
      const double g = gap_with(trial);
      if (g < best_gap - 1e-12) {
        best_gap = g;
        best = k;
      }
    }
    picked.push_back(best);
  }
  std::sort(picked.begin(), picked.end());
  env.set = make_set(picked);
  for (int k : picked) env.edges.push_back(candidates[k]);

  // Containment, tangency and equal inradius are re-checked explicitly.
  for (const auto& v : polygon.vertices()) {
    if (!env.set.contains(Eigen::VectorXd(v), tol.containment * std::max(1.0, R))) {
      throw EnvelopeFailure("envelope does not contain the polygon");
    }
  }
  for (std::size_t i = 0; i < env.set.size(); ++i) {
    if (std::abs(env.set.slack(i, env.inball.center) - R) > r_tol) {
      throw EnvelopeFailure("envelope face misses the inball");
    }
  }
  return env;
}

// Pyramid decomposition -----------------------------------------------------

std::vector<PyramidPiece> pyramid_decomposition(const HalfspaceSet& set,
                                                const InballResult& inball,
                                                const GeometryTolerances& tol) {
  if (set.dim() != 2) throw InvalidShape("pyramid decomposition is implemented in 2D only");
  const double R = inball.radius;
  const double r_tol = tol.tangency * std::max(1.0, R);
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (std::abs(set.slack(i, inball.center) - R) > r_tol) {
      std::ostringstream msg;
      msg << "face " << i << " is not tangent to the inball";
      throw TangencyViolation(msg.str());
    }
  }
  if (!set.is_bounded()) throw InvalidShape("pyramid decomposition needs a bounded set");
  const ConvexPolygon poly = to_polygon(set, tol);
  const double scale = std::max(1.0, poly.diameter());
  const Point2 apex = inball.center;

  std::vector<PyramidPiece> pieces;
  for (std::size_t i = 0; i < set.size(); ++i) {
    std::vector<Point2> on_face;
    for (const auto& v : poly.vertices()) {
      if (std::abs(set.slack(i, Eigen::VectorXd(v))) <= 1e-9 * scale) on_face.push_back(v);
    }
    // A tangent row meeting the set in a single vertex carries no piece.
    if (on_face.size() < 2) continue;
    // Orient the base counterclockwise as seen from the apex.
    Point2 a = on_face.front();
    Point2 b = on_face.back();
    if (cross(a - apex, b - apex) < 0.0) std::swap(a, b);
    PyramidPiece piece;
    piece.face = static_cast<int>(i);
    piece.apex = inball.center;
    piece.base_start = a;
    piece.base_end = b;
    piece.measure = 0.5 * cross(a - apex, b - apex);
    if (!(piece.measure > 0.0)) continue;
    pieces.push_back(std::move(piece));
  }
  return pieces;
}

// Families --------------------------------------------------------------------

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

void validate(const ShapeFamily& shape) {
  std::visit(overloaded{
                 [](const Box& b) {
                   if (b.sides.empty()) throw DomainError("box needs at least one side");
                   for (double s : b.sides) require_positive(s, "box side");
                 },
                 [](const SlabSection& s) {
                   if (s.dim < 1) throw DomainError("slab dimension must be positive");
                   require_positive(s.length, "slab length");
                   require_positive(s.thickness, "slab thickness");
                 },
                 [](const CollapsingPyramid& c) {
                   if (c.dim < 2) throw DomainError("collapsing pyramid needs N >= 2");
                   require_positive(c.alpha, "pyramid height alpha");
                 },
                 [](const RegularPolygon& r) {
                   if (r.sides < 3) throw DomainError("regular polygon needs >= 3 sides");
                   require_positive(r.circumradius, "circumradius");
                 },
                 [](const Disk& d) { require_positive(d.radius, "disk radius"); },
             },
             shape);
}

int dimension(const ShapeFamily& shape) {
  return std::visit(overloaded{
                        [](const Box& b) { return static_cast<int>(b.sides.size()); },
                        [](const SlabSection& s) { return s.dim; },
                        [](const CollapsingPyramid& c) { return c.dim; },
                        [](const RegularPolygon&) { return 2; },
                        [](const Disk&) { return 2; },
                    },
                    shape);
}

namespace {

Box as_box(const SlabSection& s) {
  Box b;
  b.sides.assign(static_cast<std::size_t>(s.dim - 1), s.length);
  b.sides.push_back(s.thickness);
  return b;
}

double box_measure(const Box& b) {
  double v = 1.0;
  for (double s : b.sides) v *= s;
  return v;
}

double box_perimeter(const Box& b) {
  if (b.sides.size() == 1) return 2.0;
  double p = 0.0;
  for (std::size_t i = 0; i < b.sides.size(); ++i) {
    double face = 1.0;
    for (std::size_t j = 0; j < b.sides.size(); ++j) {
      if (j != i) face *= b.sides[j];
    }
    p += 2.0 * face;
  }
  return p;
}

double pyramid_inradius(double alpha) { return alpha / (1.0 + std::sqrt(1.0 + alpha * alpha)); }

}  // namespace

double measure(const ShapeFamily& shape) {
  validate(shape);
  return std::visit(
      overloaded{
          [](const Box& b) { return box_measure(b); },
          [](const SlabSection& s) { return box_measure(as_box(s)); },
          [](const CollapsingPyramid& c) {
            return c.alpha * std::pow(2.0, c.dim - 1) / static_cast<double>(c.dim);
          },
          [](const RegularPolygon& r) {
            const double k = r.sides;
            return 0.5 * k * r.circumradius * r.circumradius * std::sin(2.0 * std::numbers::pi / k);
          },
          [](const Disk& d) { return std::numbers::pi * d.radius * d.radius; },
      },
      shape);
}

double perimeter(const ShapeFamily& shape) {
  validate(shape);
  return std::visit(
      overloaded{
          [](const Box& b) { return box_perimeter(b); },
          [](const SlabSection& s) { return box_perimeter(as_box(s)); },
          [](const CollapsingPyramid& c) {
            // Base face plus 2(N-1) lateral cones of slant height sqrt(1+alpha^2).
            return std::pow(2.0, c.dim - 1) * (1.0 + std::sqrt(1.0 + c.alpha * c.alpha));
          },
          [](const RegularPolygon& r) {
            return 2.0 * r.sides * r.circumradius * std::sin(std::numbers::pi / r.sides);
          },
          [](const Disk& d) { return 2.0 * std::numbers::pi * d.radius; },
      },
      shape);
}

double inradius(const ShapeFamily& shape) {
  validate(shape);
  return std::visit(
      overloaded{
          [](const Box& b) { return 0.5 * *std::min_element(b.sides.begin(), b.sides.end()); },
          [](const SlabSection& s) { return 0.5 * std::min(s.length, s.thickness); },
          [](const CollapsingPyramid& c) { return pyramid_inradius(c.alpha); },
          [](const RegularPolygon& r) {
            return r.circumradius * std::cos(std::numbers::pi / r.sides);
          },
          [](const Disk& d) { return d.radius; },
      },
      shape);
}

std::string kind_name(const ShapeFamily& shape) {
  return std::visit(overloaded{
                        [](const Box&) { return std::string("box"); },
                        [](const SlabSection&) { return std::string("slab_section"); },
                        [](const CollapsingPyramid&) { return std::string("collapsing_pyramid"); },
                        [](const RegularPolygon&) { return std::string("regular_polygon"); },
                        [](const Disk&) { return std::string("disk"); },
                    },
                    shape);
}

ConvexPolygon rectangle(double width, double height) {
  return ConvexPolygon({{0.0, 0.0}, {width, 0.0}, {width, height}, {0.0, height}});
}

ConvexPolygon regular_polygon(int sides, double circumradius) {
  if (sides < 3) throw DomainError("regular polygon needs >= 3 sides");
  std::vector<Point2> v;
  v.reserve(static_cast<std::size_t>(sides));
  // Bottom edge horizontal.
  const double start = -0.5 * std::numbers::pi - std::numbers::pi / sides;
  for (int k = 0; k < sides; ++k) {
    const double t = start + 2.0 * std::numbers::pi * k / sides;
    v.emplace_back(circumradius * std::cos(t), circumradius * std::sin(t));
  }
  return ConvexPolygon(std::move(v));
}

ConvexPolygon to_polygon(const ShapeFamily& shape, int disk_sides) {
  validate(shape);
  if (dimension(shape) != 2) throw InvalidShape("only planar families have a polygon");
  return std::visit(
      overloaded{
          [](const Box& b) { return rectangle(b.sides[0], b.sides[1]); },
          [](const SlabSection& s) {
            return ConvexPolygon({{-0.5 * s.length, 0.0},
                                  {0.5 * s.length, 0.0},
                                  {0.5 * s.length, s.thickness},
                                  {-0.5 * s.length, s.thickness}});
          },
          [](const CollapsingPyramid& c) {
            return ConvexPolygon({{-1.0, 0.0}, {1.0, 0.0}, {0.0, c.alpha}});
          },
          [](const RegularPolygon& r) { return regular_polygon(r.sides, r.circumradius); },
          [disk_sides](const Disk& d) { return regular_polygon(disk_sides, d.radius); },
      },
      shape);
}

CollapsingPyramidRecord collapsing_pyramid(int dim, double alpha) {
  const CollapsingPyramid c{dim, alpha};
  validate(ShapeFamily{c});
  CollapsingPyramidRecord rec;
  rec.dim = dim;
  rec.alpha = alpha;
  rec.inradius = inradius(c);
  rec.measure = measure(c);
  rec.perimeter = perimeter(c);
  if (dim == 2) rec.polygon = to_polygon(c);
  return rec;
}

}  // namespace pfreq
