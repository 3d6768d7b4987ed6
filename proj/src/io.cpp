#include "pfreq/io.hpp"

#include "pfreq/errors.hpp"

namespace pfreq::io {

namespace {

template <class T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw InvalidShape(std::string("missing key '") + key + "'");
  return j.at(key).get<T>();
}

}  // namespace

Json to_json(const ConvexPolygon& polygon) {
  Json v = Json::array();
  for (const auto& x : polygon.vertices()) v.push_back({x.x(), x.y()});
  return {{"vertices", v}};
}

ConvexPolygon polygon_from_json(const Json& j) {
  std::vector<Point2> pts;
  for (const auto& x : j.at("vertices")) {
    if (!x.is_array() || x.size() != 2) throw InvalidShape("vertex must be [x, y]");
    pts.emplace_back(x[0].get<double>(), x[1].get<double>());
  }
  return ConvexPolygon(std::move(pts));
}

Json to_json(const HalfspaceSet& set) {
  Json rows = Json::array();
  for (const auto& r : set.rows()) {
    rows.push_back({{"a", std::vector<double>(r.normal.data(), r.normal.data() + r.normal.size())}, {"b", r.offset}});
  }
  return {{"dim", set.dim()}, {"rows", rows}};
}

HalfspaceSet halfspaces_from_json(const Json& j) {
  const int dim = field<int>(j, "dim");
  std::vector<Halfspace> rows;
  for (const auto& r : j.at("rows")) {
    const auto a = field<std::vector<double>>(r, "a");
    Halfspace h;
    h.normal = Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size()));
    h.offset = field<double>(r, "b");
    rows.push_back(std::move(h));
  }
  return HalfspaceSet(dim, std::move(rows));
}

Json to_json(const ShapeFamily& shape) {
  Json j{{"kind", kind_name(shape)}};
  if (const auto* b = std::get_if<Box>(&shape)) j["sides"] = b->sides;
  if (const auto* s = std::get_if<SlabSection>(&shape)) {
    j["N"] = s->dim;
    j["L"] = s->length;
    j["thickness"] = s->thickness;
  }
  if (const auto* c = std::get_if<CollapsingPyramid>(&shape)) {
    j["N"] = c->dim;
    j["alpha"] = c->alpha;
  }
  if (const auto* r = std::get_if<RegularPolygon>(&shape)) {
    j["sides"] = r->sides;
    j["circumradius"] = r->circumradius;
  }
  if (const auto* d = std::get_if<Disk>(&shape)) j["radius"] = d->radius;
  return j;
}

ShapeFamily shape_from_json(const Json& j) {
  const auto kind = field<std::string>(j, "kind");
  ShapeFamily shape;
  if (kind == "box") {
    shape = Box{field<std::vector<double>>(j, "sides")};
  } else if (kind == "slab_section") {
    shape = SlabSection{j.value("N", 2), field<double>(j, "L"), j.value("thickness", 1.0)};
  } else if (kind == "collapsing_pyramid") {
    shape = CollapsingPyramid{j.value("N", 2), field<double>(j, "alpha")};
  } else if (kind == "regular_polygon") {
    shape = RegularPolygon{field<int>(j, "sides"), j.value("circumradius", 1.0)};
  } else if (kind == "disk") {
    shape = Disk{j.value("radius", 1.0)};
  } else {
    throw InvalidShape("unknown shape kind '" + kind + "'");
  }
  validate(shape);
  return shape;
}

ConvexPolygon domain_from_json(const Json& j) {
  if (j.contains("vertices")) return polygon_from_json(j);
  if (j.contains("rows")) return to_polygon(halfspaces_from_json(j));
  if (j.contains("kind")) return to_polygon(shape_from_json(j));
  throw InvalidShape("expected a polygon, halfspace set or shape family");
}

Json to_json(const TriangleMesh& mesh) {
  Json nodes = Json::array(), tris = Json::array(), marks = Json::array();
  for (const auto& x : mesh.nodes) nodes.push_back({x.x(), x.y()});
  for (const auto& t : mesh.triangles) tris.push_back({t[0], t[1], t[2]});
  for (auto m : mesh.marks) marks.push_back(m == NodeMark::Dirichlet ? 1 : 0);
  return {{"nodes", nodes}, {"triangles", tris}, {"marks", marks}, {"h", mesh.h}};
}

Json to_json(const BoundReport& report) {
  return {{"name", report.name},     {"side", to_string(report.side)}, {"value", report.value},
          {"inputs", report.inputs}, {"citation", report.citation},    {"notes", report.notes}};
}

Json to_json(const Verdict& verdict) {
  auto j = to_json(verdict.report);
  j["measured"] = verdict.measured;
  j["margin"] = verdict.margin;
  j["slack"] = verdict.slack;
  j["pass"] = verdict.pass;
  return j;
}

}  // namespace pfreq::io
