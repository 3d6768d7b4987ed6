#pragma once

// JSON conversions for domains, meshes and bound reports.

#include "json.hpp"
#include "pfreq/bounds.hpp"
#include "pfreq/geometry.hpp"
#include "pfreq/mesh.hpp"

namespace pfreq::io {

using Json = nlohmann::json;

// {"vertices": [[x, y], ...]}, counterclockwise.
Json to_json(const ConvexPolygon& polygon);
ConvexPolygon polygon_from_json(const Json& j);

// {"dim": N, "rows": [{"a": [...], "b": s}, ...]}
Json to_json(const HalfspaceSet& set);
HalfspaceSet halfspaces_from_json(const Json& j);

// {"kind": "collapsing_pyramid", "N": 2, "alpha": 0.1} and similar.
Json to_json(const ShapeFamily& shape);
ShapeFamily shape_from_json(const Json& j);

/// Any of the three forms above, as a planar polygon.
ConvexPolygon domain_from_json(const Json& j);

// {"nodes": [[x, y], ...], "triangles": [[i, j, k], ...], "marks": [0|1, ...]}
Json to_json(const TriangleMesh& mesh);

Json to_json(const BoundReport& report);
Json to_json(const Verdict& verdict);

}  // namespace pfreq::io
