#pragma once

// First eigenvalue of the p-Laplacian (and the (p, q) quotient) on polygons
// with P1 elements:
//
//   R(u) = sum_T |T| |grad u|_T^p / (sum_T |T| |u_T|^q)^{p/q},
//
// with u_T the mean of the three vertex values. Since |.|^q is convex,
// |u_T|^q never exceeds the mean of |u|^q over T, so R(u) is at least the
// continuum quotient of the same piecewise-linear function.

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

#include "pfreq/geometry.hpp"
#include "pfreq/mesh.hpp"

namespace pfreq {

using DiscreteField = Eigen::VectorXd;

struct SolverConfig {
  double p = 2.0;
  std::optional<double> q;  // empty means q = p
  // Smoothing |g|^p -> (|g|^2 + eps^2)^{p/2}; eps relative to the RMS gradient.
  std::vector<double> smoothing = {1e-3, 1e-5, 1e-8};
  int max_iterations = 3000;
  double tolerance = 1e-10;  // relative change of the quotient per iteration
  std::uint64_t seed = 1;
  int restarts = 3;          // random positive starts after the deterministic one
  double restart_agreement = 1e-6;
  double h = 0.0;            // 0 selects default_mesh_size
  MeshOptions mesh;

  double exponent_q() const { return q.value_or(p); }
};

struct SolveResult {
  double value = 0.0;  // quotient of the stored minimiser, recomputed
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  DiscreteField minimizer;
  TriangleMesh mesh;
  // Best value of each start, in order.
  std::vector<double> restart_values;
};

/// Throws DomainError for p outside [1.05, 50], Unsupported for q = inf and
/// InadmissibleExponent outside 1 <= q < 2p/(2-p) (p < 2).
void check_exponents(double p, double q);

double rayleigh_pq(const TriangleMesh& mesh, const DiscreteField& u, double p, double q);

/// Minimise over fields vanishing on Dirichlet nodes of an existing mesh.
SolveResult solve_on_mesh(const TriangleMesh& mesh, const SolverConfig& config);

SolveResult minimize_lambda_p(const ConvexPolygon& polygon, double p, SolverConfig config = {});
SolveResult minimize_lambda_pq(const ConvexPolygon& polygon, double p, double q,
                               SolverConfig config = {});
/// Zero boundary values on the listed edges only.
SolveResult minimize_mixed(const ConvexPolygon& polygon, const std::vector<int>& dirichlet_edges,
                           double p, SolverConfig config = {});

/// Largest relative discrepancy between the analytic gradient of the smoothed
/// quotient and central differences with step delta, over 20 random free
/// coordinates, normalised by the largest analytic component sampled.
double gradient_check(const TriangleMesh& mesh, const DiscreteField& u, double p, double q,
                      double delta, double eps = 0.0, std::uint64_t seed = 7);

}  // namespace pfreq
