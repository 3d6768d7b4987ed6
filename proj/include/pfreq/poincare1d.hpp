#pragma once

// One-dimensional p-Poincare constants by discrete Rayleigh quotient
// minimisation on a uniform grid:
//
//   pi_p             two-sided zero boundary values on (0, 1), quotient of norms
//   half constant    zero at the left end only on (0, a), p-th power quotient
//
// Derivatives are exact forward differences of the piecewise-linear
// interpolant and |phi|^p is sampled at cell midpoints. By Jensen's
// inequality the midpoint rule never exceeds the exact integral of a
// piecewise-linear function, so every discrete quotient bounds the continuum
// constant from above.

#include <vector>

namespace pfreq {

enum class Boundary1D { BothEnds, LeftEnd };

struct Grid1D {
  int interior_nodes = 8;
  double length = 1.0;

  Grid1D(int n = 8, double a = 1.0);
  int cells() const { return interior_nodes + 1; }
  double spacing() const { return length / cells(); }
};

/// Nodal values on nodes 0..cells(); pinned values are exactly zero.
struct DiscreteFunction1D {
  Grid1D grid;
  Boundary1D boundary = Boundary1D::BothEnds;
  std::vector<double> values;
};

struct Poincare1dConfig {
  double tolerance = 1e-12;  // relative change of the quotient between sweeps
  int max_iterations = 50000;
  // Smoothing |t|^p -> (t^2 + eps^2)^{p/2}; eps relative to the RMS slope.
  std::vector<double> smoothing = {1e-3, 1e-5, 1e-8};
};

struct Poincare1dResult {
  // pi_p estimate (BothEnds) or p-th power half-interval constant (LeftEnd).
  double value = 0.0;
  // p-th power quotient of the stored minimiser.
  double quotient = 0.0;
  int iterations = 0;
  bool converged = false;
  DiscreteFunction1D minimizer;
};

// Admissible exponent range for direct solves.
inline constexpr double kMinExponent = 1.05;
inline constexpr double kMaxExponent = 50.0;

/// p-th power Rayleigh quotient sum h|phi'|^p / sum h|phi_mid|^p.
double rayleigh_1d(const DiscreteFunction1D& f, double p);

Poincare1dResult solve_pi_p(double p, int n, const Poincare1dConfig& config = {});
Poincare1dResult solve_half_poincare(double p, int n, double a,
                                     const Poincare1dConfig& config = {});

/// Throw NonConvergence (with the best value) when the solve stalls.
double pi_p_estimate(double p, int n, const Poincare1dConfig& config = {});
double half_poincare_estimate(double p, int n, double a,
                              const Poincare1dConfig& config = {});

/// 2 pi (p-1)^{1/p} / (p sin(pi/p)). Cross-check only.
double pi_p_reference(double p);

}  // namespace pfreq
