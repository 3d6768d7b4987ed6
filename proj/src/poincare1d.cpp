#include "pfreq/poincare1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pfreq/errors.hpp"

namespace pfreq {

Grid1D::Grid1D(int n, double a) : interior_nodes(n), length(a) {
  if (n < 8) throw DomainError("1D grid needs at least 8 interior nodes");
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("interval length must be positive");
}

namespace {

void check_exponent(double p) {
  if (!(p >= kMinExponent && p <= kMaxExponent)) {
    std::ostringstream msg;
    msg << "exponent p=" << p << " outside [" << kMinExponent << ", " << kMaxExponent << "]";
    throw DomainError(msg.str());
  }
}

// Unknowns are nodes 1..last; node 0 is pinned, node cells() is pinned for
// BothEnds and free for LeftEnd.
struct Problem {
  double p;
  double h;
  int cells;
  bool right_free;

  int unknowns() const { return right_free ? cells : cells - 1; }

  // Full nodal vector from unknowns.
  double node(const std::vector<double>& v, int j) const {
    if (j == 0) return 0.0;
    if (j == cells && !right_free) return 0.0;
    return v[j - 1];
  }

  double energy(const std::vector<double>& v) const {
    double e = 0.0;
    for (int c = 0; c < cells; ++c) {
      e += h * std::pow(std::abs((node(v, c + 1) - node(v, c)) / h), p);
    }
    return e;
  }

  double mass(const std::vector<double>& v) const {
    double d = 0.0;
    for (int c = 0; c < cells; ++c) {
      d += h * std::pow(std::abs(0.5 * (node(v, c + 1) + node(v, c))), p);
    }
    return d;
  }

  // Gradient of mass/p with respect to the unknowns.
  std::vector<double> mass_gradient(const std::vector<double>& v) const {
    std::vector<double> g(v.size(), 0.0);
    for (int c = 0; c < cells; ++c) {
      const double m = 0.5 * (node(v, c + 1) + node(v, c));
      const double w = 0.5 * h * std::copysign(std::pow(std::abs(m), p - 1.0), m);
      if (c >= 1) g[c - 1] += w;
      if (c + 1 <= unknowns()) g[c] += w;
    }
    return g;
  }

  double rms_slope(const std::vector<double>& v) const {
    double s = 0.0;
    for (int c = 0; c < cells; ++c) {
      const double g = (node(v, c + 1) - node(v, c)) / h;
      s += g * g;
    }
    return std::sqrt(s / cells);
  }

  // Phi(v) = (1/p) sum h (g^2 + eps^2)^{p/2} - b.v
  double objective(const std::vector<double>& v, const std::vector<double>& b, double eps) const {
    double e = 0.0;
    for (int c = 0; c < cells; ++c) {
      const double g = (node(v, c + 1) - node(v, c)) / h;
      e += h * std::pow(g * g + eps * eps, 0.5 * p);
    }
    double lin = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) lin += b[i] * v[i];
    return e / p - lin;
  }

  // Minimise Phi by damped Newton; the Hessian is tridiagonal.
  void newton(std::vector<double>& v, const std::vector<double>& b, double eps) const {
    const int m = unknowns();
    std::vector<double> grad(m), diag(m), off(m), step(m);
    for (int it = 0; it < 200; ++it) {
      std::fill(grad.begin(), grad.end(), 0.0);
      std::fill(diag.begin(), diag.end(), 0.0);
      std::fill(off.begin(), off.end(), 0.0);
      double mean_k = 0.0;
      for (int c = 0; c < cells; ++c) {
        const double g = (node(v, c + 1) - node(v, c)) / h;
        const double s = g * g + eps * eps;
        const double flux = std::pow(s, 0.5 * p - 1.0) * g;
        const double k = std::pow(s, 0.5 * p - 2.0) * ((p - 1.0) * g * g + eps * eps) / h;
        mean_k += k / cells;
        // d g / d v_{c+1} = 1/h, d g / d v_c = -1/h; unknown index is node - 1.
        if (c >= 1) {
          grad[c - 1] -= flux;
          diag[c - 1] += k;
        }
        if (c + 1 <= m) {
          grad[c] += flux;
          diag[c] += k;
        }
        if (c >= 1 && c + 1 <= m) off[c - 1] -= k;  // couples unknowns c-1 and c
      }
      for (int i = 0; i < m; ++i) {
        grad[i] -= b[i];
        diag[i] += 1e-13 * mean_k;
      }
      // Thomas algorithm for H step = -grad.
      std::vector<double> cp(m), dp(m);
      cp[0] = off[0] / diag[0];
      dp[0] = -grad[0] / diag[0];
      for (int i = 1; i < m; ++i) {
        const double denom = diag[i] - off[i - 1] * cp[i - 1];
        cp[i] = i + 1 < m ? off[i] / denom : 0.0;
        dp[i] = (-grad[i] - off[i - 1] * dp[i - 1]) / denom;
      }
      step[m - 1] = dp[m - 1];
      for (int i = m - 2; i >= 0; --i) step[i] = dp[i] - cp[i] * step[i + 1];

      double decrement = 0.0;
      double scale = 0.0;
      for (int i = 0; i < m; ++i) {
        decrement -= grad[i] * step[i];
        scale += std::abs(b[i] * v[i]);
      }
      if (!(decrement > 1e-15 * scale)) return;

      const double f0 = objective(v, b, eps);
      double t = 1.0;
      std::vector<double> trial(m);
      for (int ls = 0; ls < 60; ++ls) {
        for (int i = 0; i < m; ++i) trial[i] = v[i] + t * step[i];
        const double f1 = objective(trial, b, eps);
        if (std::isfinite(f1) && f1 <= f0 - 1e-4 * t * decrement) break;
        t *= 0.5;
      }
      v.swap(trial);
      if (decrement < 1e-13 * scale) return;
    }
  }
};

double normalize(const Problem& prob, std::vector<double>& v) {
  const double d = prob.mass(v);
  const double s = std::pow(d, -1.0 / prob.p);
  double sum = 0.0;
  for (double x : v) sum += x;
  const double sign = sum < 0.0 ? -1.0 : 1.0;
  for (double& x : v) x *= sign * s;
  return prob.energy(v);
}

Poincare1dResult solve(double p, const Grid1D& grid, Boundary1D boundary,
                       const Poincare1dConfig& config) {
  check_exponent(p);
  const Problem prob{p, grid.spacing(), grid.cells(), boundary == Boundary1D::LeftEnd};
  const int m = prob.unknowns();

  std::vector<double> u(m);
  for (int i = 0; i < m; ++i) {
    const double x = (i + 1) * prob.h / grid.length;
    u[i] = prob.right_free ? std::sin(0.5 * std::numbers::pi * x) : std::sin(std::numbers::pi * x);
  }
  double q = normalize(prob, u);
  std::vector<double> best = u;
  double best_q = q;

  Poincare1dResult out;
  const auto& stages = config.smoothing.empty() ? std::vector<double>{0.0} : config.smoothing;
  for (std::size_t stage = 0; stage < stages.size(); ++stage) {
    const bool last = stage + 1 == stages.size();
    const double tol = last ? config.tolerance : std::max(config.tolerance, 1e-7);
    bool settled = false;
    while (out.iterations < config.max_iterations) {
      ++out.iterations;
      // v is expected near warm * u, so eps is measured on that scale.
      const double warm = std::pow(q, -1.0 / (p - 1.0));
      const double eps = stages[stage] * warm * prob.rms_slope(u);
      const auto b = prob.mass_gradient(u);
      std::vector<double> v(u);
      for (double& x : v) x *= warm;
      prob.newton(v, b, eps);
      const double q_new = normalize(prob, v);
      u.swap(v);
      const double change = std::abs(q_new - q);
      q = q_new;
      if (q < best_q) {
        best_q = q;
        best = u;
      }
      if (change <= tol * q) {
        settled = true;
        break;
      }
    }
    if (last) out.converged = settled;
  }

  out.quotient = best_q;
  out.value = prob.right_free ? best_q : std::pow(best_q, 1.0 / p);
  out.minimizer.grid = grid;
  out.minimizer.boundary = boundary;
  out.minimizer.values.assign(static_cast<std::size_t>(grid.cells() + 1), 0.0);
  for (int j = 1; j <= grid.cells(); ++j) out.minimizer.values[j] = prob.node(best, j);
  return out;
}

}  // namespace

double rayleigh_1d(const DiscreteFunction1D& f, double p) {
  const auto& v = f.values;
  const int cells = f.grid.cells();
  if (static_cast<int>(v.size()) != cells + 1) throw DomainError("nodal vector has wrong length");
  const double h = f.grid.spacing();
  double e = 0.0;
  double d = 0.0;
  for (int c = 0; c < cells; ++c) {
    e += h * std::pow(std::abs((v[c + 1] - v[c]) / h), p);
    d += h * std::pow(std::abs(0.5 * (v[c + 1] + v[c])), p);
  }
  if (!(d > 0.0)) throw ZeroDenominator("function vanishes identically");
  return e / d;
}

Poincare1dResult solve_pi_p(double p, int n, const Poincare1dConfig& config) {
  return solve(p, Grid1D(n, 1.0), Boundary1D::BothEnds, config);
}

Poincare1dResult solve_half_poincare(double p, int n, double a, const Poincare1dConfig& config) {
  return solve(p, Grid1D(n, a), Boundary1D::LeftEnd, config);
}

double pi_p_estimate(double p, int n, const Poincare1dConfig& config) {
  const auto r = solve_pi_p(p, n, config);
  if (!r.converged) throw NonConvergence("pi_p iteration did not converge", r.value);
  return r.value;
}

double half_poincare_estimate(double p, int n, double a, const Poincare1dConfig& config) {
  const auto r = solve_half_poincare(p, n, a, config);
  if (!r.converged) throw NonConvergence("half-interval iteration did not converge", r.value);
  return r.value;
}

double pi_p_reference(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("pi_p reference needs 1 < p < inf");
  return 2.0 * std::numbers::pi * std::pow(p - 1.0, 1.0 / p) /
         (p * std::sin(std::numbers::pi / p));
}

}  // namespace pfreq
