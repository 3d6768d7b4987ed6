#include "pfreq/eigensolver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "pfreq/errors.hpp"
#include "pfreq/poincare1d.hpp"

namespace pfreq {

namespace {

using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using Grad = Eigen::Matrix<double, 2, 3>;

// Element data and free-node numbering for one mesh. Unknowns are the values
// at Free nodes; Dirichlet nodes are zero.
struct Discretization {
  const TriangleMesh& mesh;
  double p;
  double q;
  std::vector<int> index;
  int n = 0;
  std::vector<double> area;
  std::vector<Grad> grad;
  SpMat pattern;
  std::vector<std::array<int, 9>> slot;

  Discretization(const TriangleMesh& m, double p_, double q_) : mesh(m), p(p_), q(q_) {
    index.assign(mesh.size(), -1);
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      if (mesh.marks[i] == NodeMark::Free) index[i] = n++;
    }
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto& tri = mesh.triangles[t];
      const double a = mesh.triangle_area(t);
      Grad g;
      for (int k = 0; k < 3; ++k) {
        const Point2 e = mesh.nodes[tri[(k + 2) % 3]] - mesh.nodes[tri[(k + 1) % 3]];
        g(0, k) = -e.y() / (2.0 * a);
        g(1, k) = e.x() / (2.0 * a);
      }
      area.push_back(a);
      grad.push_back(g);
    }
  }

  void build_pattern() {
    std::vector<Eigen::Triplet<double>> trip;
    for (const auto& tri : mesh.triangles) {
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          const int r = index[tri[k]], c = index[tri[l]];
          if (r >= 0 && c >= 0) trip.emplace_back(r, c, 1.0);
        }
      }
    }
    pattern.resize(n, n);
    pattern.setFromTriplets(trip.begin(), trip.end());
    pattern.makeCompressed();
    slot.assign(mesh.triangles.size(), {});
    const int* outer = pattern.outerIndexPtr();
    const int* inner = pattern.innerIndexPtr();
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto& tri = mesh.triangles[t];
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          const int r = index[tri[k]], c = index[tri[l]];
          int s = -1;
          if (r >= 0 && c >= 0) {
            s = static_cast<int>(std::lower_bound(inner + outer[c], inner + outer[c + 1], r) - inner);
          }
          slot[t][3 * k + l] = s;
        }
      }
    }
  }

  Eigen::Vector3d local(const VectorXd& x, std::size_t t) const {
    const auto& tri = mesh.triangles[t];
    Eigen::Vector3d v;
    for (int k = 0; k < 3; ++k) v[k] = index[tri[k]] >= 0 ? x[index[tri[k]]] : 0.0;
    return v;
  }

  void scatter(VectorXd& out, std::size_t t, const Eigen::Vector3d& w) const {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      if (index[tri[k]] >= 0) out[index[tri[k]]] += w[k];
    }
  }

  // sum |T| (|g|^2 + eps^2)^{p/2}
  double energy(const VectorXd& x, double eps = 0.0) const {
    double e = 0.0;
    for (std::size_t t = 0; t < area.size(); ++t) {
      const Eigen::Vector2d g = grad[t] * local(x, t);
      e += area[t] * (eps == 0.0 ? std::pow(g.norm(), p) : std::pow(g.squaredNorm() + eps * eps, 0.5 * p));
    }
    return e;
  }

  double mass(const VectorXd& x) const {
    double d = 0.0;
    for (std::size_t t = 0; t < area.size(); ++t) d += area[t] * std::pow(std::abs(local(x, t).mean()), q);
    return d;
  }

  // Gradient of energy / p.
  VectorXd energy_gradient(const VectorXd& x, double eps = 0.0) const {
    VectorXd out = VectorXd::Zero(n);
    for (std::size_t t = 0; t < area.size(); ++t) {
      const Eigen::Vector2d g = grad[t] * local(x, t);
      const double s = g.squaredNorm() + eps * eps;
      if (s == 0.0) continue;
      scatter(out, t, area[t] * std::pow(s, 0.5 * p - 1.0) * (grad[t].transpose() * g));
    }
    return out;
  }

  // Gradient of mass / q.
  VectorXd mass_gradient(const VectorXd& x) const {
    VectorXd out = VectorXd::Zero(n);
    for (std::size_t t = 0; t < area.size(); ++t) {
      const double m = local(x, t).mean();
      if (m == 0.0) continue;
      const double w = area[t] * std::copysign(std::pow(std::abs(m), q - 1.0), m) / 3.0;
      scatter(out, t, Eigen::Vector3d::Constant(w));
    }
    return out;
  }

  double rms_gradient(const VectorXd& x) const {
    double s = 0.0, a = 0.0;
    for (std::size_t t = 0; t < area.size(); ++t) {
      s += area[t] * (grad[t] * local(x, t)).squaredNorm();
      a += area[t];
    }
    return std::sqrt(s / a);
  }

  // Hessian of energy / p into pattern's values; returns the mean diagonal.
  double fill_hessian(const VectorXd& x, double eps) {
    double* val = pattern.valuePtr();
    std::fill(val, val + pattern.nonZeros(), 0.0);
    for (std::size_t t = 0; t < area.size(); ++t) {
      const Eigen::Vector2d g = grad[t] * local(x, t);
      const double s = std::max(g.squaredNorm() + eps * eps, std::numeric_limits<double>::min());
      const Eigen::Matrix2d hf = std::pow(s, 0.5 * p - 1.0) * Eigen::Matrix2d::Identity() +
                                 (p - 2.0) * std::pow(s, 0.5 * p - 2.0) * g * g.transpose();
      const Eigen::Matrix3d ke = area[t] * grad[t].transpose() * hf * grad[t];
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          const int sl = slot[t][3 * k + l];
          if (sl >= 0) val[sl] += ke(k, l);
        }
      }
    }
    double diag = 0.0;
    for (int i = 0; i < n; ++i) diag += pattern.coeff(i, i);
    return diag / std::max(n, 1);
  }

  VectorXd full(const VectorXd& x) const {
    VectorXd u = VectorXd::Zero(static_cast<Eigen::Index>(mesh.size()));
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      if (index[i] >= 0) u[static_cast<Eigen::Index>(i)] = x[index[i]];
    }
    return u;
  }

  // Scale to unit mass and positive sum; returns the energy.
  double normalize(VectorXd& x) const {
    const double d = mass(x);
    if (!(d > 0.0)) throw ZeroDenominator("field vanishes on every triangle");
    x *= (x.sum() < 0.0 ? -1.0 : 1.0) * std::pow(d, -1.0 / q);
    return energy(x);
  }
};

// Pinned-energy minimiser of (1/p) E_eps(v) - b.v by damped Newton.
void newton(Discretization& disc, Eigen::SimplicialLDLT<SpMat>& ldlt, VectorXd& v,
            const VectorXd& b, double eps) {
  const double p = disc.p;
  auto objective = [&](const VectorXd& y) { return disc.energy(y, eps) / p - b.dot(y); };
  for (int it = 0; it < 40; ++it) {
    const VectorXd g = disc.energy_gradient(v, eps) - b;
    const double mean_diag = disc.fill_hessian(v, eps);
    SpMat hess = disc.pattern;
    for (int i = 0; i < disc.n; ++i) hess.coeffRef(i, i) += 1e-12 * mean_diag;
    ldlt.factorize(hess);
    if (ldlt.info() != Eigen::Success) throw NonConvergence("Newton factorisation failed", 0.0);
    const VectorXd step = ldlt.solve(-g);
    const double decrement = -g.dot(step);
    const double scale = b.cwiseProduct(v).cwiseAbs().sum();
    if (!(decrement > 1e-15 * scale)) return;
    const double f0 = objective(v);
    double t = 1.0;
    VectorXd trial;
    for (int ls = 0; ls < 60; ++ls) {
      trial = v + t * step;
      const double f1 = objective(trial);
      if (std::isfinite(f1) && f1 <= f0 - 1e-4 * t * decrement) break;
      t *= 0.5;
    }
    v.swap(trial);
    if (decrement < 1e-13 * scale) return;
  }
}

struct Run {
  VectorXd best;
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

Run run_nonlinear(Discretization& disc, VectorXd x, const SolverConfig& config) {
  Eigen::SimplicialLDLT<SpMat> ldlt;
  ldlt.analyzePattern(disc.pattern);
  const double p = disc.p;
  double e = disc.normalize(x);
  Run run;
  run.best = x;
  run.value = e;
  const auto stages = config.smoothing.empty() ? std::vector<double>{0.0} : config.smoothing;
  for (std::size_t stage = 0; stage < stages.size(); ++stage) {
    const bool last = stage + 1 == stages.size();
    const double tol = last ? config.tolerance : std::max(config.tolerance, 1e-7);
    bool settled = false;
    while (run.iterations < config.max_iterations) {
      ++run.iterations;
      // The inner minimiser is close to warm * x, so eps is set on that scale.
      const double warm = std::pow(e, -1.0 / (p - 1.0));
      const double eps = stages[stage] * warm * disc.rms_gradient(x);
      const VectorXd b = disc.mass_gradient(x);
      VectorXd v = warm * x;
      newton(disc, ldlt, v, b, eps);
      const double e_new = disc.normalize(v);
      x.swap(v);
      const double change = std::abs(e_new - e);
      e = e_new;
      if (e < run.value) {
        run.value = e;
        run.best = x;
      }
      if (change <= tol * e) {
        settled = true;
        break;
      }
    }
    if (last) run.converged = settled;
  }
  return run;
}

// p = q = 2: plain inverse iteration with one factorisation.
Run run_linear(const Discretization& disc, const Eigen::SimplicialLDLT<SpMat>& ldlt,
               const SpMat& mass, VectorXd x, const SolverConfig& config) {
  Run run;
  double e = disc.normalize(x);
  run.best = x;
  run.value = e;
  while (run.iterations < config.max_iterations) {
    ++run.iterations;
    VectorXd v = ldlt.solve(mass * x);
    const double e_new = disc.normalize(v);
    x.swap(v);
    const double change = std::abs(e_new - e);
    e = e_new;
    if (e < run.value) {
      run.value = e;
      run.best = x;
    }
    if (change <= config.tolerance * e) {
      run.converged = true;
      break;
    }
  }
  return run;
}

VectorXd distance_start(const Discretization& disc) {
  const auto& mesh = disc.mesh;
  std::vector<Point2> pinned;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    if (mesh.marks[i] == NodeMark::Dirichlet) pinned.push_back(mesh.nodes[i]);
  }
  VectorXd x(disc.n);
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    if (disc.index[i] < 0) continue;
    double d = std::numeric_limits<double>::infinity();
    for (const auto& y : pinned) d = std::min(d, (mesh.nodes[i] - y).squaredNorm());
    x[disc.index[i]] = std::sqrt(d);
  }
  return x;
}

}  // namespace

void check_exponents(double p, double q) {
  if (!(p >= kMinExponent && p <= kMaxExponent)) {
    std::ostringstream msg;
    msg << "exponent p=" << p << " outside [" << kMinExponent << ", " << kMaxExponent << "]";
    throw DomainError(msg.str());
  }
  if (std::isinf(q) && q > 0.0) throw Unsupported("q = infinity is outside the solver scope");
  if (!(q >= 1.0) || !std::isfinite(q)) {
    throw InadmissibleExponent("q must be a finite number >= 1");
  }
  if (p < 2.0 && !(q < 2.0 * p / (2.0 - p))) {
    std::ostringstream msg;
    msg << "q=" << q << " is not below the critical exponent " << 2.0 * p / (2.0 - p);
    throw InadmissibleExponent(msg.str());
  }
}

double rayleigh_pq(const TriangleMesh& mesh, const DiscreteField& u, double p, double q) {
  if (u.size() != static_cast<Eigen::Index>(mesh.size())) throw DomainError("field has wrong length");
  double e = 0.0, d = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double a = mesh.triangle_area(t);
    Eigen::Vector3d v;
    for (int k = 0; k < 3; ++k) v[k] = mesh.marks[tri[k]] == NodeMark::Free ? u[tri[k]] : 0.0;
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    for (int k = 0; k < 3; ++k) {
      const Point2 edge = mesh.nodes[tri[(k + 2) % 3]] - mesh.nodes[tri[(k + 1) % 3]];
      g += v[k] * Eigen::Vector2d(-edge.y(), edge.x()) / (2.0 * a);
    }
    e += a * std::pow(g.norm(), p);
    d += a * std::pow(std::abs(v.mean()), q);
  }
  if (!(d > 0.0)) throw ZeroDenominator("field vanishes on every triangle");
  return e / std::pow(d, p / q);
}

SolveResult solve_on_mesh(const TriangleMesh& mesh, const SolverConfig& config) {
  const double p = config.p;
  const double q = config.exponent_q();
  check_exponents(p, q);
  Discretization disc(mesh, p, q);
  if (disc.n == 0) throw MeshFailure("mesh has no free nodes");
  disc.build_pattern();

  std::vector<VectorXd> starts{distance_start(disc)};
  for (int k = 0; k < config.restarts; ++k) {
    std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(k));
    std::uniform_real_distribution<double> unit(0.1, 1.0);
    VectorXd x(disc.n);
    for (int i = 0; i < disc.n; ++i) x[i] = unit(rng);
    starts.push_back(x);
  }

  const bool linear = p == 2.0 && q == 2.0;
  Eigen::SimplicialLDLT<SpMat> stiffness_ldlt;
  SpMat mass_matrix;
  if (linear) {
    std::vector<Eigen::Triplet<double>> kt, mt;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      const Eigen::Matrix3d ke = disc.area[t] * disc.grad[t].transpose() * disc.grad[t];
      const auto& tri = mesh.triangles[t];
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          const int r = disc.index[tri[k]], c = disc.index[tri[l]];
          if (r < 0 || c < 0) continue;
          kt.emplace_back(r, c, ke(k, l));
          mt.emplace_back(r, c, disc.area[t] / 9.0);
        }
      }
    }
    SpMat stiffness(disc.n, disc.n);
    stiffness.setFromTriplets(kt.begin(), kt.end());
    mass_matrix.resize(disc.n, disc.n);
    mass_matrix.setFromTriplets(mt.begin(), mt.end());
    stiffness_ldlt.compute(stiffness);
    if (stiffness_ldlt.info() != Eigen::Success) throw NonConvergence("stiffness factorisation failed", 0.0);
  }

  SolveResult out;
  out.mesh = mesh;
  Run best;
  bool all_converged = true;
  for (const auto& x0 : starts) {
    Run run = linear ? run_linear(disc, stiffness_ldlt, mass_matrix, x0, config)
                     : run_nonlinear(disc, x0, config);
    out.iterations += run.iterations;
    all_converged = all_converged && run.converged;
    out.restart_values.push_back(run.value);
    if (run.value < best.value) best = std::move(run);
  }
  const auto [lo, hi] = std::minmax_element(out.restart_values.begin(), out.restart_values.end());
  const bool agree = *hi - *lo <= config.restart_agreement * *lo;
  out.converged = all_converged && agree;

  out.minimizer = disc.full(best.best);
  out.value = rayleigh_pq(mesh, out.minimizer, p, q);

  // Relative residual of grad E / p = (E / D) grad D / q.
  const double e = disc.energy(best.best);
  const double d = disc.mass(best.best);
  const VectorXd rhs = (e / d) * disc.mass_gradient(best.best);
  const double scale = rhs.cwiseAbs().maxCoeff();
  out.residual = scale > 0.0 ? (disc.energy_gradient(best.best) - rhs).cwiseAbs().maxCoeff() / scale : 0.0;
  return out;
}

SolveResult minimize_lambda_pq(const ConvexPolygon& polygon, double p, double q, SolverConfig config) {
  config.p = p;
  config.q = q;
  check_exponents(p, q);
  const double h = config.h > 0.0 ? config.h : default_mesh_size(polygon);
  return solve_on_mesh(triangulate(polygon, h, config.mesh), config);
}

SolveResult minimize_lambda_p(const ConvexPolygon& polygon, double p, SolverConfig config) {
  return minimize_lambda_pq(polygon, p, p, std::move(config));
}

SolveResult minimize_mixed(const ConvexPolygon& polygon, const std::vector<int>& dirichlet_edges,
                           double p, SolverConfig config) {
  if (dirichlet_edges.empty()) throw DomainError("at least one edge must carry the zero condition");
  config.p = p;
  config.q = p;
  check_exponents(p, p);
  const double h = config.h > 0.0 ? config.h : default_mesh_size(polygon);
  TriangleMesh mesh = triangulate(polygon, h, config.mesh);
  set_dirichlet_edges(mesh, dirichlet_edges);
  return solve_on_mesh(mesh, config);
}

double gradient_check(const TriangleMesh& mesh, const DiscreteField& u, double p, double q,
                      double delta, double eps, std::uint64_t seed) {
  Discretization disc(mesh, p, q);
  VectorXd x(disc.n);
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    if (disc.index[i] >= 0) x[disc.index[i]] = u[static_cast<Eigen::Index>(i)];
  }
  auto quotient = [&](const VectorXd& y) { return disc.energy(y, eps) / std::pow(disc.mass(y), p / q); };
  const double e = disc.energy(x, eps);
  const double d = disc.mass(x);
  const VectorXd analytic =
      (p * disc.energy_gradient(x, eps) - p * (e / d) * disc.mass_gradient(x)) / std::pow(d, p / q);

  std::vector<int> coords(disc.n);
  std::iota(coords.begin(), coords.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(coords.begin(), coords.end(), rng);
  coords.resize(std::min<std::size_t>(coords.size(), 20));

  const double step = delta * std::max(x.cwiseAbs().maxCoeff(), 1e-300);
  double worst = 0.0, biggest = 0.0;
  for (int c : coords) {
    VectorXd plus = x, minus = x;
    plus[c] += step;
    minus[c] -= step;
    const double fd = (quotient(plus) - quotient(minus)) / (2.0 * step);
    worst = std::max(worst, std::abs(fd - analytic[c]));
    biggest = std::max(biggest, std::abs(analytic[c]));
  }
  return biggest > 0.0 ? worst / biggest : worst;
}

}  // namespace pfreq
