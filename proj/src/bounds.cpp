#include "pfreq/bounds.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "pfreq/eigensolver.hpp"
#include "pfreq/errors.hpp"
#include "pfreq/geometry.hpp"
#include "pfreq/poincare1d.hpp"

namespace pfreq {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << what << " must be positive and finite, got " << x;
    throw DomainError(msg.str());
  }
}

void require_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("bounds need 1 < p < inf");
}

void require_dim(int N) {
  if (N < 1) throw DomainError("dimension must be at least 1");
}

BoundReport make(std::string name, Side side, double value, std::string citation) {
  BoundReport r;
  r.name = std::move(name);
  r.side = side;
  r.value = value;
  r.citation = std::move(citation);
  return r;
}

std::string pi_note(PiSource source) {
  return source == PiSource::Estimate ? "pi_p from 1D solver, n=2000" : "pi_p from closed form";
}

}  // namespace

std::string to_string(Side side) { return side == Side::Lower ? "lower" : "upper"; }

std::string to_string(PiSource source) { return source == PiSource::Estimate ? "estimate" : "reference"; }

double pi_p_value(double p, PiSource source) {
  if (source == PiSource::Reference) return pi_p_reference(p);
  static std::mutex mutex;
  static std::map<double, double> cache;
  {
    std::lock_guard lock(mutex);
    const auto it = cache.find(p);
    if (it != cache.end()) return it->second;
  }
  const double value = pi_p_estimate(p, 2000);
  std::lock_guard lock(mutex);
  cache.emplace(p, value);
  return value;
}

BallReference ball_reference(double p, double h) {
  BallReference ref;
  ref.p = p;
  ref.volume = std::numbers::pi;
  if (p == 2.0) {
    const double j = boost::math::cyl_bessel_j_zero(0.0, 1);
    ref.value = j * j;
    ref.provenance = "first zero of J_0, squared";
    return ref;
  }
  static std::mutex mutex;
  static std::map<std::pair<double, double>, double> cache;
  const auto key = std::make_pair(p, h);
  std::ostringstream prov;
  prov << "solved on inscribed 256-gon, h=" << h;
  ref.provenance = prov.str();
  {
    std::lock_guard lock(mutex);
    const auto it = cache.find(key);
    if (it != cache.end()) {
      ref.value = it->second;
      return ref;
    }
  }
  SolverConfig config;
  config.h = h;
  const auto r = minimize_lambda_p(to_polygon(ShapeFamily{Disk{1.0}}), p, config);
  if (!r.converged) throw NonConvergence("unit disk eigenvalue did not converge", r.value);
  ref.value = r.value;
  std::lock_guard lock(mutex);
  cache.emplace(key, r.value);
  return ref;
}

BoundReport hersch_protter_lower(double p, double R, PiSource source) {
  require_exponent(p);
  require_positive(R, "inradius");
  const double pi_p = pi_p_value(p, source);
  auto r = make("hersch_protter_lower", Side::Lower, std::pow(pi_p / 2.0, p) / std::pow(R, p),
                "inradius lower bound (pi_p/2)^p / R^p");
  r.inputs = {{"p", p}, {"R", R}, {"pi_p", pi_p}};
  r.notes.push_back(pi_note(source));
  return r;
}

BoundReport hardy_lower(double p, double R) {
  require_exponent(p);
  require_positive(R, "inradius");
  auto r = make("hardy_lower", Side::Lower, std::pow((p - 1.0) / p, p) / std::pow(R, p),
                "Hardy-type lower bound ((p-1)/p)^p / R^p");
  r.inputs = {{"p", p}, {"R", R}};
  return r;
}

BoundReport ball_upper(double p, double R, double lambda_ball, const std::string& provenance) {
  require_exponent(p);
  require_positive(R, "inradius");
  require_positive(lambda_ball, "ball eigenvalue");
  auto r = make("ball_upper", Side::Upper, lambda_ball / std::pow(R, p),
                "inscribed ball upper bound lambda_p(B_1) / R^p");
  r.inputs = {{"p", p}, {"R", R}, {"lambda_ball", lambda_ball}};
  r.notes.push_back("lambda_ball: " + provenance);
  return r;
}

BoundReport faber_krahn_lower(double p, int N, double V, double lambda_ball, double ball_volume,
                              const std::string& provenance) {
  require_exponent(p);
  require_dim(N);
  require_positive(V, "volume");
  require_positive(lambda_ball, "ball eigenvalue");
  require_positive(ball_volume, "ball volume");
  const double s = p / N;
  auto r = make("faber_krahn_lower", Side::Lower, std::pow(ball_volume, s) * lambda_ball / std::pow(V, s),
                "Faber-Krahn lower bound |B|^{p/N} lambda_p(B) / |Omega|^{p/N}");
  r.inputs = {{"p", p}, {"N", N}, {"V", V}, {"lambda_ball", lambda_ball}, {"ball_volume", ball_volume}};
  r.notes.push_back("lambda_ball: " + provenance);
  return r;
}

BoundReport isoperimetric_lower(double p, int N, double P, double V, PiSource source) {
  require_exponent(p);
  require_dim(N);
  require_positive(P, "perimeter");
  require_positive(V, "volume");
  const double pi_p = pi_p_value(p, source);
  auto r = make("isoperimetric_lower", Side::Lower, std::pow(pi_p / (2.0 * N) * P / V, p),
                "perimeter-volume lower bound (pi_p/(2N))^p (P/V)^p");
  r.inputs = {{"p", p}, {"N", N}, {"P", P}, {"V", V}, {"pi_p", pi_p}};
  r.notes.push_back(pi_note(source));
  return r;
}

BoundReport isoperimetric_upper(double p, double P, double V, PiSource source) {
  require_exponent(p);
  require_positive(P, "perimeter");
  require_positive(V, "volume");
  const double pi_p = pi_p_value(p, source);
  auto r = make("isoperimetric_upper", Side::Upper, std::pow(pi_p / 2.0 * P / V, p),
                "perimeter-volume upper bound (pi_p/2)^p (P/V)^p, strict");
  r.inputs = {{"p", p}, {"P", P}, {"V", V}, {"pi_p", pi_p}};
  r.notes.push_back(pi_note(source));
  return r;
}

BoundReport cheeger_lower(int N, double P, double V) {
  require_dim(N);
  require_positive(P, "perimeter");
  require_positive(V, "volume");
  auto r = make("cheeger_lower", Side::Lower, P / (N * V), "Cheeger constant lower bound P / (N V)");
  r.inputs = {{"N", N}, {"P", P}, {"V", V}};
  return r;
}

BoundReport superhomogeneous_lower(double p, double q, int N, double R, double lambda_p_lower) {
  require_exponent(p);
  require_dim(N);
  require_positive(R, "inradius");
  require_positive(lambda_p_lower, "lambda_p lower bound");
  if (std::isinf(q) && q > 0.0) throw Unsupported("q = infinity is outside the solver scope");
  if (!(q >= p) || !std::isfinite(q)) {
    throw InadmissibleExponent("the super-homogeneous bound needs q >= p; for q < p the infimum over convex sets vanishes");
  }
  if (p < N && !(q < N * p / (N - p))) throw InadmissibleExponent("q is not below the Sobolev exponent");
  const double theta = N / q - N / p + 1.0;
  auto r = make("superhomogeneous_lower", Side::Lower, std::pow(lambda_p_lower, theta),
                "super-homogeneous lower bound C / R^{Np/q - N + p}");
  r.inputs = {{"p", p},
              {"q", q},
              {"N", N},
              {"R", R},
              {"lambda_p_lower", lambda_p_lower},
              {"theta", theta},
              {"R_exponent", N * p / q - N + p},
              {"constant", 1.0}};
  r.notes.push_back("non-sharp constant: interpolation constant set to 1");
  return r;
}

Verdict geometric_check(double R, int N, double P, double V) {
  require_positive(R, "inradius");
  require_dim(N);
  require_positive(P, "perimeter");
  require_positive(V, "volume");
  auto r = make("geometric_inequality", Side::Upper, V / P, "R/N <= |Omega|/P");
  r.inputs = {{"R", R}, {"N", N}, {"P", P}, {"V", V}};
  Verdict v;
  v.report = r;
  v.measured = R / N;
  v.margin = (r.value - v.measured) / r.value;
  v.slack = 0.0;
  v.pass = v.measured <= r.value + 1e-12;
  return v;
}

double default_slack(Side side) { return side == Side::Lower ? 0.0 : 0.02; }

Verdict verdict(const BoundReport& report, double measured) {
  return verdict(report, measured, default_slack(report.side));
}

Verdict verdict(const BoundReport& report, double measured, double slack) {
  require_positive(measured, "measured value");
  Verdict v;
  v.report = report;
  v.measured = measured;
  v.slack = slack;
  v.margin = report.side == Side::Lower ? (measured - report.value) / report.value
                                        : (report.value - measured) / report.value;
  v.pass = v.margin >= -slack;
  return v;
}

}  // namespace pfreq
