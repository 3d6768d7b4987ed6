#pragma once

// Closed-form eigenvalue bounds for convex sets and verdicts against
// measured eigenvalues.

#include <map>
#include <string>
#include <vector>

namespace pfreq {

enum class Side { Lower, Upper };
enum class PiSource { Estimate, Reference };

std::string to_string(Side side);
std::string to_string(PiSource source);

struct BoundReport {
  std::string name;
  Side side = Side::Lower;
  double value = 0.0;
  std::map<std::string, double> inputs;
  std::string citation;
  std::vector<std::string> notes;
};

struct Verdict {
  BoundReport report;
  double measured = 0.0;
  // (measured - value) / value for lower bounds, reversed for upper ones.
  double margin = 0.0;
  double slack = 0.0;
  bool pass = false;
};

/// pi_p from the 1D solver (n = 2000, cached) or from the closed form.
double pi_p_value(double p, PiSource source = PiSource::Estimate);

struct BallReference {
  double p = 2.0;
  double value = 0.0;  // first eigenvalue of the unit disk
  double volume = 0.0;
  std::string provenance;
};

/// Unit disk eigenvalue: the first Bessel zero squared for p = 2, otherwise
/// solved on the inscribed 256-gon with mesh size h and cached.
BallReference ball_reference(double p, double h = 1.0 / 48.0);

BoundReport hersch_protter_lower(double p, double R, PiSource source = PiSource::Estimate);
BoundReport hardy_lower(double p, double R);
BoundReport ball_upper(double p, double R, double lambda_ball,
                       const std::string& provenance = "caller supplied");
BoundReport faber_krahn_lower(double p, int N, double V, double lambda_ball, double ball_volume,
                              const std::string& provenance = "caller supplied");
BoundReport isoperimetric_lower(double p, int N, double P, double V,
                                PiSource source = PiSource::Estimate);
BoundReport isoperimetric_upper(double p, double P, double V, PiSource source = PiSource::Estimate);
BoundReport cheeger_lower(int N, double P, double V);
/// (lambda_p_lower)^theta with theta = N/q - N/p + 1 and the interpolation
/// constant set to 1. Accepts q >= p inside the admissibility window.
BoundReport superhomogeneous_lower(double p, double q, int N, double R, double lambda_p_lower);

/// R/N <= V/P.
Verdict geometric_check(double R, int N, double P, double V);

/// Default slack: 0 for lower bounds, 2% for upper bounds.
double default_slack(Side side);
Verdict verdict(const BoundReport& report, double measured);
Verdict verdict(const BoundReport& report, double measured, double slack);

}  // namespace pfreq
