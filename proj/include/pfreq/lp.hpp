#pragma once

#include <Eigen/Dense>

namespace pfreq::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  double objective = 0.0;
  Eigen::VectorXd x;
};

// Dense two-phase simplex for
//
//   maximize c^T x  subject to  A x <= b,  x >= 0.
//
// Bland's rule is used for entering/leaving ties, so the solver terminates on
// degenerate problems. Intended for the small problems this library produces
// (a few hundred rows at most).
Result maximize_nonnegative(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                            const Eigen::VectorXd& c, double eps = 1e-12);

// Same problem with every variable free (split internally as x = x+ - x-).
Result maximize_free(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     const Eigen::VectorXd& c, double eps = 1e-12);

}  // namespace pfreq::lp
