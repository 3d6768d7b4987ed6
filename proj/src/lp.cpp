#include "pfreq/lp.hpp"

#include <limits>
#include <utility>
#include <vector>

namespace pfreq::lp {

namespace {

// Tableau layout: rows 0..m-1 are constraints, row m is the objective, row
// m+1 the phase-one objective. Columns 0..n-1 hold nonbasic variables, column
// n the artificial variable, column n+1 the right-hand side.
class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
          const Eigen::VectorXd& c, double eps)
      : m_(static_cast<int>(b.size())),
        n_(static_cast<int>(c.size())),
        eps_(eps),
        basis_(m_),
        nonbasis_(n_ + 1),
        d_(Eigen::MatrixXd::Zero(m_ + 2, n_ + 2)) {
    d_.topLeftCorner(m_, n_) = A;
    for (int i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      d_(i, n_) = -1.0;
      d_(i, n_ + 1) = b(i);
    }
    for (int j = 0; j < n_; ++j) {
      nonbasis_[j] = j;
      d_(m_, j) = -c(j);
    }
    nonbasis_[n_] = -1;
    d_(m_ + 1, n_) = 1.0;
  }

  Result solve() {
    Result out;
    int r = 0;
    for (int i = 1; i < m_; ++i) {
      if (d_(i, n_ + 1) < d_(r, n_ + 1)) r = i;
    }
    if (m_ > 0 && d_(r, n_ + 1) < -eps_) {
      pivot(r, n_);
      if (!run(1) || d_(m_ + 1, n_ + 1) < -eps_) {
        out.status = Status::Infeasible;
        return out;
      }
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] != -1) continue;
        int s = -1;
        for (int j = 0; j <= n_; ++j) {
          if (s == -1 || d_(i, j) < d_(i, s) ||
              (d_(i, j) == d_(i, s) && nonbasis_[j] < nonbasis_[s])) {
            s = j;
          }
        }
        pivot(i, s);
      }
    }
    if (!run(2)) {
      out.status = Status::Unbounded;
      out.objective = std::numeric_limits<double>::infinity();
      return out;
    }
    out.status = Status::Optimal;
    out.x = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= 0 && basis_[i] < n_) out.x(basis_[i]) = d_(i, n_ + 1);
    }
    out.objective = d_(m_, n_ + 1);
    return out;
  }

 private:
  void pivot(int r, int s) {
    const double inv = 1.0 / d_(r, s);
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      const double f = d_(i, s) * inv;
      if (f == 0.0) continue;
      for (int j = 0; j < n_ + 2; ++j) {
        if (j != s) d_(i, j) -= d_(r, j) * f;
      }
    }
    for (int j = 0; j < n_ + 2; ++j) {
      if (j != s) d_(r, j) *= inv;
    }
    for (int i = 0; i < m_ + 2; ++i) {
      if (i != r) d_(i, s) *= -inv;
    }
    d_(r, s) = inv;
    std::swap(basis_[r], nonbasis_[s]);
  }

  bool run(int phase) {
    const int x = phase == 1 ? m_ + 1 : m_;
    while (true) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (phase == 2 && nonbasis_[j] == -1) continue;
        if (s == -1 || d_(x, j) < d_(x, s) ||
            (d_(x, j) == d_(x, s) && nonbasis_[j] < nonbasis_[s])) {
          s = j;
        }
      }
      if (d_(x, s) > -eps_) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (d_(i, s) < eps_) continue;
        if (r == -1) {
          r = i;
          continue;
        }
        const double lhs = d_(i, n_ + 1) / d_(i, s);
        const double rhs = d_(r, n_ + 1) / d_(r, s);
        if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[r])) r = i;
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  int m_;
  int n_;
  double eps_;
  std::vector<int> basis_;
  std::vector<int> nonbasis_;
  Eigen::MatrixXd d_;
};

}  // namespace

Result maximize_nonnegative(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                            const Eigen::VectorXd& c, double eps) {
  Tableau t(A, b, c, eps);
  return t.solve();
}

Result maximize_free(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     const Eigen::VectorXd& c, double eps) {
  const auto n = c.size();
  Eigen::MatrixXd split(A.rows(), 2 * n);
  split << A, -A;
  Eigen::VectorXd c2(2 * n);
  c2 << c, -c;
  Result r = maximize_nonnegative(split, b, c2, eps);
  if (r.status == Status::Optimal) {
    r.x = (r.x.head(n) - r.x.tail(n)).eval();
  }
  return r;
}

}  // namespace pfreq::lp
