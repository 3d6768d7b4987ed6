#include "doctest.h"
#include "pfreq/lp.hpp"

using pfreq::lp::Status;

TEST_CASE("simplex solves a textbook maximisation") {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), value 36.
  Eigen::MatrixXd A(3, 2);
  A << 1, 0, 0, 2, 3, 2;
  Eigen::VectorXd b(3);
  b << 4, 12, 18;
  Eigen::VectorXd c(2);
  c << 3, 5;
  const auto r = pfreq::lp::maximize_nonnegative(A, b, c);
  REQUIRE(r.status == Status::Optimal);
  CHECK(r.objective == doctest::Approx(36.0));
  CHECK(r.x(0) == doctest::Approx(2.0));
  CHECK(r.x(1) == doctest::Approx(6.0));
}

TEST_CASE("simplex reports infeasible and unbounded problems") {
  Eigen::MatrixXd A(2, 1);
  A << 1, -1;
  Eigen::VectorXd b(2);
  b << 1, -2;  // x <= 1 and x >= 2
  Eigen::VectorXd c(1);
  c << 1;
  CHECK(pfreq::lp::maximize_free(A, b, c).status == Status::Infeasible);

  Eigen::MatrixXd A2(1, 1);
  A2 << -1;
  Eigen::VectorXd b2(1);
  b2 << 0;
  CHECK(pfreq::lp::maximize_free(A2, b2, c).status == Status::Unbounded);
}

TEST_CASE("free variables may go negative") {
  // max -x subject to x >= -3.
  Eigen::MatrixXd A(1, 1);
  A << -1;
  Eigen::VectorXd b(1);
  b << 3;
  Eigen::VectorXd c(1);
  c << -1;
  const auto r = pfreq::lp::maximize_free(A, b, c);
  REQUIRE(r.status == Status::Optimal);
  CHECK(r.x(0) == doctest::Approx(-3.0));
}
