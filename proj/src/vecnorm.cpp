#include "simplexcert/vecnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace simplexcert {

double norm(const Eigen::Ref<const Eigen::VectorXd>& v, NormTag tag) {
  if (v.size() == 0) {
    throw InvalidInputError("norm: empty vector");
  }
  if (!v.allFinite()) {
    throw InvalidInputError("norm: vector has non-finite entries");
  }
  return tag == NormTag::L1 ? v.lpNorm<1>() : v.norm();
}

double gram_min_eigen_lb(const Eigen::Ref<const Eigen::MatrixXd>& vectors) {
  const Eigen::Index m = vectors.cols();
  const Eigen::Index d = vectors.rows();
  if (m < 1 || d < 1) {
    throw InvalidInputError("gram_min_eigen_lb: need at least one vector");
  }
  if (!vectors.allFinite()) {
    throw InvalidInputError("gram_min_eigen_lb: non-finite entries");
  }
  if (m > d) {
    throw InvalidInputError(
        "gram_min_eigen_lb: more vectors than ambient dimensions");
  }

  const Eigen::MatrixXd gram = vectors.transpose() * vectors;
  double lambda_min;
  if (m == 1) {
    lambda_min = gram(0, 0);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram,
                                                       Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
      throw CannotCertifyError(
          "gram_min_eigen_lb: symmetric eigen-iteration did not converge");
    }
    lambda_min = eig.eigenvalues().minCoeff();
  }

  // Forming the Gram matrix costs about d*eps per entry and the symmetric
  // eigensolver is backward stable; (m^2 + m*d)*eps*||G||_F covers both.
  const double eps = std::numeric_limits<double>::epsilon();
  const double envelope =
      (static_cast<double>(m) * static_cast<double>(m) +
       static_cast<double>(m) * static_cast<double>(d)) *
      eps * gram.norm();
  return std::max(0.0, lambda_min - envelope);
}

namespace {

Eigen::VectorXd eliminate_once(const Eigen::Ref<const Eigen::MatrixXd>& A,
                               const Eigen::Ref<const Eigen::VectorXd>& rhs,
                               double pivot_tolerance) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd u = A;
  Eigen::VectorXd y = rhs;
  // Max-abs of each original row, permuted together with the rows, so the
  // pivot threshold references the input scale rather than eliminated fill.
  Eigen::VectorXd row_scale = A.cwiseAbs().rowwise().maxCoeff();

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot_row = k;
    u.col(k).tail(n - k).cwiseAbs().maxCoeff(&pivot_row);
    pivot_row += k;
    if (!(std::abs(u(pivot_row, k)) >
          pivot_tolerance * row_scale(pivot_row))) {
      throw CannotCertifyError(
          "solve_linear: pivot below certification threshold; "
          "invertibility not certifiable");
    }
    if (pivot_row != k) {
      u.row(k).swap(u.row(pivot_row));
      std::swap(y(k), y(pivot_row));
      std::swap(row_scale(k), row_scale(pivot_row));
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double factor = u(i, k) / u(k, k);
      u.row(i).tail(n - k - 1) -= factor * u.row(k).tail(n - k - 1);
      u(i, k) = 0.0;
      y(i) -= factor * y(k);
    }
  }

  Eigen::VectorXd x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    x(i) = (y(i) - u.row(i).tail(n - i - 1).dot(x.tail(n - i - 1))) / u(i, i);
  }
  return x;
}

}  // namespace

SolveResult solve_linear(const Eigen::Ref<const Eigen::MatrixXd>& A,
                         const Eigen::Ref<const Eigen::VectorXd>& b,
                         const SolveOptions& options) {
  if (A.rows() != A.cols() || A.rows() == 0) {
    throw InvalidInputError("solve_linear: matrix must be square");
  }
  if (b.size() != A.rows()) {
    throw InvalidInputError("solve_linear: right-hand side length mismatch");
  }
  if (!A.allFinite() || !b.allFinite()) {
    throw InvalidInputError("solve_linear: non-finite entries");
  }

  Eigen::VectorXd x = eliminate_once(A, b, options.pivot_tolerance);
  if (options.iterative_refinement) {
    const Eigen::VectorXd r = b - A * x;
    x += eliminate_once(A, r, options.pivot_tolerance);
  }
  return SolveResult{x, (A * x - b).norm()};
}

}  // namespace simplexcert
