#pragma once

#include <Eigen/Dense>

#include "simplexcert/errors.hpp"

namespace simplexcert {

// Global default for "certified > 0": a quantity counts as positive only
// when it exceeds this tolerance times the problem scale.
inline constexpr double kPositivityTolerance = 1e-9;

enum class NormTag { L1, L2 };

// Selected norm of a finite vector. L1 = sum |v_k|, L2 = sqrt(sum v_k^2).
double norm(const Eigen::Ref<const Eigen::VectorXd>& v, NormTag tag);

// Certified lower bound on the smallest eigenvalue of the Gram matrix of
// the given vectors (one vector per column). The computed eigenvalue is
// reduced by a floating-point error envelope so the returned value is a
// true lower bound; it is clamped at zero. Requires cols <= rows.
double gram_min_eigen_lb(const Eigen::Ref<const Eigen::MatrixXd>& vectors);

struct SolveResult {
  Eigen::VectorXd solution;
  double residual_norm;  // ||A*solution - b||_2, recomputed from the inputs
};

struct SolveOptions {
  // A pivot certifies the elimination step only if its magnitude exceeds
  // pivot_tolerance times the max-abs of the row it came from.
  double pivot_tolerance = kPositivityTolerance;
  bool iterative_refinement = false;
};

// Gaussian elimination with partial pivoting. Throws CannotCertifyError
// when some pivot falls below the certification threshold; that signals
// "invertibility not certifiable", not singularity.
SolveResult solve_linear(const Eigen::Ref<const Eigen::MatrixXd>& A,
                         const Eigen::Ref<const Eigen::VectorXd>& b,
                         const SolveOptions& options = {});

}  // namespace simplexcert
