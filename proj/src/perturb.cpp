#include "simplexcert/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "simplexcert/vecnorm.hpp"

namespace simplexcert {

MatrixNorms matrix_norms(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw InvalidInputError("matrix_norms: empty matrix");
  }
  if (!a.allFinite()) {
    throw InvalidInputError("matrix_norms: non-finite entries");
  }
  return MatrixNorms{a.cwiseAbs().maxCoeff(),
                     a.cwiseAbs().colwise().sum().maxCoeff()};
}

LinearPerturbation linear_perturbation_delta(
    const Eigen::Ref<const Eigen::MatrixXd>& vectors, double tol) {
  const Eigen::Index n = vectors.cols();
  if (n < 1) {
    throw InvalidInputError("linear_perturbation_delta: need vectors");
  }
  const double margin =
      std::sqrt(gram_min_eigen_lb(vectors) / static_cast<double>(n));
  const double scale = vectors.colwise().norm().maxCoeff();
  if (!(margin > tol * scale) || !(margin > 0.0)) {
    throw CannotCertifyError(
        "linear_perturbation_delta: independence margin not certifiable");
  }
  // Each perturbed vector can eat at most delta of the margin per unit
  // coefficient, leaving 2n*delta of the original (2n+1)*delta.
  const double delta = margin / (2.0 * static_cast<double>(n) + 1.0);
  return LinearPerturbation{delta, 2.0 * static_cast<double>(n) * delta,
                            margin};
}

double affine_perturbation_delta(
    const Eigen::Ref<const Eigen::MatrixXd>& points, double tol) {
  const Eigen::Index count = points.cols();
  if (count < 1) {
    throw InvalidInputError("affine_perturbation_delta: need points");
  }
  if (!points.allFinite()) {
    throw InvalidInputError("affine_perturbation_delta: non-finite points");
  }
  if (count == 1) {
    // A single point stays affinely independent under any perturbation.
    return std::numeric_limits<double>::infinity();
  }
  const Eigen::Index n = count - 1;
  Eigen::MatrixXd diff(points.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    diff.col(k) = points.col(k) - points.col(n);
  }
  // Moving each point by < delta moves each difference by < 2*delta.
  return 0.5 * linear_perturbation_delta(diff, tol).delta;
}

double inversion_delta(int n, double eps) {
  if (n < 1) {
    throw InvalidInputError("inversion_delta: n must be >= 1");
  }
  if (!(eps > 0.0)) {
    throw InvalidInputError("inversion_delta: eps must be positive");
  }

  // Feasible t < 1 must satisfy both t/(1-t) < eps (Neumann series bound
  // on the inverse) and n*t*(1+t)^(n-1) < 1/2 (determinant perturbation
  // bound). Both sides grow with t, so the feasible set is an interval.
  const double t_neumann = eps / (1.0 + eps);

  const auto det_budget = [n](double t) {
    return static_cast<double>(n) * t *
           std::pow(1.0 + t, static_cast<double>(n) - 1.0);
  };
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (det_budget(mid) < 0.5 ? lo : hi) = mid;
  }
  const double t_det = lo;

  double t = std::min(t_neumann, t_det);
  t -= std::min(1e-6, 0.5 * t);  // keep both inequalities strict
  return t / static_cast<double>(n);
}

PerturbationCertificate vertex_perturbation_delta(
    const Simplex& s, const Eigen::Ref<const Eigen::VectorXd>& c) {
  const MembershipVerdict verdict = classify(s, c);
  if (verdict.verdict != MembershipClass::CertifiedInside) {
    throw CannotCertifyError(
        "vertex_perturbation_delta: point is not certified strictly inside");
  }
  const double m = verdict.lambda.min_coeff();
  const int size = s.n() + 1;  // coordinate matrices are (n+1) x (n+1)
  const double kappa = static_cast<double>(size);

  const double delta_affine =
      affine_perturbation_delta(s.vertices(), s.tolerance());
  const double delta1 = std::min(delta_affine, 0.5 - 1e-12);
  const double delta_inversion = inversion_delta(size, m / (2.0 * kappa));
  const double delta2 = std::min(delta1, delta_inversion);
  // Vertex displacements below delta_modulus keep every coordinate of
  // every perturbed vertex within delta2 of the identity pattern.
  const double delta_modulus = modulus_forward(s.constants(), delta2);
  const double delta = std::min(delta2, delta_modulus);

  PerturbationCertificate cert;
  cert.delta = delta;
  cert.chain = {{"margin_c", s.constants().margin_c},
                {"min_coeff_m", m},
                {"kappa", kappa},
                {"delta_affine", delta_affine},
                {"delta1", delta1},
                {"delta_inversion", delta_inversion},
                {"delta2", delta2},
                {"delta_modulus", delta_modulus},
                {"delta", delta}};
  return cert;
}

BarycentricVector recoordinate(
    const Simplex& s, const Eigen::Ref<const Eigen::MatrixXd>& new_points,
    const BarycentricVector& lambda) {
  const int count = s.n() + 1;
  if (new_points.cols() != count || new_points.rows() != s.ambient_dim()) {
    throw InvalidInputError("recoordinate: need n+1 points of dimension d");
  }
  if (!new_points.allFinite()) {
    throw InvalidInputError("recoordinate: non-finite points");
  }
  if (lambda.size() != count) {
    throw InvalidInputError("recoordinate: coefficient length mismatch");
  }

  const double scale =
      std::max({1.0, s.vertices().cwiseAbs().maxCoeff(),
                new_points.cwiseAbs().maxCoeff()});

  // Column k holds the original-vertex coordinates of new point k.
  Eigen::MatrixXd system(count, count);
  for (int k = 0; k < count; ++k) {
    BarycentricSolve solve =
        barycentric(s.vertices(), new_points.col(k), s.constants());
    if (solve.aff_residual > s.tolerance() * scale) {
      throw InvalidInputError(
          "recoordinate: a new point lies off the affine hull of the "
          "simplex");
    }
    system.col(k) = solve.lambda.coeffs();
  }

  SolveResult result;
  try {
    result = solve_linear(system, lambda.coeffs(),
                          SolveOptions{s.tolerance(), false});
  } catch (const CannotCertifyError&) {
    throw CannotCertifyError(
        "recoordinate: coordinate system not certifiably invertible");
  }

  BarycentricVector gamma = [&] {
    try {
      return BarycentricVector::affine(result.solution);
    } catch (const InvalidInputError&) {
      throw CannotCertifyError(
          "recoordinate: solved coefficients do not sum to one");
    }
  }();
  const Eigen::VectorXd reproduced = evaluate(new_points, gamma);
  const Eigen::VectorXd target = evaluate(s.vertices(), lambda);
  if ((reproduced - target).norm() > 1e-8 * scale) {
    throw CannotCertifyError(
        "recoordinate: solved coefficients fail to reproduce the point");
  }
  return gamma;
}

}  // namespace simplexcert
