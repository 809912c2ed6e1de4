#include "simplexcert/affine.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace simplexcert {

BarycentricVector BarycentricVector::affine(Eigen::VectorXd coeffs,
                                            double tol) {
  if (coeffs.size() == 0) {
    throw InvalidInputError("BarycentricVector: empty coefficient vector");
  }
  if (!coeffs.allFinite()) {
    throw InvalidInputError("BarycentricVector: non-finite coefficients");
  }
  const double slack = tol * std::max(1.0, coeffs.lpNorm<1>());
  if (std::abs(coeffs.sum() - 1.0) > slack) {
    throw InvalidInputError(
        "BarycentricVector: coefficients do not sum to one");
  }
  return BarycentricVector(std::move(coeffs));
}

BarycentricVector BarycentricVector::uniform(Eigen::Index count) {
  if (count < 1) {
    throw InvalidInputError("BarycentricVector::uniform: count must be >= 1");
  }
  return BarycentricVector(
      Eigen::VectorXd::Constant(count, 1.0 / static_cast<double>(count)));
}

BarycentricVector BarycentricVector::vertex(Eigen::Index count,
                                            Eigen::Index k) {
  if (count < 1 || k < 0 || k >= count) {
    throw InvalidInputError("BarycentricVector::vertex: index out of range");
  }
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(count);
  coeffs(k) = 1.0;
  return BarycentricVector(std::move(coeffs));
}

ConvexityClass convexity_class(const BarycentricVector& lambda, double tol) {
  const double lo = lambda.min_coeff();
  if (lo > tol) return ConvexityClass::StrictlyPositive;
  if (lo >= -tol) return ConvexityClass::Convex;
  return ConvexityClass::Affine;
}

namespace {

// Differences a_k - a_base for k != base, columns in ascending k.
Eigen::MatrixXd base_differences(const Eigen::Ref<const Eigen::MatrixXd>& pts,
                                 Eigen::Index base) {
  const Eigen::Index n = pts.cols() - 1;
  Eigen::MatrixXd diff(pts.rows(), n);
  Eigen::Index j = 0;
  for (Eigen::Index k = 0; k < pts.cols(); ++k) {
    if (k == base) continue;
    diff.col(j++) = pts.col(k) - pts.col(base);
  }
  return diff;
}

}  // namespace

CoordinateMapConstants coordinate_map_constants(
    const Eigen::Ref<const Eigen::MatrixXd>& points, double tol) {
  const Eigen::Index count = points.cols();
  if (count < 1 || points.rows() < 1) {
    throw InvalidInputError("coordinate_map_constants: need points");
  }
  if (!points.allFinite()) {
    throw InvalidInputError("coordinate_map_constants: non-finite points");
  }
  const Eigen::Index n = count - 1;
  if (n == 0) {
    // A single point: the coefficient space is {1}. The margin constraint
    // is vacuous, which we encode as an infinite margin.
    return CoordinateMapConstants{
        0.0, std::numeric_limits<double>::infinity(), 0.0, 0};
  }
  if (points.rows() < n) {
    throw InvalidInputError(
        "coordinate_map_constants: ambient dimension smaller than the "
        "simplex dimension");
  }

  // ||Fz||^2 = z^T G z >= lambda_min(G) ||z||_2^2 >= (lambda_min / n)
  // ||z||_1^2, so sqrt(lb / n) certifies the margin for one base choice.
  // Every base gives a valid certificate; keep the strongest one.
  double best_margin = -1.0;
  double best_lip = 0.0;
  int best_base = 0;
  for (Eigen::Index base = 0; base < count; ++base) {
    const Eigen::MatrixXd diff = base_differences(points, base);
    const double margin =
        std::sqrt(gram_min_eigen_lb(diff) / static_cast<double>(n));
    const double lip = diff.colwise().norm().maxCoeff();
    if (margin > best_margin ||
        (margin == best_margin && lip < best_lip)) {
      best_margin = margin;
      best_lip = lip;
      best_base = static_cast<int>(base);
    }
  }

  if (!(best_margin > tol * best_lip) || !(best_margin > 0.0)) {
    throw CannotCertifyError(
        "coordinate_map_constants: affine-independence margin not "
        "certifiable at the working tolerance");
  }
  return CoordinateMapConstants{best_lip, best_margin, 1.0 / best_margin,
                                best_base};
}

AffineCombination flatten_affine(const BarycentricVector& outer,
                                 const std::vector<AffineCombination>& inners,
                                 double tol) {
  if (inners.empty() ||
      outer.size() != static_cast<Eigen::Index>(inners.size())) {
    throw InvalidInputError(
        "flatten_affine: outer coefficient count must match the number of "
        "inner combinations");
  }
  Eigen::Index total = 0;
  const Eigen::Index dim = inners.front().points.rows();
  for (const AffineCombination& inner : inners) {
    if (inner.points.rows() != dim) {
      throw InvalidInputError("flatten_affine: mixed ambient dimensions");
    }
    if (inner.points.cols() != inner.weights.size()) {
      throw InvalidInputError(
          "flatten_affine: inner weight/point count mismatch");
    }
    total += inner.points.cols();
  }

  Eigen::MatrixXd merged(dim, total);
  Eigen::VectorXd flat = Eigen::VectorXd::Zero(total);
  Eigen::Index used = 0;
  for (Eigen::Index j = 0; j < outer.size(); ++j) {
    for (Eigen::Index k = 0; k < inners[j].points.cols(); ++k) {
      const double contribution = outer[j] * inners[j].weights[k];
      Eigen::Index slot = used;
      for (Eigen::Index i = 0; i < used; ++i) {
        if (merged.col(i) == inners[j].points.col(k)) {
          slot = i;
          break;
        }
      }
      if (slot == used) {
        merged.col(used++) = inners[j].points.col(k);
      }
      flat(slot) += contribution;
    }
  }
  // The flattened sum is 1 up to rounding amplified by the outer weights.
  BarycentricVector weights = BarycentricVector::affine(
      flat.head(used), tol * (1.0 + outer.coeffs().lpNorm<1>()));
  return AffineCombination{merged.leftCols(used), std::move(weights)};
}

Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::MatrixXd>& points,
                         const BarycentricVector& lambda) {
  if (points.cols() != lambda.size() || points.cols() == 0) {
    throw InvalidInputError("evaluate: point/coefficient count mismatch");
  }
  if (!points.allFinite()) {
    throw InvalidInputError("evaluate: non-finite points");
  }

  std::vector<Eigen::VectorXd> terms;
  terms.reserve(static_cast<std::size_t>(points.cols()));
  for (Eigen::Index k = 0; k < points.cols(); ++k) {
    terms.push_back(lambda[k] * points.col(k));
  }
  // Adjacent-pair halving; the odd tail carries over unchanged.
  std::size_t count = terms.size();
  while (count > 1) {
    std::size_t next = 0;
    for (std::size_t i = 0; i + 1 < count; i += 2) {
      terms[next++] = terms[i] + terms[i + 1];
    }
    if (count % 2 == 1) {
      terms[next++] = terms[count - 1];
    }
    count = next;
  }
  return terms.front();
}

BarycentricSolve barycentric(const Eigen::Ref<const Eigen::MatrixXd>& points,
                             const Eigen::Ref<const Eigen::VectorXd>& x,
                             const CoordinateMapConstants& constants) {
  if (x.size() != points.rows()) {
    throw InvalidInputError("barycentric: query dimension mismatch");
  }
  if (!x.allFinite() || !points.allFinite()) {
    throw InvalidInputError("barycentric: non-finite input");
  }
  const Eigen::Index count = points.cols();
  const Eigen::Index base = constants.base_vertex;
  if (base < 0 || base >= count) {
    throw InvalidInputError("barycentric: base vertex out of range");
  }

  if (count == 1) {
    return BarycentricSolve{BarycentricVector::uniform(1),
                            (x - points.col(0)).norm()};
  }

  const Eigen::MatrixXd diff = base_differences(points, base);
  const Eigen::VectorXd rhs = x - points.col(base);
  const Eigen::VectorXd y = diff.colPivHouseholderQr().solve(rhs);
  const double residual = (diff * y - rhs).norm();

  Eigen::VectorXd coeffs(count);
  Eigen::Index j = 0;
  for (Eigen::Index k = 0; k < count; ++k) {
    if (k == base) continue;
    coeffs(k) = y(j++);
  }
  coeffs(base) = 1.0 - y.sum();
  return BarycentricSolve{BarycentricVector::affine(std::move(coeffs)),
                          residual};
}

BarycentricSolve barycentric(const Eigen::Ref<const Eigen::MatrixXd>& points,
                             const Eigen::Ref<const Eigen::VectorXd>& x,
                             double tol) {
  return barycentric(points, x, coordinate_map_constants(points, tol));
}

double modulus_forward(const CoordinateMapConstants& constants, double eps) {
  if (!(eps > 0.0)) {
    throw InvalidInputError("modulus_forward: eps must be positive");
  }
  return 0.5 * eps * constants.margin_c;
}

double modulus_inverse(const CoordinateMapConstants& constants, double eps) {
  if (!(eps > 0.0)) {
    throw InvalidInputError("modulus_inverse: eps must be positive");
  }
  return eps / constants.lip_forward;
}

double separation_lb(const CoordinateMapConstants& constants,
                     const BarycentricVector& lambda,
                     const BarycentricVector& mu) {
  if (lambda.size() != mu.size()) {
    throw InvalidInputError("separation_lb: coefficient length mismatch");
  }
  const double deviation = (lambda.coeffs() - mu.coeffs()).lpNorm<1>();
  if (deviation == 0.0) return 0.0;
  return 0.5 * constants.margin_c * deviation;
}

}  // namespace simplexcert
