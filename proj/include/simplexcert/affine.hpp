#pragma once

#include <Eigen/Dense>
#include <vector>

#include "simplexcert/errors.hpp"
#include "simplexcert/vecnorm.hpp"

namespace simplexcert {

// Coefficient vector of an affine combination: entries sum to one. The
// factory validates the sum, so a constructed value always satisfies the
// invariant (up to tolerance scaled by the coefficient magnitude).
class BarycentricVector {
 public:
  static BarycentricVector affine(Eigen::VectorXd coeffs,
                                  double tol = kPositivityTolerance);
  // (1/count, ..., 1/count)
  static BarycentricVector uniform(Eigen::Index count);
  // Indicator of vertex k: e_k.
  static BarycentricVector vertex(Eigen::Index count, Eigen::Index k);

  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  Eigen::Index size() const { return coeffs_.size(); }
  double operator[](Eigen::Index k) const { return coeffs_(k); }
  double min_coeff() const { return coeffs_.minCoeff(); }
  double sum() const { return coeffs_.sum(); }

 private:
  explicit BarycentricVector(Eigen::VectorXd coeffs)
      : coeffs_(std::move(coeffs)) {}

  Eigen::VectorXd coeffs_;
};

enum class ConvexityClass { Affine, Convex, StrictlyPositive };

// StrictlyPositive: every coefficient > tol. Convex: every coefficient
// >= -tol. Affine otherwise.
ConvexityClass convexity_class(const BarycentricVector& lambda,
                               double tol = kPositivityTolerance);

// Certified constants of the coefficient-to-point map lambda -> sum
// lambda_k a_k restricted to affine coefficient vectors.
//
// Fixing a base vertex a_b, the map factors through F: z -> sum_{k != b}
// z_k (a_k - a_b) on the remaining coefficients. lip_forward is the exact
// operator norm of F from the L1 coefficient norm (the max difference
// length). margin_c is a certified lower bound on ||F z|| over the unit L1
// sphere, obtained from the Gram eigenvalue bound; margin_c > 0 is the
// quantitative content of affine independence. The base is chosen to
// maximize the certified margin, which also makes the constants invariant
// under vertex permutation.
struct CoordinateMapConstants {
  double lip_forward;
  double margin_c;
  double lip_inverse_bound;  // 1 / margin_c
  int base_vertex;           // index of the dependent coefficient
};

CoordinateMapConstants coordinate_map_constants(
    const Eigen::Ref<const Eigen::MatrixXd>& points,
    double tol = kPositivityTolerance);

// An affine combination bundled with its base points (one per column).
struct AffineCombination {
  Eigen::MatrixXd points;
  BarycentricVector weights;
};

// An affine combination of affine combinations, expressed over the union
// of the inner base points. Base points that coincide bitwise are merged
// (first occurrence kept, coefficients added), so evaluating the result
// equals evaluating the nested combination.
AffineCombination flatten_affine(const BarycentricVector& outer,
                                 const std::vector<AffineCombination>& inners,
                                 double tol = kPositivityTolerance);

// sum_k lambda_k a_k, accumulated in a fixed pairwise (adjacent halving)
// order so results are reproducible bit-for-bit on a given platform.
Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::MatrixXd>& points,
                         const BarycentricVector& lambda);

struct BarycentricSolve {
  BarycentricVector lambda;
  double aff_residual;  // distance from the query to the affine hull
};

// Unique affine coefficients of the orthogonal projection of x onto the
// affine hull of the points, via a QR least-squares solve on the base-
// vertex differences. Off-hull queries are not an error; they are reported
// through aff_residual so callers can make membership decisions.
BarycentricSolve barycentric(const Eigen::Ref<const Eigen::MatrixXd>& points,
                             const Eigen::Ref<const Eigen::VectorXd>& x,
                             const CoordinateMapConstants& constants);

// Convenience overload that certifies the margin first (degenerate point
// sets throw CannotCertifyError).
BarycentricSolve barycentric(const Eigen::Ref<const Eigen::MatrixXd>& points,
                             const Eigen::Ref<const Eigen::VectorXd>& x,
                             double tol = kPositivityTolerance);

// Largest certified delta such that any two affine combinations x, y of
// the points with ||x - y|| < delta have total coefficient deviation
// sum_k |xi_k - eta_k| < eps. The non-base coefficients deviate by at most
// ||x - y|| / margin_c and the base coefficient by at most their sum.
double modulus_forward(const CoordinateMapConstants& constants, double eps);

// Certified delta such that coefficient deviation < delta over the
// non-base coefficients forces ||x - y|| < eps.
double modulus_inverse(const CoordinateMapConstants& constants, double eps);

// Certified lower bound (margin_c / 2) * ||lambda - mu||_1 on the distance
// between the two combinations. The factor 1/2 accounts for the dependent
// base coefficient.
double separation_lb(const CoordinateMapConstants& constants,
                     const BarycentricVector& lambda,
                     const BarycentricVector& mu);

}  // namespace simplexcert
