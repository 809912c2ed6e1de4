#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <utility>
#include <vector>

#include "simplexcert/affine.hpp"
#include "simplexcert/errors.hpp"

namespace simplexcert {

// n+1 vertices in R^d (d >= n) with a certified affine-independence margin
// cached at construction. Immutable and safely shareable across threads.
// The vertex order is the identity of the object, but every geometric
// predicate is invariant under permutation of the vertices.
class Simplex {
 public:
  const Eigen::MatrixXd& vertices() const { return vertices_; }
  Eigen::VectorXd vertex(Eigen::Index k) const { return vertices_.col(k); }
  int n() const { return static_cast<int>(vertices_.cols()) - 1; }
  int ambient_dim() const { return static_cast<int>(vertices_.rows()); }
  const CoordinateMapConstants& constants() const { return constants_; }
  double tolerance() const { return tol_; }

 private:
  friend Simplex new_simplex(Eigen::MatrixXd vertices, double tol);
  Simplex(Eigen::MatrixXd vertices, CoordinateMapConstants constants,
          double tol)
      : vertices_(std::move(vertices)), constants_(constants), tol_(tol) {}

  Eigen::MatrixXd vertices_;
  CoordinateMapConstants constants_;
  double tol_;
};

// Certifying constructor: throws CannotCertifyError when the margin of the
// vertex differences is not certifiably positive.
Simplex new_simplex(Eigen::MatrixXd vertices,
                    double tol = kPositivityTolerance);

// Subset of vertex indices (0-based, strictly increasing) selecting a face.
struct FaceSelector {
  std::vector<int> kept;
};

// Sub-simplex on the kept vertices. The margin is recertified: a subfamily
// of affinely independent points is affinely independent, but recertifying
// guards the floating-point slack.
Simplex face(const Simplex& s, const FaceSelector& selector);

// (point, coefficients) of the barycentre: all coefficients 1/(n+1).
std::pair<Eigen::VectorXd, BarycentricVector> barycentre(const Simplex& s);

// The regular n-simplex in R^n on e_1, ..., e_n and
// (1 + sqrt(n+1))/n * (1, ..., 1). All edges have length sqrt(2).
Simplex regular_simplex(int n, double tol = kPositivityTolerance);

enum class MembershipClass { CertifiedInside, CertifiedOutside, Indeterminate };

// Tri-state membership: floating-point certification can vouch for strict
// membership, vouch for non-membership, or decline (coefficients within
// the tolerance band of zero).
struct MembershipVerdict {
  MembershipClass verdict;
  BarycentricVector lambda;
  double aff_residual;
  // min coefficient when inside; the most negative coefficient or the hull
  // residual when outside.
  double witness_margin;
};

MembershipVerdict classify(const Simplex& s,
                           const Eigen::Ref<const Eigen::VectorXd>& x);

// A certified relative-interior ball: every point of B(x, radius)
// intersected with the affine hull lies in the simplex.
struct InteriorCertificate {
  double radius;  // (min coefficient) * margin_c / 2
  BarycentricVector lambda;
  double min_coeff;
};

// Requires classify(s, x) == CertifiedInside; otherwise CannotCertifyError.
InteriorCertificate relint_certificate(
    const Simplex& s, const Eigen::Ref<const Eigen::VectorXd>& x);

// Certified lower bound lambda_nu * h_nu on the distance from the point
// with convex coordinates lambda to the face opposite vertex nu, where
// h_nu is the distance from vertex nu to the affine hull of that face.
// Returns exactly 0 when lambda_nu is within tolerance of zero.
double face_distance_lb(const Simplex& s, const BarycentricVector& lambda,
                        int nu);

struct FaceProjection {
  Eigen::VectorXd point;           // where the vertex-nu ray meets the face
  BarycentricVector face_weights;  // lambda_k / (1 - lambda_nu), k != nu
  double line_parameter;           // 1 / (1 - lambda_nu)
};

// Radial projection from vertex nu through the point with coordinates
// lambda onto the opposite face. Requires tol < lambda_nu < 1 - tol.
FaceProjection face_projection(const Simplex& s,
                               const BarycentricVector& lambda, int nu);

// Certified delta such that any affine combination x with ||x - c|| <
// delta still has its nu-coefficient strictly inside (0, 1) and its radial
// face projection lands within r of the projection of c.
double projection_stability(const Simplex& s, const BarycentricVector& lambda,
                            int nu, double r);

// Finite point set covering the simplex to within epsilon. Each column of
// `coordinates` carries the convex coefficients of the matching column of
// `points`.
struct NetPointSet {
  double epsilon;
  Eigen::MatrixXd points;       // d x N
  Eigen::MatrixXd coordinates;  // (n+1) x N
};

struct NetOptions {
  std::size_t max_points = 10'000'000;
};

// Builds a deterministic epsilon-cover by the cone construction on the
// coefficient simplex (grid on [0,1] times a net of the facet, down to a
// single vertex) with spacing epsilon / (lip_forward * n), then maps the
// coefficients through evaluate. Throws ResourceLimitError with the
// required size when the cap would be exceeded.
NetPointSet epsilon_net(const Simplex& s, double epsilon,
                        const NetOptions& options = {});

// Coordinate transport: the image of x under the canonical equivalence of
// src with dst (solve coordinates in src, evaluate them in dst).
Eigen::VectorXd transport(const Simplex& src, const Simplex& dst,
                          const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace simplexcert
