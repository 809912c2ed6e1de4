#include "simplexcert/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace simplexcert {

namespace {

double coord_scale(const Eigen::MatrixXd& vertices) {
  return std::max(1.0, vertices.cwiseAbs().maxCoeff());
}

double coord_scale(const Eigen::MatrixXd& vertices,
                   const Eigen::Ref<const Eigen::VectorXd>& x) {
  return std::max(coord_scale(vertices), x.cwiseAbs().maxCoeff());
}

void check_vertex_index(const Simplex& s, int nu, const char* where) {
  if (nu < 0 || nu > s.n()) {
    throw InvalidInputError(std::string(where) + ": vertex index out of range");
  }
}

void check_convex(const BarycentricVector& lambda, double tol,
                  const char* where) {
  if (lambda.min_coeff() < -tol) {
    throw InvalidInputError(std::string(where) +
                            ": coefficients must be convex (nonnegative)");
  }
}

}  // namespace

Simplex new_simplex(Eigen::MatrixXd vertices, double tol) {
  if (vertices.cols() < 1 || vertices.rows() < 1) {
    throw InvalidInputError("new_simplex: need at least one vertex");
  }
  if (!vertices.allFinite()) {
    throw InvalidInputError("new_simplex: non-finite vertex coordinates");
  }
  const CoordinateMapConstants constants =
      coordinate_map_constants(vertices, tol);
  return Simplex(std::move(vertices), constants, tol);
}

Simplex face(const Simplex& s, const FaceSelector& selector) {
  const int count = s.n() + 1;
  if (selector.kept.empty()) {
    throw InvalidInputError("face: selector must keep at least one vertex");
  }
  for (std::size_t i = 0; i < selector.kept.size(); ++i) {
    const int k = selector.kept[i];
    if (k < 0 || k >= count) {
      throw InvalidInputError("face: vertex index out of range");
    }
    if (i > 0 && selector.kept[i - 1] >= k) {
      throw InvalidInputError("face: indices must be strictly increasing");
    }
  }
  Eigen::MatrixXd sub(s.ambient_dim(),
                      static_cast<Eigen::Index>(selector.kept.size()));
  for (std::size_t i = 0; i < selector.kept.size(); ++i) {
    sub.col(static_cast<Eigen::Index>(i)) = s.vertices().col(selector.kept[i]);
  }
  return new_simplex(std::move(sub), s.tolerance());
}

std::pair<Eigen::VectorXd, BarycentricVector> barycentre(const Simplex& s) {
  BarycentricVector lambda = BarycentricVector::uniform(s.n() + 1);
  Eigen::VectorXd point = evaluate(s.vertices(), lambda);
  return {std::move(point), std::move(lambda)};
}

Simplex regular_simplex(int n, double tol) {
  if (n < 1) {
    throw InvalidInputError("regular_simplex: n must be >= 1");
  }
  Eigen::MatrixXd vertices = Eigen::MatrixXd::Zero(n, n + 1);
  vertices.topLeftCorner(n, n).setIdentity();
  const double apex = (1.0 + std::sqrt(static_cast<double>(n) + 1.0)) /
                      static_cast<double>(n);
  vertices.col(n).setConstant(apex);
  return new_simplex(std::move(vertices), tol);
}

MembershipVerdict classify(const Simplex& s,
                           const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != s.ambient_dim()) {
    throw InvalidInputError("classify: query dimension mismatch");
  }
  if (!x.allFinite()) {
    throw InvalidInputError("classify: non-finite query point");
  }

  BarycentricSolve solve = barycentric(s.vertices(), x, s.constants());
  const double tol = s.tolerance();
  const double scale = coord_scale(s.vertices(), x);
  const double min_coeff = solve.lambda.min_coeff();

  MembershipClass verdict;
  double witness;
  if (solve.aff_residual > tol * scale) {
    // Certifiably off the affine hull, hence outside the simplex.
    verdict = MembershipClass::CertifiedOutside;
    witness = solve.aff_residual;
  } else if (min_coeff > tol) {
    verdict = MembershipClass::CertifiedInside;
    witness = min_coeff;
  } else if (min_coeff < -tol) {
    verdict = MembershipClass::CertifiedOutside;
    witness = min_coeff;
  } else {
    // Some coefficient sits inside the tolerance band around zero:
    // neither membership nor non-membership is certified.
    verdict = MembershipClass::Indeterminate;
    witness = min_coeff;
  }
  return MembershipVerdict{verdict, std::move(solve.lambda),
                           solve.aff_residual, witness};
}

InteriorCertificate relint_certificate(
    const Simplex& s, const Eigen::Ref<const Eigen::VectorXd>& x) {
  MembershipVerdict verdict = classify(s, x);
  if (verdict.verdict != MembershipClass::CertifiedInside) {
    throw CannotCertifyError(
        "relint_certificate: point is not certified strictly inside");
  }
  const double min_coeff = verdict.lambda.min_coeff();
  // Within B(x, r) on the hull, each coefficient moves by less than
  // min_coeff (forward modulus with eps = min_coeff), so none can reach 0.
  const double radius = 0.5 * min_coeff * s.constants().margin_c;
  return InteriorCertificate{radius, std::move(verdict.lambda), min_coeff};
}

double face_distance_lb(const Simplex& s, const BarycentricVector& lambda,
                        int nu) {
  check_vertex_index(s, nu, "face_distance_lb");
  if (lambda.size() != s.n() + 1) {
    throw InvalidInputError("face_distance_lb: coefficient length mismatch");
  }
  check_convex(lambda, s.tolerance(), "face_distance_lb");
  if (lambda[nu] <= s.tolerance()) {
    return 0.0;
  }

  FaceSelector opposite;
  for (int k = 0; k <= s.n(); ++k) {
    if (k != nu) opposite.kept.push_back(k);
  }
  const Simplex f = face(s, opposite);
  // h_nu: distance from vertex nu to the affine hull of the opposite face.
  const double h =
      barycentric(f.vertices(), s.vertex(nu), f.constants()).aff_residual;
  return lambda[nu] * h;
}

FaceProjection face_projection(const Simplex& s,
                               const BarycentricVector& lambda, int nu) {
  check_vertex_index(s, nu, "face_projection");
  if (lambda.size() != s.n() + 1) {
    throw InvalidInputError("face_projection: coefficient length mismatch");
  }
  check_convex(lambda, s.tolerance(), "face_projection");
  const double tol = s.tolerance();
  const double pivot = lambda[nu];
  if (!(pivot > tol) || !(pivot < 1.0 - tol)) {
    throw CannotCertifyError(
        "face_projection: vertex coefficient must lie certifiably strictly "
        "between 0 and 1");
  }

  const Eigen::Index count = lambda.size();
  Eigen::VectorXd weights(count - 1);
  Eigen::MatrixXd face_points(s.ambient_dim(), count - 1);
  Eigen::Index j = 0;
  for (Eigen::Index k = 0; k < count; ++k) {
    if (k == nu) continue;
    weights(j) = lambda[k] / (1.0 - pivot);
    face_points.col(j) = s.vertices().col(k);
    ++j;
  }
  BarycentricVector face_weights =
      BarycentricVector::affine(std::move(weights));
  Eigen::VectorXd point = evaluate(face_points, face_weights);
  return FaceProjection{std::move(point), std::move(face_weights),
                        1.0 / (1.0 - pivot)};
}

double projection_stability(const Simplex& s, const BarycentricVector& lambda,
                            int nu, double r) {
  if (!(r > 0.0)) {
    throw InvalidInputError("projection_stability: r must be positive");
  }
  check_vertex_index(s, nu, "projection_stability");
  check_convex(lambda, s.tolerance(), "projection_stability");
  const double tol = s.tolerance();
  const double pivot = lambda[nu];
  if (!(pivot > tol) || !(pivot < 1.0 - tol)) {
    throw CannotCertifyError(
        "projection_stability: vertex coefficient must lie certifiably "
        "strictly between 0 and 1");
  }

  const double max_vertex_norm = s.vertices().colwise().norm().maxCoeff();
  const double slack = (1.0 - pivot) * (1.0 - pivot) * r /
                       (2.0 * std::max(max_vertex_norm,
                                       std::numeric_limits<double>::min()));
  const double eps = 0.5 * std::min({pivot, 1.0 - pivot, slack});
  return modulus_forward(s.constants(), eps);
}

namespace {

// Net points of the coefficient m-simplex on coordinate slots 0..m, built
// from the apex slot m and a grid on the cone parameter. Deterministic
// order: apex first, then t ascending with the facet net nested inside.
void cone_net(int m, int grid, std::vector<Eigen::VectorXd>* out) {
  if (m == 0) {
    out->push_back(Eigen::VectorXd::Ones(1));
    return;
  }
  std::vector<Eigen::VectorXd> facet;
  cone_net(m - 1, grid, &facet);

  Eigen::VectorXd apex = Eigen::VectorXd::Zero(m + 1);
  apex(m) = 1.0;
  out->push_back(std::move(apex));
  for (int i = 1; i <= grid; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(grid);
    for (const Eigen::VectorXd& v : facet) {
      Eigen::VectorXd w(m + 1);
      w.head(m) = t * v;
      w(m) = 1.0 - t;
      out->push_back(std::move(w));
    }
  }
}

}  // namespace

NetPointSet epsilon_net(const Simplex& s, double epsilon,
                        const NetOptions& options) {
  if (!(epsilon > 0.0)) {
    throw InvalidInputError("epsilon_net: epsilon must be positive");
  }

  const auto [centre, centre_lambda] = barycentre(s);
  const double centre_radius =
      (s.vertices().colwise() - centre).colwise().norm().maxCoeff();
  if (epsilon >= centre_radius) {
    // The barycentre alone covers: every simplex point is a convex mix of
    // vertices, all within centre_radius of it.
    NetPointSet net;
    net.epsilon = epsilon;
    net.points = centre;
    net.coordinates = centre_lambda.coeffs();
    return net;
  }

  const int n = s.n();
  const double lip = s.constants().lip_forward;
  // A coefficient-space cover of L1 radius epsilon / lip maps to an
  // epsilon cover in the ambient norm; each cone level spends 1/n of it.
  const int grid = static_cast<int>(
      std::ceil(static_cast<double>(n) * lip / epsilon));

  double predicted = 1.0;
  for (int level = 1; level <= n; ++level) {
    predicted = predicted * grid + 1.0;
    if (predicted > static_cast<double>(options.max_points)) {
      const double reportable =
          std::min(predicted, 9.2e18);  // keep the count castable
      throw ResourceLimitError(
          "epsilon_net: requested epsilon needs more points than the "
          "configured cap",
          static_cast<std::size_t>(reportable));
    }
  }

  std::vector<Eigen::VectorXd> coords;
  coords.reserve(static_cast<std::size_t>(predicted));
  cone_net(n, grid, &coords);

  NetPointSet net;
  net.epsilon = epsilon;
  net.coordinates.resize(n + 1, static_cast<Eigen::Index>(coords.size()));
  net.points.resize(s.ambient_dim(), static_cast<Eigen::Index>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    net.coordinates.col(col) = coords[i];
    net.points.col(col) = evaluate(
        s.vertices(), BarycentricVector::affine(std::move(coords[i])));
  }
  return net;
}

Eigen::VectorXd transport(const Simplex& src, const Simplex& dst,
                          const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (src.n() != dst.n()) {
    throw InvalidInputError("transport: simplex dimensions differ");
  }
  if (x.size() != src.ambient_dim()) {
    throw InvalidInputError("transport: query dimension mismatch");
  }
  const BarycentricSolve solve = barycentric(src.vertices(), x,
                                             src.constants());
  return evaluate(dst.vertices(), solve.lambda);
}

}  // namespace simplexcert
