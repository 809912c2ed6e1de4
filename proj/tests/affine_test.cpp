#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "simplexcert/affine.hpp"
#include "simplexcert/oracle.hpp"
#include "support.hpp"

using namespace simplexcert;

namespace {

Eigen::MatrixXd right_triangle() {
  Eigen::MatrixXd pts(2, 3);
  pts << 0.0, 1.0, 0.0, 0.0, 0.0, 1.0;
  return pts;
}

}  // namespace

TEST_CASE("BarycentricVector enforces the sum-to-one invariant") {
  CHECK_THROWS_AS(BarycentricVector::affine(Eigen::Vector2d(0.5, 0.6)),
                  InvalidInputError);
  const BarycentricVector ok =
      BarycentricVector::affine(Eigen::Vector2d(0.25, 0.75));
  CHECK(ok.sum() == doctest::Approx(1.0));
  CHECK(BarycentricVector::uniform(4).min_coeff() == doctest::Approx(0.25));
  CHECK(BarycentricVector::vertex(3, 1)[1] == 1.0);
}

TEST_CASE("convexity_class splits affine, convex, strictly positive") {
  const auto affine3 =
      BarycentricVector::affine(Eigen::Vector3d(1.5, -0.5, 0.0));
  CHECK(convexity_class(affine3) == ConvexityClass::Affine);
  const auto convex3 =
      BarycentricVector::affine(Eigen::Vector3d(1.0, 0.0, 0.0));
  CHECK(convexity_class(convex3) == ConvexityClass::Convex);
  const auto strict3 =
      BarycentricVector::affine(Eigen::Vector3d(0.2, 0.3, 0.5));
  CHECK(convexity_class(strict3) == ConvexityClass::StrictlyPositive);
}

TEST_CASE("flatten_affine merges nested combinations over the point union") {
  std::mt19937_64 rng(20240611);
  const Eigen::Vector2d p(0.3, -1.2);
  const Eigen::Vector2d q(2.0, 0.7);
  Eigen::MatrixXd pq(2, 2);
  pq << p, q;

  SUBCASE("identity wrapping") {
    const auto flat = flatten_affine(
        BarycentricVector::uniform(1),
        {{pq, BarycentricVector::affine(Eigen::Vector2d(0.5, 0.5))}});
    CHECK(flat.points.cols() == 2);
    CHECK(flat.weights[0] == doctest::Approx(0.5));
    CHECK(flat.weights[1] == doctest::Approx(0.5));
  }
  SUBCASE("shared base points collapse") {
    const auto flat = flatten_affine(
        BarycentricVector::affine(Eigen::Vector2d(0.5, 0.5)),
        {{pq, BarycentricVector::vertex(2, 0)},
         {pq, BarycentricVector::vertex(2, 1)}});
    REQUIRE(flat.points.cols() == 2);
    CHECK(flat.points.col(0) == p);
    CHECK(flat.points.col(1) == q);
    CHECK(flat.weights[0] == doctest::Approx(0.5));
    CHECK(flat.weights[1] == doctest::Approx(0.5));
  }
  SUBCASE("signed outer weights") {
    const auto flat = flatten_affine(
        BarycentricVector::affine(Eigen::Vector2d(2.0, -1.0)),
        {{pq, BarycentricVector::affine(Eigen::Vector2d(0.5, 0.5))},
         {pq, BarycentricVector::vertex(2, 0)}});
    REQUIRE(flat.points.cols() == 2);
    CHECK(flat.weights[0] == doctest::Approx(0.0));
    CHECK(flat.weights[1] == doctest::Approx(1.0));
  }
  SUBCASE("nested and flattened evaluations agree on random points") {
    for (int trial = 0; trial < 200; ++trial) {
      Eigen::MatrixXd base1 = testsupport::uniform_matrix(rng, 3, 2, -2, 2);
      Eigen::MatrixXd base2 = testsupport::uniform_matrix(rng, 3, 3, -2, 2);
      const auto w1 = testsupport::random_affine(rng, 2);
      const auto w2 = testsupport::random_affine(rng, 3);
      const auto outer = testsupport::random_affine(rng, 2);
      const auto flat = flatten_affine(outer, {{base1, w1}, {base2, w2}});
      CHECK(std::abs(flat.weights.sum() - 1.0) < 1e-9);

      const Eigen::VectorXd nested = outer[0] * evaluate(base1, w1) +
                                     outer[1] * evaluate(base2, w2);
      const Eigen::VectorXd direct = evaluate(flat.points, flat.weights);
      CHECK((nested - direct).norm() < 1e-9 * (1.0 + nested.norm()));
    }
  }
  SUBCASE("mismatched outer length") {
    CHECK_THROWS_AS(
        flatten_affine(BarycentricVector::uniform(2),
                       {{pq, BarycentricVector::uniform(2)}}),
        InvalidInputError);
  }
}

TEST_CASE("evaluate: exact vertex extraction and midpoints") {
  const Eigen::MatrixXd tri = right_triangle();
  CHECK(evaluate(tri, BarycentricVector::vertex(3, 0)) ==
        Eigen::Vector2d(0.0, 0.0));

  const Eigen::Matrix2d basis = Eigen::Matrix2d::Identity();
  const Eigen::VectorXd mid =
      evaluate(basis, BarycentricVector::affine(Eigen::Vector2d(0.5, 0.5)));
  CHECK(mid == Eigen::Vector2d(0.5, 0.5));

  CHECK_THROWS_AS(evaluate(tri, BarycentricVector::uniform(2)),
                  InvalidInputError);
}

TEST_CASE("barycentric: coordinates and hull residuals") {
  SUBCASE("standard simplex coordinates") {
    const auto solve =
        barycentric(Eigen::Matrix2d::Identity(), Eigen::Vector2d(0.3, 0.7));
    CHECK(solve.lambda[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(solve.lambda[1] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(solve.aff_residual < 1e-14);
  }
  SUBCASE("barycentre symmetry") {
    const auto solve =
        barycentric(right_triangle(), Eigen::Vector2d(1.0 / 3, 1.0 / 3));
    for (int k = 0; k < 3; ++k) {
      CHECK(solve.lambda[k] == doctest::Approx(1.0 / 3).epsilon(1e-12));
    }
    CHECK(solve.aff_residual < 1e-14);
  }
  SUBCASE("off-hull query reports its distance") {
    Eigen::MatrixXd segment(3, 2);
    segment << 1.0, 0.0, 0.0, 1.0, 0.0, 0.0;
    const auto solve = barycentric(segment, Eigen::Vector3d(0.5, 0.5, 1.0));
    CHECK(solve.lambda[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(solve.lambda[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(solve.aff_residual == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("degenerate points cannot be certified") {
    Eigen::MatrixXd collinear(2, 3);
    collinear << 0.0, 1.0, 2.0, 0.0, 0.0, 0.0;
    CHECK_THROWS_AS(barycentric(collinear, Eigen::Vector2d(0.5, 0.5)),
                    CannotCertifyError);
  }
}

TEST_CASE("round trip: coordinates of an evaluated combination") {
  std::mt19937_64 rng(20240612);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = testsupport::random_simplex_up_to(rng, 6, 10);
    for (int rep = 0; rep < 10; ++rep) {
      const auto lambda = testsupport::random_affine(rng, s.n() + 1);
      const Eigen::VectorXd x = evaluate(s.vertices(), lambda);
      const auto solve = barycentric(s.vertices(), x, s.constants());
      CHECK((solve.lambda.coeffs() - lambda.coeffs()).lpNorm<1>() < 1e-8);
    }
  }
}

TEST_CASE("random affine mixes of convex mixes stay on the hull") {
  std::mt19937_64 rng(20240613);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = testsupport::random_simplex_up_to(rng, 5, 8);
    const Eigen::Index count = s.n() + 1;

    // Convex combinations of the vertex family...
    const int inner_count = 3;
    Eigen::MatrixXd inner_points(s.ambient_dim(), inner_count);
    for (int j = 0; j < inner_count; ++j) {
      const Eigen::VectorXd mix =
          simplexcert::oracle::dirichlet_uniform(rng, count);
      inner_points.col(j) =
          evaluate(s.vertices(), BarycentricVector::affine(mix));
    }
    // ... recombined with affine (possibly negative) weights.
    const auto outer = testsupport::random_affine(rng, inner_count);
    const Eigen::VectorXd x = evaluate(inner_points, outer);
    const auto solve = barycentric(s.vertices(), x, s.constants());
    CHECK(solve.aff_residual < 1e-9);
  }
}

TEST_CASE("difference identity behind the coordinate map") {
  std::mt19937_64 rng(20240614);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = testsupport::random_simplex_up_to(rng, 6, 9);
    const Eigen::Index count = s.n() + 1;
    const auto lambda = testsupport::random_affine(rng, count);
    const auto mu = testsupport::random_affine(rng, count);

    const Eigen::VectorXd direct = evaluate(s.vertices(), lambda) -
                                   evaluate(s.vertices(), mu);
    Eigen::VectorXd via_differences = Eigen::VectorXd::Zero(s.ambient_dim());
    for (Eigen::Index k = 0; k + 1 < count; ++k) {
      via_differences += (lambda[k] - mu[k]) *
                         (s.vertices().col(k) - s.vertices().col(count - 1));
    }
    const double scale =
        1.0 + lambda.coeffs().lpNorm<1>() + mu.coeffs().lpNorm<1>();
    CHECK((direct - via_differences).norm() < 1e-9 * scale);
  }
}

TEST_CASE("coordinate_map_constants: certified margins and Lipschitz bounds") {
  SUBCASE("two standard basis vectors") {
    const auto c = coordinate_map_constants(Eigen::Matrix2d::Identity());
    CHECK(c.lip_forward == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(c.margin_c <= std::sqrt(2.0));
    CHECK(c.margin_c >= std::sqrt(2.0) - 1e-6);
    CHECK(c.lip_inverse_bound * c.margin_c == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("right triangle") {
    const auto c = coordinate_map_constants(right_triangle());
    CHECK(c.lip_forward == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.margin_c <= 1.0 / std::sqrt(2.0));
    CHECK(c.margin_c >= (1.0 / std::sqrt(2.0)) * (1.0 - 1e-6));
  }
  SUBCASE("rotation invariance") {
    std::mt19937_64 rng(20240615);
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::MatrixXd raw = testsupport::uniform_matrix(rng, 2, 2, -1, 1);
      Eigen::Matrix2d q =
          Eigen::HouseholderQR<Eigen::Matrix2d>(raw).householderQ();
      const auto base = coordinate_map_constants(right_triangle());
      const auto rotated = coordinate_map_constants(q * right_triangle());
      CHECK(rotated.lip_forward ==
            doctest::Approx(base.lip_forward).epsilon(1e-9));
      CHECK(rotated.margin_c == doctest::Approx(base.margin_c).epsilon(1e-9));
    }
  }
  SUBCASE("certified margin never exceeds the searched minimum") {
    std::mt19937_64 rng(20240616);
    for (int trial = 0; trial < 25; ++trial) {
      const auto s = testsupport::random_simplex_up_to(rng, 3, 5);
      const auto c = s.constants();
      const Eigen::Index count = s.n() + 1;
      Eigen::MatrixXd diff(s.ambient_dim(), count - 1);
      Eigen::Index j = 0;
      for (Eigen::Index k = 0; k < count; ++k) {
        if (k == c.base_vertex) continue;
        diff.col(j++) = s.vertices().col(k) - s.vertices().col(c.base_vertex);
      }
      oracle::OracleConfig cfg;
      cfg.grid_resolution = 48;
      const auto probe = oracle::margin_oracle(diff, cfg);
      CHECK(c.margin_c <= probe.value + 1e-12);
    }
  }
}

TEST_CASE("modulus formulas and their guarantees") {
  const CoordinateMapConstants unit{2.0, 1.0, 1.0, 0};
  CHECK(modulus_forward(unit, 0.2) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(modulus_forward(unit, 0.4) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(modulus_inverse(unit, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(modulus_inverse(unit, 0.25) < modulus_inverse(unit, 0.5));
  CHECK_THROWS_AS(modulus_forward(unit, 0.0), InvalidInputError);
  CHECK_THROWS_AS(modulus_inverse(unit, -1.0), InvalidInputError);

  // Monte-Carlo check of both guarantees on the standard 2-simplex.
  Eigen::MatrixXd delta2 = Eigen::MatrixXd::Identity(3, 3);
  const auto s = new_simplex(delta2);
  const auto& constants = s.constants();
  std::mt19937_64 rng(20240617);
  const double eps = 0.15;

  const double delta_fwd = modulus_forward(constants, eps);
  const double delta_inv = modulus_inverse(constants, eps);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto lambda = testsupport::random_affine(rng, 3);
    const Eigen::VectorXd x = evaluate(s.vertices(), lambda);

    // Forward: nearby hull points have nearby coefficients.
    const Eigen::VectorXd dir = testsupport::random_span_direction(rng, s);
    const double dist = delta_fwd * testsupport::uniform(rng, 0.0, 0.999);
    const Eigen::VectorXd y = x + dist * dir;
    const auto sy = barycentric(s.vertices(), y, constants);
    const auto sx = barycentric(s.vertices(), x, constants);
    CHECK((sx.lambda.coeffs() - sy.lambda.coeffs()).lpNorm<1>() < eps);

    // Inverse: small non-base coefficient deviation keeps points close.
    // Scale random non-base deviations to an L1 budget below delta.
    const double budget = delta_inv * testsupport::uniform(rng, 0.0, 0.999);
    Eigen::VectorXd bump = Eigen::VectorXd::Zero(3);
    double raw_l1 = 0.0;
    for (Eigen::Index k = 0; k < 3; ++k) {
      if (k == constants.base_vertex) continue;
      bump(k) = testsupport::uniform(rng, -1.0, 1.0);
      raw_l1 += std::abs(bump(k));
    }
    if (raw_l1 > 0.0) bump *= budget / raw_l1;
    bump(constants.base_vertex) = -bump.sum();
    const auto mu = BarycentricVector::affine(lambda.coeffs() + bump, 1e-6);
    CHECK((evaluate(s.vertices(), lambda) - evaluate(s.vertices(), mu)).norm() <
          eps);
  }
}

TEST_CASE("separation_lb: certified distance floor") {
  Eigen::MatrixXd delta2 = Eigen::MatrixXd::Identity(3, 3);
  const auto constants = coordinate_map_constants(delta2);

  const auto lambda = BarycentricVector::vertex(3, 0);
  const auto mu = BarycentricVector::vertex(3, 1);
  CHECK(separation_lb(constants, lambda, lambda) == 0.0);
  const double bound = separation_lb(constants, lambda, mu);
  CHECK(bound > 0.0);
  CHECK(bound <= std::sqrt(2.0));

  std::mt19937_64 rng(20240618);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = testsupport::random_simplex_up_to(rng, 5, 8);
    const Eigen::Index count = s.n() + 1;
    for (int rep = 0; rep < 100; ++rep) {
      const auto a = testsupport::random_affine(rng, count);
      const auto b = testsupport::random_affine(rng, count);
      const double lower = separation_lb(s.constants(), a, b);
      const double actual =
          (evaluate(s.vertices(), a) - evaluate(s.vertices(), b)).norm();
      const double upper =
          s.constants().lip_forward * (a.coeffs() - b.coeffs()).lpNorm<1>();
      CHECK(lower <= actual * (1.0 + 1e-9) + 1e-12);
      CHECK(actual <= upper * (1.0 + 1e-9) + 1e-12);
    }
  }
}
