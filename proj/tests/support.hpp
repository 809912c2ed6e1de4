#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "simplexcert/affine.hpp"
#include "simplexcert/oracle.hpp"
#include "simplexcert/simplex.hpp"

// Shared generators for randomized tests. All randomness flows through
// mt19937_64 plus the oracle module's bit-level double extraction, so the
// suites are reproducible across platforms.
namespace testsupport {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * simplexcert::oracle::canonical_double(rng);
}

inline double gaussian(std::mt19937_64& rng) {
  const double u1 = 1.0 - simplexcert::oracle::canonical_double(rng);
  const double u2 = simplexcert::oracle::canonical_double(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

inline Eigen::VectorXd gaussian_vector(std::mt19937_64& rng, Eigen::Index d) {
  Eigen::VectorXd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = gaussian(rng);
  return v;
}

inline Eigen::MatrixXd uniform_matrix(std::mt19937_64& rng, Eigen::Index rows,
                                      Eigen::Index cols, double lo,
                                      double hi) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = uniform(rng, lo, hi);
  }
  return m;
}

// Margin-certified random simplex with vertices in [-1, 1]^d.
inline simplexcert::Simplex random_simplex(std::mt19937_64& rng, int n,
                                           int d) {
  for (;;) {
    try {
      return simplexcert::new_simplex(uniform_matrix(rng, d, n + 1, -1, 1));
    } catch (const simplexcert::CannotCertifyError&) {
      // degenerate draw; try again
    }
  }
}

inline simplexcert::Simplex random_simplex_up_to(std::mt19937_64& rng,
                                                 int max_n, int max_d) {
  const int n =
      1 + static_cast<int>(uniform(rng, 0.0, 1.0) * max_n) % max_n;
  const int d =
      n + static_cast<int>(uniform(rng, 0.0, 1.0) * (max_d - n + 1)) %
              (max_d - n + 1);
  return random_simplex(rng, n, d);
}

// Random affine coefficients (sum one, signs unrestricted).
inline simplexcert::BarycentricVector random_affine(std::mt19937_64& rng,
                                                    Eigen::Index count) {
  Eigen::VectorXd v = gaussian_vector(rng, count);
  v.array() += (1.0 - v.sum()) / static_cast<double>(count);
  return simplexcert::BarycentricVector::affine(v, 1e-6);
}

// Random point of the affine hull: evaluate a random affine combination.
inline Eigen::VectorXd random_hull_point(std::mt19937_64& rng,
                                         const simplexcert::Simplex& s) {
  return simplexcert::evaluate(s.vertices(),
                               random_affine(rng, s.n() + 1));
}

// Random direction inside the difference span of the simplex, unit length.
inline Eigen::VectorXd random_span_direction(std::mt19937_64& rng,
                                             const simplexcert::Simplex& s) {
  const Eigen::Index n = s.n();
  for (;;) {
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(s.ambient_dim());
    const Eigen::VectorXd mix = gaussian_vector(rng, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
      dir += mix(k - 1) * (s.vertices().col(k) - s.vertices().col(0));
    }
    const double len = dir.norm();
    if (len > 1e-12) return dir / len;
  }
}

}  // namespace testsupport
