#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "simplexcert/affine.hpp"
#include "simplexcert/errors.hpp"
#include "simplexcert/simplex.hpp"

namespace simplexcert {

// Two matrix norms used by the perturbation bounds: the max-entry norm and
// the operator norm induced by the L1 vector norm (max column abs sum).
// induced_l1_norm <= n * max_entry_norm always, with equality attained.
struct MatrixNorms {
  double max_entry_norm;
  double induced_l1_norm;
};

MatrixNorms matrix_norms(const Eigen::Ref<const Eigen::MatrixXd>& a);

struct LinearPerturbation {
  double delta;              // margin_c / (2n + 1)
  double guaranteed_margin;  // 2n * delta, valid for any family within delta
  double margin_c;           // certified L1 margin of the input family
};

// Certified radius delta such that any vectors y_k with ||y_k - x_k|| <
// delta remain linearly independent, with the stated guaranteed margin.
LinearPerturbation linear_perturbation_delta(
    const Eigen::Ref<const Eigen::MatrixXd>& vectors,
    double tol = kPositivityTolerance);

// Certified radius delta such that any points x_k with ||a_k - x_k|| <
// delta remain affinely independent: half the linear radius of the
// last-point difference vectors, since both endpoints of a difference move.
double affine_perturbation_delta(
    const Eigen::Ref<const Eigen::MatrixXd>& points,
    double tol = kPositivityTolerance);

// Largest delta = t/n (t resolved to 1e-6) such that ||A - I||_1 < delta
// forces det A > 1/2 and ||A^{-1} - I||_1 < eps, via the Neumann series
// bound t/(1-t) on the inverse and the determinant perturbation bound
// n*t*(1+t)^(n-1) in the induced L1 norm.
double inversion_delta(int n, double eps);

// Conservative bound plus the chain of constants it was derived from, in
// derivation order. The final delta never exceeds any intermediate delta.
struct PerturbationCertificate {
  double delta;
  std::vector<std::pair<std::string, double>> chain;
};

// Certified vertex-perturbation tolerance: moving every vertex within
// delta (staying in the affine hull) keeps the points affinely independent
// and keeps c strictly inside the perturbed simplex, with recoordinated
// coefficients within m/2 of the originals in L1. Requires classify(s, c)
// == CertifiedInside.
PerturbationCertificate vertex_perturbation_delta(
    const Simplex& s, const Eigen::Ref<const Eigen::VectorXd>& c);

// Coefficients gamma over the new points reproducing the point with
// coefficients lambda over the original vertices: solves the linear system
// whose matrix columns are the original-vertex coordinates of each new
// point. New points must lie on the affine hull of s.
BarycentricVector recoordinate(
    const Simplex& s, const Eigen::Ref<const Eigen::MatrixXd>& new_points,
    const BarycentricVector& lambda);

}  // namespace simplexcert
