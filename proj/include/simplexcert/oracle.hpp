#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "simplexcert/errors.hpp"
#include "simplexcert/simplex.hpp"

// Independent brute-force verifiers used by property tests. Everything in
// here recomputes from first principles (plain summation loops, direct
// distance evaluation) and shares no implementation with the certified
// paths it is used to check.
namespace simplexcert::oracle {

struct OracleConfig {
  std::uint64_t seed = 0x5EED5E7ull;
  std::size_t samples = 10000;
  int grid_resolution = 64;
};

// Stream splitting: a SplitMix64 scramble of (root, index) seeds one
// mt19937_64 per logical stream, so parallel or reordered consumers see
// the same values. mt19937_64 is fully pinned by the standard, hence
// portable across platforms.
std::uint64_t split_seed(std::uint64_t root, std::uint64_t index);

// Uniform double in [0, 1) built from the top 53 bits of the generator
// output; avoids std::uniform_real_distribution, whose output is not
// specified bit-for-bit.
double canonical_double(std::mt19937_64& rng);

// Uniform draw from the coefficient simplex (normalized unit exponentials).
Eigen::VectorXd dirichlet_uniform(std::mt19937_64& rng, Eigen::Index size);

struct MarginEstimate {
  double value;           // min of ||sum l_k v_k|| found on the L1 sphere
  double error_envelope;  // value - envelope <= true minimum <= value
};

// Approximate minimum of ||sum lambda_k v_k||_2 over the unit L1 sphere by
// sign-pattern times simplex-grid enumeration followed by deterministic
// pattern-search refinement. Enumeration cost grows combinatorially with
// the number of vectors; pick grid_resolution accordingly.
MarginEstimate margin_oracle(const Eigen::Ref<const Eigen::MatrixXd>& vectors,
                             const OracleConfig& cfg);

// Approximate (upper bound on the) distance from x to the simplex: best of
// cfg.samples uniform simplex points, improved by coordinate descent over
// pairwise mass moves.
double distance_oracle(const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Simplex& s, const OracleConfig& cfg);

struct CoverageReport {
  bool ok;          // worst_gap <= net.epsilon
  double worst_gap; // max over samples of the distance to the nearest net point
};

// Samples cfg.samples uniform simplex points and measures the worst
// nearest-net-point distance. Exact nearest-neighbour search, accelerated
// by a uniform cell grid for large nets.
CoverageReport coverage_check(const NetPointSet& net, const Simplex& s,
                              const OracleConfig& cfg);

}  // namespace simplexcert::oracle
