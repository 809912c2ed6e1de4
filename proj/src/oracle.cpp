#include "simplexcert/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <unordered_map>
#include <vector>

namespace simplexcert::oracle {

std::uint64_t split_seed(std::uint64_t root, std::uint64_t index) {
  // SplitMix64 finalizer over the combined state.
  std::uint64_t z = root + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double canonical_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Eigen::VectorXd dirichlet_uniform(std::mt19937_64& rng, Eigen::Index size) {
  if (size < 1) {
    throw InvalidInputError("dirichlet_uniform: size must be >= 1");
  }
  Eigen::VectorXd v(size);
  double total = 0.0;
  for (Eigen::Index i = 0; i < size; ++i) {
    v(i) = -std::log1p(-canonical_double(rng));
    total += v(i);
  }
  if (total <= 0.0) {
    return Eigen::VectorXd::Constant(size, 1.0 / static_cast<double>(size));
  }
  return v / total;
}

namespace {

// Plain left-to-right accumulation, deliberately unlike the certified
// evaluation path.
Eigen::VectorXd combine(const Eigen::Ref<const Eigen::MatrixXd>& points,
                        const Eigen::Ref<const Eigen::VectorXd>& weights) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(points.rows());
  for (Eigen::Index k = 0; k < points.cols(); ++k) {
    out += weights(k) * points.col(k);
  }
  return out;
}

double combination_norm(const Eigen::Ref<const Eigen::MatrixXd>& vectors,
                        const Eigen::VectorXd& lambda) {
  return combine(vectors, lambda).norm();
}

// Enumerate weight vectors k/R over the compositions of R into m parts.
template <typename Fn>
void for_each_composition(int remaining, Eigen::Index slot,
                          Eigen::VectorXd* weights, int resolution, Fn&& fn) {
  if (slot + 1 == weights->size()) {
    (*weights)(slot) =
        static_cast<double>(remaining) / static_cast<double>(resolution);
    fn(*weights);
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    (*weights)(slot) =
        static_cast<double>(k) / static_cast<double>(resolution);
    for_each_composition(remaining - k, slot + 1, weights, resolution, fn);
  }
}

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) {
    out *= static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return out;
}

}  // namespace

MarginEstimate margin_oracle(const Eigen::Ref<const Eigen::MatrixXd>& vectors,
                             const OracleConfig& cfg) {
  const Eigen::Index m = vectors.cols();
  if (m < 1) {
    throw InvalidInputError("margin_oracle: need vectors");
  }
  if (!vectors.allFinite()) {
    throw InvalidInputError("margin_oracle: non-finite entries");
  }
  const double max_norm = vectors.colwise().norm().maxCoeff();
  if (m == 1) {
    return MarginEstimate{vectors.col(0).norm(), 0.0};
  }
  const int resolution = std::max(cfg.grid_resolution, 2);

  const double grid_points = binomial(resolution + static_cast<int>(m) - 1,
                                      static_cast<int>(m) - 1);
  const double evaluations =
      grid_points * std::pow(2.0, static_cast<double>(m - 1));
  if (evaluations > 2e7) {
    throw ResourceLimitError(
        "margin_oracle: enumeration too large; reduce grid_resolution",
        static_cast<std::size_t>(std::min(evaluations, 9.2e18)));
  }

  // Negating lambda preserves the norm, so the first sign is fixed +.
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_lambda;
  Eigen::VectorXd weights(m);
  for (std::uint64_t bits = 0; bits < (1ull << (m - 1)); ++bits) {
    Eigen::VectorXd signs(m);
    signs(0) = 1.0;
    for (Eigen::Index i = 1; i < m; ++i) {
      signs(i) = (bits >> (i - 1)) & 1 ? -1.0 : 1.0;
    }
    for_each_composition(resolution, 0, &weights, resolution,
                         [&](const Eigen::VectorXd& w) {
                           const Eigen::VectorXd lambda = signs.cwiseProduct(w);
                           const double value =
                               combination_norm(vectors, lambda);
                           if (value < best) {
                             best = value;
                             best_lambda = lambda;
                           }
                         });
  }

  // Deterministic pattern search on the sphere from the best grid point.
  double step = 1.0 / static_cast<double>(resolution);
  while (step > 1e-7) {
    bool improved = false;
    for (Eigen::Index i = 0; i < m; ++i) {
      for (const double dir : {step, -step}) {
        Eigen::VectorXd trial = best_lambda;
        trial(i) += dir;
        const double l1 = trial.lpNorm<1>();
        if (l1 <= 0.0) continue;
        trial /= l1;
        const double value = combination_norm(vectors, trial);
        if (value < best) {
          best = value;
          best_lambda = trial;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }

  const double envelope =
      max_norm * 2.0 * static_cast<double>(m) / static_cast<double>(resolution);
  return MarginEstimate{best, envelope};
}

double distance_oracle(const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Simplex& s, const OracleConfig& cfg) {
  if (x.size() != s.ambient_dim()) {
    throw InvalidInputError("distance_oracle: query dimension mismatch");
  }
  const Eigen::Index count = s.n() + 1;
  const std::size_t samples = std::max<std::size_t>(cfg.samples, 1);

  std::mt19937_64 rng(split_seed(cfg.seed, 0));
  Eigen::VectorXd best_lambda =
      Eigen::VectorXd::Constant(count, 1.0 / static_cast<double>(count));
  double best = (combine(s.vertices(), best_lambda) - x).norm();
  for (std::size_t i = 0; i < samples; ++i) {
    const Eigen::VectorXd lambda = dirichlet_uniform(rng, count);
    const double value = (combine(s.vertices(), lambda) - x).norm();
    if (value < best) {
      best = value;
      best_lambda = lambda;
    }
  }

  // Coordinate descent over pairwise mass moves keeps iterates feasible.
  double step = 0.25;
  while (step > 1e-7) {
    bool improved = false;
    for (Eigen::Index from = 0; from < count; ++from) {
      if (best_lambda(from) <= 0.0) continue;
      for (Eigen::Index to = 0; to < count; ++to) {
        if (to == from) continue;
        const double move = std::min(step, best_lambda(from));
        Eigen::VectorXd trial = best_lambda;
        trial(from) -= move;
        trial(to) += move;
        const double value = (combine(s.vertices(), trial) - x).norm();
        if (value < best) {
          best = value;
          best_lambda = trial;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

namespace {

struct CellKey {
  std::vector<std::int64_t> cell;
  bool operator==(const CellKey& other) const { return cell == other.cell; }
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& key) const {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (const std::int64_t c : key.cell) {
      h ^= static_cast<std::uint64_t>(c);
      h *= 0x100000001B3ull;
    }
    return static_cast<std::size_t>(h);
  }
};

CellKey cell_of(const Eigen::Ref<const Eigen::VectorXd>& p, double size) {
  CellKey key;
  key.cell.resize(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    key.cell[static_cast<std::size_t>(i)] =
        static_cast<std::int64_t>(std::floor(p(i) / size));
  }
  return key;
}

class NearestNetPoint {
 public:
  NearestNetPoint(const Eigen::MatrixXd& points, double cell_size)
      : points_(points), cell_size_(cell_size) {
    // Brute force stays faster than hashing for small nets and avoids the
    // exponential ring enumeration in high ambient dimension.
    use_grid_ = points.cols() > 2000 && points.rows() <= 6;
    if (use_grid_) {
      for (Eigen::Index i = 0; i < points.cols(); ++i) {
        buckets_[cell_of(points.col(i), cell_size_)].push_back(i);
      }
    }
  }

  double distance(const Eigen::Ref<const Eigen::VectorXd>& p) const {
    if (!use_grid_) {
      return (points_.colwise() - p).colwise().norm().minCoeff();
    }
    const CellKey centre = cell_of(p, cell_size_);
    // Any net point bounds the search; rings expand until every unscanned
    // cell is provably farther than the best hit so far (cells at
    // Chebyshev ring r hold points at distance >= (r - 1) * cell_size).
    double best = (points_.col(0) - p).norm();
    for (std::int64_t ring = 0;
         best > static_cast<double>(ring - 1) * cell_size_; ++ring) {
      CellKey probe = centre;
      scan_axis(0, false, centre, ring, &probe, p, &best);
    }
    return best;
  }

 private:
  void scan_axis(std::size_t axis, bool on_shell, const CellKey& centre,
                 std::int64_t ring, CellKey* probe,
                 const Eigen::Ref<const Eigen::VectorXd>& p,
                 double* best) const {
    if (axis == probe->cell.size()) {
      if (ring > 0 && !on_shell) return;  // interior rings already scanned
      const auto it = buckets_.find(*probe);
      if (it == buckets_.end()) return;
      for (const Eigen::Index idx : it->second) {
        const double value = (points_.col(idx) - p).norm();
        *best = std::min(*best, value);
      }
      return;
    }
    for (std::int64_t off = -ring; off <= ring; ++off) {
      probe->cell[axis] = centre.cell[axis] + off;
      scan_axis(axis + 1, on_shell || std::llabs(off) == ring, centre, ring,
                probe, p, best);
    }
  }

  const Eigen::MatrixXd& points_;
  double cell_size_;
  bool use_grid_ = false;
  std::unordered_map<CellKey, std::vector<Eigen::Index>, CellKeyHash> buckets_;
};

}  // namespace

CoverageReport coverage_check(const NetPointSet& net, const Simplex& s,
                              const OracleConfig& cfg) {
  if (net.points.cols() < 1) {
    throw InvalidInputError(
        "coverage_check: a net must contain at least one point");
  }
  if (net.points.rows() != s.ambient_dim()) {
    throw InvalidInputError("coverage_check: net dimension mismatch");
  }
  if (!(net.epsilon > 0.0)) {
    throw InvalidInputError("coverage_check: net epsilon must be positive");
  }

  const NearestNetPoint nearest(net.points, net.epsilon);
  const Eigen::Index count = s.n() + 1;
  std::mt19937_64 rng(split_seed(cfg.seed, 1));
  double worst = 0.0;
  const std::size_t samples = std::max<std::size_t>(cfg.samples, 1);
  for (std::size_t i = 0; i < samples; ++i) {
    const Eigen::VectorXd lambda = dirichlet_uniform(rng, count);
    const Eigen::VectorXd p = combine(s.vertices(), lambda);
    worst = std::max(worst, nearest.distance(p));
  }
  return CoverageReport{worst <= net.epsilon, worst};
}

}  // namespace simplexcert::oracle
