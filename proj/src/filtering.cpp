#include "ridgehunt/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ridgehunt/errors.hpp"
#include "ridgehunt/parallel.hpp"
#include "ridgehunt/rng.hpp"

namespace ridgehunt {

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int p) {
    int root = p;
    while (root != parent_[root]) root = parent_[root];
    while (p != root) {
      const int next = parent_[p];
      parent_[p] = root;
      p = next;
    }
    return root;
  }
  void merge(int a, int b) {
    const int ra = find(a), rb = find(b);
    if (ra == rb) return;
    if (size_[ra] < size_[rb]) {
      parent_[ra] = rb;
      size_[rb] += size_[ra];
    } else {
      parent_[rb] = ra;
      size_[ra] += size_[rb];
    }
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

double mean_nn_distance(const Eigen::MatrixXd& pts) {
  const Eigen::Index n = pts.rows();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d2 = (pts.row(i) - pts.row(j)).squaredNorm();
      if (d2 < best) best = d2;
    }
    acc += std::sqrt(best);
  }
  return acc / double(n);
}

int largest_component_size(const Eigen::MatrixXd& pts, double epsilon) {
  const int n = static_cast<int>(pts.rows());
  UnionFind uf(n);
  const double e2 = epsilon * epsilon;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((pts.row(i) - pts.row(j)).squaredNorm() <= e2) uf.merge(i, j);
    }
  }
  std::vector<int> count(n, 0);
  int best = 0;
  for (int i = 0; i < n; ++i) best = std::max(best, ++count[uf.find(i)]);
  return best;
}

}  // namespace

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::heuristic: return "heuristic";
    case Provenance::null_mc: return "null-mc";
    case Provenance::user: return "user";
    case Provenance::fallback: return "fallback";
  }
  return "unknown";
}

std::vector<int> filter_sharp(const std::vector<double>& values, double threshold) {
  std::vector<int> kept;
  for (int i = 0; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > threshold) kept.push_back(i);
  }
  return kept;
}

ThresholdEstimate threshold_heuristic(std::vector<double> values, int grid_size) {
  if (values.size() < 10) {
    throw config_error("threshold heuristic: need at least 10 signature values");
  }
  if (grid_size < 8) throw config_error("threshold heuristic: grid too small");

  auto median = [&]() {
    std::vector<double> v = values;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    return v[mid];
  };

  const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *mn_it, hi = *mx_it;
  const Eigen::Index n = static_cast<Eigen::Index>(values.size());

  double sd;
  {
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / double(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    sd = std::sqrt(ss / double(n - 1));
  }
  if (!(sd > 0.0) || !(hi > lo)) {
    return {median(), Provenance::fallback};
  }
  const double h = std::pow(4.0 / (3.0 * double(n)), 0.2) * sd;

  Eigen::VectorXd f = Eigen::VectorXd::Zero(grid_size);
  const double dx = (hi - lo) / double(grid_size - 1);
  for (int g = 0; g < grid_size; ++g) {
    const double t = lo + g * dx;
    double acc = 0.0;
    for (double v : values) {
      const double u = (t - v) / h;
      acc += std::exp(-0.5 * u * u);
    }
    f[g] = acc / (double(n) * h * std::sqrt(2.0 * std::numbers::pi));
  }
  for (int g = grid_size - 2; g >= 1; --g) {
    if (f[g] < f[g - 1] && f[g] < f[g + 1]) {
      return {lo + g * dx, Provenance::heuristic};
    }
  }
  return {median(), Provenance::fallback};
}

double upper_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw config_error("quantile: empty sample");
  if (!(q > 0.0) || q > 1.0) throw config_error("quantile: requires 0 < q <= 1");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  std::size_t k = static_cast<std::size_t>(std::ceil(q * double(n)));
  if (k < 1) k = 1;
  if (k > n) k = n;
  return values[k - 1];
}

double null_threshold_mc(const Box& domain, Eigen::Index n, double h, int d, int reps,
                         double quantile, std::uint64_t seed, bool parallel) {
  domain.validate();
  if (reps < 20) throw config_error("null threshold: need at least 20 replications");
  if (!(quantile > 0.0) || quantile > 1.0) {
    throw config_error("null threshold: quantile must lie in (0, 1]");
  }
  if (n < 2) throw config_error("null threshold: need n >= 2");
  if (d < 0 || d >= domain.dim()) throw config_error("null threshold: d out of range");

  std::vector<double> tau(reps, 0.0);
  run_parallel(static_cast<std::size_t>(reps), parallel, [&](IndexPool& pool) {
    std::size_t b, e;
    while (pool.next(b, e)) {
      for (std::size_t r = b; r < e; ++r) {
        const PointCloud cloud = sample_uniform_box(domain, n, derive_seed(seed, r));
        const DensityModel model(cloud, h);
        const RidgeSet ridge = estimate_ridge(model, d, cloud.matrix(),
                                              default_tolerance(model), 500, false);
        double best = 0.0;
        for (const RidgePoint& p : ridge.points) {
          if (p.converged) best = std::max(best, p.signature[d]);
        }
        tau[r] = best;
      }
    }
  }, 1);
  return upper_quantile(std::move(tau), quantile);
}

double rips_epsilon_null(const Box& domain, Eigen::Index n, int reps, std::uint64_t seed,
                         bool parallel) {
  domain.validate();
  if (n < 2) throw config_error("rips epsilon: need n >= 2");
  if (reps < 1) throw config_error("rips epsilon: need reps >= 1");
  std::vector<double> means(reps, 0.0);
  run_parallel(static_cast<std::size_t>(reps), parallel, [&](IndexPool& pool) {
    std::size_t b, e;
    while (pool.next(b, e)) {
      for (std::size_t r = b; r < e; ++r) {
        const PointCloud cloud = sample_uniform_box(domain, n, derive_seed(seed, r));
        means[r] = mean_nn_distance(cloud.matrix());
      }
    }
  }, 1);
  return std::accumulate(means.begin(), means.end(), 0.0) / double(reps);
}

std::vector<std::vector<int>> rips_components(const Eigen::MatrixXd& points, double epsilon) {
  if (!(epsilon > 0.0)) throw config_error("rips components: epsilon must be positive");
  const int n = static_cast<int>(points.rows());
  if (n == 0) return {};
  UnionFind uf(n);
  const double e2 = epsilon * epsilon;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((points.row(i) - points.row(j)).squaredNorm() <= e2) uf.merge(i, j);
    }
  }
  std::vector<std::vector<int>> groups(n);
  for (int i = 0; i < n; ++i) groups[uf.find(i)].push_back(i);
  std::vector<std::vector<int>> comps;
  for (auto& g : groups) {
    if (!g.empty()) comps.push_back(std::move(g));  // already ascending
  }
  std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return comps;
}

int min_size_null(const Box& domain, Eigen::Index n, double epsilon, int reps, double quantile,
                  std::uint64_t seed, bool parallel) {
  domain.validate();
  if (reps < 20) throw config_error("min size null: need at least 20 replications");
  if (!(quantile > 0.0) || quantile > 1.0) {
    throw config_error("min size null: quantile must lie in (0, 1]");
  }
  if (!(epsilon > 0.0)) throw config_error("min size null: epsilon must be positive");
  std::vector<double> largest(reps, 0.0);
  run_parallel(static_cast<std::size_t>(reps), parallel, [&](IndexPool& pool) {
    std::size_t b, e;
    while (pool.next(b, e)) {
      for (std::size_t r = b; r < e; ++r) {
        const PointCloud cloud = sample_uniform_box(domain, n, derive_seed(seed, r));
        largest[r] = largest_component_size(cloud.matrix(), epsilon);
      }
    }
  }, 1);
  return static_cast<int>(upper_quantile(std::move(largest), quantile));
}

FeatureSet make_feature_set(int d, const Eigen::MatrixXd& sharp_points,
                            const std::vector<int>& sharp_origin, double epsilon) {
  if (sharp_points.rows() != static_cast<Eigen::Index>(sharp_origin.size())) {
    throw config_error("feature set: points/origin size mismatch");
  }
  FeatureSet fs;
  fs.d = d;
  fs.sharp_points = sharp_points;
  fs.sharp_origin = sharp_origin;
  fs.components = rips_components(sharp_points, epsilon);
  fs.kept.assign(fs.components.size(), true);
  return fs;
}

FeatureSet prune(FeatureSet fs, std::size_t min_size) {
  fs.kept.resize(fs.components.size());
  for (std::size_t c = 0; c < fs.components.size(); ++c) {
    fs.kept[c] = fs.components[c].size() >= min_size;
  }
  return fs;
}

double hausdorff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() == 0 || b.rows() == 0) throw config_error("hausdorff: empty point set");
  if (a.cols() != b.cols()) throw config_error("hausdorff: dimension mismatch");
  auto directed = [](const Eigen::MatrixXd& from, const Eigen::MatrixXd& to) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < from.rows(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < to.rows(); ++j) {
        const double d2 = (from.row(i) - to.row(j)).squaredNorm();
        if (d2 < best) best = d2;
      }
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace ridgehunt
