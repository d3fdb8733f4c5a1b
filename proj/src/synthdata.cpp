#include "ridgehunt/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <json.hpp>

#include "ridgehunt/errors.hpp"
#include "ridgehunt/rng.hpp"

namespace ridgehunt {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd vec2(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

Eigen::VectorXd vec3(double x, double y, double z) {
  Eigen::VectorXd v(3);
  v << x, y, z;
  return v;
}

StructureTruth point_truth(const std::string& name, Eigen::VectorXd center) {
  StructureTruth t;
  t.kind = StructureTruth::Kind::point;
  t.name = name;
  t.dim = 0;
  t.a = std::move(center);
  return t;
}

StructureTruth circle_truth(const std::string& name, Eigen::VectorXd center,
                            Eigen::VectorXd u, Eigen::VectorXd v, double radius) {
  StructureTruth t;
  t.kind = StructureTruth::Kind::circle;
  t.name = name;
  t.dim = 1;
  t.a = std::move(center);
  t.b = std::move(u);
  t.c = std::move(v);
  t.radius = radius;
  return t;
}

}  // namespace

Eigen::MatrixXd StructureTruth::sample(int k) const {
  if (k < 1) throw config_error("structure sample: k must be >= 1");
  switch (kind) {
    case Kind::point: {
      return a.transpose();
    }
    case Kind::circle: {
      Eigen::MatrixXd out(k, a.size());
      for (int i = 0; i < k; ++i) {
        const double th = 2.0 * kPi * double(i) / double(k);
        out.row(i) = (a + radius * (std::cos(th) * b + std::sin(th) * c)).transpose();
      }
      return out;
    }
    case Kind::arc: {
      Eigen::MatrixXd out(k, a.size());
      for (int i = 0; i < k; ++i) {
        const double th = k == 1 ? t0 : t0 + (t1 - t0) * double(i) / double(k - 1);
        out.row(i) = (a + radius * (std::cos(th) * b + std::sin(th) * c)).transpose();
      }
      return out;
    }
    case Kind::segment: {
      Eigen::MatrixXd out(k, a.size());
      for (int i = 0; i < k; ++i) {
        const double t = k == 1 ? 0.5 : double(i) / double(k - 1);
        out.row(i) = (a + t * (b - a)).transpose();
      }
      return out;
    }
    case Kind::rectangle: {
      const int g = std::max(2, static_cast<int>(std::ceil(std::sqrt(double(k)))));
      Eigen::MatrixXd out(g * g, a.size());
      for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
          out.row(i * g + j) =
              (a + (double(i) / (g - 1)) * b + (double(j) / (g - 1)) * c).transpose();
        }
      }
      return out;
    }
    case Kind::seeds: {
      return pts;
    }
  }
  throw config_error("structure sample: unknown kind");
}

double StructureTruth::distance(const Eigen::VectorXd& x) const {
  switch (kind) {
    case Kind::point:
      return (x - a).norm();
    case Kind::circle: {
      const double pu = (x - a).dot(b);
      const double pv = (x - a).dot(c);
      const Eigen::VectorXd off = (x - a) - pu * b - pv * c;
      const double in_plane = std::hypot(std::hypot(pu, pv) - radius, 0.0);
      return std::sqrt(in_plane * in_plane + off.squaredNorm());
    }
    case Kind::arc: {
      const double pu = (x - a).dot(b);
      const double pv = (x - a).dot(c);
      double th = std::atan2(pv, pu);
      // normalize into [t0, t0 + 2*pi)
      while (th < t0) th += 2.0 * kPi;
      if (th <= t1) {
        const Eigen::VectorXd off = (x - a) - pu * b - pv * c;
        const double in_plane = std::hypot(pu, pv) - radius;
        return std::sqrt(in_plane * in_plane + off.squaredNorm());
      }
      const Eigen::VectorXd e0 = a + radius * (std::cos(t0) * b + std::sin(t0) * c);
      const Eigen::VectorXd e1 = a + radius * (std::cos(t1) * b + std::sin(t1) * c);
      return std::min((x - e0).norm(), (x - e1).norm());
    }
    case Kind::segment: {
      const Eigen::VectorXd dir = b - a;
      const double len2 = dir.squaredNorm();
      double t = len2 > 0.0 ? (x - a).dot(dir) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      return (x - (a + t * dir)).norm();
    }
    case Kind::rectangle: {
      // distance via the parameter-clamped foot point (b, c orthogonal)
      const double sb = std::clamp((x - a).dot(b) / b.squaredNorm(), 0.0, 1.0);
      const double sc = std::clamp((x - a).dot(c) / c.squaredNorm(), 0.0, 1.0);
      return (x - (a + sb * b + sc * c)).norm();
    }
    case Kind::seeds: {
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        best = std::min(best, (x - pts.row(i).transpose()).norm());
      }
      return best;
    }
  }
  throw config_error("structure distance: unknown kind");
}

const StructureTruth* GroundTruth::find(const std::string& name) const {
  for (const auto& s : structures) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::vector<const StructureTruth*> GroundTruth::of_dim(int d) const {
  std::vector<const StructureTruth*> out;
  for (const auto& s : structures) {
    if (s.dim == d && s.kind != StructureTruth::Kind::seeds) out.push_back(&s);
  }
  return out;
}

LabeledCloud gen_modes_ring_2d(int n_per_mode, int n_ring, double noise_sd, int clutter_n,
                               std::uint64_t seed) {
  if (n_per_mode < 0 || n_ring < 0 || clutter_n < 0 || noise_sd < 0.0) {
    throw config_error("modes-ring-2d: counts and noise must be nonnegative");
  }
  const Eigen::Index total = Eigen::Index(4) * n_per_mode + n_ring + clutter_n;
  if (total == 0) throw config_error("modes-ring-2d: all counts are zero");

  const std::vector<Eigen::VectorXd> centers = {vec2(6, 6), vec2(6, -6), vec2(-6, 6),
                                                vec2(-6, -6)};
  const Eigen::VectorXd ring_center = vec2(0, 0);
  const double ring_radius = 3.0;
  const double clutter_half = 8.0;

  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Eigen::MatrixXd pts(total, 2);
  std::vector<std::string> labels;
  labels.reserve(total);
  Eigen::Index row = 0;

  LabeledCloud out;
  for (int m = 0; m < 4; ++m) {
    const std::string name = "mode_" + std::to_string(m);
    for (int i = 0; i < n_per_mode; ++i, ++row) {
      pts(row, 0) = centers[m][0] + noise_sd * gauss(rng);
      pts(row, 1) = centers[m][1] + noise_sd * gauss(rng);
      labels.push_back(name);
    }
    out.truth.structures.push_back(point_truth(name, centers[m]));
  }
  for (int i = 0; i < n_ring; ++i, ++row) {
    const double th = 2.0 * kPi * unit(rng);
    const double r = ring_radius + noise_sd * gauss(rng);
    pts(row, 0) = ring_center[0] + r * std::cos(th);
    pts(row, 1) = ring_center[1] + r * std::sin(th);
    labels.push_back("ring");
  }
  out.truth.structures.push_back(
      circle_truth("ring", ring_center, vec2(1, 0), vec2(0, 1), ring_radius));
  for (int i = 0; i < clutter_n; ++i, ++row) {
    pts(row, 0) = clutter_half * (2.0 * unit(rng) - 1.0);
    pts(row, 1) = clutter_half * (2.0 * unit(rng) - 1.0);
    labels.push_back("clutter");
  }

  out.cloud = PointCloud(std::move(pts));
  out.labels = std::move(labels);
  return out;
}

LabeledCloud gen_modes_ring_wall_3d(const ModesRingWall3dCounts& counts, double noise_sd,
                                    int clutter_n, std::uint64_t seed) {
  if (counts.per_mode < 0 || counts.ring < 0 || counts.wall < 0 || clutter_n < 0 ||
      noise_sd < 0.0) {
    throw config_error("modes-ring-wall-3d: counts and noise must be nonnegative");
  }
  const Eigen::Index total =
      Eigen::Index(4) * counts.per_mode + counts.ring + counts.wall + clutter_n;
  if (total == 0) throw config_error("modes-ring-wall-3d: all counts are zero");

  const std::vector<Eigen::VectorXd> centers = {vec3(5.5, 5.5, 0), vec3(5.5, -5.5, 0),
                                                vec3(-5.5, 5.5, 0), vec3(-5.5, -5.5, 0)};
  const Eigen::VectorXd ring_center = vec3(0, 0, -3.5);
  const double ring_radius = 3.5;
  const Eigen::VectorXd wall_corner = vec3(-5, -5, 3.5);
  const Eigen::VectorXd wall_u = vec3(10, 0, 0);
  const Eigen::VectorXd wall_v = vec3(0, 10, 0);
  const double clutter_half = 7.0;

  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Eigen::MatrixXd pts(total, 3);
  std::vector<std::string> labels;
  labels.reserve(total);
  Eigen::Index row = 0;

  LabeledCloud out;
  for (int m = 0; m < 4; ++m) {
    const std::string name = "mode_" + std::to_string(m);
    for (int i = 0; i < counts.per_mode; ++i, ++row) {
      for (int j = 0; j < 3; ++j) pts(row, j) = centers[m][j] + noise_sd * gauss(rng);
      labels.push_back(name);
    }
    out.truth.structures.push_back(point_truth(name, centers[m]));
  }
  for (int i = 0; i < counts.ring; ++i, ++row) {
    const double th = 2.0 * kPi * unit(rng);
    const double r = ring_radius + noise_sd * gauss(rng);
    pts(row, 0) = ring_center[0] + r * std::cos(th);
    pts(row, 1) = ring_center[1] + r * std::sin(th);
    pts(row, 2) = ring_center[2] + noise_sd * gauss(rng);
    labels.push_back("ring");
  }
  out.truth.structures.push_back(
      circle_truth("ring", ring_center, vec3(1, 0, 0), vec3(0, 1, 0), ring_radius));
  for (int i = 0; i < counts.wall; ++i, ++row) {
    const Eigen::VectorXd base = wall_corner + unit(rng) * wall_u + unit(rng) * wall_v;
    pts(row, 0) = base[0];
    pts(row, 1) = base[1];
    pts(row, 2) = base[2] + noise_sd * gauss(rng);
    labels.push_back("wall");
  }
  {
    StructureTruth wall;
    wall.kind = StructureTruth::Kind::rectangle;
    wall.name = "wall";
    wall.dim = 2;
    wall.a = wall_corner;
    wall.b = wall_u;
    wall.c = wall_v;
    out.truth.structures.push_back(wall);
  }
  for (int i = 0; i < clutter_n; ++i, ++row) {
    for (int j = 0; j < 3; ++j) pts(row, j) = clutter_half * (2.0 * unit(rng) - 1.0);
    labels.push_back("clutter");
  }

  out.cloud = PointCloud(std::move(pts));
  out.labels = std::move(labels);
  return out;
}

LabeledCloud gen_intersecting_curves(int n, double noise_sd, int clutter_n, std::uint64_t seed) {
  if (n < 0 || clutter_n < 0 || noise_sd < 0.0) {
    throw config_error("intersecting-curves: counts and noise must be nonnegative");
  }
  if (n + clutter_n == 0) throw config_error("intersecting-curves: all counts are zero");

  const double arc_radius = 3.0;
  const double line_angle = 40.0 * kPi / 180.0;
  const Eigen::VectorXd dir = vec2(std::cos(line_angle), std::sin(line_angle));
  const Eigen::VectorXd normal = vec2(-dir[1], dir[0]);
  const double line_half = 4.0;
  const double clutter_half = 5.0;
  const double clutter_margin = 1.8;

  StructureTruth arc;
  arc.kind = StructureTruth::Kind::arc;
  arc.name = "curve_0";
  arc.dim = 1;
  arc.a = vec2(0, 0);
  arc.b = vec2(1, 0);
  arc.c = vec2(0, 1);
  arc.radius = arc_radius;
  arc.t0 = 0.0;
  arc.t1 = kPi;

  StructureTruth segment;
  segment.kind = StructureTruth::Kind::segment;
  segment.name = "curve_1";
  segment.dim = 1;
  segment.a = -line_half * dir;
  segment.b = line_half * dir;

  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int n_arc = n / 2;
  const int n_line = n - n_arc;
  Eigen::MatrixXd pts(n + clutter_n, 2);
  std::vector<std::string> labels;
  labels.reserve(n + clutter_n);
  Eigen::Index row = 0;

  for (int i = 0; i < n_arc; ++i, ++row) {
    const double th = kPi * unit(rng);
    const double r = arc_radius + noise_sd * gauss(rng);
    pts(row, 0) = r * std::cos(th);
    pts(row, 1) = r * std::sin(th);
    labels.push_back("curve_0");
  }
  for (int i = 0; i < n_line; ++i, ++row) {
    const double t = line_half * (2.0 * unit(rng) - 1.0);
    const Eigen::VectorXd p = t * dir + noise_sd * gauss(rng) * normal;
    pts(row, 0) = p[0];
    pts(row, 1) = p[1];
    labels.push_back("curve_1");
  }
  for (int i = 0; i < clutter_n; ++i, ++row) {
    Eigen::VectorXd p(2);
    int attempts = 0;
    do {
      if (++attempts > 100000) {
        throw numeric_error("intersecting-curves: clutter rejection failed");
      }
      p[0] = clutter_half * (2.0 * unit(rng) - 1.0);
      p[1] = clutter_half * (2.0 * unit(rng) - 1.0);
    } while (arc.distance(p) < clutter_margin || segment.distance(p) < clutter_margin);
    pts(row, 0) = p[0];
    pts(row, 1) = p[1];
    labels.push_back("clutter");
  }

  LabeledCloud out;
  out.cloud = PointCloud(std::move(pts));
  out.labels = std::move(labels);
  out.truth.structures.push_back(arc);
  out.truth.structures.push_back(segment);
  return out;
}

LabeledCloud gen_voronoi_foam(int n_seeds, double frac_node, double frac_filament,
                              double frac_wall, int n_points, double clutter_fraction,
                              std::uint64_t seed) {
  if (n_seeds < 5) throw config_error("voronoi-foam: need at least 5 seeds");
  if (n_points < 1) throw config_error("voronoi-foam: need at least 1 point");
  if (frac_node < 0 || frac_filament < 0 || frac_wall < 0 || clutter_fraction < 0) {
    throw config_error("voronoi-foam: fractions must be nonnegative");
  }
  const double frac_sum = frac_node + frac_filament + frac_wall;
  if (frac_sum > 1.0 + 1e-9 || frac_sum + clutter_fraction > 1.0 + 1e-9) {
    throw config_error("voronoi-foam: fractions must sum to at most 1");
  }

  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> cube(-1.0, 1.0);

  Eigen::MatrixXd seeds(n_seeds, 3);
  for (int i = 0; i < n_seeds; ++i) {
    for (int j = 0; j < 3; ++j) seeds(i, j) = cube(rng);
  }

  auto nearest = [&](const Eigen::VectorXd& x, int k) {
    std::vector<std::pair<double, int>> d(n_seeds);
    for (int i = 0; i < n_seeds; ++i) {
      d[i] = {(seeds.row(i).transpose() - x).squaredNorm(), i};
    }
    std::partial_sort(d.begin(), d.begin() + k, d.end());
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = d[i].second;
    return idx;
  };
  auto in_cube = [](const Eigen::VectorXd& x) {
    return (x.array() >= -1.0).all() && (x.array() <= 1.0).all();
  };

  // Project x so it is equidistant to the listed seeds (linear constraints of
  // the form 2 (s_k - s_0)^T x = ||s_k||^2 - ||s_0||^2), minimal correction.
  auto project_equidistant = [&](const Eigen::VectorXd& x, const std::vector<int>& idx) {
    const int k = static_cast<int>(idx.size()) - 1;
    Eigen::MatrixXd A(k, 3);
    Eigen::VectorXd r(k);
    const Eigen::VectorXd s0 = seeds.row(idx[0]).transpose();
    for (int i = 0; i < k; ++i) {
      const Eigen::VectorXd si = seeds.row(idx[i + 1]).transpose();
      A.row(i) = 2.0 * (si - s0).transpose();
      r[i] = si.squaredNorm() - s0.squaredNorm();
    }
    const Eigen::MatrixXd gram = A * A.transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (!lu.isInvertible()) return Eigen::VectorXd();
    return Eigen::VectorXd(x - A.transpose() * lu.solve(A * x - r));
  };

  auto draw_on = [&](int target_count, std::uint64_t* attempt_guard) {
    // target_count nearest seeds must be equidistant after projection
    Eigen::VectorXd result;
    while (true) {
      if (++(*attempt_guard) > 2000000ULL) {
        throw numeric_error("voronoi-foam: projection rejection failed");
      }
      Eigen::VectorXd u(3);
      for (int j = 0; j < 3; ++j) u[j] = cube(rng);
      const std::vector<int> idx = nearest(u, target_count);
      const Eigen::VectorXd x = project_equidistant(u, idx);
      if (x.size() == 0 || !in_cube(x)) continue;
      const std::vector<int> check = nearest(x, target_count);
      std::vector<int> want = idx, got = check;
      std::sort(want.begin(), want.end());
      std::sort(got.begin(), got.end());
      if (want != got) continue;
      const double d0 = (seeds.row(idx[0]).transpose() - x).norm();
      const double dk = (seeds.row(idx.back()).transpose() - x).norm();
      if (std::abs(d0 - dk) > 1e-9 * std::max(1.0, d0)) continue;
      result = x;
      break;
    }
    return result;
  };

  const int n_node = static_cast<int>(std::lround(frac_node * n_points));
  const int n_fil = static_cast<int>(std::lround(frac_filament * n_points));
  const int n_wall = static_cast<int>(std::lround(frac_wall * n_points));
  const int n_clutter = n_points - n_node - n_fil - n_wall;
  if (n_clutter < 0) throw config_error("voronoi-foam: fractions exceed 1 after rounding");

  Eigen::MatrixXd pts(n_points, 3);
  std::vector<std::string> labels;
  labels.reserve(n_points);
  Eigen::Index row = 0;
  std::uint64_t guard = 0;

  for (int i = 0; i < n_node; ++i, ++row) {
    pts.row(row) = draw_on(4, &guard).transpose();
    labels.push_back("node");
  }
  for (int i = 0; i < n_fil; ++i, ++row) {
    pts.row(row) = draw_on(3, &guard).transpose();
    labels.push_back("filament");
  }
  for (int i = 0; i < n_wall; ++i, ++row) {
    pts.row(row) = draw_on(2, &guard).transpose();
    labels.push_back("wall");
  }
  for (int i = 0; i < n_clutter; ++i, ++row) {
    for (int j = 0; j < 3; ++j) pts(row, j) = cube(rng);
    labels.push_back("clutter");
  }

  LabeledCloud out;
  out.cloud = PointCloud(std::move(pts));
  out.labels = std::move(labels);
  StructureTruth st;
  st.kind = StructureTruth::Kind::seeds;
  st.name = "seeds";
  st.dim = -1;
  st.pts = seeds;
  out.truth.structures.push_back(std::move(st));
  return out;
}

PointCloud gen_uniform_box(const Box& box, Eigen::Index n, std::uint64_t seed) {
  return sample_uniform_box(box, n, seed);
}

namespace {

nlohmann::json vec_to_json(const Eigen::VectorXd& v) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

Eigen::VectorXd vec_from_json(const nlohmann::json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[Eigen::Index(i)] = j[i].get<double>();
  return v;
}

const char* kind_name(StructureTruth::Kind k) {
  switch (k) {
    case StructureTruth::Kind::point: return "point";
    case StructureTruth::Kind::circle: return "circle";
    case StructureTruth::Kind::arc: return "arc";
    case StructureTruth::Kind::segment: return "segment";
    case StructureTruth::Kind::rectangle: return "rectangle";
    case StructureTruth::Kind::seeds: return "seeds";
  }
  return "point";
}

StructureTruth::Kind kind_from_name(const std::string& s) {
  if (s == "point") return StructureTruth::Kind::point;
  if (s == "circle") return StructureTruth::Kind::circle;
  if (s == "arc") return StructureTruth::Kind::arc;
  if (s == "segment") return StructureTruth::Kind::segment;
  if (s == "rectangle") return StructureTruth::Kind::rectangle;
  if (s == "seeds") return StructureTruth::Kind::seeds;
  throw io_error("truth json: unknown structure kind '" + s + "'");
}

}  // namespace

void save_truth_json(const GroundTruth& truth, const std::string& path) {
  nlohmann::json root;
  root["structures"] = nlohmann::json::array();
  for (const auto& s : truth.structures) {
    nlohmann::json j;
    j["kind"] = kind_name(s.kind);
    j["name"] = s.name;
    j["dim"] = s.dim;
    j["a"] = vec_to_json(s.a);
    j["b"] = vec_to_json(s.b);
    j["c"] = vec_to_json(s.c);
    j["radius"] = s.radius;
    j["t0"] = s.t0;
    j["t1"] = s.t1;
    if (s.kind == StructureTruth::Kind::seeds) {
      nlohmann::json rows = nlohmann::json::array();
      for (Eigen::Index i = 0; i < s.pts.rows(); ++i) {
        rows.push_back(vec_to_json(s.pts.row(i).transpose()));
      }
      j["pts"] = rows;
    }
    root["structures"].push_back(std::move(j));
  }
  std::ofstream out(path);
  if (!out) throw io_error("truth json: cannot write " + path);
  out << root.dump(2) << "\n";
}

GroundTruth load_truth_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("truth json: cannot open " + path);
  nlohmann::json root;
  try {
    in >> root;
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("truth json: parse failure: ") + e.what());
  }
  GroundTruth truth;
  for (const auto& j : root.at("structures")) {
    StructureTruth s;
    s.kind = kind_from_name(j.at("kind").get<std::string>());
    s.name = j.at("name").get<std::string>();
    s.dim = j.at("dim").get<int>();
    s.a = vec_from_json(j.at("a"));
    s.b = vec_from_json(j.at("b"));
    s.c = vec_from_json(j.at("c"));
    s.radius = j.at("radius").get<double>();
    s.t0 = j.at("t0").get<double>();
    s.t1 = j.at("t1").get<double>();
    if (j.contains("pts")) {
      const auto& rows = j.at("pts");
      s.pts.resize(rows.size(), rows.empty() ? 0 : rows[0].size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        s.pts.row(Eigen::Index(i)) = vec_from_json(rows[i]).transpose();
      }
    }
    truth.structures.push_back(std::move(s));
  }
  return truth;
}

}  // namespace ridgehunt
