#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ridgehunt/point_cloud.hpp"

namespace ridgehunt {

/// Analytic description of one planted structure, rich enough to measure
/// Hausdorff distances against recovered features without re-deriving any
/// geometry: sample(k) discretizes the structure deterministically.
struct StructureTruth {
  enum class Kind { point, circle, arc, segment, rectangle, seeds };

  Kind kind = Kind::point;
  std::string name;
  int dim = 0;
  Eigen::VectorXd a;  // center / corner / first endpoint
  Eigen::VectorXd b;  // plane basis or edge vector / second endpoint
  Eigen::VectorXd c;  // second plane basis or edge vector
  double radius = 0.0;
  double t0 = 0.0;  // arc angle range
  double t1 = 0.0;
  Eigen::MatrixXd pts;  // payload for Kind::seeds

  Eigen::MatrixXd sample(int k) const;
  double distance(const Eigen::VectorXd& x) const;  // distance from x to the structure
};

struct GroundTruth {
  std::vector<StructureTruth> structures;
  const StructureTruth* find(const std::string& name) const;
  std::vector<const StructureTruth*> of_dim(int d) const;
};

struct LabeledCloud {
  PointCloud cloud;
  std::vector<std::string> labels;  // one tag per point: mode_k | ring | wall | curve_k | clutter
  GroundTruth truth;
};

/// Four Gaussian blobs at (+-6, +-6), a radius-3 ring about the origin with
/// radial noise, and uniform clutter on [-8, 8]^2.
LabeledCloud gen_modes_ring_2d(int n_per_mode, int n_ring, double noise_sd, int clutter_n,
                               std::uint64_t seed);

struct ModesRingWall3dCounts {
  int per_mode = 250;
  int ring = 1200;
  int wall = 1500;
};

/// Four blobs at (+-5.5, +-5.5, 0), a radius-3.5 ring in the z = -3.5 plane,
/// a 10 x 10 planar wall at z = +3.5 with normal noise, clutter on [-7, 7]^3.
LabeledCloud gen_modes_ring_wall_3d(const ModesRingWall3dCounts& counts, double noise_sd,
                                    int clutter_n, std::uint64_t seed);

/// A half-circle arc (radius 3) and a straight segment crossing it exactly
/// once, with transverse Gaussian noise; clutter is uniform on [-5, 5]^2 but
/// kept off a margin-wide tube around the curves so clutter and curve points
/// have unambiguous ground truth.
LabeledCloud gen_intersecting_curves(int n, double noise_sd, int clutter_n, std::uint64_t seed);

/// Cosmology-style foam: seeds partition [-1, 1]^3; points are placed on the
/// partition's walls (equidistant to the 2 nearest seeds), filaments
/// (equidistant to 3) and nodes (equidistant to 4) by constrained projection
/// of uniform draws, plus uniform clutter for the remaining fraction.
LabeledCloud gen_voronoi_foam(int n_seeds, double frac_node, double frac_filament,
                              double frac_wall, int n_points, double clutter_fraction,
                              std::uint64_t seed);

PointCloud gen_uniform_box(const Box& box, Eigen::Index n, std::uint64_t seed);

void save_truth_json(const GroundTruth& truth, const std::string& path);
GroundTruth load_truth_json(const std::string& path);

}  // namespace ridgehunt
