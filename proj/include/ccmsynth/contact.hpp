// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include "ccmsynth/geometry.hpp"
#include "ccmsynth/smoothing.hpp"

namespace ccm {

enum class ContactMode { Mutual, Self };

/// Deformable boundary segments in loop order; segment endpoints are mesh
/// nodes, linear interpolation N1 = (1-xi)/2, N2 = (1+xi)/2 on xi in [-1,1].
/// Loops carry material on the left, so the outward normal is the tangent
/// rotated -90 degrees.
struct SegmentSet {
  std::vector<std::array<int, 2>> nodes;
  std::vector<int> loop;
  std::vector<int> prev, next;  // ring adjacency within the loop
  std::vector<int> loop_base, loop_size;  // per loop id
  int size() const { return static_cast<int>(nodes.size()); }
  /// Segments along the shorter way around the loop; INT_MAX across loops.
  int ring_distance(int a, int b) const;
};
SegmentSet build_segments(const BoundaryChain& boundary);

/// Rigid surfaces discretized into straight segments, counter-clockwise
/// (outward normal = tangent rotated -90 degrees, pointing away from the
/// disk center). Segment count max(16, ceil(2*pi*R/h)).
struct RigidSegmentSet {
  std::vector<Vec2> a, b;
  std::vector<int> surface;
  int size() const { return static_cast<int>(a.size()); }
};
RigidSegmentSet discretize_rigid_surfaces(const std::vector<RigidSurface>& surfaces,
                                          double mean_edge);

struct ClosestPoint {
  double xi = 0.0;   // clamped to [-1, 1]
  Vec2 point;        // x_p on the segment
  Vec2 normal;       // unit outward normal of the master segment
  bool clamped = false;
};
/// Closest-point projection of x_s onto the segment [a, b].
ClosestPoint closest_point(Vec2 x_s, Vec2 a, Vec2 b);

/// Signed normal gap (x_s - x_p).n_p; negative means penetration.
inline double normal_gap(Vec2 x_s, Vec2 x_p, Vec2 n_p) { return dot(x_s - x_p, n_p); }

struct ContactParams {
  double eps_n = 0.0;           // mutual penalty (N/mm^3)
  double eps_s = 0.0;           // self penalty (N/mm^3)
  double g_tol = 0.0;           // non-penetration tolerance (mm)
  double capture_depth = 0.0;   // self-mode deep-gap rejection (mm)
  int ring_exclusion = 2;       // skip masters this close along the loop
  bool fd_stiffness = false;    // finite-difference fallback for k_c
};

struct ContactPair {
  int slave_seg = -1;
  int slave_gp = 0;              // 0 or 1 (two Gauss points per segment)
  int master = -1;               // index into SegmentSet or RigidSegmentSet
  bool master_rigid = false;
  ContactMode mode = ContactMode::Mutual;
  double xi_p = 0.0;
  bool clamped = false;
  Vec2 x_s, x_p, n_p;
  double g_n = 0.0;
  double lambda = 0.0;           // augmented value lambda_old - eps*g_n
};

/// Active pairs plus the per-slave-point multipliers carried across
/// augmentations. Multiplier storage is keyed by slave Gauss point
/// (2 per segment) and mode.
struct ContactState {
  std::vector<double> lambda_old_mutual;  // size 2*n_segments
  std::vector<double> lambda_old_self;
  std::vector<ContactPair> active;
  bool mutual_pairs_exist = false;
  bool self_pairs_exist = false;

  void reset(int n_segments) {
    lambda_old_mutual.assign(2 * n_segments, 0.0);
    lambda_old_self.assign(2 * n_segments, 0.0);
    active.clear();
    mutual_pairs_exist = self_pairs_exist = false;
  }
  /// Max penetration (-g_n)+ over active pairs.
  double max_penetration() const;
  /// Uzawa update: lambda_old <- max(lambda, 0) for active points, 0 else.
  void update_multipliers();
};

/// Slave Gauss points: xi = -1/sqrt(3), +1/sqrt(3), unit weights.
constexpr double kSlaveGaussXi[2] = {-0.57735026918962576, 0.57735026918962576};

Vec2 slave_point(const SegmentSet& segs, const std::vector<Vec2>& pos, int seg, int gp);

/// Active-set detection over all slave Gauss points: nearest master via the
/// global O(n^2) search. Mutual pairs activate when lambda >= 0; self pairs
/// need lambda > 0 and opposing normals, with same-orientation candidates
/// discarded before the nearest-neighbor choice and deep through-material
/// gaps rejected unless the segments actually intersect.
void detect_pairs(const SegmentSet& segs, const std::vector<Vec2>& pos,
                  const RigidSegmentSet& rigid, const ContactParams& params,
                  ContactState& state, int threads = 1);

/// Full-pass force and consistent stiffness of one active pair. Ordering of
/// the 8 local dofs: slave node 1 (x,y), slave node 2, master node 1,
/// master node 2. Rigid masters receive no force; their dof block is zero.
struct PairForce {
  std::array<double, 8> f{};
  std::array<std::array<double, 8>, 8> k{};
};
PairForce contact_force_and_stiffness(const ContactPair& pair, const SegmentSet& segs,
                                      const RigidSegmentSet& rigid,
                                      const std::vector<Vec2>& pos,
                                      const ContactParams& params);

}  // namespace ccm
