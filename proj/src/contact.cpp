// ccmsynth — synthesis of contact-aided compliant mechanisms
// SPDX-License-Identifier: Apache-2.0
#include "ccmsynth/contact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ccmsynth/errors.hpp"
#include "ccmsynth/parallel.hpp"

namespace ccm {

SegmentSet build_segments(const BoundaryChain& boundary) {
  SegmentSet s;
  int base = 0;
  for (int l = 0; l < static_cast<int>(boundary.loops.size()); ++l) {
    const auto& loop = boundary.loops[l];
    const int m = loop.size();
    s.loop_base.push_back(base);
    s.loop_size.push_back(m);
    for (int k = 0; k < m; ++k) {
      s.nodes.push_back({loop.nodes[k], loop.nodes[(k + 1) % m]});
      s.loop.push_back(l);
      s.prev.push_back(base + (k + m - 1) % m);
      s.next.push_back(base + (k + 1) % m);
    }
    base += m;
  }
  return s;
}

int SegmentSet::ring_distance(int a, int b) const {
  if (loop[a] != loop[b]) return std::numeric_limits<int>::max();
  const int m = loop_size[loop[a]];
  const int d = std::abs(a - b);
  return std::min(d, m - d);
}

RigidSegmentSet discretize_rigid_surfaces(const std::vector<RigidSurface>& surfaces,
                                          double mean_edge) {
  RigidSegmentSet r;
  for (int si = 0; si < static_cast<int>(surfaces.size()); ++si) {
    const RigidSurface& s = surfaces[si];
    int n = 16;
    if (mean_edge > 0.0)
      n = std::max(16, static_cast<int>(std::ceil(2.0 * M_PI * s.radius / mean_edge)));
    for (int k = 0; k < n; ++k) {
      const double t0 = 2.0 * M_PI * k / n;
      const double t1 = 2.0 * M_PI * (k + 1) / n;
      r.a.push_back(s.center + Vec2{s.radius * std::cos(t0), s.radius * std::sin(t0)});
      r.b.push_back(s.center + Vec2{s.radius * std::cos(t1), s.radius * std::sin(t1)});
      r.surface.push_back(si);
    }
  }
  return r;
}

ClosestPoint closest_point(Vec2 x_s, Vec2 a, Vec2 b) {
  const Vec2 half = (b - a) * 0.5;
  const Vec2 mid = (a + b) * 0.5;
  const double len2 = norm2(half);
  if (len2 == 0.0) throw InvalidArgument("zero-length contact segment");
  ClosestPoint cp;
  double xi = dot(x_s - mid, half) / len2;
  cp.clamped = xi < -1.0 || xi > 1.0;
  cp.xi = std::clamp(xi, -1.0, 1.0);
  cp.point = mid + half * cp.xi;
  cp.normal = rot270(half / std::sqrt(len2));
  return cp;
}

Vec2 slave_point(const SegmentSet& segs, const std::vector<Vec2>& pos, int seg, int gp) {
  const double xi = kSlaveGaussXi[gp];
  const Vec2 a = pos[segs.nodes[seg][0]];
  const Vec2 b = pos[segs.nodes[seg][1]];
  return a * (0.5 * (1.0 - xi)) + b * (0.5 * (1.0 + xi));
}

namespace {

// Even-odd ray-crossing parity of point p against all deformed boundary
// segments. Even parity (air or doubly-covered overlap) = true.
bool even_crossing_parity(const SegmentSet& segs, const std::vector<Vec2>& pos, Vec2 p) {
  bool even = true;
  for (int m = 0; m < segs.size(); ++m) {
    const Vec2 a = pos[segs.nodes[m][0]];
    const Vec2 b = pos[segs.nodes[m][1]];
    if ((b.y > p.y) != (a.y > p.y)) {
      const double xint = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
      if (p.x < xint) even = !even;
    }
  }
  return even;
}

}  // namespace

double ContactState::max_penetration() const {
  double pen = 0.0;
  for (const ContactPair& p : active) pen = std::max(pen, -p.g_n);
  return pen;
}

void ContactState::update_multipliers() {
  std::vector<double> next_mutual(lambda_old_mutual.size(), 0.0);
  std::vector<double> next_self(lambda_old_self.size(), 0.0);
  for (const ContactPair& p : active) {
    const int id = 2 * p.slave_seg + p.slave_gp;
    if (p.mode == ContactMode::Mutual)
      next_mutual[id] = std::max(p.lambda, 0.0);
    else
      next_self[id] = std::max(p.lambda, 0.0);
  }
  lambda_old_mutual = std::move(next_mutual);
  lambda_old_self = std::move(next_self);
}

void detect_pairs(const SegmentSet& segs, const std::vector<Vec2>& pos,
                  const RigidSegmentSet& rigid, const ContactParams& params,
                  ContactState& state, int threads) {
  state.active.clear();
  state.mutual_pairs_exist = state.self_pairs_exist = false;
  const int n_seg = segs.size();
  if (static_cast<int>(state.lambda_old_mutual.size()) != 2 * n_seg)
    state.reset(n_seg);

  // Per slave Gauss point, independent of all others; parallel bodies fill
  // their own slot and the active list is merged in slave order afterwards.
  struct GpPairs {
    bool has_mutual = false, has_self = false;
    ContactPair mutual, self;
  };
  std::vector<GpPairs> found(2 * static_cast<std::size_t>(n_seg));

  parallel_for(2 * n_seg, threads, [&](int gp_id) {
    const int seg = gp_id / 2;
    const int gp = gp_id % 2;
    {
      const Vec2 sa = pos[segs.nodes[seg][0]];
      const Vec2 sb = pos[segs.nodes[seg][1]];
      const Vec2 n_s = rot270(normalized(sb - sa));
      const Vec2 x_s = slave_point(segs, pos, seg, gp);

      // Mutual: nearest rigid segment.
      if (rigid.size() > 0) {
        double best_d = std::numeric_limits<double>::max();
        int best = -1;
        ClosestPoint best_cp;
        for (int m = 0; m < rigid.size(); ++m) {
          const ClosestPoint cp = closest_point(x_s, rigid.a[m], rigid.b[m]);
          const double d = norm(x_s - cp.point);
          if (d < best_d) {
            best_d = d;
            best = m;
            best_cp = cp;
          }
        }
        const double g = normal_gap(x_s, best_cp.point, best_cp.normal);
        const double lambda = state.lambda_old_mutual[gp_id] - params.eps_n * g;
        if (lambda >= 0.0) {
          ContactPair p;
          p.slave_seg = seg;
          p.slave_gp = gp;
          p.master = best;
          p.master_rigid = true;
          p.mode = ContactMode::Mutual;
          p.xi_p = best_cp.xi;
          p.clamped = best_cp.clamped;
          p.x_s = x_s;
          p.x_p = best_cp.point;
          p.n_p = best_cp.normal;
          p.g_n = g;
          p.lambda = lambda;
          found[gp_id].mutual = p;
          found[gp_id].has_mutual = true;
        }
      }

      // Self: nearest deformable segment with opposing normal, excluding the
      // slave's own and ring-adjacent segments. Same-orientation candidates
      // are discarded up front. A penetrating candidate must connect two
      // genuinely interpenetrating surfaces: the midpoint of x_s -> x_p then
      // lies in a doubly-covered overlap (even crossing parity); odd parity
      // means the connector passes through solid material (e.g. the two
      // faces of a thin member) and the candidate is rejected.
      struct Candidate {
        double d;
        int m;
        ClosestPoint cp;
        double g;
      };
      std::vector<Candidate> candidates;
      for (int m = 0; m < n_seg; ++m) {
        if (segs.ring_distance(seg, m) <= params.ring_exclusion) continue;
        const Vec2 ma = pos[segs.nodes[m][0]];
        const Vec2 mb = pos[segs.nodes[m][1]];
        const ClosestPoint cp = closest_point(x_s, ma, mb);
        if (dot(n_s, cp.normal) >= 0.0) continue;
        const double g = normal_gap(x_s, cp.point, cp.normal);
        if (g < -params.capture_depth && !segments_intersect(sa, sb, ma, mb)) continue;
        candidates.push_back({norm(x_s - cp.point), m, cp, g});
      }
      std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return a.d != b.d ? a.d < b.d : a.m < b.m;
      });
      int best = -1;
      ClosestPoint best_cp;
      double best_g = 0.0;
      for (const Candidate& c : candidates) {
        if (c.g < -1e-9 && !even_crossing_parity(segs, pos, (x_s + c.cp.point) * 0.5)) continue;
        best = c.m;
        best_cp = c.cp;
        best_g = c.g;
        break;
      }
      if (best >= 0) {
        const double lambda = state.lambda_old_self[gp_id] - params.eps_s * best_g;
        if (lambda > 0.0 && dot(n_s, best_cp.normal) < 0.0) {
          ContactPair p;
          p.slave_seg = seg;
          p.slave_gp = gp;
          p.master = best;
          p.master_rigid = false;
          p.mode = ContactMode::Self;
          p.xi_p = best_cp.xi;
          p.clamped = best_cp.clamped;
          p.x_s = x_s;
          p.x_p = best_cp.point;
          p.n_p = best_cp.normal;
          p.g_n = best_g;
          p.lambda = lambda;
          found[gp_id].self = p;
          found[gp_id].has_self = true;
        }
      }
    }
  });

  for (const GpPairs& f : found) {
    if (f.has_mutual) {
      state.active.push_back(f.mutual);
      state.mutual_pairs_exist = true;
    }
    if (f.has_self) {
      state.active.push_back(f.self);
      state.self_pairs_exist = true;
    }
  }
}

namespace {

struct PairGeometry {
  Vec2 xs1, xs2, xm1, xm2;
  double Ns1, Ns2;   // slave shape functions at the Gauss point
  double eps;
  double lambda_old;
};

// Force at perturbed nodal positions, used by the finite-difference
// stiffness fallback. dofs: (xs1, xs2, xm1, xm2) x (x, y).
void eval_pair_force(const PairGeometry& g, std::array<double, 8>& f) {
  const Vec2 half = (g.xm2 - g.xm1) * 0.5;
  const Vec2 mid = (g.xm1 + g.xm2) * 0.5;
  const double la2 = norm2(half);
  const Vec2 n = rot270(half / std::sqrt(la2));
  const Vec2 x_s = g.xs1 * g.Ns1 + g.xs2 * g.Ns2;
  const double xi = std::clamp(dot(x_s - mid, half) / la2, -1.0, 1.0);
  const Vec2 x_p = mid + half * xi;
  const double gn = dot(x_s - x_p, n);
  const double lambda = g.lambda_old - g.eps * gn;
  const double ls = norm(g.xs2 - g.xs1);
  const double w = 0.5 * ls;  // unit Gauss weight
  const double N1p = 0.5 * (1.0 - xi);
  const double N2p = 0.5 * (1.0 + xi);
  const Vec2 fs1 = n * (-w * g.Ns1 * lambda);
  const Vec2 fs2 = n * (-w * g.Ns2 * lambda);
  const Vec2 fm1 = n * (w * N1p * lambda);
  const Vec2 fm2 = n * (w * N2p * lambda);
  f = {fs1.x, fs1.y, fs2.x, fs2.y, fm1.x, fm1.y, fm2.x, fm2.y};
}

}  // namespace

PairForce contact_force_and_stiffness(const ContactPair& pair, const SegmentSet& segs,
                                      const RigidSegmentSet& rigid,
                                      const std::vector<Vec2>& pos,
                                      const ContactParams& params) {
  PairForce out;
  const double xi_s = kSlaveGaussXi[pair.slave_gp];
  PairGeometry g;
  g.xs1 = pos[segs.nodes[pair.slave_seg][0]];
  g.xs2 = pos[segs.nodes[pair.slave_seg][1]];
  if (pair.master_rigid) {
    g.xm1 = rigid.a[pair.master];
    g.xm2 = rigid.b[pair.master];
  } else {
    g.xm1 = pos[segs.nodes[pair.master][0]];
    g.xm2 = pos[segs.nodes[pair.master][1]];
  }
  g.Ns1 = 0.5 * (1.0 - xi_s);
  g.Ns2 = 0.5 * (1.0 + xi_s);
  g.eps = (pair.mode == ContactMode::Mutual) ? params.eps_n : params.eps_s;
  const int gp_id = 2 * pair.slave_seg + pair.slave_gp;
  (void)gp_id;
  g.lambda_old = pair.lambda + g.eps * pair.g_n;  // recover lambda_old

  // Force at the current state.
  const Vec2 half = (g.xm2 - g.xm1) * 0.5;
  const Vec2 mid = (g.xm1 + g.xm2) * 0.5;
  const double la2 = norm2(half);
  const double la = std::sqrt(la2);
  const Vec2 tau = half / la;
  const Vec2 n = rot270(tau);
  const Vec2 x_s = g.xs1 * g.Ns1 + g.xs2 * g.Ns2;
  const double xi = pair.xi_p;
  const Vec2 x_p = mid + half * xi;
  const double gn = dot(x_s - x_p, n);
  const double lambda = g.lambda_old - g.eps * gn;
  const Vec2 dxs_seg = g.xs2 - g.xs1;
  const double ls = norm(dxs_seg);
  const Vec2 tau_s = dxs_seg / ls;
  const double w = 0.5 * ls;
  const double N1p = 0.5 * (1.0 - xi);
  const double N2p = 0.5 * (1.0 + xi);

  const Vec2 fs1 = n * (-w * g.Ns1 * lambda);
  const Vec2 fs2 = n * (-w * g.Ns2 * lambda);
  // a rigid, motionless master receives no force
  const Vec2 fm1 = pair.master_rigid ? Vec2{} : n * (w * N1p * lambda);
  const Vec2 fm2 = pair.master_rigid ? Vec2{} : n * (w * N2p * lambda);
  out.f = {fs1.x, fs1.y, fs2.x, fs2.y, fm1.x, fm1.y, fm2.x, fm2.y};

  const bool master_moves = !pair.master_rigid;

  if (params.fd_stiffness) {
    // Central finite differences of the force vector.
    const double h = 1e-7 * std::max(1.0, la);
    for (int dof = 0; dof < 8; ++dof) {
      if (dof >= 4 && !master_moves) continue;
      PairGeometry gp = g, gm = g;
      double* comps_p[8] = {&gp.xs1.x, &gp.xs1.y, &gp.xs2.x, &gp.xs2.y,
                            &gp.xm1.x, &gp.xm1.y, &gp.xm2.x, &gp.xm2.y};
      double* comps_m[8] = {&gm.xs1.x, &gm.xs1.y, &gm.xs2.x, &gm.xs2.y,
                            &gm.xm1.x, &gm.xm1.y, &gm.xm2.x, &gm.xm2.y};
      *comps_p[dof] += h;
      *comps_m[dof] -= h;
      std::array<double, 8> fp, fm;
      eval_pair_force(gp, fp);
      eval_pair_force(gm, fm);
      for (int r = 0; r < (master_moves ? 8 : 4); ++r)
        out.k[r][dof] = (fp[r] - fm[r]) / (2.0 * h);
    }
    return out;
  }

  // Analytic directional derivatives, one unit dof at a time.
  for (int dof = 0; dof < 8; ++dof) {
    if (dof >= 4 && !master_moves) continue;
    Vec2 dxs1{}, dxs2{}, dxm1{}, dxm2{};
    Vec2* target[4] = {&dxs1, &dxs2, &dxm1, &dxm2};
    if (dof % 2 == 0) target[dof / 2]->x = 1.0;
    else target[dof / 2]->y = 1.0;

    const Vec2 dxs = dxs1 * g.Ns1 + dxs2 * g.Ns2;
    const Vec2 da = (dxm2 - dxm1) * 0.5;
    const Vec2 dn = tau * (-dot(n, da) / la);
    double dxi = 0.0;
    if (!pair.clamped) {
      const Vec2 sum_ndxm = dxm1 * N1p + dxm2 * N2p;
      dxi = (dot(dxs - sum_ndxm, half) + gn * dot(n, da)) / la2;
    }
    const Vec2 dx_p = dxm1 * N1p + dxm2 * N2p + half * dxi;
    const double dg = dot(n, dxs - dx_p) + dot(x_s - x_p, dn);
    const double dlambda = -g.eps * dg;
    const double dN1p = -0.5 * dxi;
    const double dN2p = 0.5 * dxi;
    const double dls = dot(tau_s, dxs2 - dxs1);
    const double dw = 0.5 * dls;

    const Vec2 dfs1 = -(n * (dw * g.Ns1 * lambda + w * g.Ns1 * dlambda) + dn * (w * g.Ns1 * lambda));
    const Vec2 dfs2 = -(n * (dw * g.Ns2 * lambda + w * g.Ns2 * dlambda) + dn * (w * g.Ns2 * lambda));
    const Vec2 dfm1 = n * (dw * N1p * lambda + w * dN1p * lambda + w * N1p * dlambda) + dn * (w * N1p * lambda);
    const Vec2 dfm2 = n * (dw * N2p * lambda + w * dN2p * lambda + w * N2p * dlambda) + dn * (w * N2p * lambda);
    const double col[8] = {dfs1.x, dfs1.y, dfs2.x, dfs2.y, dfm1.x, dfm1.y, dfm2.x, dfm2.y};
    for (int r = 0; r < (master_moves ? 8 : 4); ++r) out.k[r][dof] = col[r];
  }
  return out;
}

}  // namespace ccm
