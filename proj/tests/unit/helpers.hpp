#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sisph/domain.hpp"
#include "sisph/harness/cases.hpp"
#include "sisph/neighbors.hpp"
#include "sisph/particles.hpp"
#include "sisph/sph_ops.hpp"

namespace sisph::test {

/// Periodic n x n fluid lattice on [0, n dx)^2.
struct Lattice {
  ParticleSet ps{2};
  Domain domain;
  NeighborList nbrs;
  std::vector<std::uint32_t> all;

  Lattice(int n, double dx, double rho0 = 1.0, double h_ratio = 1.0) {
    const double L = n * dx;
    domain = Domain{2, {0.0, 0.0, 0.0}, {L, L, 0.0}};
    ps = create_particles(harness::lattice({0.0, 0.0}, {L, L}, dx, 2), dx, rho0, h_ratio, 2);
    refresh();
  }

  void refresh() {
    nbrs = build_neighbor_list(ps, domain, 3.0 * ps.max_h());
    all = ps.indices(kAllTags);
  }

  SphContext ctx() const { return SphContext(nbrs, domain); }

  std::size_t centre() const {
    const double L = domain.period.x;
    std::size_t best = 0;
    double dmin = 1e300;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const Vec3 d = ps.pos[i] - Vec3{0.5 * L, 0.5 * L, 0.0};
      if (dot(d, d) < dmin) {
        dmin = dot(d, d);
        best = i;
      }
    }
    return best;
  }
};

/// Uniform random points in a box.
inline std::vector<Vec3> random_cloud(std::size_t n, const Vec3& lo, const Vec3& hi, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec3> pts(n);
  for (auto& p : pts) {
    p.x = lo.x + (hi.x - lo.x) * u(rng);
    if (dim > 1) p.y = lo.y + (hi.y - lo.y) * u(rng);
    if (dim > 2) p.z = lo.z + (hi.z - lo.z) * u(rng);
  }
  return pts;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace sisph::test
