#include "sisph/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sisph/parallel.hpp"

namespace sisph {

namespace {

double axis(const Vec3& v, int a) { return a == 0 ? v.x : (a == 1 ? v.y : v.z); }

}  // namespace

NeighborGrid NeighborGrid::build(const Field3& positions, const Domain& domain, double cell_size) {
  if (!(cell_size > 0.0)) throw std::invalid_argument("cell size must be positive");
  NeighborGrid g;
  g.domain_ = domain;
  g.positions_ = &positions;
  g.cell_size_ = cell_size;
  const std::size_t n = positions.size();

  std::array<double, 3> lo{}, hi{};
  for (int a = 0; a < 3; ++a) {
    lo[a] = std::numeric_limits<double>::max();
    hi[a] = std::numeric_limits<double>::lowest();
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 p = positions[i];
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], axis(p, a));
      hi[a] = std::max(hi[a], axis(p, a));
    }
  }
  double origin[3];
  std::size_t total = 1;
  for (int a = 0; a < 3; ++a) {
    if (a >= domain.dim || n == 0) {
      origin[a] = n == 0 ? 0.0 : lo[a];
      g.ncell_[a] = 1;
      g.width_[a] = std::numeric_limits<double>::max();
    } else if (domain.periodic(a)) {
      const double len = axis(domain.period, a);
      origin[a] = axis(domain.lo, a);
      g.ncell_[a] = std::max(1, static_cast<int>(std::floor(len / cell_size)));
      g.width_[a] = len / g.ncell_[a];
    } else {
      origin[a] = lo[a];
      g.ncell_[a] = static_cast<int>(std::floor((hi[a] - lo[a]) / cell_size)) + 1;
      g.width_[a] = cell_size;
    }
    total *= static_cast<std::size_t>(g.ncell_[a]);
  }
  // Guard against a sparse cloud blowing up the dense cell array.
  const std::size_t limit = 16 * n + 4096;
  while (total > limit) {
    total = 1;
    for (int a = 0; a < domain.dim; ++a) {
      if (domain.periodic(a)) {
        const double len = axis(domain.period, a);
        g.ncell_[a] = std::max(1, g.ncell_[a] / 2);
        g.width_[a] = len / g.ncell_[a];
      } else {
        g.width_[a] *= 2.0;
        g.ncell_[a] = static_cast<int>(std::floor((hi[a] - lo[a]) / g.width_[a])) + 1;
      }
    }
    for (int a = 0; a < 3; ++a) total *= static_cast<std::size_t>(g.ncell_[a]);
  }
  g.origin_ = {origin[0], origin[1], origin[2]};

  std::vector<std::uint32_t> cell_of_particle(n);
  g.cell_start_.assign(total + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = g.cell_of(positions[i]);
    const auto flat = static_cast<std::uint32_t>(
        c[0] + g.ncell_[0] * (c[1] + static_cast<std::size_t>(g.ncell_[1]) * c[2]));
    cell_of_particle[i] = flat;
    ++g.cell_start_[flat + 1];
  }
  for (std::size_t c = 0; c < total; ++c) g.cell_start_[c + 1] += g.cell_start_[c];
  g.sorted_.resize(n);
  std::vector<std::uint32_t> fill(g.cell_start_.begin(), g.cell_start_.end() - 1);
  for (std::size_t i = 0; i < n; ++i) g.sorted_[fill[cell_of_particle[i]]++] = static_cast<std::uint32_t>(i);
  return g;
}

std::array<int, 3> NeighborGrid::raw_cell(const Vec3& p) const {
  const Vec3 q = domain_.wrap(p);
  std::array<int, 3> c{};
  for (int a = 0; a < 3; ++a) {
    if (ncell_[a] == 1) {
      c[a] = 0;
      continue;
    }
    c[a] = static_cast<int>(std::floor((axis(q, a) - axis(origin_, a)) / width_[a]));
    if (domain_.periodic(a)) c[a] = std::clamp(c[a], 0, ncell_[a] - 1);
  }
  return c;
}

std::array<int, 3> NeighborGrid::cell_of(const Vec3& p) const {
  auto c = raw_cell(p);
  for (int a = 0; a < 3; ++a) c[a] = std::clamp(c[a], 0, ncell_[a] - 1);
  return c;
}

std::vector<std::uint32_t> NeighborGrid::neighbors_within(const Vec3& query, double radius) const {
  if (radius > cell_size_) throw std::invalid_argument("query radius exceeds the grid cell size");
  std::vector<std::uint32_t> out;
  for_each_within(query, radius, [&out](std::uint32_t j) { out.push_back(j); });
  return out;
}

NeighborList build_neighbor_list(const ParticleSet& ps, const Domain& domain, double radius) {
  NeighborList list;
  list.radius = radius;
  const std::size_t n = ps.size();
  list.offsets.assign(n + 1, 0);
  if (n == 0) return list;
  const auto grid = NeighborGrid::build(ps.pos, domain, radius);

  std::vector<std::uint32_t> counts(n);
  parallel_for(n, [&](std::size_t i) {
    std::uint32_t c = 0;
    grid.for_each_within(ps.pos[i], radius, [&c](std::uint32_t) { ++c; });
    counts[i] = c;
  });
  for (std::size_t i = 0; i < n; ++i) list.offsets[i + 1] = list.offsets[i] + counts[i];
  list.indices.resize(list.offsets[n]);
  parallel_for(n, [&](std::size_t i) {
    std::uint32_t* out = list.indices.data() + list.offsets[i];
    grid.for_each_within(ps.pos[i], radius, [&out](std::uint32_t j) { *out++ = j; });
  });
  return list;
}

}  // namespace sisph
