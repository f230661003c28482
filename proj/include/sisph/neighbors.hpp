#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sisph/domain.hpp"
#include "sisph/particles.hpp"

namespace sisph {

/// Uniform background grid for fixed-radius queries. Periodic axes use the
/// minimum-image convention, so no ghost copies are made.
class NeighborGrid {
 public:
  NeighborGrid() = default;

  /// Indexes every position. Throws std::invalid_argument for cell_size <= 0.
  static NeighborGrid build(const Field3& positions, const Domain& domain, double cell_size);

  double cell_size() const { return cell_size_; }
  std::size_t size() const { return sorted_.size(); }

  /// Every indexed point within `radius` (minimum-image distance) of `query`,
  /// including a coincident point. Throws std::invalid_argument if radius > cell_size.
  std::vector<std::uint32_t> neighbors_within(const Vec3& query, double radius) const;

  /// Calls f(index) for every point within radius of query.
  template <typename F>
  void for_each_within(const Vec3& query, double radius, F&& f) const;

 private:
  std::array<int, 3> cell_of(const Vec3& p) const;
  std::array<int, 3> raw_cell(const Vec3& p) const;

  Domain domain_{};
  const Field3* positions_ = nullptr;
  double cell_size_ = 0.0;
  Vec3 origin_{};
  std::array<double, 3> width_{1.0, 1.0, 1.0};
  std::array<int, 3> ncell_{1, 1, 1};
  std::vector<std::uint32_t> cell_start_;
  std::vector<std::uint32_t> sorted_;
};

/// Compressed per-particle neighbor lists (CSR), rebuilt once per step and
/// reused by every summation until the next rebuild.
struct NeighborList {
  std::vector<std::uint32_t> offsets;  // size n+1
  std::vector<std::uint32_t> indices;
  double radius = 0.0;

  std::span<const std::uint32_t> of(std::size_t i) const {
    return {indices.data() + offsets[i], indices.data() + offsets[i + 1]};
  }
  std::size_t particles() const { return offsets.empty() ? 0 : offsets.size() - 1; }
};

/// All pairs within `radius` for every particle of the set.
NeighborList build_neighbor_list(const ParticleSet& ps, const Domain& domain, double radius);

template <typename F>
void NeighborGrid::for_each_within(const Vec3& query, double radius, F&& f) const {
  if (sorted_.empty()) return;
  const double r2 = radius * radius;
  const auto c = raw_cell(query);
  // Candidate cell ranges along each axis (periodic axes may wrap).
  std::array<std::array<int, 3>, 3> cand{};
  std::array<int, 3> ncand{};
  for (int a = 0; a < 3; ++a) {
    int k = 0;
    for (int o = -1; o <= 1; ++o) {
      int v = c[a] + o;
      if (domain_.periodic(a)) {
        v = ((v % ncell_[a]) + ncell_[a]) % ncell_[a];
        bool dup = false;
        for (int t = 0; t < k; ++t) dup = dup || cand[a][t] == v;
        if (dup) continue;
      } else if (v < 0 || v >= ncell_[a]) {
        continue;
      }
      cand[a][k++] = v;
    }
    ncand[a] = k;
  }
  for (int iz = 0; iz < ncand[2]; ++iz) {
    for (int iy = 0; iy < ncand[1]; ++iy) {
      for (int ix = 0; ix < ncand[0]; ++ix) {
        const std::size_t cell =
            static_cast<std::size_t>(cand[0][ix]) +
            static_cast<std::size_t>(ncell_[0]) *
                (static_cast<std::size_t>(cand[1][iy]) + static_cast<std::size_t>(ncell_[1]) * cand[2][iz]);
        for (std::uint32_t s = cell_start_[cell]; s < cell_start_[cell + 1]; ++s) {
          const std::uint32_t j = sorted_[s];
          const Vec3 d = domain_.separation(query, (*positions_)[j]);
          if (dot(d, d) <= r2) f(j);
        }
      }
    }
  }
}

}  // namespace sisph
