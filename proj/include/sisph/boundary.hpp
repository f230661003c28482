#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sisph/config.hpp"
#include "sisph/sph_ops.hpp"

namespace sisph {

/// Prescribed motion of one wall body. Solid particles refer to a body by
/// their `body` index; index -1 (or out of range) means a static no-slip wall.
struct WallBody {
  Vec3 velocity{};
  Vec3 acceleration{};
  /// Free-slip wall: the ghost velocity mirrors the fluid instead of reflecting it.
  bool slip = false;
};

struct WallBcConfig {
  bool clamp_negative_pressure = false;
  UStarWallMode ustar_mode = UStarWallMode::slip;
  Vec3 gravity{};
  std::vector<WallBody> bodies;

  const WallBody& body(int index) const;
};

/// Two-stage normals on the solid dests: a raw estimate from the solid
/// neighborhood, discarded when weaker than 1/(4h), then a kernel-weighted
/// smoothing pass. Normals are unit length (pointing into the fluid) or zero.
void compute_wall_normals(ParticleSet& ps, const SphContext& ctx, Dests solids);

/// Shepard extrapolation of fluid pressure onto the solid dests, with the
/// hydrostatic/acceleration correction. Reads and writes `pressure` (indexed
/// by particle), which is either ps.p or the PPE iterate ps.pk.
void extrapolate_wall_pressure(ParticleSet& ps, const SphContext& ctx, Dests solids, const WallBcConfig& bc,
                               std::span<double> pressure);

/// Ghost velocities u_w = 2 u_wall - u_tilde (no-slip) or u_tilde (slip body),
/// u_tilde a Shepard average over fluid with W(r, h/2). The wall-normal
/// component is removed when it points into the solid. Writes ps.vel on solids.
void extrapolate_wall_velocity(ParticleSet& ps, const SphContext& ctx, Dests solids, const WallBcConfig& bc);

/// Wall u* seen by the divergence. noslip: u_wall. slip: u_wall plus the
/// tangential part of (Shepard fluid u* - u_wall). Writes ps.vstar on solids.
void set_ustar_wall(ParticleSet& ps, const SphContext& ctx, Dests solids, const WallBcConfig& bc);

/// Inlet and outlet bands along a flow axis. Coordinates are projections
/// s = dot(x, flow_axis).
struct OpenBoundaryConfig {
  Vec3 flow_axis{1.0, 0.0, 0.0};
  double inlet_start = 0.0;
  double inlet_end = 0.0;  // inlet -> fluid interface
  double outlet_start = 0.0;
  double outlet_end = 0.0;
  std::function<Vec3(const Vec3&)> inlet_profile;

  double bed_length() const { return inlet_end - inlet_start; }
  /// Throws ConfigError if the inlet bed is shorter than the kernel support
  /// 3h or the bands are inverted.
  void validate(double h) const;
};

/// Moves inlet particles with the prescribed profile. Particles crossing the
/// interface turn into fluid and a replacement is injected one bed length
/// upstream. Returns the number converted.
std::size_t update_inlet(ParticleSet& ps, const OpenBoundaryConfig& cfg, double dt);

/// Retags fluid entering the outlet band (freezing u and p), advects outlet
/// particles along the flow axis with the Shepard fluid axial velocity
/// (falling back to the frozen speed kept in aux) and deletes particles past
/// the outlet end. Returns the number deleted.
std::size_t update_outlet(ParticleSet& ps, const SphContext& ctx, const OpenBoundaryConfig& cfg, double dt);

}  // namespace sisph
