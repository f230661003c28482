#pragma once

#include <span>
#include <vector>

#include "sisph/domain.hpp"
#include "sisph/neighbors.hpp"
#include "sisph/particles.hpp"

namespace sisph::harness {

struct TgErrors {
  double umax = 0.0;
  double l1_vel = 0.0;
  double p_l1 = 0.0;
};

/// Decay (max |u|), velocity-magnitude L1 error and mean-removed pressure
/// error against the exact Taylor-Green solution at time t, over fluid.
/// Throws std::domain_error when the exact velocity sum vanishes.
TgErrors tg_errors(const ParticleSet& ps, double t, double U, double b);

/// Shepard interpolation of particle velocity (fluid and solid ghosts) at
/// the sample points.
std::vector<Vec3> sample_velocity(const ParticleSet& ps, const Domain& domain, std::span<const Vec3> points);

struct CenterlineProfiles {
  std::vector<double> y, u;  // u along x = L/2
  std::vector<double> x, v;  // v along y = L/2
};

/// Velocity profiles through the centre of the unit cavity at the given
/// sample coordinates.
CenterlineProfiles cavity_profiles(const ParticleSet& ps, const Domain& domain, std::span<const double> ys,
                                   std::span<const double> xs, double L = 1.0);

/// Reference centreline data (loaded from the bundled data files).
struct ReferenceProfiles {
  std::vector<double> y, u;
  std::vector<double> x, v;
};
ReferenceProfiles load_ghia_re100();

/// Root-mean-square deviation of the simulated profiles from the reference,
/// pooled over both centrelines and scaled by U.
double profile_rms(const ParticleSet& ps, const Domain& domain, const ReferenceProfiles& ref, double U);

/// Largest fluid coordinate along `axis` among fluid particles within 2 dx of
/// the floor (coordinate `vertical` below 2 dx).
double toe_position(const ParticleSet& ps, double dx, int axis = 0, int vertical = 1);

/// Total force from the fluid on the solid particles of `body`:
/// sum (V_i^2 + V_j^2) [-p_ij gradW + eta_ij u_ij (r_ij.gradW)/(r_ij^2 + 0.01 h^2)].
Vec3 solid_force(const ParticleSet& ps, const NeighborList& nl, const Domain& domain, int body, double nu);

/// 2F/(rho U^2 D) for each component.
Vec3 force_coefficients(const Vec3& force, double rho, double U, double D);

}  // namespace sisph::harness
