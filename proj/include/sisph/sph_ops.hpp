#pragma once

#include <cstdint>
#include <span>

#include "sisph/config.hpp"
#include "sisph/domain.hpp"
#include "sisph/kernel.hpp"
#include "sisph/neighbors.hpp"
#include "sisph/particles.hpp"
#include "sisph/simd/loops.hpp"

namespace sisph {

/// Per-particle accelerations, one field per momentum-equation term.
struct ForceAccumulators {
  Field3 f_p, f_visc, f_avisc, f_astress, f_body, f_gtvf;

  void resize(std::size_t n);
  void zero();
};

/// Everything a summation needs besides the particle data: the frozen
/// neighbor list, the periodic box and the kernel. Dest index lists pick the
/// particles that receive a result; entries outside them are left untouched.
struct SphContext {
  const NeighborList& nbrs;
  const Domain& domain;
  QuinticKernel kernel;

  SphContext(const NeighborList& n, const Domain& d) : nbrs(n), domain(d), kernel(d.dim) {}
};

using Dests = std::span<const std::uint32_t>;

/// Geometry view over `positions` and ps.h for the SIMD loops.
simd::Geometry make_geometry(const ParticleSet& ps, const Field3& positions, const Domain& domain);
simd::Neighbors make_neighbors(const NeighborList& nl);

/// rho_i = sum_j m_j W_ij over every neighbor (fluid and solid alike).
void summation_density(ParticleSet& ps, const SphContext& ctx, Dests dests);

/// Flags fluid particles with rho/rho0 below `ratio` as free-surface; clears
/// the flag on every other particle.
void detect_free_surface(ParticleSet& ps, double rho0, double ratio);

/// f_i = -sum_j m_j (p_i/rho_i^2 + p_j/rho_j^2) gradW_ij
void pressure_gradient_symm(const ParticleSet& ps, const SphContext& ctx, Dests dests, Field3& out);

/// f_i = -sum_j m_j/(rho_i rho_j) (p_j - p_i) gradW_ij
void pressure_gradient_asymm(const ParticleSet& ps, const SphContext& ctx, Dests dests, Field3& out);

void pressure_gradient(const ParticleSet& ps, const SphContext& ctx, Dests dests, PressureGradientForm form,
                       Field3& out);

/// f_i = sum_j m_j 4 nu/(rho_i+rho_j) (r_ij.gradW_ij)/(r_ij^2 + eta h_ij^2) u_ij, u_ij = u_i - u_j.
/// Solid sources contribute through their ghost velocity (stored in vel).
void viscous_force(const ParticleSet& ps, const SphContext& ctx, Dests dests, double nu, Field3& out,
                   double eta = 0.01);

/// f_i = -sum_j m_j Pi_ij gradW_ij with Pi_ij = -alpha h_ij c phi_ij / rho_bar_ij on approaching
/// pairs, phi_ij = u_ij.r_ij/(r_ij^2 + 0.01 h_ij^2), rho_bar_ij = (rho_i + rho_j)/2.
void artificial_viscosity_force(const ParticleSet& ps, const SphContext& ctx, Dests dests, double alpha,
                                double c_ref, TagMask sources, Field3& out);

/// f_i = sum_j m_j (A_i/rho_i^2 + A_j/rho_j^2) . gradW_ij with A = rho u (x) (u_tilde - u).
void artificial_stress_force(const ParticleSet& ps, const SphContext& ctx, Dests dests, Field3& out);

/// f_i = -(p0_i/rho_i^2) sum_j m_j gradW(r_ij, h_factor h_ij), evaluated at `positions`.
/// Weighting by the destination density keeps the shift diffusive at every wavelength.
/// p0 is indexed by particle.
void gtvf_background_force(const ParticleSet& ps, const Field3& positions, const SphContext& ctx, Dests dests,
                           std::span<const double> p0, double h_factor, Field3& out);

/// external: min(10|p|, p_ref); internal: p_ref.
double reference_pressure(double p, ReferencePressurePolicy policy, double p_ref);

/// rhs_i = sum_j -(m_j/(rho_j dt)) (u*_i - u*_j).gradW_ij. Throws std::invalid_argument for dt <= 0.
void velocity_divergence_rhs(ParticleSet& ps, const SphContext& ctx, Dests dests, double dt);

}  // namespace sisph
