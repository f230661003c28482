#pragma once

#include <span>

#include "sisph/boundary.hpp"
#include "sisph/config.hpp"
#include "sisph/sph_ops.hpp"

namespace sisph {

struct PpeStats {
  int iterations = 0;
  double final_residual = 0.0;
  double lambda = 0.0;
  bool converged = false;
};

/// diag_i = sum_j fac_ij and odiag_i = sum_j -fac_ij pk_j with
/// fac_ij = 4 m_j/(rho_i (rho_i+rho_j)) (r_ij.gradW_ij)/(r_ij^2 + eta h_ij^2).
void compute_coefficients(ParticleSet& ps, const SphContext& ctx, Dests dests, double eta = 0.01);

/// Relaxed Jacobi update p = omega (rhs - odiag)/diag + (1 - omega) pk on the
/// dests. Free-surface particles and particles with diag == 0 get p = 0.
void sor_update(ParticleSet& ps, Dests dests, double omega);

/// sum |p_new - p_old| / max(lambda, sum |p_new|) over the dests.
double convergence_metric(std::span<const double> p_new, std::span<const double> p_old, double lambda,
                          Dests dests);
/// Same, over every entry.
double convergence_metric(std::span<const double> p_new, std::span<const double> p_old, double lambda);

/// max |rhs_i / diag_i| over dests with diag_i != 0.
double pressure_scale(const ParticleSet& ps, Dests dests);

/// Iterates wall extrapolation -> coefficients -> update until the relative
/// change drops below cfg.epsilon (at least cfg.min_ppe_iters and at most
/// cfg.max_ppe_iters sweeps). Starts from the current ps.p; ps.rhs must be set.
/// `unknowns` are the particles solved for (fluid and inlet); `solids` get the
/// extrapolated wall pressure every sweep and once more at exit.
PpeStats solve_pressure(ParticleSet& ps, const SphContext& ctx, const SimConfig& cfg, const WallBcConfig& wall_bc,
                        Dests unknowns, Dests solids);

}  // namespace sisph
