#include "sisph/ppe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sisph/parallel.hpp"

namespace sisph {

void compute_coefficients(ParticleSet& ps, const SphContext& ctx, Dests dests, double eta) {
  simd::PpeCoefficientArgs a;
  a.geom = make_geometry(ps, ps.pos, ctx.domain);
  a.nbrs = make_neighbors(ctx.nbrs);
  a.dests = dests;
  a.m = ps.m.data();
  a.rho = ps.rho.data();
  a.pk = ps.pk.data();
  a.eta = eta;
  a.diag = ps.diag.data();
  a.odiag = ps.odiag.data();
  simd::loops().ppe_coefficients(a);
}

void sor_update(ParticleSet& ps, Dests dests, double omega) {
  parallel_for(dests.size(), [&](std::size_t k) {
    const std::uint32_t i = dests[k];
    if (ps.free_surface[i] || ps.diag[i] == 0.0) {
      ps.p[i] = 0.0;
      return;
    }
    ps.p[i] = omega * (ps.rhs[i] - ps.odiag[i]) / ps.diag[i] + (1.0 - omega) * ps.pk[i];
  });
}

double convergence_metric(std::span<const double> p_new, std::span<const double> p_old, double lambda,
                          Dests dests) {
  double change = 0.0, total = 0.0;
  for (std::uint32_t i : dests) {
    change += std::abs(p_new[i] - p_old[i]);
    total += std::abs(p_new[i]);
  }
  const double denom = std::max(lambda, total);
  return denom > 0.0 ? change / denom : 0.0;
}

double convergence_metric(std::span<const double> p_new, std::span<const double> p_old, double lambda) {
  if (p_new.size() != p_old.size()) throw std::invalid_argument("pressure arrays differ in length");
  double change = 0.0, total = 0.0;
  for (std::size_t i = 0; i < p_new.size(); ++i) {
    change += std::abs(p_new[i] - p_old[i]);
    total += std::abs(p_new[i]);
  }
  const double denom = std::max(lambda, total);
  return denom > 0.0 ? change / denom : 0.0;
}

double pressure_scale(const ParticleSet& ps, Dests dests) {
  double lambda = 0.0;
  for (std::uint32_t i : dests) {
    if (ps.diag[i] != 0.0) lambda = std::max(lambda, std::abs(ps.rhs[i] / ps.diag[i]));
  }
  return lambda;
}

PpeStats solve_pressure(ParticleSet& ps, const SphContext& ctx, const SimConfig& cfg, const WallBcConfig& wall_bc,
                        Dests unknowns, Dests solids) {
  PpeStats stats;
  ps.pk = ps.p;
  for (int k = 1; k <= cfg.max_ppe_iters; ++k) {
    extrapolate_wall_pressure(ps, ctx, solids, wall_bc, ps.pk);
    compute_coefficients(ps, ctx, unknowns);
    if (k == 1) stats.lambda = pressure_scale(ps, unknowns);
    sor_update(ps, unknowns, cfg.omega);
    stats.final_residual = convergence_metric(ps.p, ps.pk, stats.lambda, unknowns);
    stats.iterations = k;
    for (std::uint32_t i : unknowns) ps.pk[i] = ps.p[i];
    if (k >= cfg.min_ppe_iters && stats.final_residual < cfg.epsilon) {
      stats.converged = true;
      break;
    }
  }
  extrapolate_wall_pressure(ps, ctx, solids, wall_bc, ps.p);
  for (std::uint32_t i : solids) ps.pk[i] = ps.p[i];
  return stats;
}

}  // namespace sisph
