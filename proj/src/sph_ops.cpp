#include "sisph/sph_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sisph/parallel.hpp"

namespace sisph {

namespace {

// Calls f(j, r_ij, h_ij) for every neighbor j of every dest i and stores the
// returned vector sum in out[i].
template <typename PairFn>
void gather_vec(const ParticleSet& ps, const SphContext& ctx, Dests dests, Field3& out, PairFn&& f) {
  parallel_for(dests.size(), [&](std::size_t k) {
    const std::uint32_t i = dests[k];
    const Vec3 ri = ps.pos[i];
    Vec3 sum{};
    for (std::uint32_t j : ctx.nbrs.of(i)) {
      const Vec3 rij = ctx.domain.separation(ri, ps.pos[j]);
      const double hij = 0.5 * (ps.h[i] + ps.h[j]);
      sum += f(i, j, rij, hij);
    }
    out.set(i, sum);
  });
}

}  // namespace

void ForceAccumulators::resize(std::size_t n) {
  for (auto* f : {&f_p, &f_visc, &f_avisc, &f_astress, &f_body, &f_gtvf}) f->resize(n);
}

void ForceAccumulators::zero() {
  for (auto* f : {&f_p, &f_visc, &f_avisc, &f_astress, &f_body, &f_gtvf}) f->fill(0.0);
}

simd::Geometry make_geometry(const ParticleSet& ps, const Field3& positions, const Domain& domain) {
  simd::Geometry g;
  g.x = positions.x.data();
  g.y = positions.y.data();
  g.z = positions.z.data();
  g.h = ps.h.data();
  g.period = domain.period;
  g.dim = domain.dim;
  return g;
}

simd::Neighbors make_neighbors(const NeighborList& nl) { return {nl.offsets.data(), nl.indices.data()}; }

void summation_density(ParticleSet& ps, const SphContext& ctx, Dests dests) {
  simd::DensityArgs a;
  a.geom = make_geometry(ps, ps.pos, ctx.domain);
  a.nbrs = make_neighbors(ctx.nbrs);
  a.dests = dests;
  a.m = ps.m.data();
  a.rho = ps.rho.data();
  simd::loops().density(a);
}

void detect_free_surface(ParticleSet& ps, double rho0, double ratio) {
  for (std::size_t i = 0; i < ps.size(); ++i)
    ps.free_surface[i] = ps.tag[i] == Tag::fluid && ps.rho[i] / rho0 < ratio ? 1 : 0;
}

void pressure_gradient_symm(const ParticleSet& ps, const SphContext& ctx, Dests dests, Field3& out) {
  gather_vec(ps, ctx, dests, out, [&](std::uint32_t i, std::uint32_t j, const Vec3& rij, double hij) {
    const double ai = ps.p[i] / (ps.rho[i] * ps.rho[i]);
    const double aj = ps.p[j] / (ps.rho[j] * ps.rho[j]);
    return ctx.kernel.gradient(rij, hij) * (-ps.m[j] * (ai + aj));
  });
}

void pressure_gradient_asymm(const ParticleSet& ps, const SphContext& ctx, Dests dests, Field3& out) {
  gather_vec(ps, ctx, dests, out, [&](std::uint32_t i, std::uint32_t j, const Vec3& rij, double hij) {
    const double dp = ps.p[j] - ps.p[i];
    if (dp == 0.0) return Vec3{};
    return ctx.kernel.gradient(rij, hij) * (-ps.m[j] / (ps.rho[i] * ps.rho[j]) * dp);
  });
}

void pressure_gradient(const ParticleSet& ps, const SphContext& ctx, Dests dests, PressureGradientForm form,
                       Field3& out) {
  if (form == PressureGradientForm::symm)
    pressure_gradient_symm(ps, ctx, dests, out);
  else
    pressure_gradient_asymm(ps, ctx, dests, out);
}

void viscous_force(const ParticleSet& ps, const SphContext& ctx, Dests dests, double nu, Field3& out, double eta) {
  if (nu == 0.0) {
    for (std::uint32_t i : dests) out.set(i, {});
    return;
  }
  gather_vec(ps, ctx, dests, out, [&](std::uint32_t i, std::uint32_t j, const Vec3& rij, double hij) {
    const Vec3 uij = ps.vel[i] - ps.vel[j];
    const Vec3 dw = ctx.kernel.gradient(rij, hij);
    const double fac = ps.m[j] * 4.0 * nu / (ps.rho[i] + ps.rho[j]) * dot(rij, dw) / (dot(rij, rij) + eta * hij * hij);
    return uij * fac;
  });
}

void artificial_viscosity_force(const ParticleSet& ps, const SphContext& ctx, Dests dests, double alpha,
                                double c_ref, TagMask sources, Field3& out) {
  if (alpha == 0.0) {
    for (std::uint32_t i : dests) out.set(i, {});
    return;
  }
  gather_vec(ps, ctx, dests, out, [&](std::uint32_t i, std::uint32_t j, const Vec3& rij, double hij) {
    if (!(sources & mask(ps.tag[j]))) return Vec3{};
    const Vec3 uij = ps.vel[i] - ps.vel[j];
    const double ur = dot(uij, rij);
    if (ur >= 0.0) return Vec3{};
    const double phi = ur / (dot(rij, rij) + 0.01 * hij * hij);
    const double rho_bar = 0.5 * (ps.rho[i] + ps.rho[j]);
    const double pi_ij = -alpha * hij * c_ref * phi / rho_bar;
    return ctx.kernel.gradient(rij, hij) * (-ps.m[j] * pi_ij);
  });
}

void artificial_stress_force(const ParticleSet& ps, const SphContext& ctx, Dests dests, Field3& out) {
  gather_vec(ps, ctx, dests, out, [&](std::uint32_t i, std::uint32_t j, const Vec3& rij, double hij) {
    const Vec3 dw = ctx.kernel.gradient(rij, hij);
    // (A/rho^2).gradW = u ((u_tilde - u).gradW) / rho
    const Vec3 ti = ps.vel[i] * (dot(ps.vtrans[i] - ps.vel[i], dw) / ps.rho[i]);
    const Vec3 tj = ps.vel[j] * (dot(ps.vtrans[j] - ps.vel[j], dw) / ps.rho[j]);
    return (ti + tj) * ps.m[j];
  });
}

void gtvf_background_force(const ParticleSet& ps, const Field3& positions, const SphContext& ctx, Dests dests,
                           std::span<const double> p0, double h_factor, Field3& out) {
  if (p0.size() != ps.size()) throw std::invalid_argument("p0 must have one entry per particle");
  simd::GtvfArgs a;
  a.geom = make_geometry(ps, positions, ctx.domain);
  a.nbrs = make_neighbors(ctx.nbrs);
  a.dests = dests;
  a.m = ps.m.data();
  a.rho = ps.rho.data();
  a.p0 = p0.data();
  a.h_factor = h_factor;
  a.fx = out.x.data();
  a.fy = out.y.data();
  a.fz = out.z.data();
  simd::loops().gtvf_force(a);
}

double reference_pressure(double p, ReferencePressurePolicy policy, double p_ref) {
  if (policy == ReferencePressurePolicy::internal) return p_ref;
  return std::min(10.0 * std::abs(p), p_ref);
}

void velocity_divergence_rhs(ParticleSet& ps, const SphContext& ctx, Dests dests, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("timestep must be positive");
  simd::DivergenceArgs a;
  a.geom = make_geometry(ps, ps.pos, ctx.domain);
  a.nbrs = make_neighbors(ctx.nbrs);
  a.dests = dests;
  a.m = ps.m.data();
  a.rho = ps.rho.data();
  a.us = ps.vstar.x.data();
  a.vs = ps.vstar.y.data();
  a.ws = ps.vstar.z.data();
  a.dt = dt;
  a.rhs = ps.rhs.data();
  simd::loops().divergence(a);
}

}  // namespace sisph
