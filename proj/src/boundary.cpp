#include "sisph/boundary.hpp"

#include <cmath>

#include "sisph/errors.hpp"
#include "sisph/parallel.hpp"

namespace sisph {

namespace {

constexpr TagMask kFluidLike = kMovingTags;

Vec3 unit_or_zero(const Vec3& v) {
  const double n = norm(v);
  return n > 0.0 ? v * (1.0 / n) : Vec3{};
}

}  // namespace

const WallBody& WallBcConfig::body(int index) const {
  static const WallBody kStatic{};
  if (index < 0 || static_cast<std::size_t>(index) >= bodies.size()) return kStatic;
  return bodies[static_cast<std::size_t>(index)];
}

void compute_wall_normals(ParticleSet& ps, const SphContext& ctx, Dests solids) {
  Field3 raw;
  raw.resize(ps.size());
  parallel_for(solids.size(), [&](std::size_t k) {
    const std::uint32_t i = solids[k];
    Vec3 n{};
    for (std::uint32_t j : ctx.nbrs.of(i)) {
      if (ps.tag[j] != Tag::solid) continue;
      const Vec3 rij = ctx.domain.separation(ps.pos[i], ps.pos[j]);
      n -= ctx.kernel.gradient(rij, 0.5 * (ps.h[i] + ps.h[j])) * (ps.m[j] / ps.rho[j]);
    }
    raw.set(i, norm(n) < 1.0 / (4.0 * ps.h[i]) ? Vec3{} : unit_or_zero(n));
  });
  parallel_for(solids.size(), [&](std::size_t k) {
    const std::uint32_t i = solids[k];
    Vec3 n{};
    for (std::uint32_t j : ctx.nbrs.of(i)) {
      if (ps.tag[j] != Tag::solid) continue;
      const Vec3 rij = ctx.domain.separation(ps.pos[i], ps.pos[j]);
      n += raw[j] * (ps.m[j] / ps.rho[j] * ctx.kernel.value(norm(rij), 0.5 * (ps.h[i] + ps.h[j])));
    }
    ps.normal.set(i, unit_or_zero(n));
  });
}

void extrapolate_wall_pressure(ParticleSet& ps, const SphContext& ctx, Dests solids, const WallBcConfig& bc,
                               std::span<double> pressure) {
  parallel_for(solids.size(), [&](std::size_t k) {
    const std::uint32_t i = solids[k];
    const Vec3 accel = bc.gravity - bc.body(ps.body[i]).acceleration;
    double wsum = 0.0, psum = 0.0;
    Vec3 rsum{};
    for (std::uint32_t j : ctx.nbrs.of(i)) {
      if (!(kFluidLike & mask(ps.tag[j]))) continue;
      const Vec3 rwf = ctx.domain.separation(ps.pos[i], ps.pos[j]);
      const double w = ctx.kernel.value(norm(rwf), 0.5 * (ps.h[i] + ps.h[j]));
      wsum += w;
      psum += pressure[j] * w;
      rsum += rwf * (ps.rho[j] * w);
    }
    double pw = wsum > 0.0 ? (psum + dot(accel, rsum)) / wsum : 0.0;
    if (bc.clamp_negative_pressure && pw < 0.0) pw = 0.0;
    pressure[i] = pw;
  });
}

void extrapolate_wall_velocity(ParticleSet& ps, const SphContext& ctx, Dests solids, const WallBcConfig& bc) {
  parallel_for(solids.size(), [&](std::size_t k) {
    const std::uint32_t i = solids[k];
    // Half-h Shepard average; deep ghost layers out of its reach fall back to the full-h average.
    double wsum = 0.0, wsum_full = 0.0;
    Vec3 usum{}, usum_full{};
    for (std::uint32_t j : ctx.nbrs.of(i)) {
      if (!(kFluidLike & mask(ps.tag[j]))) continue;
      const Vec3 rij = ctx.domain.separation(ps.pos[i], ps.pos[j]);
      const double r = norm(rij);
      const double hij = 0.5 * (ps.h[i] + ps.h[j]);
      const double w = ctx.kernel.value(r, 0.5 * hij);
      const double wf = ctx.kernel.value(r, hij);
      wsum += w;
      usum += ps.vel[j] * w;
      wsum_full += wf;
      usum_full += ps.vel[j] * wf;
    }
    Vec3 u_tilde{};
    if (wsum > 0.0)
      u_tilde = usum * (1.0 / wsum);
    else if (wsum_full > 0.0)
      u_tilde = usum_full * (1.0 / wsum_full);
    const WallBody& body = bc.body(ps.body[i]);
    Vec3 uw = body.slip ? u_tilde : body.velocity * 2.0 - u_tilde;
    const Vec3 n = ps.normal[i];
    const double un = dot(uw, n);
    if (un < 0.0) uw -= n * un;
    ps.vel.set(i, uw);
  });
}

void set_ustar_wall(ParticleSet& ps, const SphContext& ctx, Dests solids, const WallBcConfig& bc) {
  parallel_for(solids.size(), [&](std::size_t k) {
    const std::uint32_t i = solids[k];
    const Vec3 uwall = bc.body(ps.body[i]).velocity;
    if (bc.ustar_mode == UStarWallMode::noslip) {
      ps.vstar.set(i, uwall);
      return;
    }
    double wsum = 0.0;
    Vec3 usum{};
    for (std::uint32_t j : ctx.nbrs.of(i)) {
      if (!(kFluidLike & mask(ps.tag[j]))) continue;
      const Vec3 rij = ctx.domain.separation(ps.pos[i], ps.pos[j]);
      const double w = ctx.kernel.value(norm(rij), 0.5 * (ps.h[i] + ps.h[j]));
      wsum += w;
      usum += ps.vstar[j] * w;
    }
    Vec3 rel = wsum > 0.0 ? usum * (1.0 / wsum) - uwall : Vec3{};
    const Vec3 n = ps.normal[i];
    rel -= n * dot(rel, n);
    ps.vstar.set(i, uwall + rel);
  });
}

void OpenBoundaryConfig::validate(double h) const {
  if (!(norm(flow_axis) > 0.0)) throw ConfigError("flow axis must be non-zero");
  if (bed_length() < 3.0 * h) throw ConfigError("inlet bed is shorter than the kernel support");
  if (!(outlet_end > outlet_start)) throw ConfigError("outlet band is empty");
  if (!(outlet_start >= inlet_end)) throw ConfigError("outlet band must lie downstream of the inlet");
}

std::size_t update_inlet(ParticleSet& ps, const OpenBoundaryConfig& cfg, double dt) {
  if (dt == 0.0) return 0;
  const Vec3 axis = unit_or_zero(cfg.flow_axis);
  const std::size_t n = ps.size();
  std::size_t converted = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ps.tag[i] != Tag::inlet) continue;
    const Vec3 u = cfg.inlet_profile ? cfg.inlet_profile(ps.pos[i]) : ps.vel[i];
    ps.vel.set(i, u);
    ps.vtrans.set(i, u);
    ps.pos.set(i, ps.pos[i] + u * dt);
    if (dot(ps.pos[i], axis) < cfg.inlet_end) continue;
    ps.tag[i] = Tag::fluid;
    ++converted;
    const Vec3 x_new = ps.pos[i] - axis * cfg.bed_length();
    const std::size_t k = ps.add(x_new, ps.m[i], ps.h[i], ps.rho[i], Tag::inlet);
    const Vec3 u_new = cfg.inlet_profile ? cfg.inlet_profile(x_new) : u;
    ps.vel.set(k, u_new);
    ps.vtrans.set(k, u_new);
    ps.vstar.set(k, u_new);
    ps.p[k] = ps.p[i];
    ps.pk[k] = ps.p[i];
  }
  return converted;
}

std::size_t update_outlet(ParticleSet& ps, const SphContext& ctx, const OpenBoundaryConfig& cfg, double dt) {
  const Vec3 axis = unit_or_zero(cfg.flow_axis);
  const std::size_t n = ps.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (ps.tag[i] == Tag::fluid && dot(ps.pos[i], axis) >= cfg.outlet_start) {
      ps.tag[i] = Tag::outlet;
      ps.free_surface[i] = 0;
      ps.aux[i] = dot(ps.vel[i], axis);
    }
  }
  // Advection speeds are gathered before any outlet particle moves.
  std::vector<double> speed(n, 0.0);
  const bool have_list = ctx.nbrs.particles() == n;
  parallel_for(n, [&](std::size_t i) {
    if (ps.tag[i] != Tag::outlet) return;
    double wsum = 0.0, usum = 0.0;
    if (have_list) {
      for (std::uint32_t j : ctx.nbrs.of(i)) {
        if (ps.tag[j] != Tag::fluid) continue;
        const Vec3 rij = ctx.domain.separation(ps.pos[i], ps.pos[j]);
        const double w = ctx.kernel.value(norm(rij), 0.5 * (ps.h[i] + ps.h[j]));
        wsum += w;
        usum += dot(ps.vel[j], axis) * w;
      }
    }
    speed[i] = wsum > 0.0 ? usum / wsum : ps.aux[i];
  });
  std::vector<std::uint8_t> drop(n, 0);
  std::size_t deleted = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ps.tag[i] != Tag::outlet) continue;
    ps.aux[i] = speed[i];
    ps.pos.set(i, ps.pos[i] + axis * (speed[i] * dt));
    if (dot(ps.pos[i], axis) > cfg.outlet_end) {
      drop[i] = 1;
      ++deleted;
    }
  }
  if (deleted > 0) ps.remove(drop);
  return deleted;
}

}  // namespace sisph
