#include "sisph/integrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sisph/errors.hpp"
#include "sisph/parallel.hpp"

namespace sisph {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double max_fluid_h(const ParticleSet& ps) {
  double h = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps.tag[i] == Tag::fluid) h = std::max(h, ps.h[i]);
  }
  return h > 0.0 ? h : ps.max_h();
}

double max_fluid_speed(const ParticleSet& ps) {
  double u = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps.tag[i] == Tag::fluid) u = std::max(u, norm(ps.vel[i]));
  }
  return u;
}

}  // namespace

double compute_timestep(const ParticleSet& ps, const SimConfig& cfg) {
  const double h = max_fluid_h(ps);
  double dt = std::numeric_limits<double>::infinity();
  if (cfg.u_ref > 0.0) dt = std::min(dt, 0.25 * h / cfg.u_ref);
  if (cfg.nu > 0.0) dt = std::min(dt, 0.25 * h * h / cfg.nu);
  const double g = norm(cfg.gravity);
  if (g > 0.0) dt = std::min(dt, 0.25 * std::sqrt(h / g));
  if (!std::isfinite(dt) || !(h > 0.0)) throw ConfigError("no timestep criterion applies");
  return dt;
}

double adaptive_timestep(const ParticleSet& ps, double max_f) {
  const double h = max_fluid_h(ps);
  const double umax = max_fluid_speed(ps);
  double dt = std::numeric_limits<double>::infinity();
  if (umax > 0.0) dt = std::min(dt, 0.25 * h / umax);
  if (max_f > 0.0) dt = std::min(dt, 0.25 * std::sqrt(h / max_f));
  if (!std::isfinite(dt) || !(h > 0.0)) throw ConfigError("no adaptive timestep criterion applies");
  return dt;
}

double gtvf_pressure_cap(double rho, double m, double h, double h_factor, int dim, double dt) {
  if (!(dt > 0.0) || !(m > 0.0)) throw std::invalid_argument("gtvf_pressure_cap needs positive dt and mass");
  const double ht = h_factor * h;
  return rho * rho * std::pow(ht, dim + 2) / (m * dt * dt);
}

Field3 gtvf_shift(const ParticleSet& ps, const SphContext& ctx, const SimConfig& cfg, Dests dests,
                  std::span<const double> p0, double dt) {
  const int substeps = cfg.gtvf_substeps;
  const double dtau = dt / substeps;
  Field3 r = ps.pos;
  Field3 vel, force;
  vel.resize(ps.size());
  force.resize(ps.size());
  for (int k = 0; k < substeps; ++k) {
    gtvf_background_force(ps, r, ctx, dests, p0, cfg.h_tilde_factor, force);
    parallel_for(dests.size(), [&](std::size_t n) {
      const std::uint32_t i = dests[n];
      const Vec3 f = force[i];
      r.set(i, r[i] + vel[i] * dtau + f * (0.5 * dtau * dtau));
      vel.set(i, vel[i] + f * dtau);
    });
  }
  Field3 disp;
  disp.resize(ps.size());
  for (std::uint32_t i : dests) {
    const Vec3 d = r[i] - ps.pos[i];
    if (!(norm(d) <= 3.0 * ps.h[i])) {
      std::ostringstream msg;
      msg << "GTVF shift moved particle " << ps.id[i] << " by " << norm(d) << " (> 3h)";
      throw SimulationError(msg.str());
    }
    disp.set(i, d);
  }
  return disp;
}

Simulation::Simulation(ParticleSet ps, Domain domain, SimConfig cfg, WallBcConfig wall_bc,
                       std::optional<OpenBoundaryConfig> open_bc)
    : ps_(std::move(ps)),
      domain_(domain),
      cfg_(cfg),
      wall_bc_(std::move(wall_bc)),
      open_bc_(std::move(open_bc)) {
  cfg_.validate();
  if (ps_.dim() != domain_.dim) throw ConfigError("particle and domain dimensions differ");
  if (ps_.empty()) throw ConfigError("particle set is empty");
  if (cfg_.gtvf_enabled && !(cfg_.pref > 0.0) && !cfg_.pref_from_first_solve)
    throw ConfigError("GTVF needs a positive reference pressure");
  if (open_bc_) open_bc_->validate(ps_.max_h());
  wall_bc_.clamp_negative_pressure = wall_bc_.clamp_negative_pressure || cfg_.clamp_wall_pressure;
  wall_bc_.gravity = cfg_.gravity;
  wall_bc_.ustar_mode = cfg_.ustar_wall_mode;
  pref_ = cfg_.pref;
  ps_.vtrans = ps_.vel;
  ps_.vstar = ps_.vel;
  ps_.pk = ps_.p;
  refresh_neighbors();
  const auto solids = ps_.indices(mask(Tag::solid));
  const SphContext ctx(nbrs_, domain_);
  compute_wall_normals(ps_, ctx, solids);
}

double Simulation::support_radius() const { return QuinticKernel::kSupportFactor * ps_.max_h(); }

double Simulation::neighbor_radius() const { return support_radius(); }

const NeighborList& Simulation::refresh_neighbors() {
  nbrs_ = build_neighbor_list(ps_, domain_, neighbor_radius());
  return nbrs_;
}

StepReport Simulation::advance() {
  double dt = cfg_.dt;
  if (cfg_.dt_policy == TimestepPolicy::adaptive)
    dt = steps_ == 0 || last_max_f_ == 0.0 ? compute_timestep(ps_, cfg_) : adaptive_timestep(ps_, last_max_f_);
  return step(dt);
}

StepReport Simulation::step(double dt) {
  if (!(dt > 0.0)) throw ConfigError("timestep must be positive");
  StepReport report;
  report.dt = dt;
  const std::size_t n = ps_.size();
  forces_.resize(n);
  forces_.zero();

  const auto fluid = ps_.indices(mask(Tag::fluid));
  const auto solids = ps_.indices(mask(Tag::solid));
  const auto unknowns = ps_.indices(mask(Tag::fluid) | mask(Tag::inlet));
  const auto moving = ps_.indices(kMovingTags);

  // Density and free-surface flags at r^n.
  auto t0 = Clock::now();
  refresh_neighbors();
  report.seconds.neighbors += seconds_since(t0);
  t0 = Clock::now();
  {
    const SphContext ctx(nbrs_, domain_);
    summation_density(ps_, ctx, moving);
    detect_free_surface(ps_, cfg_.rho0, cfg_.free_surface_ratio);
  }
  report.seconds.forces += seconds_since(t0);

  // Position predictor.
  const Field3 r_n = ps_.pos;
  const Field3 ut_n = ps_.vtrans;
  for (std::uint32_t i : fluid) ps_.pos.set(i, domain_.wrap(ps_.pos[i] + ps_.vtrans[i] * dt));

  t0 = Clock::now();
  refresh_neighbors();
  report.seconds.neighbors += seconds_since(t0);
  const SphContext ctx(nbrs_, domain_);

  // Non-pressure forces and the intermediate velocity.
  t0 = Clock::now();
  extrapolate_wall_velocity(ps_, ctx, solids, wall_bc_);
  viscous_force(ps_, ctx, fluid, cfg_.nu, forces_.f_visc);
  const TagMask avisc_sources = cfg_.avisc_from_solids ? kAllTags : kMovingTags;
  artificial_viscosity_force(ps_, ctx, fluid, cfg_.alpha, cfg_.c_ref, avisc_sources, forces_.f_avisc);
  if (cfg_.gtvf_enabled) artificial_stress_force(ps_, ctx, fluid, forces_.f_astress);
  for (std::uint32_t i : fluid) forces_.f_body.set(i, cfg_.gravity);
  ps_.vstar = ps_.vel;
  for (std::uint32_t i : fluid) {
    const Vec3 f = forces_.f_visc[i] + forces_.f_avisc[i] + forces_.f_astress[i] + forces_.f_body[i];
    ps_.vstar.set(i, ps_.vel[i] + f * dt);
  }
  report.seconds.forces += seconds_since(t0);

  t0 = Clock::now();
  set_ustar_wall(ps_, ctx, solids, wall_bc_);
  report.seconds.boundaries += seconds_since(t0);

  // Pressure.
  t0 = Clock::now();
  velocity_divergence_rhs(ps_, ctx, unknowns, dt);
  report.ppe = solve_pressure(ps_, ctx, cfg_, wall_bc_, unknowns, solids);
  if (cfg_.pref_policy == ReferencePressurePolicy::internal && cfg_.pref_from_first_solve && !pref_sampled_) {
    double pmax = 0.0;
    for (std::uint32_t i : fluid) pmax = std::max(pmax, ps_.p[i]);
    if (pmax > 0.0) {
      pref_ = 2.0 * pmax;
      pref_sampled_ = true;
    }
  }
  report.seconds.ppe += seconds_since(t0);

  t0 = Clock::now();
  pressure_gradient(ps_, ctx, fluid, cfg_.pgrad_form, forces_.f_p);
  for (std::uint32_t i : fluid) ps_.vel.set(i, ps_.vstar[i] + forces_.f_p[i] * dt);
  report.seconds.forces += seconds_since(t0);

  // Transport velocity from the GTVF shift.
  t0 = Clock::now();
  if (cfg_.gtvf_enabled && pref_ > 0.0) {
    std::vector<double> p0(n, 0.0);
    for (std::uint32_t i : fluid) {
      p0[i] = sisph::reference_pressure(ps_.p[i], cfg_.pref_policy, pref_);
      if (cfg_.gtvf_stability_cap)
        p0[i] = std::min(p0[i], gtvf_pressure_cap(ps_.rho[i], ps_.m[i], ps_.h[i], cfg_.h_tilde_factor, ps_.dim(), dt));
    }
    gtvf_background_force(ps_, ps_.pos, ctx, fluid, p0, cfg_.h_tilde_factor, forces_.f_gtvf);
    const Field3 disp = gtvf_shift(ps_, ctx, cfg_, fluid, p0, dt);
    for (std::uint32_t i : fluid) ps_.vtrans.set(i, ps_.vel[i] + disp[i] * (1.0 / dt));
  } else {
    for (std::uint32_t i : fluid) ps_.vtrans.set(i, ps_.vel[i]);
  }
  report.seconds.gtvf += seconds_since(t0);

  // Position update.
  for (std::uint32_t i : fluid) {
    const Vec3 r = r_n[i] + (ps_.vtrans[i] + ut_n[i]) * (0.5 * dt);
    ps_.pos.set(i, domain_.wrap(r));
  }

  double max_f = 0.0;
  for (std::uint32_t i : fluid) {
    const Vec3 f = forces_.f_p[i] + forces_.f_visc[i] + forces_.f_avisc[i] + forces_.f_astress[i] + forces_.f_body[i];
    max_f = std::max(max_f, norm(f));
  }
  report.max_f = max_f;
  last_max_f_ = max_f;

  t0 = Clock::now();
  if (open_bc_) {
    for (std::size_t i = 0; i < ps_.size(); ++i) {
      if (ps_.tag[i] != Tag::fluid && ps_.tag[i] != Tag::solid) ps_.vtrans.set(i, ps_.vel[i]);
    }
    report.outlet_deleted = update_outlet(ps_, ctx, *open_bc_, dt);
    report.inlet_converted = update_inlet(ps_, *open_bc_, dt);
  }
  report.seconds.boundaries += seconds_since(t0);

  time_ += dt;
  ++steps_;
  report.max_u = max_fluid_speed(ps_);
  if (!ps_.all_finite()) {
    std::ostringstream msg;
    msg << "non-finite particle state at step " << steps_ << " (t = " << time_ << ")";
    throw SimulationError(msg.str());
  }
  return report;
}

}  // namespace sisph
