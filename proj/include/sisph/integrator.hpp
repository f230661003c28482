#pragma once

#include <optional>
#include <vector>

#include "sisph/boundary.hpp"
#include "sisph/config.hpp"
#include "sisph/domain.hpp"
#include "sisph/neighbors.hpp"
#include "sisph/ppe.hpp"
#include "sisph/sph_ops.hpp"

namespace sisph {

struct PhaseTimes {
  double neighbors = 0.0;
  double forces = 0.0;
  double ppe = 0.0;
  double gtvf = 0.0;
  double boundaries = 0.0;
};

struct StepReport {
  double dt = 0.0;
  PpeStats ppe;
  double max_u = 0.0;  // over fluid after the step
  double max_f = 0.0;  // largest total acceleration on a fluid particle
  PhaseTimes seconds;
  std::size_t inlet_converted = 0;
  std::size_t outlet_deleted = 0;
};

/// min(0.25 h/|U|, 0.25 h^2/nu, 0.25 sqrt(h/|g|)) with h the largest fluid
/// smoothing length; bounds with a zero denominator are skipped. Throws
/// ConfigError when none applies.
double compute_timestep(const ParticleSet& ps, const SimConfig& cfg);

/// min(0.25 h/max|u|, 0.25 sqrt(h/max|f|)) over fluid, skipping zero maxima.
/// Throws ConfigError when both vanish.
double adaptive_timestep(const ParticleSet& ps, double max_f);

/// Largest background pressure for which the shift sub-loop is stable over dt:
/// rho h_t^(d+2) / (V dt^2) with h_t = h_factor h and V = m/rho. The shift acts
/// like an undamped spring whose stiffness scales as p0 V/(rho h_t^(d+2)); past
/// omega dt of about pi/2 the displacement overshoots and grows every step.
double gtvf_pressure_cap(double rho, double m, double h, double h_factor, int dim, double dt);

/// Integrates the GTVF background force over cfg.gtvf_substeps sub-steps of
/// dt/K starting from ps.pos with zero shifting velocity. The neighbor list in
/// ctx is not rebuilt. Returns the net displacement of every particle (zero
/// for non-dests). Throws SimulationError if any displacement exceeds 3h.
Field3 gtvf_shift(const ParticleSet& ps, const SphContext& ctx, const SimConfig& cfg, Dests dests,
                  std::span<const double> p0, double dt);

/// One fluid system plus its boundaries, advanced step by step.
class Simulation {
 public:
  /// Validates the configuration, computes wall normals and sets the initial
  /// transport velocity to the velocity.
  Simulation(ParticleSet ps, Domain domain, SimConfig cfg, WallBcConfig wall_bc,
             std::optional<OpenBoundaryConfig> open_bc = std::nullopt);

  /// Advances by dt. Throws SimulationError on non-finite state.
  StepReport step(double dt);
  /// Advances by the timestep chosen by the configured policy.
  StepReport advance();

  double time() const { return time_; }
  std::size_t steps() const { return steps_; }
  double reference_pressure() const { return pref_; }

  ParticleSet& particles() { return ps_; }
  const ParticleSet& particles() const { return ps_; }
  const Domain& domain() const { return domain_; }
  const SimConfig& config() const { return cfg_; }
  const WallBcConfig& wall_bc() const { return wall_bc_; }
  const ForceAccumulators& forces() const { return forces_; }
  const NeighborList& neighbor_list() const { return nbrs_; }
  /// Neighbor list for the current positions (rebuilds it).
  const NeighborList& refresh_neighbors();
  double support_radius() const;

 private:
  double neighbor_radius() const;

  ParticleSet ps_;
  Domain domain_;
  SimConfig cfg_;
  WallBcConfig wall_bc_;
  std::optional<OpenBoundaryConfig> open_bc_;
  ForceAccumulators forces_;
  NeighborList nbrs_;
  double time_ = 0.0;
  std::size_t steps_ = 0;
  double pref_ = 0.0;
  bool pref_sampled_ = false;
  double last_max_f_ = 0.0;
};

}  // namespace sisph
