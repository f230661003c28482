#pragma once

#include <map>
#include <string>

#include "sisph/vec3.hpp"

namespace sisph {

enum class PressureGradientForm { symm, asymm };
enum class ReferencePressurePolicy { internal, external };
enum class UStarWallMode { slip, noslip };
enum class TimestepPolicy { fixed, adaptive };

/// Scheme parameters shared by every case.
struct SimConfig {
  double epsilon = 0.01;  // PPE relative-change tolerance
  double omega = 0.5;     // SOR blending factor
  int gtvf_substeps = 10;
  double alpha = 0.0;  // artificial viscosity coefficient
  double c_ref = 10.0; // reference sound speed used by artificial viscosity
  PressureGradientForm pgrad_form = PressureGradientForm::symm;
  ReferencePressurePolicy pref_policy = ReferencePressurePolicy::external;
  double pref = 0.0;
  /// Internal flows only: sample pref = 2 max(p) after the first step's solve.
  bool pref_from_first_solve = false;
  double h_tilde_factor = 0.5;
  UStarWallMode ustar_wall_mode = UStarWallMode::slip;
  TimestepPolicy dt_policy = TimestepPolicy::fixed;
  double dt = 0.0;  // fixed step, used when dt_policy == fixed
  double rho0 = 1.0;
  double nu = 0.0;
  Vec3 gravity{};
  double u_ref = 0.0;  // reference speed for the fixed CFL bound
  int max_ppe_iters = 1000;
  int min_ppe_iters = 2;
  double free_surface_ratio = 0.8;
  bool clamp_wall_pressure = false;
  bool avisc_from_solids = false;
  bool gtvf_enabled = true;
  /// Caps p0 at the value where the shift sub-loop stays stable for the step
  /// (see gtvf_pressure_cap).
  bool gtvf_stability_cap = true;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;

  /// Every field as key=value strings (run manifest).
  std::map<std::string, std::string> to_key_values() const;
};

std::string to_string(PressureGradientForm f);
std::string to_string(ReferencePressurePolicy p);
std::string to_string(UStarWallMode m);
std::string to_string(TimestepPolicy p);

}  // namespace sisph
