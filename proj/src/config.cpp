#include "sisph/config.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "sisph/errors.hpp"

namespace sisph {

namespace {

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string vec(const Vec3& v) { return num(v.x) + "," + num(v.y) + "," + num(v.z); }

}  // namespace

std::string to_string(PressureGradientForm f) { return f == PressureGradientForm::symm ? "symm" : "asymm"; }
std::string to_string(ReferencePressurePolicy p) {
  return p == ReferencePressurePolicy::internal ? "internal" : "external";
}
std::string to_string(UStarWallMode m) { return m == UStarWallMode::slip ? "slip" : "noslip"; }
std::string to_string(TimestepPolicy p) { return p == TimestepPolicy::fixed ? "fixed" : "adaptive"; }

void SimConfig::validate() const {
  if (!(omega > 0.0 && omega <= 1.0)) throw ConfigError("omega must lie in (0, 1]");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (gtvf_substeps < 1) throw ConfigError("GTVF sub-step count must be at least 1");
  if (alpha < 0.0) throw ConfigError("alpha must be non-negative");
  if (!(rho0 > 0.0)) throw ConfigError("rho0 must be positive");
  if (nu < 0.0) throw ConfigError("viscosity must be non-negative");
  if (min_ppe_iters < 1 || max_ppe_iters < min_ppe_iters)
    throw ConfigError("PPE iteration bounds are inconsistent");
  if (h_tilde_factor <= 0.0 || h_tilde_factor > 1.0)
    throw ConfigError("h_tilde_factor must lie in (0, 1]");
  if (dt_policy == TimestepPolicy::fixed && !(dt > 0.0)) throw ConfigError("fixed timestep must be positive");
}

std::map<std::string, std::string> SimConfig::to_key_values() const {
  return {
      {"epsilon", num(epsilon)},
      {"omega", num(omega)},
      {"gtvf_substeps", std::to_string(gtvf_substeps)},
      {"alpha", num(alpha)},
      {"c_ref", num(c_ref)},
      {"pgrad_form", to_string(pgrad_form)},
      {"pref_policy", to_string(pref_policy)},
      {"pref", num(pref)},
      {"pref_from_first_solve", pref_from_first_solve ? "true" : "false"},
      {"h_tilde_factor", num(h_tilde_factor)},
      {"ustar_wall_mode", to_string(ustar_wall_mode)},
      {"dt_policy", to_string(dt_policy)},
      {"dt", num(dt)},
      {"rho0", num(rho0)},
      {"nu", num(nu)},
      {"gravity", vec(gravity)},
      {"u_ref", num(u_ref)},
      {"max_ppe_iters", std::to_string(max_ppe_iters)},
      {"min_ppe_iters", std::to_string(min_ppe_iters)},
      {"free_surface_ratio", num(free_surface_ratio)},
      {"clamp_wall_pressure", clamp_wall_pressure ? "true" : "false"},
      {"avisc_from_solids", avisc_from_solids ? "true" : "false"},
      {"gtvf_enabled", gtvf_enabled ? "true" : "false"},
      {"gtvf_stability_cap", gtvf_stability_cap ? "true" : "false"},
  };
}

}  // namespace sisph
