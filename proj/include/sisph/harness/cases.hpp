#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sisph/boundary.hpp"
#include "sisph/config.hpp"
#include "sisph/domain.hpp"
#include "sisph/particles.hpp"

namespace sisph::harness {

enum class MetricSet { taylor_green, cavity, square_patch, dam_break, cylinder };

/// A fully built benchmark: particles, domain, scheme settings and the
/// physical parameters the metrics need.
struct CaseSpec {
  std::string name;
  ParticleSet particles{2};
  Domain domain;
  SimConfig config;
  WallBcConfig wall_bc;
  std::optional<OpenBoundaryConfig> open_bc;
  double t_end = 1.0;
  double output_interval = 0.1;
  double snapshot_interval = 0.5;
  MetricSet metrics = MetricSet::taylor_green;

  // Physical parameters (unused ones stay zero).
  double U = 0.0;    // velocity scale
  double L = 0.0;    // length scale
  double Re = 0.0;
  double b = 0.0;    // Taylor-Green decay rate
  double dx = 0.0;
  double spin = 0.0; // square-patch angular velocity
  double h_w = 0.0;  // dam-break water height
  double D = 0.0;    // cylinder diameter
  int cylinder_body = -1;
  // Container interior for wall-penetration checks (open top).
  bool has_container = false;
  Vec3 container_lo{};
  Vec3 container_hi{};
};

/// Overrides taken from the command line. Unset fields keep the case default.
struct CaseOptions {
  std::optional<double> re;
  std::optional<int> n;
  std::optional<double> dx;
  std::optional<double> tol;
  std::optional<double> omega;
  std::optional<int> k_gtvf;
  std::optional<double> alpha;
  std::optional<PressureGradientForm> pgrad;
  std::optional<UStarWallMode> ustar_wall;
  std::optional<double> dt;
  bool adaptive = false;
  std::optional<double> t_end;
  // Taylor-Green starts from a lattice jittered by up to dx/5 unless disabled.
  bool perturb = true;
  std::uint64_t seed = 0;
};

const std::vector<std::string>& case_names();
bool is_case(const std::string& name);

/// Builds the named case and applies the overrides. Throws ConfigError for an
/// unknown name or an invalid override.
CaseSpec make_case(const std::string& name, const CaseOptions& opts = {});

CaseSpec taylor_green_case(double re, int n, bool perturb, std::uint64_t seed = 0);
CaseSpec cavity_case(double re, int n);
CaseSpec square_patch_case(int n, int series_order = 39);
CaseSpec dam_break_2d_case(double dx);
CaseSpec dam_break_3d_case(double dx);
CaseSpec cylinder_case(double dx);

/// Exact Taylor-Green fields.
Vec3 taylor_green_velocity(double x, double y, double t, double U, double b);
double taylor_green_pressure(double x, double y, double t, double U, double b);
double taylor_green_decay_rate(double re);

/// Initial square-patch pressure for a patch centred on the origin, summing
/// odd m, n up to `order`.
double square_patch_pressure(double x, double y, double L, double spin, double rho, int order);

/// Cell-centred lattice points of the box [lo, hi) with spacing dx.
std::vector<Vec3> lattice(const Vec3& lo, const Vec3& hi, double dx, int dim);

}  // namespace sisph::harness
