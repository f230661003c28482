#include "sisph/harness/cases.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sisph/errors.hpp"
#include "sisph/integrator.hpp"

namespace sisph::harness {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kGhostLayers = 4;

// Number of lattice cells covering a length; the geometry snaps to it.
int cells(double length, double dx) { return std::max(1, static_cast<int>(std::llround(length / dx))); }

void set_velocity(ParticleSet& ps, std::size_t i, const Vec3& u) {
  ps.vel.set(i, u);
  ps.vtrans.set(i, u);
  ps.vstar.set(i, u);
}

void check_dx(double dx) {
  if (!(dx > 0.0)) throw ConfigError("particle spacing must be positive");
}

}  // namespace

const std::vector<std::string>& case_names() {
  static const std::vector<std::string> names{"taylor-green", "cavity",       "square-patch",
                                              "dam-break-2d", "dam-break-3d", "cylinder"};
  return names;
}

bool is_case(const std::string& name) {
  const auto& n = case_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

std::vector<Vec3> lattice(const Vec3& lo, const Vec3& hi, double dx, int dim) {
  const int nx = cells(hi.x - lo.x, dx);
  const int ny = dim >= 2 ? cells(hi.y - lo.y, dx) : 1;
  const int nz = dim >= 3 ? cells(hi.z - lo.z, dx) : 1;
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(nx) * ny * nz);
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        pts.push_back({lo.x + (i + 0.5) * dx, dim >= 2 ? lo.y + (j + 0.5) * dx : 0.0,
                       dim >= 3 ? lo.z + (k + 0.5) * dx : 0.0});
      }
    }
  }
  return pts;
}

double taylor_green_decay_rate(double re) { return -8.0 * kPi * kPi / re; }

Vec3 taylor_green_velocity(double x, double y, double t, double U, double b) {
  const double e = U * std::exp(b * t);
  return {-e * std::cos(2.0 * kPi * x) * std::sin(2.0 * kPi * y), e * std::sin(2.0 * kPi * x) * std::cos(2.0 * kPi * y),
          0.0};
}

double taylor_green_pressure(double x, double y, double t, double U, double b) {
  return -U * U * std::exp(2.0 * b * t) * (std::cos(4.0 * kPi * x) + std::cos(4.0 * kPi * y)) / 4.0;
}

double square_patch_pressure(double x, double y, double L, double spin, double rho, int order) {
  const double xs = x + 0.5 * L;
  const double ys = y + 0.5 * L;
  double sum = 0.0;
  for (int m = 1; m <= order; m += 2) {
    const double sx = std::sin(m * kPi * xs / L);
    for (int n = 1; n <= order; n += 2) {
      const double kx = m * kPi / L;
      const double ky = n * kPi / L;
      const double coef = -32.0 * spin * spin / (m * n * kPi * kPi) / (ky * ky + kx * kx);
      sum += coef * sx * std::sin(n * kPi * ys / L);
    }
  }
  return rho * sum;
}

CaseSpec taylor_green_case(double re, int n, bool perturb, std::uint64_t seed) {
  if (n < 10) throw ConfigError("Taylor-Green needs n >= 10");
  if (!(re > 0.0)) throw ConfigError("Reynolds number must be positive");
  CaseSpec c;
  c.name = "taylor-green";
  c.metrics = MetricSet::taylor_green;
  c.U = 1.0;
  c.L = 1.0;
  c.Re = re;
  c.b = taylor_green_decay_rate(re);
  c.dx = c.L / n;
  c.domain = Domain{2, {0.0, 0.0, 0.0}, {c.L, c.L, 0.0}};

  const auto pts = lattice({0.0, 0.0}, {c.L, c.L}, c.dx, 2);
  c.particles = create_particles(pts, c.dx, 1.0, 1.0, 2);
  auto& ps = c.particles;
  if (perturb) {
    perturb_positions(ps, c.dx / 5.0, seed);
    for (std::size_t i = 0; i < ps.size(); ++i) ps.pos.set(i, c.domain.wrap(ps.pos[i]));
  }
  for (std::size_t i = 0; i < ps.size(); ++i) {
    set_velocity(ps, i, taylor_green_velocity(ps.pos.x[i], ps.pos.y[i], 0.0, c.U, c.b));
    ps.p[i] = taylor_green_pressure(ps.pos.x[i], ps.pos.y[i], 0.0, c.U, c.b);
  }

  auto& cfg = c.config;
  cfg.rho0 = 1.0;
  cfg.nu = c.U * c.L / re;
  cfg.u_ref = c.U;
  cfg.c_ref = 10.0 * c.U;
  cfg.pgrad_form = PressureGradientForm::asymm;
  cfg.pref_policy = ReferencePressurePolicy::internal;
  cfg.pref = cfg.rho0 * cfg.c_ref * cfg.c_ref;
  cfg.h_tilde_factor = 1.0;
  cfg.dt = compute_timestep(ps, cfg);
  c.t_end = 2.0;
  c.output_interval = 0.05;
  c.snapshot_interval = 0.5;
  return c;
}

CaseSpec cavity_case(double re, int n) {
  if (n < 10) throw ConfigError("cavity needs n >= 10");
  if (!(re > 0.0)) throw ConfigError("Reynolds number must be positive");
  CaseSpec c;
  c.name = "cavity";
  c.metrics = MetricSet::cavity;
  c.U = 1.0;
  c.L = 1.0;
  c.Re = re;
  c.dx = c.L / n;
  c.domain = Domain{2, {}, {}};
  const double dx = c.dx;

  c.particles = create_particles(lattice({0.0, 0.0}, {c.L, c.L}, dx, 2), dx, 1.0, 1.0, 2);
  const double g = kGhostLayers * dx;
  std::vector<Vec3> lid, walls;
  for (const Vec3& p : lattice({-g, -g}, {c.L + g, c.L + g}, dx, 2)) {
    if (p.x > 0.0 && p.x < c.L && p.y > 0.0 && p.y < c.L) continue;
    (p.y > c.L ? lid : walls).push_back(p);
  }
  append_particles(c.particles, lid, dx, 1.0, 1.0, Tag::solid, 0);
  append_particles(c.particles, walls, dx, 1.0, 1.0, Tag::solid, 1);
  c.wall_bc.bodies = {WallBody{{c.U, 0.0, 0.0}, {}, false}, WallBody{}};

  auto& cfg = c.config;
  cfg.rho0 = 1.0;
  cfg.nu = c.U * c.L / re;
  cfg.u_ref = c.U;
  cfg.c_ref = 10.0 * c.U;
  cfg.pgrad_form = PressureGradientForm::symm;
  cfg.pref_policy = ReferencePressurePolicy::internal;
  cfg.pref_from_first_solve = true;
  cfg.h_tilde_factor = 1.0;
  cfg.epsilon = 0.01;
  cfg.dt = compute_timestep(c.particles, cfg);
  c.t_end = 10.0;
  c.output_interval = 0.1;
  c.snapshot_interval = 2.0;
  return c;
}

CaseSpec square_patch_case(int n, int series_order) {
  if (n < 10) throw ConfigError("square patch needs n >= 10");
  if (series_order < 1) throw ConfigError("series order must be positive");
  CaseSpec c;
  c.name = "square-patch";
  c.metrics = MetricSet::square_patch;
  c.L = 1.0;
  c.spin = 1.0;
  c.U = c.spin * c.L / std::sqrt(2.0);
  c.dx = c.L / n;
  c.domain = Domain{2, {}, {}};
  const double half = 0.5 * c.L;
  c.particles = create_particles(lattice({-half, -half}, {half, half}, c.dx, 2), c.dx, 1.0, 1.3, 2);
  auto& ps = c.particles;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double x = ps.pos.x[i], y = ps.pos.y[i];
    set_velocity(ps, i, {c.spin * y, -c.spin * x, 0.0});
    ps.p[i] = square_patch_pressure(x, y, c.L, c.spin, 1.0, series_order);
  }
  auto& cfg = c.config;
  cfg.rho0 = 1.0;
  cfg.u_ref = c.U;
  cfg.c_ref = 10.0 * c.U;
  cfg.alpha = 0.15;
  cfg.pgrad_form = PressureGradientForm::asymm;
  cfg.pref_policy = ReferencePressurePolicy::external;
  cfg.pref = cfg.rho0 * cfg.c_ref * cfg.c_ref;
  cfg.h_tilde_factor = 0.5;
  cfg.clamp_wall_pressure = true;
  cfg.epsilon = 0.01;
  cfg.dt = compute_timestep(ps, cfg);
  c.t_end = 3.0;
  c.output_interval = 0.1;
  c.snapshot_interval = 0.5;
  return c;
}

CaseSpec dam_break_2d_case(double dx) {
  check_dx(dx);
  CaseSpec c;
  c.name = "dam-break-2d";
  c.metrics = MetricSet::dam_break;
  c.dx = dx;
  c.h_w = 2.0;
  c.L = 1.0;
  c.domain = Domain{2, {}, {}};
  const double hdx = 1.3;
  const double width = cells(4.0, dx) * dx;
  const double height = cells(3.0, dx) * dx;
  c.particles = create_particles(lattice({0.0, 0.0}, {c.L, c.h_w}, dx, 2), dx, 1000.0, hdx, 2);
  const double g = kGhostLayers * dx;
  std::vector<Vec3> walls;
  for (const Vec3& p : lattice({-g, -g}, {width + g, height}, dx, 2)) {
    if (p.x > 0.0 && p.x < width && p.y > 0.0) continue;
    walls.push_back(p);
  }
  append_particles(c.particles, walls, dx, 1000.0, hdx, Tag::solid, 0);
  c.has_container = true;
  c.container_lo = {0.0, 0.0, 0.0};
  c.container_hi = {width, height, 0.0};

  auto& cfg = c.config;
  cfg.rho0 = 1000.0;
  cfg.gravity = {0.0, -9.81, 0.0};
  const double v_ref = std::sqrt(2.0 * 9.81 * c.h_w);
  c.U = v_ref;
  cfg.u_ref = v_ref;
  cfg.c_ref = 10.0 * v_ref;
  cfg.alpha = 0.05;
  cfg.pgrad_form = PressureGradientForm::symm;
  cfg.pref_policy = ReferencePressurePolicy::external;
  cfg.pref = cfg.rho0 * cfg.c_ref * cfg.c_ref;
  cfg.h_tilde_factor = 0.5;
  cfg.clamp_wall_pressure = true;
  cfg.avisc_from_solids = true;
  cfg.epsilon = 0.01;
  cfg.dt = 0.125 * hdx * dx / v_ref;
  c.t_end = 1.0;
  c.output_interval = 0.02;
  c.snapshot_interval = 0.1;
  return c;
}

CaseSpec dam_break_3d_case(double dx) {
  check_dx(dx);
  CaseSpec c;
  c.name = "dam-break-3d";
  c.metrics = MetricSet::dam_break;
  c.dx = dx;
  c.h_w = 0.55;
  c.L = 1.228;
  c.domain = Domain{3, {}, {}};
  const double hdx = 1.0;
  const double length = cells(3.22, dx) * dx;
  const double breadth = cells(1.0, dx) * dx;
  const double height = cells(0.8, dx) * dx;
  c.particles = create_particles(lattice({0.0, 0.0, 0.0}, {c.L, breadth, c.h_w}, dx, 3), dx, 1000.0, hdx, 3);
  const double g = kGhostLayers * dx;
  std::vector<Vec3> walls;
  for (const Vec3& p : lattice({-g, -g, -g}, {length + g, breadth + g, height}, dx, 3)) {
    if (p.x > 0.0 && p.x < length && p.y > 0.0 && p.y < breadth && p.z > 0.0) continue;
    walls.push_back(p);
  }
  append_particles(c.particles, walls, dx, 1000.0, hdx, Tag::solid, 0);
  c.has_container = true;
  c.container_lo = {0.0, 0.0, 0.0};
  c.container_hi = {length, breadth, height};

  auto& cfg = c.config;
  cfg.rho0 = 1000.0;
  cfg.gravity = {0.0, 0.0, -9.81};
  const double v_ref = std::sqrt(2.0 * 9.81 * c.h_w);
  c.U = v_ref;
  cfg.u_ref = v_ref;
  cfg.c_ref = 10.0 * v_ref;
  cfg.alpha = 0.25;
  cfg.pgrad_form = PressureGradientForm::symm;
  cfg.pref_policy = ReferencePressurePolicy::external;
  cfg.pref = cfg.rho0 * cfg.c_ref * cfg.c_ref;
  cfg.h_tilde_factor = 0.5;
  cfg.clamp_wall_pressure = true;
  cfg.avisc_from_solids = true;
  cfg.epsilon = 0.01;
  cfg.dt = hdx * dx / (8.0 * v_ref);
  c.t_end = 0.5;
  c.output_interval = 0.05;
  c.snapshot_interval = 0.25;
  return c;
}

CaseSpec cylinder_case(double dx) {
  check_dx(dx);
  CaseSpec c;
  c.name = "cylinder";
  c.metrics = MetricSet::cylinder;
  c.dx = dx;
  c.D = 2.0;
  c.U = 1.0;
  c.L = c.D;
  c.Re = 200.0;
  c.domain = Domain{2, {}, {}};
  const double hdx = 1.2;
  const double R = 0.5 * c.D;
  const double x_in = -5.0 * c.D;
  const double x_out = 10.0 * c.D;
  const double y_wall = 7.5 * c.D;
  const double bed = std::ceil(3.0 * hdx) * dx + dx;

  std::vector<Vec3> fluid;
  for (const Vec3& p : lattice({x_in, -y_wall}, {x_out, y_wall}, dx, 2)) {
    if (std::hypot(p.x, p.y) >= R) fluid.push_back(p);
  }
  c.particles = create_particles(fluid, dx, 1.0, hdx, 2);
  auto& ps = c.particles;

  // Concentric rings inside the circumference, the outermost dx/2 inside it,
  // with about one particle per dx of arc so each carries roughly dx^2.
  std::vector<Vec3> body;
  double r = R - 0.5 * dx;
  for (int k = 0; k < kGhostLayers && r > 0.25 * dx; ++k, r -= dx) {
    const int count = std::max(1, static_cast<int>(std::lround(2.0 * kPi * r / dx)));
    for (int s = 0; s < count; ++s) {
      const double th = 2.0 * kPi * s / count;
      body.push_back({r * std::cos(th), r * std::sin(th), 0.0});
    }
  }
  if (r <= 0.25 * dx && r > -0.5 * dx) body.push_back({0.0, 0.0, 0.0});
  c.cylinder_body = 0;
  append_particles(ps, body, dx, 1.0, hdx, Tag::solid, 0);

  const double g = kGhostLayers * dx;
  std::vector<Vec3> sides;
  for (const Vec3& p : lattice({x_in - bed, y_wall}, {x_out + bed, y_wall + g}, dx, 2)) sides.push_back(p);
  for (const Vec3& p : lattice({x_in - bed, -y_wall - g}, {x_out + bed, -y_wall}, dx, 2)) sides.push_back(p);
  append_particles(ps, sides, dx, 1.0, hdx, Tag::solid, 1);
  c.wall_bc.bodies = {WallBody{}, WallBody{{}, {}, true}};

  append_particles(ps, lattice({x_in - bed, -y_wall}, {x_in, y_wall}, dx, 2), dx, 1.0, hdx, Tag::inlet);
  append_particles(ps, lattice({x_out, -y_wall}, {x_out + bed, y_wall}, dx, 2), dx, 1.0, hdx, Tag::outlet);
  const Vec3 u_in{c.U, 0.0, 0.0};
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps.tag[i] == Tag::inlet) set_velocity(ps, i, u_in);
    if (ps.tag[i] == Tag::outlet) ps.aux[i] = c.U;
  }

  OpenBoundaryConfig ob;
  ob.flow_axis = {1.0, 0.0, 0.0};
  ob.inlet_start = x_in - bed;
  ob.inlet_end = x_in;
  ob.outlet_start = x_out;
  ob.outlet_end = x_out + bed;
  ob.inlet_profile = [u_in](const Vec3&) { return u_in; };
  c.open_bc = ob;

  auto& cfg = c.config;
  cfg.rho0 = 1.0;
  cfg.nu = c.U * c.D / c.Re;
  cfg.u_ref = c.U;
  cfg.c_ref = 10.0 * c.U;
  cfg.alpha = 0.0;
  cfg.pgrad_form = PressureGradientForm::symm;
  cfg.pref_policy = ReferencePressurePolicy::external;
  cfg.pref = cfg.rho0 * cfg.c_ref * cfg.c_ref;
  cfg.h_tilde_factor = 0.5;
  cfg.epsilon = 0.01;
  cfg.dt = compute_timestep(ps, cfg);
  c.t_end = 10.0;
  c.output_interval = 0.1;
  c.snapshot_interval = 5.0;
  return c;
}

CaseSpec make_case(const std::string& name, const CaseOptions& o) {
  CaseSpec c;
  if (name == "taylor-green") {
    c = taylor_green_case(o.re.value_or(100.0), o.n.value_or(50), o.perturb, o.seed);
  } else if (name == "cavity") {
    c = cavity_case(o.re.value_or(100.0), o.n.value_or(50));
  } else if (name == "square-patch") {
    c = square_patch_case(o.n.value_or(50));
  } else if (name == "dam-break-2d") {
    c = dam_break_2d_case(o.dx.value_or(0.02));
  } else if (name == "dam-break-3d") {
    c = dam_break_3d_case(o.dx.value_or(0.04));
  } else if (name == "cylinder") {
    c = cylinder_case(o.dx.value_or(0.2));
  } else {
    throw ConfigError("unknown case: " + name);
  }
  auto& cfg = c.config;
  if (o.tol) cfg.epsilon = *o.tol;
  if (o.omega) cfg.omega = *o.omega;
  if (o.k_gtvf) cfg.gtvf_substeps = *o.k_gtvf;
  if (o.alpha) cfg.alpha = *o.alpha;
  if (o.pgrad) cfg.pgrad_form = *o.pgrad;
  if (o.ustar_wall) cfg.ustar_wall_mode = *o.ustar_wall;
  if (o.dt) cfg.dt = *o.dt;
  if (o.adaptive) cfg.dt_policy = TimestepPolicy::adaptive;
  if (o.t_end) c.t_end = *o.t_end;
  if (!(c.t_end > 0.0)) throw ConfigError("end time must be positive");
  cfg.validate();
  return c;
}

}  // namespace sisph::harness
