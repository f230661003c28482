#include "sisph/harness/runner.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include "sisph/parallel.hpp"

namespace sisph::harness {

namespace {

std::vector<double> uniform_samples(int n) {
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) v[static_cast<std::size_t>(k)] = static_cast<double>(k) / n;
  return v;
}

std::vector<double> metric_row(const CaseSpec& spec, Simulation& sim, int last_iters) {
  const double t = sim.time();
  const ParticleSet& ps = sim.particles();
  switch (spec.metrics) {
    case MetricSet::taylor_green: {
      const TgErrors e = tg_errors(ps, t, spec.U, spec.b);
      return {t, e.umax, e.l1_vel, e.p_l1, static_cast<double>(last_iters)};
    }
    case MetricSet::cavity:
    case MetricSet::square_patch:
      return {t, static_cast<double>(last_iters)};
    case MetricSet::dam_break: {
      const int vertical = spec.domain.dim == 3 ? 2 : 1;
      return {t, toe_position(ps, spec.dx, 0, vertical) / spec.L};
    }
    case MetricSet::cylinder: {
      const auto& nl = sim.refresh_neighbors();
      const Vec3 f = solid_force(ps, nl, sim.domain(), spec.cylinder_body, spec.config.nu);
      const Vec3 c = force_coefficients(f, spec.config.rho0, spec.U, spec.D);
      return {t, c.x, c.y};
    }
  }
  return {t};
}

}  // namespace

std::vector<std::string> metric_header(MetricSet m) {
  switch (m) {
    case MetricSet::taylor_green: return {"t", "umax", "l1_vel", "p_l1", "ppe_iters"};
    case MetricSet::cavity:
    case MetricSet::square_patch: return {"t", "ppe_iters"};
    case MetricSet::dam_break: return {"t", "toe_z_over_l"};
    case MetricSet::cylinder: return {"t", "cd", "cl"};
  }
  return {"t"};
}

double average_iterations(const std::vector<int>& iterations, std::size_t warmup) {
  if (iterations.size() <= warmup) return 0.0;
  double s = 0.0;
  for (std::size_t k = warmup; k < iterations.size(); ++k) s += iterations[k];
  return s / static_cast<double>(iterations.size() - warmup);
}

std::size_t count_penetrations(const ParticleSet& ps, const CaseSpec& spec) {
  if (!spec.has_container) return 0;
  const int vertical = spec.domain.dim - 1;
  std::size_t n = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps.tag[i] != Tag::fluid) continue;
    const Vec3 p = ps.pos[i];
    bool out = false;
    for (int a = 0; a < spec.domain.dim; ++a) {
      const double v = Domain::component(p, a);
      if (v < Domain::component(spec.container_lo, a)) out = true;
      if (a != vertical && v > Domain::component(spec.container_hi, a)) out = true;
    }
    if (out) ++n;
  }
  return n;
}

std::size_t count_free_surface_pressure_violations(const ParticleSet& ps) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps.tag[i] == Tag::fluid && ps.free_surface[i] && ps.p[i] != 0.0) ++n;
  }
  return n;
}

RunResult run_case(CaseSpec spec, const RunOptions& opts) {
  const auto wall0 = std::chrono::steady_clock::now();
  set_num_threads(opts.threads);
  RunResult result;
  result.series.header = metric_header(spec.metrics);

  Simulation sim(spec.particles, spec.domain, spec.config, spec.wall_bc, spec.open_bc);
  const double t_end = spec.t_end;
  std::size_t snap_index = 0;
  double next_output = 0.0;
  double next_snapshot = 0.0;
  int last_iters = 0;

  auto emit = [&]() {
    result.series.rows.push_back(metric_row(spec, sim, last_iters));
    if (opts.on_output) opts.on_output(sim);
    if (opts.out_dir && opts.write_snapshots && sim.time() + 1e-12 >= next_snapshot) {
      write_snapshot(sim.particles(), *opts.out_dir / snapshot_name(snap_index++));
      next_snapshot += spec.snapshot_interval;
    }
    next_output += spec.output_interval;
  };

  emit();
  while (sim.time() < t_end - 1e-9 * t_end) {
    const StepReport rep = sim.advance();
    last_iters = rep.ppe.iterations;
    result.ppe_iterations.push_back(rep.ppe.iterations);
    result.step_times.push_back(sim.time());
    if (!rep.ppe.converged) ++result.nonconverged_steps;
    if (opts.on_step) opts.on_step(sim, rep);
    const bool last = sim.time() >= t_end - 1e-9 * t_end;
    if (sim.time() + 0.5 * rep.dt >= next_output || last) {
      emit();
      while (next_output <= sim.time()) next_output += spec.output_interval;
      if (opts.log) {
        *opts.log << "t=" << sim.time() << " steps=" << sim.steps() << " ppe_iters=" << rep.ppe.iterations
                  << " max_u=" << rep.max_u << '\n';
      }
    }
  }

  if (spec.metrics == MetricSet::cavity) {
    const auto s = uniform_samples(50);
    result.profiles = cavity_profiles(sim.particles(), sim.domain(), s, s, spec.L);
  }

  result.final_time = sim.time();
  result.final_state = sim.particles();
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();

  if (opts.out_dir) {
    const auto& dir = *opts.out_dir;
    switch (spec.metrics) {
      case MetricSet::taylor_green: write_table(result.series, dir / "tg_errors.csv"); break;
      case MetricSet::cavity: {
        write_table(result.series, dir / "ppe_iters.csv");
        Table u{{"y", "u_centerline"}, {}}, v{{"x", "v_centerline"}, {}};
        for (std::size_t k = 0; k < result.profiles->y.size(); ++k)
          u.rows.push_back({result.profiles->y[k], result.profiles->u[k]});
        for (std::size_t k = 0; k < result.profiles->x.size(); ++k)
          v.rows.push_back({result.profiles->x[k], result.profiles->v[k]});
        write_table(u, dir / "u_centerline.csv");
        write_table(v, dir / "v_centerline.csv");
        break;
      }
      case MetricSet::square_patch: write_table(result.series, dir / "ppe_iters.csv"); break;
      case MetricSet::dam_break: write_table(result.series, dir / "toe.csv"); break;
      case MetricSet::cylinder: write_table(result.series, dir / "force_coefficients.csv"); break;
    }
    auto manifest = sim.config().to_key_values();
    manifest["case"] = spec.name;
    manifest["seed"] = std::to_string(opts.seed);
    manifest["threads"] = std::to_string(opts.threads);
    manifest["simd"] = std::string(simd::name(simd::active_backend()));
    manifest["t_end"] = format_double(spec.t_end);
    manifest["dx"] = format_double(spec.dx);
    manifest["particles"] = std::to_string(spec.particles.size());
    manifest["steps"] = std::to_string(sim.steps());
    manifest["reference_pressure_used"] = format_double(sim.reference_pressure());
    manifest["version"] = SISPH_VERSION;
    write_manifest(manifest, dir / "manifest.txt");
  }
  return result;
}

}  // namespace sisph::harness
