#include "sisph/harness/validation.hpp"

#include <cmath>
#include <sstream>

#include "sisph/errors.hpp"

namespace sisph::harness {

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

CheckResult finite_run(const RunResult& r, const CaseSpec& spec) {
  return {"completes without non-finite state", r.final_state.all_finite() && r.final_time >= spec.t_end * 0.999,
          "t_final=" + fmt(r.final_time)};
}

}  // namespace

CheckResult check_tg_decay(const Table& series, double U, double b, double t_lo, double t_hi, double tolerance) {
  const auto ct = series.column("t");
  const auto cu = series.column("umax");
  double worst = 0.0;
  std::size_t used = 0;
  for (const auto& row : series.rows) {
    if (row[ct] < t_lo - 1e-9 || row[ct] > t_hi + 1e-9) continue;
    worst = std::max(worst, std::abs(row[cu] / (U * std::exp(b * row[ct])) - 1.0));
    ++used;
  }
  return {"decay of max|u| follows exp(bt)", used > 0 && worst <= tolerance,
          "worst relative deviation " + fmt(worst) + " over " + std::to_string(used) + " samples"};
}

CheckResult check_tg_l1(const Table& series, double limit) {
  const auto c = series.column("l1_vel");
  double worst = 0.0;
  for (const auto& row : series.rows) worst = std::max(worst, row[c]);
  return {"velocity L1 error stays below " + fmt(limit), worst < limit, "max L1 " + fmt(worst)};
}

std::vector<CheckResult> validate_case(const std::string& name, const CaseOptions& opts, const RunOptions& run) {
  CaseSpec spec = make_case(name, opts);
  std::vector<CheckResult> out;
  std::size_t fs_violations = 0;
  std::size_t penetrations = 0;
  RunOptions ro = run;
  const auto user_output = run.on_output;
  ro.on_output = [&](const Simulation& sim) {
    fs_violations += count_free_surface_pressure_violations(sim.particles());
    penetrations += count_penetrations(sim.particles(), spec);
    if (user_output) user_output(sim);
  };
  const RunResult r = run_case(spec, ro);
  out.push_back(finite_run(r, spec));

  switch (spec.metrics) {
    case MetricSet::taylor_green:
      out.push_back(check_tg_decay(r.series, spec.U, spec.b, 0.5, spec.t_end, 0.10));
      out.push_back(check_tg_l1(r.series, 0.05));
      break;
    case MetricSet::cavity: {
      const double rms = profile_rms(r.final_state, spec.domain, load_ghia_re100(), spec.U);
      out.push_back({"centreline profiles match the reference (RMS < 0.06)", rms < 0.06, "RMS " + fmt(rms)});
      const double avg = average_iterations(r.ppe_iterations, r.ppe_iterations.size() / 5);
      out.push_back({"average PPE iterations <= 5", avg <= 5.0, "average " + fmt(avg)});
      break;
    }
    case MetricSet::square_patch:
    case MetricSet::dam_break:
      out.push_back({"free-surface particles carry zero pressure", fs_violations == 0,
                     std::to_string(fs_violations) + " violations"});
      if (spec.has_container)
        out.push_back({"no fluid particle crosses a wall", penetrations == 0,
                       std::to_string(penetrations) + " particle-outputs outside"});
      break;
    case MetricSet::cylinder: {
      const auto ct = r.series.column("t");
      const auto cd = r.series.column("cd");
      double sum = 0.0;
      std::size_t n = 0;
      for (const auto& row : r.series.rows) {
        if (row[ct] >= 0.5 * spec.t_end) {
          sum += row[cd];
          ++n;
        }
      }
      const double mean = n ? sum / static_cast<double>(n) : 0.0;
      out.push_back({"mean drag coefficient after the transient lies in (0.5, 4)", n > 0 && mean > 0.5 && mean < 4.0,
                     "mean c_d " + fmt(mean)});
      break;
    }
  }
  return out;
}

}  // namespace sisph::harness
