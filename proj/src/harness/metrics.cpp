#include "sisph/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sisph/harness/cases.hpp"
#include "sisph/harness/io.hpp"
#include "sisph/kernel.hpp"

namespace sisph::harness {

TgErrors tg_errors(const ParticleSet& ps, double t, double U, double b) {
  TgErrors e;
  double diff = 0.0, exact = 0.0, psum = 0.0, pe_max = -std::numeric_limits<double>::infinity();
  std::size_t count = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps.tag[i] != Tag::fluid) continue;
    const Vec3 ue = taylor_green_velocity(ps.pos.x[i], ps.pos.y[i], t, U, b);
    const double uc = norm(ps.vel[i]);
    e.umax = std::max(e.umax, uc);
    diff += std::abs(uc - norm(ue));
    exact += norm(ue);
    psum += ps.p[i];
    pe_max = std::max(pe_max, taylor_green_pressure(ps.pos.x[i], ps.pos.y[i], t, U, b));
    ++count;
  }
  if (!(exact > 0.0)) throw std::domain_error("exact velocity vanishes; L1 error undefined");
  e.l1_vel = diff / exact;
  const double p_avg = psum / static_cast<double>(count);
  double perr = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps.tag[i] != Tag::fluid) continue;
    perr += std::abs(ps.p[i] - p_avg - taylor_green_pressure(ps.pos.x[i], ps.pos.y[i], t, U, b));
  }
  e.p_l1 = pe_max > 0.0 ? perr / static_cast<double>(count) / pe_max : 0.0;
  return e;
}

std::vector<Vec3> sample_velocity(const ParticleSet& ps, const Domain& domain, std::span<const Vec3> points) {
  std::vector<Vec3> out(points.size());
  if (ps.empty()) return out;
  const QuinticKernel kernel(domain.dim);
  const double radius = QuinticKernel::kSupportFactor * ps.max_h();
  const auto grid = NeighborGrid::build(ps.pos, domain, radius);
  for (std::size_t k = 0; k < points.size(); ++k) {
    double wsum = 0.0;
    Vec3 usum{};
    grid.for_each_within(points[k], radius, [&](std::uint32_t j) {
      const double w = kernel.value(norm(domain.separation(points[k], ps.pos[j])), ps.h[j]);
      wsum += w;
      usum += ps.vel[j] * w;
    });
    out[k] = wsum > 0.0 ? usum * (1.0 / wsum) : Vec3{};
  }
  return out;
}

CenterlineProfiles cavity_profiles(const ParticleSet& ps, const Domain& domain, std::span<const double> ys,
                                   std::span<const double> xs, double L) {
  CenterlineProfiles prof;
  std::vector<Vec3> pts;
  for (double y : ys) pts.push_back({0.5 * L, y, 0.0});
  for (double x : xs) pts.push_back({x, 0.5 * L, 0.0});
  const auto vel = sample_velocity(ps, domain, pts);
  for (std::size_t k = 0; k < ys.size(); ++k) {
    prof.y.push_back(ys[k]);
    prof.u.push_back(vel[k].x);
  }
  for (std::size_t k = 0; k < xs.size(); ++k) {
    prof.x.push_back(xs[k]);
    prof.v.push_back(vel[ys.size() + k].y);
  }
  return prof;
}

ReferenceProfiles load_ghia_re100() {
  const std::filesystem::path dir(SISPH_DATA_DIR);
  ReferenceProfiles ref;
  const Table tu = read_table(dir / "ghia_re100_u.csv");
  for (const auto& r : tu.rows) {
    ref.y.push_back(r[tu.column("y")]);
    ref.u.push_back(r[tu.column("u")]);
  }
  const Table tv = read_table(dir / "ghia_re100_v.csv");
  for (const auto& r : tv.rows) {
    ref.x.push_back(r[tv.column("x")]);
    ref.v.push_back(r[tv.column("v")]);
  }
  return ref;
}

double profile_rms(const ParticleSet& ps, const Domain& domain, const ReferenceProfiles& ref, double U) {
  const auto prof = cavity_profiles(ps, domain, ref.y, ref.x);
  double sq = 0.0;
  for (std::size_t k = 0; k < ref.y.size(); ++k) sq += std::pow((prof.u[k] - ref.u[k] * U) / U, 2);
  for (std::size_t k = 0; k < ref.x.size(); ++k) sq += std::pow((prof.v[k] - ref.v[k] * U) / U, 2);
  return std::sqrt(sq / static_cast<double>(ref.y.size() + ref.x.size()));
}

double toe_position(const ParticleSet& ps, double dx, int axis, int vertical) {
  double toe = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps.tag[i] != Tag::fluid) continue;
    const Vec3 p = ps.pos[i];
    if (Domain::component(p, vertical) < 2.0 * dx) toe = std::max(toe, Domain::component(p, axis));
  }
  return toe;
}

Vec3 solid_force(const ParticleSet& ps, const NeighborList& nl, const Domain& domain, int body, double nu) {
  const QuinticKernel kernel(domain.dim);
  Vec3 total{};
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps.tag[i] != Tag::solid || ps.body[i] != body) continue;
    const double vi = ps.m[i] / ps.rho[i];
    const double eta_i = ps.rho[i] * nu;
    for (std::uint32_t j : nl.of(i)) {
      if (!(kMovingTags & mask(ps.tag[j]))) continue;
      const Vec3 rij = domain.separation(ps.pos[i], ps.pos[j]);
      const double hij = 0.5 * (ps.h[i] + ps.h[j]);
      const Vec3 dw = kernel.gradient(rij, hij);
      const double vj = ps.m[j] / ps.rho[j];
      const double eta_j = ps.rho[j] * nu;
      const double p_ij = (ps.rho[j] * ps.p[i] + ps.rho[i] * ps.p[j]) / (ps.rho[i] + ps.rho[j]);
      const double eta_ij = eta_i + eta_j > 0.0 ? 2.0 * eta_i * eta_j / (eta_i + eta_j) : 0.0;
      const Vec3 uij = ps.vel[i] - ps.vel[j];
      const double visc = eta_ij * dot(rij, dw) / (dot(rij, rij) + 0.01 * hij * hij);
      total += (dw * (-p_ij) + uij * visc) * (vi * vi + vj * vj);
    }
  }
  return total;
}

Vec3 force_coefficients(const Vec3& force, double rho, double U, double D) {
  const double s = 2.0 / (rho * U * U * D);
  return force * s;
}

}  // namespace sisph::harness
