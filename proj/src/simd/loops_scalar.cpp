// Scalar reference loops. These go through QuinticKernel so they share a
// code path with the rest of the library and serve as the oracle for the
// vector variants.

#include <cmath>

#include "sisph/kernel.hpp"
#include "sisph/parallel.hpp"
#include "sisph/simd/loops.hpp"

namespace sisph::simd {

namespace {

Vec3 separation(const Geometry& g, std::uint32_t i, std::uint32_t j) {
  Vec3 d{g.x[i] - g.x[j], g.y[i] - g.y[j], g.z[i] - g.z[j]};
  if (g.period.x > 0.0) d.x -= g.period.x * std::nearbyint(d.x / g.period.x);
  if (g.period.y > 0.0) d.y -= g.period.y * std::nearbyint(d.y / g.period.y);
  if (g.period.z > 0.0) d.z -= g.period.z * std::nearbyint(d.z / g.period.z);
  return d;
}

template <typename Body>
void for_each_dest(std::span<const std::uint32_t> dests, Body&& body) {
  parallel_for(dests.size(), [&](std::size_t k) { body(dests[k]); });
}

void density(const DensityArgs& a) {
  const QuinticKernel kernel(a.geom.dim);
  for_each_dest(a.dests, [&](std::uint32_t i) {
    double sum = 0.0;
    for (auto s = a.nbrs.offsets[i]; s < a.nbrs.offsets[i + 1]; ++s) {
      const std::uint32_t j = a.nbrs.indices[s];
      const Vec3 d = separation(a.geom, i, j);
      sum += a.m[j] * kernel.value(norm(d), 0.5 * (a.geom.h[i] + a.geom.h[j]));
    }
    a.rho[i] = sum;
  });
}

void ppe_coefficients(const PpeCoefficientArgs& a) {
  const QuinticKernel kernel(a.geom.dim);
  for_each_dest(a.dests, [&](std::uint32_t i) {
    double diag = 0.0, odiag = 0.0;
    const double rhoi = a.rho[i];
    for (auto s = a.nbrs.offsets[i]; s < a.nbrs.offsets[i + 1]; ++s) {
      const std::uint32_t j = a.nbrs.indices[s];
      const Vec3 d = separation(a.geom, i, j);
      const double hij = 0.5 * (a.geom.h[i] + a.geom.h[j]);
      const Vec3 dw = kernel.gradient(d, hij);
      const double r2 = dot(d, d);
      const double fac = 4.0 * a.m[j] / (rhoi * (rhoi + a.rho[j])) * dot(d, dw) / (r2 + a.eta * hij * hij);
      diag += fac;
      odiag -= fac * a.pk[j];
    }
    a.diag[i] = diag;
    a.odiag[i] = odiag;
  });
}

void divergence(const DivergenceArgs& a) {
  if (!(a.dt > 0.0)) return;
  const QuinticKernel kernel(a.geom.dim);
  for_each_dest(a.dests, [&](std::uint32_t i) {
    double sum = 0.0;
    for (auto s = a.nbrs.offsets[i]; s < a.nbrs.offsets[i + 1]; ++s) {
      const std::uint32_t j = a.nbrs.indices[s];
      const Vec3 d = separation(a.geom, i, j);
      const Vec3 dw = kernel.gradient(d, 0.5 * (a.geom.h[i] + a.geom.h[j]));
      const Vec3 uij{a.us[i] - a.us[j], a.vs[i] - a.vs[j], a.ws[i] - a.ws[j]};
      sum -= a.m[j] / (a.rho[j] * a.dt) * dot(uij, dw);
    }
    a.rhs[i] = sum;
  });
}

void gtvf_force(const GtvfArgs& a) {
  const QuinticKernel kernel(a.geom.dim);
  for_each_dest(a.dests, [&](std::uint32_t i) {
    Vec3 sum{};
    for (auto s = a.nbrs.offsets[i]; s < a.nbrs.offsets[i + 1]; ++s) {
      const std::uint32_t j = a.nbrs.indices[s];
      const Vec3 d = separation(a.geom, i, j);
      const Vec3 dw = kernel.gradient(d, a.h_factor * 0.5 * (a.geom.h[i] + a.geom.h[j]));
      sum += dw * a.m[j];
    }
    const double p0 = a.p0[i] / (a.rho[i] * a.rho[i]);
    a.fx[i] = -p0 * sum.x;
    a.fy[i] = -p0 * sum.y;
    a.fz[i] = -p0 * sum.z;
  });
}

}  // namespace

const LoopTable& scalar_loops() {
  static const LoopTable table{&density, &ppe_coefficients, &divergence, &gtvf_force};
  return table;
}

}  // namespace sisph::simd
