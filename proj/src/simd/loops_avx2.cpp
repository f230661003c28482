// AVX2/FMA variants of the neighbor-gather loops. This file is compiled with
// -mavx2 -mfma and is only entered after the runtime CPU check. It keeps to
// intrinsics and plain loops (no shared inline helpers) so no AVX-encoded
// copy of a common inline function can leak into scalar call paths.

#include <immintrin.h>

#include <cstdint>

#include "sisph/simd/loops.hpp"

namespace sisph::simd {

namespace {

constexpr int kRound = _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC;

struct Frame {
  __m256d px, py, pz;     // period
  __m256d ix, iy, iz;     // inverse period (0 on open axes)
  double unit_sigma;
  int dim;
};

Frame make_frame(const Geometry& g) {
  Frame f;
  f.px = _mm256_set1_pd(g.period.x);
  f.py = _mm256_set1_pd(g.period.y);
  f.pz = _mm256_set1_pd(g.period.z);
  f.ix = _mm256_set1_pd(g.period.x > 0.0 ? 1.0 / g.period.x : 0.0);
  f.iy = _mm256_set1_pd(g.period.y > 0.0 ? 1.0 / g.period.y : 0.0);
  f.iz = _mm256_set1_pd(g.period.z > 0.0 ? 1.0 / g.period.z : 0.0);
  f.dim = g.dim;
  constexpr double pi = 3.14159265358979323846;
  f.unit_sigma = g.dim == 1 ? 1.0 / 120.0 : (g.dim == 2 ? 7.0 / (478.0 * pi) : 1.0 / (120.0 * pi));
  return f;
}

inline __m256d min_image(__m256d d, __m256d len, __m256d inv) {
  return _mm256_fnmadd_pd(len, _mm256_round_pd(_mm256_mul_pd(d, inv), kRound), d);
}

// Four neighbor slots starting at s; lanes past `count` repeat the first index
// and are zeroed through `valid`.
struct Slots {
  __m128i idx;
  __m256d valid;
};

inline Slots load_slots(const std::uint32_t* indices, std::uint32_t count) {
  Slots s;
  if (count >= 4) {
    s.idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(indices));
    s.valid = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
    return s;
  }
  alignas(16) std::int32_t tmp[4];
  for (std::uint32_t k = 0; k < 4; ++k) tmp[k] = static_cast<std::int32_t>(indices[k < count ? k : 0]);
  s.idx = _mm_load_si128(reinterpret_cast<const __m128i*>(tmp));
  const __m256d lane = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  s.valid = _mm256_cmp_pd(lane, _mm256_set1_pd(static_cast<double>(count)), _CMP_LT_OQ);
  return s;
}

inline __m256d gather(const double* base, __m128i idx) { return _mm256_i32gather_pd(base, idx, 8); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

struct Pair {
  __m256d dx, dy, dz, r2, hij;
};

inline Pair separation(const Geometry& g, const Frame& f, std::uint32_t i, __m128i idx, double h_scale) {
  Pair p;
  p.dx = min_image(_mm256_sub_pd(_mm256_set1_pd(g.x[i]), gather(g.x, idx)), f.px, f.ix);
  p.dy = min_image(_mm256_sub_pd(_mm256_set1_pd(g.y[i]), gather(g.y, idx)), f.py, f.iy);
  p.dz = min_image(_mm256_sub_pd(_mm256_set1_pd(g.z[i]), gather(g.z, idx)), f.pz, f.iz);
  p.r2 = _mm256_fmadd_pd(p.dx, p.dx, _mm256_fmadd_pd(p.dy, p.dy, _mm256_mul_pd(p.dz, p.dz)));
  const __m256d hsum_ij = _mm256_add_pd(_mm256_set1_pd(g.h[i]), gather(g.h, idx));
  p.hij = _mm256_mul_pd(_mm256_set1_pd(0.5 * h_scale), hsum_ij);
  return p;
}

inline __m256d sigma_over(const Frame& f, __m256d hinv) {
  __m256d s = _mm256_mul_pd(_mm256_set1_pd(f.unit_sigma), hinv);
  if (f.dim >= 2) s = _mm256_mul_pd(s, hinv);
  if (f.dim >= 3) s = _mm256_mul_pd(s, hinv);
  return s;
}

inline void clamped_bases(__m256d q, __m256d& a, __m256d& b, __m256d& c) {
  const __m256d zero = _mm256_setzero_pd();
  a = _mm256_max_pd(_mm256_sub_pd(_mm256_set1_pd(3.0), q), zero);
  b = _mm256_max_pd(_mm256_sub_pd(_mm256_set1_pd(2.0), q), zero);
  c = _mm256_max_pd(_mm256_sub_pd(_mm256_set1_pd(1.0), q), zero);
}

inline __m256d pow4(__m256d v) {
  const __m256d v2 = _mm256_mul_pd(v, v);
  return _mm256_mul_pd(v2, v2);
}

inline __m256d kernel_value(const Frame& f, __m256d r, __m256d hij) {
  const __m256d hinv = _mm256_div_pd(_mm256_set1_pd(1.0), hij);
  __m256d a, b, c;
  clamped_bases(_mm256_mul_pd(r, hinv), a, b, c);
  __m256d w = _mm256_mul_pd(pow4(a), a);
  w = _mm256_fnmadd_pd(_mm256_set1_pd(6.0), _mm256_mul_pd(pow4(b), b), w);
  w = _mm256_fmadd_pd(_mm256_set1_pd(15.0), _mm256_mul_pd(pow4(c), c), w);
  return _mm256_mul_pd(sigma_over(f, hinv), w);
}

// Scalar factor g with gradW = g * r_vec. Zero at r = 0 and outside the support.
inline __m256d gradient_factor(const Frame& f, __m256d r2, __m256d hij) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d nonzero = _mm256_cmp_pd(r2, zero, _CMP_GT_OQ);
  const __m256d r = _mm256_sqrt_pd(_mm256_blendv_pd(_mm256_set1_pd(1.0), r2, nonzero));
  const __m256d hinv = _mm256_div_pd(_mm256_set1_pd(1.0), hij);
  __m256d a, b, c;
  clamped_bases(_mm256_mul_pd(r, hinv), a, b, c);
  __m256d d = _mm256_mul_pd(_mm256_set1_pd(-5.0), pow4(a));
  d = _mm256_fmadd_pd(_mm256_set1_pd(30.0), pow4(b), d);
  d = _mm256_fnmadd_pd(_mm256_set1_pd(75.0), pow4(c), d);
  const __m256d g = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(sigma_over(f, hinv), d), hinv), r);
  return _mm256_and_pd(g, nonzero);
}

void density(const DensityArgs& a) {
  const Frame f = make_frame(a.geom);
  const auto n = static_cast<long long>(a.dests.size());
  const std::uint32_t* dests = a.dests.data();
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < n; ++k) {
    const std::uint32_t i = dests[k];
    __m256d acc = _mm256_setzero_pd();
    const std::uint32_t end = a.nbrs.offsets[i + 1];
    for (std::uint32_t s = a.nbrs.offsets[i]; s < end; s += 4) {
      const Slots sl = load_slots(a.nbrs.indices + s, end - s);
      const Pair p = separation(a.geom, f, i, sl.idx, 1.0);
      const __m256d w = kernel_value(f, _mm256_sqrt_pd(p.r2), p.hij);
      acc = _mm256_fmadd_pd(_mm256_and_pd(gather(a.m, sl.idx), sl.valid), w, acc);
    }
    a.rho[i] = hsum(acc);
  }
}

void ppe_coefficients(const PpeCoefficientArgs& a) {
  const Frame f = make_frame(a.geom);
  const auto n = static_cast<long long>(a.dests.size());
  const std::uint32_t* dests = a.dests.data();
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d eta = _mm256_set1_pd(a.eta);
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < n; ++k) {
    const std::uint32_t i = dests[k];
    const __m256d rhoi = _mm256_set1_pd(a.rho[i]);
    __m256d dacc = _mm256_setzero_pd();
    __m256d oacc = _mm256_setzero_pd();
    const std::uint32_t end = a.nbrs.offsets[i + 1];
    for (std::uint32_t s = a.nbrs.offsets[i]; s < end; s += 4) {
      const Slots sl = load_slots(a.nbrs.indices + s, end - s);
      const Pair p = separation(a.geom, f, i, sl.idx, 1.0);
      const __m256d g = gradient_factor(f, p.r2, p.hij);
      const __m256d rdotdw = _mm256_mul_pd(g, p.r2);
      const __m256d denom_r = _mm256_fmadd_pd(_mm256_mul_pd(eta, p.hij), p.hij, p.r2);
      const __m256d denom_rho = _mm256_mul_pd(rhoi, _mm256_add_pd(rhoi, gather(a.rho, sl.idx)));
      const __m256d num = _mm256_mul_pd(_mm256_mul_pd(four, gather(a.m, sl.idx)), rdotdw);
      __m256d fac = _mm256_div_pd(num, _mm256_mul_pd(denom_rho, denom_r));
      fac = _mm256_and_pd(fac, sl.valid);
      dacc = _mm256_add_pd(dacc, fac);
      oacc = _mm256_fnmadd_pd(fac, gather(a.pk, sl.idx), oacc);
    }
    a.diag[i] = hsum(dacc);
    a.odiag[i] = hsum(oacc);
  }
}

void divergence(const DivergenceArgs& a) {
  if (!(a.dt > 0.0)) return;
  const Frame f = make_frame(a.geom);
  const auto n = static_cast<long long>(a.dests.size());
  const std::uint32_t* dests = a.dests.data();
  const __m256d dt = _mm256_set1_pd(a.dt);
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < n; ++k) {
    const std::uint32_t i = dests[k];
    const __m256d ui = _mm256_set1_pd(a.us[i]);
    const __m256d vi = _mm256_set1_pd(a.vs[i]);
    const __m256d wi = _mm256_set1_pd(a.ws[i]);
    __m256d acc = _mm256_setzero_pd();
    const std::uint32_t end = a.nbrs.offsets[i + 1];
    for (std::uint32_t s = a.nbrs.offsets[i]; s < end; s += 4) {
      const Slots sl = load_slots(a.nbrs.indices + s, end - s);
      const Pair p = separation(a.geom, f, i, sl.idx, 1.0);
      const __m256d g = gradient_factor(f, p.r2, p.hij);
      const __m256d du = _mm256_sub_pd(ui, gather(a.us, sl.idx));
      const __m256d dv = _mm256_sub_pd(vi, gather(a.vs, sl.idx));
      const __m256d dw = _mm256_sub_pd(wi, gather(a.ws, sl.idx));
      const __m256d udotr = _mm256_fmadd_pd(du, p.dx, _mm256_fmadd_pd(dv, p.dy, _mm256_mul_pd(dw, p.dz)));
      const __m256d coef = _mm256_div_pd(gather(a.m, sl.idx), _mm256_mul_pd(gather(a.rho, sl.idx), dt));
      const __m256d term = _mm256_and_pd(_mm256_mul_pd(coef, _mm256_mul_pd(g, udotr)), sl.valid);
      acc = _mm256_sub_pd(acc, term);
    }
    a.rhs[i] = hsum(acc);
  }
}

void gtvf_force(const GtvfArgs& a) {
  const Frame f = make_frame(a.geom);
  const auto n = static_cast<long long>(a.dests.size());
  const std::uint32_t* dests = a.dests.data();
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < n; ++k) {
    const std::uint32_t i = dests[k];
    __m256d ax = _mm256_setzero_pd();
    __m256d ay = _mm256_setzero_pd();
    __m256d az = _mm256_setzero_pd();
    const std::uint32_t end = a.nbrs.offsets[i + 1];
    for (std::uint32_t s = a.nbrs.offsets[i]; s < end; s += 4) {
      const Slots sl = load_slots(a.nbrs.indices + s, end - s);
      const Pair p = separation(a.geom, f, i, sl.idx, a.h_factor);
      const __m256d g = gradient_factor(f, p.r2, p.hij);
      const __m256d coef = _mm256_and_pd(_mm256_mul_pd(gather(a.m, sl.idx), g), sl.valid);
      ax = _mm256_fmadd_pd(coef, p.dx, ax);
      ay = _mm256_fmadd_pd(coef, p.dy, ay);
      az = _mm256_fmadd_pd(coef, p.dz, az);
    }
    const double p0 = a.p0[i] / (a.rho[i] * a.rho[i]);
    a.fx[i] = -p0 * hsum(ax);
    a.fy[i] = -p0 * hsum(ay);
    a.fz[i] = -p0 * hsum(az);
  }
}

}  // namespace

const LoopTable* avx2_loops() {
  static const LoopTable table{&density, &ppe_coefficients, &divergence, &gtvf_force};
  return &table;
}

}  // namespace sisph::simd
