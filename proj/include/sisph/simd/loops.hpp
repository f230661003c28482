#pragma once

// Hot neighbor-gather loops. Each loop has a scalar reference built on
// QuinticKernel and, on x86-64, an AVX2/FMA variant that processes four
// neighbors per iteration. The active variant is picked at runtime from the
// CPU features (override with SISPH_SIMD=scalar|avx2 or set_backend).

#include <cstdint>
#include <span>
#include <string_view>

#include "sisph/vec3.hpp"

namespace sisph::simd {

enum class Backend { scalar, avx2 };

/// Positions and smoothing lengths seen by a loop.
struct Geometry {
  const double* x = nullptr;
  const double* y = nullptr;
  const double* z = nullptr;
  const double* h = nullptr;
  Vec3 period{};  // zero along open axes
  int dim = 2;
};

/// CSR neighbor lists.
struct Neighbors {
  const std::uint32_t* offsets = nullptr;
  const std::uint32_t* indices = nullptr;
};

/// rho_i = sum_j m_j W(r_ij, h_ij)
struct DensityArgs {
  Geometry geom;
  Neighbors nbrs;
  std::span<const std::uint32_t> dests;
  const double* m = nullptr;
  double* rho = nullptr;
};

/// diag_i = sum_j fac_ij,  odiag_i = sum_j -fac_ij pk_j with
/// fac_ij = 4 m_j / (rho_i (rho_i + rho_j)) * (r_ij . gradW_ij) / (r_ij^2 + eta h_ij^2)
struct PpeCoefficientArgs {
  Geometry geom;
  Neighbors nbrs;
  std::span<const std::uint32_t> dests;
  const double* m = nullptr;
  const double* rho = nullptr;
  const double* pk = nullptr;
  double eta = 0.01;
  double* diag = nullptr;
  double* odiag = nullptr;
};

/// rhs_i = sum_j -(m_j / (rho_j dt)) (u*_i - u*_j) . gradW_ij
struct DivergenceArgs {
  Geometry geom;
  Neighbors nbrs;
  std::span<const std::uint32_t> dests;
  const double* m = nullptr;
  const double* rho = nullptr;
  const double* us = nullptr;
  const double* vs = nullptr;
  const double* ws = nullptr;
  double dt = 0.0;
  double* rhs = nullptr;
};

/// f_i = -(p0_i / rho_i^2) sum_j m_j gradW(r_ij, h_factor h_ij)
struct GtvfArgs {
  Geometry geom;
  Neighbors nbrs;
  std::span<const std::uint32_t> dests;
  const double* m = nullptr;
  const double* rho = nullptr;
  const double* p0 = nullptr;  // indexed by particle
  double h_factor = 1.0;
  double* fx = nullptr;
  double* fy = nullptr;
  double* fz = nullptr;
};

struct LoopTable {
  void (*density)(const DensityArgs&);
  void (*ppe_coefficients)(const PpeCoefficientArgs&);
  void (*divergence)(const DivergenceArgs&);
  void (*gtvf_force)(const GtvfArgs&);
};

const LoopTable& scalar_loops();
/// nullptr when the AVX2 variant was not compiled in.
const LoopTable* avx2_loops();

bool cpu_supports_avx2();
bool backend_available(Backend b);

Backend active_backend();
/// Throws std::invalid_argument if the backend is unavailable on this CPU/build.
void set_backend(Backend b);
const LoopTable& loops();

std::string_view name(Backend b);

}  // namespace sisph::simd
