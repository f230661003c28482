#pragma once

#include "sisph/vec3.hpp"

namespace sisph {

/// Quintic spline smoothing kernel with compact support 3h.
///
///   W(q) = sigma_d * [ (3-q)^5 - 6 (2-q)^5 + 15 (1-q)^5 ],  q = r/h
///
/// where each bracketed term only contributes while its base is positive.
/// sigma_1 = 1/(120 h), sigma_2 = 7/(478 pi h^2), sigma_3 = 1/(120 pi h^3).
class QuinticKernel {
 public:
  static constexpr double kSupportFactor = 3.0;

  /// Throws std::invalid_argument unless dim is 1, 2 or 3.
  explicit QuinticKernel(int dim);

  int dim() const { return dim_; }
  double support_radius(double h) const { return kSupportFactor * h; }

  /// sigma_d / h^dim. Throws std::invalid_argument for h <= 0.
  double normalization(double h) const;

  /// Kernel value W(r, h). Zero for r >= 3h.
  double value(double r, double h) const;

  /// dW/dq (already multiplied by the normalization, not divided by h).
  double dwdq(double r, double h) const;

  /// Gradient with respect to the first particle: dW/dq * (1/h) * r_vec/|r_vec|.
  /// Returns the zero vector at |r_vec| = 0 and outside the support.
  Vec3 gradient(const Vec3& r_vec, double h) const;

  /// Normalization constant sigma_d for h = 1 (the per-dim prefactor).
  double unit_normalization() const { return unit_sigma_; }

 private:
  int dim_;
  double unit_sigma_;
};

}  // namespace sisph
