#include "sisph/kernel.hpp"

#include <numbers>
#include <stdexcept>

namespace sisph {

namespace {

double pow4(double a) {
  const double a2 = a * a;
  return a2 * a2;
}
double pow5(double a) { return pow4(a) * a; }

void require_positive_h(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("smoothing length must be positive");
}

}  // namespace

QuinticKernel::QuinticKernel(int dim) : dim_(dim) {
  switch (dim) {
    case 1: unit_sigma_ = 1.0 / 120.0; break;
    case 2: unit_sigma_ = 7.0 / (478.0 * std::numbers::pi); break;
    case 3: unit_sigma_ = 1.0 / (120.0 * std::numbers::pi); break;
    default: throw std::invalid_argument("kernel dimension must be 1, 2 or 3");
  }
}

double QuinticKernel::normalization(double h) const {
  require_positive_h(h);
  double s = unit_sigma_ / h;
  if (dim_ >= 2) s /= h;
  if (dim_ >= 3) s /= h;
  return s;
}

double QuinticKernel::value(double r, double h) const {
  const double sigma = normalization(h);
  const double q = r / h;
  if (q >= 3.0) return 0.0;
  double w = pow5(3.0 - q);
  if (q < 2.0) w -= 6.0 * pow5(2.0 - q);
  if (q < 1.0) w += 15.0 * pow5(1.0 - q);
  return sigma * w;
}

double QuinticKernel::dwdq(double r, double h) const {
  const double sigma = normalization(h);
  const double q = r / h;
  if (q >= 3.0) return 0.0;
  double d = -5.0 * pow4(3.0 - q);
  if (q < 2.0) d += 30.0 * pow4(2.0 - q);
  if (q < 1.0) d -= 75.0 * pow4(1.0 - q);
  return sigma * d;
}

Vec3 QuinticKernel::gradient(const Vec3& r_vec, double h) const {
  require_positive_h(h);
  const double r = norm(r_vec);
  if (r == 0.0 || r >= kSupportFactor * h) return {};
  return r_vec * (dwdq(r, h) / (h * r));
}

}  // namespace sisph
