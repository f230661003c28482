#include "sisph/particles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace sisph {

void Field3::fill(double value) {
  std::fill(x.begin(), x.end(), value);
  std::fill(y.begin(), y.end(), value);
  std::fill(z.begin(), z.end(), value);
}

template <typename F>
void ParticleSet::for_each_scalar(F&& f) {
  for (auto* v : {&rho, &m, &h, &p, &pk, &diag, &odiag, &rhs, &aux}) f(*v);
  for (auto* fld : {&pos, &vel, &vtrans, &vstar, &normal}) {
    f(fld->x);
    f(fld->y);
    f(fld->z);
  }
}

std::size_t ParticleSet::add(const Vec3& position, double mass, double smoothing_length, double density, Tag t,
                             int body_id) {
  const std::size_t i = size();
  id.push_back(next_id_++);
  tag.push_back(t);
  body.push_back(body_id);
  free_surface.push_back(0);
  for_each_scalar([](std::vector<double>& v) { v.push_back(0.0); });
  pos.set(i, position);
  m[i] = mass;
  h[i] = smoothing_length;
  rho[i] = density;
  return i;
}

void ParticleSet::remove(std::span<const std::uint8_t> drop) {
  if (drop.size() != size()) throw std::invalid_argument("removal mask has the wrong length");
  auto compact = [&drop](auto& v) {
    std::size_t out = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!drop[i]) v[out++] = v[i];
    }
    v.resize(out);
  };
  compact(id);
  compact(tag);
  compact(body);
  compact(free_surface);
  for_each_scalar(compact);
}

std::vector<std::uint32_t> ParticleSet::indices(TagMask tags) const {
  std::vector<std::uint32_t> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    if (tags & mask(tag[i])) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

std::size_t ParticleSet::count(Tag t) const { return static_cast<std::size_t>(std::count(tag.begin(), tag.end(), t)); }

double ParticleSet::total_mass() const {
  double s = 0.0;
  for (double v : m) s += v;
  return s;
}

double ParticleSet::max_h() const { return h.empty() ? 0.0 : *std::max_element(h.begin(), h.end()); }

bool ParticleSet::all_finite() const {
  bool ok = true;
  const_cast<ParticleSet*>(this)->for_each_scalar([&ok](std::vector<double>& v) {
    if (!ok) return;
    ok = std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); });
  });
  return ok;
}

void append_particles(ParticleSet& ps, std::span<const Vec3> positions, double dx, double rho0, double h_ratio,
                      Tag tag, int body_id) {
  if (!(dx > 0.0)) throw std::invalid_argument("particle spacing must be positive");
  const double mass = rho0 * std::pow(dx, ps.dim());
  for (const auto& x : positions) ps.add(x, mass, h_ratio * dx, rho0, tag, body_id);
}

ParticleSet create_particles(std::span<const Vec3> positions, double dx, double rho0, double h_ratio, int dim,
                             Tag tag) {
  if (positions.empty()) throw std::invalid_argument("cannot create an empty particle set");
  ParticleSet ps(dim);
  append_particles(ps, positions, dx, rho0, h_ratio, tag);
  return ps;
}

void perturb_positions(ParticleSet& ps, double amplitude, std::uint64_t seed, TagMask tags) {
  if (amplitude < 0.0) throw std::invalid_argument("perturbation amplitude must be non-negative");
  if (amplitude == 0.0) return;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!(tags & mask(ps.tag[i]))) continue;
    ps.pos.x[i] += dist(rng);
    if (ps.dim() >= 2) ps.pos.y[i] += dist(rng);
    if (ps.dim() >= 3) ps.pos.z[i] += dist(rng);
  }
}

}  // namespace sisph
