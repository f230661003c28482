#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sisph/vec3.hpp"

namespace sisph {

enum class Tag : std::uint8_t { fluid = 0, solid = 1, inlet = 2, outlet = 3 };

/// Bit mask over tags, used to select destination and source particles.
using TagMask = std::uint8_t;
constexpr TagMask mask(Tag t) { return static_cast<TagMask>(1u << static_cast<unsigned>(t)); }
constexpr TagMask kAllTags = mask(Tag::fluid) | mask(Tag::solid) | mask(Tag::inlet) | mask(Tag::outlet);
constexpr TagMask kMovingTags = mask(Tag::fluid) | mask(Tag::inlet) | mask(Tag::outlet);

/// Three parallel coordinate arrays.
struct Field3 {
  std::vector<double> x, y, z;

  Vec3 operator[](std::size_t i) const { return {x[i], y[i], z[i]}; }
  void set(std::size_t i, const Vec3& v) {
    x[i] = v.x;
    y[i] = v.y;
    z[i] = v.z;
  }
  void resize(std::size_t n, double value = 0.0) {
    x.resize(n, value);
    y.resize(n, value);
    z.resize(n, value);
  }
  void fill(double value);
  std::size_t size() const { return x.size(); }
};

/// Structure-of-arrays store for every particle in a simulation. Fluid, solid
/// (ghost wall), inlet and outlet particles share one set and are told apart
/// by their tag.
class ParticleSet {
 public:
  explicit ParticleSet(int dim = 2) : dim_(dim) {}

  int dim() const { return dim_; }
  std::size_t size() const { return tag.size(); }
  bool empty() const { return tag.empty(); }

  /// Appends one particle with zero velocity and pressure; returns its index.
  std::size_t add(const Vec3& position, double mass, double smoothing_length, double density, Tag t,
                  int body_id = -1);

  /// Drops every particle whose flag is set, preserving the order of the rest.
  void remove(std::span<const std::uint8_t> drop);

  /// Indices of all particles whose tag is in the mask, in storage order.
  std::vector<std::uint32_t> indices(TagMask tags) const;
  std::size_t count(Tag t) const;

  double total_mass() const;
  double max_h() const;

  /// True when every floating-point field is finite.
  bool all_finite() const;

  // Identity and classification.
  std::vector<std::int64_t> id;
  std::vector<Tag> tag;
  std::vector<std::int32_t> body;  // wall body index for solids, -1 otherwise
  std::vector<std::uint8_t> free_surface;

  // Kinematics.
  Field3 pos;
  Field3 vel;     // u; ghost velocity u_w on solids; frozen u on outlet particles
  Field3 vtrans;  // transport velocity
  Field3 vstar;   // intermediate velocity u*
  Field3 normal;  // solid normals (zero elsewhere)

  // Scalars.
  std::vector<double> rho, m, h, p;
  std::vector<double> pk;     // pressure at the previous PPE iterate
  std::vector<double> diag;   // D_ii
  std::vector<double> odiag;  // sum_j OD_ij p_j^k
  std::vector<double> rhs;    // PPE right-hand side
  std::vector<double> aux;    // outlet advection speed

 private:
  template <typename F>
  void for_each_scalar(F&& f);

  int dim_;
  std::int64_t next_id_ = 0;
};

/// Builds a set of `tag` particles at the given positions with
/// m = rho0 dx^dim, h = h_ratio dx and rho = rho0.
/// Throws std::invalid_argument for an empty position list or dx <= 0.
ParticleSet create_particles(std::span<const Vec3> positions, double dx, double rho0, double h_ratio, int dim,
                             Tag tag = Tag::fluid);

/// Appends particles of the given tag to an existing set (same rules as create_particles).
void append_particles(ParticleSet& ps, std::span<const Vec3> positions, double dx, double rho0, double h_ratio,
                      Tag tag, int body_id = -1);

/// Displaces every coordinate of the particles selected by `tags` by an
/// independent U(-amplitude, amplitude) sample. Deterministic for a seed.
void perturb_positions(ParticleSet& ps, double amplitude, std::uint64_t seed, TagMask tags = mask(Tag::fluid));

}  // namespace sisph
