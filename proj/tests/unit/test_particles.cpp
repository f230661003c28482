#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "sisph/config.hpp"
#include "sisph/errors.hpp"
#include "sisph/harness/cases.hpp"
#include "sisph/particles.hpp"

using namespace sisph;

TEST_SUITE("particles") {
  TEST_CASE("create_particles sets mass and smoothing length from the spacing") {
    const std::vector<Vec3> one{{0.5, 0.5, 0.0}};
    const ParticleSet ps = create_particles(one, 0.1, 1000.0, 1.0, 2);
    REQUIRE(ps.size() == 1);
    CHECK(ps.m[0] == doctest::Approx(10.0));
    CHECK(ps.h[0] == doctest::Approx(0.1));
    CHECK(ps.rho[0] == 1000.0);
    CHECK(ps.tag[0] == Tag::fluid);
  }

  TEST_CASE("every array has one entry per particle") {
    const std::vector<Vec3> pts{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}};
    const ParticleSet ps = create_particles(pts, 1.0, 1.0, 1.0, 2);
    CHECK(ps.size() == 4);
    for (auto n : {ps.id.size(), ps.body.size(), ps.free_surface.size(), ps.pos.size(), ps.vel.size(),
                   ps.vtrans.size(), ps.vstar.size(), ps.normal.size(), ps.rho.size(), ps.m.size(), ps.h.size(),
                   ps.p.size(), ps.pk.size(), ps.diag.size(), ps.odiag.size(), ps.rhs.size(), ps.aux.size()})
      CHECK(n == 4);
  }

  TEST_CASE("100 x 100 unit lattice carries the mass of the box") {
    const auto pts = harness::lattice({0.0, 0.0}, {1.0, 1.0}, 0.01, 2);
    const ParticleSet ps = create_particles(pts, 0.01, 1000.0, 1.0, 2);
    CHECK(ps.size() == 10000);
    CHECK(ps.total_mass() == doctest::Approx(1000.0).epsilon(1e-12));
  }

  TEST_CASE("invalid construction arguments") {
    const std::vector<Vec3> none;
    const std::vector<Vec3> one{{0, 0, 0}};
    CHECK_THROWS_AS(create_particles(none, 0.1, 1.0, 1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(create_particles(one, 0.0, 1.0, 1.0, 2), std::invalid_argument);
  }

  TEST_CASE("perturbation is bounded, deterministic and a no-op at zero amplitude") {
    const auto pts = harness::lattice({0.0, 0.0}, {1.0, 1.0}, 0.05, 2);
    const ParticleSet base = create_particles(pts, 0.05, 1.0, 1.0, 2);

    ParticleSet zero = base;
    perturb_positions(zero, 0.0, 3);
    CHECK(zero.pos.x == base.pos.x);
    CHECK(zero.pos.y == base.pos.y);

    ParticleSet a = base, b = base, c = base;
    perturb_positions(a, 0.01, 7);
    perturb_positions(b, 0.01, 7);
    perturb_positions(c, 0.01, 8);
    CHECK(a.pos.x == b.pos.x);
    CHECK(a.pos.y == b.pos.y);
    CHECK(a.pos.x != c.pos.x);
    double dmax = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      dmax = std::max(dmax, std::abs(a.pos.x[i] - base.pos.x[i]));
      dmax = std::max(dmax, std::abs(a.pos.y[i] - base.pos.y[i]));
      CHECK(a.pos.z[i] == 0.0);
    }
    CHECK(dmax <= 0.01);
    CHECK(dmax > 0.005);
  }

  TEST_CASE("perturbation only touches the selected tags") {
    ParticleSet ps(2);
    ps.add({0, 0, 0}, 1.0, 1.0, 1.0, Tag::fluid);
    ps.add({1, 0, 0}, 1.0, 1.0, 1.0, Tag::solid);
    perturb_positions(ps, 0.1, 1);
    CHECK(ps.pos[1] == Vec3{1, 0, 0});
    CHECK(ps.pos[0] != Vec3{0, 0, 0});
  }

  TEST_CASE("remove keeps the survivors in order with their data") {
    ParticleSet ps(2);
    for (int i = 0; i < 5; ++i) {
      const auto k = ps.add({double(i), 0, 0}, 1.0 + i, 0.1, 1.0, i % 2 ? Tag::solid : Tag::fluid);
      ps.p[k] = 10.0 * i;
    }
    const std::vector<std::uint8_t> drop{0, 1, 0, 1, 0};
    ps.remove(drop);
    REQUIRE(ps.size() == 3);
    CHECK(ps.pos.x == std::vector<double>{0.0, 2.0, 4.0});
    CHECK(ps.p == std::vector<double>{0.0, 20.0, 40.0});
    CHECK(ps.m == std::vector<double>{1.0, 3.0, 5.0});
    CHECK(ps.id == std::vector<std::int64_t>{0, 2, 4});
    CHECK(ps.count(Tag::solid) == 0);
  }

  TEST_CASE("ids stay unique after removal and addition") {
    ParticleSet ps(2);
    ps.add({0, 0, 0}, 1, 1, 1, Tag::fluid);
    ps.add({1, 0, 0}, 1, 1, 1, Tag::fluid);
    const std::vector<std::uint8_t> drop{0, 1};
    ps.remove(drop);
    ps.add({2, 0, 0}, 1, 1, 1, Tag::fluid);
    CHECK(ps.id[0] != ps.id[1]);
  }

  TEST_CASE("tag masks select indices in storage order") {
    ParticleSet ps(2);
    ps.add({0, 0, 0}, 1, 1, 1, Tag::solid);
    ps.add({1, 0, 0}, 1, 1, 1, Tag::fluid);
    ps.add({2, 0, 0}, 1, 1, 1, Tag::inlet);
    ps.add({3, 0, 0}, 1, 1, 1, Tag::fluid);
    CHECK(ps.indices(mask(Tag::fluid)) == std::vector<std::uint32_t>{1, 3});
    CHECK(ps.indices(kMovingTags) == std::vector<std::uint32_t>{1, 2, 3});
    CHECK(ps.indices(kAllTags).size() == 4);
    CHECK(ps.count(Tag::fluid) == 2);
  }

  TEST_CASE("all_finite detects NaN in any field") {
    ParticleSet ps(2);
    ps.add({0, 0, 0}, 1, 1, 1, Tag::fluid);
    CHECK(ps.all_finite());
    ps.vel.x[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(ps.all_finite());
    ps.vel.x[0] = 0.0;
    ps.p[0] = std::numeric_limits<double>::infinity();
    CHECK_FALSE(ps.all_finite());
  }

  TEST_CASE("configuration validation") {
    SimConfig cfg;
    cfg.dt = 0.01;
    CHECK_NOTHROW(cfg.validate());
    SimConfig bad = cfg;
    bad.omega = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.epsilon = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.gtvf_substeps = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.min_ppe_iters = 5;
    bad.max_ppe_iters = 4;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.dt = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.dt_policy = TimestepPolicy::adaptive;
    CHECK_NOTHROW(bad.validate());
    const auto kv = cfg.to_key_values();
    CHECK(kv.at("omega") == "0.5");
    CHECK(kv.at("pgrad_form") == "symm");
    CHECK(kv.count("gtvf_stability_cap") == 1);
  }
}
