#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nbe/errors.hpp"
#include "nbe/measure.hpp"
#include "nbe/zoo.hpp"

using namespace nbe;

TEST_CASE("measure construction invariants") {
  Space in = Space::unit_interval();
  CHECK_THROWS_AS(FiniteMeasure(in, {}), ArgumentError);
  CHECK_THROWS_AS(FiniteMeasure(in, {{real_point(0.2), 0.5}}), ArgumentError);  // sums to 0.5
  CHECK_THROWS_AS(FiniteMeasure(in, {{real_point(0.2), -0.5}, {real_point(0.3), 1.5}}),
                  ArgumentError);
  CHECK_THROWS_AS(FiniteMeasure(in, {{real_point(1.2), 1.0}}), DomainError);
  FiniteMeasure ok(in, {{real_point(0.25), 0.5}, {real_point(0.75), 0.5}});
  CHECK(ok.size() == 2);
}

TEST_CASE("mass_of_ball examples") {
  System id = zoo_lookup("identity").system;

  // point mass at the center
  FiniteMeasure pm = FiniteMeasure::point_mass(id.space, real_point(0.4));
  BallSpec b;
  b.center = real_point(0.4);
  b.order = 3;
  b.eps = 0.5;
  CHECK(mass_of_ball(pm, id, b) == 1.0);

  // uniform on 4 grid points; identity, Neutralized(0.2), n=10 -> radius e^-2
  FiniteMeasure grid = FiniteMeasure::uniform_on(
      id.space, {real_point(0.0), real_point(0.25), real_point(0.5), real_point(0.75)});
  BallSpec g;
  g.center = real_point(0.0);
  g.order = 10;
  g.eps = 0.2;
  CHECK(g.effective_radius() == doctest::Approx(std::exp(-2.0)));
  CHECK(mass_of_ball(grid, id, g) == doctest::Approx(0.25));

  // space mismatch
  System shift = zoo_lookup("full-shift-2").system;
  CHECK_THROWS_AS(mass_of_ball(grid, shift, g), ArgumentError);
}

TEST_CASE("empirical measure mass equals brute-force membership count") {
  System db = zoo_lookup("doubling").system;
  SamplerConfig cfg;
  cfg.seed = 17;
  cfg.sample_count = 100;
  cfg.init = SamplerConfig::Init::Random;
  FiniteMeasure mu = empirical_measure(db, cfg, 1, 8);

  BallSpec b;
  b.center = real_point(0.3125);
  b.order = 4;
  b.eps = 0.3;
  int inside = 0;
  for (const auto& a : mu.atoms()) {
    if (bowen_dist(db, 1, 4, b.center, a.point) < b.effective_radius()) ++inside;
  }
  CHECK(mass_of_ball(mu, db, b) == doctest::Approx(inside / 100.0).epsilon(1e-12));
}

TEST_CASE("empirical measure basics and determinism") {
  System id = zoo_lookup("identity").system;
  SamplerConfig one;
  one.seed = 1;
  one.sample_count = 1;
  CHECK(empirical_measure(id, one, 1, 4).size() == 1);
  CHECK(empirical_measure(id, one, 1, 4).atoms()[0].mass == 1.0);

  SamplerConfig four;
  four.seed = 1;
  four.sample_count = 4;
  four.init = SamplerConfig::Init::Grid;
  FiniteMeasure g = empirical_measure(id, four, 1, 4);
  REQUIRE(g.size() == 4);
  CHECK(g.atoms()[1].point.coords[0] == doctest::Approx(0.25));

  System db = zoo_lookup("doubling").system;
  SamplerConfig rnd;
  rnd.seed = 7;
  rnd.sample_count = 100;
  rnd.init = SamplerConfig::Init::Random;
  rnd.push_random_steps = true;
  FiniteMeasure a = empirical_measure(db, rnd, 1, 16);
  FiniteMeasure b = empirical_measure(db, rnd, 1, 16);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.atoms()[i].point.coords[0] == b.atoms()[i].point.coords[0]);  // bit-exact
    CHECK(a.atoms()[i].mass == b.atoms()[i].mass);
  }
}

TEST_CASE("supported_on") {
  System id = zoo_lookup("identity").system;
  FiniteMeasure mu = FiniteMeasure::uniform_on(id.space, {real_point(0.1), real_point(0.2)});
  CHECK(supported_on(mu, [](const Point& p) { return p.coords[0] < 0.5; }));
  CHECK_FALSE(supported_on(mu, [](const Point& p) { return p.coords[0] < 0.15; }));
  CHECK(supported_on(mu, [](const Point&) { return true; }));
}

TEST_CASE("mass is monotone under ball inclusion and complements add to one") {
  System db = zoo_lookup("doubling").system;
  Rng rng(23);
  SamplerConfig cfg;
  cfg.seed = 2;
  cfg.sample_count = 64;
  cfg.init = SamplerConfig::Init::Random;
  FiniteMeasure mu = empirical_measure(db, cfg, 1, 8);
  for (int t = 0; t < 50; ++t) {
    BallSpec small;
    small.center = sample_point(db.space, rng);
    small.order = 2 + static_cast<std::int64_t>(rng.next_below(4));
    small.eps = 0.2 + rng.next_double();
    BallSpec big = small;  // same center, lower order = larger ball
    big.order = small.order > 1 ? small.order - 1 : 1;
    // inclusion check by sampling
    bool included = true;
    for (int s = 0; s < 40 && included; ++s) {
      Point y = sample_point(db.space, rng);
      if (ball_contains(db, small, y) && !ball_contains(db, big, y)) included = false;
    }
    if (included) CHECK(mass_of_ball(mu, db, small) <= mass_of_ball(mu, db, big) + 1e-12);

    double inside = mass_of_ball(mu, db, small);
    double outside = 0.0;
    for (const auto& a : mu.atoms()) {
      if (!ball_contains(db, small, a.point)) outside += a.mass;
    }
    CHECK(inside + outside == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("measure CSV round trip") {
  System db = zoo_lookup("doubling").system;
  FiniteMeasure mu =
      FiniteMeasure::uniform_on(db.space, {real_point(0.125), real_point(0.625), real_point(0.5)});
  std::istringstream in(mu.to_csv());
  FiniteMeasure back = FiniteMeasure::from_csv(db.space, in);
  REQUIRE(back.size() == mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    CHECK(back.atoms()[i].point.coords[0] == mu.atoms()[i].point.coords[0]);
    CHECK(back.atoms()[i].mass == doctest::Approx(mu.atoms()[i].mass));
  }

  System fs = zoo_lookup("full-shift-2").system;
  SamplerConfig cfg;
  cfg.seed = 5;
  cfg.sample_count = 8;
  cfg.init = SamplerConfig::Init::Random;
  FiniteMeasure w = empirical_measure(fs, cfg, 1, 4);
  std::istringstream win(w.to_csv());
  FiniteMeasure wback = FiniteMeasure::from_csv(fs.space, win);
  REQUIRE(wback.size() == w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    CHECK(wback.atoms()[i].point.symbols == w.atoms()[i].point.symbols);
}
