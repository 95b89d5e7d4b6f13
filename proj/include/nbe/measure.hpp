#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "nbe/dynamics.hpp"
#include "nbe/space.hpp"

namespace nbe {

// Atomic Borel probability measure. Masses sum to 1 within 1e-12; duplicate
// atom points are allowed (masses just add in queries).
class FiniteMeasure {
 public:
  struct Atom {
    Point point;
    double mass;
  };

  FiniteMeasure(Space space, std::vector<Atom> atoms);

  static FiniteMeasure point_mass(const Space& space, Point p);
  static FiniteMeasure uniform_on(const Space& space, std::vector<Point> pts);

  const Space& space() const { return space_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  std::string to_csv() const;
  static FiniteMeasure from_csv(const Space& space, std::istream& in);

 private:
  Space space_;
  std::vector<Atom> atoms_;
};

// How empirical measures draw their initial points.
struct SamplerConfig {
  std::uint64_t seed = 0;
  std::int64_t sample_count = 1;                 // m >= 1
  enum class Init { Grid, Random } init = Init::Grid;
  bool push_random_steps = false;                // push each sample j ~ U{0..T-1} steps
};

// Total mass strictly inside the ball.
double mass_of_ball(const FiniteMeasure& mu, const System& sys, const BallSpec& ball);

// Uniform measure on m initial points pushed forward (per config) from time i.
FiniteMeasure empirical_measure(const System& sys, const SamplerConfig& cfg,
                                std::int64_t time_index, std::int64_t horizon);

// True iff every atom satisfies the predicate.
bool supported_on(const FiniteMeasure& mu, const std::function<bool(const Point&)>& z);

// Deterministic point sampler shared by measures and ground-set construction.
Point sample_point(const Space& space, Rng& rng);
Point grid_point(const Space& space, std::int64_t index, std::int64_t count);

}  // namespace nbe
