#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nbe/errors.hpp"
#include "nbe/maps.hpp"
#include "nbe/space.hpp"

namespace nbe {

// A space together with the rule generating its map sequence.
struct System {
  Space space;
  MapSequence maps;
};

enum class RadiusMode { Fixed, Neutralized };

// Descriptor of a Bowen ball B(x; i, n, r). In Neutralized mode the
// effective radius is exp(-n*eps) exactly; in Fixed mode it is eps itself.
struct BallSpec {
  Point center;
  std::int64_t start = 1;   // initial time i >= 1
  std::int64_t order = 1;   // n >= 1
  RadiusMode mode = RadiusMode::Neutralized;
  double eps = 0.0;         // scale parameter, > 0

  double effective_radius() const {
    if (!(eps > 0.0)) throw ArgumentError("ball scale must be positive");
    if (mode == RadiusMode::Fixed) return eps;
    return std::exp(-static_cast<double>(order) * eps);
  }
};

// f_i^n(x) = f_{i+n-1} o ... o f_i (x); n = 0 is the identity.
inline Point compose(const System& sys, std::int64_t i, std::int64_t n, Point x) {
  if (i < 1) throw ArgumentError("start index must be >= 1");
  if (n < 0) throw ArgumentError("iteration count must be >= 0");
  sys.space.require_point(x);
  for (std::int64_t j = 0; j < n; ++j) {
    x = sys.maps.map_at(i + j).apply(sys.space, x);
  }
  return x;
}

// d_{i,n}(x,y) = max_{0 <= j <= n-1} d(f_i^j x, f_i^j y).
inline double bowen_dist(const System& sys, std::int64_t i, std::int64_t n,
                         const Point& x, const Point& y) {
  if (n < 1) throw ArgumentError("Bowen metric order must be >= 1");
  if (i < 1) throw ArgumentError("start index must be >= 1");
  sys.space.require_point(x);
  sys.space.require_point(y);
  Point a = x, b = y;
  double d = sys.space.distance(a, b);
  for (std::int64_t j = 1; j < n; ++j) {
    const MapDescriptor& f = sys.maps.map_at(i + j - 1);
    a = f.apply(sys.space, a);
    b = f.apply(sys.space, b);
    d = std::max(d, sys.space.distance(a, b));
  }
  return d;
}

// Strict inequality: boundary points are outside.
inline bool ball_contains(const System& sys, const BallSpec& ball, const Point& y) {
  return bowen_dist(sys, ball.start, ball.order, ball.center, y) < ball.effective_radius();
}

// ---------------------------------------------------------------------------
// Symbolic cylinder structure.
//
// With d = exp(-(length of common prefix)), membership in B(x; i, n, r)
// requires, at each shift j in [0, n-1], a common prefix longer than
// ln(1/r), i.e. agreement on absolute positions j .. j+floor(ln(1/r)).
// The union over j gives agreement on the first (n-1) + floor(ln(1/r)) + 1
// positions. Scales within 1e-9 of an integer are snapped so that
// exp(-n*eps) with n*eps integral lands on the intended boundary.
// ---------------------------------------------------------------------------

inline int symbolic_agreement_span(double radius) {
  if (!(radius > 0.0)) throw ArgumentError("ball radius must be positive");
  double x = -std::log(radius);
  int span = static_cast<int>(std::floor(x + 1e-9)) + 1;
  return span < 0 ? 0 : span;  // radius above the diameter: everything is inside
}

// Word length whose cylinder equals the ball of the given spec.
inline int cylinder_length(const BallSpec& ball) {
  return static_cast<int>(ball.order - 1) + symbolic_agreement_span(ball.effective_radius());
}

inline int cylinder_length(std::int64_t order, RadiusMode mode, double eps) {
  BallSpec b;
  b.order = order;
  b.mode = mode;
  b.eps = eps;
  return static_cast<int>(order - 1) + symbolic_agreement_span(b.effective_radius());
}

// ---------------------------------------------------------------------------
// One-dimensional affine geometry.
//
// For sequences of integer-slope affine circle maps, |x-y| < r / A(n-1)
// (wrap distance; A(j) = product of the first j slopes from time i) implies
// d_{i,n}(x,y) < r, and when r <= 1/(a_max+1) the implication is exact.
// This backs the fast interval-cover paths; covers built from these certified
// arcs are genuine Bowen-ball covers in every regime.
// ---------------------------------------------------------------------------

struct AffineProfile {
  double slope_product = 1.0;  // A(n-1)
  std::int64_t max_slope = 1;
  bool euclidean = false;      // contraction: certified arcs do not wrap
};

// Returns the profile of the window [i, i+n-1] when every map in it is
// 1-dimensional affine (or contraction), otherwise nullopt.
inline std::optional<AffineProfile> affine_profile(const System& sys, std::int64_t i,
                                                   std::int64_t n) {
  if (sys.space.is_symbolic() || sys.space.dim() != 1) return std::nullopt;
  AffineProfile p;
  for (std::int64_t j = 0; j + 1 < n; ++j) {
    const MapDescriptor& f = sys.maps.map_at(i + j);
    if (f.kind == MapDescriptor::Kind::Affine) {
      p.slope_product *= static_cast<double>(f.slopes[0]);
      p.max_slope = std::max(p.max_slope, f.slopes[0]);
    } else if (f.kind == MapDescriptor::Kind::Contraction) {
      p.euclidean = true;  // later iterates only shrink Euclidean gaps
    } else {
      return std::nullopt;
    }
  }
  // A mixed sequence with contractions keeps the certified radius of the
  // expanding part; contractions cannot enlarge it.
  return p;
}

// Half-length of the certified arc around a center: points within this
// Euclidean / wrap distance are guaranteed inside the ball.
inline double certified_arc_halflength(const AffineProfile& p, double radius) {
  return radius / p.slope_product;
}

inline bool certified_exact(const AffineProfile& p, double radius) {
  if (p.euclidean) return false;
  if (p.max_slope == 1) return true;  // isometries: the ball is the arc itself
  return radius * static_cast<double>(p.max_slope + 1) <= 1.0;
}

}  // namespace nbe
