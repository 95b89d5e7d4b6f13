#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "nbe/errors.hpp"
#include "nbe/rng.hpp"
#include "nbe/space.hpp"

namespace nbe {

// One continuous self-map of a space.
//   Affine      x -> a*x + b (mod 1) per coordinate, integer a >= 1 (degree-a
//               circle map, so it is continuous on the wrap metric).
//   Tent        x -> s * min(x, 1-x), 0 < s <= 2.
//   Logistic    x -> lam * x * (1-x), 0 < lam <= 4.
//   Contraction x -> c * x, 0 < c < 1.
//   Shift       drop the leading symbol of a word.
struct MapDescriptor {
  enum class Kind { Affine, Tent, Logistic, Contraction, Shift };

  Kind kind = Kind::Affine;
  std::vector<std::int64_t> slopes;  // Affine: per coordinate
  std::vector<double> offsets;       // Affine: per coordinate
  double param = 0.0;                // Tent slope / Logistic lambda / Contraction factor

  static MapDescriptor affine(std::vector<std::int64_t> a, std::vector<double> b) {
    if (a.empty() || a.size() != b.size()) throw ArgumentError("affine map needs matching a,b");
    for (auto s : a) {
      if (s < 1) throw ArgumentError("affine slope must be an integer >= 1");
    }
    MapDescriptor m;
    m.kind = Kind::Affine;
    m.slopes = std::move(a);
    m.offsets = std::move(b);
    return m;
  }
  static MapDescriptor tent(double s) {
    if (!(s > 0.0 && s <= 2.0)) throw ArgumentError("tent slope must be in (0,2]");
    MapDescriptor m;
    m.kind = Kind::Tent;
    m.param = s;
    return m;
  }
  static MapDescriptor logistic(double lam) {
    if (!(lam > 0.0 && lam <= 4.0)) throw ArgumentError("logistic parameter must be in (0,4]");
    MapDescriptor m;
    m.kind = Kind::Logistic;
    m.param = lam;
    return m;
  }
  static MapDescriptor contraction(double c) {
    if (!(c > 0.0 && c < 1.0)) throw ArgumentError("contraction factor must be in (0,1)");
    MapDescriptor m;
    m.kind = Kind::Contraction;
    m.param = c;
    return m;
  }
  static MapDescriptor shift() {
    MapDescriptor m;
    m.kind = Kind::Shift;
    return m;
  }

  bool is_symbolic() const { return kind == Kind::Shift; }

  // Lipschitz bound on the space metric; used to scale cover nets.
  double lipschitz() const {
    switch (kind) {
      case Kind::Affine: {
        std::int64_t a = 1;
        for (auto s : slopes) a = std::max(a, s);
        return static_cast<double>(a);
      }
      case Kind::Tent: return param;
      case Kind::Logistic: return param;       // |f'| <= lam on [0,1]
      case Kind::Contraction: return 1.0;      // wrap distance can grow up to 1x
      case Kind::Shift: return std::exp(1.0);  // one lost symbol per step
    }
    return 1.0;
  }

  Point apply(const Space& space, const Point& x) const {
    switch (kind) {
      case Kind::Affine: {
        if (space.is_symbolic() || static_cast<int>(slopes.size()) != space.dim())
          throw DomainError("affine map dimension mismatch");
        Point y = x;
        for (std::size_t i = 0; i < y.coords.size(); ++i) {
          double v = std::fma(static_cast<double>(slopes[i]), y.coords[i], offsets[i]);
          v -= std::floor(v);
          if (v >= 1.0) v = 0.0;  // guard against floor rounding at the seam
          y.coords[i] = v;
        }
        return y;
      }
      case Kind::Tent: {
        Point y = x;
        for (double& v : y.coords) v = param * std::min(v, 1.0 - v);
        return y;
      }
      case Kind::Logistic: {
        Point y = x;
        for (double& v : y.coords) v = param * v * (1.0 - v);
        return y;
      }
      case Kind::Contraction: {
        Point y = x;
        for (double& v : y.coords) v *= param;
        return y;
      }
      case Kind::Shift: {
        if (!space.is_symbolic()) throw DomainError("shift needs a symbolic space");
        if (x.symbols.size() <= 1) throw DomainError("word too short to shift within horizon");
        Point y;
        y.symbols.assign(x.symbols.begin() + 1, x.symbols.end());
        return y;
      }
    }
    throw DomainError("unknown map kind");
  }

  std::string describe() const {
    switch (kind) {
      case Kind::Affine: {
        std::string s = "affine:";
        for (std::size_t i = 0; i < slopes.size(); ++i) {
          if (i) s += ";";
          s += std::to_string(slopes[i]) + "," + std::to_string(offsets[i]);
        }
        return s;
      }
      case Kind::Tent: return "tent:" + std::to_string(param);
      case Kind::Logistic: return "logistic:" + std::to_string(param);
      case Kind::Contraction: return "contraction:" + std::to_string(param);
      case Kind::Shift: return "lshift";
    }
    return "?";
  }
};

// The rule generating f_1, f_2, ...  Deterministic: map_at(n) is a pure
// function of the rule (and seed, for switched sequences).
class MapSequence {
 public:
  enum class Rule { Autonomous, Periodic, Switched };

  static MapSequence autonomous(MapDescriptor m) {
    MapSequence s;
    s.rule_ = Rule::Autonomous;
    s.maps_ = {std::move(m)};
    return s;
  }
  static MapSequence periodic(std::vector<MapDescriptor> ms) {
    if (ms.empty()) throw ArgumentError("periodic rule needs at least one map");
    MapSequence s;
    s.rule_ = Rule::Periodic;
    s.maps_ = std::move(ms);
    return s;
  }
  static MapSequence switched(std::uint64_t seed, std::vector<MapDescriptor> ms,
                              std::vector<double> weights) {
    if (ms.empty() || ms.size() != weights.size())
      throw ArgumentError("switched rule needs maps with matching weights");
    double tot = 0.0;
    for (double w : weights) {
      if (!(w > 0.0)) throw ArgumentError("switch weights must be positive");
      tot += w;
    }
    MapSequence s;
    s.rule_ = Rule::Switched;
    s.maps_ = std::move(ms);
    s.weights_ = std::move(weights);
    for (double& w : s.weights_) w /= tot;
    s.seed_ = seed;
    return s;
  }

  Rule rule() const { return rule_; }
  const std::vector<MapDescriptor>& maps() const { return maps_; }
  std::uint64_t seed() const { return seed_; }

  // f_n, 1-based time index.
  const MapDescriptor& map_at(std::int64_t n) const {
    if (n < 1) throw ArgumentError("map index must be >= 1");
    switch (rule_) {
      case Rule::Autonomous: return maps_[0];
      case Rule::Periodic: return maps_[static_cast<std::size_t>((n - 1) % maps_.size())];
      case Rule::Switched: {
        Rng r(seed_ ^ static_cast<std::uint64_t>(n) * 0x9e3779b97f4a7c15ULL);
        double u = r.next_double();
        double acc = 0.0;
        for (std::size_t i = 0; i < maps_.size(); ++i) {
          acc += weights_[i];
          if (u < acc) return maps_[i];
        }
        return maps_.back();
      }
    }
    throw ArgumentError("unknown sequence rule");
  }

  bool is_symbolic() const { return maps_[0].is_symbolic(); }

  std::string describe() const {
    switch (rule_) {
      case Rule::Autonomous: return maps_[0].describe();
      case Rule::Periodic: {
        std::string s = "periodic:";
        for (std::size_t i = 0; i < maps_.size(); ++i) {
          if (i) s += "|";
          s += maps_[i].describe();
        }
        return s;
      }
      case Rule::Switched: {
        std::string s = "switched:" + std::to_string(seed_) + ":";
        for (std::size_t i = 0; i < maps_.size(); ++i) {
          if (i) s += "|";
          s += maps_[i].describe() + "@" + std::to_string(weights_[i]);
        }
        return s;
      }
    }
    return "?";
  }

 private:
  MapSequence() = default;
  Rule rule_ = Rule::Autonomous;
  std::vector<MapDescriptor> maps_;
  std::vector<double> weights_;
  std::uint64_t seed_ = 0;
};

}  // namespace nbe
