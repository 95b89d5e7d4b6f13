#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nbe/errors.hpp"
#include "nbe/space.hpp"

namespace nbe {

// Descriptor of the target set Z. Interval acts on the first coordinate of a
// continuous space; AvoidPairs restricts symbolic words by forbidden length-2
// factors (a subshift inside the ambient shift space). Union is a finite
// union of sub-descriptors.
struct SetSpec {
  enum class Kind { Full, Interval, AvoidPairs, Union };

  Kind kind = Kind::Full;
  double lo = 0.0, hi = 1.0;                      // Interval
  std::vector<std::pair<int, int>> avoid_pairs;   // AvoidPairs
  std::vector<SetSpec> parts;                     // Union

  static SetSpec full() { return SetSpec{}; }

  static SetSpec interval(double lo, double hi) {
    if (!(lo >= 0.0 && lo < hi && hi <= 1.0))
      throw ArgumentError("interval set needs 0 <= lo < hi <= 1");
    SetSpec s;
    s.kind = Kind::Interval;
    s.lo = lo;
    s.hi = hi;
    return s;
  }

  static SetSpec avoid(std::vector<std::pair<int, int>> pairs) {
    SetSpec s;
    s.kind = Kind::AvoidPairs;
    s.avoid_pairs = std::move(pairs);
    return s;
  }

  static SetSpec unite(std::vector<SetSpec> parts) {
    if (parts.empty()) throw ArgumentError("union set needs parts");
    SetSpec s;
    s.kind = Kind::Union;
    s.parts = std::move(parts);
    return s;
  }

  bool contains(const Point& p) const {
    switch (kind) {
      case Kind::Full: return true;
      case Kind::Interval: return !p.coords.empty() && p.coords[0] >= lo && p.coords[0] < hi;
      case Kind::AvoidPairs: {
        for (std::size_t i = 0; i + 1 < p.symbols.size(); ++i) {
          for (auto& q : avoid_pairs) {
            if (p.symbols[i] == q.first && p.symbols[i + 1] == q.second) return false;
          }
        }
        return true;
      }
      case Kind::Union: {
        for (const auto& part : parts) {
          if (part.contains(p)) return true;
        }
        return false;
      }
    }
    return false;
  }

  std::string describe() const {
    switch (kind) {
      case Kind::Full: return "full";
      case Kind::Interval:
        return "interval:" + std::to_string(lo) + "," + std::to_string(hi);
      case Kind::AvoidPairs: {
        std::string s = "avoid:";
        for (std::size_t i = 0; i < avoid_pairs.size(); ++i) {
          if (i) s += "|";
          s += std::to_string(avoid_pairs[i].first) + std::to_string(avoid_pairs[i].second);
        }
        return s;
      }
      case Kind::Union: {
        std::string s = "union(";
        for (std::size_t i = 0; i < parts.size(); ++i) {
          if (i) s += ";";
          s += parts[i].describe();
        }
        return s + ")";
      }
    }
    return "?";
  }

  // Forbidden pairs of the subshift Z inside a symbolic space (the space's
  // own forbidden pairs plus the set's).
  std::vector<std::pair<int, int>> combined_pairs(const Space& space) const {
    auto pairs = space.forbidden_pairs();
    if (kind == Kind::AvoidPairs)
      pairs.insert(pairs.end(), avoid_pairs.begin(), avoid_pairs.end());
    return pairs;
  }
};

}  // namespace nbe
