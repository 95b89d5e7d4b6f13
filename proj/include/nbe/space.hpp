#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nbe/errors.hpp"

namespace nbe {

// A point of one of the supported spaces. Continuous spaces use `coords`
// (values in [0,1) per coordinate); symbolic spaces use `symbols` (a word
// over {0..k-1}, at most the horizon long; shifting shortens it).
struct Point {
  std::vector<double> coords;
  std::vector<int> symbols;

  bool operator==(const Point& o) const {
    return coords == o.coords && symbols == o.symbols;
  }
  // Lexicographic order; used for deterministic tie-breaking.
  bool operator<(const Point& o) const {
    if (coords != o.coords) return coords < o.coords;
    return symbols < o.symbols;
  }
};

enum class SpaceKind { UnitInterval, Torus, SymbolicShift };

// Compact metric space: the circle [0,1) with wrap distance, a torus of the
// same flavour in d coordinates (sup metric), or a shift space of words with
// horizon L over {0..k-1}, restricted by forbidden length-2 factors.
// Symbolic distance is exp(-t) with t the length of the common prefix over
// the compared range, 0 if the words agree on the full common horizon.
class Space {
 public:
  static Space unit_interval() { return Space(SpaceKind::UnitInterval, 1, 0, 0, {}); }

  static Space torus(int dim) {
    if (dim < 1) throw ArgumentError("torus dimension must be >= 1");
    return Space(SpaceKind::Torus, dim, 0, 0, {});
  }

  static Space symbolic(int alphabet, int horizon,
                        std::vector<std::pair<int, int>> forbidden_pairs = {}) {
    if (alphabet < 2) throw ArgumentError("alphabet size must be >= 2");
    if (horizon < 1) throw ArgumentError("horizon must be >= 1");
    for (auto& p : forbidden_pairs) {
      if (p.first < 0 || p.first >= alphabet || p.second < 0 || p.second >= alphabet)
        throw ArgumentError("forbidden pair symbol out of range");
    }
    return Space(SpaceKind::SymbolicShift, 0, alphabet, horizon, std::move(forbidden_pairs));
  }

  SpaceKind kind() const { return kind_; }
  bool is_symbolic() const { return kind_ == SpaceKind::SymbolicShift; }
  int dim() const { return dim_; }
  int alphabet() const { return alphabet_; }
  int horizon() const { return horizon_; }
  const std::vector<std::pair<int, int>>& forbidden_pairs() const { return forbidden_; }

  bool transition_allowed(int a, int b) const {
    for (auto& p : forbidden_) {
      if (p.first == a && p.second == b) return false;
    }
    return true;
  }

  bool word_admissible(const std::vector<int>& w) const {
    for (int s : w) {
      if (s < 0 || s >= alphabet_) return false;
    }
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (!transition_allowed(w[i], w[i + 1])) return false;
    }
    return true;
  }

  bool contains(const Point& p) const {
    if (is_symbolic()) {
      if (!p.coords.empty() || p.symbols.empty()) return false;
      if (static_cast<int>(p.symbols.size()) > horizon_) return false;
      return word_admissible(p.symbols);
    }
    if (!p.symbols.empty()) return false;
    if (static_cast<int>(p.coords.size()) != dim_) return false;
    for (double c : p.coords) {
      if (!(c >= 0.0 && c < 1.0)) return false;
    }
    return true;
  }

  void require_point(const Point& p) const {
    if (!contains(p)) throw DomainError("point is not a valid point of the space");
  }

  double distance(const Point& a, const Point& b) const {
    if (is_symbolic()) {
      std::size_t n = std::min(a.symbols.size(), b.symbols.size());
      for (std::size_t t = 0; t < n; ++t) {
        if (a.symbols[t] != b.symbols[t]) return std::exp(-static_cast<double>(t));
      }
      return 0.0;  // equal over the shared horizon
    }
    double d = 0.0;
    for (int i = 0; i < dim_; ++i) {
      double u = std::fabs(a.coords[i] - b.coords[i]);
      double w = std::min(u, 1.0 - u);
      if (w > d) d = w;
    }
    return d;
  }

  double diameter() const { return is_symbolic() ? 1.0 : 0.5; }

  // Grow a word to `len` symbols, appending the smallest admissible symbol.
  std::vector<int> extend_word(std::vector<int> w, int len) const {
    while (static_cast<int>(w.size()) < len) {
      int prev = w.empty() ? -1 : w.back();
      int next = -1;
      for (int s = 0; s < alphabet_; ++s) {
        if (prev < 0 || transition_allowed(prev, s)) { next = s; break; }
      }
      if (next < 0) throw DomainError("no admissible extension exists");
      w.push_back(next);
    }
    return w;
  }

  std::string describe() const {
    switch (kind_) {
      case SpaceKind::UnitInterval: return "interval";
      case SpaceKind::Torus: return "torus:" + std::to_string(dim_);
      case SpaceKind::SymbolicShift: {
        std::string s = "shift:k=" + std::to_string(alphabet_) + ",L=" + std::to_string(horizon_);
        if (!forbidden_.empty()) {
          s += ",avoid=";
          for (std::size_t i = 0; i < forbidden_.size(); ++i) {
            if (i) s += "|";
            s += std::to_string(forbidden_[i].first) + std::to_string(forbidden_[i].second);
          }
        }
        return s;
      }
    }
    return "?";
  }

  bool operator==(const Space& o) const {
    return kind_ == o.kind_ && dim_ == o.dim_ && alphabet_ == o.alphabet_ &&
           horizon_ == o.horizon_ && forbidden_ == o.forbidden_;
  }

 private:
  Space(SpaceKind kind, int dim, int alphabet, int horizon,
        std::vector<std::pair<int, int>> forbidden)
      : kind_(kind), dim_(dim), alphabet_(alphabet), horizon_(horizon),
        forbidden_(std::move(forbidden)) {}

  SpaceKind kind_;
  int dim_;
  int alphabet_;
  int horizon_;
  std::vector<std::pair<int, int>> forbidden_;
};

inline Point real_point(double x) { return Point{{x}, {}}; }
inline Point real_point(std::vector<double> xs) { return Point{std::move(xs), {}}; }
inline Point word_point(std::vector<int> w) { return Point{{}, std::move(w)}; }

}  // namespace nbe
