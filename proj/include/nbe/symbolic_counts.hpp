#pragma once

#include <cstdint>
#include <vector>

#include "nbe/errors.hpp"

namespace nbe {

// Word counting for shifts of finite type given by forbidden length-2
// factors. Counts are exact in double precision while below 2^53; lengths
// used here stay far under that.
class TransferCounts {
 public:
  TransferCounts(int alphabet, const std::vector<std::pair<int, int>>& forbidden_pairs)
      : k_(alphabet), allowed_(static_cast<std::size_t>(alphabet * alphabet), 1) {
    if (alphabet < 2) throw ArgumentError("alphabet size must be >= 2");
    for (auto& p : forbidden_pairs) {
      allowed_[static_cast<std::size_t>(p.first * k_ + p.second)] = 0;
    }
  }

  bool allowed(int a, int b) const {
    return allowed_[static_cast<std::size_t>(a * k_ + b)] != 0;
  }

  // Number of admissible words of the given length ending in each symbol.
  std::vector<double> counts_by_state(int length) const {
    if (length < 1) throw ArgumentError("word length must be >= 1");
    std::vector<double> v(static_cast<std::size_t>(k_), 1.0);
    for (int step = 1; step < length; ++step) {
      std::vector<double> w(static_cast<std::size_t>(k_), 0.0);
      for (int b = 0; b < k_; ++b) {
        for (int a = 0; a < k_; ++a) {
          if (allowed(a, b)) w[static_cast<std::size_t>(b)] += v[static_cast<std::size_t>(a)];
        }
      }
      v = std::move(w);
    }
    return v;
  }

  double count_words(int length) const {
    if (length == 0) return 1.0;
    double total = 0.0;
    for (double c : counts_by_state(length)) total += c;
    return total;
  }

  // Number of admissible extensions by `steps` symbols of a word ending in
  // `state`, ending in each symbol.
  std::vector<double> extension_counts(int state, int steps) const {
    std::vector<double> v(static_cast<std::size_t>(k_), 0.0);
    v[static_cast<std::size_t>(state)] = 1.0;
    for (int step = 0; step < steps; ++step) {
      std::vector<double> w(static_cast<std::size_t>(k_), 0.0);
      for (int b = 0; b < k_; ++b) {
        for (int a = 0; a < k_; ++a) {
          if (allowed(a, b)) w[static_cast<std::size_t>(b)] += v[static_cast<std::size_t>(a)];
        }
      }
      v = std::move(w);
    }
    return v;
  }

  int alphabet() const { return k_; }

 private:
  int k_;
  std::vector<char> allowed_;
};

}  // namespace nbe
