#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nbe/dynamics.hpp"
#include "nbe/zset.hpp"

namespace nbe {

// Example systems with independently derivable scale-exponent ground truth.
// Every reference function ships with an executable counting oracle; the
// reference is never a bare constant.
struct ZooEntry {
  ZooEntry(std::string name_, System system_, double lipschitz_,
           std::function<double(double)> alpha_ref_, std::string derivation_,
           bool exploratory_ = false)
      : name(std::move(name_)), system(std::move(system_)), lipschitz(lipschitz_),
        alpha_ref(std::move(alpha_ref_)), derivation(std::move(derivation_)),
        exploratory(exploratory_) {}

  std::string name;
  System system;
  double lipschitz = 1.0;                       // declared per-map bound
  std::function<double(double)> alpha_ref;      // eps -> reference exponent
  std::string derivation;                       // how alpha_ref was obtained
  bool exploratory = false;                     // no ground truth; skip acceptance

  // Covering-count oracle at alpha = 0: minimal number of order-n balls of
  // scale eps needed to cover the space. Interval entries use the arc-length
  // formula; symbolic entries count admissible cylinders.
  double oracle_count(std::int64_t n, double eps,
                      RadiusMode mode = RadiusMode::Neutralized) const;
};

const std::vector<ZooEntry>& zoo_entries();
const ZooEntry& zoo_lookup(const std::string& name);
std::vector<std::string> zoo_names();

struct ReferenceValue {
  double value = 0.0;
  std::string derivation;
};
ReferenceValue reference_exponent(const std::string& name, double eps);

}  // namespace nbe
