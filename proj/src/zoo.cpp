#include "nbe/zoo.hpp"

#include <cmath>

#include "nbe/errors.hpp"
#include "nbe/symbolic_counts.hpp"

namespace nbe {

namespace {

constexpr int kHorizon = 32;

double mode_radius(RadiusMode mode, std::int64_t order, double eps) {
  BallSpec b;
  b.order = order;
  b.mode = mode;
  b.eps = eps;
  return b.effective_radius();
}

// Open arcs of length `len` covering a circle of circumference 1 (or the
// segment [0,1) when wrap is unavailable): floor(1/len) + 1.
double open_arc_count(double len, bool wraps) {
  if (wraps && len >= 1.0) return 1.0;
  if (!wraps && len > 1.0) return 1.0;
  double q = 1.0 / len;
  double fl = std::floor(q + 1e-12);
  if (std::fabs(q - fl) < 1e-12) return fl + 1.0;  // exact fit: open arcs need one more
  return std::ceil(q);
}

ZooEntry make_interval_entry(std::string name, MapSequence maps, double lip,
                             double rate, std::string derivation) {
  return ZooEntry(std::move(name), System{Space::unit_interval(), std::move(maps)}, lip,
                  [rate](double eps) { return rate + eps; }, std::move(derivation));
}

ZooEntry make_shift_entry(std::string name, Space space, double growth_log,
                          std::string derivation) {
  return ZooEntry(std::move(name),
                  System{std::move(space), MapSequence::autonomous(MapDescriptor::shift())},
                  std::exp(1.0),
                  [growth_log](double eps) { return (1.0 + eps) * growth_log; },
                  std::move(derivation));
}

std::vector<ZooEntry> build_entries() {
  std::vector<ZooEntry> v;

  v.push_back(make_interval_entry(
      "identity", MapSequence::autonomous(MapDescriptor::affine({1}, {0.0})), 1.0, 0.0,
      "static covering: balls are arcs of length 2e^{-n eps}, count ~ e^{n eps}/2, "
      "growth rate eps (box dimension 1)"));

  v.push_back(make_interval_entry(
      "contraction", MapSequence::autonomous(MapDescriptor::contraction(0.5)), 1.0, 0.0,
      "halving map: the first iterate dominates the dynamical distance, so covering "
      "is static; growth rate eps"));

  v.push_back(make_interval_entry(
      "doubling", MapSequence::autonomous(MapDescriptor::affine({2}, {0.0})), 2.0,
      std::log(2.0),
      "dynamical balls are arcs of length 2e^{-n eps}/2^{n-1}; the interval-count "
      "oracle gives growth rate ln 2 + eps"));

  v.push_back(make_interval_entry(
      "tripling", MapSequence::autonomous(MapDescriptor::affine({3}, {0.0})), 3.0,
      std::log(3.0), "as for doubling with slope 3: growth rate ln 3 + eps"));

  v.push_back(make_interval_entry(
      "periodic-23",
      MapSequence::periodic({MapDescriptor::affine({2}, {0.0}), MapDescriptor::affine({3}, {0.0})}),
      3.0, 0.5 * (std::log(2.0) + std::log(3.0)),
      "slope product over one period is 6; averaged expansion (ln 2 + ln 3)/2 plus eps"));

  v.push_back(make_shift_entry(
      "full-shift-2", Space::symbolic(2, kHorizon), std::log(2.0),
      "cylinder count k^{len(n,eps)}; exponent (1 + ceil-part) ln 2 -> (1+eps) ln 2"));

  v.push_back(make_shift_entry(
      "full-shift-3", Space::symbolic(3, kHorizon), std::log(3.0),
      "cylinder count 3^{len(n,eps)}; exponent -> (1+eps) ln 3"));

  v.push_back(make_shift_entry(
      "golden-mean", Space::symbolic(2, kHorizon, {{1, 1}}),
      std::log(0.5 * (1.0 + std::sqrt(5.0))),
      "transfer-matrix word count grows like phi^len; exponent -> (1+eps) ln phi"));

  v.push_back(ZooEntry(
      "switched-23",
      System{Space::unit_interval(),
             MapSequence::switched(1234,
                                   {MapDescriptor::affine({2}, {0.0}),
                                    MapDescriptor::affine({3}, {0.0})},
                                   {0.5, 0.5})},
      3.0, [](double) { return 0.0; },
      "random switching: no closed-form exponent; exploratory only", true));

  v.push_back(ZooEntry(
      "tent-2", System{Space::unit_interval(), MapSequence::autonomous(MapDescriptor::tent(2.0))},
      2.0, [](double) { return 0.0; }, "non-affine ball geometry; exploratory only", true));
  return v;
}

}  // namespace

double ZooEntry::oracle_count(std::int64_t n, double eps, RadiusMode mode) const {
  double r = mode_radius(mode, n, eps);
  if (system.space.is_symbolic()) {
    int len = cylinder_length(n, mode, eps);
    if (len < 1) len = 1;
    if (len > system.space.horizon())
      throw ConfigError("oracle scale infeasible for the horizon");
    TransferCounts tc(system.space.alphabet(), system.space.forbidden_pairs());
    return tc.count_words(len);
  }
  auto prof = affine_profile(system, 1, n);
  if (!prof) throw LookupError("no counting oracle for this entry");
  double rho = certified_arc_halflength(*prof, r);
  if (!prof->euclidean && rho >= 0.5) return 1.0;
  return open_arc_count(2.0 * rho, !prof->euclidean);
}

const std::vector<ZooEntry>& zoo_entries() {
  static const std::vector<ZooEntry> entries = build_entries();
  return entries;
}

const ZooEntry& zoo_lookup(const std::string& name) {
  for (const ZooEntry& e : zoo_entries()) {
    if (e.name == name) return e;
  }
  throw LookupError("unknown zoo entry: " + name);
}

std::vector<std::string> zoo_names() {
  std::vector<std::string> names;
  for (const ZooEntry& e : zoo_entries()) names.push_back(e.name);
  return names;
}

ReferenceValue reference_exponent(const std::string& name, double eps) {
  const ZooEntry& e = zoo_lookup(name);
  return ReferenceValue{e.alpha_ref(eps), e.derivation};
}

}  // namespace nbe
