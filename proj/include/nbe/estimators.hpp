#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nbe/cover.hpp"
#include "nbe/lp.hpp"
#include "nbe/measure.hpp"
#include "nbe/zset.hpp"

namespace nbe {

inline constexpr double kInfValue = std::numeric_limits<double>::infinity();

// One table row: best found cover cost at (n, alpha).
struct ValueRow {
  std::int64_t n = 0;
  double value = 0.0;
  std::string family;  // greedy | exact | lp
};

struct ValueTable {
  double eps = 0.0;
  RadiusMode mode = RadiusMode::Neutralized;
  std::int64_t n_max = 0;
  double alpha = 0.0;
  std::vector<ValueRow> rows;

  // Values must not decrease with n at fixed alpha.
  bool monotone_in_n(double tol = 1e-12) const;
};

enum class CoverMode { Greedy, Exact };

struct EvalOptions {
  CoverMode mode = CoverMode::Greedy;
  RadiusMode radius = RadiusMode::Neutralized;
  std::int64_t start = 1;         // initial time i
  std::int64_t n_max = 0;         // largest allowed order
  std::int64_t ground = 512;      // ground sample size for instance backends
  std::uint64_t seed = 1;
  std::size_t max_cells = 6'000'000;  // instance membership budget
  bool force_instance = false;    // weighted covers on proper subshifts need it
};

// Evaluates restricted cover costs for one (system, Z, eps). Backends:
//   Arc       1-d affine/contraction sequences, Z full or an interval;
//             per-order exact sweeps over net-centred certified arcs.
//   Automaton symbolic space, Z full or a pair-subshift; exact stateful
//             dynamic program over nested cylinders.
//   Instance  everything else: explicit FiniteInstance on a sampled ground.
// Reported values are costs of genuine covers of the restricted family, so
// they are upper bounds of the unrestricted infimum by construction.
class OuterEvaluator {
 public:
  OuterEvaluator(System sys, SetSpec z, double eps, EvalOptions opts);
  ~OuterEvaluator();
  OuterEvaluator(OuterEvaluator&&) noexcept;

  double value(std::int64_t n, double alpha) const;        // one row
  std::vector<ValueRow> rows(const std::vector<std::int64_t>& schedule, double alpha) const;
  double count_at_alpha0(std::int64_t n) const;             // cover cardinality

  // Cost of the best cover restricted to order exactly m. The table values
  // are running minima over allowed orders and hence monotone by
  // construction; divergence detection needs these raw uniform-order sums.
  double stratum_value(std::int64_t m, double alpha) const;
  std::vector<ValueRow> stratum_rows(const std::vector<std::int64_t>& schedule,
                                     double alpha) const;
  std::string backend_name() const;
  std::string family() const;
  const FiniteInstance* instance() const;                   // Instance backend only

  // Fractional (weighted) cover value; exact LP on instance backends, the
  // partition value on full shifts. Throws SizeError where no exact
  // fractional route exists.
  double fractional_value(std::int64_t n, double alpha) const;
  double fractional_stratum_value(std::int64_t m, double alpha) const;

  const System& system() const;
  double eps() const;
  const EvalOptions& options() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Spec-level entries: cost of the best found cover of Z by balls with orders
// in [n, n_max] at the given scale.
double outer_M(const System& sys, const SetSpec& z, std::int64_t n, double alpha, double eps,
               std::int64_t n_max, CoverMode mode, const EvalOptions& base = {});

struct WeightedValue {
  double value = 0.0;
  std::vector<double> weights;
};
WeightedValue outer_W(const FiniteInstance& inst, double alpha);

// ---------------------------------------------------------------------------
// Critical exponent: where the cover-cost limit flips between divergence and
// decay. At a candidate alpha the n-schedule of values is classified by the
// sign of the fitted growth rate of ln(value) in n (a diverging table means
// alpha is below the critical value); bisection then narrows the flip point
// to the requested width. Exact for value families C * e^{n(c-alpha)}.
// ---------------------------------------------------------------------------

struct ExponentReport {
  double eps = 0.0;
  double alpha_star = 0.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  double bracket_width = 0.0;
  double threshold_hi = 1e6, threshold_lo = 1e-6;
  double residual_lo = 0.0, residual_hi = 0.0;  // value at n_last on final bracket ends
  std::string family;
  int widenings = 0;
  bool monotone_ok = true;  // value at n_last nonincreasing over evaluated alphas
  std::vector<std::pair<double, bool>> evaluations;  // (alpha, classified-below)
};

struct ExponentOptions {
  double bracket_lo = -1.0;
  double bracket_hi = 6.0;
  double bracket_width = 1e-3;
  double threshold_hi = 1e6;
  double threshold_lo = 1e-6;
  int max_widenings = 3;
};

using ValueFn = std::function<std::vector<ValueRow>(double alpha)>;

ExponentReport critical_exponent(const ValueFn& fn, const std::vector<std::int64_t>& schedule,
                                 const ExponentOptions& opts);

// ---------------------------------------------------------------------------
// Entropy curves over a decreasing eps schedule.
// ---------------------------------------------------------------------------

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::string note = "extrapolation, not a theorem";
};

struct EntropyCurve {
  std::vector<std::pair<double, ExponentReport>> points;  // eps descending
  std::optional<LinearFit> fit;
};

EntropyCurve entropy_NB(const System& sys, const SetSpec& z, const std::vector<double>& eps_schedule,
                        const std::vector<std::int64_t>& n_schedule, const EvalOptions& opts,
                        const ExponentOptions& xopts = {});

EntropyCurve entropy_NWB(const System& sys, const SetSpec& z, const std::vector<double>& eps_schedule,
                         const std::vector<std::int64_t>& n_schedule, const EvalOptions& opts,
                         const ExponentOptions& xopts = {});

// ---------------------------------------------------------------------------
// Local (Brin-Katok style) and measure (Katok style) quantities.
// ---------------------------------------------------------------------------

// min over n in [window.first, window.second] of -ln mu(B_n(x, r_n)) / n,
// with zero mass contributing the infinite marker.
double bk_local(const FiniteMeasure& mu, const System& sys, const Point& x, double eps,
                std::pair<std::int64_t, std::int64_t> window,
                RadiusMode mode = RadiusMode::Neutralized, std::int64_t start = 1);

struct BkResult {
  double value = 0.0;              // mass-weighted average (inf if any weighted inf)
  double sample_std_error = 0.0;   // spread of the per-atom values
  std::vector<double> locals;      // one per atom
};
BkResult bk_entropy(const FiniteMeasure& mu, const System& sys, double eps,
                    std::pair<std::int64_t, std::int64_t> window,
                    RadiusMode mode = RadiusMode::Neutralized, std::int64_t start = 1);

// Cheapest subfamily of the instance capturing mu-mass > 1-delta.
double katok_Lambda(const FiniteInstance& inst, const std::vector<double>& point_mass,
                    double alpha, double delta, CoverMode mode);

struct KatokPoint {
  double eps = 0.0;
  double delta = 0.0;
  ExponentReport report;
};
struct KatokReport {
  std::vector<KatokPoint> points;   // per (eps, delta), delta descending inside eps
  // value at the smallest delta per eps is the reported exponent
};

// Instance for a measure: ground = atoms, candidates anchored on the atoms.
FiniteInstance measure_instance(const System& sys, const FiniteMeasure& mu, std::int64_t n,
                                std::int64_t n_max, double eps, RadiusMode mode,
                                std::int64_t start = 1);

KatokReport katok_entropy(const System& sys, const FiniteMeasure& mu,
                          const std::vector<double>& eps_schedule,
                          const std::vector<double>& delta_schedule,
                          const std::vector<std::int64_t>& n_schedule, const EvalOptions& opts,
                          const ExponentOptions& xopts = {});

// Least-squares slope of y over x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nbe
