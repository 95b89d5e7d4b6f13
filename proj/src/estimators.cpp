#include "nbe/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "nbe/errors.hpp"
#include "nbe/rng.hpp"
#include "nbe/symbolic_counts.hpp"

namespace nbe {

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("slope needs >= 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ArgumentError("slope needs distinct x");
  return sxy / sxx;
}

bool ValueTable::monotone_in_n(double tol) const {
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    if (rows[i + 1].value < rows[i].value - tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// OuterEvaluator backends
// ---------------------------------------------------------------------------

namespace {

enum class Backend { Arc, Automaton, Instance };

double mode_radius(RadiusMode mode, std::int64_t order, double eps) {
  BallSpec b;
  b.order = order;
  b.mode = mode;
  b.eps = eps;
  return b.effective_radius();
}

std::string mode_family(CoverMode m) { return m == CoverMode::Greedy ? "greedy" : "exact"; }

}  // namespace

struct OuterEvaluator::Impl {
  System sys;
  SetSpec z;
  double eps;
  EvalOptions opts;
  Backend backend = Backend::Instance;

  // Arc backend: per order m (indexed m - 1), cover cardinality.
  std::vector<double> arc_counts;

  // Automaton backend.
  std::unique_ptr<TransferCounts> automaton;
  std::vector<int> cyl_len;                     // per order m (indexed m - 1)
  std::vector<std::vector<double>> state_counts;  // per order: words by end state
  std::vector<double> union_counts;             // union-of-subshifts mode

  // Instance backend.
  std::unique_ptr<FiniteInstance> inst;
  std::vector<std::vector<std::size_t>> row_balls;  // per order: candidate indices

  double arc_value(std::int64_t n, double alpha) const {
    double best = kInfValue;
    for (std::int64_t m = n; m <= opts.n_max; ++m) {
      double v = arc_counts[static_cast<std::size_t>(m - 1)] *
                 std::exp(-alpha * static_cast<double>(m));
      best = std::min(best, v);
    }
    return best;
  }

  double automaton_value(std::int64_t n, double alpha) const {
    if (!union_counts.empty()) {
      // Union mode: cheapest uniform-order cylinder cover (upper bound of the
      // mixed-order family; exact counts via inclusion-exclusion).
      double best = kInfValue;
      for (std::int64_t m = n; m <= opts.n_max; ++m) {
        best = std::min(best, union_counts[static_cast<std::size_t>(m - 1)] *
                                  std::exp(-alpha * static_cast<double>(m)));
      }
      return best;
    }
    int k = automaton->alphabet();
    std::vector<double> g(static_cast<std::size_t>(k),
                          std::exp(-alpha * static_cast<double>(opts.n_max)));
    for (std::int64_t m = opts.n_max - 1; m >= n; --m) {
      int gap = cyl_len[static_cast<std::size_t>(m)] - cyl_len[static_cast<std::size_t>(m - 1)];
      std::vector<double> next(static_cast<std::size_t>(k), 0.0);
      double take = std::exp(-alpha * static_cast<double>(m));
      for (int s = 0; s < k; ++s) {
        auto ext = automaton->extension_counts(s, gap);
        double refine = 0.0;
        for (int t = 0; t < k; ++t) refine += ext[static_cast<std::size_t>(t)] * g[static_cast<std::size_t>(t)];
        next[static_cast<std::size_t>(s)] = std::min(take, refine);
      }
      g = std::move(next);
    }
    const auto& base = state_counts[static_cast<std::size_t>(n - 1)];
    double total = 0.0;
    for (int s = 0; s < k; ++s) total += base[static_cast<std::size_t>(s)] * g[static_cast<std::size_t>(s)];
    return total;
  }

  FiniteInstance sub_instance(std::int64_t n) const {
    return subset_instance(*inst, row_balls[static_cast<std::size_t>(n - 1)]);
  }

  double instance_value(std::int64_t n, double alpha) const {
    // Best cover found among all rows n' >= n; every such cover is feasible
    // at level n, and the running minimum keeps greedy tables monotone.
    if (opts.mode == CoverMode::Exact) {
      return exact_min_cover(sub_instance(n), alpha).cost;
    }
    double best = kInfValue;
    for (std::int64_t np = opts.n_max; np >= n; --np) {
      if (row_balls[static_cast<std::size_t>(np - 1)].empty()) continue;
      best = std::min(best, greedy_cover(sub_instance(np), alpha).cost);
    }
    return best;
  }

  double stratum(std::int64_t m, double alpha) const {
    switch (backend) {
      case Backend::Arc:
        return arc_counts[static_cast<std::size_t>(m - 1)] *
               std::exp(-alpha * static_cast<double>(m));
      case Backend::Automaton: {
        if (!union_counts.empty())
          return union_counts[static_cast<std::size_t>(m - 1)] *
                 std::exp(-alpha * static_cast<double>(m));
        double total = 0.0;
        for (double c : state_counts[static_cast<std::size_t>(m - 1)]) total += c;
        return total * std::exp(-alpha * static_cast<double>(m));
      }
      case Backend::Instance: {
        std::vector<std::size_t> only;
        for (std::size_t i = 0; i < inst->balls.size(); ++i) {
          if (inst->balls[i].order == m) only.push_back(i);
        }
        FiniteInstance sub = subset_instance(*inst, only);
        return opts.mode == CoverMode::Exact ? exact_min_cover(sub, alpha).cost
                                             : greedy_cover(sub, alpha).cost;
      }
    }
    throw ArgumentError("unknown backend");
  }
};

OuterEvaluator::OuterEvaluator(System sys, SetSpec z, double eps, EvalOptions opts)
    : impl_(new Impl{std::move(sys), std::move(z), eps, opts, Backend::Instance,
                     {}, nullptr, {}, {}, {}, nullptr, {}}) {
  Impl& im = *impl_;
  if (!(eps > 0.0)) throw ArgumentError("scale must be positive");
  if (im.opts.n_max < 1) throw ArgumentError("n_max must be >= 1");
  const Space& space = im.sys.space;

  if (space.is_symbolic()) {
    bool union_of_subshifts = im.z.kind == SetSpec::Kind::Union;
    if (union_of_subshifts) {
      for (const SetSpec& part : im.z.parts) {
        if (part.kind != SetSpec::Kind::Full && part.kind != SetSpec::Kind::AvoidPairs)
          union_of_subshifts = false;
      }
    }
    bool full_like = !im.opts.force_instance &&
                     (im.z.kind == SetSpec::Kind::Full ||
                      im.z.kind == SetSpec::Kind::AvoidPairs || union_of_subshifts);
    if (full_like) {
      im.backend = Backend::Automaton;
      im.automaton.reset(new TransferCounts(space.alphabet(), im.z.combined_pairs(space)));
      std::vector<int> lens;
      for (std::int64_t m = 1; m <= im.opts.n_max; ++m) {
        int len = cylinder_length(m, im.opts.radius, eps);
        if (len < 1) len = 1;
        if (len > space.horizon())
          throw ConfigError("scale infeasible for horizon: order " + std::to_string(m) +
                            " needs cylinder length " + std::to_string(len));
        im.cyl_len.push_back(len);
        im.state_counts.push_back(im.automaton->counts_by_state(len));
        lens.push_back(len);
      }
      if (union_of_subshifts) {
        // A part equal to the full space swallows the union.
        bool any_full = false;
        std::vector<const SetSpec*> parts;
        for (const SetSpec& part : im.z.parts) {
          if (part.kind == SetSpec::Kind::Full) any_full = true;
          else parts.push_back(&part);
        }
        im.union_counts.assign(lens.size(), 0.0);
        if (any_full) {
          TransferCounts amb(space.alphabet(), space.forbidden_pairs());
          for (std::size_t i = 0; i < lens.size(); ++i)
            im.union_counts[i] = amb.count_words(lens[i]);
        } else {
          // Inclusion-exclusion; an intersection of pair-subshifts avoids the
          // union of their pair sets.
          for (std::size_t mask = 1; mask < (std::size_t{1} << parts.size()); ++mask) {
            auto pairs = space.forbidden_pairs();
            int bits = 0;
            for (std::size_t p = 0; p < parts.size(); ++p) {
              if (mask >> p & 1) {
                ++bits;
                pairs.insert(pairs.end(), parts[p]->avoid_pairs.begin(),
                             parts[p]->avoid_pairs.end());
              }
            }
            TransferCounts tc(space.alphabet(), pairs);
            double sign = (bits % 2 == 1) ? 1.0 : -1.0;
            for (std::size_t i = 0; i < lens.size(); ++i)
              im.union_counts[i] += sign * tc.count_words(lens[i]);
          }
        }
      }
      return;
    }
    // Sampled subshift: explicit instance on seeded admissible words drawn
    // from the automaton of the combined constraints.
    im.backend = Backend::Instance;
    Space sample_space = space.is_symbolic() && im.z.kind == SetSpec::Kind::AvoidPairs
                             ? Space::symbolic(space.alphabet(), space.horizon(),
                                               im.z.combined_pairs(space))
                             : space;
    Rng rng(im.opts.seed);
    std::set<std::vector<int>> seen;
    std::vector<Point> ground;
    std::size_t want = static_cast<std::size_t>(im.opts.ground);
    std::size_t attempts = 0;
    while (ground.size() < want && attempts < 200 * want + 10'000) {
      ++attempts;
      Point p = sample_point(sample_space, rng);
      if (!im.z.contains(p)) continue;
      if (seen.insert(p.symbols).second) ground.push_back(std::move(p));
    }
    if (ground.empty()) throw InstanceError("no ground points satisfy the set predicate");
    auto balls = candidate_balls(im.sys, ground, 1, im.opts.n_max, eps, im.opts.radius,
                                 im.opts.start);
    if (balls.size() * ground.size() > im.opts.max_cells)
      throw SizeError("instance membership budget exceeded");
    im.inst.reset(new FiniteInstance(make_instance(im.sys, std::move(ground), std::move(balls))));
  } else {
    auto profile = affine_profile(im.sys, im.opts.start, im.opts.n_max);
    bool arc_ok = !im.opts.force_instance && profile.has_value() && space.dim() == 1 &&
                  (im.z.kind == SetSpec::Kind::Full || im.z.kind == SetSpec::Kind::Interval);
    if (arc_ok) {
      im.backend = Backend::Arc;
      for (std::int64_t m = 1; m <= im.opts.n_max; ++m) {
        auto prof = *affine_profile(im.sys, im.opts.start, m);
        double r = mode_radius(im.opts.radius, m, eps);
        double rho = certified_arc_halflength(prof, r);
        // Finer than the r/3 guarantee: lattice losses stay within a few
        // percent of the continuum optimum, and sweeps never materialize.
        double spacing = rho / 8.0;
        double count;
        if (im.z.kind == SetSpec::Kind::Full) {
          count = prof.euclidean
                      ? static_cast<double>(arc_cover_count_segment(0.0, 1.0, rho, spacing))
                      : static_cast<double>(arc_cover_count_circle(rho, spacing));
        } else {
          count = static_cast<double>(arc_cover_count_segment(im.z.lo, im.z.hi, rho, spacing));
        }
        im.arc_counts.push_back(count);
      }
      return;
    }
    im.backend = Backend::Instance;
    std::vector<Point> ground;
    for (std::int64_t i = 0; i < im.opts.ground; ++i) {
      Point p = grid_point(space, i, im.opts.ground);
      if (im.z.contains(p)) ground.push_back(std::move(p));
    }
    if (ground.empty()) throw InstanceError("no ground points satisfy the set predicate");
    auto balls = candidate_balls(im.sys, {}, 1, im.opts.n_max, eps, im.opts.radius, im.opts.start,
                                 im.opts.max_cells / std::max<std::size_t>(ground.size(), 1));
    // Keep candidates that cover at least one ground point.
    std::vector<BallSpec> useful;
    for (auto& b : balls) {
      for (const Point& p : ground) {
        if (ball_contains(im.sys, b, p)) {
          useful.push_back(std::move(b));
          break;
        }
      }
    }
    if (useful.size() * ground.size() > im.opts.max_cells)
      throw SizeError("instance membership budget exceeded");
    im.inst.reset(new FiniteInstance(make_instance(im.sys, std::move(ground), std::move(useful))));
  }

  if (im.backend == Backend::Instance) {
    im.row_balls.assign(static_cast<std::size_t>(im.opts.n_max), {});
    for (std::size_t i = 0; i < im.inst->balls.size(); ++i) {
      std::int64_t order = im.inst->balls[i].order;
      for (std::int64_t n = 1; n <= order; ++n)
        im.row_balls[static_cast<std::size_t>(n - 1)].push_back(i);
    }
  }
}

OuterEvaluator::~OuterEvaluator() = default;
OuterEvaluator::OuterEvaluator(OuterEvaluator&&) noexcept = default;

double OuterEvaluator::value(std::int64_t n, double alpha) const {
  const Impl& im = *impl_;
  if (n < 1 || n > im.opts.n_max) throw ArgumentError("row order outside [1, n_max]");
  switch (im.backend) {
    case Backend::Arc: return im.arc_value(n, alpha);
    case Backend::Automaton: return im.automaton_value(n, alpha);
    case Backend::Instance: return im.instance_value(n, alpha);
  }
  throw ArgumentError("unknown backend");
}

std::vector<ValueRow> OuterEvaluator::rows(const std::vector<std::int64_t>& schedule,
                                           double alpha) const {
  std::vector<ValueRow> out;
  out.reserve(schedule.size());
  for (std::int64_t n : schedule) out.push_back(ValueRow{n, value(n, alpha), family()});
  return out;
}

double OuterEvaluator::count_at_alpha0(std::int64_t n) const { return value(n, 0.0); }

double OuterEvaluator::stratum_value(std::int64_t m, double alpha) const {
  if (m < 1 || m > impl_->opts.n_max) throw ArgumentError("order outside [1, n_max]");
  return impl_->stratum(m, alpha);
}

std::vector<ValueRow> OuterEvaluator::stratum_rows(const std::vector<std::int64_t>& schedule,
                                                   double alpha) const {
  std::vector<ValueRow> out;
  out.reserve(schedule.size());
  for (std::int64_t m : schedule)
    out.push_back(ValueRow{m, stratum_value(m, alpha), family()});
  return out;
}

std::string OuterEvaluator::backend_name() const {
  switch (impl_->backend) {
    case Backend::Arc: return "arc";
    case Backend::Automaton: return "automaton";
    case Backend::Instance: return "instance";
  }
  return "?";
}

std::string OuterEvaluator::family() const { return mode_family(impl_->opts.mode); }

const FiniteInstance* OuterEvaluator::instance() const { return impl_->inst.get(); }

double OuterEvaluator::fractional_value(std::int64_t n, double alpha) const {
  const Impl& im = *impl_;
  if (im.backend == Backend::Instance) {
    return fractional_cover(im.sub_instance(n), alpha).value;
  }
  if (im.backend == Backend::Automaton && im.z.combined_pairs(im.sys.space).empty()) {
    // Full shift: the cylinder partition is already fractionally optimal
    // (a uniform dual over the finest cylinders matches its cost).
    return im.automaton_value(n, alpha);
  }
  throw SizeError("no exact fractional route for this backend");
}

double OuterEvaluator::fractional_stratum_value(std::int64_t m, double alpha) const {
  const Impl& im = *impl_;
  if (im.backend == Backend::Instance) {
    std::vector<std::size_t> only;
    for (std::size_t i = 0; i < im.inst->balls.size(); ++i) {
      if (im.inst->balls[i].order == m) only.push_back(i);
    }
    return fractional_cover(subset_instance(*im.inst, only), alpha).value;
  }
  if (im.backend == Backend::Automaton && im.z.combined_pairs(im.sys.space).empty()) {
    return im.stratum(m, alpha);  // partitions are fractionally optimal
  }
  throw SizeError("no exact fractional route for this backend");
}

const System& OuterEvaluator::system() const { return impl_->sys; }
double OuterEvaluator::eps() const { return impl_->eps; }
const EvalOptions& OuterEvaluator::options() const { return impl_->opts; }

double outer_M(const System& sys, const SetSpec& z, std::int64_t n, double alpha, double eps,
               std::int64_t n_max, CoverMode mode, const EvalOptions& base) {
  EvalOptions opts = base;
  opts.mode = mode;
  opts.n_max = n_max;
  OuterEvaluator ev(sys, z, eps, opts);
  return ev.value(n, alpha);
}

WeightedValue outer_W(const FiniteInstance& inst, double alpha) {
  FractionalCover fc = fractional_cover(inst, alpha);
  return WeightedValue{fc.value, fc.weights};
}

// ---------------------------------------------------------------------------
// Critical exponent
// ---------------------------------------------------------------------------

namespace {

// Below = the table diverges with n (alpha under the critical value).
bool classify_below(const std::vector<ValueRow>& rows) {
  bool any_inf = false, all_pos = true;
  for (const ValueRow& r : rows) {
    if (std::isinf(r.value)) any_inf = true;
    if (!(r.value > 0.0)) all_pos = false;
  }
  if (any_inf) return true;
  if (!all_pos) return false;  // an empty-cost row: nothing to cover
  if (rows.size() == 1) return rows[0].value > 1.0;
  std::vector<double> xs, ys;
  xs.reserve(rows.size());
  ys.reserve(rows.size());
  for (const ValueRow& r : rows) {
    xs.push_back(static_cast<double>(r.n));
    ys.push_back(std::log(r.value));
  }
  return ols_slope(xs, ys) > 0.0;
}

double last_value(const std::vector<ValueRow>& rows) {
  double v = rows.back().value;
  return v;
}

}  // namespace

ExponentReport critical_exponent(const ValueFn& fn, const std::vector<std::int64_t>& schedule,
                                 const ExponentOptions& opts) {
  if (schedule.empty()) throw ArgumentError("empty n-schedule");
  ExponentReport rep;
  rep.threshold_hi = opts.threshold_hi;
  rep.threshold_lo = opts.threshold_lo;

  double lo = opts.bracket_lo, hi = opts.bracket_hi;
  if (!(lo < hi)) throw ArgumentError("bracket must satisfy lo < hi");

  std::vector<std::pair<double, double>> seen;  // (alpha, value at n_last)
  auto eval = [&](double alpha) {
    auto rows = fn(alpha);
    if (rows.size() != schedule.size()) throw ArgumentError("value rows mismatch schedule");
    bool below = classify_below(rows);
    rep.evaluations.emplace_back(alpha, below);
    seen.emplace_back(alpha, last_value(rows));
    if (rep.family.empty() && !rows.empty()) rep.family = rows.back().family;
    return std::make_pair(below, last_value(rows));
  };

  int widen = 0;
  for (;;) {
    auto [below_lo, v_lo] = eval(lo);
    auto [below_hi, v_hi] = eval(hi);
    bool ok = below_lo && !below_hi && v_lo > opts.threshold_hi && v_hi < opts.threshold_lo;
    if (ok) break;
    if (widen >= opts.max_widenings)
      throw BracketError("could not establish a divergence bracket around the critical value");
    double w = hi - lo;
    lo -= w;
    hi += w;
    ++widen;
  }
  rep.widenings = widen;

  while (hi - lo > opts.bracket_width) {
    double mid = 0.5 * (lo + hi);
    auto [below, v] = eval(mid);
    (void)v;
    if (below) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  rep.bracket_lo = lo;
  rep.bracket_hi = hi;
  rep.bracket_width = hi - lo;
  rep.alpha_star = 0.5 * (lo + hi);

  // Monotonicity of the last-row value over evaluated alphas.
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 0; i + 1 < seen.size(); ++i) {
    if (seen[i + 1].second > seen[i].second * (1.0 + 1e-9) + 1e-300) rep.monotone_ok = false;
  }
  for (auto& [a, v] : seen) {
    if (a == lo) rep.residual_lo = v;
    if (a == hi) rep.residual_hi = v;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Entropy curves
// ---------------------------------------------------------------------------

namespace {

EntropyCurve curve_from(const System& sys, const SetSpec& z, const std::vector<double>& eps_schedule,
                        const std::vector<std::int64_t>& n_schedule, const EvalOptions& opts,
                        const ExponentOptions& xopts, bool weighted) {
  if (eps_schedule.empty() || n_schedule.empty()) throw ArgumentError("empty schedule");
  for (std::size_t i = 0; i + 1 < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] > eps_schedule[i + 1]))
      throw ArgumentError("eps schedule must be strictly decreasing");
  }
  EntropyCurve curve;
  EvalOptions eopts = opts;
  if (weighted && sys.space.is_symbolic() && z.kind != SetSpec::Kind::Full)
    eopts.force_instance = true;  // proper subshifts have no analytic dual
  for (double eps : eps_schedule) {
    OuterEvaluator ev(sys, z, eps, eopts);
    ValueFn fn = [&](double alpha) {
      if (!weighted) return ev.stratum_rows(n_schedule, alpha);
      std::vector<ValueRow> rows;
      for (std::int64_t n : n_schedule)
        rows.push_back(ValueRow{n, ev.fractional_stratum_value(n, alpha), "lp"});
      return rows;
    };
    ExponentReport rep = critical_exponent(fn, n_schedule, xopts);
    rep.eps = eps;
    curve.points.emplace_back(eps, std::move(rep));
  }
  if (curve.points.size() >= 2) {
    std::vector<double> xs, ys;
    for (auto& [e, rep] : curve.points) {
      xs.push_back(e);
      ys.push_back(rep.alpha_star);
    }
    LinearFit fit;
    fit.slope = ols_slope(xs, ys);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    fit.intercept = my / static_cast<double>(xs.size()) - fit.slope * mx / static_cast<double>(xs.size());
    curve.fit = fit;
  }
  return curve;
}

}  // namespace

EntropyCurve entropy_NB(const System& sys, const SetSpec& z, const std::vector<double>& eps_schedule,
                        const std::vector<std::int64_t>& n_schedule, const EvalOptions& opts,
                        const ExponentOptions& xopts) {
  return curve_from(sys, z, eps_schedule, n_schedule, opts, xopts, false);
}

EntropyCurve entropy_NWB(const System& sys, const SetSpec& z, const std::vector<double>& eps_schedule,
                         const std::vector<std::int64_t>& n_schedule, const EvalOptions& opts,
                         const ExponentOptions& xopts) {
  return curve_from(sys, z, eps_schedule, n_schedule, opts, xopts, true);
}

// ---------------------------------------------------------------------------
// Brin-Katok and Katok quantities
// ---------------------------------------------------------------------------

namespace {

// Sorted-position mass queries for one-dimensional measures. Exact whenever
// the certified-arc criterion coincides with true ball membership.
class ArcMassIndex {
 public:
  explicit ArcMassIndex(const FiniteMeasure& mu) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& a : mu.atoms()) pts.emplace_back(a.point.coords[0], a.mass);
    std::sort(pts.begin(), pts.end());
    for (auto& [p, m] : pts) {
      pos_.push_back(p);
      mass_.push_back(m);
    }
    prefix_.assign(pos_.size() + 1, 0.0);
    for (std::size_t i = 0; i < pos_.size(); ++i) prefix_[i + 1] = prefix_[i] + mass_[i];
  }

  double total() const { return prefix_.back(); }

  // Mass of the open interval (lo, hi) without wrap.
  double segment(double lo, double hi) const {
    if (!(lo < hi)) return 0.0;
    auto a = std::upper_bound(pos_.begin(), pos_.end(), lo) - pos_.begin();
    auto b = std::lower_bound(pos_.begin(), pos_.end(), hi) - pos_.begin();
    return b > a ? prefix_[static_cast<std::size_t>(b)] - prefix_[static_cast<std::size_t>(a)]
                 : 0.0;
  }

  // Mass of the open wrap arc of half-length rho around c.
  double arc(double c, double rho, bool wraps) const {
    if (wraps) {
      if (2.0 * rho >= 1.0) return total();
      double lo = c - rho, hi = c + rho;
      if (lo >= 0.0 && hi <= 1.0) return segment(lo, hi);
      if (lo < 0.0) return segment(0.0, hi) + segment(lo + 1.0, 1.0) +
                           point_mass_at(0.0);
      return segment(lo, 1.0) + segment(0.0, hi - 1.0) + point_mass_at(0.0);
    }
    return segment(lo_clip(c - rho), c + rho);
  }

 private:
  static double lo_clip(double v) { return v < -1.0 ? -1.0 : v; }
  double point_mass_at(double v) const {
    auto it = std::lower_bound(pos_.begin(), pos_.end(), v);
    double m = 0.0;
    while (it != pos_.end() && *it == v) {
      m += mass_[static_cast<std::size_t>(it - pos_.begin())];
      ++it;
    }
    return m;
  }

  std::vector<double> pos_, mass_, prefix_;
};

}  // namespace

double bk_local(const FiniteMeasure& mu, const System& sys, const Point& x, double eps,
                std::pair<std::int64_t, std::int64_t> window, RadiusMode mode,
                std::int64_t start) {
  auto [n1, n2] = window;
  if (!(n2 > n1 && n1 >= 1)) throw ArgumentError("window must satisfy 1 <= n1 < n2");
  double best = kInfValue;
  for (std::int64_t n = n1; n <= n2; ++n) {
    BallSpec b;
    b.center = x;
    b.start = start;
    b.order = n;
    b.mode = mode;
    b.eps = eps;
    double mass = mass_of_ball(mu, sys, b);
    double q = mass > 0.0 ? -std::log(mass) / static_cast<double>(n) : kInfValue;
    best = std::min(best, q);
  }
  return best;
}

BkResult bk_entropy(const FiniteMeasure& mu, const System& sys, double eps,
                    std::pair<std::int64_t, std::int64_t> window, RadiusMode mode,
                    std::int64_t start) {
  BkResult res;
  // Sorted-index fast route for one-dimensional systems whose balls are
  // provably plain arcs at every window scale; otherwise atom-by-atom.
  std::unique_ptr<ArcMassIndex> index;
  bool fast = false;
  if (!sys.space.is_symbolic() && sys.space.dim() == 1) {
    fast = true;
    for (std::int64_t n = window.first; n <= window.second && fast; ++n) {
      auto prof = affine_profile(sys, start, n);
      BallSpec b;
      b.order = n;
      b.mode = mode;
      b.eps = eps;
      if (!prof || !certified_exact(*prof, b.effective_radius())) fast = false;
    }
    if (fast) index.reset(new ArcMassIndex(mu));
  }
  auto local_of = [&](const Point& x) {
    if (!fast) return bk_local(mu, sys, x, eps, window, mode, start);
    double best = kInfValue;
    for (std::int64_t n = window.first; n <= window.second; ++n) {
      auto prof = *affine_profile(sys, start, n);
      BallSpec b;
      b.order = n;
      b.mode = mode;
      b.eps = eps;
      double rho = certified_arc_halflength(prof, b.effective_radius());
      double mass = index->arc(x.coords[0], rho, true);
      double q = mass > 0.0 ? -std::log(mass) / static_cast<double>(n) : kInfValue;
      best = std::min(best, q);
    }
    return best;
  };
  double mean = 0.0;
  for (const auto& a : mu.atoms()) {
    double v = local_of(a.point);
    res.locals.push_back(v);
    if (std::isinf(v)) {
      mean = kInfValue;
    } else if (!std::isinf(mean)) {
      mean += a.mass * v;
    }
  }
  res.value = mean;
  if (!std::isinf(mean) && mu.size() > 1) {
    double var = 0.0;
    for (std::size_t i = 0; i < res.locals.size(); ++i) {
      double d = res.locals[i] - mean;
      var += mu.atoms()[i].mass * d * d;
    }
    res.sample_std_error = std::sqrt(var / static_cast<double>(mu.size()));
  }
  return res;
}

FiniteInstance measure_instance(const System& sys, const FiniteMeasure& mu, std::int64_t n,
                                std::int64_t n_max, double eps, RadiusMode mode,
                                std::int64_t start) {
  std::vector<Point> ground;
  ground.reserve(mu.size());
  for (const auto& a : mu.atoms()) ground.push_back(a.point);
  if (sys.space.is_symbolic()) {
    auto balls = candidate_balls(sys, ground, n, n_max, eps, mode, start);
    return make_instance(sys, std::move(ground), std::move(balls));
  }
  // Candidates anchored on the atoms: one ball per atom and order stratum.
  std::vector<BallSpec> balls;
  for (std::int64_t m = n; m <= n_max; ++m) {
    for (const Point& p : ground) {
      BallSpec b;
      b.center = p;
      b.start = start;
      b.order = m;
      b.mode = mode;
      b.eps = eps;
      balls.push_back(std::move(b));
    }
  }
  auto prof = sys.space.dim() == 1 ? affine_profile(sys, start, n_max) : std::nullopt;
  if (!prof) return make_instance(sys, std::move(ground), std::move(balls));

  // One-dimensional fast route: memberships via sorted positions and the
  // certified arcs. Certified containment is a subset of true containment,
  // so covers built from this matrix remain genuine ball covers.
  std::vector<std::pair<double, std::uint32_t>> sorted;
  sorted.reserve(ground.size());
  for (std::size_t p = 0; p < ground.size(); ++p)
    sorted.emplace_back(ground[p].coords[0], static_cast<std::uint32_t>(p));
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> pos(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) pos[i] = sorted[i].first;

  FiniteInstance inst{sys, std::move(ground), std::move(balls), {}};
  inst.membership = BitMatrix(inst.balls.size(), inst.ground.size());
  auto mark_segment = [&](std::size_t b, double lo, double hi) {
    auto a = std::upper_bound(pos.begin(), pos.end(), lo) - pos.begin();
    auto e = std::lower_bound(pos.begin(), pos.end(), hi) - pos.begin();
    for (auto i = a; i < e; ++i)
      inst.membership.set(b, sorted[static_cast<std::size_t>(i)].second);
  };
  for (std::size_t b = 0; b < inst.balls.size(); ++b) {
    const BallSpec& ball = inst.balls[b];
    auto bp = *affine_profile(sys, start, ball.order);
    double rho = certified_arc_halflength(bp, ball.effective_radius());
    double c = ball.center.coords[0];
    if (bp.euclidean) {
      mark_segment(b, c - rho, c + rho);
    } else if (2.0 * rho >= 1.0) {
      mark_segment(b, -1.0, 2.0);
    } else {
      double lo = c - rho, hi = c + rho;
      auto mark_zero = [&] {  // 0 itself lies strictly inside a wrapping arc
        for (std::size_t i = 0; i < pos.size() && pos[i] == 0.0; ++i)
          inst.membership.set(b, sorted[i].second);
      };
      if (lo >= 0.0 && hi <= 1.0) {
        mark_segment(b, lo, hi);
      } else if (lo < 0.0) {
        mark_segment(b, 0.0, hi);
        mark_segment(b, lo + 1.0, 1.0);
        mark_zero();
      } else {
        mark_segment(b, lo, 1.0);
        mark_segment(b, 0.0, hi - 1.0);
        mark_zero();
      }
    }
  }
  return inst;
}

double katok_Lambda(const FiniteInstance& inst, const std::vector<double>& point_mass,
                    double alpha, double delta, CoverMode mode) {
  if (mode == CoverMode::Exact && inst.balls.size() > 24)
    throw SizeError("exact mass cover limited to 24 candidates");
  return mass_cover(inst, point_mass, alpha, delta).cost;
}

KatokReport katok_entropy(const System& sys, const FiniteMeasure& mu,
                          const std::vector<double>& eps_schedule,
                          const std::vector<double>& delta_schedule,
                          const std::vector<std::int64_t>& n_schedule, const EvalOptions& opts,
                          const ExponentOptions& xopts) {
  if (eps_schedule.empty() || delta_schedule.empty() || n_schedule.empty())
    throw ArgumentError("empty schedule");
  for (std::size_t i = 0; i + 1 < delta_schedule.size(); ++i) {
    if (!(delta_schedule[i] > delta_schedule[i + 1]))
      throw ArgumentError("delta schedule must be strictly decreasing");
  }
  std::vector<double> masses;
  for (const auto& a : mu.atoms()) masses.push_back(a.mass);

  KatokReport rep;
  for (double eps : eps_schedule) {
    FiniteInstance inst = measure_instance(sys, mu, n_schedule.front(), opts.n_max, eps,
                                           opts.radius, opts.start);
    std::vector<std::vector<std::size_t>> stratum_balls(static_cast<std::size_t>(opts.n_max));
    for (std::size_t i = 0; i < inst.balls.size(); ++i)
      stratum_balls[static_cast<std::size_t>(inst.balls[i].order - 1)].push_back(i);
    // One sub-instance and adjacency per scheduled stratum, shared across all
    // (alpha, delta) evaluations.
    struct Stratum {
      FiniteInstance sub;
      std::vector<std::vector<std::uint32_t>> lists;
    };
    std::map<std::int64_t, Stratum> strata;
    for (std::int64_t m : n_schedule) {
      FiniteInstance sub = subset_instance(inst, stratum_balls[static_cast<std::size_t>(m - 1)]);
      auto lists = ball_atom_lists(sub);
      strata.emplace(m, Stratum{std::move(sub), std::move(lists)});
    }
    for (double delta : delta_schedule) {
      // Classification series: uniform-order mass-cover costs.
      ValueFn fn = [&](double alpha) {
        std::vector<ValueRow> rows;
        for (std::int64_t m : n_schedule) {
          const Stratum& st = strata.at(m);
          double v = st.sub.balls.size() <= 24
                         ? mass_cover(st.sub, masses, alpha, delta).cost
                         : mass_cover_with_lists(st.sub, st.lists, masses, alpha, delta).cost;
          rows.push_back(ValueRow{m, v, st.sub.balls.size() <= 24 ? "exact" : "greedy"});
        }
        return rows;
      };
      ExponentReport r = critical_exponent(fn, n_schedule, xopts);
      r.eps = eps;
      rep.points.push_back(KatokPoint{eps, delta, std::move(r)});
    }
  }
  return rep;
}

}  // namespace nbe
