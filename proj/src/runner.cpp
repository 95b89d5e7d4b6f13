#include "nbe/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "nbe/errors.hpp"
#include "nbe/zoo.hpp"

namespace nbe {

using nlohmann::ordered_json;

nlohmann::ordered_json json_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string to_jsonl(const std::vector<ordered_json>& records) {
  std::string out;
  for (const auto& r : records) {
    out += r.dump();
    out += "\n";
  }
  return out;
}

namespace {

ordered_json config_echo(const RunConfig& cfg) {
  ordered_json j;
  j["text"] = cfg.normalized();
  return j;
}

ordered_json base_record(const RunConfig& cfg, const std::string& kind) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["toolkit_version"] = kToolkitVersion;
  j["task"] = task_name(cfg.task);
  j["kind"] = kind;
  return j;
}

ordered_json report_json(const ExponentReport& rep) {
  ordered_json j;
  j["alpha_star"] = rep.alpha_star;
  j["bracket_lo"] = rep.bracket_lo;
  j["bracket_hi"] = rep.bracket_hi;
  j["bracket_width"] = rep.bracket_width;
  j["threshold_hi"] = rep.threshold_hi;
  j["threshold_lo"] = rep.threshold_lo;
  j["residual_lo"] = json_value(rep.residual_lo);
  j["residual_hi"] = json_value(rep.residual_hi);
  j["family"] = rep.family;
  j["widenings"] = rep.widenings;
  j["monotone_ok"] = rep.monotone_ok;
  ordered_json evals = ordered_json::array();
  for (auto& [a, below] : rep.evaluations) {
    ordered_json e;
    e["alpha"] = a;
    e["diverging"] = below;
    evals.push_back(std::move(e));
  }
  j["bisection"] = std::move(evals);
  return j;
}

ordered_json table_json(const std::vector<ValueRow>& rows, double alpha) {
  ordered_json t = ordered_json::array();
  for (const ValueRow& r : rows) {
    ordered_json e;
    e["n"] = r.n;
    e["alpha"] = alpha;
    e["value"] = json_value(r.value);
    e["family"] = r.family;
    t.push_back(std::move(e));
  }
  return t;
}

EvalOptions eval_options(const RunConfig& cfg) {
  EvalOptions o;
  o.mode = cfg.mode;
  o.radius = cfg.radius;
  o.n_max = cfg.n_max;
  o.ground = cfg.ground;
  o.seed = cfg.seed;
  return o;
}

ExponentOptions exponent_options(const RunConfig& cfg) {
  ExponentOptions x;
  x.bracket_lo = cfg.alpha_lo;
  x.bracket_hi = cfg.alpha_hi;
  return x;
}

// Ordered parallel map: results come back in input order regardless of
// scheduling, so emitted records are deterministic.
template <typename Fn>
std::vector<ordered_json> parallel_points(int threads, std::size_t count, Fn&& fn) {
  std::vector<ordered_json> out(count);
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::future<ordered_json>> futs;
  futs.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    futs.push_back(std::async(std::launch::async, [&fn, i] { return fn(i); }));
  for (std::size_t i = 0; i < count; ++i) out[i] = futs[i].get();
  return out;
}

void append_csv(RunOutcome& out, const std::string& tag, double eps,
                const std::vector<ValueRow>& rows, double alpha) {
  if (out.csv_lines.empty())
    out.csv_lines.push_back("tag,epsilon,n,alpha,value,family");
  for (const ValueRow& r : rows) {
    std::ostringstream os;
    os.precision(17);
    os << tag << "," << eps << "," << r.n << "," << alpha << ","
       << (std::isinf(r.value) ? std::string("inf") : std::to_string(r.value)) << ","
       << r.family;
    out.csv_lines.push_back(os.str());
  }
}

// ---------------------------------------------------------------------------
// estimate-nb / estimate-nwb
// ---------------------------------------------------------------------------

RunOutcome run_estimate_curve(const RunConfig& cfg, bool weighted) {
  RunOutcome out;
  System sys = system_from_config(cfg);
  EvalOptions opts = eval_options(cfg);
  ExponentOptions xopts = exponent_options(cfg);

  if (weighted && sys.space.is_symbolic() && cfg.z.kind != SetSpec::Kind::Full)
    opts.force_instance = true;  // proper subshifts have no analytic dual

  auto point = [&](std::size_t idx) {
    double eps = cfg.epsilons[idx];
    OuterEvaluator ev(sys, cfg.z, eps, opts);
    // Divergence classification runs on uniform-order sums; the reported
    // table is the running-minimum cover value over allowed orders.
    ValueFn fn = [&](double alpha) {
      if (!weighted) return ev.stratum_rows(cfg.n_schedule, alpha);
      std::vector<ValueRow> rows;
      for (std::int64_t n : cfg.n_schedule)
        rows.push_back(ValueRow{n, ev.fractional_stratum_value(n, alpha), "lp"});
      return rows;
    };
    auto table_fn = [&](double alpha) {
      if (!weighted) return ev.rows(cfg.n_schedule, alpha);
      std::vector<ValueRow> rows;
      for (std::int64_t n : cfg.n_schedule)
        rows.push_back(ValueRow{n, ev.fractional_value(n, alpha), "lp"});
      return rows;
    };
    ExponentReport rep = critical_exponent(fn, cfg.n_schedule, xopts);
    rep.eps = eps;

    ordered_json rec = base_record(cfg, "point");
    rec["epsilon"] = eps;
    rec["backend"] = ev.backend_name();
    rec["report"] = report_json(rep);
    rec["upper_bound_of_restricted_family"] = true;
    auto rows_at_star = table_fn(rep.alpha_star);
    rec["table"] = table_json(rows_at_star, rep.alpha_star);
    auto rows_at_zero = table_fn(0.0);
    rec["counts_alpha0"] = table_json(rows_at_zero, 0.0);
    rec["stratum_counts_alpha0"] = table_json(fn(0.0), 0.0);
    if (!cfg.system_ref.empty()) {
      const ZooEntry& entry = zoo_lookup(cfg.system_ref.substr(4));
      if (!entry.exploratory) {
        ordered_json oracle;
        oracle["alpha_ref"] = entry.alpha_ref(eps);
        oracle["derivation"] = entry.derivation;
        double rel = std::fabs(rep.alpha_star - entry.alpha_ref(eps)) /
                     std::max(1e-12, std::fabs(entry.alpha_ref(eps)));
        oracle["relative_error"] = rel;
        ordered_json counts = ordered_json::array();
        for (std::int64_t n : cfg.n_schedule) {
          ordered_json c;
          c["n"] = n;
          c["oracle_count"] = entry.oracle_count(n, eps, cfg.radius);
          counts.push_back(std::move(c));
        }
        oracle["counts"] = std::move(counts);
        rec["oracle"] = std::move(oracle);
      }
    }
    rec["slack"] = rep.bracket_width;
    rec["config"] = config_echo(cfg);
    return rec;
  };

  out.records = parallel_points(cfg.threads, cfg.epsilons.size(), point);
  for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
    std::vector<ValueRow> rows;
    for (auto& e : out.records[i]["table"]) {
      rows.push_back(ValueRow{e["n"].get<std::int64_t>(),
                              e["value"].is_string() ? kInfValue : e["value"].get<double>(),
                              e["family"].get<std::string>()});
    }
    append_csv(out, weighted ? "nwb" : "nb", cfg.epsilons[i], rows,
               out.records[i]["report"]["alpha_star"].get<double>());
  }

  ordered_json summary = base_record(cfg, "summary");
  ordered_json curve = ordered_json::array();
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
    double a = out.records[i]["report"]["alpha_star"].get<double>();
    curve.push_back(ordered_json::array({cfg.epsilons[i], a}));
    xs.push_back(cfg.epsilons[i]);
    ys.push_back(a);
  }
  summary["curve"] = std::move(curve);
  if (xs.size() >= 2) {
    double slope = ols_slope(xs, ys);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i] / static_cast<double>(xs.size());
      my += ys[i] / static_cast<double>(xs.size());
    }
    ordered_json fit;
    fit["slope"] = slope;
    fit["intercept"] = my - slope * mx;
    fit["note"] = "extrapolation, not a theorem";
    summary["fit"] = std::move(fit);
  }
  summary["config"] = config_echo(cfg);
  out.records.push_back(std::move(summary));
  return out;
}

// ---------------------------------------------------------------------------
// estimate-katok / estimate-bk
// ---------------------------------------------------------------------------

FiniteMeasure config_measure(const RunConfig& cfg, const System& sys) {
  if (!cfg.measure_file.empty()) {
    std::ifstream in(cfg.measure_file);
    if (!in) throw ConfigError("cannot open measure file " + cfg.measure_file);
    return FiniteMeasure::from_csv(sys.space, in);
  }
  SamplerConfig sc;
  sc.seed = cfg.seed;
  sc.sample_count = cfg.measure_count;
  sc.init = cfg.measure_init;
  sc.push_random_steps = cfg.measure_push;
  std::int64_t horizon = std::max<std::int64_t>(cfg.n_max, 1);
  FiniteMeasure mu = empirical_measure(sys, sc, 1, horizon);
  if (!cfg.measure_out.empty()) {
    std::ofstream out(cfg.measure_out, std::ios::binary);
    if (!out) throw ConfigError("cannot write measure file " + cfg.measure_out);
    out << mu.to_csv();
  }
  return mu;
}

RunOutcome run_estimate_katok(const RunConfig& cfg) {
  RunOutcome out;
  System sys = system_from_config(cfg);
  FiniteMeasure mu = config_measure(cfg, sys);
  KatokReport rep = katok_entropy(sys, mu, cfg.epsilons, cfg.deltas, cfg.n_schedule,
                                  eval_options(cfg), exponent_options(cfg));
  for (const KatokPoint& p : rep.points) {
    ordered_json rec = base_record(cfg, "point");
    rec["epsilon"] = p.eps;
    rec["delta"] = p.delta;
    rec["report"] = report_json(p.report);
    rec["config"] = config_echo(cfg);
    out.records.push_back(std::move(rec));
  }
  ordered_json summary = base_record(cfg, "summary");
  ordered_json per_eps = ordered_json::array();
  for (double eps : cfg.epsilons) {
    ordered_json e;
    e["epsilon"] = eps;
    ordered_json trend = ordered_json::array();
    double final_alpha = 0.0;
    for (const KatokPoint& p : rep.points) {
      if (p.eps != eps) continue;
      trend.push_back(ordered_json::array({p.delta, p.report.alpha_star}));
      final_alpha = p.report.alpha_star;  // deltas descend: last is smallest
    }
    e["delta_trend"] = std::move(trend);
    e["alpha_star_at_smallest_delta"] = final_alpha;
    per_eps.push_back(std::move(e));
  }
  summary["per_epsilon"] = std::move(per_eps);
  summary["config"] = config_echo(cfg);
  out.records.push_back(std::move(summary));
  return out;
}

RunOutcome run_estimate_bk(const RunConfig& cfg) {
  RunOutcome out;
  System sys = system_from_config(cfg);
  FiniteMeasure mu = config_measure(cfg, sys);
  for (double eps : cfg.epsilons) {
    BkResult res = bk_entropy(mu, sys, eps, cfg.window, cfg.radius);
    ordered_json rec = base_record(cfg, "point");
    rec["epsilon"] = eps;
    rec["window"] = ordered_json::array({cfg.window.first, cfg.window.second});
    rec["value"] = json_value(res.value);
    rec["sample_std_error"] = res.sample_std_error;
    ordered_json locals = ordered_json::array();
    for (double v : res.locals) locals.push_back(json_value(v));
    rec["locals"] = std::move(locals);
    rec["config"] = config_echo(cfg);
    out.records.push_back(std::move(rec));
  }
  ordered_json summary = base_record(cfg, "summary");
  ordered_json curve = ordered_json::array();
  for (std::size_t i = 0; i < cfg.epsilons.size(); ++i)
    curve.push_back(ordered_json::array(
        {cfg.epsilons[i], out.records[i]["value"]}));
  summary["curve"] = std::move(curve);
  summary["config"] = config_echo(cfg);
  out.records.push_back(std::move(summary));
  return out;
}

// ---------------------------------------------------------------------------
// verify-sandwich / verify-frostman share instance construction
// ---------------------------------------------------------------------------

struct SymbolicInstanceSet {
  System sys;
  std::vector<std::vector<Point>> grounds;
};

SymbolicInstanceSet make_symbolic_grounds(const RunConfig& cfg, std::size_t count,
                                          std::size_t words_per_instance) {
  System sys = cfg.system_ref.empty() && !cfg.inline_map
                   ? zoo_lookup("full-shift-2").system
                   : system_from_config(cfg);
  if (!sys.space.is_symbolic())
    throw ConfigError("verification instances need a symbolic system");
  SymbolicInstanceSet set{sys, {}};
  Rng rng(cfg.seed);
  for (std::size_t i = 0; i < count; ++i) {
    Rng sub = rng.fork(i);
    std::vector<Point> ground;
    std::set<std::vector<int>> seen;
    while (ground.size() < words_per_instance) {
      Point p = sample_point(sys.space, sub);
      if (seen.insert(p.symbols).second) ground.push_back(std::move(p));
    }
    std::sort(ground.begin(), ground.end());
    set.grounds.push_back(std::move(ground));
  }
  return set;
}

RunOutcome run_verify_sandwich(const RunConfig& cfg) {
  RunOutcome out;
  const std::int64_t n = 12, n_max = 14;
  const std::vector<double> alphas{0.2, 0.5, 0.8};
  const std::vector<double> thetas{0.45, 0.55, 0.65};
  const std::vector<double> epsilons{0.5, 0.4, 0.3};

  auto set = make_symbolic_grounds(cfg, static_cast<std::size_t>(cfg.verify_instances), 48);
  int violations = 0;
  int checks = 0;
  for (std::size_t gi = 0; gi < set.grounds.size(); ++gi) {
    const auto& ground = set.grounds[gi];
    for (double eps : epsilons) {
      // Conditions quantifying "n large enough" for the chain.
      if (!(std::exp(n * eps / 2.0) > 5.0)) continue;
      auto balls = candidate_balls(set.sys, ground, n, n_max, eps, cfg.radius);
      FiniteInstance inst = make_instance(set.sys, ground, std::move(balls));
      auto balls_half =
          candidate_balls(set.sys, ground, n, n_max, eps / 2.0, cfg.radius);
      FiniteInstance inst_half = make_instance(set.sys, ground, std::move(balls_half));
      for (double alpha : alphas) {
        double m_full = exact_min_cover(inst, alpha).cost;
        double w_full = fractional_cover(inst, alpha).value;
        for (double theta : thetas) {
          if (!(static_cast<double>(n) * static_cast<double>(n) *
                    std::exp(-static_cast<double>(n) * theta) <
                1.0))
            continue;
          double m_half = exact_min_cover(inst_half, alpha + theta).cost;
          bool ok = m_half <= w_full + 1e-12 && w_full <= m_full + 1e-12;
          ++checks;
          if (!ok) ++violations;
          ordered_json rec = base_record(cfg, "point");
          rec["instance"] = gi;
          rec["epsilon"] = eps;
          rec["alpha"] = alpha;
          rec["theta"] = theta;
          rec["n"] = n;
          rec["n_max"] = n_max;
          rec["m_at_eps_half"] = m_half;
          rec["w_at_eps"] = w_full;
          rec["m_at_eps"] = m_full;
          rec["margin_left"] = w_full - m_half;
          rec["margin_right"] = m_full - w_full;
          rec["ok"] = ok;
          out.records.push_back(std::move(rec));
        }
      }
    }
  }
  ordered_json summary = base_record(cfg, "summary");
  summary["checks"] = checks;
  summary["violations"] = violations;
  summary["config"] = config_echo(cfg);
  out.records.push_back(std::move(summary));
  if (violations > 0) out.exit_code = 2;
  return out;
}

RunOutcome run_verify_frostman(const RunConfig& cfg) {
  RunOutcome out;
  const std::int64_t n = 6, n_max = 9;
  const std::vector<double> alphas{0.0, 0.4, 0.9};
  const std::vector<double> epsilons{0.5, 0.35};

  auto set = make_symbolic_grounds(cfg, static_cast<std::size_t>(cfg.verify_instances), 32);
  int violations = 0, checks = 0;
  for (std::size_t gi = 0; gi < set.grounds.size(); ++gi) {
    const auto& ground = set.grounds[gi];
    for (double eps : epsilons) {
      auto balls = candidate_balls(set.sys, ground, n, n_max, eps, cfg.radius);
      FiniteInstance inst = make_instance(set.sys, ground, std::move(balls));
      for (double alpha : alphas) {
        FrostmanResult fr = frostman_measure(inst, alpha);
        bool ok = fr.max_ball_residual <= 1e-9 && fr.duality_gap <= 1e-9;
        ++checks;
        if (!ok) ++violations;
        ordered_json rec = base_record(cfg, "point");
        rec["instance"] = gi;
        rec["epsilon"] = eps;
        rec["alpha"] = alpha;
        rec["cover_value"] = fr.cover_value;
        rec["max_ball_residual"] = fr.max_ball_residual;
        rec["duality_gap"] = fr.duality_gap;
        rec["atoms"] = fr.measure.size();
        rec["ok"] = ok;
        out.records.push_back(std::move(rec));
      }
    }
  }
  ordered_json summary = base_record(cfg, "summary");
  summary["checks"] = checks;
  summary["violations"] = violations;
  summary["config"] = config_echo(cfg);
  out.records.push_back(std::move(summary));
  if (violations > 0) out.exit_code = 2;
  return out;
}

// ---------------------------------------------------------------------------
// verify-prop25: bk(eps/2) <= katok(eps) + slack on (system, measure) pairs
// ---------------------------------------------------------------------------

RunOutcome run_verify_prop25(const RunConfig& cfg) {
  RunOutcome out;
  struct Pair {
    std::string system;
    std::int64_t atoms;
    SamplerConfig::Init init;
  };
  const std::vector<Pair> pairs = {
      {"doubling", 4096, SamplerConfig::Init::Grid},
      {"doubling", 2048, SamplerConfig::Init::Random},
      {"tripling", 4096, SamplerConfig::Init::Grid},
      {"identity", 2048, SamplerConfig::Init::Grid},
      {"contraction", 512, SamplerConfig::Init::Random},
      {"periodic-23", 4096, SamplerConfig::Init::Grid},
      {"full-shift-2", 1024, SamplerConfig::Init::Random},
      {"full-shift-3", 1024, SamplerConfig::Init::Random},
      {"golden-mean", 1024, SamplerConfig::Init::Random},
      {"doubling", 1024, SamplerConfig::Init::Grid},
  };
  const double eps = 0.4;
  const std::vector<double> deltas{0.4, 0.2};

  int violations = 0;
  for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
    const Pair& p = pairs[pi];
    const ZooEntry& entry = zoo_lookup(p.system);
    System sys = entry.system;
    // Scales matched to the atomic resolution so neither side saturates; the
    // window starts where dynamical balls are provably plain arcs.
    bool symbolic = sys.space.is_symbolic();
    std::vector<std::int64_t> schedule =
        symbolic ? std::vector<std::int64_t>{4, 5, 6} : std::vector<std::int64_t>{4, 5, 6, 7, 8};
    std::int64_t n_max = schedule.back();
    std::int64_t arc_lo = symbolic ? 4 : 6;
    if (!symbolic) {
      for (std::int64_t n = 4; n <= 16; ++n) {
        auto prof = affine_profile(sys, 1, n);
        BallSpec probe;
        probe.order = n;
        probe.mode = cfg.radius;
        probe.eps = eps / 2.0;
        if (prof && (prof->euclidean || certified_exact(*prof, probe.effective_radius()))) {
          arc_lo = n;
          break;
        }
      }
    }
    // Tail window [max(4, n2/2, arc regime), n2].
    std::int64_t win_hi = arc_lo + (symbolic ? 3 : 4);
    std::int64_t win_lo = std::max<std::int64_t>({4, (win_hi + 1) / 2, arc_lo});
    std::pair<std::int64_t, std::int64_t> window{win_lo, win_hi};

    SamplerConfig sc;
    sc.seed = cfg.seed + pi;
    sc.sample_count = p.atoms;
    sc.init = p.init;
    FiniteMeasure mu = empirical_measure(sys, sc, 1, n_max);

    BkResult bk = bk_entropy(mu, sys, eps / 2.0, window, cfg.radius);
    EvalOptions opts = eval_options(cfg);
    opts.n_max = n_max;
    ExponentOptions xopts = exponent_options(cfg);
    KatokReport kat = katok_entropy(sys, mu, {eps}, deltas, schedule, opts, xopts);
    double katok_alpha = kat.points.back().report.alpha_star;
    double bracket = kat.points.back().report.bracket_width;
    // Window term: the windowed min sits above the true liminf by at most the
    // mass-floor quotient ln(atoms)/n2.
    double slack = bracket + std::log(static_cast<double>(mu.size())) /
                                 static_cast<double>(window.second);
    bool ok = !(std::isinf(bk.value)) && bk.value <= katok_alpha + slack + 1e-12;
    if (!ok) ++violations;
    ordered_json rec = base_record(cfg, "point");
    rec["system"] = p.system;
    rec["atoms"] = p.atoms;
    rec["epsilon"] = eps;
    rec["bk_at_eps_half"] = json_value(bk.value);
    rec["katok_at_eps"] = katok_alpha;
    rec["slack"] = slack;
    rec["ok"] = ok;
    rec["config"] = config_echo(cfg);
    out.records.push_back(std::move(rec));
  }
  ordered_json summary = base_record(cfg, "summary");
  summary["pairs"] = pairs.size();
  summary["violations"] = violations;
  summary["config"] = config_echo(cfg);
  out.records.push_back(std::move(summary));
  if (violations > 0) out.exit_code = 2;
  return out;
}

// ---------------------------------------------------------------------------
// verify-vitali
// ---------------------------------------------------------------------------

RunOutcome run_verify_vitali(const RunConfig& cfg) {
  RunOutcome out;
  struct Kind {
    std::string name;
    System sys;
  };
  std::vector<Kind> kinds;
  kinds.push_back({"interval", zoo_lookup("doubling").system});
  kinds.push_back({"torus",
                   System{Space::torus(2), MapSequence::autonomous(MapDescriptor::affine(
                                               {1, 1}, {0.0, 0.0}))}});
  kinds.push_back({"symbolic", zoo_lookup("full-shift-2").system});

  std::size_t families = static_cast<std::size_t>(cfg.verify_families);
  int violations = 0;
  std::int64_t total_probes = 0;
  Rng rng(cfg.seed);
  for (const Kind& kind : kinds) {
    std::size_t kind_fail = 0;
    for (std::size_t f = 0; f < families; ++f) {
      Rng sub = rng.fork(f * 16 + 1);
      std::size_t count = 3 + sub.next_below(18);
      std::int64_t order = 1 + static_cast<std::int64_t>(sub.next_below(4));
      double eps = 0.25 + sub.next_double();
      std::vector<BallSpec> balls;
      for (std::size_t b = 0; b < count; ++b) {
        BallSpec ball;
        ball.center = sample_point(kind.sys.space, sub);
        ball.order = order;
        ball.mode = RadiusMode::Neutralized;
        ball.eps = eps;
        balls.push_back(std::move(ball));
      }
      auto selected = vitali_select(kind.sys, balls);
      double r = balls[0].effective_radius();

      // Disjointness of the selected neighbour families.
      bool ok = !selected.empty();
      for (std::size_t a = 0; a + 1 < selected.size() && ok; ++a) {
        for (std::size_t b = a + 1; b < selected.size() && ok; ++b) {
          for (std::size_t k = 0; k < balls.size(); ++k) {
            double da = bowen_dist(kind.sys, 1, order, balls[k].center,
                                   balls[selected[a]].center);
            double db = bowen_dist(kind.sys, 1, order, balls[k].center,
                                   balls[selected[b]].center);
            if (da < 2.0 * r && db < 2.0 * r) {
              ok = false;
              break;
            }
          }
        }
      }
      // 5r containment on membership probes.
      for (int probe = 0; probe < 24 && ok; ++probe) {
        Point y = sample_point(kind.sys.space, sub);
        bool in_union = false;
        for (const BallSpec& b : balls) {
          if (ball_contains(kind.sys, b, y)) {
            in_union = true;
            break;
          }
        }
        if (!in_union) continue;
        ++total_probes;
        bool in_5r = false;
        for (std::size_t s : selected) {
          if (bowen_dist(kind.sys, 1, order, balls[s].center, y) < 5.0 * r) {
            in_5r = true;
            break;
          }
        }
        if (!in_5r) ok = false;
      }
      if (!ok) {
        ++violations;
        ++kind_fail;
      }
    }
    ordered_json rec = base_record(cfg, "point");
    rec["space_kind"] = kind.name;
    rec["families"] = families;
    rec["failures"] = kind_fail;
    out.records.push_back(std::move(rec));
  }
  ordered_json summary = base_record(cfg, "summary");
  summary["violations"] = violations;
  summary["membership_probes"] = total_probes;
  summary["config"] = config_echo(cfg);
  out.records.push_back(std::move(summary));
  if (violations > 0) out.exit_code = 2;
  return out;
}

RunOutcome run_zoo_list(const RunConfig& cfg) {
  RunOutcome out;
  for (const ZooEntry& e : zoo_entries()) {
    ordered_json rec = base_record(cfg, "point");
    rec["name"] = e.name;
    rec["space"] = e.system.space.describe();
    rec["map"] = e.system.maps.describe();
    rec["lipschitz"] = e.lipschitz;
    rec["exploratory"] = e.exploratory;
    rec["derivation"] = e.derivation;
    if (!e.exploratory) {
      ordered_json refs = ordered_json::array();
      for (double eps : {0.05, 0.1, 0.2}) {
        refs.push_back(ordered_json::array({eps, e.alpha_ref(eps)}));
      }
      rec["alpha_ref"] = std::move(refs);
    }
    out.records.push_back(std::move(rec));
  }
  ordered_json summary = base_record(cfg, "summary");
  summary["entries"] = zoo_names().size();
  summary["config"] = config_echo(cfg);
  out.records.push_back(std::move(summary));
  return out;
}

}  // namespace

RunOutcome run(const RunConfig& cfg) {
  try {
    switch (cfg.task) {
      case Task::EstimateNB: return run_estimate_curve(cfg, false);
      case Task::EstimateNWB: return run_estimate_curve(cfg, true);
      case Task::EstimateKatok: return run_estimate_katok(cfg);
      case Task::EstimateBK: return run_estimate_bk(cfg);
      case Task::VerifySandwich: return run_verify_sandwich(cfg);
      case Task::VerifyProp25: return run_verify_prop25(cfg);
      case Task::VerifyVitali: return run_verify_vitali(cfg);
      case Task::VerifyFrostman: return run_verify_frostman(cfg);
      case Task::ZooList: return run_zoo_list(cfg);
    }
    RunOutcome out;
    out.exit_code = 1;
    out.error = "unknown task";
    return out;
  } catch (const std::exception& e) {
    RunOutcome out;
    out.exit_code = 1;
    out.error = e.what();
    return out;
  }
}

}  // namespace nbe
