// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code = number of failed
// criteria. Criterion 9 invokes the CLI binary passed via --tool.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nbe/config.hpp"
#include "nbe/estimators.hpp"
#include "nbe/lp.hpp"
#include "nbe/runner.hpp"
#include "nbe/zoo.hpp"

using namespace nbe;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::int64_t> range_schedule(int lo, int hi) {
  std::vector<std::int64_t> v;
  for (int n = lo; n <= hi; ++n) v.push_back(n);
  return v;
}

double nb_exponent(const System& sys, const SetSpec& z, double eps,
                   const std::vector<std::int64_t>& sched, std::int64_t n_max, CoverMode mode,
                   RadiusMode radius = RadiusMode::Neutralized, double* bracket = nullptr) {
  EvalOptions opts;
  opts.mode = mode;
  opts.radius = radius;
  opts.n_max = n_max;
  OuterEvaluator ev(sys, z, eps, opts);
  ValueFn fn = [&](double a) { return ev.stratum_rows(sched, a); };
  ExponentReport rep = critical_exponent(fn, sched, {});
  if (bracket) *bracket = rep.bracket_width;
  return rep.alpha_star;
}

RunConfig parse_or_die(const std::string& text) {
  ParseResult r = parse_config(text);
  if (!r.ok()) {
    for (const auto& e : r.errors) std::fprintf(stderr, "config error: %s\n", e.message.c_str());
    std::exit(1);
  }
  return *r.config;
}

struct Criterion {
  int id;
  std::string name;
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("FAILED: " + what);
    }
  }
  void note(const std::string& what) { notes.push_back(what); }
};

// ---------------------------------------------------------------------------

Criterion criterion1_zoo_recovery() {
  Criterion c{1, "zoo exponent recovery (n 8..16, N_max 16, greedy)"};
  auto sched = range_schedule(8, 16);
  for (const char* name : {"identity", "contraction", "doubling", "tripling", "periodic-23"}) {
    const ZooEntry& e = zoo_lookup(name);
    for (double eps : {0.05, 0.1, 0.2}) {
      auto t0 = Clock::now();
      double alpha = nb_exponent(e.system, SetSpec::full(), eps, sched, 16, CoverMode::Greedy);
      double secs = seconds_since(t0);
      double ref = e.alpha_ref(eps);
      double rel = std::fabs(alpha - ref) / ref;
      double tol = (std::string(name) == "doubling" && eps == 0.1) ? 0.05 : 0.10;
      char line[256];
      std::snprintf(line, sizeof(line),
                    "%-12s eps=%.2f alpha*=%.4f ref=%.4f rel=%.1f%% tol=%.0f%% %.2fs %s", name,
                    eps, alpha, ref, 100 * rel, 100 * tol, secs,
                    rel <= tol ? "ok" : "FAIL");
      c.note(line);
      c.require(rel <= tol, std::string(name) + " eps=" + std::to_string(eps));
      c.require(secs <= 60.0, std::string(name) + " runtime");
    }
  }
  return c;
}

Criterion criterion2_symbolic_exactness() {
  Criterion c{2, "symbolic exactness (counts exact, exponents within 1e-3)"};
  auto t0 = Clock::now();
  struct Row {
    const char* name;
    double growth;
  };
  const Row rows[] = {{"full-shift-2", 2.0},
                      {"full-shift-3", 3.0},
                      {"golden-mean", 0.5 * (1.0 + std::sqrt(5.0))}};
  double eps = 0.5;
  for (const Row& r : rows) {
    const ZooEntry& e = zoo_lookup(r.name);
    // covering counts at alpha = 0 equal the word-count oracle for n <= 10
    for (std::int64_t n = 2; n <= 10; ++n) {
      EvalOptions opts;
      opts.mode = CoverMode::Exact;
      opts.n_max = n;
      OuterEvaluator ev(e.system, SetSpec::full(), eps, opts);
      double pipeline = ev.value(n, 0.0);
      double oracle = e.oracle_count(n, eps);
      if (pipeline != oracle) {
        char line[160];
        std::snprintf(line, sizeof(line), "%s n=%lld pipeline=%.0f oracle=%.0f", r.name,
                      static_cast<long long>(n), pipeline, oracle);
        c.note(line);
      }
      c.require(pipeline == oracle, std::string(r.name) + " count at n=" + std::to_string(n));
    }
    // critical exponent: n*eps integral on the even schedule, so the
    // reference (1 + ceil(n eps)/n) ln(growth) = 1.5 ln(growth) uniformly
    auto sched = std::vector<std::int64_t>{6, 8, 10};
    double bracket = 0.0;
    double alpha = nb_exponent(e.system, SetSpec::full(), eps, sched, 10, CoverMode::Exact,
                               RadiusMode::Neutralized, &bracket);
    double ref = 1.5 * std::log(r.growth);
    char line[160];
    std::snprintf(line, sizeof(line), "%-12s exponent=%.6f ref=%.6f diff=%.2e", r.name, alpha,
                  ref, std::fabs(alpha - ref));
    c.note(line);
    c.require(std::fabs(alpha - ref) <= 1e-3, std::string(r.name) + " exponent");
  }
  double secs = seconds_since(t0);
  c.note("runtime " + std::to_string(secs) + "s (limit 30)");
  c.require(secs <= 30.0, "runtime");
  return c;
}

Criterion criterion3_sandwich() {
  Criterion c{3, "sandwich chain M(n,a+t,e/2) <= W(n,a,e) <= M(n,a,e)"};
  RunConfig cfg = parse_or_die(
      "[run]\ntask = verify-sandwich\nseed = 2026\n[system]\nref = zoo:full-shift-2\n"
      "[verify]\ninstances = 20\n");
  RunOutcome out = run(cfg);
  c.require(out.exit_code == 0, "runner exit code " + std::to_string(out.exit_code));
  int checks = out.records.back()["checks"].get<int>();
  int violations = out.records.back()["violations"].get<int>();
  c.note("checks=" + std::to_string(checks) + " violations=" + std::to_string(violations));
  c.require(checks >= 20 * 27, "grid coverage");
  c.require(violations == 0, "zero violations required");
  return c;
}

Criterion criterion4_frostman() {
  Criterion c{4, "frostman feasibility (mu(B) <= e^{-am}/c + 1e-9, gap <= 1e-9)"};
  RunConfig cfg = parse_or_die(
      "[run]\ntask = verify-frostman\nseed = 404\n[system]\nref = zoo:full-shift-2\n"
      "[verify]\ninstances = 10\n");
  RunOutcome out = run(cfg);
  c.require(out.exit_code == 0, "runner exit code " + std::to_string(out.exit_code));
  int violations = out.records.back()["violations"].get<int>();
  int checks = out.records.back()["checks"].get<int>();
  c.note("instances checked=" + std::to_string(checks) +
         " violations=" + std::to_string(violations));
  c.require(violations == 0, "post-check must pass on every ball");
  // spread over a second system kind
  RunConfig cfg2 = parse_or_die(
      "[run]\ntask = verify-frostman\nseed = 405\n[system]\nref = zoo:golden-mean\n"
      "[verify]\ninstances = 5\n");
  RunOutcome out2 = run(cfg2);
  c.require(out2.exit_code == 0, "golden-mean instances");
  return c;
}

Criterion criterion5_prop25() {
  Criterion c{5, "bk(eps/2) <= katok(eps) + slack on measure pairs"};
  RunConfig cfg = parse_or_die("[run]\ntask = verify-prop25\nseed = 77\n");
  RunOutcome out = run(cfg);
  c.require(out.exit_code == 0, "runner exit code " + std::to_string(out.exit_code));
  std::size_t pairs = out.records.back()["pairs"].get<std::size_t>();
  int violations = out.records.back()["violations"].get<int>();
  int without_slack = 0;
  for (std::size_t i = 0; i + 1 < out.records.size(); ++i) {
    if (out.records[i]["bk_at_eps_half"].is_number() &&
        out.records[i]["bk_at_eps_half"].get<double>() <=
            out.records[i]["katok_at_eps"].get<double>())
      ++without_slack;
  }
  c.note("pairs=" + std::to_string(pairs) + " violations=" + std::to_string(violations) +
         " held-without-slack=" + std::to_string(without_slack));
  c.require(pairs >= 10, "at least 10 pairs");
  c.require(violations == 0, "zero violations required");
  return c;
}

Criterion criterion6_theorem_a_direction() {
  Criterion c{6, "katok(mu,eps) <= NB(eps) + slack; doubling sup-approach"};
  const double eps = 0.4;
  const std::vector<double> deltas{0.3, 0.15};
  int checked = 0, failed = 0;
  for (const ZooEntry& e : zoo_entries()) {
    if (e.exploratory) continue;
    bool symbolic = e.system.space.is_symbolic();
    auto nb_sched = range_schedule(8, 16);
    double nb_bracket = 0.0;
    double nb = nb_exponent(e.system, SetSpec::full(), eps, nb_sched, 16, CoverMode::Greedy,
                            RadiusMode::Neutralized, &nb_bracket);
    auto kat_sched = symbolic ? range_schedule(4, 6) : range_schedule(4, 8);
    EvalOptions kopts;
    kopts.n_max = kat_sched.back();
    const std::int64_t counts[] = {256, 512, 1024, 737, 2048};
    const SamplerConfig::Init inits[] = {SamplerConfig::Init::Grid, SamplerConfig::Init::Random,
                                         SamplerConfig::Init::Grid, SamplerConfig::Init::Random,
                                         SamplerConfig::Init::Grid};
    for (int mi = 0; mi < 5; ++mi) {
      SamplerConfig sc;
      sc.seed = 1000 + 17 * static_cast<std::uint64_t>(mi);
      sc.sample_count = counts[mi];
      sc.init = inits[mi];
      FiniteMeasure mu = empirical_measure(e.system, sc, 1, kat_sched.back());
      KatokReport rep = katok_entropy(e.system, mu, {eps}, deltas, kat_sched, kopts, {});
      double kat = rep.points.back().report.alpha_star;
      double slack = rep.points.back().report.bracket_width + nb_bracket +
                     std::log(2.0) / static_cast<double>(kat_sched.back());
      ++checked;
      bool ok = kat <= nb + slack + 1e-12;
      if (!ok) {
        ++failed;
        char line[200];
        std::snprintf(line, sizeof(line), "%s measure#%d katok=%.4f nb=%.4f slack=%.4f FAIL",
                      e.name.c_str(), mi, kat, nb, slack);
        c.note(line);
      }
    }
  }
  c.note("system-measure pairs checked=" + std::to_string(checked));
  c.require(checked >= 40 && failed == 0, "direction check on all supported measures");

  // sup-approach evidence: the best empirical measure on the doubling map
  // reaches within 15 percent of the NB exponent at eps = 0.1.
  const ZooEntry& db = zoo_lookup("doubling");
  double nb01 = nb_exponent(db.system, SetSpec::full(), 0.1, range_schedule(8, 16), 16,
                            CoverMode::Greedy);
  double best = 0.0;
  for (std::int64_t atoms : {4096, 8192}) {
    SamplerConfig sc;
    sc.seed = 5;
    sc.sample_count = atoms;
    sc.init = SamplerConfig::Init::Grid;
    FiniteMeasure mu = empirical_measure(db.system, sc, 1, 8);
    EvalOptions kopts;
    kopts.n_max = 8;
    KatokReport rep = katok_entropy(db.system, mu, {0.1}, {0.2, 0.1}, range_schedule(4, 8),
                                    kopts, {});
    best = std::max(best, rep.points.back().report.alpha_star);
  }
  char line[160];
  std::snprintf(line, sizeof(line), "doubling: best katok=%.4f vs NB=%.4f (gap %.1f%%)", best,
                nb01, 100.0 * std::fabs(nb01 - best) / nb01);
  c.note(line);
  c.require(std::fabs(nb01 - best) / nb01 <= 0.15, "sup-approach within 15 percent");
  return c;
}

Criterion criterion7_vitali() {
  Criterion c{7, "vitali selection postconditions on 1000 families per space kind"};
  RunConfig cfg = parse_or_die(
      "[run]\ntask = verify-vitali\nseed = 99\n[verify]\nfamilies = 1000\n");
  RunOutcome out = run(cfg);
  c.require(out.exit_code == 0, "runner exit code " + std::to_string(out.exit_code));
  int violations = out.records.back()["violations"].get<int>();
  std::int64_t probes = out.records.back()["membership_probes"].get<std::int64_t>();
  c.note("violations=" + std::to_string(violations) +
         " membership probes=" + std::to_string(probes));
  c.require(violations == 0, "all sampled postconditions must hold");
  return c;
}

Criterion criterion8_structural() {
  Criterion c{8, "structural properties (tables, Z, unions, W<=M, fixed<=neutralized)"};

  // monotone-in-n value tables across backends
  {
    EvalOptions opts;
    opts.mode = CoverMode::Exact;
    opts.n_max = 10;
    OuterEvaluator gm(zoo_lookup("golden-mean").system, SetSpec::full(), 0.5, opts);
    OuterEvaluator fs(zoo_lookup("full-shift-2").system, SetSpec::full(), 0.5, opts);
    EvalOptions aopts;
    aopts.mode = CoverMode::Greedy;
    aopts.n_max = 14;
    OuterEvaluator db(zoo_lookup("doubling").system, SetSpec::full(), 0.3, aopts);
    for (double alpha : {0.0, 0.5, 1.0, 2.0}) {
      ValueTable t1{0.5, RadiusMode::Neutralized, 10, alpha, gm.rows(range_schedule(4, 10), alpha)};
      ValueTable t2{0.5, RadiusMode::Neutralized, 10, alpha, fs.rows(range_schedule(4, 10), alpha)};
      ValueTable t3{0.3, RadiusMode::Neutralized, 14, alpha, db.rows(range_schedule(6, 14), alpha)};
      c.require(t1.monotone_in_n() && t2.monotone_in_n() && t3.monotone_in_n(),
                "monotone-in-n at alpha=" + std::to_string(alpha));
    }
  }

  // monotone in Z: proper subshift vs full shift, values and exponents
  {
    System fs = zoo_lookup("full-shift-2").system;
    EvalOptions opts;
    opts.mode = CoverMode::Exact;
    opts.n_max = 10;
    OuterEvaluator sub(fs, SetSpec::avoid({{1, 1}}), 0.5, opts);
    OuterEvaluator full(fs, SetSpec::full(), 0.5, opts);
    auto sched = range_schedule(4, 10);
    bool values_ok = true;
    for (double alpha : {0.0, 0.7}) {
      for (std::int64_t n : sched)
        values_ok = values_ok && sub.value(n, alpha) <= full.value(n, alpha) + 1e-12;
    }
    c.require(values_ok, "value monotone in Z");
    ValueFn fsub = [&](double a) { return sub.stratum_rows(sched, a); };
    ValueFn ffull = [&](double a) { return full.stratum_rows(sched, a); };
    double es = critical_exponent(fsub, sched, {}).alpha_star;
    double ef = critical_exponent(ffull, sched, {}).alpha_star;
    c.require(es <= ef + 2e-3, "exponent monotone in Z");
  }

  // finite union: exponent of the union equals the max within 2x bracket
  {
    System fs = zoo_lookup("full-shift-2").system;
    EvalOptions opts;
    opts.mode = CoverMode::Exact;
    opts.n_max = 12;
    auto sched = range_schedule(8, 12);
    SetSpec z1 = SetSpec::avoid({{1, 1}});
    SetSpec z2 = SetSpec::avoid({{0, 1}, {1, 0}});
    auto expo = [&](const SetSpec& z) {
      OuterEvaluator ev(fs, z, 0.5, opts);
      ValueFn fn = [&](double a) { return ev.stratum_rows(sched, a); };
      return critical_exponent(fn, sched, {}).alpha_star;
    };
    double e1 = expo(z1), e2 = expo(z2), eu = expo(SetSpec::unite({z1, z2}));
    char line[160];
    std::snprintf(line, sizeof(line), "union: e1=%.5f e2=%.5f union=%.5f", e1, e2, eu);
    c.note(line);
    c.require(std::fabs(eu - std::max(e1, e2)) <= 2e-3, "finite-union max");
  }

  // W <= M exactly on sampled instances
  {
    System fs = zoo_lookup("full-shift-2").system;
    Rng rng(515);
    bool ok = true;
    for (int t = 0; t < 6; ++t) {
      std::vector<Point> ground;
      for (int i = 0; i < 32; ++i) ground.push_back(sample_point(fs.space, rng));
      auto balls = candidate_balls(fs, ground, 4, 6, 0.5, RadiusMode::Neutralized);
      FiniteInstance inst = make_instance(fs, ground, balls);
      for (double alpha : {0.0, 0.4, 0.9}) {
        ok = ok && outer_W(inst, alpha).value <= exact_min_cover(inst, alpha).cost + 1e-12;
      }
    }
    c.require(ok, "W <= M on every instance");
  }

  // fixed-radius exponents <= neutralized exponents at equal eps
  {
    for (const char* name : {"doubling", "full-shift-2"}) {
      const ZooEntry& e = zoo_lookup(name);
      auto sched = e.system.space.is_symbolic() ? range_schedule(6, 10) : range_schedule(8, 14);
      std::int64_t n_max = sched.back();
      CoverMode mode =
          e.system.space.is_symbolic() ? CoverMode::Exact : CoverMode::Greedy;
      double fixed = nb_exponent(e.system, SetSpec::full(), 0.35, sched, n_max, mode,
                                 RadiusMode::Fixed);
      double neutral = nb_exponent(e.system, SetSpec::full(), 0.35, sched, n_max, mode,
                                   RadiusMode::Neutralized);
      char line[160];
      std::snprintf(line, sizeof(line), "%s fixed=%.4f neutralized=%.4f", name, fixed, neutral);
      c.note(line);
      c.require(fixed <= neutral + 1e-3, std::string(name) + " fixed <= neutralized");
    }
  }
  return c;
}

Criterion criterion9_determinism(const std::string& tool, const std::string& workdir) {
  Criterion c{9, "byte-identical JSONL across repeated seeded runs"};
  if (tool.empty()) {
    c.require(false, "no --tool given");
    return c;
  }
  std::string cfg_path = workdir + "/det.cfg";
  {
    std::ofstream cfg(cfg_path);
    cfg << "[run]\ntask = estimate-nb\nseed = 31337\nmode = greedy\n"
        << "[system]\nref = zoo:doubling\n"
        << "[schedule]\nepsilons = 0.2,0.1\nn = 8..16\nn_max = 16\n";
  }
  auto run_once = [&](const std::string& out) {
    std::string cmd = tool + " --config " + cfg_path + " --out " + out + " 2>/dev/null";
    return std::system(cmd.c_str());
  };
  int rc1 = run_once(workdir + "/det1.jsonl");
  int rc2 = run_once(workdir + "/det2.jsonl");
  c.require(rc1 == 0 && rc2 == 0, "tool exit codes");
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::string a = slurp(workdir + "/det1.jsonl");
  std::string b = slurp(workdir + "/det2.jsonl");
  c.note("bytes=" + std::to_string(a.size()));
  c.require(!a.empty() && a == b, "estimate-nb reruns byte-identical");

  // a sampling-heavy task as well
  std::string kat_path = workdir + "/det_k.cfg";
  {
    std::ofstream cfg(kat_path);
    cfg << "[run]\ntask = estimate-katok\nseed = 99\n"
        << "[system]\nref = zoo:full-shift-2\n"
        << "[schedule]\nepsilons = 0.5\nn = 4..6\nn_max = 6\ndeltas = 0.3,0.15\n"
        << "[measure]\ncount = 256\ninit = random\n";
  }
  auto run_kat = [&](const std::string& out) {
    std::string cmd = tool + " --config " + kat_path + " --out " + out + " 2>/dev/null";
    return std::system(cmd.c_str());
  };
  c.require(run_kat(workdir + "/detk1.jsonl") == 0, "katok run 1");
  c.require(run_kat(workdir + "/detk2.jsonl") == 0, "katok run 2");
  std::string ka = slurp(workdir + "/detk1.jsonl");
  c.require(!ka.empty() && ka == slurp(workdir + "/detk2.jsonl"),
            "estimate-katok reruns byte-identical");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  std::string tool, workdir = ".";
  for (int i = 1; i + 1 < argc; i += 2) {
    std::string flag = argv[i];
    if (flag == "--tool") tool = argv[i + 1];
    if (flag == "--workdir") workdir = argv[i + 1];
  }
  if (!workdir.empty()) {
    std::string mk = "mkdir -p " + workdir;
    if (std::system(mk.c_str()) != 0) {
      std::fprintf(stderr, "cannot create workdir %s\n", workdir.c_str());
      return 1;
    }
  }

  std::vector<Criterion> results;
  results.push_back(criterion1_zoo_recovery());
  results.push_back(criterion2_symbolic_exactness());
  results.push_back(criterion3_sandwich());
  results.push_back(criterion4_frostman());
  results.push_back(criterion5_prop25());
  results.push_back(criterion6_theorem_a_direction());
  results.push_back(criterion7_vitali());
  results.push_back(criterion8_structural());
  results.push_back(criterion9_determinism(tool, workdir));

  int failed = 0;
  for (const Criterion& c : results) {
    for (const std::string& n : c.notes) std::printf("    %s\n", n.c_str());
    std::printf("criterion %d [%s] -> %s\n", c.id, c.name.c_str(), c.pass ? "PASS" : "FAIL");
    if (!c.pass) ++failed;
  }
  std::printf("acceptance: %d/%zu criteria passed\n", static_cast<int>(results.size()) - failed,
              results.size());
  return failed == 0 ? 0 : 1;
}
