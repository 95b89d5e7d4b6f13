#include "nbe/lp.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "nbe/errors.hpp"

namespace nbe {

void LinearProgram::validate() const {
  if (objective.empty()) throw ArgumentError("LP needs at least one variable");
  for (const auto& r : rows) {
    if (r.size() != objective.size()) throw ArgumentError("LP row width mismatch");
  }
  if (rhs.size() != rows.size()) throw ArgumentError("LP rhs length mismatch");
  auto finite = [](double v) { return std::isfinite(v); };
  for (double v : objective) {
    if (!finite(v)) throw ArgumentError("LP objective entry not finite");
  }
  for (const auto& r : rows) {
    for (double v : r) {
      if (!finite(v)) throw ArgumentError("LP matrix entry not finite");
    }
  }
  for (double v : rhs) {
    if (!finite(v)) throw ArgumentError("LP rhs entry not finite");
  }
}

namespace {

constexpr double kPivTol = 1e-9;
constexpr double kFeasTol = 1e-9;

// Dense tableau with columns [structural | surplus | artificial | rhs].
struct Tableau {
  std::size_t n, m;            // structural vars, rows
  std::size_t cols;            // n + m surplus + m artificial
  std::vector<std::vector<double>> w;  // m rows of cols+1 (rhs last)
  std::vector<std::size_t> basis;      // basic column per row
  std::vector<double> sigma;           // row scaling vs the original system

  explicit Tableau(const LinearProgram& lp)
      : n(lp.num_vars()), m(lp.num_rows()), cols(n + 2 * m),
        w(m, std::vector<double>(cols + 1, 0.0)), basis(m), sigma(m, 1.0) {
    for (std::size_t i = 0; i < m; ++i) {
      double s = lp.rhs[i] < 0.0 ? -1.0 : 1.0;
      sigma[i] = s;
      for (std::size_t j = 0; j < n; ++j) w[i][j] = s * lp.rows[i][j];
      w[i][n + i] = -s;            // surplus column, original coefficient -1
      w[i][n + m + i] = 1.0;       // artificial
      w[i][cols] = s * lp.rhs[i];
      basis[i] = n + m + i;
    }
  }

  bool is_artificial(std::size_t j) const { return j >= n + m; }

  void pivot(std::size_t row, std::size_t col) {
    double inv = 1.0 / w[row][col];
    for (std::size_t j = 0; j <= cols; ++j) w[row][j] *= inv;
    w[row][col] = 1.0;  // cancel residual rounding
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row) continue;
      double f = w[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols; ++j) w[i][j] -= f * w[row][j];
      w[i][col] = 0.0;
    }
    basis[row] = col;
  }

  // Bland's rule throughout. Returns false on iteration blow-up.
  enum class Run { Optimal, Unbounded, Stalled };
  Run simplex(const std::vector<double>& cost, bool allow_artificial_entering) {
    std::size_t max_iter = 2000 + 200 * (m + n);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
      // Reduced costs r_j = cost_j - cost_B . column_j.
      std::vector<double> cb(m);
      for (std::size_t i = 0; i < m; ++i) cb[i] = cost[basis[i]];
      std::size_t enter = cols;
      for (std::size_t j = 0; j < cols; ++j) {
        if (!allow_artificial_entering && is_artificial(j)) continue;
        double r = cost[j];
        for (std::size_t i = 0; i < m; ++i) {
          if (cb[i] != 0.0) r -= cb[i] * w[i][j];
        }
        if (r < -kPivTol) {
          enter = j;
          break;  // Bland: smallest index
        }
      }
      if (enter == cols) return Run::Optimal;
      std::size_t leave = m;
      double best_ratio = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (w[i][enter] > kPivTol) {
          double ratio = w[i][cols] / w[i][enter];
          if (leave == m || ratio < best_ratio - 1e-15 ||
              (std::fabs(ratio - best_ratio) <= 1e-15 && basis[i] < basis[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave == m) return Run::Unbounded;
      pivot(leave, enter);
    }
    return Run::Stalled;
  }
};

}  // namespace

LPSolution lp_solve(const LinearProgram& lp) {
  lp.validate();
  LPSolution sol;
  Tableau t(lp);
  const std::size_t n = t.n, m = t.m;

  // Phase 1: minimize the artificial sum.
  std::vector<double> phase1(t.cols, 0.0);
  for (std::size_t j = n + m; j < t.cols; ++j) phase1[j] = 1.0;
  auto run1 = t.simplex(phase1, true);
  if (run1 == Tableau::Run::Stalled) {
    sol.status = LPStatus::SolverFailure;
    return sol;
  }
  double art_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (t.is_artificial(t.basis[i])) art_sum += t.w[i][t.cols];
  }
  if (art_sum > 1e-7) {
    sol.status = LPStatus::Infeasible;
    return sol;
  }
  // Pivot leftover artificials out where possible; rows with no eligible
  // pivot are redundant and keep a zero-valued artificial.
  for (std::size_t i = 0; i < m; ++i) {
    if (!t.is_artificial(t.basis[i])) continue;
    for (std::size_t j = 0; j < n + m; ++j) {
      if (std::fabs(t.w[i][j]) > 1e-7) {
        t.pivot(i, j);
        break;
      }
    }
  }

  // Phase 2.
  std::vector<double> phase2(t.cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = lp.objective[j];
  auto run2 = t.simplex(phase2, false);
  if (run2 == Tableau::Run::Stalled) {
    sol.status = LPStatus::SolverFailure;
    return sol;
  }
  if (run2 == Tableau::Run::Unbounded) {
    sol.status = LPStatus::Unbounded;
    return sol;
  }

  // Primal solution.
  sol.primal.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis[i] < n) sol.primal[t.basis[i]] = t.w[i][t.cols];
  }
  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += lp.objective[j] * sol.primal[j];

  // Duals: y_tilde = cost_B . B^{-1}; B^{-1} columns sit under the initial
  // artificial identity. Original duals undo the row scaling.
  sol.dual.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double yi = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      double cbk = phase2[t.basis[k]];
      if (cbk != 0.0) yi += cbk * t.w[k][n + m + i];
    }
    sol.dual[i] = t.sigma[i] * yi;
    if (sol.dual[i] < 0.0 && sol.dual[i] > -1e-9) sol.dual[i] = 0.0;
  }

  // Certificates.
  double pres = 0.0;
  for (std::size_t j = 0; j < n; ++j) pres = std::max(pres, -sol.primal[j]);
  for (std::size_t i = 0; i < m; ++i) {
    double ax = 0.0;
    for (std::size_t j = 0; j < n; ++j) ax += lp.rows[i][j] * sol.primal[j];
    pres = std::max(pres, lp.rhs[i] - ax);
  }
  double dres = 0.0;
  double by = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    dres = std::max(dres, -sol.dual[i]);
    by += lp.rhs[i] * sol.dual[i];
  }
  for (std::size_t j = 0; j < n; ++j) {
    double aty = 0.0;
    for (std::size_t i = 0; i < m; ++i) aty += lp.rows[i][j] * sol.dual[i];
    dres = std::max(dres, aty - lp.objective[j]);
  }
  sol.primal_residual = pres;
  sol.dual_residual = dres;
  sol.duality_gap = std::fabs(sol.objective - by);

  double scale = 1.0 + std::fabs(sol.objective);
  if (pres > kFeasTol * scale || dres > kFeasTol * scale ||
      sol.duality_gap > kFeasTol * scale) {
    sol.status = LPStatus::SolverFailure;
    return sol;
  }
  sol.status = LPStatus::Optimal;
  return sol;
}

FractionalCover fractional_cover(const FiniteInstance& inst, double alpha) {
  LinearProgram lp;
  lp.objective.resize(inst.balls.size());
  for (std::size_t b = 0; b < inst.balls.size(); ++b)
    lp.objective[b] = std::exp(-alpha * static_cast<double>(inst.balls[b].order));
  lp.rows.assign(inst.ground.size(), std::vector<double>(inst.balls.size(), 0.0));
  lp.rhs.assign(inst.ground.size(), 1.0);
  for (std::size_t b = 0; b < inst.balls.size(); ++b) {
    for (std::size_t p = 0; p < inst.ground.size(); ++p) {
      if (inst.membership.get(b, p)) lp.rows[p][b] = 1.0;
    }
  }
  LPSolution s = lp_solve(lp);
  if (s.status == LPStatus::Infeasible)
    throw InstanceError("fractional cover infeasible: uncoverable ground point");
  if (s.status != LPStatus::Optimal)
    throw SolverError("fractional cover LP did not certify an optimum");
  FractionalCover fc;
  fc.value = s.objective;
  fc.weights = s.primal;
  fc.solution = std::move(s);
  return fc;
}

FrostmanResult frostman_measure(const FiniteInstance& inst, double alpha) {
  FractionalCover fc = fractional_cover(inst, alpha);
  if (!(fc.value > 0.0))
    throw ArgumentError("frostman construction needs a positive cover value");
  double total = 0.0;
  for (double y : fc.solution.dual) total += y;
  std::vector<FiniteMeasure::Atom> atoms;
  for (std::size_t p = 0; p < inst.ground.size(); ++p) {
    double mass = fc.solution.dual[p] / total;
    if (mass > 0.0) atoms.push_back({inst.ground[p], mass});
  }
  // Re-normalise exactly (duals carry 1e-9 scale noise).
  double acc = 0.0;
  for (auto& a : atoms) acc += a.mass;
  for (auto& a : atoms) a.mass /= acc;
  FrostmanResult res{FiniteMeasure(inst.system.space, std::move(atoms)), fc.value, 0.0,
                     fc.solution.duality_gap};
  // Independent post-check: query every candidate ball through mass_of_ball.
  for (const BallSpec& b : inst.balls) {
    double bound = std::exp(-alpha * static_cast<double>(b.order)) / fc.value;
    double mass = mass_of_ball(res.measure, inst.system, b);
    res.max_ball_residual = std::max(res.max_ball_residual, mass - bound);
  }
  return res;
}

std::string LinearProgram::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "lp v1 minimize\n" << num_vars() << " vars " << num_rows() << " rows\n";
  os << "objective";
  for (double v : objective) os << " " << v;
  os << "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << "row";
    for (double v : rows[i]) os << " " << v;
    os << " >= " << rhs[i] << "\n";
  }
  return os.str();
}

std::string LPSolution::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "status ";
  switch (status) {
    case LPStatus::Optimal: os << "optimal"; break;
    case LPStatus::Infeasible: os << "infeasible"; break;
    case LPStatus::Unbounded: os << "unbounded"; break;
    case LPStatus::SolverFailure: os << "solver-failure"; break;
  }
  os << "\nobjective " << objective << "\ngap " << duality_gap << "\nprimal";
  for (double v : primal) os << " " << v;
  os << "\ndual";
  for (double v : dual) os << " " << v;
  os << "\n";
  return os.str();
}

}  // namespace nbe
