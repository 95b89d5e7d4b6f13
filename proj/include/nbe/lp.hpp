#pragma once

#include <string>
#include <vector>

#include "nbe/cover.hpp"
#include "nbe/measure.hpp"

namespace nbe {

// minimize c'x  subject to  A x >= b,  x >= 0.
struct LinearProgram {
  std::vector<double> objective;           // length n
  std::vector<std::vector<double>> rows;   // m rows of length n
  std::vector<double> rhs;                 // length m

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return rows.size(); }
  void validate() const;

  std::string to_text() const;
};

enum class LPStatus { Optimal, Infeasible, Unbounded, SolverFailure };

struct LPSolution {
  LPStatus status = LPStatus::SolverFailure;
  std::vector<double> primal;   // x
  std::vector<double> dual;     // y >= 0, one per constraint
  double objective = 0.0;
  double duality_gap = 0.0;
  double primal_residual = 0.0;  // max violation of Ax >= b, x >= 0
  double dual_residual = 0.0;    // max violation of A'y <= c, y >= 0

  std::string to_text() const;
};

// Dense tableau simplex, two phases, Bland's anti-cycling rule. An optimal
// result is always certified (primal/dual residuals and gap <= 1e-9 scale);
// anything the certificate rejects comes back as SolverFailure, never as a
// wrong Optimal.
LPSolution lp_solve(const LinearProgram& lp);

// Fractional cover value of an instance: min sum_i c_i e^{-alpha n_i} with
// sum_{i : ball i contains z} c_i >= 1 for every ground point z.
struct FractionalCover {
  double value = 0.0;
  std::vector<double> weights;  // per candidate ball
  LPSolution solution;          // duals live on ground points
};
FractionalCover fractional_cover(const FiniteInstance& inst, double alpha);

// Frostman measure from the dual of the fractional cover program:
// mu = y / c with c the cover value; mu(B) <= e^{-alpha m}/c for every
// candidate ball B of order m. The certificate reports the worst residual of
// an independent re-check through mass_of_ball.
struct FrostmanResult {
  FiniteMeasure measure;
  double cover_value = 0.0;
  double max_ball_residual = 0.0;  // max over balls of mu(B) - bound
  double duality_gap = 0.0;
};
FrostmanResult frostman_measure(const FiniteInstance& inst, double alpha);

}  // namespace nbe
