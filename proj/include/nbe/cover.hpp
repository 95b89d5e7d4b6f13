#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nbe/dynamics.hpp"
#include "nbe/space.hpp"
#include "nbe/zset.hpp"

namespace nbe {

// Dense bit matrix, rows = balls, columns = ground points.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  void set(std::size_t r, std::size_t c);
  bool get(std::size_t r, std::size_t c) const;

  // Number of columns set in the row but not in `mask` (mask = covered set).
  std::size_t count_new(std::size_t r, const std::vector<std::uint64_t>& mask) const;
  void or_into(std::size_t r, std::vector<std::uint64_t>& mask) const;
  std::size_t words_per_row() const { return wpr_; }
  std::vector<std::uint64_t> empty_mask() const;
  static bool mask_full(const std::vector<std::uint64_t>& mask, std::size_t cols);

 private:
  std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Finite restriction of a covering problem: sampled ground points of Z plus
// candidate balls with orders in [n, N_max]. Construction verifies that every
// ground point is covered by at least one candidate.
struct FiniteInstance {
  System system;
  std::vector<Point> ground;
  std::vector<BallSpec> balls;
  BitMatrix membership;

  std::string to_text() const;
  static FiniteInstance from_text(const System& sys, std::istream& in);
};

FiniteInstance make_instance(const System& sys, std::vector<Point> ground,
                             std::vector<BallSpec> balls);

// Sub-instance on a ball subset; membership rows are copied, not recomputed.
FiniteInstance subset_instance(const FiniteInstance& inst,
                               const std::vector<std::size_t>& ball_indices);

// Weighted family of balls; cost = sum_i w_i * exp(-alpha * order_i).
struct CoverFamily {
  std::vector<std::pair<BallSpec, double>> elements;  // weight 1 when unweighted
  double alpha = 0.0;
  double cost = 0.0;
  bool materialized = true;      // false: only element_count/cost are meaningful
  std::size_t element_count = 0;

  double recompute_cost() const;
};

// Net such that every point of the space is within distance r of a net
// point. Interval/torus: lattice with spacing <= r. Symbolic: all admissible
// words of length ceil(-ln r), extended to the horizon.
std::vector<Point> build_net(const Space& space, double r, std::size_t max_points = 50'000'000);

// Candidate balls for orders m in [n, N_max]. Continuous spaces: centers on a
// net with spacing radius(m) / (3 * Lip-product of the window). Symbolic
// spaces: one ball per admissible cylinder of the ball's word length; when
// `zsample` is nonempty only cylinders meeting the sample are produced.
std::vector<BallSpec> candidate_balls(const System& sys, const std::vector<Point>& zsample,
                                      std::int64_t n, std::int64_t n_max, double eps,
                                      RadiusMode mode, std::int64_t start = 1,
                                      std::size_t max_balls = 2'000'000);

// Greedy set cover: repeatedly pick the ball minimising cost per newly
// covered point; ties by lower order, then lexicographically smaller center.
CoverFamily greedy_cover(const FiniteInstance& inst, double alpha);

// Exact minimum-cost cover. Requires <= 24 candidates (branch and bound) or
// symbolic cylinder structure (prefix-tree dynamic program).
CoverFamily exact_min_cover(const FiniteInstance& inst, double alpha);

// Cheapest subfamily whose union has mu-mass (given per-ground-point masses)
// strictly above 1 - delta. Exact by branch and bound for <= 24 candidates,
// greedy by mass-per-cost otherwise.
CoverFamily mass_cover(const FiniteInstance& inst, const std::vector<double>& point_mass,
                       double alpha, double delta);

// Adjacency form of the membership matrix; callers that solve many mass
// covers on one instance build it once.
std::vector<std::vector<std::uint32_t>> ball_atom_lists(const FiniteInstance& inst);
CoverFamily mass_cover_with_lists(const FiniteInstance& inst,
                                  const std::vector<std::vector<std::uint32_t>>& lists,
                                  const std::vector<double>& point_mass, double alpha,
                                  double delta);

// ---------------------------------------------------------------------------
// Exact one-dimensional sweeps used by the large-scale interval paths.
// Arcs have half-length rho and centers on the lattice spacing*Z.
// Returns the minimum number of arcs covering the circle / the segment [a,b).
// ---------------------------------------------------------------------------
std::int64_t arc_cover_count_circle(double rho, double spacing);
std::int64_t arc_cover_count_segment(double a, double b, double rho, double spacing);

// Vitali selection: greedily (by input order) keeps balls whose neighbour
// index families I(i) = {j : d(x_i,x_j) < 2r} are pairwise disjoint. The
// union of all input balls is contained in the 5r-enlargements of the
// selected ones.
std::vector<std::size_t> vitali_select(const System& sys, const std::vector<BallSpec>& balls);

}  // namespace nbe
