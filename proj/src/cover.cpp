#include "nbe/cover.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <istream>
#include <set>
#include <sstream>

#include "nbe/errors.hpp"

namespace nbe {

// ---------------------------------------------------------------------------
// BitMatrix
// ---------------------------------------------------------------------------

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), bits_(rows * ((cols + 63) / 64), 0) {}

void BitMatrix::set(std::size_t r, std::size_t c) {
  bits_[r * wpr_ + c / 64] |= (std::uint64_t{1} << (c % 64));
}

bool BitMatrix::get(std::size_t r, std::size_t c) const {
  return (bits_[r * wpr_ + c / 64] >> (c % 64)) & 1u;
}

std::size_t BitMatrix::count_new(std::size_t r, const std::vector<std::uint64_t>& mask) const {
  std::size_t cnt = 0;
  const std::uint64_t* row = &bits_[r * wpr_];
  for (std::size_t w = 0; w < wpr_; ++w) cnt += std::popcount(row[w] & ~mask[w]);
  return cnt;
}

void BitMatrix::or_into(std::size_t r, std::vector<std::uint64_t>& mask) const {
  const std::uint64_t* row = &bits_[r * wpr_];
  for (std::size_t w = 0; w < wpr_; ++w) mask[w] |= row[w];
}

std::vector<std::uint64_t> BitMatrix::empty_mask() const {
  return std::vector<std::uint64_t>(wpr_, 0);
}

bool BitMatrix::mask_full(const std::vector<std::uint64_t>& mask, std::size_t cols) {
  std::size_t full_words = cols / 64;
  for (std::size_t w = 0; w < full_words; ++w) {
    if (mask[w] != ~std::uint64_t{0}) return false;
  }
  if (cols % 64) {
    std::uint64_t tail = (std::uint64_t{1} << (cols % 64)) - 1;
    if ((mask[full_words] & tail) != tail) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Instance construction
// ---------------------------------------------------------------------------

FiniteInstance make_instance(const System& sys, std::vector<Point> ground,
                             std::vector<BallSpec> balls) {
  if (ground.empty()) throw InstanceError("instance needs ground points");
  if (balls.empty()) throw InstanceError("instance needs candidate balls");
  FiniteInstance inst{sys, std::move(ground), std::move(balls), {}};
  inst.membership = BitMatrix(inst.balls.size(), inst.ground.size());
  std::vector<bool> covered(inst.ground.size(), false);
  for (std::size_t b = 0; b < inst.balls.size(); ++b) {
    for (std::size_t p = 0; p < inst.ground.size(); ++p) {
      if (ball_contains(sys, inst.balls[b], inst.ground[p])) {
        inst.membership.set(b, p);
        covered[p] = true;
      }
    }
  }
  for (std::size_t p = 0; p < covered.size(); ++p) {
    if (!covered[p]) {
      throw InstanceError("ground point " + std::to_string(p) +
                          " is not covered by any candidate ball");
    }
  }
  return inst;
}

FiniteInstance subset_instance(const FiniteInstance& inst,
                               const std::vector<std::size_t>& ball_indices) {
  if (ball_indices.empty()) throw InstanceError("instance needs candidate balls");
  FiniteInstance sub{inst.system, inst.ground, {}, {}};
  sub.balls.reserve(ball_indices.size());
  for (std::size_t i : ball_indices) sub.balls.push_back(inst.balls[i]);
  sub.membership = BitMatrix(sub.balls.size(), sub.ground.size());
  std::vector<bool> covered(sub.ground.size(), false);
  for (std::size_t b = 0; b < ball_indices.size(); ++b) {
    for (std::size_t p = 0; p < sub.ground.size(); ++p) {
      if (inst.membership.get(ball_indices[b], p)) {
        sub.membership.set(b, p);
        covered[p] = true;
      }
    }
  }
  for (std::size_t p = 0; p < covered.size(); ++p) {
    if (!covered[p])
      throw InstanceError("ground point " + std::to_string(p) +
                          " is not covered in the sub-instance");
  }
  return sub;
}

double CoverFamily::recompute_cost() const {
  double c = 0.0;
  for (const auto& [ball, w] : elements) {
    c += w * std::exp(-alpha * static_cast<double>(ball.order));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Nets and candidates
// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<int>> enumerate_words(const Space& space, int length,
                                              std::size_t limit) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  // Iterative DFS, lexicographic order.
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int s = stack.back();
    if (s >= space.alphabet()) {
      stack.pop_back();
      if (!cur.empty()) cur.pop_back();
      if (!stack.empty()) ++stack.back();
      continue;
    }
    int prev = cur.empty() ? -1 : cur.back();
    if (prev >= 0 && !space.transition_allowed(prev, s)) {
      ++stack.back();
      continue;
    }
    cur.push_back(s);
    if (static_cast<int>(cur.size()) == length) {
      out.push_back(cur);
      if (out.size() > limit) throw SizeError("cylinder enumeration exceeds limit");
      cur.pop_back();
      ++stack.back();
    } else {
      stack.push_back(0);
    }
  }
  return out;
}

}  // namespace

std::vector<Point> build_net(const Space& space, double r, std::size_t max_points) {
  if (!(r > 0.0)) throw ConfigError("net radius must be positive");
  if (space.is_symbolic()) {
    double need = -std::log(r);
    int len = need <= 0.0 ? 1 : static_cast<int>(std::ceil(need - 1e-9));
    if (len < 1) len = 1;
    if (len > space.horizon())
      throw ConfigError("net scale below the symbolic horizon resolution");
    auto words = enumerate_words(space, len, max_points);
    std::vector<Point> net;
    net.reserve(words.size());
    for (auto& w : words) net.push_back(word_point(space.extend_word(std::move(w), space.horizon())));
    return net;
  }
  auto per_axis = static_cast<std::int64_t>(std::ceil(1.0 / r));
  if (per_axis < 1) per_axis = 1;
  double total = std::pow(static_cast<double>(per_axis), space.dim());
  if (total > static_cast<double>(max_points))
    throw SizeError("net would need " + std::to_string(total) + " points");
  std::vector<Point> net;
  net.reserve(static_cast<std::size_t>(total));
  std::vector<std::int64_t> idx(static_cast<std::size_t>(space.dim()), 0);
  for (;;) {
    std::vector<double> c(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      c[i] = static_cast<double>(idx[i]) / static_cast<double>(per_axis);
    net.push_back(real_point(std::move(c)));
    std::size_t d = 0;
    while (d < idx.size() && ++idx[d] == per_axis) idx[d++] = 0;
    if (d == idx.size()) break;
  }
  return net;
}

std::vector<BallSpec> candidate_balls(const System& sys, const std::vector<Point>& zsample,
                                      std::int64_t n, std::int64_t n_max, double eps,
                                      RadiusMode mode, std::int64_t start,
                                      std::size_t max_balls) {
  if (n < 1 || n_max < n) throw ArgumentError("need 1 <= n <= N_max");
  if (!(eps > 0.0)) throw ArgumentError("scale must be positive");
  std::vector<BallSpec> out;
  for (std::int64_t m = n; m <= n_max; ++m) {
    BallSpec proto;
    proto.start = start;
    proto.order = m;
    proto.mode = mode;
    proto.eps = eps;
    double r = proto.effective_radius();
    if (sys.space.is_symbolic()) {
      int len = cylinder_length(proto);
      if (len > sys.space.horizon())
        throw ConfigError("scale infeasible for horizon: cylinder length " +
                          std::to_string(len) + " > L=" + std::to_string(sys.space.horizon()));
      if (len < 1) len = 1;
      if (zsample.empty()) {
        auto words = enumerate_words(sys.space, len, max_balls);
        for (auto& w : words) {
          BallSpec b = proto;
          b.center = word_point(sys.space.extend_word(std::move(w), sys.space.horizon()));
          out.push_back(std::move(b));
        }
      } else {
        std::vector<std::vector<int>> prefixes;
        prefixes.reserve(zsample.size());
        for (const Point& p : zsample) {
          if (static_cast<int>(p.symbols.size()) < len)
            throw ArgumentError("sample word shorter than cylinder length");
          prefixes.emplace_back(p.symbols.begin(), p.symbols.begin() + len);
        }
        std::sort(prefixes.begin(), prefixes.end());
        prefixes.erase(std::unique(prefixes.begin(), prefixes.end()), prefixes.end());
        for (auto& w : prefixes) {
          BallSpec b = proto;
          b.center = word_point(sys.space.extend_word(std::move(w), sys.space.horizon()));
          out.push_back(std::move(b));
        }
      }
    } else {
      double lip = 1.0;
      for (std::int64_t j = 0; j + 1 < m; ++j)
        lip *= sys.maps.map_at(start + j).lipschitz();
      double spacing = r / (3.0 * lip);
      auto net = build_net(sys.space, spacing, max_balls);
      for (auto& p : net) {
        BallSpec b = proto;
        b.center = std::move(p);
        out.push_back(std::move(b));
      }
    }
    if (out.size() > max_balls) throw SizeError("candidate family exceeds ball limit");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Greedy and exact covers
// ---------------------------------------------------------------------------

namespace {

bool tie_better(const BallSpec& a, const BallSpec& b) {
  if (a.order != b.order) return a.order < b.order;
  return a.center < b.center;
}

double ball_cost(const BallSpec& b, double alpha) {
  return std::exp(-alpha * static_cast<double>(b.order));
}

}  // namespace

CoverFamily greedy_cover(const FiniteInstance& inst, double alpha) {
  CoverFamily fam;
  fam.alpha = alpha;
  auto covered = inst.membership.empty_mask();
  std::size_t n_cov = 0;
  while (n_cov < inst.ground.size()) {
    std::size_t best = inst.balls.size();
    double best_score = 0.0;
    std::size_t best_new = 0;
    for (std::size_t b = 0; b < inst.balls.size(); ++b) {
      std::size_t fresh = inst.membership.count_new(b, covered);
      if (fresh == 0) continue;
      double score = ball_cost(inst.balls[b], alpha) / static_cast<double>(fresh);
      if (best == inst.balls.size() || score < best_score ||
          (score == best_score && tie_better(inst.balls[b], inst.balls[best]))) {
        best = b;
        best_score = score;
        best_new = fresh;
      }
    }
    if (best == inst.balls.size())
      throw InstanceError("greedy cover stalled: uncoverable ground point");
    inst.membership.or_into(best, covered);
    n_cov += best_new;
    fam.elements.emplace_back(inst.balls[best], 1.0);
    fam.cost += ball_cost(inst.balls[best], alpha);
  }
  fam.element_count = fam.elements.size();
  return fam;
}

namespace {

// Depth-first branch and bound over candidate subsets (<= 24 candidates).
struct BnB {
  const FiniteInstance& inst;
  double alpha;
  std::vector<double> costs;
  std::vector<std::size_t> order;   // balls sorted by cost asc (stable tie-break)
  double best_cost;
  std::vector<std::size_t> best_set;
  std::vector<std::size_t> cur;

  explicit BnB(const FiniteInstance& i, double a) : inst(i), alpha(a) {
    costs.resize(inst.balls.size());
    for (std::size_t b = 0; b < inst.balls.size(); ++b)
      costs[b] = ball_cost(inst.balls[b], alpha);
    order.resize(inst.balls.size());
    for (std::size_t b = 0; b < order.size(); ++b) order[b] = b;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      if (costs[x] != costs[y]) return costs[x] < costs[y];
      return tie_better(inst.balls[x], inst.balls[y]);
    });
    CoverFamily seed = greedy_cover(inst, alpha);
    best_cost = seed.cost;
    // Greedy gives a feasible incumbent; indices recovered below.
    best_set.clear();
    for (auto& [ball, w] : seed.elements) {
      (void)w;
      for (std::size_t b = 0; b < inst.balls.size(); ++b) {
        if (inst.balls[b].order == ball.order && inst.balls[b].center == ball.center) {
          best_set.push_back(b);
          break;
        }
      }
    }
  }

  void run(std::size_t pos, double cost, const std::vector<std::uint64_t>& covered,
           std::size_t n_cov) {
    if (n_cov == inst.ground.size()) {
      if (cost < best_cost - 1e-15) {
        best_cost = cost;
        best_set = cur;
      }
      return;
    }
    if (pos == order.size()) return;
    if (cost + costs[order[pos]] >= best_cost) return;  // cheapest remaining can't help
    std::size_t b = order[pos];
    std::size_t fresh = inst.membership.count_new(b, covered);
    if (fresh > 0) {
      std::vector<std::uint64_t> next = covered;
      inst.membership.or_into(b, next);
      cur.push_back(b);
      run(pos + 1, cost + costs[b], next, n_cov + fresh);
      cur.pop_back();
    }
    run(pos + 1, cost, covered, n_cov);
  }
};

// Exact cover over nested symbolic cylinders: a prefix-tree dynamic program.
// Each ball is the cylinder of its center's first cylinder_length symbols;
// strata lengths strictly increase with the order, so the family is laminar.
struct LaminarDP {
  const FiniteInstance& inst;
  double alpha;
  std::vector<std::int64_t> orders;  // sorted distinct
  std::vector<int> lengths;
  std::vector<std::size_t> ground_sorted;

  CoverFamily solve() {
    for (const BallSpec& b : inst.balls) {
      if (b.mode != inst.balls[0].mode || b.eps != inst.balls[0].eps ||
          b.start != inst.balls[0].start)
        throw InstanceError("cylinder cover needs a homogeneous ball family");
    }
    orders.clear();
    for (const BallSpec& b : inst.balls) orders.push_back(b.order);
    std::sort(orders.begin(), orders.end());
    orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
    lengths.clear();
    for (std::int64_t m : orders) {
      BallSpec proto = inst.balls[0];
      proto.order = m;
      lengths.push_back(cylinder_length(proto));
    }
    ground_sorted.resize(inst.ground.size());
    for (std::size_t i = 0; i < ground_sorted.size(); ++i) ground_sorted[i] = i;
    std::sort(ground_sorted.begin(), ground_sorted.end(), [&](std::size_t a, std::size_t b) {
      return inst.ground[a].symbols < inst.ground[b].symbols;
    });
    CoverFamily fam;
    fam.alpha = alpha;
    fam.cost = cover_range(0, ground_sorted.size(), 0, &fam);
    fam.element_count = fam.elements.size();
    return fam;
  }

  // Min cost to cover ground_sorted[lo, hi) using strata >= stratum; the
  // range shares the first lengths[stratum-1] symbols (or nothing at 0).
  double cover_range(std::size_t lo, std::size_t hi, std::size_t stratum, CoverFamily* out) {
    double total = 0.0;
    std::size_t i = lo;
    while (i < hi) {
      std::size_t j = i + 1;
      const auto& wi = inst.ground[ground_sorted[i]].symbols;
      int len = lengths[stratum];
      while (j < hi) {
        const auto& wj = inst.ground[ground_sorted[j]].symbols;
        if (!std::equal(wi.begin(), wi.begin() + len, wj.begin())) break;
        ++j;
      }
      total += cover_cylinder(i, j, stratum, out);
      i = j;
    }
    return total;
  }

  // Cover one cylinder-group: either take the ball at this stratum or refine.
  double cover_cylinder(std::size_t lo, std::size_t hi, std::size_t stratum, CoverFamily* out) {
    double take = std::exp(-alpha * static_cast<double>(orders[stratum]));
    if (stratum + 1 == orders.size()) {
      if (out) emit(lo, stratum, out);
      return take;
    }
    CoverFamily sub;
    sub.alpha = alpha;
    double refine = cover_range(lo, hi, stratum + 1, out ? &sub : nullptr);
    if (take <= refine + 1e-15) {
      if (out) emit(lo, stratum, out);
      return take;
    }
    if (out) {
      for (auto& e : sub.elements) out->elements.push_back(std::move(e));
    }
    return refine;
  }

  void emit(std::size_t lo, std::size_t stratum, CoverFamily* out) {
    BallSpec b = inst.balls[0];
    b.order = orders[stratum];
    std::vector<int> w(inst.ground[ground_sorted[lo]].symbols.begin(),
                       inst.ground[ground_sorted[lo]].symbols.begin() + lengths[stratum]);
    b.center = word_point(inst.system.space.extend_word(std::move(w),
                                                        inst.system.space.horizon()));
    out->elements.emplace_back(std::move(b), 1.0);
  }
};

}  // namespace

CoverFamily exact_min_cover(const FiniteInstance& inst, double alpha) {
  if (inst.system.space.is_symbolic()) {
    LaminarDP dp{inst, alpha, {}, {}, {}};
    CoverFamily fam = dp.solve();
    fam.cost = fam.recompute_cost();
    return fam;
  }
  if (inst.balls.size() > 24)
    throw SizeError("exact cover limited to 24 candidates on this space");
  BnB bnb(inst, alpha);
  auto covered = inst.membership.empty_mask();
  bnb.run(0, 0.0, covered, 0);
  CoverFamily fam;
  fam.alpha = alpha;
  for (std::size_t b : bnb.best_set) fam.elements.emplace_back(inst.balls[b], 1.0);
  std::sort(fam.elements.begin(), fam.elements.end(),
            [](const auto& x, const auto& y) { return tie_better(x.first, y.first); });
  fam.cost = fam.recompute_cost();
  fam.element_count = fam.elements.size();
  return fam;
}

CoverFamily mass_cover(const FiniteInstance& inst, const std::vector<double>& point_mass,
                       double alpha, double delta) {
  if (point_mass.size() != inst.ground.size())
    throw ArgumentError("point masses must match the ground set");
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("delta must be in (0,1)");
  double need = 1.0 - delta;

  if (inst.balls.size() <= 24) {
    // Branch and bound on subsets, mass constraint instead of full coverage.
    // Masses accrue incrementally; per-depth mask buffers avoid allocation.
    std::vector<double> costs(inst.balls.size());
    for (std::size_t b = 0; b < inst.balls.size(); ++b)
      costs[b] = ball_cost(inst.balls[b], alpha);
    std::vector<std::size_t> order(inst.balls.size());
    for (std::size_t b = 0; b < order.size(); ++b) order[b] = b;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      if (costs[x] != costs[y]) return costs[x] < costs[y];
      return tie_better(inst.balls[x], inst.balls[y]);
    });
    auto lists = ball_atom_lists(inst);
    double best_cost = -1.0;
    std::vector<std::size_t> best_set;
    std::vector<std::size_t> cur;
    std::vector<std::uint32_t> cover_count(inst.ground.size(), 0);
    std::function<void(std::size_t, double, double)> rec = [&](std::size_t pos, double cost,
                                                               double have) {
      if (have > need) {
        if (best_cost < 0.0 || cost < best_cost - 1e-15) {
          best_cost = cost;
          best_set = cur;
        }
        return;
      }
      if (pos == order.size()) return;
      if (best_cost >= 0.0 && cost + costs[order[pos]] >= best_cost) return;
      std::size_t b = order[pos];
      double gain = 0.0;
      for (std::uint32_t p : lists[b]) {
        if (cover_count[p] == 0) gain += point_mass[p];
        ++cover_count[p];
      }
      cur.push_back(b);
      rec(pos + 1, cost + costs[b], have + gain);
      cur.pop_back();
      for (std::uint32_t p : lists[b]) --cover_count[p];
      rec(pos + 1, cost, have);
    };
    rec(0, 0.0, 0.0);
    if (best_cost < 0.0)
      throw InstanceError("no candidate subfamily reaches mass 1-delta");
    CoverFamily fam;
    fam.alpha = alpha;
    for (std::size_t b : best_set) fam.elements.emplace_back(inst.balls[b], 1.0);
    std::sort(fam.elements.begin(), fam.elements.end(),
              [](const auto& x, const auto& y) { return tie_better(x.first, y.first); });
    fam.cost = fam.recompute_cost();
    fam.element_count = fam.elements.size();
    return fam;
  }

  return mass_cover_with_lists(inst, ball_atom_lists(inst), point_mass, alpha, delta);
}

std::vector<std::vector<std::uint32_t>> ball_atom_lists(const FiniteInstance& inst) {
  std::vector<std::vector<std::uint32_t>> lists(inst.balls.size());
  for (std::size_t b = 0; b < inst.balls.size(); ++b) {
    for (std::size_t p = 0; p < inst.ground.size(); ++p) {
      if (inst.membership.get(b, p)) lists[b].push_back(static_cast<std::uint32_t>(p));
    }
  }
  return lists;
}

namespace {

// Equal costs and equal masses: greedy reduces to repeatedly taking the ball
// with the most uncovered atoms, ties by the usual (order, center) rule.
// Count buckets with swap-removal give near-linear total work.
CoverFamily uniform_bucket_greedy(const FiniteInstance& inst,
                                  const std::vector<std::vector<std::uint32_t>>& lists,
                                  double unit_mass, double alpha, double need) {
  std::size_t nb = inst.balls.size();
  std::vector<std::uint32_t> rank_of(nb);  // tie-break rank
  std::vector<std::uint32_t> ball_of_rank(nb);
  {
    std::vector<std::uint32_t> order(nb);
    for (std::uint32_t i = 0; i < nb; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return tie_better(inst.balls[a], inst.balls[b]);
    });
    for (std::uint32_t r = 0; r < nb; ++r) rank_of[order[r]] = r;
    ball_of_rank = order;
  }

  // atom -> balls (by rank)
  std::vector<std::vector<std::uint32_t>> of_atom(inst.ground.size());
  for (std::uint32_t b = 0; b < nb; ++b) {
    for (std::uint32_t p : lists[b]) of_atom[p].push_back(rank_of[b]);
  }
  std::size_t max_gain = 0;
  std::vector<std::size_t> gain(nb);  // by rank
  for (std::uint32_t b = 0; b < nb; ++b) {
    gain[rank_of[b]] = lists[b].size();
    max_gain = std::max(max_gain, lists[b].size());
  }
  // buckets[g] holds ranks with current gain g, unsorted, with positions.
  std::vector<std::vector<std::uint32_t>> buckets(max_gain + 1);
  std::vector<std::uint32_t> pos(nb);
  for (std::uint32_t r = 0; r < nb; ++r) {
    pos[r] = static_cast<std::uint32_t>(buckets[gain[r]].size());
    buckets[gain[r]].push_back(r);
  }
  auto bucket_remove = [&](std::uint32_t r) {
    auto& bk = buckets[gain[r]];
    std::uint32_t last = bk.back();
    bk[pos[r]] = last;
    pos[last] = pos[r];
    bk.pop_back();
  };

  CoverFamily fam;
  fam.alpha = alpha;
  std::vector<bool> taken(inst.ground.size(), false);
  double have = 0.0;
  std::size_t g = max_gain;
  while (have <= need) {
    while (g > 0 && buckets[g].empty()) --g;
    if (g == 0) throw InstanceError("no candidate subfamily reaches mass 1-delta");
    std::uint32_t r = buckets[g][0];
    for (std::uint32_t cand : buckets[g]) r = std::min(r, cand);
    bucket_remove(r);
    gain[r] = 0;
    for (std::uint32_t p : lists[ball_of_rank[r]]) {
      if (taken[p]) continue;
      taken[p] = true;
      have += unit_mass;
      for (std::uint32_t r2 : of_atom[p]) {
        if (gain[r2] == 0) continue;
        bucket_remove(r2);
        --gain[r2];
        if (gain[r2] > 0) {
          pos[r2] = static_cast<std::uint32_t>(buckets[gain[r2]].size());
          buckets[gain[r2]].push_back(r2);
        }
      }
    }
    fam.elements.emplace_back(inst.balls[ball_of_rank[r]], 1.0);
  }
  fam.cost = fam.recompute_cost();
  fam.element_count = fam.elements.size();
  return fam;
}

}  // namespace

CoverFamily mass_cover_with_lists(const FiniteInstance& inst,
                                  const std::vector<std::vector<std::uint32_t>>& lists,
                                  const std::vector<double>& point_mass, double alpha,
                                  double delta) {
  if (point_mass.size() != inst.ground.size())
    throw ArgumentError("point masses must match the ground set");
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("delta must be in (0,1)");
  double need = 1.0 - delta;

  bool uniform = !point_mass.empty();
  for (double m : point_mass) {
    if (m != point_mass[0]) {
      uniform = false;
      break;
    }
  }
  bool equal_cost = true;
  for (const BallSpec& b : inst.balls) {
    if (b.order != inst.balls[0].order) {
      equal_cost = false;
      break;
    }
  }
  if (uniform && equal_cost)
    return uniform_bucket_greedy(inst, lists, point_mass[0], alpha, need);

  // Greedy: cost per newly captured mass, same tie-breaking as greedy_cover.
  CoverFamily fam;
  fam.alpha = alpha;
  std::vector<bool> taken_atom(inst.ground.size(), false);
  double have = 0.0;
  while (have <= need) {
    std::size_t best = inst.balls.size();
    double best_score = 0.0;
    double best_gain = 0.0;
    for (std::size_t b = 0; b < inst.balls.size(); ++b) {
      double gain = 0.0;
      for (std::uint32_t p : lists[b]) {
        if (!taken_atom[p]) gain += point_mass[p];
      }
      if (gain <= 0.0) continue;
      double score = ball_cost(inst.balls[b], alpha) / gain;
      if (best == inst.balls.size() || score < best_score ||
          (score == best_score && tie_better(inst.balls[b], inst.balls[best]))) {
        best = b;
        best_score = score;
        best_gain = gain;
      }
    }
    if (best == inst.balls.size())
      throw InstanceError("no candidate subfamily reaches mass 1-delta");
    for (std::uint32_t p : lists[best]) taken_atom[p] = true;
    have += best_gain;
    fam.elements.emplace_back(inst.balls[best], 1.0);
  }
  fam.cost = fam.recompute_cost();
  fam.element_count = fam.elements.size();
  return fam;
}

// ---------------------------------------------------------------------------
// One-dimensional sweeps
// ---------------------------------------------------------------------------

namespace {

// Rightmost-reach sweep over arcs centred on the lattice spacing*Z. Covers
// [start, target); the first arc must contain `start`. Runs of constant
// index advance are jumped in bulk so huge covers stay O(1)-ish.
std::int64_t lattice_sweep(double start, double target, double rho, double spacing) {
  if (!(rho > 0.0 && spacing > 0.0)) throw ArgumentError("rho and spacing must be positive");
  if (!(start < target)) throw ArgumentError("empty sweep range");
  double frontier = start;
  std::int64_t count = 0;
  std::int64_t prev_index = 0, prev_advance = 0;
  std::int64_t iterations = 0;
  while (frontier < target) {
    auto index = static_cast<std::int64_t>(std::floor((frontier + rho) / spacing + 1e-12));
    if (spacing * static_cast<double>(index) - rho >= frontier) --index;
    double c = spacing * static_cast<double>(index);
    if (!(c + rho > frontier)) throw ArgumentError("net spacing too coarse to chain arcs");
    std::int64_t advance = index - prev_index;
    frontier = c + rho;
    ++count;
    if (count > 4 && advance == prev_advance && advance > 0) {
      // constant-step regime: jump ahead, leaving a margin for the tail
      double step = spacing * static_cast<double>(advance);
      double remaining = target - frontier;
      auto bulk = static_cast<std::int64_t>(std::floor(remaining / step)) - 2;
      if (bulk > 0) {
        index += bulk * advance;
        frontier = spacing * static_cast<double>(index) + rho;
        count += bulk;
      }
    }
    prev_index = index;
    prev_advance = advance;
    if (++iterations > 50'000'000LL) throw SizeError("arc sweep runaway");
  }
  return count;
}

}  // namespace

std::int64_t arc_cover_count_circle(double rho, double spacing) {
  if (!(rho > 0.0 && spacing > 0.0)) throw ArgumentError("rho and spacing must be positive");
  if (rho >= 0.5) return 1;  // one arc spans the whole circle
  // First arc centred at 0 covers (-rho, rho); walk right until the wrap
  // closes, i.e. coverage reaches 1 - rho.
  return 1 + lattice_sweep(rho, 1.0 - rho, rho, spacing);
}

std::int64_t arc_cover_count_segment(double a, double b, double rho, double spacing) {
  return lattice_sweep(a, b, rho, spacing);
}

// ---------------------------------------------------------------------------
// Vitali selection
// ---------------------------------------------------------------------------

std::vector<std::size_t> vitali_select(const System& sys, const std::vector<BallSpec>& balls) {
  if (balls.empty()) throw ArgumentError("vitali selection needs balls");
  const BallSpec& b0 = balls[0];
  double r = b0.effective_radius();
  for (const BallSpec& b : balls) {
    if (b.order != b0.order || b.start != b0.start || b.mode != b0.mode ||
        b.effective_radius() != r)
      throw ArgumentError("vitali selection needs identical radii and orders");
  }
  std::size_t n = balls.size();
  // neighbour(i,j): centers within 2r in the Bowen metric, a superset of
  // actual ball intersection; disjoint neighbour families under this
  // predicate are disjoint under the true one as well.
  std::vector<std::vector<bool>> nb(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    nb[i][i] = true;
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = bowen_dist(sys, b0.start, b0.order, balls[i].center, balls[j].center);
      nb[i][j] = nb[j][i] = d < 2.0 * r;
    }
  }
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < n; ++i) {
    bool ok = true;
    for (std::size_t s : selected) {
      // I(i) and I(s) meet iff some ball is a neighbour of both.
      for (std::size_t k = 0; k < n && ok; ++k) {
        if (nb[i][k] && nb[s][k]) ok = false;
      }
      if (!ok) break;
    }
    if (ok) selected.push_back(i);
  }
  return selected;
}

// ---------------------------------------------------------------------------
// Text serialization (golden tests)
// ---------------------------------------------------------------------------

std::string FiniteInstance::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "instance v1\n";
  os << "ground " << ground.size() << "\n";
  for (const Point& p : ground) {
    if (system.space.is_symbolic()) {
      for (int s : p.symbols) os << s;
    } else {
      for (std::size_t i = 0; i < p.coords.size(); ++i) {
        if (i) os << " ";
        os << p.coords[i];
      }
    }
    os << "\n";
  }
  os << "balls " << balls.size() << "\n";
  for (const BallSpec& b : balls) {
    os << (b.mode == RadiusMode::Neutralized ? "N" : "F") << " " << b.start << " " << b.order
       << " " << b.eps << " ";
    if (system.space.is_symbolic()) {
      for (int s : b.center.symbols) os << s;
    } else {
      for (std::size_t i = 0; i < b.center.coords.size(); ++i) {
        if (i) os << " ";
        os << b.center.coords[i];
      }
    }
    os << "\n";
  }
  os << "membership\n";
  for (std::size_t b = 0; b < balls.size(); ++b) {
    for (std::size_t p = 0; p < ground.size(); ++p) os << (membership.get(b, p) ? '1' : '0');
    os << "\n";
  }
  return os.str();
}

FiniteInstance FiniteInstance::from_text(const System& sys, std::istream& in) {
  std::string tok;
  in >> tok;
  std::string version;
  in >> version;
  if (tok != "instance" || version != "v1") throw ArgumentError("bad instance header");
  std::size_t ng = 0, nb = 0;
  in >> tok >> ng;
  if (tok != "ground") throw ArgumentError("bad instance ground section");
  auto read_point = [&](const std::string& text) {
    Point p;
    if (sys.space.is_symbolic()) {
      for (char ch : text) p.symbols.push_back(ch - '0');
    }
    return p;
  };
  std::vector<Point> ground;
  for (std::size_t i = 0; i < ng; ++i) {
    if (sys.space.is_symbolic()) {
      in >> tok;
      ground.push_back(read_point(tok));
    } else {
      Point p;
      for (int d = 0; d < sys.space.dim(); ++d) {
        double v;
        in >> v;
        p.coords.push_back(v);
      }
      ground.push_back(std::move(p));
    }
  }
  in >> tok >> nb;
  if (tok != "balls") throw ArgumentError("bad instance balls section");
  std::vector<BallSpec> balls;
  for (std::size_t i = 0; i < nb; ++i) {
    BallSpec b;
    std::string mode;
    in >> mode >> b.start >> b.order >> b.eps;
    b.mode = (mode == "N") ? RadiusMode::Neutralized : RadiusMode::Fixed;
    if (sys.space.is_symbolic()) {
      in >> tok;
      b.center = read_point(tok);
    } else {
      for (int d = 0; d < sys.space.dim(); ++d) {
        double v;
        in >> v;
        b.center.coords.push_back(v);
      }
    }
    balls.push_back(std::move(b));
  }
  in >> tok;
  if (tok != "membership") throw ArgumentError("bad instance membership section");
  FiniteInstance inst{sys, std::move(ground), std::move(balls), {}};
  inst.membership = BitMatrix(inst.balls.size(), inst.ground.size());
  for (std::size_t b = 0; b < inst.balls.size(); ++b) {
    in >> tok;
    if (tok.size() != inst.ground.size()) throw ArgumentError("bad membership row length");
    for (std::size_t p = 0; p < inst.ground.size(); ++p) {
      if (tok[p] == '1') inst.membership.set(b, p);
    }
  }
  return inst;
}

}  // namespace nbe
