#include "nbe/measure.hpp"

#include <cmath>
#include <istream>
#include <sstream>

#include "nbe/errors.hpp"
#include "nbe/rng.hpp"

namespace nbe {

FiniteMeasure::FiniteMeasure(Space space, std::vector<Atom> atoms)
    : space_(std::move(space)), atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw ArgumentError("a measure needs at least one atom");
  double total = 0.0;
  for (const Atom& a : atoms_) {
    if (!(a.mass > 0.0)) throw ArgumentError("atom masses must be positive");
    space_.require_point(a.point);
    total += a.mass;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw ArgumentError("atom masses must sum to 1 (got " + std::to_string(total) + ")");
}

FiniteMeasure FiniteMeasure::point_mass(const Space& space, Point p) {
  return FiniteMeasure(space, {Atom{std::move(p), 1.0}});
}

FiniteMeasure FiniteMeasure::uniform_on(const Space& space, std::vector<Point> pts) {
  if (pts.empty()) throw ArgumentError("uniform measure needs points");
  std::vector<Atom> atoms;
  atoms.reserve(pts.size());
  // Sum to 1 exactly: give the last atom the leftover mass.
  double w = 1.0 / static_cast<double>(pts.size());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    atoms.push_back(Atom{std::move(pts[i]), w});
    acc += w;
  }
  atoms.push_back(Atom{std::move(pts.back()), 1.0 - acc});
  return FiniteMeasure(space, std::move(atoms));
}

double mass_of_ball(const FiniteMeasure& mu, const System& sys, const BallSpec& ball) {
  if (!(mu.space() == sys.space))
    throw ArgumentError("measure and system live on different spaces");
  sys.space.require_point(ball.center);
  double m = 0.0;
  for (const auto& a : mu.atoms()) {
    if (ball_contains(sys, ball, a.point)) m += a.mass;
  }
  return m;
}

bool supported_on(const FiniteMeasure& mu, const std::function<bool(const Point&)>& z) {
  for (const auto& a : mu.atoms()) {
    if (!z(a.point)) return false;
  }
  return true;
}

Point sample_point(const Space& space, Rng& rng) {
  if (space.is_symbolic()) {
    std::vector<int> w;
    w.reserve(static_cast<std::size_t>(space.horizon()));
    int prev = -1;
    for (int i = 0; i < space.horizon(); ++i) {
      std::vector<int> opts;
      for (int s = 0; s < space.alphabet(); ++s) {
        if (prev < 0 || space.transition_allowed(prev, s)) opts.push_back(s);
      }
      if (opts.empty()) throw DomainError("admissibility rule admits no extension");
      prev = opts[static_cast<std::size_t>(rng.next_below(opts.size()))];
      w.push_back(prev);
    }
    return word_point(std::move(w));
  }
  std::vector<double> c(static_cast<std::size_t>(space.dim()));
  for (double& v : c) v = rng.next_double();
  return real_point(std::move(c));
}

Point grid_point(const Space& space, std::int64_t index, std::int64_t count) {
  if (space.is_symbolic()) {
    // Spread indices over admissible words by base-k expansion with repair.
    std::vector<int> w;
    std::int64_t v = index;
    int prev = -1;
    for (int i = 0; i < space.horizon(); ++i) {
      int s = static_cast<int>(v % space.alphabet());
      v /= space.alphabet();
      while (prev >= 0 && !space.transition_allowed(prev, s)) {
        s = (s + 1) % space.alphabet();
      }
      w.push_back(s);
      prev = s;
    }
    return word_point(std::move(w));
  }
  if (space.dim() == 1) {
    return real_point(static_cast<double>(index) / static_cast<double>(count));
  }
  // Row-major lattice with per-axis size ceil(count^(1/dim)).
  auto side = static_cast<std::int64_t>(
      std::ceil(std::pow(static_cast<double>(count), 1.0 / space.dim())));
  if (side < 1) side = 1;
  std::vector<double> c;
  std::int64_t v = index;
  for (int i = 0; i < space.dim(); ++i) {
    c.push_back(static_cast<double>(v % side) / static_cast<double>(side));
    v /= side;
  }
  return real_point(std::move(c));
}

FiniteMeasure empirical_measure(const System& sys, const SamplerConfig& cfg,
                                std::int64_t time_index, std::int64_t horizon) {
  if (cfg.sample_count < 1) throw ArgumentError("sample count must be >= 1");
  if (horizon < 1) throw ArgumentError("horizon must be >= 1");
  Rng rng(cfg.seed);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(cfg.sample_count));
  for (std::int64_t s = 0; s < cfg.sample_count; ++s) {
    Point x = (cfg.init == SamplerConfig::Init::Grid)
                  ? grid_point(sys.space, s, cfg.sample_count)
                  : sample_point(sys.space, rng);
    std::int64_t j = 0;
    if (cfg.push_random_steps)
      j = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(horizon)));
    pts.push_back(compose(sys, time_index, j, std::move(x)));
  }
  return FiniteMeasure::uniform_on(sys.space, std::move(pts));
}

std::string FiniteMeasure::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  if (space_.is_symbolic()) {
    os << "word,mass\n";
    for (const auto& a : atoms_) {
      for (int s : a.point.symbols) os << s;
      os << "," << a.mass << "\n";
    }
  } else {
    for (int i = 0; i < space_.dim(); ++i) os << "x" << i << ",";
    os << "mass\n";
    for (const auto& a : atoms_) {
      for (double c : a.point.coords) os << c << ",";
      os << a.mass << "\n";
    }
  }
  return os.str();
}

FiniteMeasure FiniteMeasure::from_csv(const Space& space, std::istream& in) {
  std::vector<Atom> atoms;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {  // skip column names
      header = false;
      continue;
    }
    std::istringstream ls(line);
    std::string cell;
    Atom a;
    if (space.is_symbolic()) {
      std::getline(ls, cell, ',');
      for (char ch : cell) {
        if (ch < '0' || ch > '9') throw ArgumentError("bad symbol in measure CSV");
        a.point.symbols.push_back(ch - '0');
      }
      std::getline(ls, cell, ',');
      a.mass = std::stod(cell);
    } else {
      for (int i = 0; i < space.dim(); ++i) {
        std::getline(ls, cell, ',');
        a.point.coords.push_back(std::stod(cell));
      }
      std::getline(ls, cell, ',');
      a.mass = std::stod(cell);
    }
    atoms.push_back(std::move(a));
  }
  return FiniteMeasure(space, std::move(atoms));
}

}  // namespace nbe
