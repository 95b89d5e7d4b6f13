#include "nbe/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "nbe/errors.hpp"
#include "nbe/zoo.hpp"

namespace nbe {

std::string task_name(Task t) {
  switch (t) {
    case Task::EstimateNB: return "estimate-nb";
    case Task::EstimateNWB: return "estimate-nwb";
    case Task::EstimateKatok: return "estimate-katok";
    case Task::EstimateBK: return "estimate-bk";
    case Task::VerifySandwich: return "verify-sandwich";
    case Task::VerifyProp25: return "verify-prop25";
    case Task::VerifyVitali: return "verify-vitali";
    case Task::VerifyFrostman: return "verify-frostman";
    case Task::ZooList: return "zoo-list";
  }
  return "?";
}

namespace {

std::optional<Task> task_from_name(const std::string& s) {
  static const std::map<std::string, Task> names = {
      {"estimate-nb", Task::EstimateNB},       {"estimate-nwb", Task::EstimateNWB},
      {"estimate-katok", Task::EstimateKatok}, {"estimate-bk", Task::EstimateBK},
      {"verify-sandwich", Task::VerifySandwich}, {"verify-prop25", Task::VerifyProp25},
      {"verify-vitali", Task::VerifyVitali},   {"verify-frostman", Task::VerifyFrostman},
      {"zoo-list", Task::ZooList}};
  auto it = names.find(s);
  if (it == names.end()) return std::nullopt;
  return it->second;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

}  // namespace

MapSequence parse_map_descriptor(const std::string& text) {
  if (text.rfind("periodic:", 0) == 0) {
    std::vector<MapDescriptor> maps;
    for (const std::string& part : split(text.substr(9), '|'))
      maps.push_back(parse_map_descriptor(part).maps()[0]);
    return MapSequence::periodic(std::move(maps));
  }
  if (text.rfind("switched:", 0) == 0) {
    // switched:<seed>:m1@w1|m2@w2|...
    std::string rest = text.substr(9);
    auto colon = rest.find(':');
    if (colon == std::string::npos) throw ArgumentError("switched needs a seed");
    std::uint64_t seed = std::stoull(rest.substr(0, colon));
    std::vector<MapDescriptor> maps;
    std::vector<double> weights;
    for (const std::string& part : split(rest.substr(colon + 1), '|')) {
      auto at = part.rfind('@');
      if (at == std::string::npos) throw ArgumentError("switched map needs @weight");
      maps.push_back(parse_map_descriptor(part.substr(0, at)).maps()[0]);
      weights.push_back(std::stod(part.substr(at + 1)));
    }
    return MapSequence::switched(seed, std::move(maps), std::move(weights));
  }
  if (text.rfind("affine:", 0) == 0) {
    std::vector<std::int64_t> a;
    std::vector<double> b;
    for (const std::string& coord : split(text.substr(7), ';')) {
      auto parts = split(coord, ',');
      if (parts.size() != 2) throw ArgumentError("affine coordinate needs a,b");
      a.push_back(std::stoll(parts[0]));
      b.push_back(std::stod(parts[1]));
    }
    return MapSequence::autonomous(MapDescriptor::affine(std::move(a), std::move(b)));
  }
  if (text.rfind("tent:", 0) == 0)
    return MapSequence::autonomous(MapDescriptor::tent(std::stod(text.substr(5))));
  if (text.rfind("logistic:", 0) == 0)
    return MapSequence::autonomous(MapDescriptor::logistic(std::stod(text.substr(9))));
  if (text.rfind("contraction:", 0) == 0)
    return MapSequence::autonomous(MapDescriptor::contraction(std::stod(text.substr(12))));
  if (text == "lshift") return MapSequence::autonomous(MapDescriptor::shift());
  throw ArgumentError("unknown map descriptor: " + text);
}

Space parse_space_descriptor(const std::string& text) {
  if (text == "interval") return Space::unit_interval();
  if (text.rfind("torus:", 0) == 0) return Space::torus(std::stoi(text.substr(6)));
  if (text.rfind("shift:", 0) == 0) {
    int k = 0, L = 0;
    std::vector<std::pair<int, int>> pairs;
    for (const std::string& part : split(text.substr(6), ',')) {
      if (part.rfind("k=", 0) == 0) {
        k = std::stoi(part.substr(2));
      } else if (part.rfind("L=", 0) == 0) {
        L = std::stoi(part.substr(2));
      } else if (part.rfind("avoid=", 0) == 0) {
        for (const std::string& w : split(part.substr(6), '|')) {
          if (w.size() != 2) throw ArgumentError("avoid factors must have length 2");
          pairs.emplace_back(w[0] - '0', w[1] - '0');
        }
      } else {
        throw ArgumentError("unknown shift parameter: " + part);
      }
    }
    return Space::symbolic(k, L, std::move(pairs));
  }
  throw ArgumentError("unknown space descriptor: " + text);
}

System system_from_config(const RunConfig& cfg) {
  if (!cfg.system_ref.empty()) {
    if (cfg.system_ref.rfind("zoo:", 0) != 0)
      throw ConfigError("system ref must look like zoo:<name>");
    return zoo_lookup(cfg.system_ref.substr(4)).system;
  }
  if (!cfg.inline_map || !cfg.inline_space)
    throw ConfigError("inline system needs both map and space");
  return System{parse_space_descriptor(*cfg.inline_space), parse_map_descriptor(*cfg.inline_map)};
}

namespace {

SetSpec parse_set(const std::string& text) {
  if (text == "full") return SetSpec::full();
  if (text.rfind("interval:", 0) == 0) {
    auto parts = split(text.substr(9), ',');
    if (parts.size() != 2) throw ArgumentError("interval set needs lo,hi");
    return SetSpec::interval(std::stod(parts[0]), std::stod(parts[1]));
  }
  if (text.rfind("avoid:", 0) == 0) {
    std::vector<std::pair<int, int>> pairs;
    for (const std::string& w : split(text.substr(6), '|')) {
      if (w.size() != 2) throw ArgumentError("avoid factors must have length 2");
      pairs.emplace_back(w[0] - '0', w[1] - '0');
    }
    return SetSpec::avoid(std::move(pairs));
  }
  if (text.rfind("union:", 0) == 0) {
    std::vector<SetSpec> parts;
    for (const std::string& p : split(text.substr(6), ';')) parts.push_back(parse_set(p));
    return SetSpec::unite(std::move(parts));
  }
  throw ArgumentError("unknown set descriptor: " + text);
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const std::string& p : split(s, ',')) out.push_back(std::stod(p));
  return out;
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& s) {
  auto dots = s.find("..");
  if (dots == std::string::npos) throw ArgumentError("range must look like a..b");
  return {std::stoll(s.substr(0, dots)), std::stoll(s.substr(dots + 2))};
}

}  // namespace

ParseResult parse_config(const std::string& text) {
  ParseResult res;
  RunConfig cfg;
  std::string section;
  bool saw_task = false, saw_seed = false;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;

  auto err = [&](int line, const std::string& msg) {
    res.errors.push_back(ParseIssue{line, msg});
  };

  while (std::getline(is, raw)) {
    ++lineno;
    std::string line = trim(raw);
    auto hash = line.find('#');
    if (hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        err(lineno, "unterminated section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "run" && section != "system" && section != "set" &&
          section != "schedule" && section != "measure" && section != "verify")
        err(lineno, "unknown section [" + section + "]");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      err(lineno, "expected key = value");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.empty()) {
      err(lineno, "empty value for key '" + key + "'");
      continue;
    }
    try {
      if (section == "run") {
        if (key == "task") {
          auto t = task_from_name(value);
          if (!t) {
            err(lineno, "unknown task '" + value + "'");
          } else {
            cfg.task = *t;
            saw_task = true;
          }
        } else if (key == "seed") {
          cfg.seed = std::stoull(value);
          saw_seed = true;
        } else if (key == "mode") {
          if (value == "greedy") cfg.mode = CoverMode::Greedy;
          else if (value == "exact") cfg.mode = CoverMode::Exact;
          else err(lineno, "mode must be greedy or exact");
        } else if (key == "radius") {
          if (value == "neutralized") cfg.radius = RadiusMode::Neutralized;
          else if (value == "fixed") cfg.radius = RadiusMode::Fixed;
          else err(lineno, "radius must be neutralized or fixed");
        } else if (key == "out") {
          cfg.out_path = value;
        } else if (key == "csv") {
          cfg.csv_path = value;
        } else if (key == "threads") {
          cfg.threads = std::stoi(value);
          if (cfg.threads < 1) err(lineno, "threads must be >= 1");
        } else {
          err(lineno, "unknown key '" + key + "' in [run]");
        }
      } else if (section == "system") {
        if (key == "ref") cfg.system_ref = value;
        else if (key == "map") cfg.inline_map = value;
        else if (key == "space") cfg.inline_space = value;
        else err(lineno, "unknown key '" + key + "' in [system]");
      } else if (section == "set") {
        if (key == "z") cfg.z = parse_set(value);
        else if (key == "ground") cfg.ground = std::stoll(value);
        else err(lineno, "unknown key '" + key + "' in [set]");
      } else if (section == "schedule") {
        if (key == "epsilons") {
          cfg.epsilons = parse_doubles(value);
        } else if (key == "n") {
          auto [a, b] = parse_range(value);
          if (a < 1 || b < a) {
            err(lineno, "n schedule needs 1 <= a <= b");
          } else {
            cfg.n_schedule.clear();
            for (std::int64_t n = a; n <= b; ++n) cfg.n_schedule.push_back(n);
          }
        } else if (key == "n_max") {
          cfg.n_max = std::stoll(value);
        } else if (key == "alpha") {
          auto parts = parse_doubles(value);
          if (parts.size() != 2 || !(parts[0] < parts[1]))
            err(lineno, "alpha bracket needs lo,hi with lo < hi");
          else {
            cfg.alpha_lo = parts[0];
            cfg.alpha_hi = parts[1];
          }
        } else if (key == "deltas") {
          cfg.deltas = parse_doubles(value);
        } else if (key == "window") {
          cfg.window = parse_range(value);
        } else {
          err(lineno, "unknown key '" + key + "' in [schedule]");
        }
      } else if (section == "measure") {
        if (key == "count") cfg.measure_count = std::stoll(value);
        else if (key == "init") {
          if (value == "grid") cfg.measure_init = SamplerConfig::Init::Grid;
          else if (value == "random") cfg.measure_init = SamplerConfig::Init::Random;
          else err(lineno, "measure init must be grid or random");
        } else if (key == "push") {
          if (value == "none") cfg.measure_push = false;
          else if (value == "random") cfg.measure_push = true;
          else err(lineno, "measure push must be none or random");
        } else if (key == "file") {
          cfg.measure_file = value;
        } else if (key == "emit") {
          cfg.measure_out = value;
        } else {
          err(lineno, "unknown key '" + key + "' in [measure]");
        }
      } else if (section == "verify") {
        if (key == "instances") cfg.verify_instances = std::stoll(value);
        else if (key == "families") cfg.verify_families = std::stoll(value);
        else err(lineno, "unknown key '" + key + "' in [verify]");
      } else {
        err(lineno, "key outside any section");
      }
    } catch (const std::exception& e) {
      err(lineno, std::string("bad value for '") + key + "': " + e.what());
    }
  }

  if (!saw_task) err(0, "missing required key: [run] task");
  if (res.errors.empty()) {
    // Task-level validation; all gaps reported at once.
    auto need = [&](bool ok, const std::string& what) {
      if (!ok) err(0, "task " + task_name(cfg.task) + " requires " + what);
    };
    bool needs_system = cfg.task == Task::EstimateNB || cfg.task == Task::EstimateNWB ||
                        cfg.task == Task::EstimateKatok || cfg.task == Task::EstimateBK;
    if (needs_system)
      need(!cfg.system_ref.empty() || (cfg.inline_map && cfg.inline_space),
           "[system] ref or map+space");
    if (cfg.task != Task::ZooList) need(saw_seed, "[run] seed (sampling occurs)");
    switch (cfg.task) {
      case Task::EstimateNB:
      case Task::EstimateNWB:
        need(!cfg.epsilons.empty(), "[schedule] epsilons");
        need(!cfg.n_schedule.empty(), "[schedule] n");
        need(cfg.n_max >= 1, "[schedule] n_max");
        break;
      case Task::EstimateKatok:
        need(!cfg.epsilons.empty(), "[schedule] epsilons");
        need(!cfg.n_schedule.empty(), "[schedule] n");
        need(cfg.n_max >= 1, "[schedule] n_max");
        need(!cfg.deltas.empty(), "[schedule] deltas");
        need(cfg.measure_count >= 1 || !cfg.measure_file.empty(),
             "[measure] count or file");
        break;
      case Task::EstimateBK:
        need(!cfg.epsilons.empty(), "[schedule] epsilons");
        need(cfg.window.second > cfg.window.first && cfg.window.first >= 1,
             "[schedule] window a..b with 1 <= a < b");
        need(cfg.measure_count >= 1 || !cfg.measure_file.empty(),
             "[measure] count or file");
        break;
      case Task::VerifySandwich:
      case Task::VerifyFrostman:
        need(cfg.verify_instances >= 1, "[verify] instances >= 1");
        break;
      default:
        break;
    }
    if (!cfg.epsilons.empty()) {
      for (std::size_t i = 0; i + 1 < cfg.epsilons.size(); ++i) {
        if (!(cfg.epsilons[i] > cfg.epsilons[i + 1]))
          err(0, "epsilons must be strictly decreasing");
      }
    }
    if (!cfg.deltas.empty()) {
      for (std::size_t i = 0; i + 1 < cfg.deltas.size(); ++i) {
        if (!(cfg.deltas[i] > cfg.deltas[i + 1])) err(0, "deltas must be strictly decreasing");
      }
    }
    if (!cfg.n_schedule.empty() && cfg.n_max >= 1 && cfg.n_schedule.back() > cfg.n_max)
      err(0, "n schedule exceeds n_max");
  }

  if (res.errors.empty()) res.config = std::move(cfg);
  return res;
}

namespace {

// Shortest representation that round-trips the double exactly.
std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string RunConfig::normalized() const {
  std::ostringstream os;
  os << "[run]\n";
  os << "task = " << task_name(task) << "\n";
  os << "seed = " << seed << "\n";
  // Output paths are deliberately not part of the canonical form: records
  // must be re-runnable from the echo, and reruns into different files must
  // stay byte-identical.
  os << "mode = " << (mode == CoverMode::Greedy ? "greedy" : "exact") << "\n";
  os << "radius = " << (radius == RadiusMode::Neutralized ? "neutralized" : "fixed") << "\n";
  os << "threads = " << threads << "\n";
  os << "[system]\n";
  if (!system_ref.empty()) os << "ref = " << system_ref << "\n";
  if (inline_map) os << "map = " << *inline_map << "\n";
  if (inline_space) os << "space = " << *inline_space << "\n";
  os << "[set]\n";
  os << "z = " << z.describe() << "\n";
  os << "ground = " << ground << "\n";
  os << "[schedule]\n";
  if (!epsilons.empty()) {
    os << "epsilons = ";
    for (std::size_t i = 0; i < epsilons.size(); ++i) os << (i ? "," : "") << fmt(epsilons[i]);
    os << "\n";
  }
  if (!n_schedule.empty())
    os << "n = " << n_schedule.front() << ".." << n_schedule.back() << "\n";
  if (n_max >= 1) os << "n_max = " << n_max << "\n";
  os << "alpha = " << fmt(alpha_lo) << "," << fmt(alpha_hi) << "\n";
  if (!deltas.empty()) {
    os << "deltas = ";
    for (std::size_t i = 0; i < deltas.size(); ++i) os << (i ? "," : "") << fmt(deltas[i]);
    os << "\n";
  }
  if (window.second > 0) os << "window = " << window.first << ".." << window.second << "\n";
  if (measure_count >= 1 || !measure_file.empty()) {
    os << "[measure]\n";
    if (!measure_file.empty()) {
      os << "file = " << measure_file << "\n";
    } else {
      os << "count = " << measure_count << "\n";
      os << "init = " << (measure_init == SamplerConfig::Init::Grid ? "grid" : "random") << "\n";
      os << "push = " << (measure_push ? "random" : "none") << "\n";
    }
  }
  return os.str();
}

}  // namespace nbe
